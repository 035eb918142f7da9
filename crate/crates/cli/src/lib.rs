//! Plumbing behind the `qgeom` binary: matrix files, number formatting and
//! the verification suite.

pub mod format;
pub mod matrix_file;
pub mod verify;
