//! Information geometry of faithful states on the matrix algebra of an
//! N-dimensional Hilbert space.
//!
//! Every faithful state is a strictly positive density matrix ρ. Its GNS
//! representation is realized concretely on N×N matrices with the
//! Hilbert–Schmidt inner product: the algebra acts by left multiplication,
//! the commutant by right multiplication, and the cyclic vector is `ρ^{1/2}`,
//! all written in the eigenbasis of ρ. On top of that model the crate builds
//!
//! - the state charts ξ_ρ (exponential of the reconstruction operators X) and χ_ρ
//!   (averaged conjugation), tangent functionals and the operator G_ρ,
//! - the Bogoliubov (Kubo–Mori) metric in three independent formulations,
//! - mixture and exponential geodesics,
//! - the modular operator, modular flow and KMS boundary values.
//!
//! Numerics are generic over the real scalar; the `*64` aliases below fix
//! double precision, which is what the tolerances in the tests assume.

pub mod charts;
pub mod error;
pub mod geometry;
pub mod gns;
pub mod matfun;
pub mod modular;
pub mod random;
pub mod scalar;
pub mod states;

#[cfg(test)]
pub(crate) mod testing;

pub use error::{Error, Result};
pub use scalar::{CMatrix, Real};

pub use charts::{ChartPoint, MetricSuperoperator, TangentFunctional};
pub use geometry::{ExponentialArc, InterpolationFamily};
pub use gns::{CommutantOperator, GnsSpace, GnsVector};
pub use matfun::{HermitianMatrix, SpectralDecomposition};
pub use modular::{ModularConjugation, ModularOperator, TomitaOperator};
pub use states::{DensityMatrix, Hamiltonian};

pub type HermitianMatrix64 = HermitianMatrix<f64>;
pub type DensityMatrix64 = DensityMatrix<f64>;
pub type Hamiltonian64 = Hamiltonian<f64>;
pub type GnsSpace64 = GnsSpace<f64>;
pub type GnsVector64 = GnsVector<f64>;
pub type ChartPoint64 = ChartPoint<f64>;
pub type ExponentialArc64 = ExponentialArc<f64>;

pub type HermitianMatrix32 = HermitianMatrix<f32>;
pub type DensityMatrix32 = DensityMatrix<f32>;
pub type GnsSpace32 = GnsSpace<f32>;
