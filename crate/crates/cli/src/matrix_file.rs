//! JSON matrix files: `{"dim": N, "kind": "...", "re": [[..]..], "im": [[..]..]}`.
//!
//! Floats are written in shortest round-trip form, which reloads bit-for-bit.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use nalgebra::Complex;
use qgeom::{CMatrix, DensityMatrix, HermitianMatrix};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Hermitian,
    Density,
    Hamiltonian,
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Kind::Hermitian => "hermitian",
            Kind::Density => "density",
            Kind::Hamiltonian => "hamiltonian",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub dim: usize,
    pub kind: Kind,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

/// A file after its kind-specific invariants were checked.
#[derive(Debug, Clone)]
pub enum Loaded {
    Hermitian(HermitianMatrix<f64>),
    Density(DensityMatrix<f64>),
    Hamiltonian(HermitianMatrix<f64>),
}

impl MatrixFile {
    pub fn from_matrix(kind: Kind, m: &CMatrix<f64>) -> Self {
        let n = m.nrows();
        let rows = |f: fn(&Complex<f64>) -> f64| (0..n).map(|i| (0..n).map(|j| f(&m[(i, j)])).collect()).collect();
        Self {
            dim: n,
            kind,
            re: rows(|z| z.re),
            im: rows(|z| z.im),
        }
    }

    pub fn from_density(rho: &DensityMatrix<f64>) -> Self {
        Self::from_matrix(Kind::Density, rho.matrix().as_matrix())
    }

    fn check_shape(&self) -> Result<()> {
        let n = self.dim;
        if n == 0 {
            bail!("shape mismatch: dim must be positive");
        }
        for (name, rows) in [("re", &self.re), ("im", &self.im)] {
            if rows.len() != n {
                bail!("shape mismatch: `{name}` has {} rows, expected {n}", rows.len());
            }
            if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
                bail!("shape mismatch: `{name}` row {i} has {} entries, expected {n}", row.len());
            }
        }
        Ok(())
    }

    pub fn to_matrix(&self) -> Result<CMatrix<f64>> {
        self.check_shape()?;
        Ok(CMatrix::from_fn(self.dim, self.dim, |i, j| Complex::new(self.re[i][j], self.im[i][j])))
    }

    /// Validates the arrays and the invariants of `kind`.
    pub fn validate(&self) -> Result<Loaded> {
        let m = self.to_matrix()?;
        let h = HermitianMatrix::new(m).with_context(|| format!("invalid {} matrix", self.kind))?;
        Ok(match self.kind {
            Kind::Hermitian => Loaded::Hermitian(h),
            Kind::Hamiltonian => Loaded::Hamiltonian(h),
            Kind::Density => Loaded::Density(DensityMatrix::new(h).context("invalid density matrix")?),
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("matrix files always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

pub fn read(path: &Path) -> Result<MatrixFile> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    MatrixFile::from_json(&text).with_context(|| format!("malformed matrix file {}", path.display()))
}

pub fn load_density(path: &Path) -> Result<DensityMatrix<f64>> {
    let file = read(path)?;
    if file.kind != Kind::Density {
        bail!("{}: expected kind density, found {}", path.display(), file.kind);
    }
    match file.validate().with_context(|| path.display().to_string())? {
        Loaded::Density(rho) => Ok(rho),
        _ => unreachable!("kind checked above"),
    }
}

/// Hamiltonians may come as kind `hamiltonian` or `hermitian`.
pub fn load_hamiltonian(path: &Path) -> Result<HermitianMatrix<f64>> {
    let file = read(path)?;
    match file.validate().with_context(|| path.display().to_string())? {
        Loaded::Hamiltonian(h) | Loaded::Hermitian(h) => Ok(h),
        Loaded::Density(_) => bail!("{}: expected kind hamiltonian, found density", path.display()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn file(kind: &str, re: &str, im: &str, dim: usize) -> String {
        format!(r#"{{"dim": {dim}, "kind": "{kind}", "re": {re}, "im": {im}}}"#)
    }

    #[test]
    fn parses_and_validates_density() {
        let f = MatrixFile::from_json(&file("density", "[[0.75, 0], [0, 0.25]]", "[[0, 0], [0, 0]]", 2)).unwrap();
        assert!(matches!(f.validate().unwrap(), Loaded::Density(_)));
    }

    #[test]
    fn rejects_shape_mismatches() {
        let bad_rows = MatrixFile::from_json(&file("hermitian", "[[1, 0]]", "[[0, 0], [0, 0]]", 2)).unwrap();
        assert!(format!("{:#}", bad_rows.validate().unwrap_err()).contains("shape mismatch"));
        let ragged = MatrixFile::from_json(&file("hermitian", "[[1, 0], [0]]", "[[0, 0], [0, 0]]", 2)).unwrap();
        assert!(ragged.validate().is_err());
        assert!(MatrixFile::from_json(&file("other", "[[1]]", "[[0]]", 1)).is_err());
    }

    #[test]
    fn kind_invariants() {
        let nonherm = MatrixFile::from_json(&file("hermitian", "[[1, 2], [0, 1]]", "[[0, 0], [0, 0]]", 2)).unwrap();
        assert!(format!("{:#}", nonherm.validate().unwrap_err()).contains("Hermitian"));
        let trace = MatrixFile::from_json(&file("density", "[[0.5, 0], [0, 0.6]]", "[[0, 0], [0, 0]]", 2)).unwrap();
        assert!(format!("{:#}", trace.validate().unwrap_err()).contains("trace"));
        let singular = MatrixFile::from_json(&file("density", "[[1, 0], [0, 0]]", "[[0, 0], [0, 0]]", 2)).unwrap();
        assert!(format!("{:#}", singular.validate().unwrap_err()).contains("density matrix not strictly positive"));
        let ham = MatrixFile::from_json(&file("hamiltonian", "[[1, 0], [0, -1]]", "[[0, 0.5], [-0.5, 0]]", 2)).unwrap();
        assert!(matches!(ham.validate().unwrap(), Loaded::Hamiltonian(_)));
    }

    #[test]
    fn round_trip_is_exact() {
        let rho = qgeom::states::random_faithful::<f64>(4, 3, 0.01).unwrap();
        let f = MatrixFile::from_density(&rho);
        let back = MatrixFile::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
        let m = back.to_matrix().unwrap();
        let diff = (m - rho.matrix().as_matrix()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(diff < 1e-15);
    }
}
