//! Faithful density matrices, thermal states and the Umegaki divergence.

use nalgebra::{Complex, DVector};

use crate::error::{Error, Result};
use crate::matfun::{self, HermitianMatrix, SpectralDecomposition};
use crate::random::{floored_simplex, haar_unitary, stream_rng};
use crate::scalar::{cplx, lit, to_f64, tolerance, trace_of_product, CMatrix, Real};

/// Eigenvalues below this are rejected at construction.
pub const FAITHFUL_FLOOR: f64 = 1e-10;
/// Allowed deviation of the trace from one.
pub const TRACE_TOL: f64 = 1e-11;

/// Strictly positive, unit-trace Hermitian matrix with its cached spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T: Real> {
    matrix: HermitianMatrix<T>,
    spectral: SpectralDecomposition<T>,
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(matrix: HermitianMatrix<T>) -> Result<Self> {
        let tr = matrix.trace();
        if (tr - T::one()).abs() > tolerance::<T>(TRACE_TOL, 256.0) {
            return Err(Error::InvalidTrace(to_f64(tr)));
        }
        let spectral = matfun::spectral(&matrix);
        Self::check_floor(&spectral)?;
        Ok(Self { matrix, spectral })
    }

    /// Builds `ρ = U diag(p) U†` from a spectrum that is already normalized.
    pub(crate) fn from_spectral(spectral: SpectralDecomposition<T>) -> Result<Self> {
        Self::check_floor(&spectral)?;
        let sum = spectral.eigenvalues().iter().fold(T::zero(), |a, &b| a + b);
        if (sum - T::one()).abs() > tolerance::<T>(TRACE_TOL, 256.0) {
            return Err(Error::InvalidTrace(to_f64(sum)));
        }
        let matrix = spectral.reconstruct();
        Ok(Self { matrix, spectral })
    }

    /// Normalizes a positive definite Hermitian matrix by its trace.
    pub fn normalized(m: &CMatrix<T>) -> Result<Self> {
        let h = HermitianMatrix::from_symmetrized(m);
        let tr = h.trace();
        if !(tr > T::zero()) || !tr.is_finite() {
            return Err(Error::InvalidTrace(to_f64(tr)));
        }
        Self::new(h.scale(T::one() / tr))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let p = lit::<T>(1.0 / dim as f64);
        Self::new(HermitianMatrix::identity(dim).scale(p)).expect("I/N is a faithful state")
    }

    pub fn diagonal(p: &[T]) -> Result<Self> {
        Self::new(HermitianMatrix::diagonal(p))
    }

    fn check_floor(s: &SpectralDecomposition<T>) -> Result<()> {
        let min = s.min_eigenvalue();
        if !(min >= tolerance::<T>(FAITHFUL_FLOOR, 1e3)) {
            return Err(Error::NotStrictlyPositive(to_f64(min)));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &HermitianMatrix<T> {
        &self.matrix
    }

    pub fn spectral(&self) -> &SpectralDecomposition<T> {
        &self.spectral
    }

    pub fn eigenvalues(&self) -> &DVector<T> {
        self.spectral.eigenvalues()
    }

    pub fn log(&self) -> HermitianMatrix<T> {
        matfun::log_spectral(&self.spectral).expect("faithful spectrum is positive")
    }

    pub fn pow(&self, power: T) -> HermitianMatrix<T> {
        matfun::pow_spectral(&self.spectral, power).expect("faithful spectrum is positive")
    }

    pub fn inverse(&self) -> HermitianMatrix<T> {
        self.pow(-T::one())
    }
}

/// Hamiltonian: any Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian<T: Real>(pub HermitianMatrix<T>);

impl<T: Real> Hamiltonian<T> {
    pub fn new(matrix: HermitianMatrix<T>) -> Self {
        Self(matrix)
    }

    pub fn matrix(&self) -> &HermitianMatrix<T> {
        &self.0
    }
}

/// Gibbs state `e^{-βH}/Tr e^{-βH}`, evaluated with the exponent shifted to be non-positive.
pub fn thermal_state<T: Real>(h: &Hamiltonian<T>, beta: T) -> Result<DensityMatrix<T>> {
    let s = matfun::spectral(h.matrix());
    let exponents = s.eigenvalues().map(|e| -beta * e);
    let top = exponents.iter().fold(exponents[0], |a, &b| a.max(b));
    let weights = exponents.map(|x| (x - top).exp());
    let z = weights.iter().fold(T::zero(), |a, &b| a + b);
    DensityMatrix::from_spectral(s.with_eigenvalues(weights / z))
}

/// Log partition function `ln Tr e^{-βH}`.
pub fn log_partition<T: Real>(h: &Hamiltonian<T>, beta: T) -> T {
    let s = matfun::spectral(h.matrix());
    log_trace_exp(&s.eigenvalues().map(|e| -beta * e))
}

/// `ln Σ e^{x_i}`, shifted by the maximum.
pub(crate) fn log_trace_exp<T: Real>(x: &DVector<T>) -> T {
    let top = x.iter().fold(x[0], |a, &b| a.max(b));
    let sum = x.iter().fold(T::zero(), |a, &v| a + (v - top).exp());
    top + sum.ln()
}

/// `ω_ρ(A) = Tr ρA`, real part (exactly real for Hermitian `A`).
pub fn expectation<T: Real>(rho: &DensityMatrix<T>, a: &HermitianMatrix<T>) -> T {
    trace_of_product(rho.matrix().as_matrix(), a.as_matrix()).re
}

/// `Tr ρA` for a general complex `A`.
pub fn expectation_complex<T: Real>(rho: &DensityMatrix<T>, a: &CMatrix<T>) -> Complex<T> {
    trace_of_product(rho.matrix().as_matrix(), a)
}

/// Umegaki relative entropy `D(σ‖τ) = Tr σ(log σ - log τ)`.
pub fn umegaki_divergence<T: Real>(sigma: &DensityMatrix<T>, tau: &DensityMatrix<T>) -> T {
    let entropy_term = sigma
        .eigenvalues()
        .iter()
        .fold(T::zero(), |acc, &p| acc + p * p.ln());
    let cross = trace_of_product(sigma.matrix().as_matrix(), tau.log().as_matrix()).re;
    entropy_term - cross
}

/// Random faithful state: Haar unitary conjugating a Dirichlet spectrum mixed with `I/N`
/// so that every eigenvalue is at least `min_eig`.
pub fn random_faithful<T: Real>(n: usize, seed: u64, min_eig: f64) -> Result<DensityMatrix<T>> {
    if n == 0 {
        return Err(Error::Infeasible("dimension must be positive".into()));
    }
    if !(min_eig > 0.0 && min_eig * (n as f64) < 1.0) {
        return Err(Error::Infeasible(format!(
            "min_eig {min_eig} must lie in (0, 1/{n})"
        )));
    }
    let mut rng = stream_rng(seed, 0x5eed_0000 + n as u64);
    let p = floored_simplex(&mut rng, n, min_eig);
    let u = haar_unitary::<T, _>(&mut rng, n);
    let d = CMatrix::from_diagonal(&p.map(|x| cplx(lit::<T>(x))));
    let m = &u * d * u.adjoint();
    DensityMatrix::normalized(&m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{random_hermitian, seeded};

    #[test]
    fn rejects_bad_states() {
        let bad_trace = HermitianMatrix::diagonal(&[0.5, 0.6]);
        assert!(matches!(DensityMatrix::new(bad_trace), Err(Error::InvalidTrace(_))));
        let singular = HermitianMatrix::diagonal(&[1.0, 0.0]);
        assert!(matches!(DensityMatrix::new(singular), Err(Error::NotStrictlyPositive(_))));
        let tiny = HermitianMatrix::diagonal(&[1.0 - 1e-11, 1e-11]);
        assert!(DensityMatrix::new(tiny).is_err());
    }

    #[test]
    fn thermal_examples() {
        let zero = Hamiltonian(HermitianMatrix::<f64>::zeros(2));
        let rho = thermal_state(&zero, 2.7).unwrap();
        assert!((rho.matrix().as_matrix() - CMatrix::identity(2, 2) * cplx(0.5)).norm() < 1e-15);

        let h = Hamiltonian(HermitianMatrix::diagonal(&[0.0, 1.0]));
        let rho = thermal_state(&h, 3f64.ln()).unwrap();
        let m = rho.matrix().as_matrix();
        assert!((m[(0, 0)].re - 0.75).abs() < 1e-15);
        assert!((m[(1, 1)].re - 0.25).abs() < 1e-15);

        let mut rng = seeded(4);
        let h = Hamiltonian(random_hermitian(&mut rng, 4));
        let rho = thermal_state(&h, 0.0).unwrap();
        assert!((rho.matrix().as_matrix() - CMatrix::identity(4, 4) * cplx(0.25)).norm() < 1e-14);
    }

    #[test]
    fn thermal_matches_boltzmann_weights() {
        let mut rng = seeded(8);
        for n in 2..=5 {
            let h = Hamiltonian(random_hermitian::<f64>(&mut rng, n));
            let a = random_hermitian(&mut rng, n);
            let beta = 0.8;
            let rho = thermal_state(&h, beta).unwrap();
            let e = matfun::exp_spectral(&matfun::spectral(&h.0.scale(-beta))).unwrap();
            let z = e.trace();
            let lhs = expectation(&rho, &a) * z;
            let rhs = trace_of_product(e.as_matrix(), a.as_matrix()).re;
            assert!((lhs - rhs).abs() < 1e-10);
            assert!((log_partition(&h, beta) - z.ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn thermal_survives_large_beta_shift() {
        let h = Hamiltonian(HermitianMatrix::diagonal(&[1000.0, 1000.5]));
        let rho = thermal_state(&h, 2.0).unwrap();
        let expect = 1.0 / (1.0 + (-1.0f64).exp());
        assert!((rho.eigenvalues()[1] - expect).abs() < 1e-14);
    }

    #[test]
    fn expectation_examples() {
        let rho = random_faithful::<f64>(3, 1, 0.05).unwrap();
        assert!((expectation(&rho, &HermitianMatrix::identity(3)) - 1.0).abs() < 1e-14);
        let c = HermitianMatrix::identity(3).scale(-2.5);
        assert!((expectation(&rho, &c) + 2.5).abs() < 1e-14);
        let q = DensityMatrix::diagonal(&[0.75f64, 0.25]).unwrap();
        let z = HermitianMatrix::diagonal(&[1.0f64, -1.0]);
        assert!((expectation(&q, &z) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn divergence_examples() {
        let rho = random_faithful::<f64>(4, 2, 0.01).unwrap();
        assert!(umegaki_divergence(&rho, &rho).abs() < 1e-14);
        let s = DensityMatrix::diagonal(&[0.5, 0.5]).unwrap();
        let t = DensityMatrix::diagonal(&[0.75, 0.25]).unwrap();
        let kl = 0.5 * (0.5f64 / 0.75).ln() + 0.5 * (0.5f64 / 0.25).ln();
        assert!((umegaki_divergence(&s, &t) - kl).abs() < 1e-15);
        assert!((kl - 0.143_841_036_225_890_2).abs() < 1e-15);
    }

    #[test]
    fn divergence_nonnegative_sweep() {
        for k in 0..100u64 {
            let n = 2 + (k % 5) as usize;
            let s = random_faithful::<f64>(n, 1000 + k, 0.01 / n as f64).unwrap();
            let t = random_faithful::<f64>(n, 5000 + k, 0.01 / n as f64).unwrap();
            let d = umegaki_divergence(&s, &t);
            assert!(d >= -1e-14, "D = {d}");
            assert!(d + umegaki_divergence(&t, &s) > 1e-8);
        }
    }

    #[test]
    fn random_faithful_contract() {
        let rho = random_faithful::<f64>(2, 17, 0.1).unwrap();
        let p = rho.eigenvalues();
        assert!(p[0] >= 0.1 - 1e-14 && p[1] <= 0.9 + 1e-14);
        assert!((rho.matrix().trace() - 1.0).abs() < 1e-14);
        let again = random_faithful::<f64>(2, 17, 0.1).unwrap();
        assert_eq!(rho, again);
        for seed in 0..100 {
            let r = random_faithful::<f64>(4, seed, 0.01).unwrap();
            assert!(r.eigenvalues()[0] >= 0.01 - 1e-13);
            assert!((r.matrix().trace() - 1.0).abs() < 1e-11);
        }
        assert!(random_faithful::<f64>(4, 0, 0.25).is_err());
        assert!(random_faithful::<f64>(4, 0, 0.0).is_err());
    }
}
