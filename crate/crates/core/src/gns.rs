//! Explicit GNS representation induced by a faithful state.
//!
//! With ρ = Σ p_n |ψ_n⟩⟨ψ_n| the GNS space is H⊗H, which we store as N×N
//! coefficient matrices `M` (vector Σ M_{nm} ψ_n⊗ψ_m) with the Hilbert–Schmidt
//! inner product `(M, M') = Tr(M M'†)`. In these coordinates
//!
//! - `π(A) M = Ã M` with `Ã = U†AU` (the algebra acts as `A⊗I`),
//! - the commutant element `I⊗B` acts as `M ↦ M Bᵀ`,
//! - `Ω_ρ = diag(√p_n)`.

use nalgebra::{Complex, DVector};

use crate::matfun::{self, HermitianMatrix, SpectralDecomposition};
use crate::scalar::{cplx, symmetrize, tolerance, CMatrix, Real};
use crate::states::DensityMatrix;

/// GNS space of a faithful reference state, with its eigenbasis cached.
#[derive(Debug, Clone, PartialEq)]
pub struct GnsSpace<T: Real> {
    reference: DensityMatrix<T>,
    sqrt_p: DVector<T>,
}

/// Vector of the GNS space in eigenbasis coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct GnsVector<T: Real> {
    coords: CMatrix<T>,
}

/// Element `I⊗B` of the commutant, stored through `B` (ρ-eigenbasis).
#[derive(Debug, Clone, PartialEq)]
pub struct CommutantOperator<T: Real> {
    b: CMatrix<T>,
}

/// Outcome of the cyclic/separating check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CyclicReport {
    /// Numerical rank of the vectors π(E_{n,m})Ω_ρ.
    pub rank: usize,
    /// N² for an N-dimensional algebra.
    pub expected_rank: usize,
    /// Smallest singular value of `A ↦ π(A)Ω_ρ`.
    pub min_singular_value: f64,
    pub passed: bool,
}

impl<T: Real> GnsVector<T> {
    pub fn new(coords: CMatrix<T>) -> Self {
        Self { coords }
    }

    pub fn coords(&self) -> &CMatrix<T> {
        &self.coords
    }

    pub fn into_coords(self) -> CMatrix<T> {
        self.coords
    }

    /// `(self, other) = Tr(M M'†)`, linear in the first slot.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.coords
            .iter()
            .zip(other.coords.iter())
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a * b.conj())
    }

    pub fn norm(&self) -> T {
        crate::scalar::hs_norm(&self.coords)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(&self.coords - &other.coords)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(&self.coords + &other.coords)
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        Self::new(self.coords.map(|z| z * c))
    }
}

impl<T: Real> CommutantOperator<T> {
    pub fn new(b: CMatrix<T>) -> Self {
        Self { b }
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(CMatrix::identity(dim, dim))
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(CMatrix::zeros(dim, dim))
    }

    /// The matrix `B` of `I⊗B`.
    pub fn b(&self) -> &CMatrix<T> {
        &self.b
    }

    /// `Bᵀ`, the matrix that multiplies vectors from the right.
    pub fn right_factor(&self) -> CMatrix<T> {
        self.b.transpose()
    }

    /// Builds the operator whose right factor is `c`, i.e. `B = cᵀ`.
    pub fn from_right_factor(c: &CMatrix<T>) -> Self {
        Self::new(c.transpose())
    }

    pub fn dim(&self) -> usize {
        self.b.nrows()
    }

    /// Self-adjoint on the GNS space iff `B` is Hermitian.
    pub fn is_self_adjoint(&self) -> bool {
        let scale = crate::scalar::max_abs(&self.b).max(T::one());
        crate::scalar::max_abs(&(&self.b - self.b.adjoint()))
            <= tolerance::<T>(1e-12, 64.0) * scale
    }

    /// Operator norm of `B` (equal to the norm of `I⊗B`).
    pub fn operator_norm(&self) -> T {
        crate::scalar::operator_norm(&self.b)
    }

    /// Spectral function of a self-adjoint commutant element, `f(I⊗B) = I⊗f(B)`.
    pub fn map_spectrum<F: Fn(T) -> T>(&self, f: F) -> crate::Result<Self> {
        let c = HermitianMatrix::from_symmetrized(&self.right_factor());
        let fc = matfun::apply_function(&matfun::spectral(&c), f)?;
        Ok(Self::from_right_factor(fc.as_matrix()))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(&self.b + &other.b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(&self.b - &other.b)
    }

    pub fn scale(&self, c: T) -> Self {
        Self::new(self.b.map(|z| z * c))
    }
}

impl<T: Real> GnsSpace<T> {
    pub fn new(reference: DensityMatrix<T>) -> Self {
        let sqrt_p = reference.eigenvalues().map(|p| p.sqrt());
        Self { reference, sqrt_p }
    }

    pub fn dim(&self) -> usize {
        self.reference.dim()
    }

    pub fn reference(&self) -> &DensityMatrix<T> {
        &self.reference
    }

    pub fn basis(&self) -> &SpectralDecomposition<T> {
        self.reference.spectral()
    }

    /// Eigenvalues p_n of the reference state, ascending.
    pub fn weights(&self) -> &DVector<T> {
        self.reference.eigenvalues()
    }

    pub(crate) fn sqrt_weights(&self) -> &DVector<T> {
        &self.sqrt_p
    }

    /// `U† A U`.
    pub fn to_eigenbasis(&self, a: &CMatrix<T>) -> CMatrix<T> {
        self.basis().to_eigenbasis(a)
    }

    /// `U A U†`.
    pub fn from_eigenbasis(&self, a: &CMatrix<T>) -> CMatrix<T> {
        self.basis().from_eigenbasis(a)
    }

    /// `diag(√p)` as a matrix.
    pub(crate) fn sqrt_diag(&self) -> CMatrix<T> {
        CMatrix::from_diagonal(&self.sqrt_p.map(cplx))
    }

    /// `diag(1/√p)` as a matrix.
    pub(crate) fn inv_sqrt_diag(&self) -> CMatrix<T> {
        CMatrix::from_diagonal(&self.sqrt_p.map(|s| cplx(T::one() / s)))
    }

    /// Ω_ρ = Σ √p_n ψ_n⊗ψ_n, i.e. `diag(√p)`.
    pub fn omega_vector(&self) -> GnsVector<T> {
        GnsVector::new(self.sqrt_diag())
    }

    /// `π(A)v` for `A` given in the original basis.
    pub fn pi_apply(&self, a: &CMatrix<T>, v: &GnsVector<T>) -> GnsVector<T> {
        self.pi_apply_eigen(&self.to_eigenbasis(a), v)
    }

    /// `π(A)v` for `A` already in eigenbasis coordinates.
    pub fn pi_apply_eigen(&self, a_eigen: &CMatrix<T>, v: &GnsVector<T>) -> GnsVector<T> {
        GnsVector::new(a_eigen * &v.coords)
    }

    /// `K v = M Bᵀ`.
    pub fn commutant_apply(&self, k: &CommutantOperator<T>, v: &GnsVector<T>) -> GnsVector<T> {
        GnsVector::new(&v.coords * k.right_factor())
    }

    /// Vector-state expectation `(π(A)v, v)`.
    pub fn vector_expectation(&self, a: &CMatrix<T>, v: &GnsVector<T>) -> Complex<T> {
        self.pi_apply(a, v).inner(v)
    }

    /// `A'` with `A'ψ_n = Σ_m (A*ψ_m, ψ_n) ψ_m`: the entrywise conjugate of `A`
    /// in the eigenbasis, returned in the original basis.
    pub fn prime_map(&self, a: &CMatrix<T>) -> CMatrix<T> {
        let at = self.to_eigenbasis(a);
        self.from_eigenbasis(&at.map(|z| z.conj()))
    }

    /// The unique positive `X = I⊗B` in the commutant with
    /// `Tr σA = (π(A) X^{1/2}Ω_ρ, X^{1/2}Ω_ρ)`; its right factor is `ρ̃^{-1/2} σ̃ ρ̃^{-1/2}`.
    pub fn represent_state(&self, sigma: &DensityMatrix<T>) -> CommutantOperator<T> {
        let inv = self.inv_sqrt_diag();
        let st = self.to_eigenbasis(sigma.matrix().as_matrix());
        CommutantOperator::from_right_factor(&symmetrize(&(&inv * st * &inv)))
    }

    /// `(KΩ_ρ, Ω_ρ) = Tr(ρ̃ Bᵀ) = Σ p_n B_nn`.
    pub fn centering(&self, k: &CommutantOperator<T>) -> Complex<T> {
        let p = self.weights();
        (0..self.dim()).fold(Complex::new(T::zero(), T::zero()), |acc, n| {
            acc + k.b[(n, n)] * p[n]
        })
    }

    /// Checks that the N² vectors `π(E_{n,m})Ω_ρ` span the GNS space and that
    /// `A ↦ π(A)Ω_ρ` is injective.
    pub fn check_cyclic_separating(&self) -> CyclicReport {
        let n = self.dim();
        let omega = self.omega_vector();
        let mut cols = CMatrix::<T>::zeros(n * n, n * n);
        for a in 0..n {
            for b in 0..n {
                let mut e = CMatrix::<T>::zeros(n, n);
                e[(a, b)] = cplx(T::one());
                let v = self.pi_apply_eigen(&e, &omega);
                let col = a * n + b;
                for (r, z) in v.coords.iter().enumerate() {
                    cols[(r, col)] = *z;
                }
            }
        }
        let sv: DVector<T> = cols.singular_values();
        let top = sv.iter().fold(T::zero(), |a, &b| a.max(b));
        let min = sv.iter().fold(top, |a, &b| a.min(b));
        let cutoff = top * tolerance::<T>(1e-12, 1e3) * nalgebra::convert::<f64, T>((n * n) as f64);
        let rank = sv.iter().filter(|&&s| s > cutoff).count();
        CyclicReport {
            rank,
            expected_rank: n * n,
            min_singular_value: crate::scalar::to_f64(min),
            passed: rank == n * n && min > T::zero(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{expectation_complex, random_faithful};
    use crate::testing::{random_complex, random_hermitian, seeded};

    type C = Complex<f64>;

    fn qubit() -> GnsSpace<f64> {
        GnsSpace::new(DensityMatrix::diagonal(&[0.75, 0.25]).unwrap())
    }

    #[test]
    fn omega_examples() {
        let mixed = GnsSpace::new(DensityMatrix::<f64>::maximally_mixed(2));
        let w = mixed.omega_vector();
        let expect = CMatrix::identity(2, 2) * C::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        assert!((w.coords() - expect).norm() < 1e-15);

        // ascending eigenbasis: p = (1/4, 3/4)
        let w = qubit().omega_vector();
        assert!((w.coords()[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((w.coords()[(1, 1)].re - 3f64.sqrt() / 2.0).abs() < 1e-15);

        let mut rng = seeded(1);
        for n in 2..=5 {
            let space = GnsSpace::new(random_faithful::<f64>(n, n as u64, 0.01).unwrap());
            let om = space.omega_vector();
            assert!((om.norm() - 1.0).abs() < 1e-14);
            let a = random_complex(&mut rng, n);
            let lhs = space.vector_expectation(&a, &om);
            let rhs = expectation_complex(space.reference(), &a);
            assert!((lhs - rhs).norm() < 1e-11);
        }
    }

    #[test]
    fn pi_is_a_homomorphism() {
        let mut rng = seeded(2);
        let space = GnsSpace::new(random_faithful::<f64>(4, 3, 0.01).unwrap());
        let om = space.omega_vector();
        let id = CMatrix::identity(4, 4);
        assert!((space.pi_apply(&id, &om).coords() - om.coords()).norm() < 1e-14);
        for _ in 0..20 {
            let a = random_complex(&mut rng, 4);
            let b = random_complex(&mut rng, 4);
            let v = GnsVector::new(random_complex(&mut rng, 4));
            let ab = space.pi_apply(&(&a * &b), &v);
            let seq = space.pi_apply(&a, &space.pi_apply(&b, &v));
            assert!(ab.sub(&seq).norm() < 1e-12 * (1.0 + ab.norm()));
            // ‖π(A)Ω‖² = ω(A†A)
            let pa = space.pi_apply(&a, &om);
            let w = expectation_complex(space.reference(), &(a.adjoint() * &a));
            assert!((pa.norm() * pa.norm() - w.re).abs() < 1e-11);
        }
    }

    #[test]
    fn commutant_commutes() {
        let mut rng = seeded(5);
        for k in 0..100 {
            let n = 2 + k % 4;
            let space = GnsSpace::new(random_faithful::<f64>(n, 40 + k as u64, 0.01).unwrap());
            let a = random_complex(&mut rng, n);
            let k_op = CommutantOperator::new(random_hermitian::<f64>(&mut rng, n).into_matrix());
            let v = GnsVector::new(random_complex(&mut rng, n));
            let lhs = space.pi_apply(&a, &space.commutant_apply(&k_op, &v));
            let rhs = space.commutant_apply(&k_op, &space.pi_apply(&a, &v));
            let scale = crate::scalar::operator_norm(&a) * k_op.operator_norm() * v.norm();
            assert!(lhs.sub(&rhs).norm() < 1e-11 * scale);
        }
    }

    #[test]
    fn commutant_expectation_on_omega() {
        let mut rng = seeded(6);
        let space = GnsSpace::new(random_faithful::<f64>(3, 6, 0.02).unwrap());
        let om = space.omega_vector();
        let id = CommutantOperator::identity(3);
        assert!(space.commutant_apply(&id, &om).sub(&om).norm() < 1e-15);
        let b = random_complex(&mut rng, 3);
        let k = CommutantOperator::new(b.clone());
        let lhs = space.commutant_apply(&k, &om).inner(&om);
        let rho_t = CMatrix::from_diagonal(&space.weights().map(cplx));
        let rhs = crate::scalar::trace_of_product(&rho_t, &b.transpose());
        assert!((lhs - rhs).norm() < 1e-14);
        assert!((space.centering(&k) - rhs).norm() < 1e-14);
    }

    #[test]
    fn prime_map_examples() {
        let space = GnsSpace::new(random_faithful::<f64>(2, 8, 0.05).unwrap());
        let y = CMatrix::from_row_slice(2, 2, &[C::new(0.0, 0.0), C::new(0.0, -1.0), C::new(0.0, 1.0), C::new(0.0, 0.0)]);
        let a = space.from_eigenbasis(&y);
        let ap = space.to_eigenbasis(&space.prime_map(&a));
        let expect = y.map(|z| z.conj());
        assert!((ap - expect).norm() < 1e-14);
        // involution and isometry on eigenvectors
        let mut rng = seeded(9);
        let b = random_complex(&mut rng, 2);
        let bpp = space.prime_map(&space.prime_map(&b));
        assert!((bpp - &b).norm() < 1e-13);
        let bp = space.prime_map(&b);
        let u = space.basis().eigenvectors();
        for n in 0..2 {
            let psi = u.column(n).into_owned();
            assert!(((&bp * &psi).norm() - (&b * &psi).norm()).abs() < 1e-13);
        }
        // real symmetric A in a diagonal reference: fixed
        let q = qubit();
        let s = CMatrix::from_row_slice(2, 2, &[C::new(1.0, 0.0), C::new(2.0, 0.0), C::new(2.0, 0.0), C::new(-3.0, 0.0)]);
        assert!((q.prime_map(&s) - &s).norm() < 1e-14);
    }

    #[test]
    fn represent_state_examples() {
        let rho = random_faithful::<f64>(3, 10, 0.02).unwrap();
        let space = GnsSpace::new(rho.clone());
        let x = space.represent_state(&rho);
        assert!((x.b() - CMatrix::identity(3, 3)).norm() < 1e-12);

        let q = qubit();
        let sigma = DensityMatrix::diagonal(&[0.4, 0.6]).unwrap();
        let x = q.represent_state(&sigma);
        // ascending: p = (1/4, 3/4), σ in that basis = (0.6, 0.4)
        assert!((x.b()[(0, 0)].re - 0.6 / 0.25).abs() < 1e-13);
        assert!((x.b()[(1, 1)].re - 0.4 / 0.75).abs() < 1e-13);
        assert!(x.b()[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn cyclic_separating() {
        let mixed = GnsSpace::new(DensityMatrix::<f64>::maximally_mixed(3));
        let r = mixed.check_cyclic_separating();
        assert!(r.passed && r.rank == 9);
        let r = qubit().check_cyclic_separating();
        assert_eq!(r.rank, 4);
        assert!((r.min_singular_value - 0.5).abs() < 1e-14);
    }
}
