//! The chart systems ξ_ρ and χ_ρ, tangent functionals and the metric operator G_ρ.
//!
//! Chart values are centered self-adjoint commutant elements `K = I⊗B` with
//! `(KΩ_ρ, Ω_ρ) = 0`. Writing `C = Bᵀ` for the right factor (Hermitian) and
//! `D = diag(√p)`, the closed forms used here are, in the ρ-eigenbasis:
//!
//! - ξ_ρ(σ): `C = log(D⁻¹σ̃D⁻¹) - c·I`, with `c` fixing the centering,
//! - ξ_ρ⁻¹(K): `σ̃ = e^{-α(K)} D e^{C} D`,
//! - f_{ρ,K}: dual matrix `T̃ = D C D`, i.e. `f(A) = Tr(T A)`,
//! - χ_ρ(σ): `C_ij = Ã_ij L(p_i, p_j) / √(p_i p_j)` with `A = log σ - log ρ + D(ρ‖σ)`,
//! - G_ρ: entrywise multipliers `p_j / L(p_i, p_j)` on vector coordinates.

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::geometry::InterpolationFamily;
use crate::gns::{CommutantOperator, GnsSpace, GnsVector};
use crate::matfun::{self, log_mean_unchecked, HermitianMatrix};
use crate::scalar::{
    cabs, cplx, lit, max_abs, operator_norm, symmetrize, to_f64, tolerance, trace_norm, trace_of_product,
    CMatrix, Real,
};
use crate::states::{umegaki_divergence, DensityMatrix};

/// Centering tolerance of a chart value.
pub const CENTERING_TOL: f64 = 1e-11;
/// Central-difference step for derivative checks.
pub const FD_STEP: f64 = 1e-4;

/// Centered self-adjoint commutant element: a chart value in B_ρ.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartPoint<T: Real> {
    k: CommutantOperator<T>,
}

impl<T: Real> ChartPoint<T> {
    /// Checks Hermiticity of `B` and `(KΩ_ρ, Ω_ρ) = 0`.
    pub fn new(space: &GnsSpace<T>, k: CommutantOperator<T>) -> Result<Self> {
        if k.dim() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                got: k.dim(),
            });
        }
        if !k.is_self_adjoint() {
            let asym = max_abs(&(k.b() - k.b().adjoint()));
            return Err(Error::NotHermitian(to_f64(asym)));
        }
        let c = space.centering(&k);
        let scale = k.operator_norm().max(T::one());
        if cabs(c) > tolerance::<T>(CENTERING_TOL, 1e3) * scale {
            return Err(Error::NotCentered(to_f64(cabs(c))));
        }
        Ok(Self { k })
    }

    /// Projects a Hermitian right factor onto B_ρ by subtracting its centering.
    pub(crate) fn centered_from_right_factor(space: &GnsSpace<T>, c: &CMatrix<T>) -> Self {
        let mut c = symmetrize(c);
        let shift = weighted_diagonal(space, &c);
        for i in 0..c.nrows() {
            c[(i, i)].re -= shift;
        }
        Self {
            k: CommutantOperator::from_right_factor(&c),
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            k: CommutantOperator::zero(dim),
        }
    }

    pub fn operator(&self) -> &CommutantOperator<T> {
        &self.k
    }

    pub fn b(&self) -> &CMatrix<T> {
        self.k.b()
    }

    pub fn right_factor(&self) -> CMatrix<T> {
        self.k.right_factor()
    }

    /// Operator norm of `K` (that of `B`).
    pub fn norm(&self) -> T {
        self.k.operator_norm()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            k: self.k.add(&other.k),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            k: self.k.sub(&other.k),
        }
    }

    pub fn scale(&self, c: T) -> Self {
        Self { k: self.k.scale(c) }
    }

    pub fn is_zero(&self) -> bool {
        self.k.b().iter().all(|z| z.re == T::zero() && z.im == T::zero())
    }
}

/// `Σ p_n C_nn` (real part).
fn weighted_diagonal<T: Real>(space: &GnsSpace<T>, c: &CMatrix<T>) -> T {
    let p = space.weights();
    (0..space.dim()).fold(T::zero(), |acc, n| acc + p[n] * c[(n, n)].re)
}

/// Linear functional `f_{ρ,K}(A) = (π(A)Ω_ρ, KΩ_ρ) = Tr(T A)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentFunctional<T: Real> {
    k: CommutantOperator<T>,
    dual: HermitianMatrix<T>,
}

impl<T: Real> TangentFunctional<T> {
    /// Functional given by its dual matrix (original basis); `K` is left empty.
    pub fn from_dual(dual: HermitianMatrix<T>) -> Self {
        let n = dual.dim();
        Self {
            k: CommutantOperator::zero(n),
            dual,
        }
    }

    pub fn operator(&self) -> &CommutantOperator<T> {
        &self.k
    }

    /// `T` with `f(A) = Tr(T A)`, in the original basis.
    pub fn dual_matrix(&self) -> &HermitianMatrix<T> {
        &self.dual
    }

    pub fn apply(&self, a: &CMatrix<T>) -> Complex<T> {
        trace_of_product(self.dual.as_matrix(), a)
    }

    pub fn apply_hermitian(&self, a: &HermitianMatrix<T>) -> T {
        self.apply(a.as_matrix()).re
    }

    /// Dual (trace) norm, the exact dual of the operator norm.
    pub fn norm(&self) -> T {
        trace_norm(self.dual.as_matrix())
    }
}

/// The operator G_ρ and its inverse, diagonal in eigenbasis coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSuperoperator<T: Real> {
    multipliers: DMatrix<T>,
}

impl<T: Real> MetricSuperoperator<T> {
    pub fn new(space: &GnsSpace<T>) -> Self {
        let p = space.weights();
        let n = space.dim();
        Self {
            multipliers: DMatrix::from_fn(n, n, |i, j| p[j] / log_mean_unchecked(p[i], p[j])),
        }
    }

    /// `g_ij = p_j / L(p_i, p_j)`.
    pub fn multipliers(&self) -> &DMatrix<T> {
        &self.multipliers
    }

    pub fn min_multiplier(&self) -> T {
        self.multipliers
            .iter()
            .fold(self.multipliers[(0, 0)], |a, &b| a.min(b))
    }

    pub fn apply(&self, v: &GnsVector<T>) -> GnsVector<T> {
        let mut c = v.coords().clone();
        c.zip_apply(&self.multipliers, |z, g| *z *= g);
        GnsVector::new(c)
    }

    /// `G⁻¹ v`, the operator X of the existence argument.
    pub fn apply_inverse(&self, v: &GnsVector<T>) -> GnsVector<T> {
        let mut c = v.coords().clone();
        c.zip_apply(&self.multipliers, |z, g| *z /= g);
        GnsVector::new(c)
    }

    /// `(G v, w)`.
    pub fn inner(&self, v: &GnsVector<T>, w: &GnsVector<T>) -> Complex<T> {
        self.apply(v).inner(w)
    }
}

/// Chart ξ_ρ: `K = log X - (log X Ω_ρ, Ω_ρ)` with X from [`GnsSpace::represent_state`].
pub fn xi_chart<T: Real>(space: &GnsSpace<T>, sigma: &DensityMatrix<T>) -> ChartPoint<T> {
    let x = space.represent_state(sigma);
    let c = HermitianMatrix::from_symmetrized(&x.right_factor());
    let log_c = matfun::log_spectral(&matfun::spectral(&c))
        .expect("represent_state is strictly positive for faithful input");
    ChartPoint::centered_from_right_factor(space, log_c.as_matrix())
}

/// Shifted spectral exponential of the right factor: `(e^{C - m}, m)` with `m = max spec C`.
fn shifted_exp<T: Real>(k: &ChartPoint<T>) -> (CMatrix<T>, T) {
    let c = HermitianMatrix::from_symmetrized(&k.right_factor());
    let s = matfun::spectral(&c);
    let top = s.max_eigenvalue();
    let e = matfun::apply_function(&s, |x| (x - top).exp()).expect("exp is finite");
    (e.into_matrix(), top)
}

/// `α_ρ(K) = log (e^K Ω_ρ, Ω_ρ) = log Tr(ρ̃ e^{C})`.
pub fn alpha<T: Real>(space: &GnsSpace<T>, k: &ChartPoint<T>) -> T {
    let (e, top) = shifted_exp(k);
    top + weighted_diagonal(space, &e).ln()
}

/// ξ_ρ⁻¹: the state `e^{-α(K)} (π(·) e^{K/2}Ω_ρ, e^{K/2}Ω_ρ)`.
pub fn xi_inverse<T: Real>(space: &GnsSpace<T>, k: &ChartPoint<T>) -> DensityMatrix<T> {
    let (e, _) = shifted_exp(k);
    let d = space.sqrt_diag();
    let sigma_t = &d * e * &d;
    DensityMatrix::normalized(&space.from_eigenbasis(&sigma_t))
        .expect("chart inverse of a finite K is faithful")
}

/// F_ρ: `K ↦ f_{ρ,K}`.
pub fn tangent_functional<T: Real>(space: &GnsSpace<T>, k: &ChartPoint<T>) -> TangentFunctional<T> {
    let d = space.sqrt_diag();
    let t = &d * k.right_factor() * &d;
    TangentFunctional {
        k: k.operator().clone(),
        dual: HermitianMatrix::from_symmetrized(&space.from_eigenbasis(&t)),
    }
}

/// F_ρ⁻¹: recovers `K` from the dual matrix, `C = D⁻¹ T̃ D⁻¹`. Rejects `Tr T ≠ 0`.
pub fn f_inverse<T: Real>(space: &GnsSpace<T>, f: &TangentFunctional<T>) -> Result<ChartPoint<T>> {
    let tm = f.dual_matrix();
    let tr = tm.trace();
    let scale = trace_norm(tm.as_matrix()).max(T::one());
    if tr.abs() > tolerance::<T>(CENTERING_TOL, 1e3) * scale {
        return Err(Error::NotCentered(to_f64(tr)));
    }
    let inv = space.inv_sqrt_diag();
    let c = &inv * space.to_eigenbasis(tm.as_matrix()) * &inv;
    Ok(ChartPoint::centered_from_right_factor(space, &c))
}

/// `‖ω_{ξ⁻¹(tK)} - ω_ρ - F_ρ(tK)‖ / ‖tK‖`, trace norm over operator norm; 0 for `K = 0`.
pub fn frechet_ratio<T: Real>(space: &GnsSpace<T>, k: &ChartPoint<T>, t: T) -> T {
    let tk = k.scale(t);
    let denom = tk.norm();
    if denom == T::zero() {
        return T::zero();
    }
    let sigma = xi_inverse(space, &tk);
    let f = tangent_functional(space, &tk);
    let rem = sigma.matrix().as_matrix() - space.reference().matrix().as_matrix() - f.dual_matrix().as_matrix();
    trace_norm(&rem) / denom
}

/// The cross-over map ξ₂∘ξ₁⁻¹.
pub fn crossover<T: Real>(
    space1: &GnsSpace<T>,
    space2: &GnsSpace<T>,
    k: &ChartPoint<T>,
) -> ChartPoint<T> {
    xi_chart(space2, &xi_inverse(space1, k))
}

/// The linear operator F₂⁻¹F₁.
pub fn crossover_linear<T: Real>(
    space1: &GnsSpace<T>,
    space2: &GnsSpace<T>,
    k: &ChartPoint<T>,
) -> ChartPoint<T> {
    let f = tangent_functional(space1, k);
    f_inverse(space2, &f).expect("tangent functionals are centered")
}

/// Both sides of a norm-bound comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormBound<T: Real> {
    pub lhs: T,
    pub rhs: T,
}

impl<T: Real> NormBound<T> {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs * (T::one() + tolerance::<T>(1e-12, 64.0)) + tolerance::<T>(1e-14, 16.0)
    }
}

/// `‖ρ₁‖ ‖ρ₂⁻¹‖`.
fn bound_constant<T: Real>(rho1: &DensityMatrix<T>, rho2: &DensityMatrix<T>) -> T {
    rho1.spectral().max_eigenvalue() / rho2.spectral().min_eigenvalue()
}

fn exp_chart<T: Real>(space: &GnsSpace<T>, sigma: &DensityMatrix<T>) -> CMatrix<T> {
    let k = xi_chart(space, sigma);
    let c = HermitianMatrix::from_symmetrized(&k.right_factor());
    matfun::exp_spectral(&matfun::spectral(&c)).expect("exp is finite").into_matrix()
}

/// Evaluates `‖e^{ξ₂(σ₂)} - e^{ξ₂(σ₁)}‖ ≤ ‖ρ₁‖‖ρ₂⁻¹‖ ‖e^{ξ₁(σ₂)} - e^{ξ₁(σ₁)}‖`
/// in operator norm.
pub fn norm_bound<T: Real>(
    rho1: &DensityMatrix<T>,
    rho2: &DensityMatrix<T>,
    sigma1: &DensityMatrix<T>,
    sigma2: &DensityMatrix<T>,
) -> NormBound<T> {
    let s1 = GnsSpace::new(rho1.clone());
    let s2 = GnsSpace::new(rho2.clone());
    let lhs = operator_norm(&(exp_chart(&s2, sigma2) - exp_chart(&s2, sigma1)));
    let rhs = bound_constant(rho1, rho2) * operator_norm(&(exp_chart(&s1, sigma2) - exp_chart(&s1, sigma1)));
    NormBound { lhs, rhs }
}

pub fn norm_bound_check<T: Real>(
    rho1: &DensityMatrix<T>,
    rho2: &DensityMatrix<T>,
    sigma1: &DensityMatrix<T>,
    sigma2: &DensityMatrix<T>,
) -> bool {
    norm_bound(rho1, rho2, sigma1, sigma2).holds()
}

/// The same comparison for the unnormalized reconstruction operators X (`e^K = e^{α(K)} X`).
pub fn norm_bound_unnormalized<T: Real>(
    rho1: &DensityMatrix<T>,
    rho2: &DensityMatrix<T>,
    sigma1: &DensityMatrix<T>,
    sigma2: &DensityMatrix<T>,
) -> NormBound<T> {
    let s1 = GnsSpace::new(rho1.clone());
    let s2 = GnsSpace::new(rho2.clone());
    let x = |s: &GnsSpace<T>, sig: &DensityMatrix<T>| s.represent_state(sig).right_factor();
    let lhs = operator_norm(&(x(&s2, sigma2) - x(&s2, sigma1)));
    let rhs = bound_constant(rho1, rho2) * operator_norm(&(x(&s1, sigma2) - x(&s1, sigma1)));
    NormBound { lhs, rhs }
}

pub fn norm_bound_check_unnormalized<T: Real>(
    rho1: &DensityMatrix<T>,
    rho2: &DensityMatrix<T>,
    sigma1: &DensityMatrix<T>,
    sigma2: &DensityMatrix<T>,
) -> bool {
    norm_bound_unnormalized(rho1, rho2, sigma1, sigma2).holds()
}

/// `A_{ρ,σ} = log σ - log ρ + D(ρ‖σ)`, centered: `ω_ρ(A_{ρ,σ}) = 0`.
pub fn a_rho_sigma<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> HermitianMatrix<T> {
    sigma.log().sub(&rho.log()).shift(umegaki_divergence(rho, sigma))
}

/// Chart χ_ρ: the centered `K` with `KΩ_ρ = ∫₀¹ π(ρ^u A_{ρ,σ} ρ^{-u}) du Ω_ρ`.
pub fn chi_chart<T: Real>(space: &GnsSpace<T>, sigma: &DensityMatrix<T>) -> ChartPoint<T> {
    let a = a_rho_sigma(space.reference(), sigma);
    chi_from_centered(space, a.as_matrix())
}

/// `K` with `KΩ_ρ = ∫ π(ρ^u A ρ^{-u}) du Ω_ρ` for a centered Hermitian `A`.
pub(crate) fn chi_from_centered<T: Real>(space: &GnsSpace<T>, a: &CMatrix<T>) -> ChartPoint<T> {
    let p = space.weights();
    let sq = space.sqrt_weights();
    let mut c = space.to_eigenbasis(a);
    for j in 0..c.ncols() {
        for i in 0..c.nrows() {
            c[(i, j)] *= log_mean_unchecked(p[i], p[j]) / (sq[i] * sq[j]);
        }
    }
    ChartPoint::centered_from_right_factor(space, &c)
}

/// Hermitian basis of N×N matrices, orthonormal for `Tr(A†B)`: the probe set of derivative checks.
pub fn hermitian_probe_basis<T: Real>(n: usize) -> Vec<HermitianMatrix<T>> {
    let mut out = Vec::with_capacity(n * n);
    let r = lit::<T>(std::f64::consts::FRAC_1_SQRT_2);
    for i in 0..n {
        for j in i..n {
            if i == j {
                let mut m = CMatrix::zeros(n, n);
                m[(i, i)] = cplx(T::one());
                out.push(HermitianMatrix::from_symmetrized(&m));
            } else {
                let mut re = CMatrix::zeros(n, n);
                re[(i, j)] = cplx(r);
                re[(j, i)] = cplx(r);
                out.push(HermitianMatrix::from_symmetrized(&re));
                let mut im = CMatrix::zeros(n, n);
                im[(i, j)] = Complex::new(T::zero(), -r);
                im[(j, i)] = Complex::new(T::zero(), r);
                out.push(HermitianMatrix::from_symmetrized(&im));
            }
        }
    }
    out
}

/// Max over probes of `|d/ds Tr σ_s A|_{s=0} (central difference) - f_{ρ,χ_ρ(σ)}(A)|`.
pub fn chi_tangent_check<T: Real>(space: &GnsSpace<T>, sigma: &DensityMatrix<T>) -> T {
    let k = chi_chart(space, sigma);
    let f = tangent_functional(space, &k);
    let family = InterpolationFamily::new(space.reference().clone(), sigma.clone());
    let h = lit::<T>(FD_STEP);
    let plus = family.state(h);
    let minus = family.state(-h);
    let two_h = h + h;
    let diff = (plus.matrix().as_matrix() - minus.matrix().as_matrix()).map(|z| z / cplx(two_h));
    hermitian_probe_basis::<T>(space.dim())
        .iter()
        .map(|a| (trace_of_product(&diff, a.as_matrix()).re - f.apply_hermitian(a)).abs())
        .fold(T::zero(), |a, b| a.max(b))
}
