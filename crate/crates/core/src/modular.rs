//! Tomita–Takesaki structure of the GNS model.
//!
//! With Ω_ρ = diag(√p) and vectors written as matrices in the eigenbasis of ρ:
//! Δ multiplies entry `(i, j)` by `p_i/p_j`, `J M = M†` and
//! `S M = ρ̃^{-1/2} M† ρ̃^{1/2}`. The antilinear maps are kept as actions.
//!
//! The name "modular conjugation" is used for J here. S is the Tomita
//! operator, and `F = S*`.

use nalgebra::{Complex, DMatrix};

use crate::error::{Error, Result};
use crate::gns::{CommutantOperator, GnsSpace, GnsVector};
use crate::matfun::{self, HermitianMatrix};
use crate::scalar::{adjoint, cabs, cexp, cplx, max_abs, CMatrix, Real};
use crate::states::{thermal_state, DensityMatrix, Hamiltonian};

/// `Δ = ρ⊗ρ⁻¹`, acting by the entrywise multipliers `p_i/p_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModularOperator<T: Real> {
    log_p: Vec<T>,
    multipliers: DMatrix<T>,
}

impl<T: Real> ModularOperator<T> {
    pub fn multipliers(&self) -> &DMatrix<T> {
        &self.multipliers
    }

    pub fn dim(&self) -> usize {
        self.log_p.len()
    }

    pub fn apply(&self, v: &GnsVector<T>) -> GnsVector<T> {
        let mut m = v.coords().clone();
        for ((i, j), z) in indexed(&mut m) {
            *z *= self.multipliers[(i, j)];
        }
        GnsVector::new(m)
    }

    /// `Δ^z v`, entries scaled by `(p_i/p_j)^z`.
    pub fn power(&self, z: Complex<T>, v: &GnsVector<T>) -> GnsVector<T> {
        let mut m = v.coords().clone();
        for ((i, j), e) in indexed(&mut m) {
            *e *= cexp(z * cplx(self.log_p[i] - self.log_p[j]));
        }
        GnsVector::new(m)
    }

    pub fn power_real(&self, s: T, v: &GnsVector<T>) -> GnsVector<T> {
        self.power(cplx(s), v)
    }

    /// `Δ^{it}`, unitary for real `t`.
    pub fn unitary(&self, t: T, v: &GnsVector<T>) -> GnsVector<T> {
        self.power(Complex::new(T::zero(), t), v)
    }
}

fn indexed<T: Real>(m: &mut CMatrix<T>) -> impl Iterator<Item = ((usize, usize), &mut Complex<T>)> {
    let rows = m.nrows();
    m.iter_mut().enumerate().map(move |(k, z)| ((k % rows, k / rows), z))
}

pub fn modular_operator<T: Real>(space: &GnsSpace<T>) -> ModularOperator<T> {
    let p = space.weights();
    let n = p.len();
    ModularOperator {
        log_p: p.iter().map(|x| x.ln()).collect(),
        multipliers: DMatrix::from_fn(n, n, |i, j| p[i] / p[j]),
    }
}

/// J: `M ↦ M†`. Antilinear, isometric and involutive.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ModularConjugation;

impl ModularConjugation {
    pub fn apply<T: Real>(&self, v: &GnsVector<T>) -> GnsVector<T> {
        GnsVector::new(adjoint(v.coords()))
    }
}

/// The closure of `π(A)Ω_ρ ↦ π(A*)Ω_ρ`, together with its adjoint `F`.
#[derive(Debug, Clone, PartialEq)]
pub struct TomitaOperator<T: Real> {
    half: (CMatrix<T>, CMatrix<T>),
}

impl<T: Real> TomitaOperator<T> {
    pub fn new(space: &GnsSpace<T>) -> Self {
        Self {
            half: (space.sqrt_diag(), space.inv_sqrt_diag()),
        }
    }

    /// `S M = ρ̃^{-1/2} M† ρ̃^{1/2}`.
    pub fn apply(&self, v: &GnsVector<T>) -> GnsVector<T> {
        let (d, dinv) = &self.half;
        GnsVector::new(dinv * adjoint(v.coords()) * d)
    }

    /// `S* M = ρ̃^{1/2} M† ρ̃^{-1/2}`, which is `F = JΔ^{-1/2}`.
    pub fn adjoint_apply(&self, v: &GnsVector<T>) -> GnsVector<T> {
        let (d, dinv) = &self.half;
        GnsVector::new(d * adjoint(v.coords()) * dinv)
    }

    pub fn f_apply(&self, v: &GnsVector<T>) -> GnsVector<T> {
        self.adjoint_apply(v)
    }

    /// `F* = Δ^{-1/2}J = S`.
    pub fn f_adjoint_apply(&self, v: &GnsVector<T>) -> GnsVector<T> {
        self.apply(v)
    }
}

/// `ρ^{it} A ρ^{-it}`, so that `Δ^{it}π(A)Δ^{-it} = π(modular_flow(A, t))`.
pub fn modular_flow<T: Real>(space: &GnsSpace<T>, a: &CMatrix<T>, t: T) -> CMatrix<T> {
    let delta = modular_operator(space);
    let at = delta.unitary(t, &GnsVector::new(space.to_eigenbasis(a)));
    space.from_eigenbasis(at.coords())
}

/// Largest deviation of `Δ^{it}π(A)Δ^{-it}` from `π(modular_flow(A, t))` over the matrix units.
pub fn flow_representation_residual<T: Real>(space: &GnsSpace<T>, a: &CMatrix<T>, t: T) -> T {
    let delta = modular_operator(space);
    let flowed = modular_flow(space, a, t);
    let n = space.dim();
    let mut worst = T::zero();
    for k in 0..n {
        for l in 0..n {
            let mut e = CMatrix::<T>::zeros(n, n);
            e[(k, l)] = cplx(T::one());
            let v = GnsVector::new(e);
            let lhs = delta.unitary(t, &space.pi_apply(a, &delta.unitary(-t, &v)));
            let rhs = space.pi_apply(&flowed, &v);
            worst = worst.max(lhs.sub(&rhs).norm());
        }
    }
    worst
}

/// The state `A ↦ (Δ^{it}π(A)Δ^{-it}Ω_σ, Ω_σ)` with `Ω_σ = σ̃^{1/2}`; its density is `ρ^{-it}σρ^{it}`.
pub fn transformed_state<T: Real>(space: &GnsSpace<T>, sigma: &DensityMatrix<T>, t: T) -> DensityMatrix<T> {
    let m = modular_flow(space, sigma.matrix().as_matrix(), -t);
    DensityMatrix::new(HermitianMatrix::from_symmetrized(&m))
        .expect("unitary conjugation of a faithful state is faithful")
}

/// `Σ Ã_ik B̃_ki p_i (p_k/p_i)^{iz}` without the strip restriction.
fn kms_entire<T: Real>(space: &GnsSpace<T>, a: &CMatrix<T>, b: &CMatrix<T>, z: Complex<T>) -> Complex<T> {
    let at = space.to_eigenbasis(a);
    let bt = space.to_eigenbasis(b);
    let p = space.weights();
    let n = space.dim();
    let iz = Complex::new(-z.im, z.re);
    let mut acc = Complex::new(T::zero(), T::zero());
    for i in 0..n {
        for k in 0..n {
            let phase = cexp(iz * cplx(p[k].ln() - p[i].ln()));
            acc += at[(i, k)] * bt[(k, i)] * phase * p[i];
        }
    }
    acc
}

/// `F(z) = (π(A)Δ^{iz}π(B)Ω_ρ, Ω_ρ)` for `0 ≤ Im z ≤ 1`.
pub fn kms_function<T: Real>(
    space: &GnsSpace<T>,
    a: &HermitianMatrix<T>,
    b: &HermitianMatrix<T>,
    z: Complex<T>,
) -> Result<Complex<T>> {
    if !(z.im >= T::zero() && z.im <= T::one()) {
        return Err(Error::Domain(crate::scalar::to_f64(z.im)));
    }
    Ok(kms_entire(space, a.as_matrix(), b.as_matrix(), z))
}

/// `(π(B)Δ^{is}π(A)Ω_ρ, Ω_ρ)`, evaluated on vectors.
pub fn reversed_correlation<T: Real>(space: &GnsSpace<T>, a: &HermitianMatrix<T>, b: &HermitianMatrix<T>, s: T) -> Complex<T> {
    let delta = modular_operator(space);
    let om = space.omega_vector();
    let v = space.pi_apply(a.as_matrix(), &om);
    space.pi_apply(b.as_matrix(), &delta.unitary(s, &v)).inner(&om)
}

/// `|F(t+i) - (π(B)Δ^{it}π(A)Ω_ρ, Ω_ρ)|`.
pub fn kms_check<T: Real>(space: &GnsSpace<T>, a: &HermitianMatrix<T>, b: &HermitianMatrix<T>, t: T) -> T {
    let f = kms_entire(space, a.as_matrix(), b.as_matrix(), Complex::new(t, T::one()));
    cabs(f - reversed_correlation(space, a, b, t))
}

/// `|F(t-i) - (π(B)Δ^{-it}π(A)Ω_ρ, Ω_ρ)|`. The modular group is KMS at inverse
/// temperature -1, so this lower-strip boundary value is the one that holds.
pub fn kms_boundary_residual<T: Real>(space: &GnsSpace<T>, a: &HermitianMatrix<T>, b: &HermitianMatrix<T>, t: T) -> T {
    let f = kms_entire(space, a.as_matrix(), b.as_matrix(), Complex::new(t, -T::one()));
    cabs(f - reversed_correlation(space, a, b, -t))
}

/// Matrix units `E_kl` and `iE_kl` in the original basis; spans the algebra over ℝ.
fn probes<T: Real>(n: usize) -> Vec<CMatrix<T>> {
    let mut out = Vec::with_capacity(2 * n * n);
    for k in 0..n {
        for l in 0..n {
            for z in [cplx(T::one()), Complex::new(T::zero(), T::one())] {
                let mut e = CMatrix::<T>::zeros(n, n);
                e[(k, l)] = z;
                out.push(e);
            }
        }
    }
    out
}

/// Max over probes of `‖JΔ^{1/2}π(A)Ω - π(A*)Ω‖`, `‖Sπ(A)Ω - π(A*)Ω‖` and
/// `‖F(I⊗A)Ω - (I⊗A*)Ω‖`.
pub fn polar_check<T: Real>(space: &GnsSpace<T>) -> T {
    let delta = modular_operator(space);
    let s = TomitaOperator::new(space);
    let om = space.omega_vector();
    let half = lit_half::<T>();
    let mut worst = T::zero();
    for a in probes::<T>(space.dim()) {
        let a_star = adjoint(&a);
        let v = space.pi_apply(&a, &om);
        let target = space.pi_apply(&a_star, &om);
        let polar = ModularConjugation.apply(&delta.power_real(half, &v));
        worst = worst.max(polar.sub(&target).norm());
        worst = worst.max(s.apply(&v).sub(&target).norm());

        let k = space.commutant_apply(&CommutantOperator::new(a.clone()), &om);
        let k_star = space.commutant_apply(&CommutantOperator::new(a_star), &om);
        worst = worst.max(s.f_apply(&k).sub(&k_star).norm());
    }
    worst
}

fn lit_half<T: Real>() -> T {
    T::one() / (T::one() + T::one())
}

/// Max over probes `v` of `‖S*Sv - Δv‖` and `‖FF*v - Δv‖`, plus the antilinear
/// adjoint relation `(Sv, w) = conj((v, S*w))`.
pub fn delta_factorization_check<T: Real>(space: &GnsSpace<T>) -> T {
    let delta = modular_operator(space);
    let s = TomitaOperator::new(space);
    let vs: Vec<GnsVector<T>> = probes::<T>(space.dim()).into_iter().map(GnsVector::new).collect();
    let mut worst = T::zero();
    for v in &vs {
        let dv = delta.apply(v);
        worst = worst.max(s.adjoint_apply(&s.apply(v)).sub(&dv).norm());
        worst = worst.max(s.f_apply(&s.f_adjoint_apply(v)).sub(&dv).norm());
        for w in &vs {
            let lhs = s.apply(v).inner(w);
            let rhs = v.inner(&s.adjoint_apply(w)).conj();
            worst = worst.max(cabs(lhs - rhs));
        }
    }
    worst
}

/// For `ρ = e^{-βH}/Z`, compares the modular flow at `t` with the Heisenberg
/// evolution `e^{iτβH} A e^{-iτβH}` at `τ = -t`.
pub fn thermal_flow_residual<T: Real>(h: &Hamiltonian<T>, beta: T, a: &CMatrix<T>, t: T) -> Result<T> {
    let rho = thermal_state(h, beta)?;
    let space = GnsSpace::new(rho);
    let flowed = modular_flow(&space, a, t);
    let s = matfun::spectral(h.matrix());
    let phases = s.eigenvalues().map(|e| cexp(Complex::new(T::zero(), -t * beta * e)));
    let u = s.from_eigenbasis(&CMatrix::from_diagonal(&phases));
    let heisenberg = &u * a * adjoint(&u);
    Ok(max_abs(&(flowed - heisenberg)))
}
