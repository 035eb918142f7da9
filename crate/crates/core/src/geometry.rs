//! Bogoliubov metric and the mixture/exponential connections.

use crate::charts::{chi_chart, hermitian_probe_basis, tangent_functional, MetricSuperoperator, FD_STEP};
use crate::error::{Error, Result};
use crate::gns::GnsSpace;
use crate::matfun::{self, duhamel_with, log_mean_unchecked, HermitianMatrix};
use crate::scalar::{lit, operator_norm, to_f64, trace_of_product, Real};
use crate::states::{log_trace_exp, umegaki_divergence, DensityMatrix};

/// Normalized exponential of a Hermitian generator: `(e^{G}/Tr e^{G}, ln Tr e^{G})`.
fn gibbs<T: Real>(generator: &HermitianMatrix<T>) -> (DensityMatrix<T>, T) {
    let s = matfun::spectral(generator);
    let log_z = log_trace_exp(s.eigenvalues());
    let p = s.eigenvalues().map(|x| (x - log_z).exp());
    let sum = p.iter().fold(T::zero(), |a, &b| a + b);
    let state = DensityMatrix::from_spectral(s.with_eigenvalues(p / sum))
        .expect("exponential of a finite generator is faithful");
    (state, log_z)
}

/// The exponential interpolation `σ_s = exp(log ρ + s(log σ - log ρ))/Z(s)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationFamily<T: Real> {
    rho: DensityMatrix<T>,
    sigma: DensityMatrix<T>,
    log_rho: HermitianMatrix<T>,
    direction: HermitianMatrix<T>,
}

impl<T: Real> InterpolationFamily<T> {
    pub fn new(rho: DensityMatrix<T>, sigma: DensityMatrix<T>) -> Self {
        let log_rho = rho.log();
        let direction = sigma.log().sub(&log_rho);
        Self {
            rho,
            sigma,
            log_rho,
            direction,
        }
    }

    pub fn start(&self) -> &DensityMatrix<T> {
        &self.rho
    }

    pub fn end(&self) -> &DensityMatrix<T> {
        &self.sigma
    }

    fn generator(&self, s: T) -> HermitianMatrix<T> {
        self.log_rho.add(&self.direction.scale(s))
    }

    pub fn state(&self, s: T) -> DensityMatrix<T> {
        gibbs(&self.generator(s)).0
    }

    /// Normalizer `Z(s)`.
    pub fn z(&self, s: T) -> T {
        gibbs(&self.generator(s)).1.exp()
    }
}

pub fn interp<T: Real>(family: &InterpolationFamily<T>, s: T) -> DensityMatrix<T> {
    family.state(s)
}

/// Bogoliubov inner product
/// `∫₀¹ Tr ρ^u(log σ - log ρ)ρ^{1-u}(log τ - log ρ) du - D(ρ‖σ)D(ρ‖τ)`.
pub fn bogoliubov_metric<T: Real>(
    rho: &DensityMatrix<T>,
    sigma: &DensityMatrix<T>,
    tau: &DensityMatrix<T>,
) -> T {
    let log_rho = rho.log();
    let a = sigma.log().sub(&log_rho);
    let b = tau.log().sub(&log_rho);
    let sandwich = duhamel_with(rho.spectral(), a.as_matrix());
    trace_of_product(&sandwich, b.as_matrix()).re
        - umegaki_divergence(rho, sigma) * umegaki_divergence(rho, tau)
}

/// `-∂_s∂_t D(σ_s‖τ_t)` at `s = t = 0` by a central mixed difference with step `h ∈ [1e-5, 1e-3]`.
pub fn metric_fd<T: Real>(
    rho: &DensityMatrix<T>,
    sigma: &DensityMatrix<T>,
    tau: &DensityMatrix<T>,
    h: T,
) -> Result<T> {
    let hf = to_f64(h);
    if !(1e-5..=1e-3).contains(&hf) {
        return Err(Error::Infeasible(format!("finite-difference step {hf} outside [1e-5, 1e-3]")));
    }
    let fs = InterpolationFamily::new(rho.clone(), sigma.clone());
    let ft = InterpolationFamily::new(rho.clone(), tau.clone());
    let (sp, sm) = (fs.state(h), fs.state(-h));
    let (tp, tm) = (ft.state(h), ft.state(-h));
    let mixed = umegaki_divergence(&sp, &tp) - umegaki_divergence(&sp, &tm) - umegaki_divergence(&sm, &tp)
        + umegaki_divergence(&sm, &tm);
    Ok(-mixed / (lit::<T>(4.0) * h * h))
}

/// `(G_ρ PΩ_ρ, QΩ_ρ)` with `P = χ_ρ(σ)`, `Q = χ_ρ(τ)`.
pub fn metric_via_g<T: Real>(
    rho: &DensityMatrix<T>,
    sigma: &DensityMatrix<T>,
    tau: &DensityMatrix<T>,
) -> T {
    let space = GnsSpace::new(rho.clone());
    let g = MetricSuperoperator::new(&space);
    let om = space.omega_vector();
    let p = space.commutant_apply(chi_chart(&space, sigma).operator(), &om);
    let q = space.commutant_apply(chi_chart(&space, tau).operator(), &om);
    g.inner(&p, &q).re
}

/// `(1 - t)ρ₀ + tρ₁`; fails if the combination is not faithful.
pub fn mixture_geodesic<T: Real>(
    rho0: &DensityMatrix<T>,
    rho1: &DensityMatrix<T>,
    t: T,
) -> Result<DensityMatrix<T>> {
    let m = rho0
        .matrix()
        .scale(T::one() - t)
        .add(&rho1.matrix().scale(t));
    DensityMatrix::new(m)
}

/// Exponential geodesic with `log ρ_t = (1 - t) log ρ₀ + t log ρ₁ - ζ(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentialArc<T: Real> {
    rho0: DensityMatrix<T>,
    rho1: DensityMatrix<T>,
    log0: HermitianMatrix<T>,
    h_rel: HermitianMatrix<T>,
}

impl<T: Real> ExponentialArc<T> {
    pub fn new(rho0: DensityMatrix<T>, rho1: DensityMatrix<T>) -> Self {
        let log0 = rho0.log();
        let h_rel = rho1.log().sub(&log0);
        Self {
            rho0,
            rho1,
            log0,
            h_rel,
        }
    }

    pub fn start(&self) -> &DensityMatrix<T> {
        &self.rho0
    }

    pub fn end(&self) -> &DensityMatrix<T> {
        &self.rho1
    }

    /// `H = log ρ₁ - log ρ₀`.
    pub fn h_rel(&self) -> &HermitianMatrix<T> {
        &self.h_rel
    }

    fn generator(&self, t: T) -> HermitianMatrix<T> {
        self.log0.add(&self.h_rel.scale(t))
    }

    /// `ζ(t) = log Tr exp((1 - t) log ρ₀ + t log ρ₁)`.
    pub fn zeta(&self, t: T) -> T {
        log_trace_exp(matfun::spectral(&self.generator(t)).eigenvalues())
    }

    pub fn state(&self, t: T) -> DensityMatrix<T> {
        gibbs(&self.generator(t)).0
    }
}

/// `(ρ_t, ζ(t))`.
pub fn exp_geodesic<T: Real>(arc: &ExponentialArc<T>, t: T) -> (DensityMatrix<T>, T) {
    gibbs(&arc.generator(t))
}

/// `ζ'(t) = Tr ρ_t H` and `ζ''(t) = ∫₀¹ Tr ρ_t^{1-u} H ρ_t^u H du - (Tr ρ_t H)²`.
pub fn zeta_derivatives<T: Real>(arc: &ExponentialArc<T>, t: T) -> (T, T) {
    let rho_t = arc.state(t);
    let s = rho_t.spectral();
    let p = s.eigenvalues();
    let h = s.to_eigenbasis(arc.h_rel().as_matrix());
    let n = p.len();
    let mut mean = T::zero();
    let mut second = T::zero();
    for i in 0..n {
        mean += p[i] * h[(i, i)].re;
        for j in 0..n {
            second += log_mean_unchecked(p[i], p[j]) * h[(i, j)].norm_sqr();
        }
    }
    (mean, second - mean * mean)
}

/// `‖χ_ρ(ρ_t) - (1 - t)χ_ρ(ρ₀) - tχ_ρ(ρ₁)‖` in operator norm.
pub fn affine_coordinate_check<T: Real>(rho: &DensityMatrix<T>, arc: &ExponentialArc<T>, t: T) -> T {
    let space = GnsSpace::new(rho.clone());
    let at_t = chi_chart(&space, &arc.state(t));
    let k0 = chi_chart(&space, arc.start());
    let k1 = chi_chart(&space, arc.end());
    let combo = k0.scale(T::one() - t).add(&k1.scale(t));
    operator_norm(&(at_t.b() - combo.b()))
}

/// Max over probes of `|d/dt Tr ρ_t A - f_{ρ_t, K}(A)|` with `K = χ_t(ρ₁) - χ_t(ρ₀)`.
pub fn geodesic_tangent_check<T: Real>(arc: &ExponentialArc<T>, t: T) -> T {
    let space = GnsSpace::new(arc.state(t));
    let k = chi_chart(&space, arc.end()).sub(&chi_chart(&space, arc.start()));
    let f = tangent_functional(&space, &k);
    let h = lit::<T>(FD_STEP);
    let plus = arc.state(t + h);
    let minus = arc.state(t - h);
    let diff = plus.matrix().sub(minus.matrix()).scale(T::one() / (h + h));
    hermitian_probe_basis::<T>(space.dim())
        .iter()
        .map(|a| (trace_of_product(diff.as_matrix(), a.as_matrix()).re - f.apply_hermitian(a)).abs())
        .fold(T::zero(), |a, b| a.max(b))
}
