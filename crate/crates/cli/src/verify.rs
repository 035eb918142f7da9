//! The verification suite behind `qgeom verify`.
//!
//! Every check maps `(dim, seed)` to a non-negative residual. Inputs are drawn
//! from `stream_rng(seed, stream_id(check) + dim)`, so a row can be reproduced
//! from its three identifying fields alone. Rows are sorted by
//! `(check_name, dim, seed)` whatever order the thread pool finishes in.

use std::io::Write;

use anyhow::{bail, Result};
use nalgebra::{Complex, DVector};
use qgeom::charts::{
    chi_chart, chi_tangent_check, crossover, crossover_linear, frechet_ratio, norm_bound_unnormalized,
    tangent_functional, xi_chart, xi_inverse, MetricSuperoperator,
};
use qgeom::geometry::{
    affine_coordinate_check, bogoliubov_metric, geodesic_tangent_check, metric_fd, metric_via_g, zeta_derivatives,
    ExponentialArc,
};
use qgeom::matfun::{self, conjugation_average, duhamel_sandwich, log_mean};
use qgeom::modular::{
    delta_factorization_check, flow_representation_residual, kms_boundary_residual, modular_flow, modular_operator,
    polar_check, thermal_flow_residual,
};
use qgeom::random::{dirichlet, ginibre, haar_unitary, random_hermitian, splitmix64, stream_id, stream_rng, SeededRng};
use qgeom::scalar::{operator_norm, trace_norm};
use qgeom::states::{expectation, expectation_complex, log_partition, random_faithful, thermal_state, umegaki_divergence};
use qgeom::{CMatrix, CommutantOperator, DensityMatrix, GnsSpace, GnsVector, Hamiltonian, HermitianMatrix};
use rayon::prelude::*;
use serde::Serialize;

type C = Complex<f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    Strict,
    /// Finite-difference comparisons relaxed to 1e-5.
    Fd,
}

impl std::str::FromStr for Profile {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "strict" => Ok(Profile::Strict),
            "fd" => Ok(Profile::Fd),
            other => Err(format!("unknown tolerance profile `{other}` (expected strict or fd)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub check_name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub seed: u64,
    pub dim: usize,
}

pub struct Config {
    pub dims: Vec<usize>,
    pub seeds: u64,
    pub base_seed: u64,
    pub profile: Profile,
    /// Test hook: adds 1 to the residual of the named check.
    pub inject_fault: Option<String>,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            dims: vec![2, 3, 4],
            seeds: 20,
            base_seed: 0,
            profile: Profile::Strict,
            inject_fault: None,
        }
    }
}

pub const MAX_DIM: usize = 8;

const FRECHET_FLOOR: f64 = 1e-8;

/// Per-row input generator.
pub struct Ctx {
    pub n: usize,
    pub seed: u64,
    stream: u64,
}

impl Ctx {
    fn new(name: &str, n: usize, seed: u64) -> Self {
        Self {
            n,
            seed,
            stream: stream_id(name).wrapping_add(n as u64),
        }
    }

    fn rng(&self, salt: u64) -> SeededRng {
        stream_rng(self.seed, self.stream ^ splitmix64(salt))
    }

    fn state(&self, salt: u64) -> DensityMatrix<f64> {
        let key = splitmix64(self.seed ^ splitmix64(self.stream ^ splitmix64(salt)));
        random_faithful(self.n, key, 0.02 / self.n as f64).expect("valid floor")
    }

    fn space(&self, salt: u64) -> GnsSpace<f64> {
        GnsSpace::new(self.state(salt))
    }

    fn hermitian(&self, rng: &mut SeededRng) -> HermitianMatrix<f64> {
        random_hermitian(rng, self.n)
    }

    fn complex(&self, rng: &mut SeededRng) -> CMatrix<f64> {
        ginibre(rng, self.n)
    }

    fn spectrum(&self, rng: &mut SeededRng) -> Vec<f64> {
        let floor = 0.01 / self.n as f64;
        dirichlet(rng, self.n)
            .into_iter()
            .map(|w| (1.0 - self.n as f64 * floor) * w + floor)
            .collect()
    }
}

struct Check {
    name: &'static str,
    tolerance: f64,
    finite_difference: bool,
    run: fn(&Ctx) -> f64,
}

fn max_entry(m: &CMatrix<f64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn excess(value: f64) -> f64 {
    value.max(0.0)
}

fn gauss_legendre_64() -> (Vec<f64>, Vec<f64>) {
    let n = 64;
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let pk = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = pk;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        nodes.push(0.5 * (1.0 - x));
        weights.push(1.0 / ((1.0 - x * x) * dp * dp));
    }
    (nodes, weights)
}

/// `(ρ, u ↦ ρ^u)` with `ρ = U diag(p) U†` built from known factors.
fn factored(ctx: &Ctx, rng: &mut SeededRng) -> (DensityMatrix<f64>, impl Fn(f64) -> CMatrix<f64>) {
    let p = ctx.spectrum(rng);
    let u: CMatrix<f64> = haar_unitary(rng, ctx.n);
    let diag = move |s: f64| CMatrix::from_diagonal(&DVector::from_iterator(p.len(), p.iter().map(|x| C::new(x.powf(s), 0.0))));
    let m = &u * diag(1.0) * u.adjoint();
    let rho = DensityMatrix::new(HermitianMatrix::new(m).unwrap()).unwrap();
    let power = move |s: f64| &u * diag(s) * u.adjoint();
    (rho, power)
}

fn quadrature(f: impl Fn(f64) -> CMatrix<f64>, n: usize) -> CMatrix<f64> {
    let (x, w) = gauss_legendre_64();
    x.iter()
        .zip(&w)
        .fold(CMatrix::zeros(n, n), |acc, (u, wi)| acc + f(*u) * C::new(*wi, 0.0))
}

fn checks() -> Vec<Check> {
    vec![
        Check {
            name: "matfun.duhamel_quadrature",
            tolerance: 1e-9,
            finite_difference: false,
            run: |c| {
                let mut rng = c.rng(1);
                let (rho, power) = factored(c, &mut rng);
                let a = c.hermitian(&mut rng);
                let oracle = quadrature(|u| power(u) * a.as_matrix() * power(1.0 - u), c.n);
                max_entry(&(duhamel_sandwich(&rho, &a).as_matrix() - oracle))
            },
        },
        Check {
            name: "matfun.conjugation_quadrature",
            tolerance: 1e-9,
            finite_difference: false,
            run: |c| {
                let mut rng = c.rng(1);
                let (rho, power) = factored(c, &mut rng);
                let a = c.complex(&mut rng);
                let oracle = quadrature(|u| power(u) * &a * power(-u), c.n);
                max_entry(&(conjugation_average(&rho, &a) - oracle))
            },
        },
        Check {
            name: "matfun.log_mean_symmetry",
            tolerance: 1e-15,
            finite_difference: false,
            run: |c| {
                let p = c.spectrum(&mut c.rng(1));
                let mut worst = 0.0f64;
                for &x in &p {
                    for &y in &p {
                        let l = log_mean(x, y).unwrap();
                        worst = worst.max((l - log_mean(y, x).unwrap()).abs() / l);
                        // monotone in the first argument
                        worst = worst.max(excess(l - log_mean(x * 1.5, y).unwrap()));
                    }
                }
                worst
            },
        },
        Check {
            name: "matfun.spectral_composition",
            tolerance: 1e-11,
            finite_difference: false,
            run: |c| {
                let rho = c.state(1);
                let s = rho.spectral();
                let direct = matfun::apply_function(s, |x| x.sqrt().ln()).unwrap();
                let root = matfun::pow_spectral(s, 0.5).unwrap();
                let seq = matfun::log_spectral(&matfun::spectral(&root)).unwrap();
                max_entry(&(direct.as_matrix() - seq.as_matrix()))
            },
        },
        Check {
            name: "states.thermal_expectation",
            tolerance: 1e-10,
            finite_difference: false,
            run: |c| {
                let mut rng = c.rng(1);
                let h = c.hermitian(&mut rng);
                let a = c.hermitian(&mut rng);
                let beta = 0.3 + (c.seed % 7) as f64 * 0.4;
                let ham = Hamiltonian::new(h.clone());
                let rho = thermal_state(&ham, beta).unwrap();
                let z = log_partition(&ham, beta).exp();
                let e = matfun::apply_function(&matfun::spectral(&h), |x| (-beta * x).exp()).unwrap();
                let direct = qgeom::scalar::operator_norm(&(e.as_matrix() * a.as_matrix()));
                let lhs = expectation(&rho, &a) * z;
                let rhs = (e.as_matrix() * a.as_matrix()).trace().re;
                (lhs - rhs).abs() / direct.max(1.0)
            },
        },
        Check {
            name: "states.classical_kl",
            tolerance: 1e-11,
            finite_difference: false,
            run: |c| {
                let mut rng = c.rng(1);
                let (p, q) = (c.spectrum(&mut rng), c.spectrum(&mut rng));
                let kl: f64 = p.iter().zip(&q).map(|(a, b)| a * (a / b).ln()).sum();
                let d = umegaki_divergence(&DensityMatrix::diagonal(&p).unwrap(), &DensityMatrix::diagonal(&q).unwrap());
                (d - kl).abs()
            },
        },
        Check {
            name: "states.joint_positivity",
            tolerance: 1e-12,
            finite_difference: false,
            run: |c| {
                let (s, t) = (c.state(1), c.state(2));
                let joint = umegaki_divergence(&s, &t) + umegaki_divergence(&t, &s);
                excess(-joint) + umegaki_divergence(&s, &s).abs()
            },
        },
        Check {
            name: "gns.commutant_commutes",
            tolerance: 1e-11,
            finite_difference: false,
            run: |c| {
                let space = c.space(1);
                let mut rng = c.rng(2);
                let a = c.complex(&mut rng);
                let k = CommutantOperator::new(c.complex(&mut rng));
                let v = GnsVector::new(c.complex(&mut rng));
                let lhs = space.pi_apply(&a, &space.commutant_apply(&k, &v));
                let rhs = space.commutant_apply(&k, &space.pi_apply(&a, &v));
                lhs.sub(&rhs).norm() / (operator_norm(&a) * k.operator_norm() * v.norm())
            },
        },
        Check {
            name: "gns.cyclic_separating",
            tolerance: 0.0,
            finite_difference: false,
            run: |c| {
                let report = c.space(1).check_cyclic_separating();
                (report.expected_rank - report.rank) as f64
            },
        },
        Check {
            name: "gns.state_reconstruction",
            tolerance: 1e-10,
            finite_difference: false,
            run: |c| {
                let space = c.space(1);
                let sigma = c.state(2);
                let x = space.represent_state(&sigma);
                let root = x.map_spectrum(f64::sqrt).unwrap();
                let v = space.commutant_apply(&root, &space.omega_vector());
                let mut rng = c.rng(3);
                (0..50)
                    .map(|_| {
                        let a = c.complex(&mut rng);
                        (expectation_complex(&sigma, &a) - space.vector_expectation(&a, &v)).norm()
                    })
                    .fold(0.0, f64::max)
            },
        },
        Check {
            name: "charts.xi_round_trip",
            tolerance: 1e-10,
            finite_difference: false,
            run: |c| {
                let space = c.space(1);
                let sigma = c.state(2);
                let back = xi_inverse(&space, &xi_chart(&space, &sigma));
                trace_norm(&(back.matrix().as_matrix() - sigma.matrix().as_matrix()))
            },
        },
        Check {
            name: "charts.xi_inverse_round_trip",
            tolerance: 1e-10,
            finite_difference: false,
            run: |c| {
                let space = c.space(1);
                let k = xi_chart(&space, &c.state(2));
                let again = xi_chart(&space, &xi_inverse(&space, &k));
                operator_norm(&(again.b() - k.b()))
            },
        },
        Check {
            name: "charts.xi_center",
            tolerance: 1e-12,
            finite_difference: false,
            run: |c| {
                let space = c.space(1);
                xi_chart(&space, space.reference()).norm()
            },
        },
        Check {
            name: "charts.tangent_bound",
            tolerance: 1e-12,
            finite_difference: false,
            run: |c| {
                let space = c.space(1);
                let k = chi_chart(&space, &c.state(2));
                excess(tangent_functional(&space, &k).norm() - k.norm())
            },
        },
        Check {
            name: "charts.chi_tangent",
            tolerance: 1e-6,
            finite_difference: true,
            run: |c| chi_tangent_check(&c.space(1), &c.state(2)),
        },
        Check {
            name: "charts.frechet_first_order",
            tolerance: 0.05,
            finite_difference: false,
            run: |c| {
                let space = c.space(1);
                let k = xi_chart(&space, &c.state(2));
                let k = k.scale(1.0 / k.norm());
                // the remainder is o(t): halving t at least halves the ratio. Read
                // above the round-off floor only, since the t² term can vanish (ρ = I/2)
                let r = |j: i32| frechet_ratio(&space, &k, 0.5f64.powi(j));
                let (r15, r16) = (r(15), r(16));
                if r16 > FRECHET_FLOOR {
                    excess(r16 / r15 - 0.5)
                } else {
                    0.0
                }
            },
        },
        Check {
            name: "charts.crossover_linearity",
            tolerance: 1e-10,
            finite_difference: false,
            run: |c| {
                let (s1, s2) = (c.space(1), c.space(2));
                let k1 = xi_chart(&s1, &c.state(3));
                let k2 = xi_chart(&s1, &c.state(4));
                let combo = crossover_linear(&s1, &s2, &k1.scale(0.7).add(&k2.scale(-1.3)));
                let parts = crossover_linear(&s1, &s2, &k1)
                    .scale(0.7)
                    .add(&crossover_linear(&s1, &s2, &k2).scale(-1.3));
                operator_norm(&(combo.b() - parts.b()))
            },
        },
        Check {
            name: "charts.crossover_composition",
            tolerance: 1e-10,
            finite_difference: false,
            run: |c| {
                let (s1, s2) = (c.space(1), c.space(2));
                let k = xi_chart(&s1, &c.state(3));
                let a = xi_inverse(&s2, &crossover(&s1, &s2, &k));
                let b = xi_inverse(&s1, &k);
                trace_norm(&(a.matrix().as_matrix() - b.matrix().as_matrix()))
            },
        },
        Check {
            name: "charts.norm_bound_unnormalized",
            tolerance: 1e-12,
            finite_difference: false,
            run: |c| {
                let b = norm_bound_unnormalized(&c.state(1), &c.state(2), &c.state(3), &c.state(4));
                excess(b.lhs - b.rhs) / b.rhs.max(1.0)
            },
        },
        Check {
            name: "charts.metric_operator_positive",
            tolerance: 0.0,
            finite_difference: false,
            run: |c| excess(-MetricSuperoperator::new(&c.space(1)).min_multiplier()),
        },
        Check {
            name: "geometry.metric_integral_vs_g",
            tolerance: 1e-9,
            finite_difference: false,
            run: |c| {
                let (r, a, b) = (c.state(1), c.state(2), c.state(3));
                (bogoliubov_metric(&r, &a, &b) - metric_via_g(&r, &a, &b)).abs()
            },
        },
        Check {
            name: "geometry.metric_fd",
            tolerance: 1e-5,
            finite_difference: true,
            run: |c| {
                let (r, a, b) = (c.state(1), c.state(2), c.state(3));
                (bogoliubov_metric(&r, &a, &b) - metric_fd(&r, &a, &b, 1e-4).unwrap()).abs()
            },
        },
        Check {
            name: "geometry.metric_symmetry",
            tolerance: 1e-11,
            finite_difference: false,
            run: |c| {
                let (r, a, b) = (c.state(1), c.state(2), c.state(3));
                (bogoliubov_metric(&r, &a, &b) - bogoliubov_metric(&r, &b, &a)).abs()
            },
        },
        Check {
            name: "geometry.zeta_endpoints",
            tolerance: 1e-10,
            finite_difference: false,
            run: |c| {
                let (r0, r1) = (c.state(1), c.state(2));
                let arc = ExponentialArc::new(r0.clone(), r1.clone());
                let slopes = (zeta_derivatives(&arc, 0.0).0 + umegaki_divergence(&r0, &r1)).abs()
                    + (zeta_derivatives(&arc, 1.0).0 - umegaki_divergence(&r1, &r0)).abs();
                arc.zeta(0.0).abs().max(arc.zeta(1.0).abs()).max(slopes)
            },
        },
        Check {
            name: "geometry.zeta_shape",
            tolerance: 1e-10,
            finite_difference: false,
            run: |c| {
                // ζ ≤ 0 inside, ζ'' ≥ 0 and ζ' nondecreasing on a 101-point grid
                let arc = ExponentialArc::new(c.state(1), c.state(2));
                let mut worst = 0.0f64;
                let mut last = f64::NEG_INFINITY;
                for i in 0..=100 {
                    let t = i as f64 / 100.0;
                    let (zd, zdd) = zeta_derivatives(&arc, t);
                    worst = worst.max(excess(arc.zeta(t))).max(excess(-zdd));
                    worst = worst.max(excess(last - zd));
                    last = zd;
                }
                worst
            },
        },
        Check {
            name: "geometry.zeta_derivative_identity",
            tolerance: 1e-10,
            finite_difference: false,
            run: |c| {
                let (r0, r1) = (c.state(1), c.state(2));
                let arc = ExponentialArc::new(r0.clone(), r1.clone());
                (1..10)
                    .map(|i| {
                        let t = i as f64 / 10.0;
                        let rt = arc.state(t);
                        let zd = zeta_derivatives(&arc, t).0;
                        (zd - expectation(&rt, arc.h_rel()))
                            .abs()
                            .max((zd - umegaki_divergence(&rt, &r0) + umegaki_divergence(&rt, &r1)).abs())
                    })
                    .fold(0.0, f64::max)
            },
        },
        Check {
            name: "geometry.chi_affine",
            tolerance: 1e-9,
            finite_difference: false,
            run: |c| {
                let arc = ExponentialArc::new(c.state(1), c.state(2));
                let center = c.state(3);
                (1..10)
                    .map(|i| affine_coordinate_check(&center, &arc, i as f64 / 10.0))
                    .fold(0.0, f64::max)
            },
        },
        Check {
            name: "geometry.geodesic_tangent",
            tolerance: 1e-6,
            finite_difference: true,
            run: |c| {
                let arc = ExponentialArc::new(c.state(1), c.state(2));
                [0.1, 0.5, 0.9].iter().map(|&t| geodesic_tangent_check(&arc, t)).fold(0.0, f64::max)
            },
        },
        Check {
            name: "geometry.arc_reparametrization",
            tolerance: 1e-10,
            finite_difference: false,
            run: |c| {
                let arc = ExponentialArc::new(c.state(1), c.state(2));
                let (a, b) = (0.2, 0.7);
                let sub = ExponentialArc::new(arc.state(a), arc.state(b));
                [0.25, 0.5, 0.9]
                    .iter()
                    .map(|&t| max_entry(&(sub.state(t).matrix().as_matrix() - arc.state((1.0 - t) * a + t * b).matrix().as_matrix())))
                    .fold(0.0, f64::max)
            },
        },
        Check {
            name: "modular.delta_fixes_omega",
            tolerance: 1e-12,
            finite_difference: false,
            run: |c| {
                let space = c.space(1);
                let om = space.omega_vector();
                modular_operator(&space).apply(&om).sub(&om).norm()
            },
        },
        Check {
            name: "modular.polar_decomposition",
            tolerance: 1e-10,
            finite_difference: false,
            run: |c| polar_check(&c.space(1)),
        },
        Check {
            name: "modular.delta_factorization",
            tolerance: 1e-10,
            finite_difference: false,
            run: |c| delta_factorization_check(&c.space(1)),
        },
        Check {
            name: "modular.flow_group_law",
            tolerance: 1e-11,
            finite_difference: false,
            run: |c| {
                let space = c.space(1);
                let a = c.complex(&mut c.rng(2));
                let (s, t) = (0.4 + 0.1 * (c.seed % 20) as f64, -1.3);
                let lhs = modular_flow(&space, &modular_flow(&space, &a, t), s);
                max_entry(&(lhs - modular_flow(&space, &a, s + t))) / operator_norm(&a)
            },
        },
        Check {
            name: "modular.flow_in_algebra",
            tolerance: 1e-11,
            finite_difference: false,
            run: |c| {
                let a = c.complex(&mut c.rng(2));
                flow_representation_residual(&c.space(1), &a, 0.9) / operator_norm(&a)
            },
        },
        Check {
            name: "modular.kms_boundary",
            tolerance: 1e-10,
            finite_difference: false,
            run: |c| {
                let space = c.space(1);
                let mut rng = c.rng(2);
                let (a, b) = (c.hermitian(&mut rng), c.hermitian(&mut rng));
                let t = -2.0 + 0.2 * (c.seed % 20) as f64;
                kms_boundary_residual(&space, &a, &b, t)
            },
        },
        Check {
            name: "modular.thermal_heisenberg",
            tolerance: 1e-10,
            finite_difference: false,
            run: |c| {
                let mut rng = c.rng(1);
                let h = Hamiltonian::new(c.hermitian(&mut rng));
                let a = c.complex(&mut rng);
                thermal_flow_residual(&h, 0.5 + 0.1 * (c.seed % 10) as f64, &a, 1.7).unwrap()
            },
        },
    ]
}

pub fn check_names() -> Vec<&'static str> {
    checks().iter().map(|c| c.name).collect()
}

pub fn run(config: &Config) -> Result<Vec<ReportRow>> {
    if config.dims.is_empty() {
        bail!("configuration error: --dims is empty");
    }
    if let Some(&d) = config.dims.iter().find(|&&d| !(2..=MAX_DIM).contains(&d)) {
        bail!("configuration error: dimension {d} outside 2..={MAX_DIM}");
    }
    if config.seeds == 0 {
        bail!("configuration error: --seeds must be at least 1");
    }
    let all = checks();
    if let Some(name) = &config.inject_fault {
        if !all.iter().any(|c| c.name == name) {
            bail!("configuration error: unknown check `{name}` for fault injection");
        }
    }
    let mut dims = config.dims.clone();
    dims.sort_unstable();
    dims.dedup();
    let jobs: Vec<(&Check, usize, u64)> = all
        .iter()
        .flat_map(|c| {
            dims.iter()
                .flat_map(move |&d| (0..config.seeds).map(move |s| (c, d, config.base_seed.wrapping_add(s))))
        })
        .collect();
    let mut rows: Vec<ReportRow> = jobs
        .par_iter()
        .map(|&(check, dim, seed)| {
            let mut residual = (check.run)(&Ctx::new(check.name, dim, seed));
            if config.inject_fault.as_deref() == Some(check.name) {
                residual += 1.0;
            }
            let tolerance = if check.finite_difference && config.profile == Profile::Fd {
                check.tolerance.max(1e-5)
            } else {
                check.tolerance
            };
            ReportRow {
                check_name: check.name.to_string(),
                residual,
                tolerance,
                // NaN residuals fail
                passed: residual <= tolerance,
                seed,
                dim,
            }
        })
        .collect();
    rows.sort_by(|a, b| (&a.check_name, a.dim, a.seed).cmp(&(&b.check_name, b.dim, b.seed)));
    Ok(rows)
}

pub fn write_csv<W: Write>(rows: &[ReportRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
