#![allow(dead_code)]

use nalgebra::{Complex, DMatrix, DVector};
use qgeom::random::{dirichlet, ginibre, haar_unitary, stream_rng, SeededRng};
use qgeom::states::random_faithful;
use qgeom::{CMatrix, DensityMatrix, HermitianMatrix};

pub type C = Complex<f64>;

pub fn rng(seed: u64, label: u64) -> SeededRng {
    stream_rng(seed, label)
}

pub fn state(n: usize, seed: u64) -> DensityMatrix<f64> {
    random_faithful(n, seed, 0.02 / n as f64).unwrap()
}

pub fn hermitian(rng: &mut SeededRng, n: usize) -> HermitianMatrix<f64> {
    qgeom::random::random_hermitian(rng, n)
}

pub fn complex(rng: &mut SeededRng, n: usize) -> CMatrix<f64> {
    ginibre(rng, n)
}

/// Strictly positive point of the simplex with every entry at least `floor`.
pub fn spectrum(rng: &mut SeededRng, n: usize, floor: f64) -> Vec<f64> {
    dirichlet(rng, n)
        .into_iter()
        .map(|w| (1.0 - n as f64 * floor) * w + floor)
        .collect()
}

/// A state together with the unitary and spectrum it was built from.
pub struct Factored {
    pub rho: DensityMatrix<f64>,
    pub u: CMatrix<f64>,
    pub p: Vec<f64>,
}

impl Factored {
    pub fn new(rng: &mut SeededRng, p: Vec<f64>) -> Self {
        let n = p.len();
        let u: CMatrix<f64> = haar_unitary(rng, n);
        let d = CMatrix::from_diagonal(&DVector::from_iterator(n, p.iter().map(|&x| C::new(x, 0.0))));
        let m = &u * d * u.adjoint();
        let rho = DensityMatrix::new(HermitianMatrix::new(m).unwrap()).unwrap();
        Self { rho, u, p }
    }

    /// `ρ^s` from the known factors.
    pub fn power(&self, s: f64) -> CMatrix<f64> {
        let n = self.p.len();
        let d = CMatrix::from_diagonal(&DVector::from_iterator(n, self.p.iter().map(|&x| C::new(x.powf(s), 0.0))));
        &self.u * d * self.u.adjoint()
    }
}

/// Gauss–Legendre nodes and weights mapped to [0, 1]; Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
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
        nodes[i] = 0.5 * (1.0 - x);
        weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// `∫₀¹ f(u) du` by 64-point Gauss–Legendre.
pub fn quadrature<F: Fn(f64) -> CMatrix<f64>>(f: F) -> CMatrix<f64> {
    let (x, w) = gauss_legendre(64);
    let mut acc: Option<CMatrix<f64>> = None;
    for (u, wi) in x.iter().zip(&w) {
        let term = f(*u) * C::new(*wi, 0.0);
        acc = Some(match acc {
            Some(a) => a + term,
            None => term,
        });
    }
    acc.unwrap()
}

pub fn max_entry(m: &CMatrix<f64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn real_diag(v: &[f64]) -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_column_slice(v))
}
