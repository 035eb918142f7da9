//! Reproducible random matrices.
//!
//! All randomness derives from one 64-bit seed. A generator for a given
//! `(seed, stream)` pair is a ChaCha8 stream keyed by
//! `splitmix64(seed ^ splitmix64(stream))`, so independent checks draw from
//! independent streams regardless of evaluation order.

use nalgebra::{Complex, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::matfun::HermitianMatrix;
use crate::scalar::{lit, CMatrix, Real};

pub type SeededRng = ChaCha8Rng;

/// splitmix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator for stream `stream` of the master seed `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(splitmix64(seed ^ splitmix64(stream)))
}

/// Stable 64-bit stream id for a label, so streams can be named.
pub fn stream_id(label: &str) -> u64 {
    // FNV-1a
    label.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01B3)
    })
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Complex Ginibre matrix with i.i.d. standard complex normal entries.
pub fn ginibre<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix<T> {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_fn(n, n, |_, _| {
        Complex::new(lit(normal(rng) * scale), lit(normal(rng) * scale))
    })
}

/// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
pub fn haar_unitary<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix<T> {
    let g = ginibre::<T, R>(rng, n);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let m = crate::scalar::cabs(d);
        if m > T::zero() {
            let phase = d / Complex::new(m, T::zero());
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
    }
    q
}

/// Hermitian matrix `(G + G†)/2` with Ginibre `G`.
pub fn random_hermitian<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> HermitianMatrix<T> {
    HermitianMatrix::from_symmetrized(&ginibre::<T, R>(rng, n))
}

/// Flat Dirichlet draw on the simplex.
pub fn dirichlet<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let gamma = Gamma::new(1.0, 1.0).expect("valid gamma parameters");
    let draws: Vec<f64> = (0..n).map(|_| f64::max(gamma.sample(rng), f64::MIN_POSITIVE)).collect();
    let total: f64 = draws.iter().sum();
    draws.into_iter().map(|x| x / total).collect()
}

/// Eigenvalues `(1 - N·m)·w + m` for a Dirichlet draw `w`: all at least `m`, summing to one.
pub(crate) fn floored_simplex<R: Rng + ?Sized>(rng: &mut R, n: usize, min_eig: f64) -> DVector<f64> {
    let mix = n as f64 * min_eig;
    let w = dirichlet(rng, n);
    DVector::from_iterator(n, w.into_iter().map(|x| (1.0 - mix) * x + min_eig))
}
