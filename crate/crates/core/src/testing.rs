use crate::matfun::HermitianMatrix;
use crate::random::{self, SeededRng};
use crate::scalar::{CMatrix, Real};

pub fn seeded(seed: u64) -> SeededRng {
    random::stream_rng(seed, 0x7e57)
}

pub fn random_hermitian<T: Real>(rng: &mut SeededRng, n: usize) -> HermitianMatrix<T> {
    random::random_hermitian(rng, n)
}

pub fn random_complex<T: Real>(rng: &mut SeededRng, n: usize) -> CMatrix<T> {
    random::ginibre(rng, n)
}
