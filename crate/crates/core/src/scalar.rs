//! Scalar abstraction shared by every module.
//!
//! All numerics are generic over a real field `T` (in practice `f32` or
//! `f64`); complex entries are `Complex<T>`. Tolerances are stated for double
//! precision and widened automatically for coarser types.

use nalgebra::{Complex, DMatrix, DVector, RealField};
use num_traits::ToPrimitive;

/// Real scalar usable by the library: `f32` or `f64`.
pub trait Real: RealField + Copy + ToPrimitive {}

impl<T: RealField + Copy + ToPrimitive> Real for T {}

/// Dense complex matrix.
pub type CMatrix<T> = DMatrix<Complex<T>>;
/// Dense real vector.
pub type RVector<T> = DVector<T>;

#[inline]
pub(crate) fn lit<T: Real>(x: f64) -> T {
    nalgebra::convert(x)
}

#[inline]
pub(crate) fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[inline]
pub(crate) fn cplx<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

/// `base` for double precision, or `eps_multiple * epsilon(T)` if that is larger.
pub(crate) fn tolerance<T: Real>(base: f64, eps_multiple: f64) -> T {
    let scaled = lit::<T>(eps_multiple) * T::default_epsilon();
    let base = lit::<T>(base);
    if scaled > base {
        scaled
    } else {
        base
    }
}

/// Modulus of a complex number (the inherent `norm` needs `Float`).
pub(crate) fn cabs<T: Real>(z: Complex<T>) -> T {
    z.re.hypot(z.im)
}

pub(crate) fn cexp<T: Real>(z: Complex<T>) -> Complex<T> {
    let r = z.re.exp();
    Complex::new(r * z.im.cos(), r * z.im.sin())
}

/// Largest entry modulus.
pub(crate) fn max_abs<T: Real>(m: &CMatrix<T>) -> T {
    m.iter().fold(T::zero(), |acc, z| acc.max(cabs(*z)))
}

/// Conjugate transpose without allocation surprises for the common case.
#[inline]
pub(crate) fn adjoint<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    m.adjoint()
}

/// Real part of the trace.
pub(crate) fn trace_re<T: Real>(m: &CMatrix<T>) -> T {
    (0..m.nrows()).fold(T::zero(), |acc, i| acc + m[(i, i)].re)
}

/// `Tr(a b)` without forming the product.
pub(crate) fn trace_of_product<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> Complex<T> {
    let n = a.nrows();
    let mut acc = Complex::new(T::zero(), T::zero());
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// `(m + m†)/2`.
pub(crate) fn symmetrize<T: Real>(m: &CMatrix<T>) -> CMatrix<T> {
    let half = lit::<T>(0.5);
    (m + m.adjoint()).map(|z| z * half)
}

/// Largest singular value.
pub fn operator_norm<T: Real>(m: &CMatrix<T>) -> T {
    if m.is_empty() {
        return T::zero();
    }
    m.clone()
        .singular_values()
        .iter()
        .fold(T::zero(), |acc, &s| acc.max(s))
}

/// Sum of singular values.
pub fn trace_norm<T: Real>(m: &CMatrix<T>) -> T {
    if m.is_empty() {
        return T::zero();
    }
    m.clone().singular_values().iter().fold(T::zero(), |acc, &s| acc + s)
}

/// Hilbert–Schmidt (Frobenius) norm.
pub fn hs_norm<T: Real>(m: &CMatrix<T>) -> T {
    m.iter()
        .fold(T::zero(), |acc, z| acc + z.norm_sqr())
        .sqrt()
}
