//! Hermitian spectral calculus and the Duhamel-type integral transforms.
//!
//! Every integral of the form `∫₀¹ ρ^u A ρ^{v(u)} du` that appears in the
//! geometry is diagonal in the eigenbasis of ρ: the `(i, j)` entry picks up a
//! scalar factor built from the logarithmic mean `L(p_i, p_j)`. The transforms
//! here evaluate those factors in closed form, so no quadrature is involved.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::scalar::{cplx, lit, max_abs, symmetrize, to_f64, tolerance, CMatrix, Real};
use crate::states::DensityMatrix;

/// Relative Hermiticity tolerance for double precision.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Complex Hermitian matrix, symmetrized on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix<T: Real> {
    entries: CMatrix<T>,
}

impl<T: Real> HermitianMatrix<T> {
    /// Validates `m = m†` to a relative tolerance of 1e-12, then stores `(m + m†)/2`.
    pub fn new(m: CMatrix<T>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        if m.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite("Hermitian matrix entries"));
        }
        let scale = max_abs(&m);
        let asym = max_abs(&(&m - m.adjoint()));
        let tol = tolerance::<T>(HERMITIAN_TOL, 64.0) * scale.max(T::default_epsilon());
        if asym > tol {
            let rel = if scale > T::zero() { asym / scale } else { asym };
            return Err(Error::NotHermitian(to_f64(rel)));
        }
        Ok(Self {
            entries: symmetrize(&m),
        })
    }

    /// Wraps a matrix that is Hermitian by construction, symmetrizing away round-off.
    pub(crate) fn from_symmetrized(m: &CMatrix<T>) -> Self {
        Self {
            entries: symmetrize(m),
        }
    }

    pub fn from_real(m: &DMatrix<T>) -> Result<Self> {
        Self::new(m.map(cplx))
    }

    /// Builds from row-major real and imaginary parts.
    pub fn from_parts(dim: usize, re: &[T], im: &[T]) -> Result<Self> {
        if re.len() != dim * dim || im.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: re.len().min(im.len()),
            });
        }
        Self::new(CMatrix::from_fn(dim, dim, |i, j| {
            Complex::new(re[i * dim + j], im[i * dim + j])
        }))
    }

    pub fn diagonal(values: &[T]) -> Self {
        let n = values.len();
        Self {
            entries: CMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    cplx(values[i])
                } else {
                    Complex::new(T::zero(), T::zero())
                }
            }),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            entries: CMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            entries: CMatrix::zeros(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn as_matrix(&self) -> &CMatrix<T> {
        &self.entries
    }

    pub fn into_matrix(self) -> CMatrix<T> {
        self.entries
    }

    pub fn scale(&self, c: T) -> Self {
        Self {
            entries: self.entries.map(|z| z * c),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_symmetrized(&(&self.entries + &other.entries))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_symmetrized(&(&self.entries - &other.entries))
    }

    /// `self + c·I`.
    pub fn shift(&self, c: T) -> Self {
        let mut m = self.entries.clone();
        for i in 0..m.nrows() {
            m[(i, i)].re += c;
        }
        Self { entries: m }
    }

    pub fn trace(&self) -> T {
        crate::scalar::trace_re(&self.entries)
    }
}

/// Eigenvalues in ascending order with the matching unitary of column eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition<T: Real> {
    eigenvalues: DVector<T>,
    eigenvectors: CMatrix<T>,
}

impl<T: Real> SpectralDecomposition<T> {
    pub fn eigenvalues(&self) -> &DVector<T> {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &CMatrix<T> {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min_eigenvalue(&self) -> T {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> T {
        self.eigenvalues[self.dim() - 1]
    }

    /// `U† m U`.
    pub fn to_eigenbasis(&self, m: &CMatrix<T>) -> CMatrix<T> {
        self.eigenvectors.adjoint() * m * &self.eigenvectors
    }

    /// `U m U†`.
    pub fn from_eigenbasis(&self, m: &CMatrix<T>) -> CMatrix<T> {
        &self.eigenvectors * m * self.eigenvectors.adjoint()
    }

    /// Same eigenvectors, new eigenvalues (re-sorted).
    pub(crate) fn with_eigenvalues(&self, values: DVector<T>) -> Self {
        sorted(values, self.eigenvectors.clone())
    }

    pub fn reconstruct(&self) -> HermitianMatrix<T> {
        let d = CMatrix::from_diagonal(&self.eigenvalues.map(cplx));
        HermitianMatrix::from_symmetrized(&self.from_eigenbasis(&d))
    }
}

fn sorted<T: Real>(values: DVector<T>, vectors: CMatrix<T>) -> SpectralDecomposition<T> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        values[a]
            .partial_cmp(&values[b])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let eigenvalues = DVector::from_fn(n, |i, _| values[order[i]]);
    let eigenvectors = CMatrix::from_fn(n, n, |r, c| vectors[(r, order[c])]);
    SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// Eigendecomposition of a Hermitian matrix.
pub fn spectral<T: Real>(h: &HermitianMatrix<T>) -> SpectralDecomposition<T> {
    let eig = SymmetricEigen::new(h.as_matrix().clone());
    sorted(eig.eigenvalues, eig.eigenvectors)
}

/// `U·diag(f(λ))·U†`. Fails with [`Error::Domain`] if `f` is not finite on some eigenvalue.
pub fn apply_function<T: Real, F>(s: &SpectralDecomposition<T>, f: F) -> Result<HermitianMatrix<T>>
where
    F: Fn(T) -> T,
{
    let mut mapped = DVector::zeros(s.dim());
    for (dst, &lambda) in mapped.iter_mut().zip(s.eigenvalues.iter()) {
        let v = f(lambda);
        if !v.is_finite() {
            return Err(Error::Domain(to_f64(lambda)));
        }
        *dst = v;
    }
    Ok(s.with_eigenvalues(mapped).reconstruct())
}

/// Spectral logarithm; requires a strictly positive spectrum.
pub fn log_spectral<T: Real>(s: &SpectralDecomposition<T>) -> Result<HermitianMatrix<T>> {
    if s.min_eigenvalue() <= T::zero() {
        return Err(Error::Domain(to_f64(s.min_eigenvalue())));
    }
    apply_function(s, |x| x.ln())
}

pub fn exp_spectral<T: Real>(s: &SpectralDecomposition<T>) -> Result<HermitianMatrix<T>> {
    apply_function(s, |x| x.exp())
}

/// `x^power` on the spectrum; requires a strictly positive spectrum.
pub fn pow_spectral<T: Real>(s: &SpectralDecomposition<T>, power: T) -> Result<HermitianMatrix<T>> {
    if s.min_eigenvalue() <= T::zero() {
        return Err(Error::Domain(to_f64(s.min_eigenvalue())));
    }
    apply_function(s, |x| x.powf(power))
}

/// Threshold on `|r - 1|` below which `(r - 1)/ln r` switches to its series.
fn series_threshold<T: Real>() -> T {
    tolerance::<T>(1e-6, 1e5)
}

/// `h(r) = (r - 1)/ln r`, with `h(1) = 1`.
fn log_mean_ratio<T: Real>(r: T) -> T {
    let e = r - T::one();
    if e.abs() < series_threshold::<T>() {
        // 1 + e/2 - e²/12 + e³/24
        let half = lit::<T>(0.5);
        let twelfth = lit::<T>(1.0 / 12.0);
        let c3 = lit::<T>(1.0 / 24.0);
        T::one() + e * (half + e * (-twelfth + e * c3))
    } else {
        e / r.ln()
    }
}

/// Logarithmic mean `∫₀¹ x^u y^{1-u} du = (x - y)/(ln x - ln y)`, `L(x, x) = x`.
///
/// Symmetric bit-for-bit: the arguments are ordered before evaluation.
pub fn log_mean<T: Real>(x: T, y: T) -> Result<T> {
    if !(x > T::zero()) {
        return Err(Error::Domain(to_f64(x)));
    }
    if !(y > T::zero()) {
        return Err(Error::Domain(to_f64(y)));
    }
    Ok(log_mean_unchecked(x, y))
}

#[inline]
pub(crate) fn log_mean_unchecked<T: Real>(x: T, y: T) -> T {
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    hi * log_mean_ratio(lo / hi)
}

/// Matrix of `L(p_i, p_j)` for a strictly positive spectrum.
pub(crate) fn log_mean_kernel<T: Real>(p: &DVector<T>) -> DMatrix<T> {
    let n = p.len();
    DMatrix::from_fn(n, n, |i, j| log_mean_unchecked(p[i], p[j]))
}

/// `∫₀¹ ρ^u A ρ^{1-u} du` for any strictly positive spectrum.
pub(crate) fn duhamel_with<T: Real>(s: &SpectralDecomposition<T>, a: &CMatrix<T>) -> CMatrix<T> {
    let kernel = log_mean_kernel(s.eigenvalues());
    let mut at = s.to_eigenbasis(a);
    at.zip_apply(&kernel, |z, k| *z *= k);
    s.from_eigenbasis(&at)
}

/// `∫₀¹ ρ^u A ρ^{-u} du` for any strictly positive spectrum.
pub(crate) fn conjugation_average_with<T: Real>(
    s: &SpectralDecomposition<T>,
    a: &CMatrix<T>,
) -> CMatrix<T> {
    let p = s.eigenvalues();
    let mut at = s.to_eigenbasis(a);
    for j in 0..at.ncols() {
        for i in 0..at.nrows() {
            at[(i, j)] *= log_mean_unchecked(p[i], p[j]) / p[j];
        }
    }
    s.from_eigenbasis(&at)
}

/// Duhamel sandwich `∫₀¹ ρ^u A ρ^{1-u} du`.
pub fn duhamel_sandwich<T: Real>(rho: &DensityMatrix<T>, a: &HermitianMatrix<T>) -> HermitianMatrix<T> {
    HermitianMatrix::from_symmetrized(&duhamel_with(rho.spectral(), a.as_matrix()))
}

/// Averaged conjugation `∫₀¹ ρ^u A ρ^{-u} du`. Not Hermitian in general.
pub fn conjugation_average<T: Real>(rho: &DensityMatrix<T>, a: &CMatrix<T>) -> CMatrix<T> {
    conjugation_average_with(rho.spectral(), a)
}
