use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::{Float, Zero};

use super::vector::Vector;
use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

/// Largest row or column count any constructed matrix may have by default
/// (12 qubits).
pub const DEFAULT_MAX_DIM: usize = 4096;

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds from row-major entries. Fails unless `data.len() == rows * cols`
    /// and every entry is finite.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::shape("matrix dimensions must be positive"));
        }
        if data.len() != rows * cols {
            return Err(Error::shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if !data.iter().all(|x| x.finite()) {
            return Err(Error::domain("matrix entries must be finite"));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds from nested rows; panics on ragged input. Meant for literals.
    pub fn from_rows<R: AsRef<[S]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged matrix literal");
            data.extend_from_slice(r.as_ref());
        }
        Self {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn diag(entries: &[S]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &x) in entries.iter().enumerate() {
            m[(i, i)] = x;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[S] {
        &self.data
    }

    pub fn iter(&self) -> impl Iterator<Item = &S> {
        self.data.iter()
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector<S> {
        Vector::from_fn(self.rows, |i| self[(i, j)])
    }

    pub(crate) fn require_square(&self, what: &str) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::shape(format!(
                "{what} needs a square matrix, got {}x{}",
                self.rows, self.cols
            )))
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(S) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn scale(&self, r: S::Real) -> Self {
        self.map(|x| x.scale(r))
    }

    pub fn mul_scalar(&self, s: S) -> Self {
        self.map(|x| x * s)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> S::Real {
        self.data
            .iter()
            .map(|x| x.norm_sqr())
            .sum::<S::Real>()
            .sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> S::Real {
        (0..self.cols)
            .map(|j| {
                (0..self.rows)
                    .map(|i| self[(i, j)].modulus())
                    .sum::<S::Real>()
            })
            .fold(S::Real::zero(), |a, b| a.max(b))
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> S::Real {
        self.data
            .iter()
            .map(|x| x.modulus())
            .fold(S::Real::zero(), |a, b| a.max(b))
    }

    /// Largest entry-wise modulus of `self - other`. Shapes must agree.
    pub fn max_abs_diff(&self, other: &Self) -> S::Real {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "max_abs_diff on mismatched shapes"
        );
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).modulus())
            .fold(S::Real::zero(), |a, b| a.max(b))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == S::zero() {
                    continue;
                }
                let b_row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &Vector<S>) -> Result<Vector<S>> {
        if self.cols != v.dim() {
            return Err(Error::DimMismatch {
                expected: self.cols,
                got: v.dim(),
            });
        }
        Ok(Vector::from_fn(self.rows, |i| {
            self.row(i)
                .iter()
                .zip(v.as_slice())
                .map(|(&a, &b)| a * b)
                .sum()
        }))
    }

    /// `ab - ba`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        Ok(&self.matmul(other)? - &other.matmul(self)?)
    }

    /// Kronecker product with the default size cap.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        self.kron_capped(other, DEFAULT_MAX_DIM)
    }

    /// Kronecker product: `out[(i*rb + k, j*cb + l)] = a[(i,j)] * b[(k,l)]`.
    pub fn kron_capped(&self, other: &Self, cap: usize) -> Result<Self> {
        let rows = checked_dim(self.rows, other.rows, cap)?;
        let cols = checked_dim(self.cols, other.cols, cap)?;
        let (rb, cb) = (other.rows, other.cols);
        Ok(Self::from_fn(rows, cols, |r, c| {
            self[(r / rb, c / cb)] * other[(r % rb, c % cb)]
        }))
    }

    /// Kronecker product of a list of factors, left to right.
    pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a Self>) -> Result<Self> {
        let mut acc = Self::identity(1);
        for f in factors {
            acc = acc.kron(f)?;
        }
        Ok(acc)
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|x| x.finite())
    }
}

fn checked_dim(a: usize, b: usize, cap: usize) -> Result<usize> {
    match a.checked_mul(b) {
        Some(d) if d <= cap => Ok(d),
        Some(d) => Err(Error::Size { dim: d, cap }),
        None => Err(Error::Size {
            dim: usize::MAX,
            cap,
        }),
    }
}

impl<T: Real> Matrix<T> {
    /// Embeds a real matrix into the complex field.
    pub fn to_complex(&self) -> Matrix<Complex<T>> {
        self.map(Complex::from_real)
    }
}

impl<T: Real> Matrix<Complex<T>> {
    pub fn real_part(&self) -> Matrix<T> {
        self.map(|z| z.re)
    }

    pub fn imag_part(&self) -> Matrix<T> {
        self.map(|z| z.im)
    }

    /// Largest |imaginary part| over all entries.
    pub fn max_imag(&self) -> T {
        self.data
            .iter()
            .map(|z| z.im.abs())
            .fold(T::zero(), |a, b| a.max(b))
    }
}

impl<S> Index<(usize, usize)> for Matrix<S> {
    type Output = S;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &S {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<S> IndexMut<(usize, usize)> for Matrix<S> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<S: Scalar> Add for &Matrix<S> {
    type Output = Matrix<S>;

    fn add(self, rhs: Self) -> Matrix<S> {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "shape mismatch in +"
        );
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }
}

impl<S: Scalar> Sub for &Matrix<S> {
    type Output = Matrix<S>;

    fn sub(self, rhs: Self) -> Matrix<S> {
        assert_eq!(
            (self.rows, self.cols),
            (rhs.rows, rhs.cols),
            "shape mismatch in -"
        );
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }
}

impl<S: Scalar> Neg for &Matrix<S> {
    type Output = Matrix<S>;

    fn neg(self) -> Matrix<S> {
        self.map(|x| -x)
    }
}

/// Panics on inner-dimension mismatch; use [`Matrix::matmul`] for a `Result`.
impl<S: Scalar> Mul for &Matrix<S> {
    type Output = Matrix<S>;

    fn mul(self, rhs: Self) -> Matrix<S> {
        self.matmul(rhs).expect("matrix product shape")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    type C = Complex<f64>;

    #[test]
    fn kron_identity() {
        let i2 = Matrix::<f64>::identity(2);
        assert_eq!(i2.kron(&i2).unwrap(), Matrix::identity(4));
    }

    #[test]
    fn kron_block_structure() {
        let xz = Matrix::from_rows(&[[0.0, -1.0], [1.0, 0.0]]);
        let k = xz.kron(&Matrix::identity(2)).unwrap();
        let expected = Matrix::from_rows(&[
            [0.0, 0.0, -1.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
        ]);
        assert_eq!(k, expected);
    }

    #[test]
    fn kron_at_cap_is_allowed() {
        let a = Matrix::<f64>::identity(64);
        let b = Matrix::<f64>::from_rows(&[[1.0]]);
        assert_eq!(a.kron(&Matrix::identity(64)).unwrap().rows(), 4096);
        assert_eq!(a.kron(&b).unwrap(), a);
    }

    #[test]
    fn kron_over_cap_fails() {
        let a = Matrix::<f64>::identity(65);
        let b = Matrix::<f64>::identity(64);
        assert_eq!(
            a.kron(&b).unwrap_err(),
            Error::Size {
                dim: 4160,
                cap: DEFAULT_MAX_DIM
            }
        );
        assert!(a.kron_capped(&b, 8192).is_ok());
    }

    #[test]
    fn dagger_of_xz() {
        let xz = Matrix::from_rows(&[[c::<f64>(0., 0.), c(-1., 0.)], [c(1., 0.), c(0., 0.)]]);
        let expected = Matrix::from_rows(&[[c::<f64>(0., 0.), c(1., 0.)], [c(-1., 0.), c(0., 0.)]]);
        assert_eq!(xz.dagger(), expected);
        assert_eq!(Matrix::<C>::identity(3).dagger(), Matrix::identity(3));
    }

    #[test]
    fn from_vec_rejects_bad_shapes() {
        assert!(Matrix::<f64>::from_vec(2, 2, vec![1.0; 3]).is_err());
        assert!(Matrix::<f64>::from_vec(1, 1, vec![f64::NAN]).is_err());
        assert!(Matrix::<f64>::from_vec(0, 1, vec![]).is_err());
    }

    #[test]
    fn matmul_shape_error() {
        let a = Matrix::<f64>::zeros(2, 3);
        assert!(matches!(a.matmul(&a), Err(Error::Shape(_))));
    }
}
