use std::ops::{Add, Index, IndexMut, Sub};

use num_complex::Complex;
use num_traits::{Float, One, Zero};

use super::matrix::{Matrix, DEFAULT_MAX_DIM};
use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

/// Dense column vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector<S> {
    data: Vec<S>,
}

impl<S: Scalar> Vector<S> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            data: vec![S::zero(); dim],
        }
    }

    /// Computational basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.data[index] = S::one();
        v
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize) -> S) -> Self {
        Self {
            data: (0..dim).map(f).collect(),
        }
    }

    pub fn from_vec(data: Vec<S>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::shape("vector must be non-empty"));
        }
        if !data.iter().all(|x| x.finite()) {
            return Err(Error::domain("vector entries must be finite"));
        }
        Ok(Self { data })
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[S] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<S> {
        self.data
    }

    pub fn iter(&self) -> impl Iterator<Item = &S> {
        self.data.iter()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(S) -> U) -> Vector<U> {
        Vector {
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn scale(&self, r: S::Real) -> Self {
        self.map(|x| x.scale(r))
    }

    pub fn mul_scalar(&self, s: S) -> Self {
        self.map(|x| x * s)
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> S {
        assert_eq!(self.dim(), other.dim(), "inner product of mismatched dims");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| a.conj() * b)
            .sum()
    }

    pub fn norm(&self) -> S::Real {
        self.data
            .iter()
            .map(|x| x.norm_sqr())
            .sum::<S::Real>()
            .sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        self.scale(S::Real::one() / n)
    }

    pub fn max_abs_diff(&self, other: &Self) -> S::Real {
        assert_eq!(self.dim(), other.dim(), "max_abs_diff on mismatched dims");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).modulus())
            .fold(S::Real::zero(), |a, b| a.max(b))
    }

    pub fn distance(&self, other: &Self) -> S::Real {
        (self - other).norm()
    }

    pub fn kron(&self, other: &Self) -> Result<Self> {
        let dim = self.dim() * other.dim();
        if dim > DEFAULT_MAX_DIM {
            return Err(Error::Size {
                dim,
                cap: DEFAULT_MAX_DIM,
            });
        }
        let db = other.dim();
        Ok(Self::from_fn(dim, |i| {
            self.data[i / db] * other.data[i % db]
        }))
    }

    /// `|self⟩⟨other|`.
    pub fn outer(&self, other: &Self) -> Matrix<S> {
        Matrix::from_fn(self.dim(), other.dim(), |i, j| {
            self.data[i] * other.data[j].conj()
        })
    }

    /// `⟨self|m|self⟩`.
    pub fn expectation(&self, m: &Matrix<S>) -> Result<S> {
        Ok(self.inner(&m.apply(self)?))
    }
}

impl<T: Real> Vector<T> {
    pub fn to_complex(&self) -> Vector<Complex<T>> {
        self.map(Complex::from_real)
    }
}

impl<T: Real> Vector<Complex<T>> {
    pub fn real_part(&self) -> Vector<T> {
        self.map(|z| z.re)
    }

    pub fn max_imag(&self) -> T {
        self.data
            .iter()
            .map(|z| z.im.abs())
            .fold(T::zero(), |a, b| a.max(b))
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }
}

impl<S> Index<usize> for Vector<S> {
    type Output = S;

    #[inline]
    fn index(&self, i: usize) -> &S {
        &self.data[i]
    }
}

impl<S> IndexMut<usize> for Vector<S> {
    #[inline]
    fn index_mut(&mut self, i: usize) -> &mut S {
        &mut self.data[i]
    }
}

impl<S: Scalar> Add for &Vector<S> {
    type Output = Vector<S>;

    fn add(self, rhs: Self) -> Vector<S> {
        assert_eq!(self.dim(), rhs.dim(), "dim mismatch in +");
        Vector {
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }
}

impl<S: Scalar> Sub for &Vector<S> {
    type Output = Vector<S>;

    fn sub(self, rhs: Self) -> Vector<S> {
        assert_eq!(self.dim(), rhs.dim(), "dim mismatch in -");
        Vector {
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }
}
