//! Scalar traits shared by every matrix and vector in the crate.
//!
//! The linear algebra is written once against [`Scalar`], which covers both
//! real floats (`f32`, `f64`) and their complex counterparts. [`Real`] is the
//! subset that can serve as the underlying field of a complex number and as a
//! tolerance type.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex;
use num_traits::{Float, FloatConst, NumAssign, NumCast, One, Zero};

/// A matrix entry: real or complex, double or single precision.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Sum
{
    type Real: Real;

    fn from_real(r: Self::Real) -> Self;
    fn re(self) -> Self::Real;
    fn im(self) -> Self::Real;
    fn conj(self) -> Self;
    fn norm_sqr(self) -> Self::Real;
    fn scale(self, r: Self::Real) -> Self;

    /// `i`, when the scalar field contains it.
    fn imag_unit() -> Option<Self>;

    fn modulus(self) -> Self::Real {
        self.norm_sqr().sqrt()
    }

    fn finite(self) -> bool {
        self.re().is_finite() && self.im().is_finite()
    }
}

/// Floating-point field underlying a [`Scalar`].
pub trait Real:
    Scalar<Real = Self> + Float + FloatConst + NumAssign + Default + Display + LowerExp
{
    /// Converts an `f64` literal. Every `Real` can represent (a rounding of)
    /// any finite `f64`, so this never fails.
    fn lit(x: f64) -> Self {
        <Self as NumCast>::from(x).expect("finite f64 literal")
    }

    fn to_f64(self) -> f64 {
        <f64 as NumCast>::from(self).expect("finite float")
    }

    /// `x` if it is at least `floor`, else `floor`, where `floor` is
    /// `ulps` machine epsilons. Used to widen fixed tolerances for `f32`.
    fn tol_at_least(x: f64, ulps: f64) -> Self {
        let floor = Self::epsilon() * Self::lit(ulps);
        Self::lit(x).max(floor)
    }
}

macro_rules! impl_real {
    ($t:ty) => {
        impl Scalar for $t {
            type Real = $t;

            #[inline]
            fn from_real(r: $t) -> Self {
                r
            }
            #[inline]
            fn re(self) -> $t {
                self
            }
            #[inline]
            fn im(self) -> $t {
                0.0
            }
            #[inline]
            fn conj(self) -> Self {
                self
            }
            #[inline]
            fn norm_sqr(self) -> $t {
                self * self
            }
            #[inline]
            fn scale(self, r: $t) -> Self {
                self * r
            }
            fn imag_unit() -> Option<Self> {
                None
            }
            #[inline]
            fn modulus(self) -> $t {
                self.abs()
            }
        }

        impl Real for $t {}
    };
}

impl_real!(f32);
impl_real!(f64);

impl<T: Real> Scalar for Complex<T> {
    type Real = T;

    #[inline]
    fn from_real(r: T) -> Self {
        Complex::new(r, T::zero())
    }
    #[inline]
    fn re(self) -> T {
        self.re
    }
    #[inline]
    fn im(self) -> T {
        self.im
    }
    #[inline]
    fn conj(self) -> Self {
        Complex::conj(&self)
    }
    #[inline]
    fn norm_sqr(self) -> T {
        Complex::norm_sqr(&self)
    }
    #[inline]
    fn scale(self, r: T) -> Self {
        Complex::new(self.re * r, self.im * r)
    }
    fn imag_unit() -> Option<Self> {
        Some(Complex::new(T::zero(), T::one()))
    }
    #[inline]
    fn modulus(self) -> T {
        self.re.hypot(self.im)
    }
}

/// Shorthand for `Complex::new(re, im)` from `f64` literals.
pub fn c<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}
