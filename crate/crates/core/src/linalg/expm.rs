//! Matrix exponential.
//!
//! Two routes:
//! * [`matexp_series`]: scaling and squaring around a degree-13 Taylor
//!   polynomial, valid for any square matrix;
//! * a spectral route for Hermitian and anti-Hermitian inputs, through
//!   [`eigh`](super::eigen::eigh).
//!
//! [`matexp`] picks the spectral route whenever the input (or `i` times it)
//! is Hermitian to within 1e-12, and falls back to the series otherwise.

use num_traits::{Float, One};

use super::eigen::eigh;
use super::matrix::Matrix;
use crate::error::Result;
use crate::scalar::{Real, Scalar};

const TAYLOR_DEGREE: usize = 13;

/// Scaled norm at or below which the truncated series is accurate to
/// roughly machine precision (0.5^14 / 14! < 1e-15).
const SCALED_NORM_TARGET: f64 = 0.5;

const NORMALITY_TOL: f64 = 1e-12;

pub fn matexp<S: Scalar>(a: &Matrix<S>) -> Result<Matrix<S>> {
    a.require_square("matexp")?;
    let tol = S::Real::lit(NORMALITY_TOL) * a.max_abs().max(S::Real::one());
    if a.max_abs_diff(&a.dagger()) <= tol {
        return matexp_hermitian(a);
    }
    if let Some(i) = S::imag_unit() {
        if a.max_abs_diff(&(-&a.dagger())) <= tol {
            return matexp_anti_hermitian(a, i);
        }
    }
    matexp_series(a)
}

/// Scaling and squaring: `exp(A) = (T13(A / 2^s))^(2^s)`.
pub fn matexp_series<S: Scalar>(a: &Matrix<S>) -> Result<Matrix<S>> {
    let n = a.require_square("matexp")?;
    let norm = a.norm_1();
    let target = S::Real::lit(SCALED_NORM_TARGET);
    let mut squarings = 0u32;
    if norm > target {
        squarings = (norm / target).log2().ceil().to_f64() as u32;
    }
    let scaled = a.scale(S::Real::one() / S::Real::lit(2f64.powi(squarings as i32)));

    // Horner: I + A(I + A/2 (I + A/3 (... (I + A/13))))
    let id = Matrix::<S>::identity(n);
    let mut acc = id.clone();
    for k in (1..=TAYLOR_DEGREE).rev() {
        let step = scaled
            .matmul(&acc)?
            .scale(S::Real::one() / S::Real::lit(k as f64));
        acc = &id + &step;
    }
    for _ in 0..squarings {
        acc = acc.matmul(&acc)?;
    }
    Ok(acc)
}

fn matexp_hermitian<S: Scalar>(a: &Matrix<S>) -> Result<Matrix<S>> {
    let e = eigh(a)?;
    Ok(e.apply_fn(|l| S::from_real(l.exp())))
}

/// For anti-Hermitian `a`, `h = i a` is Hermitian and `exp(a) = exp(-i h)`.
fn matexp_anti_hermitian<S: Scalar>(a: &Matrix<S>, i: S) -> Result<Matrix<S>> {
    let h = a.mul_scalar(i);
    let e = eigh(&h)?;
    Ok(e.apply_fn(|l| S::from_real(l.cos()) - i * S::from_real(l.sin())))
}

/// `exp(i * h * t)` for Hermitian `h`, by diagonalizing `h` directly.
pub fn unitary_from_hermitian<S: Scalar>(h: &Matrix<S>, t: S::Real) -> Result<Matrix<S>> {
    let i = S::imag_unit().expect("unitary_from_hermitian needs a complex scalar");
    let e = eigh(h)?;
    Ok(e.apply_fn(|l| S::from_real((l * t).cos()) + i * S::from_real((l * t).sin())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::{random_hermitian, random_unitary};
    use num_complex::Complex;
    use num_traits::Zero;

    type C = Complex<f64>;

    /// Plain partial sums with many terms; only valid for small norms.
    fn taylor_oracle(a: &Matrix<C>, terms: usize) -> Matrix<C> {
        let n = a.rows();
        let mut term = Matrix::<C>::identity(n);
        let mut sum = term.clone();
        for k in 1..terms {
            term = (&term * a).scale(1.0 / k as f64);
            sum = &sum + &term;
        }
        sum
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let z = Matrix::<f64>::zeros(3, 3);
        assert_eq!(matexp(&z).unwrap(), Matrix::identity(3));
        assert_eq!(matexp_series(&z).unwrap(), Matrix::identity(3));
    }

    #[test]
    fn rotation_generator() {
        let theta = 0.5f64;
        let a = Matrix::from_rows(&[[0.0, -theta], [theta, 0.0]]);
        let expected =
            Matrix::from_rows(&[[theta.cos(), -theta.sin()], [theta.sin(), theta.cos()]]);
        // Real antisymmetric: no `i` in f64, so this goes through the series.
        let r = matexp(&a).unwrap();
        assert!(r.max_abs_diff(&expected) < 1e-15);
        let oracle = taylor_oracle(&a.to_complex(), 30);
        assert!(oracle.real_part().max_abs_diff(&expected) < 1e-15);
        // Complex lift takes the spectral route; must agree.
        let rc = matexp(&a.to_complex()).unwrap();
        assert!(rc.max_abs_diff(&expected.to_complex()) < 1e-14);
    }

    #[test]
    fn inverse_property() {
        for seed in 0..10 {
            let h = random_hermitian::<f64>(5, seed);
            let h = h.scale(1.0 / h.frobenius_norm());
            for route in [matexp::<C>, matexp_series::<C>] {
                let p = route(&h).unwrap();
                let m = route(&-&h).unwrap();
                assert!((&p * &m).max_abs_diff(&Matrix::identity(5)) < 1e-12);
            }
        }
    }

    #[test]
    fn routes_agree_on_skew_inputs_up_to_radius_32() {
        let i = C::new(0.0, 1.0);
        for seed in 0..10 {
            let h = random_hermitian::<f64>(4, seed);
            let e = eigh(&h).unwrap();
            let radius = e.values.iter().fold(0.0f64, |a, b| a.max(b.abs()));
            let a = h.mul_scalar(i).scale(32.0 / radius);
            let spectral = matexp(&a).unwrap();
            let series = matexp_series(&a).unwrap();
            assert!(spectral.max_abs_diff(&series) < 1e-12, "seed {seed}");
        }
    }

    #[test]
    fn hermitian_route_relative_accuracy() {
        // exp of a large Hermitian matrix has entries ~e^radius, so compare
        // relative to the largest entry.
        for seed in 0..5 {
            let h = random_hermitian::<f64>(4, seed + 100);
            let a = h.scale(8.0 / h.norm_1());
            let spectral = matexp(&a).unwrap();
            let series = matexp_series(&a).unwrap();
            assert!(spectral.max_abs_diff(&series) / spectral.max_abs() < 1e-12);
        }
    }

    #[test]
    fn unitary_from_hermitian_matches_generic_exp() {
        let h = random_hermitian::<f64>(4, 3);
        let u = unitary_from_hermitian(&h, 0.7).unwrap();
        let v = matexp_series(&h.mul_scalar(C::new(0.0, 0.7))).unwrap();
        assert!(u.max_abs_diff(&v) < 1e-13);
    }

    #[test]
    fn non_normal_input_uses_series() {
        let u = random_unitary::<f64>(3, 1);
        let a = &Matrix::from_fn(
            3,
            3,
            |i, j| if j > i { C::new(1.0, 0.5) } else { C::zero() },
        ) + &u;
        let e = matexp(&a).unwrap();
        let oracle = taylor_oracle(&a, 60);
        assert!(e.max_abs_diff(&oracle) / oracle.max_abs() < 1e-12);
    }

    #[test]
    fn non_square_is_error() {
        assert!(matexp(&Matrix::<f64>::zeros(2, 3)).is_err());
    }
}
