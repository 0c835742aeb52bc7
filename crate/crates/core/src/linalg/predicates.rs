use num_traits::Float;

use super::eigen::eigh;
use super::matrix::Matrix;
use crate::scalar::{Real, Scalar};

/// `‖A†A − I‖_max ≤ tol`. Non-square matrices are never unitary.
pub fn is_unitary<S: Scalar>(a: &Matrix<S>, tol: S::Real) -> bool {
    a.is_square() && (&a.dagger() * a).max_abs_diff(&Matrix::identity(a.rows())) <= tol
}

pub fn is_hermitian<S: Scalar>(a: &Matrix<S>, tol: S::Real) -> bool {
    a.is_square() && a.max_abs_diff(&a.dagger()) <= tol
}

/// Hermitian with smallest eigenvalue `≥ −tol`.
pub fn is_psd<S: Scalar>(a: &Matrix<S>, tol: S::Real) -> bool {
    if !is_hermitian(a, tol) {
        return false;
    }
    match eigh(a) {
        Ok(e) => e.min_value() >= -tol,
        Err(_) => false,
    }
}

/// Hermitian with `A² = I`, i.e. every eigenvalue is ±1.
pub fn is_pm_one_observable<S: Scalar>(a: &Matrix<S>, tol: S::Real) -> bool {
    is_hermitian(a, tol) && (a * a).max_abs_diff(&Matrix::identity(a.rows())) <= tol
}

/// Frobenius norm of `ab − ba`.
pub fn commutator_norm<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> S::Real {
    match a.commutator(b) {
        Ok(c) => c.frobenius_norm(),
        Err(_) => S::Real::infinity(),
    }
}

/// Smallest eigenvalue, used in diagnostics for near-PSD inputs.
pub fn min_eigenvalue<S: Scalar>(a: &Matrix<S>) -> S::Real {
    eigh(a).map(|e| e.min_value()).unwrap_or(S::Real::nan())
}

/// `A = −Aᵀ` for a real matrix.
pub fn is_antisymmetric<T: Real>(a: &Matrix<T>, tol: T) -> bool {
    a.is_square() && a.max_abs_diff(&-&a.transpose()) <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::random_matrix;
    use num_complex::Complex;

    #[test]
    fn xz_is_unitary_not_hermitian() {
        let xz = Matrix::from_rows(&[[0.0, -1.0], [1.0, 0.0]]);
        assert!(is_unitary(&xz, 1e-15));
        assert!(!is_hermitian(&xz, 1e-15));
        assert!(is_antisymmetric(&xz, 0.0));
    }

    #[test]
    fn small_negative_eigenvalue_is_not_psd() {
        let a = Matrix::diag(&[1.0, -1e-3]);
        assert!(!is_psd(&a, 1e-6));
        assert!(is_psd(&Matrix::diag(&[1.0, -1e-9]), 1e-8));
    }

    #[test]
    fn symmetrized_random_matrix_is_hermitian() {
        for seed in 0..20 {
            let p = random_matrix::<f64>(5, 5, seed);
            assert!(is_hermitian(&(&p + &p.dagger()), 1e-14));
        }
    }

    #[test]
    fn observable_check() {
        let z = Matrix::diag(&[Complex::new(1.0, 0.0), Complex::new(-1.0, 0.0)]);
        assert!(is_pm_one_observable(&z, 1e-12));
        assert!(!is_pm_one_observable(&z.scale(0.5), 1e-12));
    }
}
