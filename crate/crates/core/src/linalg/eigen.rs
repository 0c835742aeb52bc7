//! Hermitian eigendecomposition by cyclic Jacobi rotations.
//!
//! Works for real symmetric and complex Hermitian matrices alike: each
//! rotation first removes the phase of the pivot entry, then applies the
//! classical real rotation.

use num_traits::{Float, One, Zero};

use super::matrix::Matrix;
use super::vector::Vector;
use crate::error::{Error, Result};
use crate::scalar::{Real, Scalar};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with matching orthonormal eigenvectors
/// stored as columns.
#[derive(Debug, Clone)]
pub struct Eigh<S: Scalar> {
    pub values: Vec<S::Real>,
    pub vectors: Matrix<S>,
}

impl<S: Scalar> Eigh<S> {
    pub fn vector(&self, k: usize) -> Vector<S> {
        self.vectors.column(k)
    }

    /// Rebuilds `V f(D) V†` for a real-valued spectral function.
    pub fn apply_fn(&self, f: impl Fn(S::Real) -> S) -> Matrix<S> {
        let n = self.values.len();
        let fd: Vec<S> = self.values.iter().map(|&l| f(l)).collect();
        Matrix::from_fn(n, n, |i, j| {
            (0..n)
                .map(|k| self.vectors[(i, k)] * fd[k] * self.vectors[(j, k)].conj())
                .sum()
        })
    }

    pub fn min_value(&self) -> S::Real {
        self.values[0]
    }

    pub fn max_value(&self) -> S::Real {
        self.values[self.values.len() - 1]
    }
}

/// Diagonalizes the Hermitian part of `a`. Only the upper triangle is
/// trusted to the extent `a` is Hermitian; callers check hermiticity.
pub fn eigh<S: Scalar>(a: &Matrix<S>) -> Result<Eigh<S>> {
    let n = a.require_square("eigh")?;
    if !a.all_finite() {
        return Err(Error::domain("eigh input must be finite"));
    }
    // Symmetrize so tiny anti-Hermitian noise does not stall convergence.
    let half = S::Real::lit(0.5);
    let mut m = Matrix::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)].conj()).scale(half));
    let mut v = Matrix::<S>::identity(n);
    let eps = S::Real::epsilon();

    for _ in 0..MAX_SWEEPS {
        let off: S::Real = (0..n)
            .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
            .map(|(p, q)| m[(p, q)].norm_sqr())
            .sum();
        let scale = m.frobenius_norm();
        if off.sqrt() <= eps * scale || scale == S::Real::zero() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<S::Real> = (0..n).map(|i| m[(i, i)].re()).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("finite eigenvalues"));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = Matrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(Eigh { values, vectors })
}

fn rotate<S: Scalar>(m: &mut Matrix<S>, v: &mut Matrix<S>, p: usize, q: usize) {
    let apq = m[(p, q)];
    let mag = apq.modulus();
    if mag == S::Real::zero() {
        return;
    }
    let n = m.rows();
    let one = S::Real::one();
    let two = S::Real::lit(2.0);
    // phase = conj(a_pq)/|a_pq|, so that phase * a_pq is real and positive.
    let phase = apq.conj().scale(one / mag);
    let app = m[(p, p)].re();
    let aqq = m[(q, q)].re();
    let theta = (aqq - app) / (two * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + one).sqrt());
    let cs = one / (t * t + one).sqrt();
    let sn = t * cs;

    // G = diag(1, phase) * [[c, s], [-s, c]] on the (p, q) plane.
    let g_pp = S::from_real(cs);
    let g_pq = S::from_real(sn);
    let g_qp = phase.scale(-sn);
    let g_qq = phase.scale(cs);

    for k in 0..n {
        let akp = m[(k, p)];
        let akq = m[(k, q)];
        m[(k, p)] = akp * g_pp + akq * g_qp;
        m[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = m[(p, k)];
        let aqk = m[(q, k)];
        m[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        m[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    m[(p, q)] = S::zero();
    m[(q, p)] = S::zero();
    m[(p, p)] = S::from_real(m[(p, p)].re());
    m[(q, q)] = S::from_real(m[(q, q)].re());

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random::random_hermitian;
    use crate::scalar::c;
    use num_complex::Complex;

    #[test]
    fn diagonal_input_is_sorted() {
        let a = Matrix::diag(&[3.0, -1.0, 2.0]);
        let e = eigh(&a).unwrap();
        assert_eq!(e.values, vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn pauli_y_spectrum() {
        let y = Matrix::from_rows(&[[c::<f64>(0., 0.), c(0., -1.)], [c(0., 1.), c(0., 0.)]]);
        let e = eigh(&y).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn reconstructs_random_hermitian() {
        for seed in 0..20 {
            let h = random_hermitian::<f64>(6, seed);
            let e = eigh(&h).unwrap();
            let back = e.apply_fn(Complex::from_real);
            assert!(back.max_abs_diff(&h) < 1e-12, "seed {seed}");
            let vdv = &e.vectors.dagger() * &e.vectors;
            assert!(vdv.max_abs_diff(&Matrix::identity(6)) < 1e-12);
        }
    }

    #[test]
    fn non_square_is_shape_error() {
        assert!(eigh(&Matrix::<f64>::zeros(2, 3)).is_err());
    }
}
