//! Seeded random states and operators for property tests and optimizer
//! restarts. Every generator is a pure function of `(dim, seed)`.

use num_complex::Complex;
use num_traits::{Float, One};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::matrix::Matrix;
use super::vector::Vector;
use crate::scalar::{Real, Scalar};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn gaussian<T: Real>(rng: &mut ChaCha8Rng) -> Complex<T> {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex::new(T::lit(re), T::lit(im))
}

/// Uniformly random unit vector in `C^dim`.
pub fn random_state<T: Real>(dim: usize, seed: u64) -> Vector<Complex<T>> {
    let mut r = rng(seed);
    Vector::from_fn(dim, |_| gaussian(&mut r)).normalized()
}

/// `(G + G†) / 2` for a complex Gaussian `G`.
pub fn random_hermitian<T: Real>(dim: usize, seed: u64) -> Matrix<Complex<T>> {
    let mut r = rng(seed);
    let g = Matrix::from_fn(dim, dim, |_, _| gaussian::<T>(&mut r));
    (&g + &g.dagger()).scale(T::lit(0.5))
}

/// Haar-random unitary: the `Q` factor of a complex Gaussian matrix.
///
/// Gram-Schmidt yields an `R` with real positive diagonal, which is exactly
/// the phase fix that makes `Q` Haar distributed.
pub fn random_unitary<T: Real>(dim: usize, seed: u64) -> Matrix<Complex<T>> {
    let mut r = rng(seed);
    let g = Matrix::from_fn(dim, dim, |_, _| gaussian::<T>(&mut r));
    orthonormalize_columns(&g)
}

/// Modified Gram-Schmidt with one re-orthogonalization pass.
pub(crate) fn orthonormalize_columns<S: Scalar>(g: &Matrix<S>) -> Matrix<S> {
    let (n, m) = (g.rows(), g.cols());
    let mut cols: Vec<Vec<S>> = (0..m)
        .map(|j| (0..n).map(|i| g[(i, j)]).collect())
        .collect();
    for j in 0..m {
        for _pass in 0..2 {
            for k in 0..j {
                let proj: S = (0..n).map(|i| cols[k][i].conj() * cols[j][i]).sum();
                for i in 0..n {
                    let sub = cols[k][i] * proj;
                    cols[j][i] -= sub;
                }
            }
        }
        let norm = cols[j].iter().map(|x| x.norm_sqr()).sum::<S::Real>().sqrt();
        let inv = S::Real::one() / norm;
        for x in cols[j].iter_mut() {
            *x = x.scale(inv);
        }
    }
    Matrix::from_fn(n, m, |i, j| cols[j][i])
}

/// Random POVM with `outcomes` elements on `C^dim`.
///
/// Draws PSD matrices `A_k = G_k G_k†`, then whitens them with
/// `S^{-1/2}` where `S = Σ A_k`, so the elements sum to the identity.
pub fn random_povm<T: Real>(dim: usize, outcomes: usize, seed: u64) -> Vec<Matrix<Complex<T>>> {
    let mut r = rng(seed);
    let raw: Vec<Matrix<Complex<T>>> = (0..outcomes)
        .map(|_| {
            let g = Matrix::from_fn(dim, dim, |_, _| gaussian::<T>(&mut r));
            &g * &g.dagger()
        })
        .collect();
    let mut total = Matrix::zeros(dim, dim);
    for a in &raw {
        total = &total + a;
    }
    let e = super::eigen::eigh(&total).expect("square");
    let inv_sqrt = e.apply_fn(|l| Complex::from_real(T::one() / l.sqrt()));
    raw.iter().map(|a| &(&inv_sqrt * a) * &inv_sqrt).collect()
}

/// Random mixed state: a normalized `G G†`.
pub fn random_density<T: Real>(dim: usize, seed: u64) -> Matrix<Complex<T>> {
    let mut r = rng(seed);
    let g = Matrix::from_fn(dim, dim, |_, _| gaussian::<T>(&mut r));
    let p = &g * &g.dagger();
    let tr = p.trace().re;
    p.scale(T::one() / tr)
}

/// Random complex matrix with standard Gaussian entries.
pub fn random_matrix<T: Real>(rows: usize, cols: usize, seed: u64) -> Matrix<Complex<T>> {
    let mut r = rng(seed);
    Matrix::from_fn(rows, cols, |_, _| gaussian::<T>(&mut r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::predicates::{is_psd, is_unitary};

    #[test]
    fn state_is_normalized_and_deterministic() {
        for seed in 0..10 {
            let v = random_state::<f64>(8, seed);
            assert!((v.norm() - 1.0).abs() < 1e-12);
            assert_eq!(v, random_state::<f64>(8, seed));
        }
        assert_ne!(random_state::<f64>(4, 1), random_state::<f64>(4, 2));
    }

    #[test]
    fn unitary_is_unitary() {
        for seed in 0..10 {
            assert!(is_unitary(&random_unitary::<f64>(4, seed), 1e-10));
        }
    }

    #[test]
    fn povm_is_complete_and_psd() {
        let p = random_povm::<f64>(3, 4, 9);
        let mut sum = Matrix::zeros(3, 3);
        for e in &p {
            assert!(is_psd(e, 1e-10));
            sum = &sum + e;
        }
        assert!(sum.max_abs_diff(&Matrix::identity(3)) < 1e-12);
    }

    #[test]
    fn single_precision_generators() {
        let u = random_unitary::<f32>(4, 0);
        assert!(is_unitary(&u, 1e-5));
    }
}
