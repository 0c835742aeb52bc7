use num_complex::Complex;

use super::{encode_operator, EncodedOperator, Layout};
use crate::error::{Error, Result};
use crate::linalg::{is_unitary, Matrix};
use crate::scalar::Real;
use crate::tolerance::Tolerances;

/// `I_n ⊗ Z` on the single ancilla: flips the sign of every imaginary part,
/// so it encodes entry-wise complex conjugation.
pub fn conjugation_operator<T: Real>(n: usize) -> EncodedOperator<T> {
    let z = Matrix::diag(&[T::one(), -T::one()]);
    let m = Matrix::from_fn(2 * n, 2 * n, |r, c| {
        if r / 2 == c / 2 {
            z[(r % 2, c % 2)]
        } else {
            T::zero()
        }
    });
    EncodedOperator::new(m, n, Layout::SingleAncilla).expect("2n x 2n by construction")
}

/// Real orthogonal operator realizing the anti-unitary `ψ ↦ u·conj(ψ)`.
pub fn encode_antiunitary<T: Real>(u: &Matrix<Complex<T>>) -> Result<EncodedOperator<T>> {
    let n = u.require_square("encode_antiunitary")?;
    if !is_unitary(u, Tolerances::<T>::get().construct) {
        return Err(Error::domain("anti-unitary needs a unitary factor"));
    }
    encode_operator(u)?.compose(&conjugation_operator(n))
}
