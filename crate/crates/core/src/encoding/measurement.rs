use num_complex::Complex;

use super::{encode_operator, DensityOperator, EncodedOperator, EncodedState, PureState};
use crate::error::{Error, Result};
use crate::linalg::{is_hermitian, min_eigenvalue, Matrix};
use crate::scalar::Real;
use crate::tolerance::Tolerances;

/// Positive-semidefinite elements summing to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm<T: Real> {
    elements: Vec<Matrix<Complex<T>>>,
}

impl<T: Real> Povm<T> {
    pub fn new(elements: Vec<Matrix<Complex<T>>>) -> Result<Self> {
        let first = elements
            .first()
            .ok_or_else(|| Error::domain("POVM needs at least one element"))?;
        let n = first.require_square("POVM element")?;
        let tol = Tolerances::<T>::get();
        let mut total = Matrix::zeros(n, n);
        for (k, e) in elements.iter().enumerate() {
            if e.rows() != n || e.cols() != n {
                return Err(Error::DimMismatch {
                    expected: n,
                    got: e.rows(),
                });
            }
            if !is_hermitian(e, tol.construct) {
                return Err(Error::domain(format!("POVM element {k} is not Hermitian")));
            }
            let floor = min_eigenvalue(e);
            if floor.is_nan() || floor < -tol.psd {
                return Err(Error::domain(format!(
                    "POVM element {k} has eigenvalue {floor} < 0"
                )));
            }
            total = &total + e;
        }
        let gap = total.max_abs_diff(&Matrix::identity(n));
        if gap > tol.construct {
            return Err(Error::domain(format!(
                "POVM elements sum to identity only within {gap}"
            )));
        }
        Ok(Self { elements })
    }

    /// Projectors onto the computational basis.
    pub fn computational_basis(dim: usize) -> Self {
        let elements = (0..dim)
            .map(|i| {
                let mut m = Matrix::zeros(dim, dim);
                m[(i, i)] = Complex::new(T::one(), T::zero());
                m
            })
            .collect();
        Self { elements }
    }

    pub fn elements(&self) -> &[Matrix<Complex<T>>] {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.elements[0].rows()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if dim != self.dim() {
            return Err(Error::DimMismatch {
                expected: self.dim(),
                got: dim,
            });
        }
        Ok(())
    }
}

/// `pᵢ = ⟨ψ|Pᵢ|ψ⟩`.
pub fn povm_probabilities<T: Real>(psi: &PureState<T>, povm: &Povm<T>) -> Result<Vec<T>> {
    povm.check_dim(psi.dim())?;
    povm.elements()
        .iter()
        .map(|p| Ok(psi.expectation(p)?.re))
        .collect()
}

/// `pᵢ = Tr(Pᵢ ρ)`.
pub fn povm_probabilities_mixed<T: Real>(
    rho: &DensityOperator<T>,
    povm: &Povm<T>,
) -> Result<Vec<T>> {
    povm.check_dim(rho.dim())?;
    Ok(povm
        .elements()
        .iter()
        .map(|p| trace_of_product(p, rho.matrix()).re)
        .collect())
}

pub fn encode_povm<T: Real>(povm: &Povm<T>) -> Result<Vec<EncodedOperator<T>>> {
    povm.elements().iter().map(encode_operator).collect()
}

/// `p′ᵢ = ⟨ψ′|P′ᵢ|ψ′⟩`.
pub fn encoded_povm_probabilities<T: Real>(
    encoded: &EncodedState<T>,
    elements: &[EncodedOperator<T>],
) -> Result<Vec<T>> {
    elements.iter().map(|p| p.expectation(encoded)).collect()
}

/// `p′ᵢ = Tr(P′ᵢ ρ′)` for an encoded density matrix.
pub fn encoded_povm_probabilities_mixed<T: Real>(
    rho: &Matrix<T>,
    elements: &[EncodedOperator<T>],
) -> Result<Vec<T>> {
    elements
        .iter()
        .map(|p| {
            if p.matrix().rows() != rho.rows() {
                return Err(Error::DimMismatch {
                    expected: p.matrix().rows(),
                    got: rho.rows(),
                });
            }
            Ok(trace_of_product(p.matrix(), rho))
        })
        .collect()
}

/// `Tr(AB)` without forming the product.
fn trace_of_product<S: crate::scalar::Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> S {
    let n = a.rows();
    let mut acc = S::zero();
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

/// Trace-preserving Kraus operators, `Σ Kᵢ†Kᵢ = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel<T: Real> {
    operators: Vec<Matrix<Complex<T>>>,
}

impl<T: Real> KrausChannel<T> {
    pub fn new(operators: Vec<Matrix<Complex<T>>>) -> Result<Self> {
        let first = operators
            .first()
            .ok_or_else(|| Error::domain("channel needs at least one Kraus operator"))?;
        let n = first.require_square("Kraus operator")?;
        let mut total = Matrix::zeros(n, n);
        for k in &operators {
            if k.rows() != n || k.cols() != n {
                return Err(Error::DimMismatch {
                    expected: n,
                    got: k.rows(),
                });
            }
            total = &total + &(&k.dagger() * k);
        }
        let gap = total.max_abs_diff(&Matrix::identity(n));
        if gap > Tolerances::<T>::get().construct {
            return Err(Error::domain(format!(
                "Kraus operators are not trace preserving (ΣK†K − I = {gap})"
            )));
        }
        Ok(Self { operators })
    }

    pub fn operators(&self) -> &[Matrix<Complex<T>>] {
        &self.operators
    }

    pub fn dim(&self) -> usize {
        self.operators[0].rows()
    }
}

/// `Σ Kᵢ ρ Kᵢ†`.
pub fn apply_kraus<T: Real>(
    channel: &KrausChannel<T>,
    rho: &DensityOperator<T>,
) -> Result<DensityOperator<T>> {
    if channel.dim() != rho.dim() {
        return Err(Error::DimMismatch {
            expected: channel.dim(),
            got: rho.dim(),
        });
    }
    let mut out = Matrix::zeros(rho.dim(), rho.dim());
    for k in channel.operators() {
        out = &out + &(&(k * rho.matrix()) * &k.dagger());
    }
    DensityOperator::new(out)
}

pub fn encode_kraus<T: Real>(channel: &KrausChannel<T>) -> Result<Vec<EncodedOperator<T>>> {
    channel.operators().iter().map(encode_operator).collect()
}

/// `Σ K′ᵢ ρ′ K′ᵢᵀ` on an encoded density matrix.
pub fn apply_encoded_kraus<T: Real>(
    ops: &[EncodedOperator<T>],
    rho: &Matrix<T>,
) -> Result<Matrix<T>> {
    let mut out = Matrix::zeros(rho.rows(), rho.cols());
    for k in ops {
        let left = k.matrix().matmul(rho)?;
        out = &out + &left.matmul(&k.matrix().transpose())?;
    }
    Ok(out)
}
