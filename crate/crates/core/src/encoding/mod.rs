//! Complex-to-real encoding of states and operators.
//!
//! A complex amplitude `a + ib` on basis state `|x⟩` becomes the real pair
//! `a|x⟩|0⟩ + b|x⟩|1⟩` on a doubled space; an operator entry `a + ib`
//! becomes the 2x2 block `a·I + b·XZ`, where `XZ = [[0, -1], [1, 0]]`
//! plays the role of multiplication by `i`. The ancilla is always the
//! least-significant tensor factor, so encoded index `x·d_anc + α` holds
//! ancilla component `α` of system basis state `x`.
//!
//! The same construction with a `k`-qubit logical ancilla lives in
//! [`crate::multipartite`]; both share [`embed_operator`] and
//! [`embed_vector`].

mod conjugation;
mod density;
mod measurement;

pub use conjugation::{conjugation_operator, encode_antiunitary};
pub use density::{encode_density, gauge_orbit, DensityOperator, GaugeOrbit};
pub use measurement::{
    apply_encoded_kraus, apply_kraus, encode_kraus, encode_povm, encoded_povm_probabilities,
    encoded_povm_probabilities_mixed, povm_probabilities, povm_probabilities_mixed, KrausChannel,
    Povm,
};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::multipartite;
use crate::scalar::Real;
use crate::tolerance::Tolerances;

/// Which ancilla carries the imaginary parts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Layout {
    /// One extra qubit appended after the whole system.
    SingleAncilla,
    /// `k` extra qubits, one per party, appended after the system factors in
    /// party order. `party_assignment[j]` is the ancilla qubit of party `j`.
    Logical {
        k: usize,
        party_assignment: Vec<usize>,
    },
}

impl Layout {
    pub fn logical(k: usize) -> Self {
        Layout::Logical {
            k,
            party_assignment: (0..k).collect(),
        }
    }

    pub fn ancilla_qubits(&self) -> usize {
        match self {
            Layout::SingleAncilla => 1,
            Layout::Logical { k, .. } => *k,
        }
    }

    pub fn ancilla_dim(&self) -> usize {
        1 << self.ancilla_qubits()
    }

    /// Ancilla operator standing in for `i` on the whole system: `XZ` for a
    /// single ancilla, `XZ` on party 0's qubit for a logical ancilla.
    pub fn imag_unit<T: Real>(&self) -> Result<Matrix<T>> {
        match self {
            Layout::SingleAncilla => Ok(xz()),
            Layout::Logical {
                k,
                party_assignment,
            } => multipartite::local_xz(*k, party_assignment[0]),
        }
    }

    /// Ancilla basis images of the real and imaginary axes.
    pub fn axis_states<T: Real>(&self) -> Result<(Vector<T>, Vector<T>)> {
        match self {
            Layout::SingleAncilla => Ok((Vector::basis(2, 0), Vector::basis(2, 1))),
            Layout::Logical { k, .. } => {
                let anc = multipartite::logical_states::<T>(*k)?;
                Ok((anc.zero_state, anc.one_state))
            }
        }
    }
}

/// The real 2x2 rotation `[[0, -1], [1, 0]]`.
pub fn xz<T: Real>() -> Matrix<T> {
    Matrix::from_rows(&[[T::zero(), -T::one()], [T::one(), T::zero()]])
}

/// Normalized complex state on a tensor product of factors.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T: Real> {
    amplitudes: Vector<Complex<T>>,
    factor_dims: Vec<usize>,
}

impl<T: Real> PureState<T> {
    /// Rejects (rather than renormalizes) vectors off the unit sphere.
    pub fn new(amplitudes: Vector<Complex<T>>, factor_dims: Vec<usize>) -> Result<Self> {
        if factor_dims.is_empty() || factor_dims.contains(&0) {
            return Err(Error::domain("factor dimensions must be positive"));
        }
        let total: usize = factor_dims.iter().product();
        if total != amplitudes.dim() {
            return Err(Error::DimMismatch {
                expected: total,
                got: amplitudes.dim(),
            });
        }
        let norm = amplitudes.norm();
        if !norm.is_finite() || (norm - T::one()).abs() > Tolerances::<T>::get().construct {
            return Err(Error::domain(format!("state norm is {norm}, expected 1")));
        }
        Ok(Self {
            amplitudes,
            factor_dims,
        })
    }

    /// A state on a single factor.
    pub fn single(amplitudes: Vector<Complex<T>>) -> Result<Self> {
        let d = amplitudes.dim();
        Self::new(amplitudes, vec![d])
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(factor_dims: Vec<usize>, index: usize) -> Result<Self> {
        let total = factor_dims.iter().product();
        if index >= total {
            return Err(Error::OutOfRange {
                what: "basis",
                index,
                limit: total,
            });
        }
        Self::new(Vector::basis(total, index), factor_dims)
    }

    /// Normalizes `amplitudes` first. For literals in tests and demos.
    pub fn normalized(amplitudes: Vector<Complex<T>>, factor_dims: Vec<usize>) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == T::zero() {
            return Err(Error::domain("zero vector has no direction"));
        }
        Self::new(amplitudes.normalized(), factor_dims)
    }

    pub fn amplitudes(&self) -> &Vector<Complex<T>> {
        &self.amplitudes
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.dim()
    }

    pub fn inner(&self, other: &Self) -> Complex<T> {
        self.amplitudes.inner(&other.amplitudes)
    }

    /// `e^{iα}ψ`.
    pub fn phased(&self, alpha: T) -> Self {
        Self {
            amplitudes: self
                .amplitudes
                .mul_scalar(Complex::new(alpha.cos(), alpha.sin())),
            factor_dims: self.factor_dims.clone(),
        }
    }

    /// Entry-wise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            amplitudes: self.amplitudes.conj(),
            factor_dims: self.factor_dims.clone(),
        }
    }

    /// `uψ` for a unitary `u`; fails if the result leaves the unit sphere.
    pub fn evolve(&self, u: &Matrix<Complex<T>>) -> Result<Self> {
        Self::new(u.apply(&self.amplitudes)?, self.factor_dims.clone())
    }

    /// `⟨ψ|m|ψ⟩`.
    pub fn expectation(&self, m: &Matrix<Complex<T>>) -> Result<Complex<T>> {
        self.amplitudes.expectation(m)
    }
}

/// Real amplitude vector on system ⊗ ancilla.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedState<T: Real> {
    amplitudes: Vector<T>,
    source_dims: Vec<usize>,
    layout: Layout,
}

impl<T: Real> EncodedState<T> {
    pub fn new(amplitudes: Vector<T>, source_dims: Vec<usize>, layout: Layout) -> Result<Self> {
        let source_dim: usize = source_dims.iter().product();
        let expected = source_dim * layout.ancilla_dim();
        if amplitudes.dim() != expected {
            return Err(Error::DimMismatch {
                expected,
                got: amplitudes.dim(),
            });
        }
        let norm = amplitudes.norm();
        if !norm.is_finite() || (norm - T::one()).abs() > Tolerances::<T>::get().construct {
            return Err(Error::domain(format!(
                "encoded state norm is {norm}, expected 1"
            )));
        }
        Ok(Self {
            amplitudes,
            source_dims,
            layout,
        })
    }

    pub fn amplitudes(&self) -> &Vector<T> {
        &self.amplitudes
    }

    pub fn source_dims(&self) -> &[usize] {
        &self.source_dims
    }

    pub fn source_dim(&self) -> usize {
        self.source_dims.iter().product()
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.dim()
    }

    pub fn inner(&self, other: &Self) -> T {
        self.amplitudes.inner(&other.amplitudes)
    }

    /// Largest |imaginary part| of the stored amplitudes. Always zero: the
    /// storage is real. Kept so reports state the fact instead of assuming it.
    pub fn max_imag(&self) -> T {
        T::zero()
    }
}

/// Real operator on system ⊗ ancilla.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedOperator<T: Real> {
    matrix: Matrix<T>,
    source_dim: usize,
    layout: Layout,
}

impl<T: Real> EncodedOperator<T> {
    pub fn new(matrix: Matrix<T>, source_dim: usize, layout: Layout) -> Result<Self> {
        let expected = source_dim * layout.ancilla_dim();
        if matrix.rows() != expected || matrix.cols() != expected {
            return Err(Error::shape(format!(
                "encoded operator must be {expected}x{expected}, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        Ok(Self {
            matrix,
            source_dim,
            layout,
        })
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.matrix
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    /// Operator product `self · other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_compatible(&other.layout, other.source_dim)?;
        Ok(Self {
            matrix: self.matrix.matmul(&other.matrix)?,
            source_dim: self.source_dim,
            layout: self.layout.clone(),
        })
    }

    /// Applies a norm-preserving encoded operator to an encoded state.
    pub fn apply(&self, state: &EncodedState<T>) -> Result<EncodedState<T>> {
        self.check_compatible(&state.layout, state.source_dim())?;
        EncodedState::new(
            self.matrix.apply(&state.amplitudes)?,
            state.source_dims.clone(),
            state.layout.clone(),
        )
    }

    /// `⟨ψ′|P′|ψ′⟩`.
    pub fn expectation(&self, state: &EncodedState<T>) -> Result<T> {
        self.check_compatible(&state.layout, state.source_dim())?;
        state.amplitudes.expectation(&self.matrix)
    }

    fn check_compatible(&self, layout: &Layout, source_dim: usize) -> Result<()> {
        if *layout != self.layout {
            return Err(Error::domain(format!(
                "layout mismatch: operator uses {:?}, state uses {layout:?}",
                self.layout
            )));
        }
        if source_dim != self.source_dim {
            return Err(Error::DimMismatch {
                expected: self.source_dim,
                got: source_dim,
            });
        }
        Ok(())
    }
}

/// `Σ |x⟩⟨x′| ⊗ (Re m[x,x′] · I + Im m[x,x′] · imag)`.
///
/// `imag` is any real ancilla operator that squares to `−I` on the relevant
/// subspace.
pub fn embed_operator<T: Real>(m: &Matrix<Complex<T>>, imag: &Matrix<T>) -> Result<Matrix<T>> {
    let a = imag.require_square("ancilla imaginary unit")?;
    let rows = m.rows() * a;
    let cols = m.cols() * a;
    if rows.max(cols) > crate::linalg::DEFAULT_MAX_DIM {
        return Err(Error::Size {
            dim: rows.max(cols),
            cap: crate::linalg::DEFAULT_MAX_DIM,
        });
    }
    Ok(Matrix::from_fn(rows, cols, |r, c| {
        let z = m[(r / a, c / a)];
        let (alpha, beta) = (r % a, c % a);
        let id = if alpha == beta { z.re } else { T::zero() };
        id + z.im * imag[(alpha, beta)]
    }))
}

/// `Σ_x |x⟩ ⊗ (Re v[x] · zero + Im v[x] · one)`.
pub fn embed_vector<T: Real>(
    v: &Vector<Complex<T>>,
    zero: &Vector<T>,
    one: &Vector<T>,
) -> Vector<T> {
    let a = zero.dim();
    Vector::from_fn(v.dim() * a, |i| {
        let z = v[i / a];
        z.re * zero[i % a] + z.im * one[i % a]
    })
}

/// Inverse of [`embed_vector`] on its image: projects each ancilla block
/// onto `zero` and `one`.
pub fn unembed_vector<T: Real>(
    v: &Vector<T>,
    zero: &Vector<T>,
    one: &Vector<T>,
) -> Vector<Complex<T>> {
    let a = zero.dim();
    Vector::from_fn(v.dim() / a, |x| {
        let block = &v.as_slice()[x * a..(x + 1) * a];
        let re = block.iter().zip(zero.iter()).map(|(&p, &q)| p * q).sum();
        let im = block.iter().zip(one.iter()).map(|(&p, &q)| p * q).sum();
        Complex::new(re, im)
    })
}

/// Single-ancilla encoding of an unnormalized vector: index `2x` holds
/// `Re v[x]`, index `2x+1` holds `Im v[x]`.
pub fn encode_vector<T: Real>(v: &Vector<Complex<T>>) -> Vector<T> {
    Vector::from_fn(2 * v.dim(), |i| {
        let z = v[i / 2];
        if i % 2 == 0 {
            z.re
        } else {
            z.im
        }
    })
}

pub fn encode_state<T: Real>(psi: &PureState<T>) -> EncodedState<T> {
    EncodedState {
        amplitudes: encode_vector(&psi.amplitudes),
        source_dims: psi.factor_dims.clone(),
        layout: Layout::SingleAncilla,
    }
}

/// Encodes `psi` with the given ancilla layout. A logical layout needs one
/// ancilla qubit per tensor factor of `psi`.
pub fn encode_state_in<T: Real>(psi: &PureState<T>, layout: &Layout) -> Result<EncodedState<T>> {
    if let Layout::Logical { k, .. } = layout {
        if *k != psi.factor_dims.len() {
            return Err(Error::domain(format!(
                "logical ancilla has {k} qubits but the state has {} parties",
                psi.factor_dims.len()
            )));
        }
    }
    let (zero, one) = layout.axis_states::<T>()?;
    EncodedState::new(
        embed_vector(&psi.amplitudes, &zero, &one),
        psi.factor_dims.clone(),
        layout.clone(),
    )
}

/// Encodes a whole-system operator with the layout's stand-in for `i`.
pub fn encode_operator_in<T: Real>(
    m: &Matrix<Complex<T>>,
    layout: &Layout,
) -> Result<EncodedOperator<T>> {
    let n = m.require_square("encode_operator")?;
    EncodedOperator::new(embed_operator(m, &layout.imag_unit()?)?, n, layout.clone())
}

/// Recovers the complex state from its encoding (the fixed-gauge inverse
/// of [`encode_state`] and of the multipartite encoding). Fails if the
/// encoded vector has weight outside the ancilla codespace.
pub fn decode_state<T: Real>(state: &EncodedState<T>) -> Result<PureState<T>> {
    let (zero, one) = state.layout.axis_states::<T>()?;
    PureState::new(
        unembed_vector(&state.amplitudes, &zero, &one),
        state.source_dims.clone(),
    )
}

/// Entry `a + ib` becomes the block `a·I + b·XZ`.
pub fn encode_operator<T: Real>(m: &Matrix<Complex<T>>) -> Result<EncodedOperator<T>> {
    let n = m.require_square("encode_operator")?;
    EncodedOperator::new(embed_operator(m, &xz())?, n, Layout::SingleAncilla)
}

/// `⟨encode(ψ)|encode(φ)⟩`, checked against `Re⟨ψ|φ⟩`.
pub fn real_inner_product<T: Real>(psi: &PureState<T>, phi: &PureState<T>) -> Result<T> {
    if psi.dim() != phi.dim() {
        return Err(Error::DimMismatch {
            expected: psi.dim(),
            got: phi.dim(),
        });
    }
    let encoded = encode_state(psi).inner(&encode_state(phi));
    let direct = psi.inner(phi).re;
    let tol = Tolerances::<T>::get().assert;
    if (encoded - direct).abs() > tol {
        return Err(Error::domain(format!(
            "encoded inner product {encoded} differs from Re⟨ψ|φ⟩ = {direct}"
        )));
    }
    Ok(encoded)
}
