//! Local simulation for multipartite systems.
//!
//! Each of `k` parties gets one ancilla qubit. The pair
//!
//! ```text
//! |0̄⟩ = 2^{-(k-1)/2} Σ_{h(y) even} (-1)^{h(y)/2}     |y⟩
//! |1̄⟩ = 2^{-(k-1)/2} Σ_{h(y) odd}  (-1)^{(h(y)-1)/2} |y⟩
//! ```
//!
//! (with `h(y)` the Hamming weight of `y ∈ {0,1}^k`) spans the joint +1
//! eigenspace of every `−(XZ)_j (XZ)_l`. On that span `XZ` applied to any
//! single ancilla qubit acts as the logical `XZ`, so each party can apply
//! its own phases locally.
//!
//! Ancilla qubits follow the system factors, in party order; qubit 0 is
//! the most significant bit of the ancilla index.

use num_complex::Complex;

use crate::encoding::{
    embed_operator, embed_vector, xz, EncodedOperator, EncodedState, Layout, PureState,
};
use crate::error::{Error, Result};
use crate::linalg::{eigh, Matrix, Vector};
use crate::scalar::Real;
use crate::tolerance::Tolerances;

pub const MAX_PARTIES: usize = 12;
pub const MAX_STABILIZER_PARTIES: usize = 6;

/// The two-dimensional codespace of `k` ancilla qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct LogicalAncilla<T: Real> {
    pub k: usize,
    pub zero_state: Vector<T>,
    pub one_state: Vector<T>,
    /// Ancilla qubit held by each party.
    pub party_assignment: Vec<usize>,
}

impl<T: Real> LogicalAncilla<T> {
    /// `|0̄⟩⟨0̄| + |1̄⟩⟨1̄|`.
    pub fn projector(&self) -> Matrix<T> {
        &self.zero_state.outer(&self.zero_state) + &self.one_state.outer(&self.one_state)
    }

    /// The 2x2 matrix `[⟨ā|op|b̄⟩]` of an ancilla operator on the codespace.
    pub fn restrict(&self, op: &Matrix<T>) -> Result<Matrix<T>> {
        let basis = [&self.zero_state, &self.one_state];
        let images = [op.apply(basis[0])?, op.apply(basis[1])?];
        Ok(Matrix::from_fn(2, 2, |a, b| basis[a].inner(&images[b])))
    }
}

pub fn logical_states<T: Real>(k: usize) -> Result<LogicalAncilla<T>> {
    if !(1..=MAX_PARTIES).contains(&k) {
        return Err(Error::OutOfRange {
            what: "party count",
            index: k,
            limit: MAX_PARTIES,
        });
    }
    let dim = 1usize << k;
    let norm = T::one() / T::lit(2f64.powi(k as i32 - 1)).sqrt();
    let sign = |half_weight: u32| if half_weight % 2 == 0 { norm } else { -norm };
    let mut zero_state = Vector::zeros(dim);
    let mut one_state = Vector::zeros(dim);
    for y in 0..dim {
        let h = y.count_ones();
        if h % 2 == 0 {
            zero_state[y] = sign(h / 2);
        } else {
            one_state[y] = sign((h - 1) / 2);
        }
    }
    Ok(LogicalAncilla {
        k,
        zero_state,
        one_state,
        party_assignment: (0..k).collect(),
    })
}

/// `XZ` on ancilla qubit `j` (0-based), identity on the other `k − 1`.
pub fn local_xz<T: Real>(k: usize, j: usize) -> Result<Matrix<T>> {
    if !(1..=MAX_PARTIES).contains(&k) {
        return Err(Error::OutOfRange {
            what: "party count",
            index: k,
            limit: MAX_PARTIES,
        });
    }
    if j >= k {
        return Err(Error::OutOfRange {
            what: "ancilla qubit",
            index: j,
            limit: k,
        });
    }
    let before = Matrix::<T>::identity(1 << j);
    let after = Matrix::<T>::identity(1 << (k - 1 - j));
    before.kron(&xz())?.kron(&after)
}

/// Party dimensions of a multipartite system, one factor per party.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionedSystem {
    party_dims: Vec<usize>,
}

impl PartitionedSystem {
    pub fn new(party_dims: Vec<usize>) -> Result<Self> {
        if party_dims.is_empty() {
            return Err(Error::domain(
                "a partitioned system needs at least one party",
            ));
        }
        if let Some(&d) = party_dims.iter().find(|&&d| d < 2) {
            return Err(Error::domain(format!("party dimension {d} is below 2")));
        }
        if party_dims.len() > MAX_PARTIES {
            return Err(Error::OutOfRange {
                what: "party count",
                index: party_dims.len(),
                limit: MAX_PARTIES,
            });
        }
        Ok(Self { party_dims })
    }

    pub fn qubits(parties: usize) -> Result<Self> {
        Self::new(vec![2; parties])
    }

    pub fn party_dims(&self) -> &[usize] {
        &self.party_dims
    }

    pub fn parties(&self) -> usize {
        self.party_dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.party_dims.iter().product()
    }

    /// Dimension after encoding: one ancilla qubit per party.
    pub fn encoded_dim(&self) -> usize {
        self.total_dim() << self.parties()
    }

    pub fn layout(&self) -> Layout {
        Layout::logical(self.parties())
    }

    fn check_party(&self, j: usize) -> Result<()> {
        if j >= self.parties() {
            return Err(Error::OutOfRange {
                what: "party",
                index: j,
                limit: self.parties(),
            });
        }
        Ok(())
    }

    /// `I ⊗ … ⊗ m ⊗ … ⊗ I` with `m` on party `j`.
    pub fn embed_local<T: Real>(
        &self,
        m: &Matrix<Complex<T>>,
        j: usize,
    ) -> Result<Matrix<Complex<T>>> {
        self.check_party(j)?;
        let dj = self.party_dims[j];
        if m.rows() != dj || m.cols() != dj {
            return Err(Error::DimMismatch {
                expected: dj,
                got: m.rows(),
            });
        }
        let before: usize = self.party_dims[..j].iter().product();
        let after: usize = self.party_dims[j + 1..].iter().product();
        Matrix::identity(before)
            .kron(m)?
            .kron(&Matrix::identity(after))
    }
}

/// `Σ aₓ|x⟩|0̄⟩ + bₓ|x⟩|1̄⟩` with one ancilla qubit per party.
pub fn encode_multipartite_state<T: Real>(psi: &PureState<T>, k: usize) -> Result<EncodedState<T>> {
    let parties = psi.factor_dims().len();
    if k != parties {
        return Err(Error::domain(format!(
            "logical ancilla has {k} qubits but the state has {parties} parties"
        )));
    }
    let anc = logical_states::<T>(k)?;
    let amplitudes = embed_vector(psi.amplitudes(), &anc.zero_state, &anc.one_state);
    EncodedState::new(amplitudes, psi.factor_dims().to_vec(), Layout::logical(k))
}

/// A real operator acting only on one party's system factor and that
/// party's ancilla qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedOperator<T: Real> {
    pub matrix: Matrix<T>,
    pub party: usize,
    pub source: Matrix<Complex<T>>,
    source_dim: usize,
    k: usize,
}

impl<T: Real> LiftedOperator<T> {
    pub fn to_encoded(&self) -> EncodedOperator<T> {
        EncodedOperator::new(
            self.matrix.clone(),
            self.source_dim,
            Layout::logical(self.k),
        )
        .expect("lifted operators have the encoded shape")
    }
}

/// Replaces each entry `a + ib` of `m` (on party `j`) by `a·I + b·(XZ)_j`,
/// with `(XZ)_j` on party `j`'s own ancilla qubit.
pub fn lift_local_operator<T: Real>(
    m: &Matrix<Complex<T>>,
    system: &PartitionedSystem,
    j: usize,
) -> Result<LiftedOperator<T>> {
    let full = system.embed_local(m, j)?;
    let k = system.parties();
    let matrix = embed_operator(&full, &local_xz(k, j)?)?;
    Ok(LiftedOperator {
        matrix,
        party: j,
        source: m.clone(),
        source_dim: system.total_dim(),
        k,
    })
}

/// Encodes a (possibly non-local) operator on the whole system, using
/// party 0's ancilla qubit for `i`.
pub fn lift_global_operator<T: Real>(
    m: &Matrix<Complex<T>>,
    system: &PartitionedSystem,
) -> Result<EncodedOperator<T>> {
    let n = system.total_dim();
    if m.rows() != n || m.cols() != n {
        return Err(Error::DimMismatch {
            expected: n,
            got: m.rows(),
        });
    }
    let k = system.parties();
    EncodedOperator::new(embed_operator(m, &local_xz(k, 0)?)?, n, Layout::logical(k))
}

/// `(I ⊗ Π) op (I ⊗ Π)` with `Π` the codespace projector on the `k`
/// ancilla qubits. Operators that agree on encoded states agree here.
pub fn restrict_to_codespace<T: Real>(
    op: &Matrix<T>,
    system_dim: usize,
    k: usize,
) -> Result<Matrix<T>> {
    let pi = Matrix::identity(system_dim).kron(&logical_states::<T>(k)?.projector())?;
    pi.matmul(op)?.matmul(&pi)
}

/// `−(XZ)_j (XZ)_l` on `k` ancilla qubits.
pub fn stabilizer_generator<T: Real>(k: usize, j: usize, l: usize) -> Result<Matrix<T>> {
    Ok(-&(&local_xz::<T>(k, j)? * &local_xz::<T>(k, l)?))
}

/// Whether every `−(XZ)_j (XZ)_l` fixes `v` within the assertion tolerance.
pub fn is_stabilized<T: Real>(k: usize, v: &Vector<T>) -> Result<bool> {
    let tol = Tolerances::<T>::get().assert;
    for j in 0..k {
        for l in j + 1..k {
            let g = stabilizer_generator::<T>(k, j, l)?;
            if g.apply(v)?.max_abs_diff(v) > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorCheck {
    pub j: usize,
    pub l: usize,
    /// `‖−(XZ)_j(XZ)_l v − v‖_max` for `v = |0̄⟩`.
    pub zero_residual: f64,
    pub one_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilizerReport {
    pub k: usize,
    pub generator_checks: Vec<GeneratorCheck>,
    /// Dimension of the joint +1 eigenspace of `{−(XZ)_0(XZ)_j : j ≥ 1}`.
    pub fixed_subspace_dim: usize,
    pub tolerance: f64,
}

impl StabilizerReport {
    pub fn generators_pass(&self) -> bool {
        self.generator_checks
            .iter()
            .all(|g| g.zero_residual <= self.tolerance && g.one_residual <= self.tolerance)
    }

    pub fn passed(&self) -> bool {
        self.generators_pass() && self.fixed_subspace_dim == 2
    }
}

/// Checks every pair generator on both logical states, then finds the
/// joint fixed subspace of the `k − 1` independent generators by brute
/// force: it is the null space of `Σ_j (G_j − I)ᵀ(G_j − I)`.
pub fn stabilizer_check(k: usize) -> Result<StabilizerReport> {
    if !(2..=MAX_STABILIZER_PARTIES).contains(&k) {
        return Err(Error::OutOfRange {
            what: "stabilizer party count",
            index: k,
            limit: MAX_STABILIZER_PARTIES,
        });
    }
    let anc = logical_states::<f64>(k)?;
    let mut generator_checks = Vec::new();
    for j in 0..k {
        for l in j + 1..k {
            let g = stabilizer_generator::<f64>(k, j, l)?;
            generator_checks.push(GeneratorCheck {
                j,
                l,
                zero_residual: g.apply(&anc.zero_state)?.max_abs_diff(&anc.zero_state),
                one_residual: g.apply(&anc.one_state)?.max_abs_diff(&anc.one_state),
            });
        }
    }

    let dim = 1 << k;
    let id = Matrix::<f64>::identity(dim);
    let mut gram = Matrix::zeros(dim, dim);
    for j in 1..k {
        let d = &stabilizer_generator::<f64>(k, 0, j)? - &id;
        gram = &gram + &(&d.transpose() * &d);
    }
    // Eigenvalues of the Gram matrix are 0 on the fixed space and at least
    // 4 elsewhere (each generator has spectrum ±1), so the cut is clean.
    let e = eigh(&gram)?;
    let fixed_subspace_dim = e.values.iter().filter(|&&l| l.abs() < 1e-8).count();

    Ok(StabilizerReport {
        k,
        generator_checks,
        fixed_subspace_dim,
        tolerance: 1e-12,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::{encode_operator, encode_state};
    use crate::linalg::{random_matrix, random_state};
    use crate::scalar::c;

    type C = Complex<f64>;

    fn basis(k: usize, bits: &str) -> Vector<f64> {
        Vector::basis(1 << k, usize::from_str_radix(bits, 2).unwrap())
    }

    #[test]
    fn single_party_reduces_to_plain_ancilla() {
        let a = logical_states::<f64>(1).unwrap();
        assert_eq!(a.zero_state, basis(1, "0"));
        assert_eq!(a.one_state, basis(1, "1"));
        assert_eq!(local_xz::<f64>(1, 0).unwrap(), xz());
    }

    #[test]
    fn two_party_states_by_hand() {
        let s = 0.5f64.sqrt();
        let a = logical_states::<f64>(2).unwrap();
        let zero = (&basis(2, "00") - &basis(2, "11")).scale(s);
        let one = (&basis(2, "01") + &basis(2, "10")).scale(s);
        assert!(a.zero_state.max_abs_diff(&zero) < 1e-15);
        assert!(a.one_state.max_abs_diff(&one) < 1e-15);
    }

    #[test]
    fn three_party_support() {
        let a = logical_states::<f64>(3).unwrap();
        for v in [&a.zero_state, &a.one_state] {
            let nz: Vec<f64> = v.iter().copied().filter(|x| *x != 0.0).collect();
            assert_eq!(nz.len(), 4);
            assert!(nz.iter().all(|x| (x.abs() - 0.5).abs() < 1e-16));
        }
    }

    #[test]
    fn party_count_range() {
        assert!(logical_states::<f64>(0).is_err());
        assert!(logical_states::<f64>(13).is_err());
        assert!(local_xz::<f64>(2, 2).is_err());
        assert!(stabilizer_check(1).is_err());
        assert!(stabilizer_check(7).is_err());
    }

    #[test]
    fn local_xz_on_two_party_zero() {
        let a = logical_states::<f64>(2).unwrap();
        let out = local_xz(2, 0).unwrap().apply(&a.zero_state).unwrap();
        assert!(out.max_abs_diff(&a.one_state) < 1e-16);
    }

    #[test]
    fn every_qubit_acts_as_logical_xz() {
        for k in 1..=4 {
            let a = logical_states::<f64>(k).unwrap();
            for j in 0..k {
                let xj = local_xz(k, j).unwrap();
                assert!(a.restrict(&xj).unwrap().max_abs_diff(&xz()) < 1e-13);
                let sq = a.restrict(&(&xj * &xj)).unwrap();
                assert!(sq.max_abs_diff(&-&Matrix::identity(2)) < 1e-13);
            }
        }
    }

    #[test]
    fn generators_fix_codespace_but_not_00() {
        let r = stabilizer_check(2).unwrap();
        assert!(r.passed());
        let g = stabilizer_generator::<f64>(2, 0, 1).unwrap();
        // XZ|0⟩ = |1⟩ on each qubit, so the generator sends |00⟩ to −|11⟩.
        let image = g.apply(&basis(2, "00")).unwrap();
        assert_eq!(image.max_abs_diff(&basis(2, "11").scale(-1.0)), 0.0);
        assert!(!is_stabilized(2, &basis(2, "00")).unwrap());
        let a = logical_states::<f64>(2).unwrap();
        assert!(is_stabilized(2, &a.one_state).unwrap());
    }

    #[test]
    fn fixed_subspace_is_two_dimensional() {
        for k in 2..=6 {
            let r = stabilizer_check(k).unwrap();
            assert_eq!(r.fixed_subspace_dim, 2, "k = {k}");
            assert_eq!(r.generator_checks.len(), k * (k - 1) / 2);
            assert!(r.generators_pass());
        }
    }

    #[test]
    fn orthonormal_up_to_eight() {
        for k in 1..=8 {
            let a = logical_states::<f64>(k).unwrap();
            assert!((a.zero_state.norm() - 1.0).abs() < 1e-12);
            assert!((a.one_state.norm() - 1.0).abs() < 1e-12);
            assert!(a.zero_state.inner(&a.one_state).abs() < 1e-12);
        }
    }

    #[test]
    fn encode_real_state_is_product_with_zero_bar() {
        let psi = PureState::<f64>::basis(vec![2, 2], 3).unwrap();
        let enc = encode_multipartite_state(&psi, 2).unwrap();
        let anc = logical_states::<f64>(2).unwrap();
        let expected = Vector::basis(4, 3).kron(&anc.zero_state).unwrap();
        assert_eq!(enc.amplitudes(), &expected);
        assert_eq!(enc.dim(), 16);
    }

    #[test]
    fn encode_two_party_complex_state() {
        let s = 0.5f64.sqrt();
        let v = Vector::from_vec(vec![c(s, 0.), c(0., 0.), c(0., 0.), c(0., s)]).unwrap();
        let psi = PureState::new(v, vec![2, 2]).unwrap();
        let enc = encode_multipartite_state(&psi, 2).unwrap();
        let anc = logical_states::<f64>(2).unwrap();
        let expected = &Vector::basis(4, 0).kron(&anc.zero_state).unwrap().scale(s)
            + &Vector::basis(4, 3).kron(&anc.one_state).unwrap().scale(s);
        assert!(enc.amplitudes().max_abs_diff(&expected) < 1e-16);
        assert!(encode_multipartite_state(&psi, 3).is_err());
    }

    #[test]
    fn k1_degrades_to_single_ancilla() {
        let psi = PureState::new(random_state::<f64>(3, 1), vec![3]).unwrap();
        let multi = encode_multipartite_state(&psi, 1).unwrap();
        assert_eq!(multi.amplitudes(), encode_state(&psi).amplitudes());
        let m = random_matrix::<f64>(3, 3, 2);
        let system = PartitionedSystem::new(vec![3]).unwrap();
        let lifted = lift_local_operator(&m, &system, 0).unwrap();
        assert_eq!(&lifted.matrix, encode_operator(&m).unwrap().matrix());
    }

    #[test]
    fn phase_on_one_party() {
        let s = 0.5f64.sqrt();
        let system = PartitionedSystem::qubits(2).unwrap();
        let bell = PureState::new(
            Vector::from_vec(vec![c(s, 0.), c(0., 0.), c(0., 0.), c(s, 0.)]).unwrap(),
            vec![2, 2],
        )
        .unwrap();
        let i_id = Matrix::<C>::identity(2).mul_scalar(c(0.0, 1.0));
        let lifted = lift_local_operator(&i_id, &system, 0).unwrap();
        let got = lifted
            .to_encoded()
            .apply(&encode_multipartite_state(&bell, 2).unwrap())
            .unwrap();
        let phased = PureState::new(bell.amplitudes().mul_scalar(c(0., 1.)), vec![2, 2]).unwrap();
        let expected = encode_multipartite_state(&phased, 2).unwrap();
        assert!(got.amplitudes().max_abs_diff(expected.amplitudes()) < 1e-15);
    }

    #[test]
    fn phase_gates_on_both_parties() {
        let system = PartitionedSystem::qubits(2).unwrap();
        let s_gate = Matrix::diag(&[c::<f64>(1., 0.), c(0., 1.)]);
        let psi = PureState::new(random_state::<f64>(4, 7), vec![2, 2]).unwrap();
        let a = lift_local_operator(&s_gate, &system, 0)
            .unwrap()
            .to_encoded();
        let b = lift_local_operator(&s_gate, &system, 1)
            .unwrap()
            .to_encoded();
        let got = a
            .compose(&b)
            .unwrap()
            .apply(&encode_multipartite_state(&psi, 2).unwrap())
            .unwrap();
        let ss = s_gate.kron(&s_gate).unwrap();
        let expected = encode_multipartite_state(&psi.evolve(&ss).unwrap(), 2).unwrap();
        assert!(got.amplitudes().max_abs_diff(expected.amplitudes()) < 1e-15);
    }

    #[test]
    fn lifted_identity_is_identity() {
        let system = PartitionedSystem::new(vec![2, 3]).unwrap();
        let lifted = lift_local_operator(&Matrix::<C>::identity(3), &system, 1).unwrap();
        assert_eq!(lifted.matrix, Matrix::identity(24));
    }

    #[test]
    fn lift_dim_mismatch() {
        let system = PartitionedSystem::new(vec![2, 3]).unwrap();
        assert!(lift_local_operator(&Matrix::<C>::identity(2), &system, 1).is_err());
        assert!(lift_local_operator(&Matrix::<C>::identity(2), &system, 2).is_err());
    }

    #[test]
    fn partitioned_system_validation() {
        assert!(PartitionedSystem::new(vec![]).is_err());
        assert!(PartitionedSystem::new(vec![2, 1]).is_err());
        let s = PartitionedSystem::new(vec![2, 3, 2]).unwrap();
        assert_eq!(s.encoded_dim(), 12 * 8);
    }
}
