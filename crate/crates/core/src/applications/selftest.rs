//! Real simulation of a complex gate inside a two-party self-test.
//!
//! The logical system is a pair of qubits with gate `T` on A and `conj(T)`
//! on B, so that both gates together leave `|Φ⁺⟩` fixed. The simulation
//! stores a two-qubit logical ancilla, one qubit on each side, and applies
//! the real lifts of the gates. Local measurement statistics agree, while
//! inner products between simulated states are only the real parts of the
//! logical ones.

use num_complex::Complex;

use super::bell::BellScenario;
use crate::check::Check;
use crate::encoding::{EncodedState, PureState};
use crate::error::{Error, Result};
use crate::linalg::{eigh, is_unitary, Matrix, Vector};
use crate::multipartite::{
    self, encode_multipartite_state, lift_local_operator, PartitionedSystem,
};
use crate::scalar::Real;
use crate::tolerance::Tolerances;

/// Six Pauli eigenstates in the order `|0⟩, |1⟩, |+⟩, |−⟩, |+i⟩, |−i⟩`.
pub fn pauli_probe_states<T: Real>() -> Vec<PureState<T>> {
    let r = T::FRAC_1_SQRT_2();
    let z = T::zero();
    let pairs = [
        [(T::one(), z), (z, z)],
        [(z, z), (T::one(), z)],
        [(r, z), (r, z)],
        [(r, z), (-r, z)],
        [(r, z), (z, r)],
        [(r, z), (z, -r)],
    ];
    pairs
        .iter()
        .map(|p| {
            let v = Vector::from_vec(vec![
                Complex::new(p[0].0, p[0].1),
                Complex::new(p[1].0, p[1].1),
            ])
            .expect("finite");
            PureState::single(v).expect("normalized by construction")
        })
        .collect()
}

/// `{|p⟩⟨p|/3}` over the six Pauli eigenstates: an informationally
/// complete single-qubit POVM.
pub fn pauli_probe_povm<T: Real>() -> Vec<Matrix<Complex<T>>> {
    let third = T::one() / T::lit(3.0);
    pauli_probe_states::<T>()
        .iter()
        .map(|p| p.amplitudes().outer(p.amplitudes()).scale(third))
        .collect()
}

/// A pair whose inner product loses its imaginary part under encoding.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerProductWitness<T: Real> {
    pub label: String,
    pub psi: PureState<T>,
    pub phi: PureState<T>,
    /// `⟨ψ′|φ′⟩` of the encodings, equal to `Re⟨ψ|φ⟩`.
    pub re_value: T,
    /// `|⟨ψ|φ⟩|`.
    pub modulus: T,
}

impl<T: Real> InnerProductWitness<T> {
    pub fn gap(&self) -> T {
        self.modulus - self.re_value.abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelfTestTranscript<T: Real> {
    pub t_gate: Matrix<Complex<T>>,
    /// `|Φ⁺⟩`, `(T ⊗ I)|Φ⁺⟩`, `(T ⊗ conj T)|Φ⁺⟩`.
    pub logical_states: Vec<PureState<T>>,
    /// The adversary's states, built by applying lifted local gates to the
    /// encoding of `|Φ⁺⟩`. Factor order: `qA, qB, aA, aB`.
    pub simulated_states: Vec<EncodedState<T>>,
    /// `statistics_logical[state][a·6 + b]` for probe outcomes `a` on A and
    /// `b` on B.
    pub statistics_logical: Vec<Vec<T>>,
    pub statistics_simulated: Vec<Vec<T>>,
    pub max_stat_gap: T,
    /// `(|+⟩, T|+⟩)`.
    pub inner_product_witness: InnerProductWitness<T>,
    /// The pair with the largest `|⟨ψ|φ⟩| − |Re⟨ψ|φ⟩|` among `(p, T·p)` over
    /// the Pauli probe states and all pairs of logical states.
    pub strongest_witness: InnerProductWitness<T>,
    /// Largest `1 − λ_max` of a simulated state's reduced system density
    /// matrix; zero exactly when every simulated state is a product of a
    /// system state and an ancilla state.
    pub factor_residual: T,
    /// Largest weight of a simulated state outside `system ⊗ |0̄⟩`; zero
    /// exactly when it equals `logical ⊗ |0̄⟩`.
    pub product_with_zero_bar_residual: T,
    pub checks: Vec<Check>,
}

impl<T: Real> SelfTestTranscript<T> {
    pub fn passed(&self) -> bool {
        crate::check::all_passed(&self.checks)
    }
}

/// `diag(1, i)`.
pub fn phase_gate<T: Real>() -> Matrix<Complex<T>> {
    Matrix::diag(&[
        Complex::new(T::one(), T::zero()),
        Complex::new(T::zero(), T::one()),
    ])
}

pub fn hadamard<T: Real>() -> Matrix<Complex<T>> {
    let r = Complex::new(T::FRAC_1_SQRT_2(), T::zero());
    Matrix::from_rows(&[[r, r], [r, -r]])
}

/// `1 − λ_max(M·Mᵀ)` where `M` is the state reshaped to system × ancilla.
pub fn product_residual<T: Real>(state: &EncodedState<T>) -> Result<T> {
    let a = state.layout().ancilla_dim();
    let n = state.source_dim();
    let m = Matrix::from_vec(n, a, state.amplitudes().as_slice().to_vec())?;
    let reduced = m.matmul(&m.transpose())?;
    Ok(T::one() - eigh(&reduced)?.max_value())
}

pub fn selftest_counterexample<T: Real>(
    t_gate: &Matrix<Complex<T>>,
) -> Result<SelfTestTranscript<T>> {
    if t_gate.rows() != 2 || t_gate.cols() != 2 {
        return Err(Error::shape("the self-test gate acts on one qubit"));
    }
    if !is_unitary(t_gate, Tolerances::<T>::get().construct) {
        return Err(Error::domain("the self-test gate is not unitary"));
    }
    let system = PartitionedSystem::qubits(2)?;
    let gate_a = t_gate.clone();
    let gate_b = t_gate.map(|z| z.conj());
    let id = Matrix::identity(2);

    let phi = BellScenario::<T>::phi_plus();
    let logical_states = vec![
        phi.clone(),
        phi.evolve(&gate_a.kron(&id)?)?,
        phi.evolve(&gate_a.kron(&gate_b)?)?,
    ];

    let lift_a = lift_local_operator(&gate_a, &system, 0)?.to_encoded();
    let lift_b = lift_local_operator(&gate_b, &system, 1)?.to_encoded();
    let start = encode_multipartite_state(&phi, 2)?;
    let after_a = lift_a.apply(&start)?;
    let after_ab = lift_b.apply(&after_a)?;
    let simulated_states = vec![start, after_a, after_ab];

    // Every joint outcome (a, b) of the product probe measurement.
    let probes = pauli_probe_povm::<T>();
    let mut joint = Vec::with_capacity(probes.len() * probes.len());
    let mut joint_lifted = Vec::with_capacity(probes.len() * probes.len());
    for pa in &probes {
        let la = lift_local_operator(pa, &system, 0)?.matrix;
        for pb in &probes {
            joint.push(pa.kron(pb)?);
            let lb = lift_local_operator(pb, &system, 1)?.matrix;
            joint_lifted.push(la.matmul(&lb)?);
        }
    }
    let statistics_logical = logical_states
        .iter()
        .map(|s| joint.iter().map(|e| Ok(s.expectation(e)?.re)).collect())
        .collect::<Result<Vec<Vec<T>>>>()?;
    let statistics_simulated = simulated_states
        .iter()
        .map(|s| {
            joint_lifted
                .iter()
                .map(|e| s.amplitudes().expectation(e))
                .collect()
        })
        .collect::<Result<Vec<Vec<T>>>>()?;
    let mut max_stat_gap = T::zero();
    for (l, s) in statistics_logical.iter().zip(&statistics_simulated) {
        for (p, q) in l.iter().zip(s) {
            max_stat_gap = max_stat_gap.max((*p - *q).abs());
        }
    }

    let candidates = witness_candidates(t_gate, &logical_states)?;
    let inner_product_witness = candidates[2].clone();
    let strongest_witness = strongest(candidates);

    let mut factor_residual = T::zero();
    let mut product_with_zero_bar_residual = T::zero();
    let zero_bar = multipartite::logical_states::<T>(2)?.zero_state;
    for simulated in &simulated_states {
        factor_residual = factor_residual.max(product_residual(simulated)?);
        let on_zero_bar: T = simulated
            .amplitudes()
            .as_slice()
            .chunks(zero_bar.dim())
            .map(|block| {
                let overlap: T = block
                    .iter()
                    .zip(zero_bar.iter())
                    .map(|(&a, &b)| a * b)
                    .sum();
                overlap * overlap
            })
            .sum();
        product_with_zero_bar_residual = product_with_zero_bar_residual.max(T::one() - on_zero_bar);
    }

    let stat_tol = T::tol_at_least(1e-12, 1e3);
    let checks = vec![Check::at_most(
        "logical and simulated statistics agree",
        max_stat_gap.to_f64(),
        stat_tol.to_f64(),
    )];
    Ok(SelfTestTranscript {
        t_gate: t_gate.clone(),
        logical_states,
        simulated_states,
        statistics_logical,
        statistics_simulated,
        max_stat_gap,
        inner_product_witness,
        strongest_witness,
        factor_residual,
        product_with_zero_bar_residual,
        checks,
    })
}

/// `(p, T·p)` for the Pauli probe states in order, then every pair of
/// logical states.
fn witness_candidates<T: Real>(
    t_gate: &Matrix<Complex<T>>,
    logical: &[PureState<T>],
) -> Result<Vec<InnerProductWitness<T>>> {
    let names = ["|0⟩", "|1⟩", "|+⟩", "|−⟩", "|+i⟩", "|−i⟩"];
    let mut pairs = Vec::new();
    for (p, name) in pauli_probe_states::<T>().into_iter().zip(names) {
        let tp = p.evolve(t_gate)?;
        pairs.push((format!("({name}, T{name})"), p, tp));
    }
    let logical_names = ["Φ⁺", "(T⊗I)Φ⁺", "(T⊗T̄)Φ⁺"];
    for i in 0..logical.len() {
        for j in i + 1..logical.len() {
            pairs.push((
                format!("({}, {})", logical_names[i], logical_names[j]),
                logical[i].clone(),
                logical[j].clone(),
            ));
        }
    }
    pairs
        .into_iter()
        .map(|(label, psi, phi)| {
            let parties = psi.factor_dims().len();
            let re_value = encode_multipartite_state(&psi, parties)?
                .inner(&encode_multipartite_state(&phi, parties)?);
            let modulus = psi.inner(&phi).norm();
            Ok(InnerProductWitness {
                label,
                psi,
                phi,
                re_value,
                modulus,
            })
        })
        .collect()
}

/// Largest gap; a later candidate replaces an earlier one only if it wins
/// by more than the assertion tolerance.
fn strongest<T: Real>(candidates: Vec<InnerProductWitness<T>>) -> InnerProductWitness<T> {
    let tol = Tolerances::<T>::get().assert;
    let mut it = candidates.into_iter();
    let mut best = it.next().expect("candidate list is never empty");
    for w in it {
        if w.gap() > best.gap() + tol {
            best = w;
        }
    }
    best
}
