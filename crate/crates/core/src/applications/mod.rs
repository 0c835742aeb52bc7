//! Bell values and a self-test counterexample, both run through the real
//! multipartite encoding.

pub mod bell;
pub mod selftest;

pub use bell::{
    bell_operator, bell_operator_encoded, bell_value, locality_audit, optimize_bell, restart_seeds,
    BellResult, BellScenario, BellSettings, Mode, Term,
};
pub use selftest::{
    hadamard, pauli_probe_povm, pauli_probe_states, phase_gate, product_residual,
    selftest_counterexample, InnerProductWitness, SelfTestTranscript,
};
