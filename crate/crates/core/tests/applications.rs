use num_complex::Complex;

use realsim::applications::{
    bell_operator, bell_value, locality_audit, optimize_bell, restart_seeds,
    selftest_counterexample, BellScenario, Mode, Term,
};
use realsim::dynamics::{local_generator, trajectory, Hamiltonian, Sign};
use realsim::encoding::{Layout, PureState};
use realsim::linalg::{eigh, random_hermitian, random_state, random_unitary};
use realsim::multipartite::{restrict_to_codespace, PartitionedSystem};
use realsim::CMatrix;

#[test]
fn mermin_optimizer_reaches_four() {
    let r = optimize_bell(&BellScenario::<f64>::mermin3(), &restart_seeds(11, 20), 200).unwrap();
    assert!((r.value_complex - 4.0).abs() <= 1e-6, "{}", r.value_complex);
    assert!((r.value_real_encoded - 4.0).abs() <= 1e-6);
    assert!(r.passed(), "{:?}", r.checks);
}

#[test]
fn optimizer_trace_is_monotone() {
    let r = optimize_bell(&BellScenario::<f64>::chsh(), &restart_seeds(1, 5), 100).unwrap();
    for w in r.optimizer_trace.windows(2) {
        assert!(w[1].1 >= w[0].1 - 1e-12, "{:?}", w);
    }
}

#[test]
fn modes_agree_on_random_states_and_settings() {
    for seed in 0..10 {
        let base = BellScenario::<f64>::chsh();
        let obs = (0..2)
            .map(|p| {
                (0..2)
                    .map(|s| {
                        let u = random_unitary::<f64>(2, 100 * seed + 10 * p + s);
                        let z = CMatrix::diag(&[Complex::new(1.0, 0.0), Complex::new(-1.0, 0.0)]);
                        &(&u * &z) * &u.dagger()
                    })
                    .collect()
            })
            .collect();
        let s = base.with_observables(obs).unwrap();
        let psi = PureState::new(random_state(4, seed), vec![2, 2]).unwrap();
        let c = bell_value(&s, &psi, Mode::Complex).unwrap();
        let r = bell_value(&s, &psi, Mode::RealEncoded).unwrap();
        assert!((c - r).abs() <= 1e-10);
        assert!(locality_audit(&s).unwrap() <= 1e-12);
    }
}

#[test]
fn custom_scenario_with_qutrits() {
    let diag = |v: [f64; 3]| CMatrix::diag(&v.map(|x| Complex::new(x, 0.0)));
    let u = random_unitary::<f64>(3, 5);
    let rotated = &(&u * &diag([1.0, -1.0, 1.0])) * &u.dagger();
    let observables = vec![
        vec![diag([1.0, 1.0, -1.0]), rotated.clone()],
        vec![rotated, diag([-1.0, 1.0, 1.0])],
    ];
    let terms = vec![
        Term {
            settings: vec![0, 0],
            coefficient: 1.0,
        },
        Term {
            settings: vec![1, 1],
            coefficient: -0.5,
        },
    ];
    let s = BellScenario::new("custom", observables, terms, 0.0, 0.0).unwrap();
    let psi = PureState::new(random_state(9, 4), vec![3, 3]).unwrap();
    let c = bell_value(&s, &psi, Mode::Complex).unwrap();
    let r = bell_value(&s, &psi, Mode::RealEncoded).unwrap();
    assert!((c - r).abs() <= 1e-10);
    let top = eigh(&bell_operator(&s).unwrap()).unwrap().max_value();
    assert!(c <= top + 1e-12);
}

#[test]
fn selftest_statistics_match_for_random_gates() {
    for seed in 0..10 {
        let t = selftest_counterexample(&random_unitary::<f64>(2, seed)).unwrap();
        assert!(t.max_stat_gap <= 1e-12);
        for probs in t.statistics_simulated.iter() {
            assert!((probs.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        }
    }
}

#[test]
fn local_hamiltonian_trajectory_matches_global() {
    let system = PartitionedSystem::qubits(2).unwrap();
    let ha = random_hermitian::<f64>(2, 1);
    let hb = random_hermitian::<f64>(2, 2);
    let global = &system.embed_local(&ha, 0).unwrap() + &system.embed_local(&hb, 1).unwrap();
    let h = Hamiltonian::new(global, vec![2, 2]).unwrap();
    let psi = PureState::new(random_state(4, 3), vec![2, 2]).unwrap();
    let r = trajectory(&h, &psi, 4.0, 64, &Layout::logical(2), Sign::Paper).unwrap();
    assert!(r.passed(), "{:?}", r.checks);

    let g_local = local_generator(&[(0, ha), (1, hb)], &system).unwrap();
    let g_global = realsim::dynamics::generator(&h, &Layout::logical(2)).unwrap();
    let a = restrict_to_codespace(&g_local, 4, 2).unwrap();
    let b = restrict_to_codespace(&g_global, 4, 2).unwrap();
    assert!(a.max_abs_diff(&b) <= 1e-12);
}

#[test]
fn energy_is_conserved() {
    let h = Hamiltonian::single(random_hermitian::<f64>(5, 9)).unwrap();
    let psi = PureState::single(random_state(5, 10)).unwrap();
    let r = trajectory(&h, &psi, 10.0, 64, &Layout::SingleAncilla, Sign::Physics).unwrap();
    assert!(r.energy_drift() <= 1e-10);
    for (a, b) in r.energy_complex.iter().zip(&r.energy_encoded) {
        assert!((a - b).abs() <= 1e-10);
    }
}
