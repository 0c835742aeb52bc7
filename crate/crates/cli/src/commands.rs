use serde_json::{json, Value};

use realsim::applications::{
    optimize_bell, phase_gate, restart_seeds, selftest_counterexample, BellScenario,
    InnerProductWitness,
};
use realsim::dynamics::{trajectory, Hamiltonian, Sign};
use realsim::encoding::{
    decode_state, encode_operator_in, encode_state_in, Layout, Povm, PureState,
};
use realsim::multipartite::stabilizer_check;
use realsim::Check;

use crate::report::Assertion;
use crate::schema::{parse, Input, MatrixFile, PovmFile, ScenarioFile, VectorFile};
use crate::{InputError, ModeArg, Options};

pub const BELL_ITERATIONS: usize = 200;

/// Command-specific payload plus its assertions.
pub struct Outcome {
    pub results: Value,
    pub assertions: Vec<Assertion>,
}

fn layout(k: Option<usize>) -> Layout {
    k.map_or(Layout::SingleAncilla, Layout::logical)
}

fn layout_json(layout: &Layout) -> Value {
    match layout {
        Layout::SingleAncilla => json!("single_ancilla"),
        Layout::Logical { k, .. } => json!({ "logical": k }),
    }
}

fn checks(checks: &[Check]) -> Vec<Assertion> {
    checks.iter().map(Assertion::from).collect()
}

fn read_state(input: &Input) -> Result<PureState<f64>, InputError> {
    parse::<VectorFile>(input)?.to_state()
}

pub fn encode(state: &Input, opts: &Options) -> Result<Outcome, InputError> {
    let psi = read_state(state)?;
    let layout = layout(opts.k);
    let encoded = encode_state_in(&psi, &layout)?;
    let decoded = decode_state(&encoded)?;
    let round_trip = decoded.amplitudes().max_abs_diff(psi.amplitudes());
    let norm_error = (encoded.amplitudes().norm() - 1.0).abs();
    Ok(Outcome {
        results: json!({
            "dims": psi.factor_dims(),
            "layout": layout_json(&layout),
            "encoded_dim": encoded.dim(),
            "amplitudes": encoded.amplitudes().as_slice(),
        }),
        assertions: checks(&[
            Check::at_most("decode(encode(ψ)) == ψ", round_trip, opts.tol),
            Check::at_most("encoded state is normalized", norm_error, opts.tol),
        ]),
    })
}

pub fn evolve(hamiltonian: &Input, state: &Input, opts: &Options) -> Result<Outcome, InputError> {
    let psi = read_state(state)?;
    let h = Hamiltonian::new(
        parse::<MatrixFile>(hamiltonian)?.to_matrix()?,
        psi.factor_dims().to_vec(),
    )?;
    let layout = layout(opts.k);
    let sign: Sign = opts.sign.into();
    let r = trajectory(&h, &psi, opts.t_max, opts.steps, &layout, sign)?;
    let last = r.times.len() - 1;
    let mut assertions = checks(&r.checks);
    assertions.push(Assertion::from(&Check::at_most(
        "encoded evolution within --tol",
        r.max_deviation,
        opts.tol,
    )));
    Ok(Outcome {
        results: json!({
            "layout": layout_json(&layout),
            "sign": opts.sign.name(),
            "times": r.times,
            "max_imag": r.max_imag,
            "max_imag_operator": r.max_imag_operator,
            "max_orthogonality_error": r.max_orthogonality_error,
            "max_deviation": r.max_deviation,
            "energy_drift": r.energy_drift(),
            "final_complex_state": VectorFile::from_state(&r.complex_states[last]),
            "final_encoded_amplitudes": r.encoded_states[last].amplitudes().as_slice(),
        }),
        assertions,
    })
}

pub fn measure(
    state: &Input,
    povm: &Input,
    unitary: Option<&Input>,
    opts: &Options,
) -> Result<Outcome, InputError> {
    let mut psi = read_state(state)?;
    let povm_file: PovmFile = parse(povm)?;
    let povm = Povm::new(
        povm_file
            .elements
            .iter()
            .map(MatrixFile::to_matrix)
            .collect::<Result<_, _>>()?,
    )?;
    let layout = layout(opts.k);
    let mut encoded = encode_state_in(&psi, &layout)?;
    if let Some(u) = unitary {
        let u = parse::<MatrixFile>(u)?.to_matrix()?;
        if !realsim::linalg::is_unitary(&u, 1e-10) {
            return Err(InputError(
                "invariant violated: unitary file is not unitary".into(),
            ));
        }
        encoded = encode_operator_in(&u, &layout)?.apply(&encoded)?;
        psi = psi.evolve(&u)?;
    }
    let complex = realsim::encoding::povm_probabilities(&psi, &povm)?;
    let real = povm
        .elements()
        .iter()
        .map(|e| encode_operator_in(e, &layout)?.expectation(&encoded))
        .collect::<realsim::Result<Vec<f64>>>()?;
    let gap = complex
        .iter()
        .zip(&real)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let total = (real.iter().sum::<f64>() - 1.0).abs();
    Ok(Outcome {
        results: json!({
            "layout": layout_json(&layout),
            "probabilities_complex": complex,
            "probabilities_encoded": real,
            "max_gap": gap,
        }),
        assertions: checks(&[
            Check::at_most("encoded statistics match complex statistics", gap, opts.tol),
            Check::at_most("encoded probabilities sum to 1", total, opts.tol),
        ]),
    })
}

pub fn load_scenario(name: &str, file: Option<&Input>) -> Result<BellScenario<f64>, InputError> {
    match (name, file) {
        (_, Some(input)) => parse::<ScenarioFile>(input)?.to_scenario(),
        ("chsh", None) => Ok(BellScenario::chsh()),
        ("mermin3", None) => Ok(BellScenario::mermin3()),
        (other, None) => Err(InputError(format!(
            "unknown scenario '{other}' (built-ins: chsh, mermin3; or pass a JSON file path)"
        ))),
    }
}

pub fn bell(scenario: &BellScenario<f64>, opts: &Options) -> Result<Outcome, InputError> {
    let seed = opts
        .seed
        .ok_or_else(|| InputError("bell is stochastic and needs --seed".into()))?;
    if opts.restarts == 0 {
        return Err(InputError("--restarts must be at least 1".into()));
    }
    let r = optimize_bell(
        scenario,
        &restart_seeds(seed, opts.restarts),
        BELL_ITERATIONS,
    )?;
    let mut results = json!({
        "scenario": scenario.name,
        "mode": opts.mode.name(),
        "classical_bound": scenario.classical_bound,
        "quantum_target": finite(scenario.quantum_target),
        "restarts": opts.restarts,
        "seed": seed,
        "winning_seed": r.settings_used.seed,
        "observables": r.settings_used.observables.iter()
            .map(|s| s.iter().map(MatrixFile::from_matrix).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "state": VectorFile::from_state(&r.settings_used.state),
        "optimizer_trace": r.optimizer_trace,
    });
    let mut assertions = checks(&r.checks);
    let mut reported = Vec::new();
    if opts.mode != ModeArg::RealEncoded {
        results["value_complex"] = json!(r.value_complex);
        reported.push(("complex", r.value_complex));
    }
    if opts.mode != ModeArg::Complex {
        results["value_real_encoded"] = json!(r.value_real_encoded);
        reported.push(("real_encoded", r.value_real_encoded));
    }
    if opts.mode == ModeArg::Both {
        assertions.push(Assertion::from(&Check::at_most(
            "modes agree within --tol",
            (r.value_complex - r.value_real_encoded).abs(),
            opts.tol,
        )));
    }
    if scenario.quantum_target.is_finite() {
        for (mode, value) in reported {
            assertions.push(Assertion::from(&Check::at_least(
                format!("{mode} value reaches the quantum target"),
                value,
                scenario.quantum_target - 1e-6,
            )));
        }
    }
    Ok(Outcome {
        results,
        assertions,
    })
}

fn finite(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn witness_json(w: &InnerProductWitness<f64>) -> Value {
    json!({
        "label": w.label,
        "psi": VectorFile::from_state(&w.psi),
        "phi": VectorFile::from_state(&w.phi),
        "re_value": w.re_value,
        "modulus": w.modulus,
    })
}

pub fn selftest(gate: Option<&Input>, opts: &Options) -> Result<Outcome, InputError> {
    let t_gate = match gate {
        Some(input) => parse::<MatrixFile>(input)?.to_matrix()?,
        None => phase_gate(),
    };
    let t = selftest_counterexample(&t_gate)?;
    let mut assertions = checks(&t.checks);
    assertions.push(Assertion::from(&Check::at_most(
        "statistics agree within --tol",
        t.max_stat_gap,
        opts.tol,
    )));
    Ok(Outcome {
        results: json!({
            "t_gate": MatrixFile::from_matrix(&t.t_gate),
            "max_stat_gap": t.max_stat_gap,
            "inner_product_witness": witness_json(&t.inner_product_witness),
            "strongest_witness": witness_json(&t.strongest_witness),
            "factor_residual": t.factor_residual,
            "product_with_zero_bar_residual": t.product_with_zero_bar_residual,
            "statistics_logical": t.statistics_logical,
            "statistics_simulated": t.statistics_simulated,
        }),
        assertions,
    })
}

pub fn stabilizer(opts: &Options) -> Result<Outcome, InputError> {
    let k = opts.k.unwrap_or(2);
    let report = stabilizer_check(k)?;
    let mut list = Vec::new();
    let mut assertions = Vec::new();
    for g in &report.generator_checks {
        list.push(json!({
            "j": g.j,
            "l": g.l,
            "zero_residual": g.zero_residual,
            "one_residual": g.one_residual,
        }));
        assertions.push(Assertion::from(&Check::at_most(
            format!("−(XZ)_{}(XZ)_{} fixes the codespace", g.j, g.l),
            g.zero_residual.max(g.one_residual),
            report.tolerance,
        )));
    }
    assertions.push(Assertion::from(&Check::close(
        "fixed-subspace dimension is 2",
        report.fixed_subspace_dim as f64,
        2.0,
        0.0,
    )));
    Ok(Outcome {
        results: json!({
            "k": k,
            "fixed_subspace_dim": report.fixed_subspace_dim,
            "generator_checks": list,
        }),
        assertions,
    })
}
