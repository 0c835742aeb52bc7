//! Bell expressions evaluated on complex states and on their real
//! multipartite encodings, with a see-saw optimizer.

use num_complex::Complex;
use rand::Rng;
use rayon::prelude::*;

use crate::check::Check;
use crate::encoding::PureState;
use crate::error::{Error, Result};
use crate::linalg::{
    commutator_norm, eigh, is_pm_one_observable, random, random_unitary, Matrix, Vector,
};
use crate::multipartite::{encode_multipartite_state, lift_local_operator, PartitionedSystem};
use crate::scalar::Real;
use crate::tolerance::Tolerances;

pub const DEFAULT_RESTARTS: usize = 20;
pub const DEFAULT_ITERATIONS: usize = 200;
const CONVERGED: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Complex,
    RealEncoded,
}

/// One term of a Bell expression: a coefficient on a tuple of settings,
/// one setting index per party.
#[derive(Debug, Clone, PartialEq)]
pub struct Term<T> {
    pub settings: Vec<usize>,
    pub coefficient: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BellScenario<T: Real> {
    pub name: String,
    /// `observables[party][setting]`, each Hermitian with spectrum in {−1, +1}.
    observables: Vec<Vec<Matrix<Complex<T>>>>,
    terms: Vec<Term<T>>,
    pub classical_bound: T,
    pub quantum_target: T,
}

fn pauli<T: Real>(which: char) -> Matrix<Complex<T>> {
    let o = Complex::new(T::zero(), T::zero());
    let l = Complex::new(T::one(), T::zero());
    let i = Complex::new(T::zero(), T::one());
    match which {
        'x' => Matrix::from_rows(&[[o, l], [l, o]]),
        'y' => Matrix::from_rows(&[[o, -i], [i, o]]),
        'z' => Matrix::from_rows(&[[l, o], [o, -l]]),
        _ => Matrix::identity(2),
    }
}

impl<T: Real> BellScenario<T> {
    pub fn new(
        name: impl Into<String>,
        observables: Vec<Vec<Matrix<Complex<T>>>>,
        terms: Vec<Term<T>>,
        classical_bound: T,
        quantum_target: T,
    ) -> Result<Self> {
        if observables.len() < 2 {
            return Err(Error::domain("a Bell scenario needs at least two parties"));
        }
        let tol = Tolerances::<T>::get().psd;
        for (p, settings) in observables.iter().enumerate() {
            if settings.is_empty() {
                return Err(Error::domain(format!("party {p} has no settings")));
            }
            let d = settings[0].require_square("observable")?;
            for (s, a) in settings.iter().enumerate() {
                if a.rows() != d || a.cols() != d {
                    return Err(Error::DimMismatch {
                        expected: d,
                        got: a.rows(),
                    });
                }
                if !is_pm_one_observable(a, tol) {
                    return Err(Error::domain(format!(
                        "observable {s} of party {p} is not a ±1-valued Hermitian operator"
                    )));
                }
            }
        }
        for term in &terms {
            if term.settings.len() != observables.len() {
                return Err(Error::shape(format!(
                    "term {:?} names {} settings for {} parties",
                    term.settings,
                    term.settings.len(),
                    observables.len()
                )));
            }
            for (p, &s) in term.settings.iter().enumerate() {
                if s >= observables[p].len() {
                    return Err(Error::OutOfRange {
                        what: "setting",
                        index: s,
                        limit: observables[p].len(),
                    });
                }
            }
        }
        Ok(Self {
            name: name.into(),
            observables,
            terms,
            classical_bound,
            quantum_target,
        })
    }

    /// `A₀B₀ + A₀B₁ + A₁B₀ − A₁B₁` with `A = Z, X` and `B = (Z ± X)/√2`.
    pub fn chsh() -> Self {
        let z = pauli::<T>('z');
        let x = pauli::<T>('x');
        let r = T::FRAC_1_SQRT_2();
        let b0 = (&z + &x).scale(r);
        let b1 = (&z - &x).scale(r);
        let terms = [([0, 0], 1.0), ([0, 1], 1.0), ([1, 0], 1.0), ([1, 1], -1.0)]
            .iter()
            .map(|(s, c)| Term {
                settings: s.to_vec(),
                coefficient: T::lit(*c),
            })
            .collect();
        Self::new(
            "chsh",
            vec![vec![z, x], vec![b0, b1]],
            terms,
            T::lit(2.0),
            T::lit(2.0) * T::SQRT_2(),
        )
        .expect("CHSH scenario is valid")
    }

    /// `A₀B₀C₁ + A₀B₁C₀ + A₁B₀C₀ − A₁B₁C₁` with `X, Y` on every party.
    pub fn mermin3() -> Self {
        let settings = vec![pauli::<T>('x'), pauli::<T>('y')];
        let terms = [
            ([0, 0, 1], 1.0),
            ([0, 1, 0], 1.0),
            ([1, 0, 0], 1.0),
            ([1, 1, 1], -1.0),
        ]
        .iter()
        .map(|(s, c)| Term {
            settings: s.to_vec(),
            coefficient: T::lit(*c),
        })
        .collect();
        Self::new(
            "mermin3",
            vec![settings.clone(), settings.clone(), settings],
            terms,
            T::lit(2.0),
            T::lit(4.0),
        )
        .expect("Mermin scenario is valid")
    }

    /// `(|000⟩ + i|111⟩)/√2`, which reaches 4 with the default settings.
    pub fn mermin3_state() -> PureState<T> {
        let r = T::FRAC_1_SQRT_2();
        let mut v = Vector::zeros(8);
        v[0] = Complex::new(r, T::zero());
        v[7] = Complex::new(T::zero(), r);
        PureState::new(v, vec![2, 2, 2]).expect("normalized by construction")
    }

    /// `(|00⟩ + |11⟩)/√2`.
    pub fn phi_plus() -> PureState<T> {
        let r = T::FRAC_1_SQRT_2();
        let mut v = Vector::zeros(4);
        v[0] = Complex::new(r, T::zero());
        v[3] = Complex::new(r, T::zero());
        PureState::new(v, vec![2, 2]).expect("normalized by construction")
    }

    pub fn parties(&self) -> usize {
        self.observables.len()
    }

    pub fn party_dims(&self) -> Vec<usize> {
        self.observables.iter().map(|s| s[0].rows()).collect()
    }

    pub fn settings_per_party(&self) -> Vec<usize> {
        self.observables.iter().map(Vec::len).collect()
    }

    pub fn observables(&self) -> &[Vec<Matrix<Complex<T>>>] {
        &self.observables
    }

    pub fn terms(&self) -> &[Term<T>] {
        &self.terms
    }

    /// Same expression, different measurements.
    pub fn with_observables(&self, observables: Vec<Vec<Matrix<Complex<T>>>>) -> Result<Self> {
        if observables.iter().map(Vec::len).collect::<Vec<_>>() != self.settings_per_party() {
            return Err(Error::shape("settings per party must not change"));
        }
        Self::new(
            self.name.clone(),
            observables,
            self.terms.clone(),
            self.classical_bound,
            self.quantum_target,
        )
    }

    fn system(&self) -> Result<PartitionedSystem> {
        PartitionedSystem::new(self.party_dims())
    }

    fn check_state(&self, state: &PureState<T>) -> Result<()> {
        let dims = self.party_dims();
        if state.factor_dims() != dims.as_slice() {
            let expected: usize = dims.iter().product();
            return Err(Error::DimMismatch {
                expected,
                got: state.dim(),
            });
        }
        Ok(())
    }
}

/// `Σ c · A^{s₁} ⊗ … ⊗ A^{s_p}`.
pub fn bell_operator<T: Real>(scenario: &BellScenario<T>) -> Result<Matrix<Complex<T>>> {
    let n: usize = scenario.party_dims().iter().product();
    let mut total = Matrix::zeros(n, n);
    for term in scenario.terms() {
        let factors = term
            .settings
            .iter()
            .enumerate()
            .map(|(p, &s)| &scenario.observables[p][s]);
        let product = Matrix::kron_all(factors)?;
        total = &total + &product.scale(term.coefficient);
    }
    Ok(total)
}

/// `lift(A₀)[p][s]`: each observable lifted to act on its party's system
/// factor and that party's own ancilla qubit.
pub fn lifted_observables<T: Real>(scenario: &BellScenario<T>) -> Result<Vec<Vec<Matrix<T>>>> {
    let system = scenario.system()?;
    scenario
        .observables
        .iter()
        .enumerate()
        .map(|(p, settings)| {
            settings
                .iter()
                .map(|a| Ok(lift_local_operator(a, &system, p)?.matrix))
                .collect()
        })
        .collect()
}

/// `Σ c · lift(A^{s₁}) · … · lift(A^{s_p})`, built from local real
/// operators only.
pub fn bell_operator_encoded<T: Real>(scenario: &BellScenario<T>) -> Result<Matrix<T>> {
    let lifted = lifted_observables(scenario)?;
    let n = scenario.system()?.encoded_dim();
    let mut total = Matrix::zeros(n, n);
    for term in scenario.terms() {
        let mut product = Matrix::identity(n);
        for (p, &s) in term.settings.iter().enumerate() {
            product = product.matmul(&lifted[p][s])?;
        }
        total = &total + &product.scale(term.coefficient);
    }
    Ok(total)
}

pub fn bell_value<T: Real>(
    scenario: &BellScenario<T>,
    state: &PureState<T>,
    mode: Mode,
) -> Result<T> {
    scenario.check_state(state)?;
    match mode {
        Mode::Complex => Ok(state.expectation(&bell_operator(scenario)?)?.re),
        Mode::RealEncoded => {
            let encoded = encode_multipartite_state(state, scenario.parties())?;
            encoded
                .amplitudes()
                .expectation(&bell_operator_encoded(scenario)?)
        }
    }
}

/// Largest commutator norm between lifted observables of different parties.
pub fn locality_audit<T: Real>(scenario: &BellScenario<T>) -> Result<T> {
    let lifted = lifted_observables(scenario)?;
    let mut worst = T::zero();
    for p in 0..lifted.len() {
        for q in p + 1..lifted.len() {
            for a in &lifted[p] {
                for b in &lifted[q] {
                    worst = worst.max(commutator_norm(a, b));
                }
            }
        }
    }
    Ok(worst)
}

/// Observables and state found by one optimizer restart.
#[derive(Debug, Clone, PartialEq)]
pub struct BellSettings<T: Real> {
    pub seed: u64,
    pub observables: Vec<Vec<Matrix<Complex<T>>>>,
    pub state: PureState<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BellResult<T: Real> {
    pub value_complex: T,
    pub value_real_encoded: T,
    pub settings_used: BellSettings<T>,
    /// `(iteration, value)` of the winning restart.
    pub optimizer_trace: Vec<(usize, T)>,
    pub checks: Vec<Check>,
}

impl<T: Real> BellResult<T> {
    pub fn passed(&self) -> bool {
        crate::check::all_passed(&self.checks)
    }
}

/// Eigenvector of the largest eigenvalue of the Bell operator.
fn best_state<T: Real>(scenario: &BellScenario<T>) -> Result<(PureState<T>, T)> {
    let e = eigh(&bell_operator(scenario)?)?;
    let top = e.values.len() - 1;
    let state = PureState::normalized(e.vector(top), scenario.party_dims())?;
    Ok((state, e.values[top]))
}

/// `M` with `⟨ψ|A ⊗ rest|ψ⟩ = Tr(A·M)`, where `rest` acts on every party
/// other than `party`.
fn party_response<T: Real>(
    state: &PureState<T>,
    dims: &[usize],
    party: usize,
    rest: &Matrix<Complex<T>>,
) -> Matrix<Complex<T>> {
    let d = dims[party];
    let after: usize = dims[party + 1..].iter().product();
    let split = |x: usize| {
        let hi = x / (d * after);
        let lo = x % after;
        let mid = (x / after) % d;
        (mid, hi * after + lo)
    };
    let psi = state.amplitudes();
    let n = psi.dim();
    let mut m = Matrix::zeros(d, d);
    for x in 0..n {
        let (a, xr) = split(x);
        let cx = psi[x].conj();
        for y in 0..n {
            let (b, yr) = split(y);
            m[(b, a)] += cx * rest[(xr, yr)] * psi[y];
        }
    }
    m
}

/// `sign(M)`: the ±1 observable maximizing `Tr(A·M)`.
fn sign_of<T: Real>(m: &Matrix<Complex<T>>) -> Result<Matrix<Complex<T>>> {
    let e = eigh(m)?;
    Ok(e.apply_fn(|l| {
        let s = if l < T::zero() { -T::one() } else { T::one() };
        Complex::new(s, T::zero())
    }))
}

fn improve_observables<T: Real>(
    scenario: &BellScenario<T>,
    state: &PureState<T>,
) -> Result<BellScenario<T>> {
    let dims = scenario.party_dims();
    let mut observables = scenario.observables.clone();
    for p in 0..scenario.parties() {
        let d = dims[p];
        let mut responses = vec![Matrix::zeros(d, d); observables[p].len()];
        for term in scenario.terms() {
            let others = term
                .settings
                .iter()
                .enumerate()
                .filter(|(q, _)| *q != p)
                .map(|(q, &s)| &observables[q][s]);
            let rest = Matrix::kron_all(others)?;
            let r = party_response(state, &dims, p, &rest).scale(term.coefficient);
            let slot = &mut responses[term.settings[p]];
            *slot = &*slot + &r;
        }
        for (s, m) in responses.iter().enumerate() {
            observables[p][s] = sign_of(m)?;
        }
    }
    scenario.with_observables(observables)
}

fn random_observable<T: Real>(d: usize, seed: u64) -> Matrix<Complex<T>> {
    let u = random_unitary::<T>(d, seed);
    let signs: Vec<Complex<T>> = (0..d)
        .map(|i| Complex::new(if 2 * i < d { T::one() } else { -T::one() }, T::zero()))
        .collect();
    &(&u * &Matrix::diag(&signs)) * &u.dagger()
}

struct Restart<T: Real> {
    value: T,
    scenario: BellScenario<T>,
    state: PureState<T>,
    trace: Vec<(usize, T)>,
    seed: u64,
}

fn see_saw<T: Real>(
    scenario: &BellScenario<T>,
    seed: u64,
    iterations: usize,
) -> Result<Restart<T>> {
    let mut rng = random::rng(seed);
    let observables = scenario
        .observables
        .iter()
        .map(|settings| {
            settings
                .iter()
                .map(|a| random_observable(a.rows(), rng.random()))
                .collect()
        })
        .collect();
    let mut current = scenario.with_observables(observables)?;
    let (mut state, mut value) = best_state(&current)?;
    let mut trace = vec![(0, value)];
    for it in 1..=iterations {
        current = improve_observables(&current, &state)?;
        let (next_state, next_value) = best_state(&current)?;
        let gain = next_value - value;
        state = next_state;
        value = next_value;
        trace.push((it, value));
        if gain.abs() <= T::lit(CONVERGED) {
            break;
        }
    }
    Ok(Restart {
        value,
        scenario: current,
        state,
        trace,
        seed,
    })
}

/// See-saw over (state, observables), one restart per seed, run in
/// parallel. The best restart wins; ties go to the earlier seed.
pub fn optimize_bell<T: Real>(
    scenario: &BellScenario<T>,
    seeds: &[u64],
    iterations: usize,
) -> Result<BellResult<T>> {
    if seeds.is_empty() {
        return Err(Error::domain("optimize_bell needs at least one seed"));
    }
    let restarts = seeds
        .par_iter()
        .map(|&seed| see_saw(scenario, seed, iterations))
        .collect::<Result<Vec<_>>>()?;
    let mut best = 0;
    for (i, r) in restarts.iter().enumerate() {
        if r.value > restarts[best].value {
            best = i;
        }
    }
    let winner = restarts.into_iter().nth(best).expect("index in range");
    let value_complex = bell_value(&winner.scenario, &winner.state, Mode::Complex)?;
    let value_real_encoded = bell_value(&winner.scenario, &winner.state, Mode::RealEncoded)?;
    let checks = vec![
        Check::at_most(
            "modes agree",
            (value_complex - value_real_encoded).abs().to_f64(),
            T::tol_at_least(1e-10, 1e4).to_f64(),
        ),
        Check::at_most(
            "lifted observables of different parties commute",
            locality_audit(&winner.scenario)?.to_f64(),
            T::tol_at_least(1e-12, 1e3).to_f64(),
        ),
    ];
    Ok(BellResult {
        value_complex,
        value_real_encoded,
        settings_used: BellSettings {
            seed: winner.seed,
            observables: winner.scenario.observables.clone(),
            state: winner.state,
        },
        optimizer_trace: winner.trace,
        checks,
    })
}

/// `seed, seed + 1, …` for `restarts` restarts.
pub fn restart_seeds(seed: u64, restarts: usize) -> Vec<u64> {
    (0..restarts as u64).map(|i| seed.wrapping_add(i)).collect()
}
