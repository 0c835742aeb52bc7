//! Continuous-time evolution on the real side.
//!
//! With `H′` the encoding of a Hermitian `h` and `J = I ⊗ XZ` (the encoding
//! of `i`), the real generator `J·H′` is antisymmetric, so
//! `U′(t) = exp(J·H′·t)` is real orthogonal and mirrors `U(t) = exp(iht)`.
//!
//! The two sides are computed by different routes: the complex side by
//! scaling-and-squaring, the real side by diagonalizing the Hermitian
//! matrix `i·J·H′` over the complex numbers. The real side therefore comes
//! out with rounding-level imaginary parts, which are measured and reported.

use num_complex::Complex;
use rand::Rng;
use rayon::prelude::*;

use crate::check::Check;
use crate::encoding::{
    embed_operator, encode_operator_in, encode_state_in, EncodedState, Layout, PureState,
};
use crate::error::{Error, Result};
use crate::linalg::{
    commutator_norm, eigh, is_hermitian, matexp_series, random, Eigh, Matrix, Vector,
};
use crate::multipartite::{lift_local_operator, local_xz, PartitionedSystem};
use crate::scalar::Real;
use crate::tolerance::Tolerances;

pub const DEFAULT_STEPS: usize = 64;
const GROUP_LAW_PAIRS: usize = 3;
const GROUP_LAW_SEED: u64 = 0x6c61_7773;

/// Hermitian generator in units with `ħ = 1`; times are dimensionless.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian<T: Real> {
    matrix: Matrix<Complex<T>>,
    factor_dims: Vec<usize>,
}

impl<T: Real> Hamiltonian<T> {
    pub fn new(matrix: Matrix<Complex<T>>, factor_dims: Vec<usize>) -> Result<Self> {
        let n = matrix.require_square("Hamiltonian")?;
        let product: usize = factor_dims.iter().product();
        if product != n {
            return Err(Error::DimMismatch {
                expected: n,
                got: product,
            });
        }
        if !is_hermitian(&matrix, Tolerances::<T>::get().construct) {
            return Err(Error::domain("Hamiltonian is not Hermitian"));
        }
        Ok(Self {
            matrix,
            factor_dims,
        })
    }

    pub fn single(matrix: Matrix<Complex<T>>) -> Result<Self> {
        let n = matrix.rows();
        Self::new(matrix, vec![n])
    }

    pub fn matrix(&self) -> &Matrix<Complex<T>> {
        &self.matrix
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}

/// `Paper` evolves by `exp(+iht)`, `Physics` by `exp(−iht)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sign {
    #[default]
    Paper,
    Physics,
}

impl Sign {
    pub fn factor<T: Real>(self) -> T {
        match self {
            Sign::Paper => T::one(),
            Sign::Physics => -T::one(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionResult<T: Real> {
    pub times: Vec<T>,
    pub complex_states: Vec<PureState<T>>,
    pub encoded_states: Vec<EncodedState<T>>,
    /// Largest `|Im|` over the encoded amplitudes before they were stored
    /// as real numbers.
    pub max_imag: T,
    /// Largest `|Im|` over the entries of every `U′(t)`.
    pub max_imag_operator: T,
    /// Largest `‖U′ᵀU′ − I‖_max`.
    pub max_orthogonality_error: T,
    /// Largest `‖U′(t)·encode(ψ) − encode(U(t)·ψ)‖₂`.
    pub max_deviation: T,
    /// `⟨ψ(t)|h|ψ(t)⟩` per time point.
    pub energy_complex: Vec<T>,
    /// `⟨ψ′(t)|H′|ψ′(t)⟩` per time point.
    pub energy_encoded: Vec<T>,
    pub checks: Vec<Check>,
}

impl<T: Real> EvolutionResult<T> {
    pub fn passed(&self) -> bool {
        crate::check::all_passed(&self.checks)
    }

    /// Largest change of the energy from its initial value, over both sides.
    pub fn energy_drift(&self) -> T {
        let drift = |e: &[T]| e.iter().map(|&x| (x - e[0]).abs()).fold(T::zero(), T::max);
        drift(&self.energy_complex).max(drift(&self.energy_encoded))
    }
}

fn check_layout<T: Real>(h: &Hamiltonian<T>, layout: &Layout) -> Result<()> {
    if let Layout::Logical { k, .. } = layout {
        if *k != h.factor_dims.len() {
            return Err(Error::domain(format!(
                "logical ancilla has {k} qubits but the Hamiltonian has {} parties",
                h.factor_dims.len()
            )));
        }
    }
    Ok(())
}

/// `J = I ⊗ (layout's stand-in for i)`.
fn j_operator<T: Real>(n: usize, layout: &Layout) -> Result<Matrix<T>> {
    Matrix::identity(n).kron(&layout.imag_unit()?)
}

/// The real antisymmetric generator `J·H′`.
pub fn generator<T: Real>(h: &Hamiltonian<T>, layout: &Layout) -> Result<Matrix<T>> {
    check_layout(h, layout)?;
    let imag = layout.imag_unit::<T>()?;
    let h_enc = embed_operator(&h.matrix, &imag)?;
    j_operator(h.dim(), layout)?.matmul(&h_enc)
}

/// `Σⱼ Jⱼ·H′ⱼ` for `h = Σⱼ hⱼ` with `hⱼ` local to party `j`, where both
/// `Jⱼ` and `H′ⱼ` use only party `j`'s own ancilla qubit. It agrees with
/// [`generator`] of the summed Hamiltonian on the ancilla codespace.
pub fn local_generator<T: Real>(
    terms: &[(usize, Matrix<Complex<T>>)],
    system: &PartitionedSystem,
) -> Result<Matrix<T>> {
    let n = system.total_dim();
    let k = system.parties();
    let mut total = Matrix::zeros(system.encoded_dim(), system.encoded_dim());
    for (party, m) in terms {
        if !is_hermitian(m, Tolerances::<T>::get().construct) {
            return Err(Error::domain(format!(
                "term on party {party} is not Hermitian"
            )));
        }
        let lifted = lift_local_operator(m, system, *party)?;
        let j = Matrix::identity(n).kron(&local_xz(k, *party)?)?;
        total = &total + &j.matmul(&lifted.matrix)?;
    }
    Ok(total)
}

/// `‖J·H′ − H′·J‖_max`.
pub fn commutation_residual<T: Real>(h: &Hamiltonian<T>, layout: &Layout) -> Result<T> {
    check_layout(h, layout)?;
    let h_enc = encode_operator_in(&h.matrix, layout)?;
    let j = j_operator::<T>(h.dim(), layout)?;
    Ok(commutator_norm(&j, h_enc.matrix()))
}

/// Whether `J` commutes with `H′` within the assertion tolerance.
pub fn commutation_check<T: Real>(h: &Hamiltonian<T>, layout: &Layout) -> Result<bool> {
    Ok(commutation_residual(h, layout)? <= Tolerances::<T>::get().assert)
}

/// Both propagators for one Hamiltonian, with the real side diagonalized
/// once so that many time points are cheap.
struct Propagators<T: Real> {
    h: Matrix<Complex<T>>,
    /// Eigendecomposition of the Hermitian `i·J·H′`.
    real_side: Eigh<Complex<T>>,
    sign: T,
}

impl<T: Real> Propagators<T> {
    fn new(h: &Hamiltonian<T>, layout: &Layout, sign: Sign) -> Result<Self> {
        let g = generator(h, layout)?;
        let i = Complex::new(T::zero(), T::one());
        let real_side = eigh(&g.to_complex().mul_scalar(i))?;
        Ok(Self {
            h: h.matrix.clone(),
            real_side,
            sign: sign.factor(),
        })
    }

    /// `exp(sign·i·h·t)` by scaling and squaring.
    fn complex_at(&self, t: T) -> Result<Matrix<Complex<T>>> {
        matexp_series(&self.h.mul_scalar(Complex::new(T::zero(), self.sign * t)))
    }

    /// `exp(sign·J·H′·t) = V·exp(−i·sign·Λ·t)·V†`, still carrying the
    /// rounding-level imaginary parts.
    fn real_at(&self, t: T) -> Matrix<Complex<T>> {
        if t == T::zero() {
            return Matrix::identity(self.real_side.vectors.rows());
        }
        let s = self.sign;
        self.real_side.apply_fn(|l| {
            let a = -s * l * t;
            Complex::new(a.cos(), a.sin())
        })
    }
}

struct Point<T: Real> {
    complex_state: PureState<T>,
    encoded_state: EncodedState<T>,
    max_imag: T,
    max_imag_operator: T,
    orthogonality_error: T,
    deviation: T,
    energy_complex: T,
    energy_encoded: T,
}

fn evolve_point<T: Real>(
    props: &Propagators<T>,
    h_enc: &Matrix<T>,
    t: T,
    psi: &PureState<T>,
    psi_enc: &EncodedState<T>,
    layout: &Layout,
) -> Result<Point<T>> {
    let u = props.complex_at(t)?;
    let complex_state = psi.evolve(&u)?;
    let u_prime = props.real_at(t);
    let raw = u_prime.apply(&psi_enc.amplitudes().to_complex())?;
    let u_real = u_prime.real_part();
    let n = u_real.rows();
    let orthogonality_error = u_real
        .transpose()
        .matmul(&u_real)?
        .max_abs_diff(&Matrix::identity(n));

    let encoded_state =
        EncodedState::new(raw.real_part(), psi.factor_dims().to_vec(), layout.clone())?;
    let oracle = encode_state_in(&complex_state, layout)?;
    Ok(Point {
        energy_complex: complex_state.expectation(&props.h)?.re,
        energy_encoded: encoded_state.amplitudes().expectation(h_enc)?,
        deviation: encoded_state.amplitudes().distance(oracle.amplitudes()),
        max_imag: raw.max_imag(),
        max_imag_operator: u_prime.max_imag(),
        orthogonality_error,
        complex_state,
        encoded_state,
    })
}

fn evolve_grid<T: Real>(
    h: &Hamiltonian<T>,
    times: Vec<T>,
    psi: &PureState<T>,
    layout: &Layout,
    sign: Sign,
) -> Result<(EvolutionResult<T>, Propagators<T>)> {
    if psi.dim() != h.dim() {
        return Err(Error::DimMismatch {
            expected: h.dim(),
            got: psi.dim(),
        });
    }
    let props = Propagators::new(h, layout, sign)?;
    let h_enc = encode_operator_in(&h.matrix, layout)?.into_matrix();
    let psi_enc = encode_state_in(psi, layout)?;
    let points = times
        .par_iter()
        .map(|&t| evolve_point(&props, &h_enc, t, psi, &psi_enc, layout))
        .collect::<Result<Vec<_>>>()?;

    let max = |f: &dyn Fn(&Point<T>) -> T| points.iter().map(f).fold(T::zero(), T::max);
    let max_imag = max(&|p| p.max_imag);
    let max_imag_operator = max(&|p| p.max_imag_operator);
    let max_orthogonality_error = max(&|p| p.orthogonality_error);
    let max_deviation = max(&|p| p.deviation);

    let realness_tol = T::tol_at_least(1e-11, 1e3);
    let agreement_tol = T::tol_at_least(1e-10, 1e4);
    let mut result = EvolutionResult {
        times,
        max_imag,
        max_imag_operator,
        max_orthogonality_error,
        max_deviation,
        energy_complex: points.iter().map(|p| p.energy_complex).collect(),
        energy_encoded: points.iter().map(|p| p.energy_encoded).collect(),
        complex_states: Vec::with_capacity(points.len()),
        encoded_states: Vec::with_capacity(points.len()),
        checks: Vec::new(),
    };
    for p in points {
        result.complex_states.push(p.complex_state);
        result.encoded_states.push(p.encoded_state);
    }
    let drift = result.energy_drift();
    result.checks = vec![
        Check::at_most("U′ real", max_imag_operator.to_f64(), realness_tol.to_f64()),
        Check::at_most(
            "U′ orthogonal",
            max_orthogonality_error.to_f64(),
            realness_tol.to_f64(),
        ),
        Check::at_most(
            "encoded evolution matches complex evolution",
            max_deviation.to_f64(),
            agreement_tol.to_f64(),
        ),
        Check::at_most("energy conserved", drift.to_f64(), agreement_tol.to_f64()),
    ];
    Ok((result, props))
}

/// Evolves `psi` for time `t` on both sides and compares.
pub fn evolve<T: Real>(
    h: &Hamiltonian<T>,
    t: T,
    psi: &PureState<T>,
    layout: &Layout,
    sign: Sign,
) -> Result<EvolutionResult<T>> {
    Ok(evolve_grid(h, vec![t], psi, layout, sign)?.0)
}

/// Evolves on `steps` uniformly spaced times in `[0, t_max]`, and checks
/// `U′(t₁)·U′(t₂) = U′(t₁ + t₂)` for three pseudo-random pairs.
pub fn trajectory<T: Real>(
    h: &Hamiltonian<T>,
    psi: &PureState<T>,
    t_max: T,
    steps: usize,
    layout: &Layout,
    sign: Sign,
) -> Result<EvolutionResult<T>> {
    if steps < 2 {
        return Err(Error::OutOfRange {
            what: "trajectory steps (minimum 2)",
            index: steps,
            limit: 2,
        });
    }
    let last = T::lit((steps - 1) as f64);
    let times = (0..steps)
        .map(|i| t_max * T::lit(i as f64) / last)
        .collect();
    let (mut result, props) = evolve_grid(h, times, psi, layout, sign)?;

    let mut rng = random::rng(GROUP_LAW_SEED);
    let mut group_err = T::zero();
    for _ in 0..GROUP_LAW_PAIRS {
        let t1 = t_max * T::lit(rng.random::<f64>());
        let t2 = t_max * T::lit(rng.random::<f64>());
        let lhs = props
            .real_at(t1)
            .real_part()
            .matmul(&props.real_at(t2).real_part())?;
        let rhs = props.real_at(t1 + t2).real_part();
        group_err = group_err.max(lhs.max_abs_diff(&rhs));
    }
    result.checks.push(Check::at_most(
        "U′ group law",
        group_err.to_f64(),
        T::tol_at_least(1e-10, 1e4).to_f64(),
    ));
    Ok(result)
}

/// Probability of basis outcome `index` on the encoded side: the squared
/// weight of the ancilla block belonging to system state `index`.
pub fn encoded_basis_probability<T: Real>(state: &EncodedState<T>, index: usize) -> T {
    let a = state.layout().ancilla_dim();
    state.amplitudes().as_slice()[index * a..(index + 1) * a]
        .iter()
        .map(|&x| x * x)
        .sum()
}

/// `|⟨index|ψ⟩|²` on the complex side.
pub fn basis_probability<T: Real>(state: &PureState<T>, index: usize) -> T {
    state.amplitudes()[index].norm_sqr()
}

/// Helper for building `ψ` from a real vector of amplitudes.
pub fn real_state<T: Real>(amplitudes: &[f64], factor_dims: Vec<usize>) -> Result<PureState<T>> {
    let v = Vector::from_fn(amplitudes.len(), |i| {
        Complex::new(T::lit(amplitudes[i]), T::zero())
    });
    PureState::normalized(v, factor_dims)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::{encode_state, xz};
    use crate::linalg::{is_antisymmetric, random_hermitian, random_state};
    use crate::multipartite::{restrict_to_codespace, PartitionedSystem};
    use crate::scalar::c;
    use std::f64::consts::FRAC_PI_2;

    type C = Complex<f64>;

    fn pauli_z() -> Matrix<C> {
        Matrix::diag(&[c(1., 0.), c(-1., 0.)])
    }

    fn pauli_x() -> Matrix<C> {
        Matrix::from_rows(&[[c(0., 0.), c(1., 0.)], [c(1., 0.), c(0., 0.)]])
    }

    #[test]
    fn zero_hamiltonian_gives_zero_generator() {
        let h = Hamiltonian::single(Matrix::<C>::zeros(3, 3)).unwrap();
        assert_eq!(
            generator(&h, &Layout::SingleAncilla).unwrap(),
            Matrix::zeros(6, 6)
        );
    }

    #[test]
    fn scalar_one_gives_xz() {
        let h = Hamiltonian::single(Matrix::<C>::identity(1)).unwrap();
        assert_eq!(generator(&h, &Layout::SingleAncilla).unwrap(), xz());
    }

    #[test]
    fn generator_is_antisymmetric() {
        for seed in 0..5 {
            let h = Hamiltonian::single(random_hermitian::<f64>(4, seed)).unwrap();
            let g = generator(&h, &Layout::SingleAncilla).unwrap();
            assert!(is_antisymmetric(&g, 1e-14));
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = Matrix::from_rows(&[[c::<f64>(0., 0.), c(1., 0.)], [c(0., 0.), c(0., 0.)]]);
        assert!(matches!(Hamiltonian::single(m), Err(Error::Domain(_))));
    }

    #[test]
    fn time_zero_is_identity() {
        let h = Hamiltonian::single(random_hermitian::<f64>(3, 1)).unwrap();
        let psi = PureState::single(random_state::<f64>(3, 2)).unwrap();
        let r = evolve(&h, 0.0, &psi, &Layout::SingleAncilla, Sign::Paper).unwrap();
        assert!(
            r.complex_states[0]
                .amplitudes()
                .max_abs_diff(psi.amplitudes())
                < 1e-15
        );
        assert!(
            r.encoded_states[0]
                .amplitudes()
                .max_abs_diff(encode_state(&psi).amplitudes())
                < 1e-14
        );
        assert!(r.passed());
    }

    #[test]
    fn z_rotation_closed_form() {
        let h = Hamiltonian::single(pauli_z()).unwrap();
        let psi = real_state::<f64>(&[1.0, 1.0], vec![2]).unwrap();
        let r = evolve(&h, FRAC_PI_2, &psi, &Layout::SingleAncilla, Sign::Paper).unwrap();
        let s = 0.5f64.sqrt();
        let expected = Vector::from_vec(vec![c(0., s), c(0., -s)]).unwrap();
        assert!(r.complex_states[0].amplitudes().max_abs_diff(&expected) < 1e-15);
        let enc = r.encoded_states[0].amplitudes();
        assert!(enc.max_abs_diff(&Vector::from_vec(vec![0., s, 0., -s]).unwrap()) < 1e-14);
        assert!(r.passed(), "{:?}", r.checks);
    }

    #[test]
    fn physics_sign_reverses_rotation() {
        let h = Hamiltonian::single(pauli_z()).unwrap();
        let psi = real_state::<f64>(&[1.0, 1.0], vec![2]).unwrap();
        let r = evolve(&h, FRAC_PI_2, &psi, &Layout::SingleAncilla, Sign::Physics).unwrap();
        let s = 0.5f64.sqrt();
        let expected = Vector::from_vec(vec![c(0., -s), c(0., s)]).unwrap();
        assert!(r.complex_states[0].amplitudes().max_abs_diff(&expected) < 1e-15);
        assert!(r.passed());
    }

    #[test]
    fn random_agreement() {
        let mut worst = 0.0f64;
        for seed in 0..100 {
            let h = Hamiltonian::single(random_hermitian::<f64>(4, seed)).unwrap();
            let psi = PureState::single(random_state::<f64>(4, seed + 1000)).unwrap();
            let t = (seed as f64 * 0.37) % 10.0 - 5.0;
            let r = evolve(&h, t, &psi, &Layout::SingleAncilla, Sign::Paper).unwrap();
            worst = worst.max(r.max_deviation);
        }
        assert!(worst < 1e-10, "{worst}");
    }

    #[test]
    fn trivial_trajectory() {
        let h = Hamiltonian::single(random_hermitian::<f64>(2, 3)).unwrap();
        let psi = PureState::basis(vec![2], 0).unwrap();
        let r = trajectory(&h, &psi, 0.0, 2, &Layout::SingleAncilla, Sign::Paper).unwrap();
        assert_eq!(r.times, vec![0.0, 0.0]);
        assert_eq!(r.max_deviation, 0.0);
        assert!(trajectory(&h, &psi, 1.0, 1, &Layout::SingleAncilla, Sign::Paper).is_err());
    }

    #[test]
    fn rabi_oscillation() {
        let h = Hamiltonian::single(pauli_x()).unwrap();
        let psi = PureState::basis(vec![2], 0).unwrap();
        let r = trajectory(
            &h,
            &psi,
            2.0 * std::f64::consts::PI,
            64,
            &Layout::SingleAncilla,
            Sign::Paper,
        )
        .unwrap();
        assert!(r.passed(), "{:?}", r.checks);
        for (t, (cs, es)) in r
            .times
            .iter()
            .zip(r.complex_states.iter().zip(&r.encoded_states))
        {
            let oracle = t.cos().powi(2);
            assert!((basis_probability(cs, 0) - oracle).abs() < 1e-10);
            assert!((encoded_basis_probability(es, 0) - oracle).abs() < 1e-10);
        }
    }

    #[test]
    fn two_party_zz_logical_layout() {
        let zz = pauli_z().kron(&pauli_z()).unwrap();
        let h = Hamiltonian::new(zz, vec![2, 2]).unwrap();
        let psi = PureState::new(random_state::<f64>(4, 9), vec![2, 2]).unwrap();
        let r = trajectory(&h, &psi, 3.0, 16, &Layout::logical(2), Sign::Paper).unwrap();
        assert!(r.passed(), "{:?}", r.checks);
        assert_eq!(r.encoded_states[0].dim(), 16);
    }

    #[test]
    fn logical_layout_needs_matching_party_count() {
        let h = Hamiltonian::single(pauli_z()).unwrap();
        assert!(generator(&h, &Layout::logical(2)).is_err());
    }

    #[test]
    fn commutation() {
        let id = Hamiltonian::single(Matrix::<C>::identity(2)).unwrap();
        assert!(commutation_check(&id, &Layout::SingleAncilla).unwrap());
        let h = Hamiltonian::single(random_hermitian::<f64>(8, 4)).unwrap();
        assert!(commutation_residual(&h, &Layout::SingleAncilla).unwrap() < 1e-13);
        let h2 = Hamiltonian::new(random_hermitian::<f64>(4, 5), vec![2, 2]).unwrap();
        assert!(commutation_check(&h2, &Layout::logical(2)).unwrap());
    }

    #[test]
    fn non_commuting_j_is_detected() {
        let h = random_hermitian::<f64>(4, 6);
        let h_enc = crate::encoding::encode_operator(&h).unwrap();
        let x = Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]);
        let wrong_j = Matrix::identity(4).kron(&x).unwrap();
        assert!(commutator_norm(&wrong_j, h_enc.matrix()) > 0.1);
    }

    #[test]
    fn local_terms_match_global_generator_on_codespace() {
        let system = PartitionedSystem::qubits(2).unwrap();
        let ha = random_hermitian::<f64>(2, 10);
        let hb = random_hermitian::<f64>(2, 11);
        let global = &system.embed_local(&ha, 0).unwrap() + &system.embed_local(&hb, 1).unwrap();
        let h = Hamiltonian::new(global, vec![2, 2]).unwrap();
        let g_global = generator(&h, &Layout::logical(2)).unwrap();
        let g_local = local_generator(&[(0, ha), (1, hb)], &system).unwrap();
        let a = restrict_to_codespace(&g_global, 4, 2).unwrap();
        let b = restrict_to_codespace(&g_local, 4, 2).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-12);
        // Off the codespace the two differ.
        assert!(g_global.max_abs_diff(&g_local) > 1e-3);
    }
}
