use num_complex::Complex;

use super::{embed_operator, encode_state, xz, EncodedState, PureState};
use crate::error::{Error, Result};
use crate::linalg::{is_hermitian, min_eigenvalue, Matrix};
use crate::scalar::Real;
use crate::tolerance::Tolerances;

/// Hermitian, unit-trace, positive-semidefinite complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator<T: Real> {
    matrix: Matrix<Complex<T>>,
}

impl<T: Real> DensityOperator<T> {
    pub fn new(matrix: Matrix<Complex<T>>) -> Result<Self> {
        matrix.require_square("density operator")?;
        let tol = Tolerances::<T>::get();
        if !is_hermitian(&matrix, tol.construct) {
            return Err(Error::domain("density operator is not Hermitian"));
        }
        let tr = matrix.trace();
        if (tr.re - T::one()).abs() > tol.construct || tr.im.abs() > tol.construct {
            return Err(Error::domain(format!("density operator has trace {tr}")));
        }
        let floor = min_eigenvalue(&matrix);
        if floor.is_nan() || floor < -tol.psd {
            return Err(Error::domain(format!(
                "density operator has eigenvalue {floor} < 0"
            )));
        }
        Ok(Self { matrix })
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn pure(psi: &PureState<T>) -> Self {
        Self {
            matrix: psi.amplitudes().outer(psi.amplitudes()),
        }
    }

    pub fn matrix(&self) -> &Matrix<Complex<T>> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }
}

/// `encode_operator(ρ) / 2`: a real density operator of twice the rank.
pub fn encode_density<T: Real>(rho: &DensityOperator<T>) -> Result<Matrix<T>> {
    Ok(embed_operator(rho.matrix(), &xz())?.scale(T::lit(0.5)))
}

/// The two orthogonal encodings of one physical state that differ by a
/// global phase of `i`. Every encoding of `e^{iα}ψ` lies in their span.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeOrbit<T: Real> {
    pub phi1: EncodedState<T>,
    pub phi2: EncodedState<T>,
}

impl<T: Real> GaugeOrbit<T> {
    /// `cos α · φ₁ + sin α · φ₂`, the encoding of `e^{iα}ψ`.
    pub fn at_phase(&self, alpha: T) -> EncodedState<T> {
        let a = self.phi1.amplitudes().scale(alpha.cos());
        let b = self.phi2.amplitudes().scale(alpha.sin());
        EncodedState::new(
            &a + &b,
            self.phi1.source_dims().to_vec(),
            self.phi1.layout().clone(),
        )
        .expect("rotation within an orthonormal pair preserves the norm")
    }

    /// `(|φ₁⟩⟨φ₁| + |φ₂⟩⟨φ₂|) / 2`.
    pub fn mixture(&self) -> Matrix<T> {
        let p1 = self.phi1.amplitudes().outer(self.phi1.amplitudes());
        let p2 = self.phi2.amplitudes().outer(self.phi2.amplitudes());
        (&p1 + &p2).scale(T::lit(0.5))
    }
}

pub fn gauge_orbit<T: Real>(psi: &PureState<T>) -> GaugeOrbit<T> {
    // iψ built entry-wise; phased(π/2) would leave cos(π/2) residue.
    let i_amplitudes = psi.amplitudes().map(|z| Complex::new(-z.im, z.re));
    let i_psi = PureState::new(i_amplitudes, psi.factor_dims().to_vec())
        .expect("multiplying by i preserves the norm");
    GaugeOrbit {
        phi1: encode_state(psi),
        phi2: encode_state(&i_psi),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::encoding::encode_operator;
    use crate::linalg::{eigh, is_psd, random_density, random_state, Vector};
    use crate::scalar::c;

    type C = Complex<f64>;

    #[test]
    fn basis_projector() {
        let rho = DensityOperator::pure(&PureState::<f64>::basis(vec![2], 0).unwrap());
        let enc = encode_density(&rho).unwrap();
        assert_eq!(enc, Matrix::diag(&[0.5, 0.5, 0.0, 0.0]));
    }

    #[test]
    fn trace_is_one_for_mixed_states() {
        for seed in 0..10 {
            let rho = DensityOperator::new(random_density::<f64>(4, seed)).unwrap();
            let enc = encode_density(&rho).unwrap();
            assert!((enc.trace() - 1.0).abs() < 1e-13);
            assert!(is_psd(&enc, 1e-10));
            // Tr encode(m) = 2 Re Tr m
            let full = encode_operator(rho.matrix()).unwrap();
            assert!((full.matrix().trace() - 2.0 * rho.matrix().trace().re).abs() < 1e-13);
        }
    }

    #[test]
    fn pure_state_spectrum_is_two_halves() {
        let psi = PureState::single(random_state::<f64>(4, 11)).unwrap();
        let enc = encode_density(&DensityOperator::pure(&psi)).unwrap();
        let e = eigh(&enc).unwrap();
        let top: Vec<f64> = e.values.iter().rev().take(2).copied().collect();
        assert!(top.iter().all(|l| (l - 0.5).abs() < 1e-13));
        assert!(e.values.iter().rev().skip(2).all(|l| l.abs() < 1e-13));
    }

    #[test]
    fn gauge_orbit_of_zero() {
        let g = gauge_orbit(&PureState::<f64>::basis(vec![2], 0).unwrap());
        assert_eq!(g.phi1.amplitudes().as_slice(), &[1.0, 0.0, 0.0, 0.0]);
        assert_eq!(g.phi2.amplitudes().as_slice(), &[0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn gauge_orbit_is_orthonormal_and_spans_phases() {
        for seed in 0..10 {
            let psi = PureState::single(random_state::<f64>(3, seed)).unwrap();
            let g = gauge_orbit(&psi);
            assert!(g.phi1.inner(&g.phi2).abs() < 1e-15);
            let direct = encode_state(&psi.phased(0.3));
            assert!(
                g.at_phase(0.3)
                    .amplitudes()
                    .max_abs_diff(direct.amplitudes())
                    < 1e-15
            );
            let rho = encode_density(&DensityOperator::pure(&psi)).unwrap();
            assert!(g.mixture().max_abs_diff(&rho) < 1e-15);
        }
    }

    #[test]
    fn invalid_density_operators() {
        let not_unit_trace = Matrix::<C>::identity(2);
        assert!(DensityOperator::new(not_unit_trace).is_err());
        let negative = Matrix::diag(&[c::<f64>(1.5, 0.0), c(-0.5, 0.0)]);
        assert!(DensityOperator::new(negative).is_err());
        let v = Vector::from_vec(vec![c::<f64>(0.0, 1.0), c(1.0, 0.0)]).unwrap();
        let non_herm = v.outer(&Vector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]).unwrap());
        assert!(DensityOperator::new(non_herm).is_err());
    }
}
