//! Input file formats.
//!
//! Complex numbers are `[re, im]` pairs. Vectors list amplitudes in
//! row-major basis order with the last factor fastest; matrices list
//! entries row-major.

use std::path::Path;

use serde::{Deserialize, Serialize};

use realsim::applications::{BellScenario, Term};
use realsim::encoding::PureState;
use realsim::{CMatrix, CVector, Complex64};

use crate::InputError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorFile {
    pub dims: Vec<usize>,
    pub amplitudes: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PovmFile {
    pub elements: Vec<MatrixFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermFile {
    pub settings: Vec<usize>,
    pub coefficient: f64,
}

/// A Bell scenario: `observables[party][setting]` and a coefficient table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    pub observables: Vec<Vec<MatrixFile>>,
    pub terms: Vec<TermFile>,
    pub classical_bound: f64,
    #[serde(default)]
    pub quantum_target: Option<f64>,
}

/// Raw bytes of an input file, kept for the report digest.
pub struct Input {
    pub bytes: Vec<u8>,
    pub label: String,
}

pub fn read_input(path: &Path) -> Result<Input, InputError> {
    let bytes = std::fs::read(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    Ok(Input {
        bytes,
        label: path.display().to_string(),
    })
}

pub fn parse<T: for<'de> Deserialize<'de>>(input: &Input) -> Result<T, InputError> {
    serde_json::from_slice(&input.bytes)
        .map_err(|e| InputError(format!("{}: invalid JSON: {e}", input.label)))
}

fn complex(pair: &[f64; 2]) -> Complex64 {
    Complex64::new(pair[0], pair[1])
}

pub fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

impl VectorFile {
    pub fn to_state(&self) -> Result<PureState<f64>, InputError> {
        let v = CVector::from_vec(self.amplitudes.iter().map(complex).collect())?;
        Ok(PureState::new(v, self.dims.clone())?)
    }

    pub fn from_state(state: &PureState<f64>) -> Self {
        Self {
            dims: state.factor_dims().to_vec(),
            amplitudes: state.amplitudes().iter().map(|&z| pair(z)).collect(),
        }
    }
}

impl MatrixFile {
    pub fn to_matrix(&self) -> Result<CMatrix, InputError> {
        Ok(CMatrix::from_vec(
            self.rows,
            self.cols,
            self.entries.iter().map(complex).collect(),
        )?)
    }

    pub fn from_matrix(m: &CMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.iter().map(|&z| pair(z)).collect(),
        }
    }
}

impl ScenarioFile {
    pub fn to_scenario(&self) -> Result<BellScenario<f64>, InputError> {
        let observables = self
            .observables
            .iter()
            .map(|settings| settings.iter().map(MatrixFile::to_matrix).collect())
            .collect::<Result<Vec<Vec<_>>, _>>()?;
        let terms = self
            .terms
            .iter()
            .map(|t| Term {
                settings: t.settings.clone(),
                coefficient: t.coefficient,
            })
            .collect();
        Ok(BellScenario::new(
            self.name.clone(),
            observables,
            terms,
            self.classical_bound,
            self.quantum_target.unwrap_or(f64::NAN),
        )?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn input(text: &str) -> Input {
        Input {
            bytes: text.as_bytes().to_vec(),
            label: "test".into(),
        }
    }

    #[test]
    fn parses_vector() {
        let v: VectorFile =
            parse(&input(r#"{"dims": [2], "amplitudes": [[1, 0], [0, 0]]}"#)).unwrap();
        assert_eq!(v.to_state().unwrap().dim(), 2);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let r: Result<VectorFile, _> =
            parse(&input(r#"{"dims": [1], "amplitudes": [[1, 0]], "x": 1}"#));
        assert!(r.unwrap_err().0.contains("unknown field"));
    }

    #[test]
    fn truncated_json_reports_position() {
        let r: Result<VectorFile, _> = parse(&input("{\"dims\": [2],\n \"amplitudes\": [[1, 0"));
        let msg = r.unwrap_err().0;
        assert!(msg.contains("line 2"), "{msg}");
    }

    #[test]
    fn matrix_shape_is_checked() {
        let m = MatrixFile {
            rows: 2,
            cols: 2,
            entries: vec![[1.0, 0.0]; 3],
        };
        assert!(m.to_matrix().is_err());
    }
}
