//! Simulating complex quantum systems with real amplitudes and real
//! operators.
//!
//! Everything numeric is generic over [`scalar::Real`] (`f32` or `f64`);
//! the aliases below fix `f64`.

pub mod applications;
pub mod check;
pub mod dynamics;
pub mod encoding;
pub mod error;
pub mod linalg;
pub mod multipartite;
pub mod scalar;
pub mod tolerance;

pub use check::Check;
pub use error::{Error, Result};
pub use linalg::{Matrix, Vector};
pub use scalar::{Real, Scalar};
pub use tolerance::Tolerances;

pub type Complex64 = num_complex::Complex<f64>;
pub type Complex32 = num_complex::Complex<f32>;

pub type CMatrix = Matrix<Complex64>;
pub type RMatrix = Matrix<f64>;
pub type CVector = Vector<Complex64>;
pub type RVector = Vector<f64>;

pub type CMatrix32 = Matrix<Complex32>;
pub type RMatrix32 = Matrix<f32>;
pub type CVector32 = Vector<Complex32>;
pub type RVector32 = Vector<f32>;

pub type PureState = encoding::PureState<f64>;
pub type EncodedState = encoding::EncodedState<f64>;
pub type EncodedOperator = encoding::EncodedOperator<f64>;
pub type DensityOperator = encoding::DensityOperator<f64>;
pub type Povm = encoding::Povm<f64>;
pub type Hamiltonian = dynamics::Hamiltonian<f64>;
pub type EvolutionResult = dynamics::EvolutionResult<f64>;
pub type BellScenario = applications::BellScenario<f64>;
pub type BellResult = applications::BellResult<f64>;
pub type SelfTestTranscript = applications::SelfTestTranscript<f64>;
