//! Dense real/complex linear algebra: Kronecker products, the matrix
//! exponential, Hermitian eigendecomposition, structural predicates and
//! seeded random sampling.

mod eigen;
mod expm;
mod matrix;
pub mod predicates;
pub mod random;
mod vector;

pub use eigen::{eigh, Eigh};
pub use expm::{matexp, matexp_series, unitary_from_hermitian};
pub use matrix::{Matrix, DEFAULT_MAX_DIM};
pub use predicates::{
    commutator_norm, is_antisymmetric, is_hermitian, is_pm_one_observable, is_psd, is_unitary,
    min_eigenvalue,
};
pub use random::{
    random_density, random_hermitian, random_matrix, random_povm, random_state, random_unitary,
};
pub use vector::Vector;
