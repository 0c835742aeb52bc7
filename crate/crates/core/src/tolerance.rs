//! Tolerance schema.
//!
//! Three tiers: constructor invariants (1e-10), equality assertions
//! (1e-12) and positive-semidefiniteness checks (1e-8). For single
//! precision each tier is raised to a small multiple of machine epsilon.

use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T> {
    /// Norms, hermiticity and completeness of inputs at construction.
    pub construct: T,
    /// Agreement between two routes that should be identical.
    pub assert: T,
    /// Eigenvalue floor for positive-semidefiniteness.
    pub psd: T,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        Self {
            construct: T::tol_at_least(1e-10, 1e3),
            assert: T::tol_at_least(1e-12, 1e2),
            psd: T::tol_at_least(1e-8, 1e4),
        }
    }
}

impl<T: Real> Tolerances<T> {
    pub fn get() -> Self {
        Self::default()
    }
}
