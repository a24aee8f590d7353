//! Construction and analysis of Markovian (GKSL) quantum dynamical semigroups.
//!
//! The crate builds Lindblad-form generators from Kossakowski coefficient
//! matrices, exponentiates them into one-parameter semigroups, and probes the
//! resulting maps for positivity and complete positivity. It also contains the
//! machinery for factorized bipartite dynamics: tensor-sum generators, the
//! necessary condition on the sum of the two Kossakowski matrices together
//! with its constructive entanglement witness, closed-form checks for the
//! elementary qubit evolutions, and the perturbation interval inside which a
//! factorized semigroup can only stay positive if both factors are completely
//! positive.
//!
//! All linear algebra is dense, double precision and small (the target systems
//! are a few qubits). Everything is a pure function over immutable values and
//! safe to call concurrently.

pub mod cli;
pub mod cp_analysis;
pub mod documents;
pub mod dynamics;
pub mod generators;
pub mod numerics;
pub mod positivity;
pub mod presets;

pub use cp_analysis::{ChoiMatrix, CpVerdict, KrausSet, BreakdownWitness};
pub use dynamics::{CoherenceVector, DensityMatrix, EvolvedState};
pub use generators::{GeneratorSpec, KossakowskiMatrix, SuperoperatorMatrix, TracelessBasis};
pub use numerics::{ComplexMatrix, HermitianEigensystem, Tolerances};
pub use positivity::{PositivityReport, SchmidtState, SearchVerdict};

use thiserror::Error;

/// Crate-wide error type. Every numerical guard reports the measured residual,
/// not just the fact that it tripped.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |A - A\u{2020}| entry {residual:.3e} exceeds tolerance {tolerance:.1e}")]
    NotHermitian { residual: f64, tolerance: f64 },

    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("map is not Hermiticity-preserving: max residual {residual:.3e} on Hermitian probes")]
    NotHermiticityPreserving { residual: f64 },

    #[error("map is not completely positive: min Choi eigenvalue {min_eigenvalue:.6e}")]
    NotCompletelyPositive { min_eigenvalue: f64 },

    #[error("no witness exists: min eigenvalue of C1 + C2 is {min_eigenvalue:.6e}, not below {threshold:.1e}")]
    NoWitness { min_eigenvalue: f64, threshold: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("document error: {0}")]
    Document(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
