//! Parameter-dependent symmetric pencils `(A₁ + αA₂) x = λ (B₁ + βB₂) x`.
//!
//! Dense storage throughout. The generalized solver handles a singular `B`
//! through the reciprocal pencil, reporting the lost eigenvalues as infinite.

mod branches;
mod classify;
mod gep;
mod matrix;
mod sweep;
mod track;

use thiserror::Error;

pub use branches::{evaluate_prediction, predict_diagonal_spectrum, Branch, BranchKind, BranchPrediction, ParametricPencil};
pub use classify::{classify_branch, BranchFit, CurveShape, DEFAULT_CLASSIFY_TOL};
pub use gep::{check_assumption, solve_gep, solve_gep_values, AssumptionReport, Spectrum};
pub use matrix::SymmetricMatrix;
pub use sweep::{sweep, AxisSweep, SweepAxis, SweepModes, SweepResult};
pub use track::{track_modes, TrackedCurve, DEFAULT_MIN_OVERLAP};

pub(crate) use sweep::validate_grid;

/// Relative tolerance for definiteness and kernel detection.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum PencilError {
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("neither matrix is definite; common kernel has dimension {common_kernel_dim}")]
    BothSingular { common_kernel_dim: usize },
    #[error("matrix {name} is not positive semidefinite (smallest eigenvalue {min_eigenvalue:e})")]
    NotSemidefinite { name: &'static str, min_eigenvalue: f64 },
    #[error("matrices must be diagonal")]
    NotDiagonal,
    #[error("index {index} has all four diagonal entries zero")]
    ZeroRow { index: usize },
    #[error("index {index} has both parts of one splitting nonzero")]
    MixedSplit { index: usize },
    #[error("need at least 4 points to classify a curve, got {found}")]
    TooFewPoints { found: usize },
    #[error("curve point {index} is not strictly positive")]
    NonPositiveValue { index: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("at alpha={alpha}, beta={beta}: {source}")]
    AtGridPoint { alpha: f64, beta: f64, source: Box<PencilError> },
    #[error("eigensolver failure: {0}")]
    Numerical(String),
}
