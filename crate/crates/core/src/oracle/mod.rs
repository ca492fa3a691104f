//! Independent numerical ground truth: truncated Fourier-Galerkin matrices of
//! the operator (or of the two-mode comparison operator), a dense complex
//! eigensolver, and the matching of computed eigenpairs to predictions.

pub mod eigen;
pub mod galerkin;
pub mod matching;
pub mod pipeline;

use thiserror::Error;

use crate::unperturbed::UnperturbedError;

pub use eigen::{eig_dense, EigenDecomposition, EigenError, EigenSolver, SchurSolver};
pub use galerkin::{assemble, assemble_model, GalerkinMatrix, DEFAULT_SIZE_CAP};
pub use matching::{
    extract_coordinates, match_spectrum, numerical_overlap, residual_coefficient_identity,
    Assignment, Coordinates, DiskCount, IdentityChecker, MatchReport, MatchStatus,
    MatchedEigenpair,
};
pub use pipeline::{
    compare, run, run_with, CenterRow, CoefficientIdentitySummary, ComparisonRow,
    ConvergenceReport, OracleConfig, OracleRun, PairOverlap,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("truncation K={truncation} is below the required {required}")]
    TruncationTooSmall { truncation: i64, required: i64 },
    #[error(
        "matrix size {size} exceeds the dense size cap {cap}; raise the cap to at least {size}"
    )]
    SizeCapExceeded { size: usize, cap: usize },
    #[error("invalid oracle configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Eigen(#[from] EigenError),
    #[error(transparent)]
    Unperturbed(#[from] UnperturbedError),
}
