//! Spectral analysis of even-order differential operators with `m x m`
//! matrix coefficients on `[0, 1]` under periodic or antiperiodic boundary
//! conditions.
//!
//! The crate is organised around the operator
//!
//! ```text
//! l(y) = y^(n) + P_2(x) y^(n-2) + P_3(x) y^(n-3) + ... + P_n(x) y
//! ```
//!
//! whose coefficients are given by their Fourier series. It provides
//!
//! * closed-form eigenvalue and eigenfunction asymptotics built from the mean
//!   matrix `C` and the projected Fourier coefficients of `P_2`
//!   ([`unperturbed`], [`projection`], [`asymptotics`]),
//! * decisions on the non-degeneracy condition and the Riesz-basis property
//!   of the root functions ([`diagnostics`]),
//! * an independent truncated Fourier-Galerkin eigenvalue oracle used to
//!   cross-check every prediction ([`oracle`]),
//! * a corpus of preset problems ([`scenarios`]).

pub mod asymptotics;
pub mod diagnostics;
pub mod linalg;
pub mod model;
pub mod oracle;
pub mod projection;
pub mod scenarios;
pub mod stats;
pub mod unperturbed;

mod ser;

pub use num_complex::Complex64;

/// Dense complex matrix used throughout the crate.
pub type CMatrix = nalgebra::DMatrix<Complex64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<Complex64>;

pub use asymptotics::{AsymptoticsError, DiskSet, PairPrediction, SweepEntry};
pub use diagnostics::{BasisVerdict, Dominance, DominanceVerdict, RieszVerdict};
pub use model::{BoundaryCondition, FourierMatrixSeries, ModelError, OperatorSpec, PowerTail};
pub use oracle::{
    EigenDecomposition, EigenError, EigenSolver, GalerkinMatrix, MatchReport, MatchedEigenpair,
    OracleError, SchurSolver,
};
pub use projection::ProjectionTable;
pub use scenarios::Scenario;
pub use unperturbed::{BiorthogonalSystem, UnperturbedError};
