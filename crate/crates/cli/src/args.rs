use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "rieszspec",
    version,
    about = "Asymptotic spectra and Riesz-basis diagnostics for periodic operator systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Predict eigenvalue pairs over a window and decide the basis property.
    Analyze(AnalyzeArgs),
    /// Solve a truncated Galerkin problem and match its spectrum to the predictions.
    Oracle(OracleArgs),
    /// Measure prediction errors against the oracle and fit their decay.
    Compare(OracleArgs),
    /// Print the problem document of a preset.
    Export(ExportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Analytic,
    Empirical,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Problem document path, or `preset:<name>`.
    pub input: String,
    /// Window of pair indices `k_min k_max`.
    #[arg(long = "k-window", num_args = 2, value_names = ["K_MIN", "K_MAX"])]
    pub k_window: Option<Vec<i64>>,
    #[arg(long, default_value_t = 1.0)]
    pub c3: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c4: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub common: Common,
    /// Ratios must stay inside `[1/R, R]`.
    #[arg(long = "ratio-bound", default_value_t = 100.0)]
    pub ratio_bound: f64,
    #[arg(long = "bari-a", default_value_t = 0.9)]
    pub bari_a: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Analytic)]
    pub mode: ModeArg,
    /// Also write the projected coefficients `b_{s,q,p}` as CSV.
    #[arg(long = "projection-csv")]
    pub projection_csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct OracleArgs {
    #[command(flatten)]
    pub common: Common,
    /// Galerkin truncation: frequencies `|p| <= K`.
    #[arg(long = "K", default_value_t = 64)]
    pub truncation: i64,
    #[arg(long = "eig-tol", default_value_t = 1e-10)]
    pub eig_tol: f64,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    pub preset: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
