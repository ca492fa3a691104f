//! End-to-end oracle run for one operator: predictions over a window, the
//! Galerkin eigensolve, matching, overlaps, coefficient-identity residuals,
//! and the prediction-versus-oracle comparison.

use serde::Serialize;

use super::eigen::{EigenSolver, SchurSolver};
use super::galerkin::{assemble, GalerkinMatrix, DEFAULT_SIZE_CAP};
use super::matching::{match_spectrum, numerical_overlap, IdentityChecker, MatchReport};
use super::OracleError;
use crate::asymptotics::{
    log_factor, suggest_c4, Branch, DiskConstants, DiskSet, PairPrediction, Predictor, SweepEntry,
};
use crate::diagnostics::predicted_overlap;
use crate::model::OperatorSpec;
use crate::projection::ProjectionTable;
use crate::ser::one_based;
use crate::stats::{loglog_fit, LinearFit};
use crate::unperturbed::{compute_c, eigensystem, BiorthogonalSystem, DEFAULT_GAP_TOL};
use crate::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleConfig {
    pub truncation: i64,
    pub k_min: i64,
    pub k_max: i64,
    pub constants: DiskConstants,
    pub eig_tol: f64,
    pub size_cap: usize,
    /// Defaults to the largest explicit coefficient frequency plus 4.
    pub edge_buffer: Option<i64>,
    pub gap_tol: f64,
}

impl OracleConfig {
    pub fn new(truncation: i64, k_min: i64, k_max: i64) -> Self {
        OracleConfig {
            truncation,
            k_min,
            k_max,
            constants: DiskConstants::default(),
            eig_tol: 1e-10,
            size_cap: DEFAULT_SIZE_CAP,
            edge_buffer: None,
            gap_tol: DEFAULT_GAP_TOL,
        }
    }

    pub fn edge_buffer_for(&self, spec: &OperatorSpec) -> i64 {
        self.edge_buffer
            .unwrap_or(spec.max_explicit_frequency() + 4)
    }

    /// Checks tolerances and the interior requirement `k_max <= K/2 - buffer`.
    pub fn validate(&self, spec: &OperatorSpec) -> Result<(), OracleError> {
        let bad = |msg: String| Err(OracleError::InvalidConfig(msg));
        let required = spec.max_explicit_frequency();
        if self.truncation < required || self.truncation < 0 {
            return Err(OracleError::TruncationTooSmall {
                truncation: self.truncation,
                required: required.max(0),
            });
        }
        if self.k_min < 1 || self.k_max < self.k_min {
            return bad(format!(
                "k window [{}, {}] must satisfy 1 <= k_min <= k_max",
                self.k_min, self.k_max
            ));
        }
        for (name, v) in [
            ("eig_tol", self.eig_tol),
            ("c3", self.constants.c3),
            ("c4", self.constants.c4),
            ("gap_tol", self.gap_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        let buffer = self.edge_buffer_for(spec);
        if buffer < 0 {
            return bad(format!("edge_buffer must be non-negative, got {buffer}"));
        }
        if self.k_max > self.truncation / 2 - buffer {
            return bad(format!(
                "k_max = {} exceeds K/2 - edge_buffer = {} (K = {}, edge_buffer = {})",
                self.k_max,
                self.truncation / 2 - buffer,
                self.truncation,
                buffer
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PairOverlap {
    pub k: i64,
    #[serde(serialize_with = "one_based")]
    pub j: usize,
    pub numerical: Complex64,
    pub numerical_abs: f64,
    pub predicted: Option<f64>,
    /// `| |numerical| - predicted |`
    pub error: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoefficientIdentitySummary {
    pub index: usize,
    pub k: i64,
    #[serde(serialize_with = "one_based")]
    pub j: usize,
    pub branch: Branch,
    /// Largest residual over interior frequencies and all components.
    pub max_residual: f64,
    /// `10 eig_tol ||M||`
    pub bound: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleRun {
    pub config: OracleConfig,
    pub edge_buffer: i64,
    pub system: BiorthogonalSystem,
    pub sweep: Vec<SweepEntry>,
    pub disks: Vec<DiskSet>,
    pub matrix_size: usize,
    pub matrix_norm: f64,
    pub max_eig_residual: f64,
    pub report: MatchReport,
    pub overlaps: Vec<PairOverlap>,
    pub coefficient_identity: Vec<CoefficientIdentitySummary>,
    /// Smallest `c4` for which every assigned eigenvalue lies in its refined disk.
    pub suggested_c4: Option<f64>,
    #[serde(skip)]
    pub table: ProjectionTable,
    #[serde(skip)]
    pub matrix: GalerkinMatrix,
    #[serde(skip)]
    pub order: usize,
}

impl OracleRun {
    pub fn prediction(&self, k: i64, j: usize) -> Option<&PairPrediction> {
        self.sweep
            .iter()
            .find(|e| e.k == k && e.j == j)
            .and_then(|e| e.prediction())
    }

    pub fn overlap(&self, k: i64, j: usize) -> Option<&PairOverlap> {
        self.overlaps.iter().find(|o| o.k == k && o.j == j)
    }
}

/// Runs the full oracle with the built-in dense solver.
pub fn run(spec: &OperatorSpec, config: &OracleConfig) -> Result<OracleRun, OracleError> {
    run_with(spec, config, &SchurSolver::with_tol(config.eig_tol))
}

pub fn run_with(
    spec: &OperatorSpec,
    config: &OracleConfig,
    solver: &dyn EigenSolver,
) -> Result<OracleRun, OracleError> {
    config.validate(spec)?;
    let edge_buffer = config.edge_buffer_for(spec);
    let system = eigensystem(&compute_c(spec), config.gap_tol)?;
    let p_max = (2 * config.truncation).max(spec.bc.resonant_frequency(config.k_max));
    let table = ProjectionTable::build(spec, &system, p_max);
    let predictor = Predictor::new(&table, &system, spec.order, spec.bc, config.constants);
    let sweep = predictor.predicted_spectrum(config.k_min, config.k_max);
    let disks: Vec<DiskSet> = (config.k_min..=config.k_max)
        .map(|k| {
            predictor
                .first_order_disks(k)
                .expect("window lies inside the projection table")
        })
        .collect();

    let matrix = assemble(spec, config.truncation, config.size_cap)?;
    let eig = solver.solve(&matrix.entries)?;
    let report = match_spectrum(&matrix, &eig, &sweep, &disks, &system, edge_buffer);

    let checker = IdentityChecker::new(spec, &matrix, &system);
    let bound = 10.0 * config.eig_tol * eig.matrix_norm;
    let interior = config.truncation - edge_buffer;
    let mut coefficient_identity = Vec::new();
    for e in report.assigned() {
        let Some(a) = e.assignment else { continue };
        let Some(branch) = a.branch else { continue };
        coefficient_identity.push(CoefficientIdentitySummary {
            index: e.index,
            k: a.k,
            j: a.j,
            branch,
            max_residual: checker.max_residual(e.lambda, &e.coeffs, interior),
            bound,
        });
    }

    let mut overlaps = Vec::new();
    for k in config.k_min..=config.k_max {
        for j in 0..system.dim() {
            let (Some(plus), Some(minus)) = (
                report.find(k, j, Branch::Plus),
                report.find(k, j, Branch::Minus),
            ) else {
                continue;
            };
            let numerical = numerical_overlap(&plus.coeffs, &minus.coeffs);
            let predicted = predicted_overlap(&table, spec.bc, k, j).ok();
            overlaps.push(PairOverlap {
                k,
                j,
                numerical,
                numerical_abs: numerical.norm(),
                predicted,
                error: predicted.map(|p| (numerical.norm() - p).abs()),
            });
        }
    }

    let suggested_c4 = {
        let matched: Vec<(&PairPrediction, Branch, Complex64)> = report
            .assigned()
            .filter_map(|e| {
                let a = e.assignment?;
                let branch = a.branch?;
                let p = sweep
                    .iter()
                    .find(|s| s.k == a.k && s.j == a.j)
                    .and_then(|s| s.prediction())?;
                Some((p, branch, e.lambda))
            })
            .collect();
        suggest_c4(spec.order, matched)
    };

    Ok(OracleRun {
        config: *config,
        edge_buffer,
        matrix_size: matrix.size(),
        matrix_norm: eig.matrix_norm,
        max_eig_residual: eig.max_residual(),
        system,
        sweep,
        disks,
        report,
        overlaps,
        coefficient_identity,
        suggested_c4,
        table,
        matrix,
        order: spec.order,
    })
}

/// Prediction error for one `(k, j, branch)`.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonRow {
    pub k: i64,
    #[serde(serialize_with = "one_based")]
    pub j: usize,
    pub branch: Branch,
    pub lambda: Complex64,
    pub h: Complex64,
    /// `|lambda - h|`
    pub eigenvalue_error: f64,
    /// `|lambda - h| / (k^{n-3} gamma ln k)`
    pub normalized_error: f64,
    pub refined_radius: f64,
    pub in_refined_disk: bool,
    pub u_abs: f64,
    pub v_abs: f64,
    pub ratio: Complex64,
    pub alpha: Complex64,
    /// `|v/u - alpha|`
    pub ratio_error: f64,
    pub tail_energy: f64,
}

/// Distance of an assigned eigenvalue to its unperturbed centre `mu_{k,j}`.
/// Exact agreement is expected when `P_2` is constant.
#[derive(Debug, Clone, Serialize)]
pub struct CenterRow {
    pub k: i64,
    #[serde(serialize_with = "one_based")]
    pub j: usize,
    pub lambda: Complex64,
    pub center: Complex64,
    pub error: f64,
    /// `error / max(1, |center|)`
    pub relative_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub rows: Vec<ComparisonRow>,
    pub center_rows: Vec<CenterRow>,
    pub max_center_relative_error: Option<f64>,
    pub overlaps: Vec<PairOverlap>,
    pub eigenvalue_error_fit: Option<LinearFit>,
    pub ratio_error_fit: Option<LinearFit>,
    pub tail_energy_fit: Option<LinearFit>,
    pub overlap_error_fit: Option<LinearFit>,
    /// Smallest `k` from which every first-order disk holds exactly two
    /// eigenvalues and every refined disk exactly one.
    pub count_onset: Option<i64>,
    pub suggested_c4: Option<f64>,
}

fn fit_rows<'r>(rows: impl Iterator<Item = (i64, f64)> + 'r) -> Option<LinearFit> {
    let (k, y): (Vec<f64>, Vec<f64>) = rows.map(|(k, y)| (k as f64, y)).unzip();
    loglog_fit(&k, &y)
}

/// Prediction-versus-oracle errors with fitted log-log slopes.
pub fn compare(run: &OracleRun) -> ConvergenceReport {
    let n = run.order as i32;
    let mut rows = Vec::new();
    for e in run.report.assigned() {
        let (Some(a), Some(coords)) = (e.assignment, e.coordinates.as_ref()) else {
            continue;
        };
        let Some(branch) = a.branch else { continue };
        let Some(p) = run.prediction(a.k, a.j) else {
            continue;
        };
        let h = p.h(branch);
        let err = (e.lambda - h).norm();
        let kf = a.k as f64;
        let ratio = coords.v / coords.u;
        let alpha = p.alpha(branch);
        rows.push(ComparisonRow {
            k: a.k,
            j: a.j,
            branch,
            lambda: e.lambda,
            h,
            eigenvalue_error: err,
            normalized_error: err / (kf.powi(n - 3) * p.gamma * log_factor(a.k)),
            refined_radius: p.refined_radius,
            in_refined_disk: err < p.refined_radius,
            u_abs: coords.u.norm(),
            v_abs: coords.v.norm(),
            ratio,
            alpha,
            ratio_error: (ratio - alpha).norm(),
            tail_energy: coords.tail_energy,
        });
    }
    rows.sort_by_key(|r| (r.k, r.j, r.branch));

    let mut center_rows = Vec::new();
    for e in &run.report.eigenpairs {
        let Some(a) = e.assignment else { continue };
        let Some(d) = run.report.disk(a.k, a.j) else {
            continue;
        };
        let error = (e.lambda - d.center).norm();
        center_rows.push(CenterRow {
            k: a.k,
            j: a.j,
            lambda: e.lambda,
            center: d.center,
            error,
            relative_error: error / d.center.norm().max(1.0),
        });
    }
    let max_center_relative_error = center_rows
        .iter()
        .map(|r| r.relative_error)
        .reduce(f64::max);

    let onset = {
        let good = |k: i64| {
            run.report.disks.iter().filter(|d| d.k == k).all(|d| {
                d.first_order == 2
                    && d.refined_plus.is_none_or(|c| c == 1)
                    && d.refined_minus.is_none_or(|c| c == 1)
            })
        };
        let mut onset = None;
        for k in (run.config.k_min..=run.config.k_max).rev() {
            if good(k) {
                onset = Some(k);
            } else {
                break;
            }
        }
        onset
    };

    ConvergenceReport {
        eigenvalue_error_fit: fit_rows(rows.iter().map(|r| (r.k, r.eigenvalue_error))),
        ratio_error_fit: fit_rows(rows.iter().map(|r| (r.k, r.ratio_error))),
        tail_energy_fit: fit_rows(rows.iter().map(|r| (r.k, r.tail_energy))),
        overlap_error_fit: fit_rows(run.overlaps.iter().filter_map(|o| Some((o.k, o.error?)))),
        rows,
        center_rows,
        max_center_relative_error,
        overlaps: run.overlaps.clone(),
        count_onset: onset,
        suggested_c4: run.suggested_c4,
    }
}
