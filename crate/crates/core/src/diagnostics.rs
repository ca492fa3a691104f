//! Decisions on the non-degeneracy condition of the diagonal projected
//! coefficients, on the Riesz-basis property of the root functions, and the
//! overlap bound used in the Bari-type argument.
//!
//! The dominance condition is the pair of limits
//!
//! ```text
//! ln k / (k b_{s,s,+-f}) -> 0   and   b_f b_{-f} / b_{s,s,+-f} -> 0
//! ```
//!
//! over the resonant frequencies `f = 2k` (periodic) or `f = 2k+1`
//! (antiperiodic). The basis criterion is `b_{j,j,f} ~ b_{j,j,-f}` for every
//! `j`, read as "bounded ratio with no trend" on finite windows.

use serde::Serialize;
use thiserror::Error;

use crate::asymptotics::{AsymptoticsError, DEGENERACY_REL_TOL};
use crate::model::BoundaryCondition;
use crate::projection::ProjectionTable;
use crate::ser::one_based;
use crate::stats::{linear_fit, LinearFit};

pub const MIN_EMPIRICAL_WINDOW: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiagnosticsError {
    #[error("empirical window [{k_min}, {k_max}] has {len} points, at least {MIN_EMPIRICAL_WINDOW} required")]
    WindowTooShort { k_min: i64, k_max: i64, len: usize },
    #[error("window needs frequency {frequency} but the projection table stops at {p_max}")]
    WindowOutsideTable { frequency: i64, p_max: i64 },
    #[error("window must start at k >= 1, got {k_min}")]
    InvalidWindow { k_min: i64 },
    #[error("bari threshold must lie in (0, 1), got {a}")]
    InvalidThreshold { a: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Decide from the tail law.
    Analytic,
    /// Decide from projected coefficients on a finite window.
    Empirical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Dominance {
    Holds,
    Fails,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RieszVerdict {
    Basis,
    NoBasis,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    fn frequency(self, f: i64) -> i64 {
        match self {
            Side::Plus => f,
            Side::Minus => -f,
        }
    }
}

/// Thresholds of the empirical tests.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiagnosticsConfig {
    pub k_min: i64,
    pub k_max: i64,
    /// Ratios must stay inside `[1/R, R]`.
    pub ratio_bound: f64,
    /// Log-log slopes smaller than this in magnitude count as "no trend".
    pub slope_floor: f64,
    pub bari_a: f64,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        DiagnosticsConfig {
            k_min: 16,
            k_max: 200,
            ratio_bound: 100.0,
            slope_floor: 0.05,
            bari_a: 0.9,
        }
    }
}

impl DiagnosticsConfig {
    pub fn window(mut self, k_min: i64, k_max: i64) -> Self {
        self.k_min = k_min;
        self.k_max = k_max;
        self
    }

    fn len(&self) -> usize {
        (self.k_max - self.k_min + 1).max(0) as usize
    }
}

/// Outcome for one diagonal index `s` and one side of the pair.
#[derive(Debug, Clone, Serialize)]
pub struct DominanceRecord {
    #[serde(serialize_with = "one_based")]
    pub s: usize,
    pub side: Side,
    pub verdict: Dominance,
    pub reason: String,
    /// Slope of `ln(1 / (k |b_{s,s,+-f}|))` against `ln k`; the `ln k`
    /// factor of the first limit is split off before fitting.
    pub log_ratio_fit: Option<LinearFit>,
    /// Slope of `ln(b_f b_{-f} / |b_{s,s,+-f}|)` against `ln k`.
    pub product_ratio_fit: Option<LinearFit>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DominanceVerdict {
    pub mode: Mode,
    pub verdict: Dominance,
    pub records: Vec<DominanceRecord>,
    /// Empirical mode only: the verdict changes when the lower half of the
    /// window is dropped.
    pub lower_edge_sensitive: bool,
}

/// Window statistics of `|b_{j,j,f} / b_{j,j,-f}|`.
#[derive(Debug, Clone, Serialize)]
pub struct RatioStats {
    #[serde(serialize_with = "one_based")]
    pub j: usize,
    pub min: f64,
    pub max: f64,
    pub fit: Option<LinearFit>,
    pub verdict: RieszVerdict,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct OverlapPoint {
    pub k: i64,
    #[serde(serialize_with = "one_based")]
    pub j: usize,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BariResult {
    pub pass: bool,
    pub sup: f64,
    pub witness: Option<OverlapPoint>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BasisVerdict {
    pub dominance: DominanceVerdict,
    pub riesz: RieszVerdict,
    pub riesz_reason: String,
    pub ratio_stats: Vec<RatioStats>,
    pub overlaps: Vec<OverlapPoint>,
    pub overlap_sup: f64,
    pub bari_threshold: f64,
    pub bari: BariResult,
    pub config: DiagnosticsConfig,
}

fn vanishing(b: f64, row: f64) -> bool {
    row == 0.0 || b <= DEGENERACY_REL_TOL * row
}

fn check_window(
    table: &ProjectionTable,
    bc: BoundaryCondition,
    config: &DiagnosticsConfig,
) -> Result<(), DiagnosticsError> {
    if config.k_min < 1 {
        return Err(DiagnosticsError::InvalidWindow {
            k_min: config.k_min,
        });
    }
    if config.len() < MIN_EMPIRICAL_WINDOW {
        return Err(DiagnosticsError::WindowTooShort {
            k_min: config.k_min,
            k_max: config.k_max,
            len: config.len(),
        });
    }
    let f = bc.resonant_frequency(config.k_max);
    if !table.contains(f) {
        return Err(DiagnosticsError::WindowOutsideTable {
            frequency: f,
            p_max: table.p_max(),
        });
    }
    Ok(())
}

/// `Some(true)` when the fit trends to zero beyond noise, `Some(false)` when
/// it clearly does not, `None` when undecided.
fn trends_to_zero(fit: &LinearFit, floor: f64) -> Option<bool> {
    let spread = 2.0 * fit.slope_stderr;
    if fit.slope + spread < -floor {
        Some(true)
    } else if fit.slope - spread > -floor {
        Some(false)
    } else {
        None
    }
}

fn combine(verdicts: impl IntoIterator<Item = Dominance>) -> Dominance {
    let mut out = Dominance::Holds;
    for v in verdicts {
        match v {
            Dominance::Fails => return Dominance::Fails,
            Dominance::Inconclusive => out = Dominance::Inconclusive,
            Dominance::Holds => {}
        }
    }
    out
}

fn analytic_dominance(table: &ProjectionTable) -> Vec<DominanceRecord> {
    let mut out = Vec::new();
    for s in 0..table.dim() {
        for side in [Side::Plus, Side::Minus] {
            let record = |verdict, reason: String| DominanceRecord {
                s,
                side,
                verdict,
                reason,
                log_ratio_fit: None,
                product_ratio_fit: None,
            };
            let Some(tail) = table.tail() else {
                out.push(record(
                    Dominance::Fails,
                    "finitely supported: b_{s,s,+-f} is eventually zero".into(),
                ));
                continue;
            };
            let (amp, own) = match side {
                Side::Plus => (&tail.amp_pos, tail.decay_pos),
                Side::Minus => (&tail.amp_neg, tail.decay_neg),
            };
            let row = amp.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let diag = amp[(s, s)].norm();
            let (verdict, reason) = if vanishing(diag, row) {
                (
                    Dominance::Fails,
                    "diagonal tail amplitude is zero".to_string(),
                )
            } else if !(own > 0.0 && own < 1.0) {
                (
                    Dominance::Fails,
                    format!("decay exponent {own} outside (0, 1): ln k / (k b) does not vanish"),
                )
            } else if !(tail.decay_pos > 0.0 && tail.decay_neg > 0.0) {
                (
                    Dominance::Fails,
                    "non-positive decay exponent: b_f b_-f / b does not vanish".to_string(),
                )
            } else {
                (
                    Dominance::Holds,
                    format!(
                        "ln k k^({own} - 1) -> 0 and k^-{} -> 0",
                        match side {
                            Side::Plus => tail.decay_neg,
                            Side::Minus => tail.decay_pos,
                        }
                    ),
                )
            };
            out.push(record(verdict, reason));
        }
    }
    out
}

fn empirical_dominance(
    table: &ProjectionTable,
    bc: BoundaryCondition,
    config: &DiagnosticsConfig,
) -> Vec<DominanceRecord> {
    let ks: Vec<i64> = (config.k_min..=config.k_max).collect();
    let logk: Vec<f64> = ks.iter().map(|&k| (k as f64).ln()).collect();
    let mut out = Vec::new();
    for s in 0..table.dim() {
        for side in [Side::Plus, Side::Minus] {
            let mut seq1 = Vec::with_capacity(ks.len());
            let mut seq2 = Vec::with_capacity(ks.len());
            let mut zeros = 0usize;
            for &k in &ks {
                let f = bc.resonant_frequency(k);
                let p = side.frequency(f);
                let b = table.b(s, s, p).norm();
                if vanishing(b, table.row_max(p)) {
                    zeros += 1;
                    continue;
                }
                seq1.push(-((k as f64).ln() + b.ln()));
                seq2.push((table.row_max(f) * table.row_max(-f) / b).ln());
            }
            if zeros > 0 {
                out.push(DominanceRecord {
                    s,
                    side,
                    verdict: Dominance::Fails,
                    reason: format!(
                        "b_{{s,s,+-f}} vanishes at {zeros} of {} window points",
                        ks.len()
                    ),
                    log_ratio_fit: None,
                    product_ratio_fit: None,
                });
                continue;
            }
            let fit1 = linear_fit(&logk, &seq1);
            let fit2 = linear_fit(&logk, &seq2);
            let t1 = fit1
                .as_ref()
                .and_then(|f| trends_to_zero(f, config.slope_floor));
            let t2 = fit2
                .as_ref()
                .and_then(|f| trends_to_zero(f, config.slope_floor));
            let (verdict, reason) = match (t1, t2) {
                (Some(false), _) => (Dominance::Fails, "ln k / (k b) does not trend to zero"),
                (_, Some(false)) => (Dominance::Fails, "b_f b_-f / b does not trend to zero"),
                (Some(true), Some(true)) => (Dominance::Holds, "both sequences trend to zero"),
                _ => (Dominance::Inconclusive, "slope within noise of the floor"),
            };
            out.push(DominanceRecord {
                s,
                side,
                verdict,
                reason: reason.into(),
                log_ratio_fit: fit1,
                product_ratio_fit: fit2,
            });
        }
    }
    out
}

/// Per-`s` verdicts on the non-degeneracy condition.
pub fn dominance_verdict(
    table: &ProjectionTable,
    bc: BoundaryCondition,
    config: &DiagnosticsConfig,
    mode: Mode,
) -> Result<DominanceVerdict, DiagnosticsError> {
    match mode {
        Mode::Analytic => {
            let records = analytic_dominance(table);
            Ok(DominanceVerdict {
                mode,
                verdict: combine(records.iter().map(|r| r.verdict)),
                records,
                lower_edge_sensitive: false,
            })
        }
        Mode::Empirical => {
            check_window(table, bc, config)?;
            let records = empirical_dominance(table, bc, config);
            let verdict = combine(records.iter().map(|r| r.verdict));
            let upper = config.window(config.k_min + config.len() as i64 / 2, config.k_max);
            let lower_edge_sensitive = upper.len() >= MIN_EMPIRICAL_WINDOW
                && combine(
                    empirical_dominance(table, bc, &upper)
                        .iter()
                        .map(|r| r.verdict),
                ) != verdict;
            Ok(DominanceVerdict {
                mode,
                verdict,
                records,
                lower_edge_sensitive,
            })
        }
    }
}

fn ratio_window(
    table: &ProjectionTable,
    bc: BoundaryCondition,
    config: &DiagnosticsConfig,
    j: usize,
) -> (Vec<f64>, Vec<f64>) {
    (config.k_min..=config.k_max)
        .filter_map(|k| {
            let f = bc.resonant_frequency(k);
            let plus = table.b(j, j, f).norm();
            let minus = table.b(j, j, -f).norm();
            (plus > 0.0 && minus > 0.0).then(|| (k as f64, plus / minus))
        })
        .unzip()
}

fn ratio_stats(
    table: &ProjectionTable,
    bc: BoundaryCondition,
    config: &DiagnosticsConfig,
    j: usize,
    mode: Mode,
) -> RatioStats {
    let (ks, ratios) = ratio_window(table, bc, config, j);
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let max = ratios.iter().copied().fold(0.0, f64::max);
    let log_k: Vec<f64> = ks.iter().map(|k| k.ln()).collect();
    let log_r: Vec<f64> = ratios.iter().map(|r| r.ln()).collect();
    let fit = linear_fit(&log_k, &log_r);

    let (verdict, reason) = match mode {
        Mode::Analytic => analytic_ratio(table, j),
        Mode::Empirical => {
            let expected = config.len();
            let r = config.ratio_bound;
            if ratios.len() < expected {
                (
                    RieszVerdict::NoBasis,
                    format!(
                        "diagonal coefficient vanishes at {} window points",
                        expected - ratios.len()
                    ),
                )
            } else if min < 1.0 / r || max > r {
                (RieszVerdict::NoBasis, format!("ratio leaves [1/{r}, {r}]"))
            } else if let Some(fit) = fit {
                let spread = 2.0 * fit.slope_stderr;
                if fit.slope.abs() <= config.slope_floor {
                    (
                        RieszVerdict::Basis,
                        "bounded ratio with no trend".to_string(),
                    )
                } else if fit.slope.abs() > spread {
                    (
                        RieszVerdict::NoBasis,
                        format!("ratio trends like k^{:.4}", fit.slope),
                    )
                } else {
                    (RieszVerdict::Inconclusive, "trend within noise".to_string())
                }
            } else {
                (
                    RieszVerdict::Inconclusive,
                    "window too short to fit".to_string(),
                )
            }
        }
    };
    RatioStats {
        j,
        min,
        max,
        fit,
        verdict,
        reason,
    }
}

fn analytic_ratio(table: &ProjectionTable, j: usize) -> (RieszVerdict, String) {
    let Some(tail) = table.tail() else {
        return (RieszVerdict::Inconclusive, "no tail law".into());
    };
    let plus = tail.amp_pos[(j, j)].norm();
    let minus = tail.amp_neg[(j, j)].norm();
    if plus == 0.0 || minus == 0.0 {
        return (
            RieszVerdict::NoBasis,
            "one diagonal tail amplitude is zero".into(),
        );
    }
    if (tail.decay_pos - tail.decay_neg).abs() <= 1e-12 {
        (
            RieszVerdict::Basis,
            format!("equal decay exponents, ratio -> {:.6}", plus / minus),
        )
    } else {
        (
            RieszVerdict::NoBasis,
            format!("ratio ~ k^{:.4}", tail.decay_neg - tail.decay_pos),
        )
    }
}

/// `|1 - rho| / (1 + rho)` with `rho = |b_{j,j,-f} / b_{j,j,f}|`.
pub fn predicted_overlap(
    table: &ProjectionTable,
    bc: BoundaryCondition,
    k: i64,
    j: usize,
) -> Result<f64, AsymptoticsError> {
    let f = bc.resonant_frequency(k);
    if !table.contains(f) {
        return Err(AsymptoticsError::OutsideWindow {
            frequency: f,
            p_max: table.p_max(),
        });
    }
    let plus = table.b(j, j, f).norm();
    let minus = table.b(j, j, -f).norm();
    if plus == 0.0 {
        return Err(AsymptoticsError::DegeneratePair {
            k,
            j,
            frequency: f,
            b_plus: plus,
            b_minus: minus,
        });
    }
    Ok(overlap_from_ratio(minus / plus))
}

pub fn overlap_from_ratio(rho: f64) -> f64 {
    (1.0 - rho).abs() / (1.0 + rho)
}

/// Passes iff every overlap is below `a`; reports the arg-max.
pub fn bari_check(overlaps: &[OverlapPoint], a: f64) -> Result<BariResult, DiagnosticsError> {
    if !(a > 0.0 && a < 1.0) {
        return Err(DiagnosticsError::InvalidThreshold { a });
    }
    let mut sup = 0.0;
    let mut witness = None;
    for o in overlaps {
        if witness.is_none() || o.value > sup {
            sup = o.value;
            witness = Some(o.clone());
        }
    }
    Ok(BariResult {
        pass: sup < a,
        sup,
        witness,
    })
}

/// Full verdict: the dominance condition, the basis criterion gated on it, window ratio
/// statistics and the predicted overlaps with their Bari check.
pub fn basis_verdict(
    table: &ProjectionTable,
    bc: BoundaryCondition,
    config: &DiagnosticsConfig,
    mode: Mode,
) -> Result<BasisVerdict, DiagnosticsError> {
    if !(config.bari_a > 0.0 && config.bari_a < 1.0) {
        return Err(DiagnosticsError::InvalidThreshold { a: config.bari_a });
    }
    check_window(table, bc, config).or_else(|e| match (mode, &e) {
        (Mode::Analytic, DiagnosticsError::WindowTooShort { .. }) => Ok(()),
        _ => Err(e),
    })?;
    let dominance = dominance_verdict(table, bc, config, mode)?;
    let ratio_stats: Vec<RatioStats> = (0..table.dim())
        .map(|j| ratio_stats(table, bc, config, j, mode))
        .collect();

    let (riesz, riesz_reason) = if dominance.verdict == Dominance::Fails {
        (
            RieszVerdict::Inconclusive,
            "the dominance condition fails: the basis criterion does not apply".to_string(),
        )
    } else {
        let per_j: Vec<RieszVerdict> = ratio_stats.iter().map(|r| r.verdict).collect();
        let verdict = if per_j.contains(&RieszVerdict::NoBasis) {
            RieszVerdict::NoBasis
        } else if per_j.iter().all(|v| *v == RieszVerdict::Basis) {
            RieszVerdict::Basis
        } else {
            RieszVerdict::Inconclusive
        };
        let mut reason = ratio_stats
            .iter()
            .map(|r| format!("j={}: {}", r.j + 1, r.reason))
            .collect::<Vec<_>>()
            .join("; ");
        if dominance.verdict == Dominance::Inconclusive {
            reason.push_str("; the dominance condition undecided on this window");
        }
        (verdict, reason)
    };

    let mut overlaps = Vec::new();
    for k in config.k_min..=config.k_max {
        for j in 0..table.dim() {
            if let Ok(value) = predicted_overlap(table, bc, k, j) {
                overlaps.push(OverlapPoint { k, j, value });
            }
        }
    }
    let bari = bari_check(&overlaps, config.bari_a)?;
    Ok(BasisVerdict {
        dominance,
        riesz,
        riesz_reason,
        overlap_sup: bari.sup,
        bari_threshold: config.bari_a,
        overlaps,
        ratio_stats,
        bari,
        config: *config,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real_matrix;
    use crate::model::{FourierMatrixSeries, OperatorSpec, PowerTail};
    use crate::unperturbed::{compute_c, eigensystem, DEFAULT_GAP_TOL};

    fn scalar_tail(s_pos: f64, s_neg: f64) -> OperatorSpec {
        OperatorSpec::new(2, 1, BoundaryCondition::Periodic).with_coefficient(
            2,
            FourierMatrixSeries::zero(1).with_tail(PowerTail {
                decay: s_pos,
                decay_neg: Some(s_neg),
                amp_pos: real_matrix(&[&[1.0]]),
                amp_neg: real_matrix(&[&[1.0]]),
                alternating: false,
                start: None,
            }),
        )
    }

    fn table(spec: &OperatorSpec, p_max: i64) -> ProjectionTable {
        let sys = eigensystem(&compute_c(spec), DEFAULT_GAP_TOL).unwrap();
        ProjectionTable::build(spec, &sys, p_max)
    }

    #[test]
    fn overlap_arithmetic() {
        assert_eq!(overlap_from_ratio(1.0), 0.0);
        assert!((overlap_from_ratio(0.25) - 0.6).abs() < 1e-15);
        assert!((overlap_from_ratio(4.0) - 0.6).abs() < 1e-15);
        assert!(overlap_from_ratio(1e9) > 0.999);
    }

    #[test]
    fn bari_examples() {
        let zero: Vec<OverlapPoint> = (1..5)
            .map(|k| OverlapPoint {
                k,
                j: 0,
                value: 0.0,
            })
            .collect();
        let r = bari_check(&zero, 0.9).unwrap();
        assert!(r.pass);
        assert_eq!(r.sup, 0.0);

        let mut bad = zero.clone();
        bad[2].value = 0.99;
        let r = bari_check(&bad, 0.9).unwrap();
        assert!(!r.pass);
        let w = r.witness.unwrap();
        assert_eq!((w.k, w.j), (3, 0));

        let quarter: Vec<OverlapPoint> = (1..5)
            .map(|k| OverlapPoint {
                k,
                j: 0,
                value: overlap_from_ratio(0.25),
            })
            .collect();
        let r = bari_check(&quarter, 0.9).unwrap();
        assert!(r.pass);
        assert!((r.sup - 0.6).abs() < 1e-15);

        assert!(bari_check(&zero, 1.0).is_err());
        assert!(bari_check(&[], 0.5).unwrap().pass);
    }

    #[test]
    fn analytic_and_empirical_agree_on_power_tails() {
        let cfg = DiagnosticsConfig::default();
        for (s, expected) in [
            (0.25, Dominance::Holds),
            (0.5, Dominance::Holds),
            (0.75, Dominance::Holds),
            (1.0, Dominance::Fails),
            (1.5, Dominance::Fails),
        ] {
            let t = table(&scalar_tail(s, s), 400);
            let a =
                dominance_verdict(&t, BoundaryCondition::Periodic, &cfg, Mode::Analytic).unwrap();
            let e =
                dominance_verdict(&t, BoundaryCondition::Periodic, &cfg, Mode::Empirical).unwrap();
            assert_eq!(a.verdict, expected, "analytic s={s}");
            assert_eq!(e.verdict, expected, "empirical s={s}");
        }
    }

    #[test]
    fn asymmetric_decay_is_not_a_basis() {
        let cfg = DiagnosticsConfig::default();
        let t = table(&scalar_tail(0.5, 0.75), 400);
        for mode in [Mode::Analytic, Mode::Empirical] {
            let v = basis_verdict(&t, BoundaryCondition::Periodic, &cfg, mode).unwrap();
            assert_eq!(v.dominance.verdict, Dominance::Holds);
            assert_eq!(v.riesz, RieszVerdict::NoBasis, "{mode:?}");
        }
        let v = basis_verdict(&t, BoundaryCondition::Periodic, &cfg, Mode::Empirical).unwrap();
        let fit = v.ratio_stats[0].fit.unwrap();
        assert!((fit.slope - 0.25).abs() < 1e-10);
        assert!(v.overlap_sup > 0.5);
    }

    #[test]
    fn finitely_supported_is_out_of_scope() {
        let spec = OperatorSpec::new(2, 1, BoundaryCondition::Periodic).with_coefficient(
            2,
            FourierMatrixSeries::zero(1)
                .with_term(2, real_matrix(&[&[1.0]]))
                .with_term(-2, real_matrix(&[&[1.0]])),
        );
        let t = table(&spec, 400);
        for mode in [Mode::Analytic, Mode::Empirical] {
            let v = basis_verdict(
                &t,
                BoundaryCondition::Periodic,
                &DiagnosticsConfig::default(),
                mode,
            )
            .unwrap();
            assert_eq!(v.dominance.verdict, Dominance::Fails);
            assert_eq!(v.riesz, RieszVerdict::Inconclusive);
        }
    }

    #[test]
    fn window_preconditions() {
        let t = table(&scalar_tail(0.5, 0.5), 40);
        let bc = BoundaryCondition::Periodic;
        let short = DiagnosticsConfig::default().window(10, 15);
        assert!(matches!(
            dominance_verdict(&t, bc, &short, Mode::Empirical),
            Err(DiagnosticsError::WindowTooShort { len: 6, .. })
        ));
        let wide = DiagnosticsConfig::default().window(10, 30);
        assert!(matches!(
            dominance_verdict(&t, bc, &wide, Mode::Empirical),
            Err(DiagnosticsError::WindowOutsideTable { frequency: 60, .. })
        ));
        let ok = DiagnosticsConfig::default().window(5, 20);
        assert!(dominance_verdict(&t, bc, &ok, Mode::Empirical).is_ok());
    }
}
