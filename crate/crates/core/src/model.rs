//! Operator problems and their Fourier-domain coefficient representation.
//!
//! A coefficient `P_nu(x)` is stored as a finite map of explicit Fourier
//! coefficients `P^(r)` (so that `P_nu(x) = sum_r P^(r) e^{i 2 pi r x}`) plus
//! an optional power-decay tail law used for `|r|` beyond the explicit range.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg;
use crate::{CMatrix, Complex64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    /// `y^(nu)(1) = y^(nu)(0)`; basis `e^{i 2 pi p x}`.
    Periodic,
    /// `y^(nu)(1) = -y^(nu)(0)`; basis `e^{i (2p+1) pi x}`.
    Antiperiodic,
}

impl BoundaryCondition {
    /// Derivative symbol of basis function `p`: `2 pi p i` or `(2p+1) pi i`.
    pub fn omega(self, p: i64) -> Complex64 {
        match self {
            BoundaryCondition::Periodic => Complex64::new(0.0, 2.0 * PI * p as f64),
            BoundaryCondition::Antiperiodic => Complex64::new(0.0, (2 * p + 1) as f64 * PI),
        }
    }

    /// Index of the basis function resonant with `k` (same unperturbed
    /// eigenvalue): `-k` for periodic, `-k-1` for antiperiodic.
    pub fn partner(self, k: i64) -> i64 {
        match self {
            BoundaryCondition::Periodic => -k,
            BoundaryCondition::Antiperiodic => -k - 1,
        }
    }

    /// Fourier frequency coupling `k` to its partner: `2k` or `2k+1`.
    pub fn resonant_frequency(self, k: i64) -> i64 {
        k - self.partner(k)
    }

    pub fn name(self) -> &'static str {
        match self {
            BoundaryCondition::Periodic => "periodic",
            BoundaryCondition::Antiperiodic => "antiperiodic",
        }
    }
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Power-decay law `coef(r) = amp_sign(r) |r|^{-s_sign(r)} phase(r)` applied
/// for `|r| >= start`.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerTail {
    /// Decay exponent for `r > 0`.
    pub decay: f64,
    /// Decay exponent for `r < 0`; `None` means the same as `decay`.
    pub decay_neg: Option<f64>,
    pub amp_pos: CMatrix,
    pub amp_neg: CMatrix,
    /// When set, `phase(r) = (-1)^r`.
    pub alternating: bool,
    /// First `|r|` covered by the tail. Defaults to one past the explicit range.
    pub start: Option<i64>,
}

impl PowerTail {
    pub fn symmetric(decay: f64, amp: CMatrix) -> Self {
        PowerTail {
            decay,
            decay_neg: None,
            amp_pos: amp.clone(),
            amp_neg: amp,
            alternating: false,
            start: None,
        }
    }

    pub fn decay_pos(&self) -> f64 {
        self.decay
    }

    pub fn decay_neg(&self) -> f64 {
        self.decay_neg.unwrap_or(self.decay)
    }

    /// Tail law evaluated at `r != 0`, ignoring the start cut-off.
    pub fn law(&self, r: i64) -> CMatrix {
        let (amp, s) = if r > 0 {
            (&self.amp_pos, self.decay_pos())
        } else {
            (&self.amp_neg, self.decay_neg())
        };
        let mut scale = (r.unsigned_abs() as f64).powf(-s);
        if self.alternating && r % 2 != 0 {
            scale = -scale;
        }
        amp * Complex64::new(scale, 0.0)
    }
}

/// Matrix-valued coefficient given by its Fourier data.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierMatrixSeries {
    dim: usize,
    explicit: BTreeMap<i64, CMatrix>,
    tail: Option<PowerTail>,
}

impl FourierMatrixSeries {
    pub fn zero(dim: usize) -> Self {
        FourierMatrixSeries {
            dim,
            explicit: BTreeMap::new(),
            tail: None,
        }
    }

    /// The constant coefficient `P(x) = c`.
    pub fn constant(c: CMatrix) -> Self {
        let dim = c.nrows();
        Self::zero(dim).with_term(0, c)
    }

    /// Sets the explicit coefficient at frequency `r`. Shape is checked by
    /// [`OperatorSpec::validate`], not here.
    pub fn with_term(mut self, r: i64, coefficient: CMatrix) -> Self {
        self.explicit.insert(r, coefficient);
        self
    }

    pub fn with_tail(mut self, tail: PowerTail) -> Self {
        self.tail = Some(tail);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn explicit(&self) -> &BTreeMap<i64, CMatrix> {
        &self.explicit
    }

    pub fn tail(&self) -> Option<&PowerTail> {
        self.tail.as_ref()
    }

    /// Largest `|r|` with an explicit entry (0 when there is none).
    pub fn explicit_range(&self) -> i64 {
        self.explicit.keys().map(|r| r.abs()).max().unwrap_or(0)
    }

    pub fn tail_start(&self) -> Option<i64> {
        self.tail
            .as_ref()
            .map(|t| t.start.unwrap_or(self.explicit_range() + 1))
    }

    pub fn is_finitely_supported(&self) -> bool {
        self.tail.is_none()
    }

    /// Frequencies `r` for which the coefficient may be nonzero are bounded
    /// by this value; `None` when a tail is present.
    pub fn support_bound(&self) -> Option<i64> {
        if self.tail.is_some() {
            None
        } else {
            Some(self.explicit_range())
        }
    }

    /// Fourier coefficient `P^(r)`.
    pub fn coefficient(&self, r: i64) -> CMatrix {
        if let Some(c) = self.explicit.get(&r) {
            return c.clone();
        }
        match (&self.tail, self.tail_start()) {
            (Some(tail), Some(start)) if r != 0 && r.abs() >= start => tail.law(r),
            _ => CMatrix::zeros(self.dim, self.dim),
        }
    }

    /// Truncated synthesis `sum_{|r| <= truncation} P^(r) e^{i 2 pi r x}`.
    pub fn evaluate(&self, x: f64, truncation: i64) -> CMatrix {
        let mut acc = CMatrix::zeros(self.dim, self.dim);
        for r in -truncation..=truncation {
            let c = self.coefficient(r);
            let phase = Complex64::from_polar(1.0, 2.0 * PI * r as f64 * x);
            acc += c * phase;
        }
        acc
    }
}

/// The operator problem: order `n`, dimension `m`, coefficients
/// `P_2 ... P_n` and the boundary condition.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorSpec {
    pub order: usize,
    pub dim: usize,
    pub bc: BoundaryCondition,
    /// `coefficients[nu - 2]` holds `P_nu`; exactly `order - 1` slots.
    pub coefficients: Vec<FourierMatrixSeries>,
}

impl OperatorSpec {
    /// A spec with every coefficient zero.
    pub fn new(order: usize, dim: usize, bc: BoundaryCondition) -> Self {
        OperatorSpec {
            order,
            dim,
            bc,
            coefficients: (2..=order.max(2))
                .map(|_| FourierMatrixSeries::zero(dim))
                .collect(),
        }
    }

    /// Replaces `P_nu`. Panics if `nu` is outside `2..=order`.
    pub fn with_coefficient(mut self, nu: usize, series: FourierMatrixSeries) -> Self {
        assert!(
            (2..=self.order).contains(&nu),
            "coefficient index {nu} outside 2..={}",
            self.order
        );
        self.coefficients[nu - 2] = series;
        self
    }

    pub fn with_bc(mut self, bc: BoundaryCondition) -> Self {
        self.bc = bc;
        self
    }

    /// `P_nu` for `2 <= nu <= order`.
    pub fn coefficient(&self, nu: usize) -> &FourierMatrixSeries {
        &self.coefficients[nu - 2]
    }

    pub fn p2(&self) -> &FourierMatrixSeries {
        self.coefficient(2)
    }

    /// Largest explicit frequency across all coefficients.
    pub fn max_explicit_frequency(&self) -> i64 {
        self.coefficients
            .iter()
            .map(FourierMatrixSeries::explicit_range)
            .max()
            .unwrap_or(0)
    }

    /// Checks every structural invariant; returns the spec unchanged when
    /// they all hold, otherwise every violation found.
    pub fn validate(self) -> Result<Self, Vec<SpecViolation>> {
        let violations = self.violations();
        if violations.is_empty() {
            Ok(self)
        } else {
            Err(violations)
        }
    }

    pub fn violations(&self) -> Vec<SpecViolation> {
        let mut out = Vec::new();
        if self.order < 2 {
            out.push(SpecViolation::OrderTooSmall { n: self.order });
        }
        if !self.order.is_multiple_of(2) {
            out.push(SpecViolation::OddOrder { n: self.order });
        }
        if self.dim == 0 {
            out.push(SpecViolation::ZeroDimension);
        }
        let expected_slots = self.order.saturating_sub(1);
        if self.coefficients.len() != expected_slots {
            out.push(SpecViolation::CoefficientCount {
                expected: expected_slots,
                found: self.coefficients.len(),
            });
        }
        for (idx, series) in self.coefficients.iter().enumerate() {
            let name = format!("P{}", idx + 2);
            check_series(&name, series, self.dim, &mut out);
        }
        out
    }
}

fn check_series(name: &str, series: &FourierMatrixSeries, m: usize, out: &mut Vec<SpecViolation>) {
    if series.dim != m {
        out.push(SpecViolation::DimensionMismatch {
            field: name.to_string(),
            expected: m,
            found: (series.dim, series.dim),
        });
    }
    let mut check_matrix = |field: String, a: &CMatrix| {
        if a.nrows() != m || a.ncols() != m {
            out.push(SpecViolation::DimensionMismatch {
                field,
                expected: m,
                found: (a.nrows(), a.ncols()),
            });
        } else if !linalg::is_finite(a) {
            out.push(SpecViolation::NonFinite { field });
        }
    };
    for (r, c) in &series.explicit {
        check_matrix(format!("{name}.explicit[{r}]"), c);
    }
    if let Some(tail) = &series.tail {
        check_matrix(format!("{name}.tail.amp_pos"), &tail.amp_pos);
        check_matrix(format!("{name}.tail.amp_neg"), &tail.amp_neg);
        for (label, s) in [("s", tail.decay_pos()), ("s_neg", tail.decay_neg())] {
            if !(s.is_finite() && s > 0.0) {
                out.push(SpecViolation::InvalidDecay {
                    field: format!("{name}.tail.{label}"),
                    value: s,
                });
            }
        }
        if let Some(start) = tail.start {
            let range = series.explicit_range();
            if start <= range || start < 1 {
                out.push(SpecViolation::TailOverlap {
                    field: format!("{name}.tail.start"),
                    start,
                    explicit_range: range,
                });
            }
        }
    }
}

/// One broken invariant of an [`OperatorSpec`].
#[derive(Clone, Debug, PartialEq, Error)]
pub enum SpecViolation {
    #[error("n: order {n} is odd; only even orders are supported")]
    OddOrder { n: usize },
    #[error("n: order {n} must be at least 2")]
    OrderTooSmall { n: usize },
    #[error("m: dimension must be at least 1")]
    ZeroDimension,
    #[error("coefficients: expected {expected} slots (P2..Pn), found {found}")]
    CoefficientCount { expected: usize, found: usize },
    #[error("{field}: expected {expected}x{expected} matrix, found {}x{}", found.0, found.1)]
    DimensionMismatch {
        field: String,
        expected: usize,
        found: (usize, usize),
    },
    #[error("{field}: non-finite entry")]
    NonFinite { field: String },
    #[error(
        "{field}: tail starts at {start} but explicit data reaches frequency {explicit_range}"
    )]
    TailOverlap {
        field: String,
        start: i64,
        explicit_range: i64,
    },
    #[error("{field}: decay exponent {value} must be positive and finite")]
    InvalidDecay { field: String, value: f64 },
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("malformed problem document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{field}: frequency key {key:?} is not a decimal integer")]
    BadFrequency { field: String, key: String },
    #[error("coefficients: unknown coefficient name {0:?} (expected P2..Pn)")]
    UnknownCoefficient(String),
    #[error("{field}: expected {expected}x{expected} matrix")]
    Shape { field: String, expected: usize },
    #[error("invalid spec: {}", join_violations(.0))]
    Invalid(Vec<SpecViolation>),
}

fn join_violations(v: &[SpecViolation]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

// ---------------------------------------------------------------------------
// JSON problem document

type MatrixDoc = Vec<Vec<[f64; 2]>>;

#[derive(Serialize, Deserialize)]
struct ProblemDocument {
    n: usize,
    m: usize,
    bc: BoundaryCondition,
    #[serde(default)]
    coefficients: BTreeMap<String, SeriesDocument>,
}

#[derive(Serialize, Deserialize)]
struct SeriesDocument {
    #[serde(default, serialize_with = "numeric_key_order")]
    explicit: BTreeMap<String, MatrixDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tail: Option<TailDocument>,
}

#[derive(Serialize, Deserialize)]
struct TailDocument {
    s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    s_neg: Option<f64>,
    amp_pos: MatrixDoc,
    amp_neg: MatrixDoc,
    #[serde(default)]
    alternating: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    start: Option<i64>,
}

fn numeric_key_order<S: serde::Serializer>(
    map: &BTreeMap<String, MatrixDoc>,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    let mut entries: Vec<_> = map.iter().collect();
    entries.sort_by_key(|(k, _)| k.parse::<i64>().unwrap_or(i64::MAX));
    serializer.collect_map(entries)
}

fn matrix_to_doc(a: &CMatrix) -> MatrixDoc {
    (0..a.nrows())
        .map(|i| {
            (0..a.ncols())
                .map(|j| [a[(i, j)].re, a[(i, j)].im])
                .collect()
        })
        .collect()
}

fn matrix_from_doc(doc: &MatrixDoc, m: usize, field: &str) -> Result<CMatrix, ModelError> {
    if doc.len() != m || doc.iter().any(|row| row.len() != m) {
        return Err(ModelError::Shape {
            field: field.to_string(),
            expected: m,
        });
    }
    Ok(CMatrix::from_fn(m, m, |i, j| {
        Complex64::new(doc[i][j][0], doc[i][j][1])
    }))
}

impl OperatorSpec {
    /// Parses and validates a JSON problem document.
    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let doc: ProblemDocument = serde_json::from_str(text)?;
        let mut spec = OperatorSpec::new(doc.n, doc.m, doc.bc);
        for (name, series_doc) in &doc.coefficients {
            let nu: usize = name
                .strip_prefix('P')
                .and_then(|s| s.parse().ok())
                .filter(|nu| (2..=doc.n).contains(nu))
                .ok_or_else(|| ModelError::UnknownCoefficient(name.clone()))?;
            let mut series = FourierMatrixSeries::zero(doc.m);
            for (key, mat) in &series_doc.explicit {
                let r: i64 = key.trim().parse().map_err(|_| ModelError::BadFrequency {
                    field: name.clone(),
                    key: key.clone(),
                })?;
                let field = format!("{name}.explicit[{key}]");
                series = series.with_term(r, matrix_from_doc(mat, doc.m, &field)?);
            }
            if let Some(t) = &series_doc.tail {
                series = series.with_tail(PowerTail {
                    decay: t.s,
                    decay_neg: t.s_neg,
                    amp_pos: matrix_from_doc(&t.amp_pos, doc.m, &format!("{name}.tail.amp_pos"))?,
                    amp_neg: matrix_from_doc(&t.amp_neg, doc.m, &format!("{name}.tail.amp_neg"))?,
                    alternating: t.alternating,
                    start: t.start,
                });
            }
            spec.coefficients[nu - 2] = series;
        }
        spec.validate().map_err(ModelError::Invalid)
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let mut coefficients = BTreeMap::new();
        for (idx, series) in self.coefficients.iter().enumerate() {
            if series.explicit.is_empty() && series.tail.is_none() {
                continue;
            }
            let explicit = series
                .explicit
                .iter()
                .map(|(r, c)| (r.to_string(), matrix_to_doc(c)))
                .collect();
            let tail = series.tail.as_ref().map(|t| TailDocument {
                s: t.decay,
                s_neg: t.decay_neg,
                amp_pos: matrix_to_doc(&t.amp_pos),
                amp_neg: matrix_to_doc(&t.amp_neg),
                alternating: t.alternating,
                start: t.start,
            });
            coefficients.insert(format!("P{}", idx + 2), SeriesDocument { explicit, tail });
        }
        let doc = ProblemDocument {
            n: self.order,
            m: self.dim,
            bc: self.bc,
            coefficients,
        };
        serde_json::to_value(doc).expect("problem document is always serialisable")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("serialisable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag_real, real_matrix};

    fn scalar(x: f64) -> CMatrix {
        real_matrix(&[&[x]])
    }

    #[test]
    fn minimal_spec_is_valid() {
        let spec = OperatorSpec::new(2, 1, BoundaryCondition::Periodic)
            .with_coefficient(2, FourierMatrixSeries::constant(scalar(0.0)));
        assert!(spec.clone().validate().is_ok());
        assert_eq!(spec.clone().validate().unwrap(), spec);
    }

    #[test]
    fn odd_order_is_rejected() {
        let spec = OperatorSpec::new(3, 1, BoundaryCondition::Periodic);
        let err = spec.validate().unwrap_err();
        assert!(err.contains(&SpecViolation::OddOrder { n: 3 }));
    }

    #[test]
    fn dimension_mismatch_names_field() {
        let spec = OperatorSpec::new(2, 1, BoundaryCondition::Periodic).with_coefficient(
            2,
            FourierMatrixSeries::zero(1).with_term(0, diag_real(&[1.0, 2.0])),
        );
        let err = spec.validate().unwrap_err();
        assert_eq!(err.len(), 1);
        match &err[0] {
            SpecViolation::DimensionMismatch { field, .. } => assert_eq!(field, "P2.explicit[0]"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tail_overlap_is_rejected() {
        let mut tail = PowerTail::symmetric(1.0, scalar(1.0));
        tail.start = Some(2);
        let series = FourierMatrixSeries::zero(1)
            .with_term(3, scalar(1.0))
            .with_tail(tail);
        let spec = OperatorSpec::new(2, 1, BoundaryCondition::Periodic).with_coefficient(2, series);
        let err = spec.validate().unwrap_err();
        assert!(matches!(
            err[0],
            SpecViolation::TailOverlap {
                start: 2,
                explicit_range: 3,
                ..
            }
        ));
    }

    #[test]
    fn coefficient_lookup() {
        let s = FourierMatrixSeries::zero(1).with_term(2, scalar(1.0));
        assert_eq!(s.coefficient(2), scalar(1.0));
        assert_eq!(s.coefficient(5), scalar(0.0));
        assert_eq!(s.coefficient(0), scalar(0.0));

        let t = FourierMatrixSeries::zero(1).with_tail(PowerTail::symmetric(2.0, scalar(1.0)));
        assert!((t.coefficient(4)[(0, 0)].re - 1.0 / 16.0).abs() < 1e-15);
        assert!((t.coefficient(-4)[(0, 0)].re - 1.0 / 16.0).abs() < 1e-15);
        assert_eq!(t.coefficient(0), scalar(0.0));
    }

    #[test]
    fn tail_phase_and_sign_specific_decay() {
        let tail = PowerTail {
            decay: 0.5,
            decay_neg: Some(0.75),
            amp_pos: scalar(2.0),
            amp_neg: scalar(3.0),
            alternating: true,
            start: None,
        };
        let s = FourierMatrixSeries::zero(1).with_tail(tail);
        assert!((s.coefficient(4)[(0, 0)].re - 1.0).abs() < 1e-15);
        assert!((s.coefficient(3)[(0, 0)].re + 2.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((s.coefficient(-16)[(0, 0)].re - 3.0 / 8.0).abs() < 1e-15);
    }

    #[test]
    fn evaluate_simple_series() {
        let c = FourierMatrixSeries::constant(scalar(3.0));
        assert!((c.evaluate(0.37, 4)[(0, 0)] - Complex64::new(3.0, 0.0)).norm() < 1e-15);

        let cos = FourierMatrixSeries::zero(1)
            .with_term(1, scalar(1.0))
            .with_term(-1, scalar(1.0));
        assert!((cos.evaluate(0.0, 1)[(0, 0)] - Complex64::new(2.0, 0.0)).norm() < 1e-15);
        assert!(cos.evaluate(0.25, 1)[(0, 0)].norm() < 1e-14);
    }

    #[test]
    fn bc_symbols() {
        let p = BoundaryCondition::Periodic;
        let a = BoundaryCondition::Antiperiodic;
        assert_eq!(p.partner(3), -3);
        assert_eq!(a.partner(3), -4);
        assert_eq!(p.resonant_frequency(3), 6);
        assert_eq!(a.resonant_frequency(3), 7);
        assert!((a.omega(0) - Complex64::new(0.0, PI)).norm() < 1e-15);
        assert!((a.omega(-1) - Complex64::new(0.0, -PI)).norm() < 1e-15);
    }

    #[test]
    fn json_document_round_trip() {
        let tail = PowerTail {
            decay: 0.5,
            decay_neg: Some(0.75),
            amp_pos: scalar(1.5),
            amp_neg: scalar(0.5),
            alternating: true,
            start: Some(4),
        };
        let spec = OperatorSpec::new(4, 1, BoundaryCondition::Antiperiodic)
            .with_coefficient(
                2,
                FourierMatrixSeries::zero(1)
                    .with_term(0, scalar(1.0))
                    .with_term(-3, CMatrix::from_element(1, 1, Complex64::new(0.5, -0.25)))
                    .with_tail(tail),
            )
            .with_coefficient(4, FourierMatrixSeries::constant(scalar(2.0)));
        let text = spec.to_json();
        let back = OperatorSpec::from_json(&text).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn json_errors_name_the_field() {
        let bad_key =
            r#"{"n":2,"m":1,"bc":"periodic","coefficients":{"P2":{"explicit":{"x":[[[1,0]]]}}}}"#;
        assert!(matches!(
            OperatorSpec::from_json(bad_key),
            Err(ModelError::BadFrequency { .. })
        ));
        let bad_name = r#"{"n":2,"m":1,"bc":"periodic","coefficients":{"P3":{}}}"#;
        assert!(matches!(
            OperatorSpec::from_json(bad_name),
            Err(ModelError::UnknownCoefficient(_))
        ));
        let odd = r#"{"n":3,"m":1,"bc":"periodic"}"#;
        let msg = OperatorSpec::from_json(odd).unwrap_err().to_string();
        assert!(msg.contains("odd"), "{msg}");
        let shape =
            r#"{"n":2,"m":2,"bc":"periodic","coefficients":{"P2":{"explicit":{"0":[[[1,0]]]}}}}"#;
        let msg = OperatorSpec::from_json(shape).unwrap_err().to_string();
        assert!(msg.contains("P2.explicit[0]"), "{msg}");
    }
}
