//! Closed-form eigenvalue and eigenfunction predictors for the resonant
//! pairs `(k, partner(k))`: first-order disks, refined centres `h_{+-k,j}`,
//! the pair quantities `q`, `gamma`, `d_k`, and the leading eigenfunction
//! coefficient ratios `alpha_{+-}`.
//!
//! For the periodic problem the pair couples frequencies `k` and `-k` through
//! `b_{j,j,+-2k}`; for the antiperiodic problem it couples basis indices `k`
//! and `-k-1` through `b_{j,j,+-(2k+1)}`. Both are handled through
//! [`BoundaryCondition::resonant_frequency`].

use serde::Serialize;
use thiserror::Error;

use crate::model::BoundaryCondition;
use crate::projection::ProjectionTable;
use crate::ser::{finite_or_null, one_based};
use crate::unperturbed::{ipow, mu_kj, BiorthogonalSystem};
use crate::Complex64;

/// A diagonal coefficient is treated as vanishing when it is this small
/// relative to the largest projected coefficient at the same frequency.
pub const DEGENERACY_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error, Serialize)]
pub enum AsymptoticsError {
    #[error("pair (k={k}, j={}) is degenerate: |b_jj,{frequency}| = {b_plus:e}, |b_jj,-{frequency}| = {b_minus:e}", j + 1)]
    DegeneratePair {
        k: i64,
        j: usize,
        frequency: i64,
        b_plus: f64,
        b_minus: f64,
    },
    #[error("frequency {frequency} lies outside the projection window +-{p_max}")]
    OutsideWindow { frequency: i64, p_max: i64 },
    #[error("k must be at least 1, got {k}")]
    InvalidIndex { k: i64 },
}

/// Unnamed absolute constants of the disk radii.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiskConstants {
    pub c3: f64,
    pub c4: f64,
}

impl Default for DiskConstants {
    fn default() -> Self {
        DiskConstants { c3: 1.0, c4: 1.0 }
    }
}

/// `max(ln k, ln 2)`, keeping the logarithmic branch of `d_k` positive at `k = 1`.
pub fn log_factor(k: i64) -> f64 {
    (k as f64).ln().max(std::f64::consts::LN_2)
}

/// First-order disks `U(mu_{k,j}, eps_k)`, `j = 1..m`.
#[derive(Debug, Clone, Serialize)]
pub struct DiskSet {
    pub k: i64,
    pub centers: Vec<Complex64>,
    pub radius: f64,
    /// Minimum pairwise centre distance (infinite for `m = 1`).
    #[serde(serialize_with = "finite_or_null")]
    pub min_center_distance: f64,
    /// Lower bound `a (2 pi k)^{n-2}` on centre distances.
    #[serde(serialize_with = "finite_or_null")]
    pub gap_bound: f64,
    pub disjoint: bool,
}

impl DiskSet {
    pub fn contains(&self, j: usize, lambda: Complex64) -> bool {
        (lambda - self.centers[j]).norm() < self.radius
    }
}

/// Everything predicted for the resonant pair at `(k, j)`.
#[derive(Debug, Clone, Serialize)]
pub struct PairPrediction {
    pub k: i64,
    #[serde(serialize_with = "one_based")]
    pub j: usize,
    pub bc: BoundaryCondition,
    /// Coupling frequency `2k` or `2k+1`.
    pub frequency: i64,
    /// `omega(k)^{n-2}`, the scale between `lambda` and `Lambda`.
    pub scale: Complex64,
    pub mu_center: Complex64,
    pub eps_k: f64,
    /// `b_{j,j,f}`
    pub b_plus: Complex64,
    /// `b_{j,j,-f}`
    pub b_minus: Complex64,
    pub q: Complex64,
    pub gamma: f64,
    pub d_k: f64,
    pub h_plus: Complex64,
    pub h_minus: Complex64,
    pub refined_radius: f64,
    pub alpha_plus: Complex64,
    pub alpha_minus: Complex64,
    /// Normalised `(u, v)` with `v / u = alpha_plus`.
    pub coeff_plus: [Complex64; 2],
    pub coeff_minus: [Complex64; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Branch::Plus => "plus",
            Branch::Minus => "minus",
        }
    }
}

impl PairPrediction {
    pub fn h(&self, branch: Branch) -> Complex64 {
        match branch {
            Branch::Plus => self.h_plus,
            Branch::Minus => self.h_minus,
        }
    }

    pub fn alpha(&self, branch: Branch) -> Complex64 {
        match branch {
            Branch::Plus => self.alpha_plus,
            Branch::Minus => self.alpha_minus,
        }
    }

    pub fn coeff(&self, branch: Branch) -> [Complex64; 2] {
        match branch {
            Branch::Plus => self.coeff_plus,
            Branch::Minus => self.coeff_minus,
        }
    }

    /// `lambda / omega(k)^{n-2}`.
    pub fn to_scaled(&self, lambda: Complex64) -> Complex64 {
        lambda / self.scale
    }

    pub fn k_power(&self, n: usize) -> f64 {
        (self.k as f64).powi(n as i32 - 2)
    }
}

/// One `(k, j)` slot of a sweep; degenerate pairs are kept, not dropped.
#[derive(Debug, Clone, Serialize)]
pub struct SweepEntry {
    pub k: i64,
    #[serde(serialize_with = "one_based")]
    pub j: usize,
    #[serde(flatten)]
    pub outcome: Outcome,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Outcome {
    Predicted(Box<PairPrediction>),
    Degenerate { reason: String },
}

impl SweepEntry {
    pub fn prediction(&self) -> Option<&PairPrediction> {
        match &self.outcome {
            Outcome::Predicted(p) => Some(p),
            Outcome::Degenerate { .. } => None,
        }
    }
}

/// Evaluates the closed-form predictors for one operator.
#[derive(Debug, Clone, Copy)]
pub struct Predictor<'a> {
    pub table: &'a ProjectionTable,
    pub system: &'a BiorthogonalSystem,
    pub order: usize,
    pub bc: BoundaryCondition,
    pub constants: DiskConstants,
}

impl<'a> Predictor<'a> {
    pub fn new(
        table: &'a ProjectionTable,
        system: &'a BiorthogonalSystem,
        order: usize,
        bc: BoundaryCondition,
        constants: DiskConstants,
    ) -> Self {
        Predictor {
            table,
            system,
            order,
            bc,
            constants,
        }
    }

    fn pair_frequency(&self, k: i64) -> Result<i64, AsymptoticsError> {
        if k < 1 {
            return Err(AsymptoticsError::InvalidIndex { k });
        }
        let f = self.bc.resonant_frequency(k);
        if !self.table.contains(f) {
            return Err(AsymptoticsError::OutsideWindow {
                frequency: f,
                p_max: self.table.p_max(),
            });
        }
        Ok(f)
    }

    /// `eps_k = 2 m c3 k^{n-2} (b_f + b_{-f} + ln k / k) ||V||`.
    pub fn epsilon_k(&self, k: i64) -> Result<f64, AsymptoticsError> {
        let f = self.pair_frequency(k)?;
        let kf = k as f64;
        let m = self.system.dim() as f64;
        let b = self.table.row_max(f) + self.table.row_max(-f);
        Ok(2.0
            * m
            * self.constants.c3
            * kf.powi(self.order as i32 - 2)
            * (b + kf.ln() / kf)
            * self.system.norm_v)
    }

    pub fn first_order_disks(&self, k: i64) -> Result<DiskSet, AsymptoticsError> {
        let radius = self.epsilon_k(k)?;
        let centers: Vec<Complex64> = self
            .system
            .mu
            .iter()
            .map(|&mu| mu_kj(mu, self.order, k, self.bc))
            .collect();
        let mut min_dist = f64::INFINITY;
        for i in 0..centers.len() {
            for j in i + 1..centers.len() {
                min_dist = min_dist.min((centers[i] - centers[j]).norm());
            }
        }
        let gap_bound = self.system.gap_a * self.bc.omega(k).norm().powi(self.order as i32 - 2);
        Ok(DiskSet {
            k,
            centers,
            radius,
            min_center_distance: min_dist,
            gap_bound,
            disjoint: min_dist > 2.0 * radius,
        })
    }

    pub fn refined_pair(&self, k: i64, j: usize) -> Result<PairPrediction, AsymptoticsError> {
        let f = self.pair_frequency(k)?;
        let eps_k = self.epsilon_k(k)?;
        let b_plus = self.table.b(j, j, f);
        let b_minus = self.table.b(j, j, -f);
        let row_plus = self.table.row_max(f);
        let row_minus = self.table.row_max(-f);
        let vanishing = |b: Complex64, row: f64| row == 0.0 || b.norm() <= DEGENERACY_REL_TOL * row;
        if vanishing(b_plus, row_plus) || vanishing(b_minus, row_minus) {
            return Err(AsymptoticsError::DegeneratePair {
                k,
                j,
                frequency: f,
                b_plus: b_plus.norm(),
                b_minus: b_minus.norm(),
            });
        }

        let n = self.order;
        let q = (b_plus * b_minus).sqrt();
        let ratio = b_plus.norm() / b_minus.norm();
        let gamma = ratio.sqrt().max(ratio.recip().sqrt());
        let kf = k as f64;
        let d_k = (row_plus * row_minus).max(log_factor(k) / kf);
        let omega = self.bc.omega(k);
        let scale = ipow(omega, n - 2);
        let mu_center = ipow(omega, n) + self.system.mu[j] * scale;
        let alpha_plus = q / b_plus;
        let alpha_minus = -alpha_plus;
        let u = 1.0 / (1.0 + alpha_plus.norm_sqr()).sqrt();
        let u = Complex64::new(u, 0.0);
        Ok(PairPrediction {
            k,
            j,
            bc: self.bc,
            frequency: f,
            scale,
            mu_center,
            eps_k,
            b_plus,
            b_minus,
            q,
            gamma,
            d_k,
            h_plus: mu_center + scale * q,
            h_minus: mu_center - scale * q,
            refined_radius: self.constants.c4 * kf.powi(n as i32 - 2) * gamma * d_k,
            alpha_plus,
            alpha_minus,
            coeff_plus: [u, alpha_plus * u],
            coeff_minus: [u, alpha_minus * u],
        })
    }

    /// One entry per `(k, j)` for `k` in `k_min..=k_max`, ordered by `k` then `j`.
    pub fn predicted_spectrum(&self, k_min: i64, k_max: i64) -> Vec<SweepEntry> {
        let mut out = Vec::new();
        for k in k_min..=k_max {
            for j in 0..self.system.dim() {
                let outcome = match self.refined_pair(k, j) {
                    Ok(p) => Outcome::Predicted(Box::new(p)),
                    Err(e) => Outcome::Degenerate {
                        reason: e.to_string(),
                    },
                };
                out.push(SweepEntry { k, j, outcome });
            }
        }
        out
    }
}

/// Smallest `c4` for which every `(k, j, branch, lambda)` lies in its refined
/// disk: `max |lambda - h| / (k^{n-2} gamma d_k)`.
pub fn suggest_c4<'p>(
    order: usize,
    matched: impl IntoIterator<Item = (&'p PairPrediction, Branch, Complex64)>,
) -> Option<f64> {
    matched
        .into_iter()
        .map(|(p, b, lambda)| (lambda - p.h(b)).norm() / (p.k_power(order) * p.gamma * p.d_k))
        .reduce(f64::max)
}
