//! Preset problems covering both basis outcomes, both boundary conditions,
//! the constant-coefficient case and a finitely supported coefficient.
//!
//! Expected verdicts are written down from the tail laws alone.

use serde::Serialize;
use thiserror::Error;

use crate::diagnostics::{Dominance, RieszVerdict};
use crate::linalg::{diag_real, real_matrix, scaled_identity};
use crate::model::{BoundaryCondition, FourierMatrixSeries, OperatorSpec, PowerTail};
use crate::{CMatrix, Complex64};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("unknown scenario '{name}'; known: {}", NAMES.join(", "))]
pub struct UnknownScenario {
    pub name: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Expected {
    pub dominance: Dominance,
    pub riesz: RieszVerdict,
    /// A `k` from which counts are expected to be clean at the default
    /// constants, when known.
    pub onset_hint: Option<i64>,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: &'static str,
    pub spec: OperatorSpec,
    pub expected: Expected,
    pub notes: &'static str,
}

pub const NAMES: [&str; 6] = [
    "hill-symmetric",
    "hill-asymmetric",
    "matrix-n4",
    "constant-P2",
    "antiperiodic-hill",
    "trigpoly",
];

fn scalar(x: f64) -> CMatrix {
    real_matrix(&[&[x]])
}

/// `b_r = sqrt(2) |r|^{-1/2}`, so `b_{+-2k} = k^{-1/2}`.
fn symmetric_hill_tail() -> PowerTail {
    PowerTail::symmetric(0.5, scalar(2f64.sqrt()))
}

fn hill(bc: BoundaryCondition, tail: PowerTail) -> OperatorSpec {
    OperatorSpec::new(2, 1, bc).with_coefficient(2, FourierMatrixSeries::zero(1).with_tail(tail))
}

pub fn preset(name: &str) -> Result<Scenario, UnknownScenario> {
    let basis = Expected {
        dominance: Dominance::Holds,
        riesz: RieszVerdict::Basis,
        onset_hint: Some(8),
    };
    let scenario = match name {
        "hill-symmetric" => Scenario {
            name: "hill-symmetric",
            spec: hill(BoundaryCondition::Periodic, symmetric_hill_tail()),
            expected: basis,
            notes: "scalar Hill operator with b_{+-2k} = k^{-1/2}",
        },
        "hill-asymmetric" => Scenario {
            name: "hill-asymmetric",
            // b_{2k} = k^{-1/2}, b_{-2k} = 2^{3/4} (2k)^{-3/4} = k^{-3/4}
            spec: hill(
                BoundaryCondition::Periodic,
                PowerTail {
                    decay: 0.5,
                    decay_neg: Some(0.75),
                    amp_pos: scalar(2f64.sqrt()),
                    amp_neg: scalar(2f64.powf(0.75)),
                    alternating: false,
                    start: None,
                },
            ),
            expected: Expected {
                dominance: Dominance::Holds,
                riesz: RieszVerdict::NoBasis,
                onset_hint: Some(8),
            },
            notes: "scalar Hill operator with b_{2k} = k^{-1/2}, b_{-2k} = k^{-3/4}",
        },
        "matrix-n4" => {
            let c = real_matrix(&[&[1.0, 0.5], &[0.0, 2.0]]);
            let amp = 0.05 * 2f64.sqrt();
            let p3 = real_matrix(&[&[0.1, 0.05], &[0.0, -0.1]]);
            Scenario {
                name: "matrix-n4",
                spec: OperatorSpec::new(4, 2, BoundaryCondition::Periodic)
                    .with_coefficient(
                        2,
                        FourierMatrixSeries::constant(c).with_tail(PowerTail::symmetric(
                            0.5,
                            scaled_identity(2, Complex64::new(amp, 0.0)),
                        )),
                    )
                    .with_coefficient(
                        3,
                        FourierMatrixSeries::zero(2)
                            .with_term(1, p3.clone())
                            .with_term(-1, p3.transpose()),
                    )
                    .with_coefficient(4, FourierMatrixSeries::constant(diag_real(&[0.5, 0.25]))),
                expected: basis,
                notes:
                    "fourth order, m = 2, non-normal C, symmetric tail b_{j,j,+-2k} = 0.05 k^{-1/2}",
            }
        }
        "constant-P2" => Scenario {
            name: "constant-P2",
            spec: OperatorSpec::new(4, 2, BoundaryCondition::Periodic).with_coefficient(
                2,
                FourierMatrixSeries::constant(real_matrix(&[&[1.0, 1.0], &[0.0, 2.0]])),
            ),
            expected: Expected {
                dominance: Dominance::Fails,
                riesz: RieszVerdict::Inconclusive,
                onset_hint: None,
            },
            notes: "P_2 = C: every pair is degenerate and the spectrum is explicit",
        },
        "antiperiodic-hill" => Scenario {
            name: "antiperiodic-hill",
            spec: hill(BoundaryCondition::Antiperiodic, symmetric_hill_tail()),
            expected: basis,
            notes:
                "hill-symmetric under antiperiodic conditions; pairs couple through b_{+-(2k+1)}",
        },
        "trigpoly" => Scenario {
            name: "trigpoly",
            spec: OperatorSpec::new(2, 1, BoundaryCondition::Periodic).with_coefficient(
                2,
                FourierMatrixSeries::constant(scalar(0.5))
                    .with_term(2, scalar(1.0))
                    .with_term(-2, scalar(1.0))
                    .with_term(3, scalar(0.5))
                    .with_term(-3, scalar(0.5)),
            ),
            expected: Expected {
                dominance: Dominance::Fails,
                riesz: RieszVerdict::Inconclusive,
                onset_hint: None,
            },
            notes: "trigonometric polynomial: diagonal coefficients vanish beyond frequency 3",
        },
        _ => {
            return Err(UnknownScenario {
                name: name.to_string(),
            })
        }
    };
    Ok(scenario)
}

pub fn all() -> Vec<Scenario> {
    NAMES
        .iter()
        .map(|n| preset(n).expect("every listed name is a preset"))
        .collect()
}
