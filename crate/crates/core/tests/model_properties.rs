mod common;

use std::f64::consts::PI;

use common::{cmatrix, finite_series, finite_spec};
use proptest::prelude::*;
use rieszspec::linalg::real_matrix;
use rieszspec::model::{BoundaryCondition, FourierMatrixSeries, OperatorSpec, PowerTail};
use rieszspec::{CMatrix, Complex64};

/// Trapezoid rule on `nodes` equispaced points; exact for trigonometric
/// polynomials of degree below `nodes`.
fn quadrature_coefficient(
    series: &FourierMatrixSeries,
    r: i64,
    nodes: usize,
    range: i64,
) -> CMatrix {
    let m = series.dim();
    let mut acc = CMatrix::zeros(m, m);
    for i in 0..nodes {
        let x = i as f64 / nodes as f64;
        let phase = Complex64::from_polar(1.0, -2.0 * PI * r as f64 * x);
        acc += series.evaluate(x, range) * phase;
    }
    acc / Complex64::new(nodes as f64, 0.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn synthesis_and_quadrature_agree(series in finite_series(2, 5, 1.0)) {
        let range = series.explicit_range();
        let nodes = (4 * range.max(1) + 1) as usize;
        for r in -range..=range {
            let q = quadrature_coefficient(&series, r, nodes, range);
            let diff = (q - series.coefficient(r)).norm();
            prop_assert!(diff <= 1e-10, "r={} diff={}", r, diff);
        }
    }

    #[test]
    fn hermitian_symmetric_data_evaluates_hermitian(
        half in prop::collection::btree_map(1i64..6, cmatrix(2, 1.0), 1..4),
        mean in cmatrix(2, 1.0),
        x in 0.0f64..1.0,
    ) {
        let mut series = FourierMatrixSeries::zero(2).with_term(0, &mean + mean.adjoint());
        for (r, c) in &half {
            series = series.with_term(*r, c.clone()).with_term(-r, c.adjoint());
        }
        let value = series.evaluate(x, 6);
        prop_assert!((&value - value.adjoint()).norm() <= 1e-12 * (1.0 + value.norm()));
    }

    #[test]
    fn json_round_trip(spec in finite_spec(2, 4)) {
        let text = spec.to_json();
        let back = OperatorSpec::from_json(&text).unwrap();
        prop_assert_eq!(back, spec);
    }
}

#[test]
fn tail_round_trip_and_lookup() {
    let tail = PowerTail {
        decay: 0.5,
        decay_neg: Some(0.75),
        amp_pos: real_matrix(&[&[1.0]]),
        amp_neg: real_matrix(&[&[2.0]]),
        alternating: true,
        start: Some(4),
    };
    let spec = OperatorSpec::new(2, 1, BoundaryCondition::Antiperiodic).with_coefficient(
        2,
        FourierMatrixSeries::zero(1)
            .with_term(1, real_matrix(&[&[3.0]]))
            .with_tail(tail),
    );
    let back = OperatorSpec::from_json(&spec.to_json()).unwrap();
    assert_eq!(back, spec);
    let p2 = back.p2();
    assert_eq!(p2.coefficient(2)[(0, 0)].re, 0.0);
    assert_eq!(p2.coefficient(3)[(0, 0)].re, 0.0);
    assert!((p2.coefficient(4)[(0, 0)].re - 0.5).abs() < 1e-15);
    assert!((p2.coefficient(-5)[(0, 0)].re + 2.0 * 5f64.powf(-0.75)).abs() < 1e-15);
}

#[test]
fn invalid_documents_name_the_field() {
    let bad_shape = r#"{"n": 2, "m": 2, "bc": "periodic",
        "coefficients": {"P2": {"explicit": {"0": [[[1, 0]]]}}}}"#;
    let err = OperatorSpec::from_json(bad_shape).unwrap_err().to_string();
    assert!(err.contains("P2.explicit[0]"), "{err}");

    let odd = r#"{"n": 3, "m": 1, "bc": "periodic"}"#;
    let err = OperatorSpec::from_json(odd).unwrap_err().to_string();
    assert!(err.contains("odd"), "{err}");

    let unknown = r#"{"n": 2, "m": 1, "bc": "periodic", "coefficients": {"P7": {}}}"#;
    assert!(OperatorSpec::from_json(unknown)
        .unwrap_err()
        .to_string()
        .contains("P7"));

    let bc = r#"{"n": 2, "m": 1, "bc": "dirichlet"}"#;
    assert!(OperatorSpec::from_json(bc).is_err());
}
