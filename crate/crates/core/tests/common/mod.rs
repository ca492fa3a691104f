#![allow(dead_code)]

use proptest::prelude::*;
use rieszspec::model::{BoundaryCondition, FourierMatrixSeries, OperatorSpec};
use rieszspec::{CMatrix, Complex64};

pub fn complex(scale: f64) -> impl Strategy<Value = Complex64> {
    (-scale..scale, -scale..scale).prop_map(|(re, im)| Complex64::new(re, im))
}

pub fn cmatrix(m: usize, scale: f64) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec(complex(scale), m * m).prop_map(move |v| CMatrix::from_vec(m, m, v))
}

/// Upper-triangular `C` with diagonal entries at least 0.5 apart, so the
/// spectrum is simple and usually non-normal.
pub fn separated_c(m: usize) -> impl Strategy<Value = CMatrix> {
    (cmatrix(m, 1.0), prop::collection::vec(complex(0.2), m)).prop_map(move |(mut a, jitter)| {
        for i in 0..m {
            for j in 0..i {
                a[(i, j)] = Complex64::new(0.0, 0.0);
            }
            a[(i, i)] = Complex64::new(i as f64, 0.0) + jitter[i];
        }
        a
    })
}

/// Finitely supported series with frequencies in `[-range, range]`.
pub fn finite_series(
    m: usize,
    range: i64,
    scale: f64,
) -> impl Strategy<Value = FourierMatrixSeries> {
    prop::collection::btree_map(-range..=range, cmatrix(m, scale), 1..6).prop_map(move |terms| {
        terms
            .into_iter()
            .fold(FourierMatrixSeries::zero(m), |s, (r, c)| s.with_term(r, c))
    })
}

pub fn bc() -> impl Strategy<Value = BoundaryCondition> {
    prop_oneof![
        Just(BoundaryCondition::Periodic),
        Just(BoundaryCondition::Antiperiodic)
    ]
}

/// Spec of order 2 or 4 with finitely supported coefficients.
pub fn finite_spec(m: usize, range: i64) -> impl Strategy<Value = OperatorSpec> {
    (
        prop_oneof![Just(2usize), Just(4usize)],
        bc(),
        prop::collection::vec(finite_series(m, range, 1.0), 3),
    )
        .prop_map(move |(n, bc, series)| {
            let mut spec = OperatorSpec::new(n, m, bc);
            for (nu, s) in (2..=n).zip(series) {
                spec = spec.with_coefficient(nu, s);
            }
            spec
        })
}
