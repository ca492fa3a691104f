//! Projected Fourier coefficients `b_{s,q,p} = <P^_2(p) v_q, w_s>` of the
//! leading coefficient and their row maxima `b_p = max_{s,q} |b_{s,q,p}|`.

use serde::Serialize;

use crate::linalg::inner;
use crate::model::OperatorSpec;
use crate::unperturbed::{compute_c, BiorthogonalSystem};
use crate::{CMatrix, Complex64};

/// Tail law of `P_2` pushed through the biorthogonal projection: the scalar
/// `b_{s,q}(x)` coefficients decay like `amp[s][q] |r|^{-s_sign}` for
/// `|r| >= start`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedTail {
    pub decay_pos: f64,
    pub decay_neg: f64,
    pub amp_pos: CMatrix,
    pub amp_neg: CMatrix,
    pub alternating: bool,
    pub start: i64,
}

#[derive(Debug, Clone)]
pub struct ProjectionTable {
    p_max: i64,
    dim: usize,
    /// `entries[p + p_max][(s, q)] = b_{s,q,p}` (0-based `s`, `q`).
    entries: Vec<CMatrix>,
    row_max: Vec<f64>,
    tail: Option<ProjectedTail>,
}

/// One CSV record of the projection export (1-based `s`, `q`).
#[derive(Debug, Clone, Serialize)]
pub struct ProjectionRow {
    pub s: usize,
    pub q: usize,
    pub p: i64,
    pub re: f64,
    pub im: f64,
    pub abs: f64,
}

/// `W^H A V`, i.e. `[(s, q)] -> <A v_q, w_s>`.
pub fn project(a: &CMatrix, system: &BiorthogonalSystem) -> CMatrix {
    let m = system.dim();
    CMatrix::from_fn(m, m, |s, q| inner(&(a * &system.v[q]), &system.w[s]))
}

impl ProjectionTable {
    /// Table over the frequency window `[-p_max, p_max]`.
    pub fn build(spec: &OperatorSpec, system: &BiorthogonalSystem, p_max: i64) -> Self {
        let p_max = p_max.max(1);
        let p2 = spec.p2();
        let entries: Vec<CMatrix> = (-p_max..=p_max)
            .map(|p| project(&p2.coefficient(p), system))
            .collect();
        let row_max = entries
            .iter()
            .map(|b| b.iter().map(|z| z.norm()).fold(0.0, f64::max))
            .collect();
        let tail = p2.tail().map(|t| ProjectedTail {
            decay_pos: t.decay_pos(),
            decay_neg: t.decay_neg(),
            amp_pos: project(&t.amp_pos, system),
            amp_neg: project(&t.amp_neg, system),
            alternating: t.alternating,
            start: p2.tail_start().unwrap_or(1),
        });
        ProjectionTable {
            p_max,
            dim: spec.dim,
            entries,
            row_max,
            tail,
        }
    }

    pub fn p_max(&self) -> i64 {
        self.p_max
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn contains(&self, p: i64) -> bool {
        p.abs() <= self.p_max
    }

    pub fn tail(&self) -> Option<&ProjectedTail> {
        self.tail.as_ref()
    }

    /// The `m x m` block `[(s, q)] = b_{s,q,p}`, or `None` outside the window.
    pub fn matrix(&self, p: i64) -> Option<&CMatrix> {
        if self.contains(p) {
            Some(&self.entries[(p + self.p_max) as usize])
        } else {
            None
        }
    }

    /// `b_{s,q,p}` with 0-based `s`, `q`. Panics outside the window.
    pub fn b(&self, s: usize, q: usize, p: i64) -> Complex64 {
        self.matrix(p)
            .unwrap_or_else(|| panic!("frequency {p} outside projection window +-{}", self.p_max))
            [(s, q)]
    }

    /// `b_p`. Panics outside the window.
    pub fn row_max(&self, p: i64) -> f64 {
        assert!(self.contains(p), "frequency {p} outside projection window");
        self.row_max[(p + self.p_max) as usize]
    }

    pub fn rows(&self) -> Vec<ProjectionRow> {
        let mut out = Vec::with_capacity(self.entries.len() * self.dim * self.dim);
        for s in 0..self.dim {
            for q in 0..self.dim {
                for p in -self.p_max..=self.p_max {
                    let b = self.b(s, q, p);
                    out.push(ProjectionRow {
                        s: s + 1,
                        q: q + 1,
                        p,
                        re: b.re,
                        im: b.im,
                        abs: b.norm(),
                    });
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, Serialize, PartialEq)]
pub struct ResonantIdentityResiduals {
    pub k: i64,
    /// `max_{q,s} |((P_2 - C) Phi_{k,q}, Phi~_{k,s})|`
    pub first: f64,
    /// `max_{q,s} |((P_2 - C) Phi_{partner,q}, Phi~_{k,s}) - b_{s,q,f}|`
    pub second: f64,
}

/// `((P_2 - C) Phi_{col,q}, Phi~_{row,s})` evaluated by multiplying in
/// coefficient space: the product has coefficient `P^_2(row - col) - delta C`
/// at index `row`.
fn multiplied_element(
    spec: &OperatorSpec,
    c: &CMatrix,
    system: &BiorthogonalSystem,
    row: i64,
    col: i64,
    s: usize,
    q: usize,
) -> Complex64 {
    let mut a = spec.p2().coefficient(row - col);
    if row == col {
        a -= c;
    }
    inner(&(a * &system.v[q]), &system.w[s])
}

/// Checks the two structural identities of the resonant pair `(k, partner)`
/// against the table.
pub fn verify_resonant_identities(
    spec: &OperatorSpec,
    system: &BiorthogonalSystem,
    table: &ProjectionTable,
    k: i64,
) -> ResonantIdentityResiduals {
    let c = compute_c(spec);
    let partner = spec.bc.partner(k);
    let f = spec.bc.resonant_frequency(k);
    let m = spec.dim;
    let mut first: f64 = 0.0;
    let mut second: f64 = 0.0;
    for s in 0..m {
        for q in 0..m {
            first = first.max(multiplied_element(spec, &c, system, k, k, s, q).norm());
            let lhs = multiplied_element(spec, &c, system, k, partner, s, q);
            second = second.max((lhs - table.b(s, q, f)).norm());
        }
    }
    ResonantIdentityResiduals { k, first, second }
}
