//! The constant-coefficient comparison problem: the mean matrix `C`, its
//! biorthogonal eigensystem, the unperturbed eigenvalues and the frame bounds
//! of the associated exponential system.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{inner, op_norm};
use crate::model::{BoundaryCondition, OperatorSpec};
use crate::oracle::eigen::{eig_dense, EigenError, SchurSolver};
use crate::ser::finite_or_null;
use crate::{CMatrix, CVector, Complex64};

pub const DEFAULT_GAP_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UnperturbedError {
    #[error("eigenvalues of C are not simple: min gap {gap:e} below {threshold:e}")]
    DegenerateSpectrum { gap: f64, threshold: f64 },
    #[error("eigensolve of C failed: {0}")]
    Eigen(#[from] EigenError),
}

/// Eigenvalues `mu_j` of `C`, unit eigenvectors `v_j` and adjoint
/// eigenvectors `w_j` (`C^* w_j = conj(mu_j) w_j`) scaled so `<v_j, w_j> = 1`.
#[derive(Debug, Clone, Serialize)]
pub struct BiorthogonalSystem {
    pub mu: Vec<Complex64>,
    #[serde(skip)]
    pub v: Vec<CVector>,
    #[serde(skip)]
    pub w: Vec<CVector>,
    /// `min_{k != s} |mu_k - mu_s|`; infinite when `m = 1`.
    #[serde(serialize_with = "finite_or_null")]
    pub gap_a: f64,
    pub norm_v: f64,
    pub norm_w: f64,
}

impl BiorthogonalSystem {
    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    /// Matrix with columns `v_j`.
    pub fn v_matrix(&self) -> CMatrix {
        CMatrix::from_columns(&self.v)
    }

    /// Matrix with columns `w_j`.
    pub fn w_matrix(&self) -> CMatrix {
        CMatrix::from_columns(&self.w)
    }

    /// Coordinates `<x, w_q>` of `x` in the basis `{v_q}`.
    pub fn coordinates(&self, x: &CVector) -> Vec<Complex64> {
        self.w.iter().map(|w| inner(x, w)).collect()
    }
}

/// `C = int_0^1 P_2(x) dx`, i.e. the frequency-0 coefficient of `P_2`.
pub fn compute_c(spec: &OperatorSpec) -> CMatrix {
    spec.p2().coefficient(0)
}

/// Biorthogonal eigensystem of `c`, eigenvalues sorted by `(re, im)`.
pub fn eigensystem(c: &CMatrix, gap_tol: f64) -> Result<BiorthogonalSystem, UnperturbedError> {
    let m = c.nrows();
    let solver = SchurSolver::with_tol(1e-10);
    let right = eig_dense(c, &solver)?;
    let scale = op_norm(c).max(1.0);

    let mut gap = f64::INFINITY;
    for i in 0..m {
        for j in i + 1..m {
            gap = gap.min((right.values[i] - right.values[j]).norm());
        }
    }
    let threshold = gap_tol * scale;
    if gap < threshold {
        return Err(UnperturbedError::DegenerateSpectrum { gap, threshold });
    }

    let adjoint = eig_dense(&c.adjoint(), &solver)?;
    let mut v = Vec::with_capacity(m);
    let mut w = Vec::with_capacity(m);
    for j in 0..m {
        let vj = fix_phase(right.vector(j));
        let target = right.values[j].conj();
        let nearest = (0..m)
            .min_by(|&a, &b| {
                (adjoint.values[a] - target)
                    .norm()
                    .total_cmp(&(adjoint.values[b] - target).norm())
            })
            .expect("m >= 1");
        let wj = adjoint.vector(nearest);
        let pairing = inner(&vj, &wj);
        let wj = wj / pairing.conj();
        v.push(vj);
        w.push(wj);
    }
    let v_mat = CMatrix::from_columns(&v);
    let w_mat = CMatrix::from_columns(&w);
    Ok(BiorthogonalSystem {
        mu: right.values,
        gap_a: gap,
        norm_v: op_norm(&v_mat),
        norm_w: op_norm(&w_mat),
        v,
        w,
    })
}

/// Rotates `x` so its largest-modulus entry is real and positive.
fn fix_phase(x: CVector) -> CVector {
    let mut best = 0;
    for i in 1..x.len() {
        if x[i].norm() > x[best].norm() * (1.0 + 1e-12) {
            best = i;
        }
    }
    let pivot = x[best];
    if pivot.norm() == 0.0 {
        return x;
    }
    let rot = pivot.conj() / pivot.norm();
    let y = x * rot;
    let n = y.norm();
    y / Complex64::new(n, 0.0)
}

/// `z^e` by repeated multiplication, exact for pure-imaginary `z` and small `e`.
pub fn ipow(z: Complex64, e: usize) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for _ in 0..e {
        acc *= z;
    }
    acc
}

/// Unperturbed eigenvalue `omega(k)^n + mu_j omega(k)^{n-2}`, with
/// `omega(k) = 2 pi k i` (periodic) or `(2k+1) pi i` (antiperiodic).
pub fn mu_kj(mu_j: Complex64, n: usize, k: i64, bc: BoundaryCondition) -> Complex64 {
    let w = bc.omega(k);
    ipow(w, n) + mu_j * ipow(w, n - 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameBounds {
    /// `sum_{p,q} |<f_p, w_q>|^2`
    pub sum_sq: f64,
    pub norm_sq: f64,
    /// `||V||^{-2} ||f||^2`
    pub lower: f64,
    /// `||W||^2 ||f||^2`
    pub upper: f64,
}

impl FrameBounds {
    pub fn holds(&self, rel_tol: f64) -> bool {
        let slack = rel_tol * self.norm_sq.max(f64::MIN_POSITIVE);
        self.lower <= self.sum_sq + slack && self.sum_sq <= self.upper + slack
    }
}

/// Frame sum of a finitely supported `f` (coefficient `f_p` at frequency `p`)
/// against the adjoint system, with the two-sided bounds.
pub fn frame_defect(system: &BiorthogonalSystem, f: &BTreeMap<i64, CVector>) -> FrameBounds {
    let mut sum_sq = 0.0;
    let mut norm_sq = 0.0;
    for fp in f.values() {
        norm_sq += fp.norm_squared();
        sum_sq += system
            .coordinates(fp)
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>();
    }
    FrameBounds {
        sum_sq,
        norm_sq,
        lower: norm_sq / (system.norm_v * system.norm_v),
        upper: system.norm_w * system.norm_w * norm_sq,
    }
}

/// Expansion `sum_{p,q} <f_p, w_q> v_q e^{i 2 pi p x}` in coefficient form.
pub fn reconstruct(
    system: &BiorthogonalSystem,
    f: &BTreeMap<i64, CVector>,
) -> BTreeMap<i64, CVector> {
    f.iter()
        .map(|(&p, fp)| {
            let mut acc = CVector::zeros(fp.len());
            for (coef, vq) in system.coordinates(fp).into_iter().zip(&system.v) {
                acc += vq * coef;
            }
            (p, acc)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag_real, real_matrix};
    use crate::model::FourierMatrixSeries;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn c_is_frequency_zero_coefficient() {
        let spec = OperatorSpec::new(2, 2, BoundaryCondition::Periodic).with_coefficient(
            2,
            FourierMatrixSeries::zero(2)
                .with_term(0, real_matrix(&[&[1.0, 1.0], &[0.0, 2.0]]))
                .with_term(2, real_matrix(&[&[5.0, 1.0], &[1.0, 5.0]])),
        );
        assert_eq!(compute_c(&spec), real_matrix(&[&[1.0, 1.0], &[0.0, 2.0]]));

        let zero_mean = OperatorSpec::new(2, 1, BoundaryCondition::Periodic).with_coefficient(
            2,
            FourierMatrixSeries::zero(1)
                .with_term(2, real_matrix(&[&[1.0]]))
                .with_term(-2, real_matrix(&[&[1.0]])),
        );
        assert_eq!(compute_c(&zero_mean), real_matrix(&[&[0.0]]));
    }

    #[test]
    fn diagonal_c() {
        let sys = eigensystem(&diag_real(&[2.0, 1.0]), DEFAULT_GAP_TOL).unwrap();
        assert_eq!(sys.mu, vec![c(1.0), c(2.0)]);
        assert!((sys.v[0][1] - c(1.0)).norm() < 1e-14);
        assert!((sys.w[0][1] - c(1.0)).norm() < 1e-14);
        assert!((sys.gap_a - 1.0).abs() < 1e-14);
        assert!((sys.norm_v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn non_normal_c_matches_hand_computation() {
        let cm = real_matrix(&[&[1.0, 1.0], &[0.0, 2.0]]);
        let sys = eigensystem(&cm, DEFAULT_GAP_TOL).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let expect_v = [[1.0, 0.0], [s, s]];
        let expect_w = [[1.0, -1.0], [0.0, 2f64.sqrt()]];
        for j in 0..2 {
            for i in 0..2 {
                assert!((sys.v[j][i] - c(expect_v[j][i])).norm() < 1e-12, "v{j}");
                assert!((sys.w[j][i] - c(expect_w[j][i])).norm() < 1e-12, "w{j}");
            }
            for s_ in 0..2 {
                let expected = if j == s_ { 1.0 } else { 0.0 };
                assert!((inner(&sys.v[j], &sys.w[s_]) - c(expected)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn degenerate_spectrum_is_rejected() {
        let jordan = real_matrix(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(
            eigensystem(&jordan, DEFAULT_GAP_TOL),
            Err(UnperturbedError::DegenerateSpectrum { .. })
        ));
    }

    #[test]
    fn unperturbed_eigenvalues() {
        let p = BoundaryCondition::Periodic;
        let a = BoundaryCondition::Antiperiodic;
        assert!((mu_kj(c(0.0), 2, 1, p) - c(-4.0 * PI * PI)).norm() < 1e-12);
        let want = 16.0 * PI.powi(4) - 8.0 * PI * PI;
        assert!((mu_kj(c(2.0), 4, 1, p) - c(want)).norm() < 1e-9);
        assert!((mu_kj(c(5.0), 2, 0, a) - c(5.0 - PI * PI)).norm() < 1e-12);
        // even n: symmetric in k
        for k in 1..20 {
            assert_eq!(mu_kj(c(1.5), 4, k, p), mu_kj(c(1.5), 4, -k, p));
        }
    }

    #[test]
    fn frame_of_single_element_and_unitary_case() {
        let sys = eigensystem(&real_matrix(&[&[1.0, 1.0], &[0.0, 2.0]]), DEFAULT_GAP_TOL).unwrap();
        let mut f = BTreeMap::new();
        f.insert(0, sys.v[0].clone());
        let fb = frame_defect(&sys, &f);
        // <v_1, w_1> = 1 and <v_1, w_2> = 0
        assert!((fb.sum_sq - 1.0).abs() < 1e-12);
        assert!(fb.holds(1e-12));

        let herm = eigensystem(&real_matrix(&[&[2.0, 1.0], &[1.0, 3.0]]), DEFAULT_GAP_TOL).unwrap();
        let mut g = BTreeMap::new();
        g.insert(
            3,
            CVector::from_vec(vec![c(0.3), Complex64::new(-1.0, 0.5)]),
        );
        g.insert(-1, CVector::from_vec(vec![c(2.0), c(0.1)]));
        let fb = frame_defect(&herm, &g);
        assert!((fb.sum_sq - fb.norm_sq).abs() < 1e-12);
    }
}
