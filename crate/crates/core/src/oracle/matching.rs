//! Assignment of computed eigenpairs to the predicted disks and extraction of
//! the pair coordinates `u = <c_k, w_j>`, `v = <c_partner, w_j>`.

use serde::Serialize;

use super::eigen::EigenDecomposition;
use super::galerkin::GalerkinMatrix;
use crate::asymptotics::{Branch, DiskSet, PairPrediction, SweepEntry};
use crate::linalg::inner;
use crate::model::OperatorSpec;
use crate::ser::one_based;
use crate::unperturbed::{compute_c, ipow, BiorthogonalSystem};
use crate::{CMatrix, CVector, Complex64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Assignment {
    pub k: i64,
    #[serde(serialize_with = "one_based")]
    pub j: usize,
    /// `None` when no refined prediction exists or the eigenvalue lies in
    /// both refined disks.
    pub branch: Option<Branch>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchStatus {
    Assigned,
    /// Inside both refined disks of its pair; left unresolved.
    Ambiguous,
    Unassigned,
}

/// Coordinates of an eigenvector in the unperturbed biorthogonal frame.
#[derive(Debug, Clone, Serialize)]
pub struct Coordinates {
    pub u: Complex64,
    pub v: Complex64,
    /// `<c_k, w_q>` for every `q`.
    pub at_k: Vec<Complex64>,
    /// `<c_partner, w_q>` for every `q`.
    pub at_partner: Vec<Complex64>,
    /// `sum_{p not in {k, partner}} sum_s |<c_p, w_s>|^2`.
    pub tail_energy: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatchedEigenpair {
    /// Position in the sorted eigen decomposition.
    pub index: usize,
    pub lambda: Complex64,
    pub status: MatchStatus,
    pub assignment: Option<Assignment>,
    /// `lambda / omega(k)^{n-2}` for assigned pairs.
    pub scaled: Option<Complex64>,
    pub coordinates: Option<Coordinates>,
    pub dominant_frequency: i64,
    pub residual: f64,
    /// Unit coefficient vector, rows ordered as in the Galerkin matrix.
    #[serde(skip)]
    pub coeffs: CVector,
}

#[derive(Debug, Clone, Serialize)]
pub struct DiskCount {
    pub k: i64,
    #[serde(serialize_with = "one_based")]
    pub j: usize,
    pub center: Complex64,
    pub radius: f64,
    pub first_order: usize,
    pub refined_plus: Option<usize>,
    pub refined_minus: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MatchReport {
    pub truncation: i64,
    pub edge_buffer: i64,
    pub eigenpairs: Vec<MatchedEigenpair>,
    /// Eigenvalues whose dominant frequency is within the edge buffer.
    pub edge_excluded: Vec<Complex64>,
    pub disks: Vec<DiskCount>,
}

impl MatchReport {
    pub fn assigned(&self) -> impl Iterator<Item = &MatchedEigenpair> {
        self.eigenpairs
            .iter()
            .filter(|e| e.status == MatchStatus::Assigned)
    }

    pub fn ambiguous(&self) -> impl Iterator<Item = &MatchedEigenpair> {
        self.eigenpairs
            .iter()
            .filter(|e| e.status == MatchStatus::Ambiguous)
    }

    /// The unique eigenpair assigned to `(k, j, branch)`, if exactly one is.
    pub fn find(&self, k: i64, j: usize, branch: Branch) -> Option<&MatchedEigenpair> {
        let mut hits = self.assigned().filter(|e| {
            e.assignment
                .is_some_and(|a| a.k == k && a.j == j && a.branch == Some(branch))
        });
        let first = hits.next()?;
        hits.next().is_none().then_some(first)
    }

    pub fn disk(&self, k: i64, j: usize) -> Option<&DiskCount> {
        self.disks.iter().find(|d| d.k == k && d.j == j)
    }
}

fn block(coeffs: &CVector, truncation: i64, m: usize, p: i64) -> CVector {
    if p.abs() > truncation {
        return CVector::zeros(m);
    }
    let start = (p + truncation) as usize * m;
    coeffs.rows(start, m).into_owned()
}

fn dominant_frequency(coeffs: &CVector, truncation: i64, m: usize) -> i64 {
    let mut best = (-1.0, 0);
    for p in -truncation..=truncation {
        let e = block(coeffs, truncation, m, p).norm_squared();
        if e > best.0 {
            best = (e, p);
        }
    }
    best.1
}

/// `u`, `v`, cross terms and tail energy of a coefficient vector laid out as
/// in `matrix`.
pub fn extract_coordinates(
    matrix: &GalerkinMatrix,
    coeffs: &CVector,
    k: i64,
    j: usize,
    system: &BiorthogonalSystem,
) -> Coordinates {
    let m = matrix.dim;
    let partner = matrix.bc.partner(k);
    let at_k = system.coordinates(&block(coeffs, matrix.truncation, m, k));
    let at_partner = system.coordinates(&block(coeffs, matrix.truncation, m, partner));
    let mut tail_energy = 0.0;
    for p in -matrix.truncation..=matrix.truncation {
        if p == k || p == partner {
            continue;
        }
        let c = block(coeffs, matrix.truncation, m, p);
        tail_energy += system
            .coordinates(&c)
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>();
    }
    Coordinates {
        u: at_k[j],
        v: at_partner[j],
        at_k,
        at_partner,
        tail_energy,
    }
}

/// `sum_p <c1_p, c2_p>`, the `L^2` inner product in coefficient form.
pub fn numerical_overlap(c1: &CVector, c2: &CVector) -> Complex64 {
    inner(c1, c2)
}

/// Evaluates the coefficient identity
/// `(lambda - mu_{p,s}) <c_p, w_s> = sum_nu sum_p' omega(p')^{n-nu}
/// <[P^_nu(p-p') - delta C] c_p', w_s>` for eigenpairs of one matrix.
pub struct IdentityChecker<'a> {
    matrix: &'a GalerkinMatrix,
    system: &'a BiorthogonalSystem,
    /// `blocks[nu - 2][p - p' + 2K]`, with `C` removed from the `nu = 2`,
    /// offset-0 block.
    blocks: Vec<Vec<CMatrix>>,
    /// `omega(p')^e` for `e = 0..=n`, indexed by `p' + K`.
    powers: Vec<Vec<Complex64>>,
}

impl<'a> IdentityChecker<'a> {
    pub fn new(
        spec: &OperatorSpec,
        matrix: &'a GalerkinMatrix,
        system: &'a BiorthogonalSystem,
    ) -> Self {
        let k = matrix.truncation;
        let c = compute_c(spec);
        let blocks = (2..=spec.order)
            .map(|nu| {
                (-2 * k..=2 * k)
                    .map(|r| {
                        let mut a = spec.coefficient(nu).coefficient(r);
                        if nu == 2 && r == 0 {
                            a -= &c;
                        }
                        a
                    })
                    .collect()
            })
            .collect();
        let powers = (-k..=k)
            .map(|p| {
                let w = spec.bc.omega(p);
                (0..=spec.order).map(|e| ipow(w, e)).collect()
            })
            .collect();
        IdentityChecker {
            matrix,
            system,
            blocks,
            powers,
        }
    }

    /// Left side minus right side at `(p, s)`.
    pub fn residual(&self, lambda: Complex64, coeffs: &CVector, p: i64, s: usize) -> Complex64 {
        let m = self.matrix.dim;
        let n = self.matrix.order;
        let big_k = self.matrix.truncation;
        let omega_p = &self.powers[(p + big_k) as usize];
        let mu_ps = omega_p[n] + self.system.mu[s] * omega_p[n - 2];
        let lhs = (lambda - mu_ps) * inner(&block(coeffs, big_k, m, p), &self.system.w[s]);

        let mut acc = CVector::zeros(m);
        for pc in -big_k..=big_k {
            let cpc = coeffs.rows((pc + big_k) as usize * m, m);
            let powers = &self.powers[(pc + big_k) as usize];
            let offset = (p - pc + 2 * big_k) as usize;
            for (i, nu) in (2..=n).enumerate() {
                let a = &self.blocks[i][offset];
                let w = powers[n - nu];
                for r in 0..m {
                    let mut t = Complex64::new(0.0, 0.0);
                    for q in 0..m {
                        t += a[(r, q)] * cpc[q];
                    }
                    acc[r] += w * t;
                }
            }
        }
        lhs - inner(&acc, &self.system.w[s])
    }

    /// Largest `|residual|` over `|p| <= p_limit` and all `s`.
    pub fn max_residual(&self, lambda: Complex64, coeffs: &CVector, p_limit: i64) -> f64 {
        let mut worst: f64 = 0.0;
        for p in -p_limit..=p_limit {
            for s in 0..self.matrix.dim {
                worst = worst.max(self.residual(lambda, coeffs, p, s).norm());
            }
        }
        worst
    }
}

/// Single-point form of [`IdentityChecker::residual`].
pub fn residual_coefficient_identity(
    spec: &OperatorSpec,
    matrix: &GalerkinMatrix,
    system: &BiorthogonalSystem,
    lambda: Complex64,
    coeffs: &CVector,
    p: i64,
    s: usize,
) -> Complex64 {
    IdentityChecker::new(spec, matrix, system).residual(lambda, coeffs, p, s)
}

/// Assigns every non-edge eigenvalue to the first-order disk with the nearest
/// centre among those containing it, then to a branch by the nearest refined
/// centre. Counts are taken over all non-edge eigenvalues.
pub fn match_spectrum(
    matrix: &GalerkinMatrix,
    eig: &EigenDecomposition,
    sweep: &[SweepEntry],
    disks: &[DiskSet],
    system: &BiorthogonalSystem,
    edge_buffer: i64,
) -> MatchReport {
    let m = matrix.dim;
    let limit = matrix.truncation - edge_buffer;
    let mut eigenpairs = Vec::new();
    let mut edge_excluded = Vec::new();

    let prediction = |k: i64, j: usize| -> Option<&PairPrediction> {
        sweep
            .iter()
            .find(|e| e.k == k && e.j == j)
            .and_then(|e| e.prediction())
    };

    for (index, &lambda) in eig.values.iter().enumerate() {
        let coeffs = eig.vector(index);
        let dominant = dominant_frequency(&coeffs, matrix.truncation, m);
        if dominant.abs() > limit {
            edge_excluded.push(lambda);
            continue;
        }
        let mut best: Option<(f64, i64, usize)> = None;
        for d in disks {
            for (j, &c) in d.centers.iter().enumerate() {
                let dist = (lambda - c).norm();
                if dist < d.radius && best.is_none_or(|b| dist < b.0) {
                    best = Some((dist, d.k, j));
                }
            }
        }
        let (status, assignment, scaled, coordinates) = match best {
            None => (MatchStatus::Unassigned, None, None, None),
            Some((_, k, j)) => {
                let coords = extract_coordinates(matrix, &coeffs, k, j, system);
                let scaled = ipow(matrix.bc.omega(k), matrix.order - 2);
                let (status, branch) = match prediction(k, j) {
                    None => (MatchStatus::Assigned, None),
                    Some(p) => {
                        let dp = (lambda - p.h_plus).norm();
                        let dm = (lambda - p.h_minus).norm();
                        if dp < p.refined_radius && dm < p.refined_radius {
                            (MatchStatus::Ambiguous, None)
                        } else if dp <= dm {
                            (MatchStatus::Assigned, Some(Branch::Plus))
                        } else {
                            (MatchStatus::Assigned, Some(Branch::Minus))
                        }
                    }
                };
                (
                    status,
                    Some(Assignment { k, j, branch }),
                    Some(lambda / scaled),
                    Some(coords),
                )
            }
        };
        eigenpairs.push(MatchedEigenpair {
            index,
            lambda,
            status,
            assignment,
            scaled,
            coordinates,
            dominant_frequency: dominant,
            residual: eig.residuals[index],
            coeffs,
        });
    }

    let mut counts = Vec::new();
    for d in disks {
        for (j, &center) in d.centers.iter().enumerate() {
            let inside = |c: Complex64, r: f64| {
                eigenpairs
                    .iter()
                    .filter(|e| (e.lambda - c).norm() < r)
                    .count()
            };
            let refined = prediction(d.k, j);
            counts.push(DiskCount {
                k: d.k,
                j,
                center,
                radius: d.radius,
                first_order: inside(center, d.radius),
                refined_plus: refined.map(|p| inside(p.h_plus, p.refined_radius)),
                refined_minus: refined.map(|p| inside(p.h_minus, p.refined_radius)),
            });
        }
    }

    MatchReport {
        truncation: matrix.truncation,
        edge_buffer,
        eigenpairs,
        edge_excluded,
        disks: counts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::{DiskConstants, Predictor};
    use crate::linalg::real_matrix;
    use crate::model::{BoundaryCondition, FourierMatrixSeries, OperatorSpec, PowerTail};
    use crate::oracle::eigen::{eig_dense, SchurSolver};
    use crate::oracle::galerkin::{assemble, DEFAULT_SIZE_CAP};
    use crate::projection::ProjectionTable;
    use crate::unperturbed::{eigensystem, DEFAULT_GAP_TOL};

    #[test]
    fn unperturbed_coordinates() {
        let spec = OperatorSpec::new(4, 2, BoundaryCondition::Periodic).with_coefficient(
            2,
            FourierMatrixSeries::constant(real_matrix(&[&[1.0, 1.0], &[0.0, 2.0]])),
        );
        let sys = eigensystem(&compute_c(&spec), DEFAULT_GAP_TOL).unwrap();
        let g = assemble(&spec, 6, DEFAULT_SIZE_CAP).unwrap();
        let mut c = CVector::zeros(g.size());
        for q in 0..2 {
            c[g.index(3, q)] = sys.v[1][q];
        }
        let coords = extract_coordinates(&g, &c, 3, 1, &sys);
        assert!((coords.u - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert_eq!(coords.v, Complex64::new(0.0, 0.0));
        assert_eq!(coords.tail_energy, 0.0);
        assert!(coords.at_k[0].norm() < 1e-14);
    }

    #[test]
    fn overlap_basics() {
        let a = CVector::from_vec(vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)]);
        let b = CVector::from_vec(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
        assert!((numerical_overlap(&a, &a) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let c = CVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        assert_eq!(numerical_overlap(&c, &b), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn empty_window_leaves_everything_unassigned() {
        let spec = OperatorSpec::new(2, 1, BoundaryCondition::Periodic);
        let sys = eigensystem(&compute_c(&spec), DEFAULT_GAP_TOL).unwrap();
        let g = assemble(&spec, 6, DEFAULT_SIZE_CAP).unwrap();
        let eig = eig_dense(&g.entries, &SchurSolver::default()).unwrap();
        let r = match_spectrum(&g, &eig, &[], &[], &sys, 2);
        assert_eq!(r.eigenpairs.len() + r.edge_excluded.len(), 13);
        assert!(r
            .eigenpairs
            .iter()
            .all(|e| e.status == MatchStatus::Unassigned));
        assert_eq!(r.edge_excluded.len(), 4);
    }

    #[test]
    fn hill_pairs_match_and_satisfy_identity() {
        let spec = OperatorSpec::new(2, 1, BoundaryCondition::Periodic).with_coefficient(
            2,
            FourierMatrixSeries::zero(1)
                .with_tail(PowerTail::symmetric(0.5, real_matrix(&[&[1.0]]))),
        );
        let sys = eigensystem(&compute_c(&spec), DEFAULT_GAP_TOL).unwrap();
        let table = ProjectionTable::build(&spec, &sys, 64);
        let pred = Predictor::new(&table, &sys, 2, spec.bc, DiskConstants::default());
        let sweep = pred.predicted_spectrum(6, 8);
        let disks: Vec<_> = (6..=8)
            .map(|k| pred.first_order_disks(k).unwrap())
            .collect();
        let g = assemble(&spec, 32, DEFAULT_SIZE_CAP).unwrap();
        let eig = eig_dense(&g.entries, &SchurSolver::default()).unwrap();
        let r = match_spectrum(&g, &eig, &sweep, &disks, &sys, 4);
        for k in 6..=8 {
            let d = r.disk(k, 0).unwrap();
            assert_eq!(d.first_order, 2, "k={k}");
            for b in [Branch::Plus, Branch::Minus] {
                let e = r.find(k, 0, b).unwrap();
                for p in [-k, 0, k, 10] {
                    let res =
                        residual_coefficient_identity(&spec, &g, &sys, e.lambda, &e.coeffs, p, 0);
                    assert!(res.norm() <= 10.0 * 1e-10 * eig.matrix_norm, "{res}");
                }
            }
        }
    }
}
