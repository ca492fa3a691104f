//! Dense complex eigensolver.
//!
//! Householder reduction to upper Hessenberg form, complex single-shift QR
//! iteration (Wilkinson shifts, exceptional shifts every 10 stalled sweeps)
//! to Schur form `A = Z T Z^H`, then eigenvectors of `T` by back-substitution.
//! Every returned pair is certified by its residual `||A v - lambda v||`.

use std::cmp::Ordering;

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{abs1, frobenius};
use crate::{CMatrix, CVector, Complex64};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EigenError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error(
        "QR iteration did not converge after {iterations} sweeps: {converged} of {dim} eigenvalues deflated"
    )]
    NoConvergence {
        iterations: usize,
        converged: usize,
        dim: usize,
    },
    #[error("eigenpair {index} has residual {residual:e} above the bound {bound:e}")]
    ResidualTooLarge {
        index: usize,
        residual: f64,
        bound: f64,
    },
}

/// Full eigendecomposition with unit right eigenvectors (columns of
/// `vectors`), sorted by `(re, im)` of the eigenvalues.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub values: Vec<Complex64>,
    pub vectors: CMatrix,
    /// `||A v - lambda v||_2` per pair.
    pub residuals: Vec<f64>,
    /// Frobenius norm of the input, the scale for residual bounds.
    pub matrix_norm: f64,
}

impl EigenDecomposition {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn vector(&self, i: usize) -> CVector {
        self.vectors.column(i).into_owned()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }
}

/// Pluggable eigensolver backend. The residual contract is the invariant;
/// the algorithm behind it is not.
pub trait EigenSolver {
    fn solve(&self, a: &CMatrix) -> Result<EigenDecomposition, EigenError>;
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SchurSolver {
    /// Residual bound relative to `||A||_F`.
    pub eig_tol: f64,
    /// Iteration cap per eigenvalue.
    pub max_sweeps_per_eigenvalue: usize,
}

impl Default for SchurSolver {
    fn default() -> Self {
        SchurSolver {
            eig_tol: 1e-10,
            max_sweeps_per_eigenvalue: 60,
        }
    }
}

impl SchurSolver {
    pub fn with_tol(eig_tol: f64) -> Self {
        SchurSolver {
            eig_tol,
            ..Default::default()
        }
    }
}

impl EigenSolver for SchurSolver {
    fn solve(&self, a: &CMatrix) -> Result<EigenDecomposition, EigenError> {
        eig_dense(a, self)
    }
}

/// All eigenpairs of `a`.
pub fn eig_dense(a: &CMatrix, opts: &SchurSolver) -> Result<EigenDecomposition, EigenError> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(EigenError::NotSquare {
            rows: n,
            cols: a.ncols(),
        });
    }
    if a.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(EigenError::NonFinite);
    }
    let norm = frobenius(a);
    if n == 0 {
        return Ok(EigenDecomposition {
            values: vec![],
            vectors: CMatrix::zeros(0, 0),
            residuals: vec![],
            matrix_norm: 0.0,
        });
    }

    let mut t = a.clone();
    let mut z = CMatrix::identity(n, n);
    hessenberg(&mut t, &mut z);
    schur(&mut t, &mut z, opts.max_sweeps_per_eigenvalue)?;
    let vectors = triangular_eigenvectors(&t, &z);

    let mut pairs: Vec<(Complex64, CVector)> = (0..n)
        .map(|i| (t[(i, i)], vectors.column(i).into_owned()))
        .collect();
    pairs.sort_by(|x, y| cmp_complex(&x.0, &y.0));

    let bound = opts.eig_tol * norm;
    let mut residuals = Vec::with_capacity(n);
    for (idx, (lambda, v)) in pairs.iter().enumerate() {
        let r = (a * v - v * *lambda).norm();
        if r > bound {
            return Err(EigenError::ResidualTooLarge {
                index: idx,
                residual: r,
                bound,
            });
        }
        residuals.push(r);
    }
    let values = pairs.iter().map(|p| p.0).collect();
    let vectors = CMatrix::from_columns(&pairs.iter().map(|p| p.1.clone()).collect::<Vec<_>>());
    Ok(EigenDecomposition {
        values,
        vectors,
        residuals,
        matrix_norm: norm,
    })
}

/// Lexicographic `(re, im)` order used for every eigenvalue listing.
pub fn cmp_complex(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// In-place Householder reduction `A <- Q^H A Q`, accumulating `Q` into `z`.
fn hessenberg(a: &mut CMatrix, z: &mut CMatrix) {
    let n = a.nrows();
    if n < 3 {
        return;
    }
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n - 2 {
        let below: f64 = (k + 2..n).map(|i| a[(i, k)].norm_sqr()).sum();
        if below == 0.0 {
            continue;
        }
        let x0 = a[(k + 1, k)];
        let alpha = (below + x0.norm_sqr()).sqrt();
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        // v = x + phase * alpha * e1, so that H x = -phase * alpha * e1
        let len = n - k - 1;
        v[0] = x0 + phase * alpha;
        for i in 1..len {
            v[i] = a[(k + 1 + i, k)];
        }
        let vnorm2: f64 = v[..len].iter().map(|c| c.norm_sqr()).sum();
        let tau = 2.0 / vnorm2;

        // left: rows k+1.., columns k..
        for j in k..n {
            let mut s = Complex64::new(0.0, 0.0);
            for i in 0..len {
                s += v[i].conj() * a[(k + 1 + i, j)];
            }
            s *= tau;
            for i in 0..len {
                a[(k + 1 + i, j)] -= v[i] * s;
            }
        }
        // right: all rows, columns k+1..
        for r in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for i in 0..len {
                s += a[(r, k + 1 + i)] * v[i];
            }
            s *= tau;
            for i in 0..len {
                a[(r, k + 1 + i)] -= s * v[i].conj();
            }
        }
        for r in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for i in 0..len {
                s += z[(r, k + 1 + i)] * v[i];
            }
            s *= tau;
            for i in 0..len {
                z[(r, k + 1 + i)] -= s * v[i].conj();
            }
        }
        a[(k + 1, k)] = -phase * alpha;
        for i in k + 2..n {
            a[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
}

/// Rotation `G = [[c, s], [-conj(s), c]]` with `G [a; b] = [r; 0]`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    let an = a.norm();
    if an == 0.0 {
        return (0.0, b.conj() / bn);
    }
    let r = an.hypot(bn);
    (an / r, (a / an) * b.conj() / r)
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half_tr = (a + d) * 0.5;
    let p = (a - d) * 0.5;
    let disc = (p * p + b * c).sqrt();
    let l1 = half_tr + disc;
    let l2 = half_tr - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// Reduces upper Hessenberg `h` to upper triangular Schur form.
fn schur(h: &mut CMatrix, z: &mut CMatrix, max_sweeps: usize) -> Result<(), EigenError> {
    let n = h.nrows();
    let eps = f64::EPSILON;
    let hnorm = frobenius(h).max(f64::MIN_POSITIVE);
    let mut ihi = n - 1;
    let mut stalled = 0usize;
    let mut total = 0usize;
    let cap = max_sweeps * n.max(1);
    let mut rot: Vec<(f64, Complex64)> = Vec::with_capacity(n);

    while ihi > 0 {
        // locate the active unreduced block [l, ihi]
        let mut l = ihi;
        while l > 0 {
            let mut s = abs1(h[(l - 1, l - 1)]) + abs1(h[(l, l)]);
            if s == 0.0 {
                s = hnorm;
            }
            if abs1(h[(l, l - 1)]) <= eps * s {
                h[(l, l - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == ihi {
            ihi -= 1;
            stalled = 0;
            continue;
        }
        stalled += 1;
        total += 1;
        if total > cap {
            return Err(EigenError::NoConvergence {
                iterations: total,
                converged: n - 1 - ihi,
                dim: n,
            });
        }

        let sigma = if stalled.is_multiple_of(10) {
            h[(ihi, ihi)] + Complex64::new(0.75 * h[(ihi, ihi - 1)].re.abs(), 0.0)
        } else {
            wilkinson_shift(
                h[(ihi - 1, ihi - 1)],
                h[(ihi - 1, ihi)],
                h[(ihi, ihi - 1)],
                h[(ihi, ihi)],
            )
        };

        for i in l..=ihi {
            h[(i, i)] -= sigma;
        }
        rot.clear();
        for i in l..ihi {
            let (c, s) = givens(h[(i, i)], h[(i + 1, i)]);
            for j in i..n {
                let x = h[(i, j)];
                let y = h[(i + 1, j)];
                h[(i, j)] = x * c + s * y;
                h[(i + 1, j)] = -s.conj() * x + y * c;
            }
            h[(i + 1, i)] = Complex64::new(0.0, 0.0);
            rot.push((c, s));
        }
        for (off, &(c, s)) in rot.iter().enumerate() {
            let i = l + off;
            for r in 0..=(i + 1) {
                let x = h[(r, i)];
                let y = h[(r, i + 1)];
                h[(r, i)] = x * c + y * s.conj();
                h[(r, i + 1)] = -x * s + y * c;
            }
            for r in 0..n {
                let x = z[(r, i)];
                let y = z[(r, i + 1)];
                z[(r, i)] = x * c + y * s.conj();
                z[(r, i + 1)] = -x * s + y * c;
            }
        }
        for i in l..=ihi {
            h[(i, i)] += sigma;
        }
    }
    // clean the strictly lower part
    for j in 0..n {
        for i in j + 1..n {
            h[(i, j)] = Complex64::new(0.0, 0.0);
        }
    }
    Ok(())
}

/// Unit eigenvectors `Z x_k` where `T x_k = t_kk x_k`.
fn triangular_eigenvectors(t: &CMatrix, z: &CMatrix) -> CMatrix {
    let n = t.nrows();
    let tnorm = frobenius(t);
    let small = (f64::EPSILON * tnorm).max(f64::MIN_POSITIVE);
    let big = 1e150;
    let mut out = CMatrix::zeros(n, n);
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        let tkk = t[(k, k)];
        for xi in x.iter_mut() {
            *xi = Complex64::new(0.0, 0.0);
        }
        x[k] = Complex64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut s = Complex64::new(0.0, 0.0);
            for j in i + 1..=k {
                s += t[(i, j)] * x[j];
            }
            let mut d = t[(i, i)] - tkk;
            if d.norm() < small {
                d = Complex64::new(small, 0.0);
            }
            x[i] = -s / d;
            if x[i].norm() > big {
                let scale = 1.0 / x[i].norm();
                for xj in x[i..=k].iter_mut() {
                    *xj *= scale;
                }
            }
        }
        let mut col = out.column_mut(k);
        for j in 0..=k {
            if x[j] == Complex64::new(0.0, 0.0) {
                continue;
            }
            for r in 0..n {
                col[r] += z[(r, j)] * x[j];
            }
        }
        let nrm = col.norm();
        if nrm > 0.0 {
            col /= Complex64::new(nrm, 0.0);
        }
    }
    out
}
