//! Small complex linear-algebra helpers shared by the modules.

use crate::{CMatrix, CVector, Complex64};

/// `<a, b> = sum_i a_i conj(b_i)`, linear in the first argument.
pub fn inner(a: &CVector, b: &CVector) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y.conj()).sum()
}

/// Operator 2-norm (largest singular value).
pub fn op_norm(a: &CMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

/// Frobenius norm.
pub fn frobenius(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn is_finite(a: &CMatrix) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// `|re| + |im|`, the cheap modulus used for deflation tests.
#[inline]
pub fn abs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Builds an `m x m` matrix from real entries given row by row.
pub fn real_matrix(rows: &[&[f64]]) -> CMatrix {
    let m = rows.len();
    CMatrix::from_fn(m, m, |i, j| Complex64::new(rows[i][j], 0.0))
}

pub fn diag_real(values: &[f64]) -> CMatrix {
    let m = values.len();
    CMatrix::from_fn(m, m, |i, j| {
        if i == j {
            Complex64::new(values[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

/// Scalar multiple of the identity.
pub fn scaled_identity(m: usize, s: Complex64) -> CMatrix {
    CMatrix::identity(m, m) * s
}
