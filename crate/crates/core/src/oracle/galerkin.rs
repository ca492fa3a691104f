//! Truncated Fourier-Galerkin matrices in the exponential basis
//! `e^{omega(p) x} e_s`, `|p| <= K`.

use serde::Serialize;

use super::OracleError;
use crate::linalg::{frobenius, scaled_identity};
use crate::model::{BoundaryCondition, FourierMatrixSeries, OperatorSpec};
use crate::projection::project;
use crate::unperturbed::{compute_c, ipow, BiorthogonalSystem};
use crate::{CMatrix, Complex64};

pub const DEFAULT_SIZE_CAP: usize = 600;

/// Rows and columns are indexed by `(p, q)` with `p` ascending, then `q`.
#[derive(Debug, Clone, Serialize)]
pub struct GalerkinMatrix {
    pub truncation: i64,
    pub bc: BoundaryCondition,
    pub order: usize,
    pub dim: usize,
    #[serde(skip)]
    pub entries: CMatrix,
}

impl GalerkinMatrix {
    pub fn size(&self) -> usize {
        self.entries.nrows()
    }

    pub fn index(&self, p: i64, q: usize) -> usize {
        debug_assert!(p.abs() <= self.truncation && q < self.dim);
        (p + self.truncation) as usize * self.dim + q
    }

    pub fn frequency_of(&self, row: usize) -> (i64, usize) {
        ((row / self.dim) as i64 - self.truncation, row % self.dim)
    }

    pub fn frobenius(&self) -> f64 {
        frobenius(&self.entries)
    }
}

fn check_size(dim: usize, truncation: i64, cap: usize) -> Result<usize, OracleError> {
    let size = dim * (2 * truncation.max(0) as usize + 1);
    if size > cap {
        return Err(OracleError::SizeCapExceeded { size, cap });
    }
    Ok(size)
}

/// `entry[(p,s),(p',q)] = omega(p')^n delta + sum_nu omega(p')^{n-nu} [P^_nu(p-p')]_{s,q}`.
pub fn assemble(
    spec: &OperatorSpec,
    truncation: i64,
    size_cap: usize,
) -> Result<GalerkinMatrix, OracleError> {
    let required = spec.max_explicit_frequency();
    if truncation < required || truncation < 0 {
        return Err(OracleError::TruncationTooSmall {
            truncation,
            required: required.max(0),
        });
    }
    let m = spec.dim;
    let size = check_size(m, truncation, size_cap)?;
    let n = spec.order;
    let k = truncation;

    // coefficient blocks for every offset p - p' in [-2K, 2K]
    let blocks: Vec<Vec<CMatrix>> = (2..=n)
        .map(|nu| {
            (-2 * k..=2 * k)
                .map(|r| spec.coefficient(nu).coefficient(r))
                .collect()
        })
        .collect();

    let mut entries = CMatrix::zeros(size, size);
    for pc in -k..=k {
        let omega = spec.bc.omega(pc);
        let powers: Vec<Complex64> = (0..=n).map(|e| ipow(omega, e)).collect();
        let col0 = (pc + k) as usize * m;
        for q in 0..m {
            entries[(col0 + q, col0 + q)] += powers[n];
        }
        for pr in -k..=k {
            let row0 = (pr + k) as usize * m;
            let offset = (pr - pc + 2 * k) as usize;
            for (i, nu) in (2..=n).enumerate() {
                let block = &blocks[i][offset];
                let w = powers[n - nu];
                for s in 0..m {
                    for q in 0..m {
                        let b = block[(s, q)];
                        if b.re != 0.0 || b.im != 0.0 {
                            entries[(row0 + s, col0 + q)] += w * b;
                        }
                    }
                }
            }
        }
    }
    Ok(GalerkinMatrix {
        truncation,
        bc: spec.bc,
        order: n,
        dim: m,
        entries,
    })
}

/// The two-mode comparison operator for the pair `(k, j)`:
/// `y^(n) + (C + (b_{j,j,f} e^{i 2 pi f x} + b_{j,j,-f} e^{-i 2 pi f x}) I) y^(n-2)`
/// with `f` the resonant frequency of `k`.
pub fn assemble_model(
    spec: &OperatorSpec,
    system: &BiorthogonalSystem,
    k: i64,
    j: usize,
    truncation: i64,
    size_cap: usize,
) -> Result<GalerkinMatrix, OracleError> {
    let f = spec.bc.resonant_frequency(k);
    if truncation < f {
        return Err(OracleError::TruncationTooSmall {
            truncation,
            required: f,
        });
    }
    let m = spec.dim;
    let p2 = spec.p2();
    let b_plus = project(&p2.coefficient(f), system)[(j, j)];
    let b_minus = project(&p2.coefficient(-f), system)[(j, j)];
    let model = OperatorSpec::new(spec.order, m, spec.bc).with_coefficient(
        2,
        FourierMatrixSeries::constant(compute_c(spec))
            .with_term(f, scaled_identity(m, b_plus))
            .with_term(-f, scaled_identity(m, b_minus)),
    );
    assemble(&model, truncation, size_cap)
}
