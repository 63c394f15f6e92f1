use nalgebra::DMatrix;
use num_complex::Complex64;

use super::density::{Basis, DensityMatrix};
use crate::error::{Error, Result};
use crate::tolerance;

/// Gram matrix of environment (pointer) states, entry `(m, n)` = `⟨Φ_m|Φ_n⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvironmentOverlapMatrix {
    overlaps: DMatrix<Complex64>,
}

impl EnvironmentOverlapMatrix {
    /// Requires a unit diagonal, `|entries| ≤ 1` and hermiticity.
    pub fn new(overlaps: DMatrix<Complex64>) -> Result<Self> {
        if !overlaps.is_square() {
            return Err(Error::InvalidOverlapMatrix("matrix is not square".into()));
        }
        let d = overlaps.nrows();
        for m in 0..d {
            if overlaps[(m, m)] != Complex64::new(1.0, 0.0) {
                return Err(Error::InvalidOverlapMatrix(format!(
                    "diagonal entry {m} is {}, expected exactly 1",
                    overlaps[(m, m)]
                )));
            }
            for n in 0..d {
                let z = overlaps[(m, n)];
                if z.norm() > 1.0 + tolerance::OVERLAP_SLACK {
                    return Err(Error::InvalidOverlapMatrix(format!(
                        "|entry ({m},{n})| = {} exceeds 1",
                        z.norm()
                    )));
                }
                if (z - overlaps[(n, m)].conj()).norm() > tolerance::OVERLAP_SLACK {
                    return Err(Error::InvalidOverlapMatrix(format!(
                        "entries ({m},{n}) and ({n},{m}) are not conjugate"
                    )));
                }
            }
        }
        Ok(Self { overlaps })
    }

    /// Perfectly distinguishing environment, `⟨Φ_m|Φ_n⟩ = δ_mn`.
    pub fn orthogonal(dim: usize) -> Self {
        Self {
            overlaps: DMatrix::identity(dim, dim),
        }
    }

    /// Environment that learns nothing: every overlap is 1.
    pub fn indistinguishable(dim: usize) -> Self {
        Self {
            overlaps: DMatrix::from_element(dim, dim, Complex64::new(1.0, 0.0)),
        }
    }

    /// Same real overlap `c` for every pair of distinct states.
    pub fn uniform(dim: usize, c: f64) -> Result<Self> {
        Self::new(DMatrix::from_fn(dim, dim, |m, n| {
            if m == n {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(c, 0.0)
            }
        }))
    }

    pub fn dim(&self) -> usize {
        self.overlaps.nrows()
    }

    pub fn overlaps(&self) -> &DMatrix<Complex64> {
        &self.overlaps
    }
}

/// Reduced system state after an ideal measurement-like interaction:
/// `ρ'_mn = ρ_mn · ⟨Φ_m|Φ_n⟩`. Diagonal entries are copied unchanged.
pub fn ideal_measurement_entangle(
    system: &DensityMatrix,
    overlaps: &EnvironmentOverlapMatrix,
) -> Result<DensityMatrix> {
    if system.dim() != overlaps.dim() {
        return Err(Error::DimensionMismatch {
            expected: system.dim(),
            found: overlaps.dim(),
        });
    }
    let rho = system.elements();
    let d = system.dim();
    let out = DMatrix::from_fn(d, d, |m, n| {
        if m == n {
            rho[(m, m)]
        } else {
            rho[(m, n)] * overlaps.overlaps[(m, n)]
        }
    });
    let basis: Basis = system.basis();
    Ok(DensityMatrix::from_parts(basis, out))
}
