use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{SpatialGrid, WaveFunction};
use crate::error::{Error, Result};
use crate::fft::FftPair;
use crate::tolerance;

/// Representation a density matrix lives in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Basis {
    /// Kernel `ρ(xᵢ, xⱼ)` sampled on a grid; the trace carries the measure `dx`.
    Spatial(SpatialGrid),
    /// Finite orthonormal basis of the given dimension.
    Discrete(usize),
}

/// Invariant residues of a density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub trace_error: f64,
    pub hermiticity_residue: f64,
    pub min_diagonal: f64,
}

/// Hermitian, unit-trace operator over a spatial grid or a finite basis.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    basis: Basis,
    elements: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// `ρᵢⱼ = ψᵢψⱼ*`.
    pub fn pure(psi: &WaveFunction) -> Self {
        let a = psi.amplitudes();
        let n = a.len();
        let elements = DMatrix::from_fn(n, n, |i, j| a[i] * a[j].conj());
        Self {
            basis: Basis::Spatial(*psi.grid()),
            elements,
        }
    }

    /// `|ψ⟩⟨ψ|` for a normalised vector in a finite basis.
    pub fn pure_discrete(amplitudes: &[Complex64]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(Error::ZeroNorm);
        }
        let n = amplitudes.len();
        let elements = DMatrix::from_fn(n, n, |i, j| {
            amplitudes[i] * amplitudes[j].conj() / (norm * norm)
        });
        Self::discrete(elements)
    }

    /// Validated density matrix in a finite basis.
    pub fn discrete(elements: DMatrix<Complex64>) -> Result<Self> {
        if !elements.is_square() {
            return Err(Error::InvalidDensityMatrix("matrix is not square".into()));
        }
        let rho = Self {
            basis: Basis::Discrete(elements.nrows()),
            elements,
        };
        rho.validate()?;
        Ok(rho)
    }

    /// Validated density kernel on a spatial grid.
    pub fn spatial(grid: SpatialGrid, elements: DMatrix<Complex64>) -> Result<Self> {
        if elements.nrows() != grid.len() || elements.ncols() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                found: elements.nrows().max(elements.ncols()),
            });
        }
        let rho = Self {
            basis: Basis::Spatial(grid),
            elements,
        };
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn from_parts(basis: Basis, elements: DMatrix<Complex64>) -> Self {
        Self { basis, elements }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn grid(&self) -> Option<&SpatialGrid> {
        match &self.basis {
            Basis::Spatial(g) => Some(g),
            Basis::Discrete(_) => None,
        }
    }

    pub(crate) fn spatial_grid(&self) -> Result<SpatialGrid> {
        self.grid().copied().ok_or(Error::NotSpatial)
    }

    pub fn dim(&self) -> usize {
        self.elements.nrows()
    }

    pub fn elements(&self) -> &DMatrix<Complex64> {
        &self.elements
    }

    pub(crate) fn elements_mut(&mut self) -> &mut DMatrix<Complex64> {
        &mut self.elements
    }

    pub fn into_elements(self) -> DMatrix<Complex64> {
        self.elements
    }

    /// Integration weight of one basis element: `dx` on a grid, 1 otherwise.
    pub fn measure(&self) -> f64 {
        match &self.basis {
            Basis::Spatial(g) => g.spacing(),
            Basis::Discrete(_) => 1.0,
        }
    }

    pub fn trace(&self) -> f64 {
        self.elements.diagonal().iter().map(|z| z.re).sum::<f64>() * self.measure()
    }

    /// `Tr ρ²` with the grid measure.
    pub fn purity(&self) -> f64 {
        // Tr ρ² = Σᵢⱼ ρᵢⱼ ρⱼᵢ = Σ |ρᵢⱼ|² for Hermitian ρ.
        let w = self.measure();
        self.elements.iter().map(|z| z.norm_sqr()).sum::<f64>() * w * w
    }

    pub fn hermiticity_residue(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for j in 0..n {
            for i in 0..=j {
                let d = (self.elements[(i, j)] - self.elements[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn diagnostics(&self) -> Diagnostics {
        Diagnostics {
            trace_error: (self.trace() - 1.0).abs(),
            hermiticity_residue: self.hermiticity_residue(),
            min_diagonal: self
                .elements
                .diagonal()
                .iter()
                .map(|z| z.re)
                .fold(f64::INFINITY, f64::min),
        }
    }

    pub fn trace_tolerance(&self) -> f64 {
        match self.basis {
            Basis::Spatial(_) => tolerance::TRACE_CONTINUUM,
            Basis::Discrete(_) => tolerance::TRACE_DISCRETE,
        }
    }

    /// Checks hermiticity, unit trace and diagonal positivity.
    pub fn validate(&self) -> Result<()> {
        let d = self.diagnostics();
        if d.hermiticity_residue > tolerance::HERMITICITY {
            return Err(Error::InvalidDensityMatrix(format!(
                "hermiticity residue {:e}",
                d.hermiticity_residue
            )));
        }
        if d.trace_error > self.trace_tolerance() {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace error {:e}",
                d.trace_error
            )));
        }
        if d.min_diagonal < tolerance::DIAGONAL_FLOOR {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative diagonal entry {:e}",
                d.min_diagonal
            )));
        }
        Ok(())
    }

    /// Diagonal of ρ. On a grid this is the position density (`Σ·dx = 1`).
    pub fn position_distribution(&self) -> Vec<f64> {
        self.elements.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn mean_position(&self) -> Result<f64> {
        let grid = self.spatial_grid()?;
        let dx = grid.spacing();
        Ok(self
            .elements
            .diagonal()
            .iter()
            .enumerate()
            .map(|(i, z)| z.re * grid.point(i))
            .sum::<f64>()
            * dx)
    }

    /// Momentum distribution `ρ̃(k, k)` (normalised to unit sum) in
    /// transform order, together with the matching wave numbers.
    pub fn momentum_distribution(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        let grid = self.spatial_grid()?;
        let n = grid.len();
        let fft = FftPair::new(n);
        // ρ̃ = F ρ F†; only its diagonal is needed: ρ̃_kk = Σ_i F_ki (ρ F†)_ik.
        let mut cols = self.elements.clone();
        fft.forward(cols.as_mut_slice());
        let mut rows = cols.adjoint();
        fft.forward(rows.as_mut_slice());
        // rows = F (F ρ)† = F ρ F†  (ρ Hermitian)
        let diag: Vec<f64> = (0..n).map(|k| rows[(k, k)].re).collect();
        let total: f64 = diag.iter().sum();
        Ok((
            diag.iter().map(|d| d / total).collect(),
            grid.wave_numbers(),
        ))
    }

    pub fn mean_momentum(&self) -> Result<f64> {
        let (p, k) = self.momentum_distribution()?;
        Ok(p.iter().zip(&k).map(|(p, k)| p * k).sum())
    }

    /// Largest `|ρ|` on the outer rows/columns relative to the peak `|ρ|`.
    pub fn boundary_ratio(&self) -> f64 {
        let n = self.dim();
        let peak = self.elements.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let mut edge = 0.0f64;
        for k in 0..n {
            for &(i, j) in &[(0, k), (n - 1, k), (k, 0), (k, n - 1)] {
                edge = edge.max(self.elements[(i, j)].norm());
            }
        }
        edge / peak
    }
}
