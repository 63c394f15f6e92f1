use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::FftPair;
use crate::qcore::{DensityMatrix, SpatialGrid};
use crate::tolerance;

/// Real phase-space function on `grid × p`, stored with rows indexed by x and
/// columns by p (ascending).
#[derive(Debug, Clone, PartialEq)]
pub struct WignerFunction {
    grid: SpatialGrid,
    p: Vec<f64>,
    values: DMatrix<f64>,
    imag_residue: f64,
}

impl WignerFunction {
    pub(crate) fn from_parts(
        grid: SpatialGrid,
        p: Vec<f64>,
        values: DMatrix<f64>,
        imag_residue: f64,
    ) -> Self {
        Self {
            grid,
            p,
            values,
            imag_residue,
        }
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn x_points(&self) -> Vec<f64> {
        self.grid.points()
    }

    pub fn p_points(&self) -> &[f64] {
        &self.p
    }

    pub fn dx(&self) -> f64 {
        self.grid.spacing()
    }

    pub fn dp(&self) -> f64 {
        self.p[1] - self.p[0]
    }

    pub fn values(&self) -> &DMatrix<f64> {
        &self.values
    }

    pub fn value(&self, ix: usize, ip: usize) -> f64 {
        self.values[(ix, ip)]
    }

    /// Largest discarded imaginary part of the transform.
    pub fn imag_residue(&self) -> f64 {
        self.imag_residue
    }

    /// `Σ W Δx Δp`.
    pub fn normalisation(&self) -> f64 {
        self.values.sum() * self.dx() * self.dp()
    }

    pub fn min_value(&self) -> f64 {
        self.values.min()
    }

    pub fn max_value(&self) -> f64 {
        self.values.max()
    }

    fn moment(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        let mut acc = 0.0;
        for (ix, x) in self.grid.points().into_iter().enumerate() {
            for (ip, &p) in self.p.iter().enumerate() {
                acc += self.values[(ix, ip)] * f(x, p);
            }
        }
        acc * self.dx() * self.dp()
    }

    pub fn mean_x(&self) -> f64 {
        self.moment(|x, _| x)
    }

    pub fn mean_p(&self) -> f64 {
        self.moment(|_, p| p)
    }

    pub fn variance_x(&self) -> f64 {
        let m = self.mean_x();
        self.moment(|x, _| (x - m) * (x - m))
    }

    pub fn variance_p(&self) -> f64 {
        let m = self.mean_p();
        self.moment(|_, p| (p - m) * (p - m))
    }

    /// `Σ_p W Δp` at every grid point.
    pub fn marginal_position(&self) -> Vec<f64> {
        let dp = self.dp();
        self.values.row_iter().map(|r| r.sum() * dp).collect()
    }

    /// `Σ_x W Δx` at every momentum.
    pub fn marginal_momentum(&self) -> Vec<f64> {
        let dx = self.dx();
        self.values.column_iter().map(|c| c.sum() * dx).collect()
    }
}

/// `W(x, p) = (1/π) ∫dy e^{2ipy} ρ(x-y, x+y)` on the grid points.
///
/// `y` runs over multiples of the spacing so that both arguments stay on the
/// lattice. The momentum grid is `p_j = πj/(N·dx)`, `j ∈ [-N/2, N/2)`.
pub fn wigner_transform(rho: &DensityMatrix) -> Result<WignerFunction> {
    let grid = *rho.grid().ok_or(Error::NotSpatial)?;
    let residue = rho.hermiticity_residue();
    if residue > tolerance::HERMITICITY {
        return Err(Error::NonHermitianInput(residue));
    }
    let n = grid.len();
    let half = n / 2;
    let dx = grid.spacing();
    let m = rho.elements();
    let fft = FftPair::new(n);

    let mut buf = vec![Complex64::new(0.0, 0.0); n * n];
    for (c, slice) in buf.chunks_exact_mut(n).enumerate() {
        for k in -(half as isize)..(half as isize) {
            let (i, j) = (c as isize - k, c as isize + k);
            if i >= 0 && j >= 0 && (i as usize) < n && (j as usize) < n {
                slice[k.rem_euclid(n as isize) as usize] = m[(i as usize, j as usize)];
            }
        }
    }
    fft.inverse_raw(&mut buf);

    let scale = dx / PI;
    let mut imag: f64 = 0.0;
    let mut values = DMatrix::zeros(n, n);
    for (c, slice) in buf.chunks_exact(n).enumerate() {
        for (col, idx) in (0..n)
            .map(|col| (col, (col + half) % n))
            .collect::<Vec<_>>()
        {
            let z = slice[idx] * scale;
            values[(c, col)] = z.re;
            imag = imag.max(z.im.abs());
        }
    }
    if imag > tolerance::WIGNER_IMAG_RESIDUE {
        return Err(Error::NonHermitianInput(imag));
    }
    let dp = PI / (n as f64 * dx);
    let p = (0..n).map(|col| (col as f64 - half as f64) * dp).collect();
    Ok(WignerFunction::from_parts(grid, p, values, imag))
}

/// `Σ_p W Δp`, which reproduces the diagonal of ρ.
pub fn marginal_position(w: &WignerFunction) -> Vec<f64> {
    w.marginal_position()
}
