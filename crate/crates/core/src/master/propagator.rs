use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::models::{CaldeiraLeggettModel, FreeDecoherenceModel, MasterModel, Scheme};
use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::fft::FftPair;
use crate::qcore::{DensityMatrix, SpatialGrid};
use crate::rates::{apply_factors, spatial_decoherence_factors};
use crate::tolerance;

type CMatrix = DMatrix<Complex64>;

/// Fixed-step integrator for one model on one grid.
///
/// Split-step applies `D(dt/2) K(dt) D(dt/2)` for the free model and
/// `D(dt/2) F(dt/2) K(dt) F(dt/2) D(dt/2)` when friction is present, with
/// `D` the exact decoherence factor, `K` the exact kinetic factor (periodic
/// box of length `n·dx`) and `F` one RK4 step of the centered-difference
/// friction term.
pub struct Propagator {
    grid: SpatialGrid,
    dt: f64,
    scheme: Scheme,
    mass: f64,
    lambda: f64,
    gamma: f64,
    kinetic: bool,
    fft: FftPair,
    kinetic_phase: Vec<Complex64>,
    decoherence_half: DMatrix<f64>,
    decoherence_full: DMatrix<f64>,
}

impl fmt::Debug for Propagator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Propagator")
            .field("n_points", &self.grid.len())
            .field("dt", &self.dt)
            .field("scheme", &self.scheme)
            .field("mass", &self.mass)
            .field("lambda", &self.lambda)
            .field("gamma", &self.gamma)
            .field("kinetic", &self.kinetic)
            .finish()
    }
}

impl Propagator {
    pub fn free(
        grid: SpatialGrid,
        model: &FreeDecoherenceModel,
        dt: f64,
        scheme: Scheme,
    ) -> Result<Self> {
        Self::build(grid, model.mass, model.lambda, 0.0, true, dt, scheme)
    }

    pub fn caldeira_leggett(
        grid: SpatialGrid,
        model: &CaldeiraLeggettModel,
        dt: f64,
        scheme: Scheme,
    ) -> Result<Self> {
        Self::build(
            grid,
            model.mass,
            model.lambda(),
            model.gamma,
            true,
            dt,
            scheme,
        )
    }

    pub fn for_model(
        grid: SpatialGrid,
        model: &MasterModel,
        dt: f64,
        scheme: Scheme,
    ) -> Result<Self> {
        match model {
            MasterModel::Free(m) => Self::free(grid, m, dt, scheme),
            MasterModel::CaldeiraLeggett(m) => Self::caldeira_leggett(grid, m, dt, scheme),
        }
    }

    /// Decoherence term only; each step multiplies by `exp(-Λ dt (x-x')²)`.
    pub fn without_kinetic(grid: SpatialGrid, lambda: f64, dt: f64) -> Result<Self> {
        Self::build(grid, 1.0, lambda, 0.0, false, dt, Scheme::SplitStep)
    }

    pub(crate) fn build(
        grid: SpatialGrid,
        mass: f64,
        lambda: f64,
        gamma: f64,
        kinetic: bool,
        dt: f64,
        scheme: Scheme,
    ) -> Result<Self> {
        require_positive("mass", mass)?;
        require_non_negative("lambda", lambda)?;
        require_non_negative("gamma", gamma)?;
        require_positive("dt", dt)?;
        let n = grid.len();
        let points = grid.points();
        let kinetic_phase = grid
            .wave_numbers()
            .iter()
            .map(|k| Complex64::from_polar(1.0 / n as f64, -k * k * dt / (2.0 * mass)))
            .collect();
        let p = Self {
            grid,
            dt,
            scheme,
            mass,
            lambda,
            gamma,
            kinetic,
            fft: FftPair::new(n),
            kinetic_phase,
            decoherence_half: spatial_decoherence_factors(&points, 0.5 * lambda * dt),
            decoherence_full: spatial_decoherence_factors(&points, lambda * dt),
        };
        if let Some(bound) = p.stability_bound() {
            if dt > bound {
                return Err(Error::StabilityViolation { dt, bound });
            }
        }
        Ok(p)
    }

    /// Largest stable time step, if the scheme has one.
    pub fn stability_bound(&self) -> Option<f64> {
        let dx = self.grid.spacing();
        let extent = self.grid.extent();
        let mut bound = f64::INFINITY;
        match self.scheme {
            Scheme::SplitStep => {
                if self.gamma > 0.0 {
                    bound = bound.min(2.0 * dx / (self.gamma * extent));
                }
            }
            Scheme::Rk4 => {
                if self.kinetic {
                    bound = bound.min(0.5 * self.mass * dx * dx);
                }
                if self.lambda > 0.0 {
                    bound = bound.min(2.5 / (self.lambda * extent * extent));
                }
                if self.gamma > 0.0 {
                    bound = bound.min(dx / (self.gamma * extent));
                }
            }
        }
        bound.is_finite().then_some(bound)
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    /// Advances ρ by one time step.
    pub fn step(&self, rho: &mut DensityMatrix) -> Result<()> {
        if rho.grid() != Some(&self.grid) {
            return Err(match rho.grid() {
                None => Error::NotSpatial,
                Some(_) => Error::GridMismatch,
            });
        }
        match (self.scheme, self.kinetic) {
            (_, false) => apply_factors(rho, &self.decoherence_full),
            (Scheme::SplitStep, true) => self.split_step(rho),
            (Scheme::Rk4, true) => {
                let m = rk4(rho.elements(), self.dt, |r, out| self.full_rhs(r, out));
                *rho.elements_mut() = m;
            }
        }
        let drift = (rho.trace() - 1.0).abs();
        if !(drift <= tolerance::TRACE_DRIFT) {
            return Err(Error::TraceDrift {
                drift,
                limit: tolerance::TRACE_DRIFT,
            });
        }
        Ok(())
    }

    pub fn run(&self, rho: &mut DensityMatrix, n_steps: usize) -> Result<()> {
        for _ in 0..n_steps {
            self.step(rho)?;
        }
        Ok(())
    }

    fn split_step(&self, rho: &mut DensityMatrix) {
        let decohere = self.lambda > 0.0;
        let friction = self.gamma > 0.0;
        if decohere {
            apply_factors(rho, &self.decoherence_half);
        }
        if friction {
            self.friction_half_step(rho);
        }
        self.kinetic_step(rho.elements_mut());
        if friction {
            self.friction_half_step(rho);
        }
        if decohere {
            apply_factors(rho, &self.decoherence_half);
        }
    }

    /// ρ → U ρ U† with `U = F⁻¹ e^{-ik²dt/2m} F`.
    fn kinetic_step(&self, m: &mut CMatrix) {
        self.apply_u_to_columns(m);
        let mut t = m.adjoint();
        self.apply_u_to_columns(&mut t);
        *m = t;
    }

    fn apply_u_to_columns(&self, m: &mut CMatrix) {
        let n = self.grid.len();
        let buf = m.as_mut_slice();
        self.fft.forward(buf);
        for col in buf.chunks_exact_mut(n) {
            for (z, phase) in col.iter_mut().zip(&self.kinetic_phase) {
                *z *= phase;
            }
        }
        // phases carry the 1/n normalisation
        self.fft.inverse_raw(buf);
    }

    fn friction_half_step(&self, rho: &mut DensityMatrix) {
        let m = rk4(rho.elements(), 0.5 * self.dt, |r, out| {
            self.friction_rhs(r, out)
        });
        *rho.elements_mut() = m;
    }

    /// `γ (x-x') (∂_{x'} - ∂_x) ρ` with centered differences and ρ = 0 outside the grid.
    fn friction_rhs(&self, r: &CMatrix, out: &mut CMatrix) {
        let n = self.grid.len();
        let dx = self.grid.spacing();
        let c = self.gamma / (2.0 * dx);
        let zero = Complex64::new(0.0, 0.0);
        for j in 0..n {
            for i in 0..n {
                let sep = (i as f64 - j as f64) * dx;
                let right = if j + 1 < n { r[(i, j + 1)] } else { zero };
                let left = if j > 0 { r[(i, j - 1)] } else { zero };
                let down = if i + 1 < n { r[(i + 1, j)] } else { zero };
                let up = if i > 0 { r[(i - 1, j)] } else { zero };
                out[(i, j)] = c * sep * ((right - left) - (down - up));
            }
        }
    }

    /// Full right-hand side with a three-point Laplacian (hard walls).
    fn full_rhs(&self, r: &CMatrix, out: &mut CMatrix) {
        let n = self.grid.len();
        let dx = self.grid.spacing();
        let kin = Complex64::new(0.0, 1.0 / (2.0 * self.mass * dx * dx));
        let fric = self.gamma / (2.0 * dx);
        let zero = Complex64::new(0.0, 0.0);
        for j in 0..n {
            for i in 0..n {
                let here = r[(i, j)];
                let right = if j + 1 < n { r[(i, j + 1)] } else { zero };
                let left = if j > 0 { r[(i, j - 1)] } else { zero };
                let down = if i + 1 < n { r[(i + 1, j)] } else { zero };
                let up = if i > 0 { r[(i - 1, j)] } else { zero };
                let sep = (i as f64 - j as f64) * dx;
                let mut v = kin * ((down + up) - (right + left));
                v -= self.lambda * sep * sep * here;
                if self.gamma > 0.0 {
                    v += fric * sep * ((right - left) - (down - up));
                }
                out[(i, j)] = v;
            }
        }
    }
}

fn rk4(y: &CMatrix, h: f64, f: impl Fn(&CMatrix, &mut CMatrix)) -> CMatrix {
    let n = y.nrows();
    let mut k1 = CMatrix::zeros(n, n);
    let mut k2 = CMatrix::zeros(n, n);
    let mut k3 = CMatrix::zeros(n, n);
    let mut k4 = CMatrix::zeros(n, n);
    f(y, &mut k1);
    f(&(y + &k1 * Complex64::from(0.5 * h)), &mut k2);
    f(&(y + &k2 * Complex64::from(0.5 * h)), &mut k3);
    f(&(y + &k3 * Complex64::from(h)), &mut k4);
    let w = Complex64::from(h / 6.0);
    y + (k1 + (k2 + k3) * Complex64::from(2.0) + k4) * w
}

/// One split-step of the free decoherence master equation.
pub fn step_free_decoherence(
    rho: &mut DensityMatrix,
    model: &FreeDecoherenceModel,
    dt: f64,
) -> Result<()> {
    let grid = *rho.grid().ok_or(Error::NotSpatial)?;
    Propagator::free(grid, model, dt, Scheme::SplitStep)?.step(rho)
}

/// One split-step of the Caldeira–Leggett equation.
pub fn step_caldeira_leggett(
    rho: &mut DensityMatrix,
    model: &CaldeiraLeggettModel,
    dt: f64,
) -> Result<()> {
    let grid = *rho.grid().ok_or(Error::NotSpatial)?;
    Propagator::caldeira_leggett(grid, model, dt, Scheme::SplitStep)?.step(rho)
}
