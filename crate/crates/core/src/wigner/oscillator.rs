use std::f64::consts::PI;

use num_complex::Complex64;

use super::transform::{wigner_transform, WignerFunction};
use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::qcore::{DensityMatrix, SpatialGrid, WaveFunction};
use crate::rates::apply_spatial_decoherence;
use crate::tolerance;

/// Harmonic-oscillator eigenstate `ψ_n` (unit mass, ħ = 1) from the
/// normalised Hermite-function recurrence.
pub fn oscillator_eigenstate(grid: SpatialGrid, n: usize, omega: f64) -> Result<WaveFunction> {
    require_positive("omega", omega)?;
    let scale = omega.sqrt();
    let prefactor = omega.powf(0.25) * PI.powf(-0.25);
    let amplitudes: Vec<Complex64> = grid
        .points()
        .into_iter()
        .map(|x| Complex64::new(prefactor * hermite_function(n, scale * x), 0.0))
        .collect();
    let peak = amplitudes.iter().map(|a| a.norm()).fold(0.0, f64::max);
    let edge = amplitudes[0]
        .norm()
        .max(amplitudes[amplitudes.len() - 1].norm());
    let ratio = edge / peak;
    if !(ratio < tolerance::OSCILLATOR_BOUNDARY) {
        return Err(Error::GridTooNarrow {
            ratio,
            limit: tolerance::OSCILLATOR_BOUNDARY,
        });
    }
    WaveFunction::from_amplitudes(grid, amplitudes)
}

/// `H_n(ξ) e^{-ξ²/2} / sqrt(2ⁿ n!)`.
fn hermite_function(n: usize, xi: f64) -> f64 {
    let g = (-0.5 * xi * xi).exp();
    let mut prev = g;
    if n == 0 {
        return prev;
    }
    let mut cur = 2f64.sqrt() * xi * g;
    for k in 1..n {
        let k = k as f64;
        let next = (2.0 / (k + 1.0)).sqrt() * xi * cur - (k / (k + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Eigenstate `n` (ω = 1) with its off-diagonals damped by `exp(-Λt(x-x')²)`,
/// returned in both the position and the phase-space picture.
pub fn decohered_oscillator_demo(
    grid: SpatialGrid,
    n: usize,
    lambda_t: f64,
) -> Result<(DensityMatrix, WignerFunction)> {
    require_non_negative("lambda_t", lambda_t)?;
    let psi = oscillator_eigenstate(grid, n, 1.0)?;
    let rho = apply_spatial_decoherence(&DensityMatrix::pure(&psi), lambda_t, 1.0)?;
    let w = wigner_transform(&rho)?;
    Ok((rho, w))
}
