//! Grids, wave packets, density matrices and the ideal measurement map.

mod coherence;
mod density;
mod grid;
mod measurement;
mod wavefunction;

pub use coherence::coherence_length;
pub use density::{Basis, DensityMatrix, Diagnostics};
pub use grid::SpatialGrid;
pub use measurement::{ideal_measurement_entangle, EnvironmentOverlapMatrix};
pub use wavefunction::{build_gaussian_packet, cat_state, superpose, WaveFunction};

/// `ρ = |ψ⟩⟨ψ|` on the wave function's grid.
pub fn pure_density(psi: &WaveFunction) -> DensityMatrix {
    debug_assert!(psi.is_normalised());
    DensityMatrix::pure(psi)
}

/// Diagonal of ρ.
pub fn position_distribution(rho: &DensityMatrix) -> Vec<f64> {
    rho.position_distribution()
}
