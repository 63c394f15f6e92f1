//! Numerical tolerances shared by constructors, integrators and tests.

/// Maximum `|ρ - ρ†|` accepted for a density matrix.
pub const HERMITICITY: f64 = 1e-10;

/// Maximum `|Tr ρ · dx - 1|` for density matrices on a spatial grid.
pub const TRACE_CONTINUUM: f64 = 1e-8;

/// Maximum `|Tr ρ - 1|` for density matrices in a finite basis.
pub const TRACE_DISCRETE: f64 = 1e-12;

/// Most negative diagonal entry tolerated (rounding noise).
pub const DIAGONAL_FLOOR: f64 = -1e-10;

/// Normalisation tolerance for wave functions.
pub const NORMALISATION: f64 = 1e-10;

/// Trace drift that aborts an integration.
pub const TRACE_DRIFT: f64 = 1e-6;

/// Boundary amplitude (relative to the peak) that counts as a leak.
pub const BOUNDARY_LEAK: f64 = 1e-6;

/// Boundary amplitude required of oscillator eigenstates.
pub const OSCILLATOR_BOUNDARY: f64 = 1e-8;

/// Slack on |overlap| <= 1 checks.
pub const OVERLAP_SLACK: f64 = 1e-12;

/// Imaginary residue tolerated in a Wigner transform before it is dropped.
pub const WIGNER_IMAG_RESIDUE: f64 = 1e-8;
