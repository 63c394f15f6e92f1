use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::qcore::DensityMatrix;
use crate::tolerance;

/// Parameters of a scattering environment (CGS when used for the table).
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringEnvironment {
    pub label: String,
    /// Wave number of the incoming particles.
    pub wave_number: f64,
    /// Particle flux `Nv/V`.
    pub flux: f64,
    /// Effective cross section.
    pub sigma_eff: f64,
    /// Collision rate, used with an S-matrix overlap.
    pub collision_rate: f64,
}

impl ScatteringEnvironment {
    pub fn new(
        label: impl Into<String>,
        wave_number: f64,
        flux: f64,
        sigma_eff: f64,
        collision_rate: f64,
    ) -> Result<Self> {
        require_positive("wave_number", wave_number)?;
        require_positive("flux", flux)?;
        require_positive("sigma_eff", sigma_eff)?;
        require_positive("collision_rate", collision_rate)?;
        Ok(Self {
            label: label.into(),
            wave_number,
            flux,
            sigma_eff,
            collision_rate,
        })
    }
}

/// Localisation rate `Λ = k² · (Nv/V) · σ_eff`.
pub fn localization_rate(env: &ScatteringEnvironment) -> f64 {
    env.wave_number * env.wave_number * env.flux * env.sigma_eff
}

/// Decay of one off-diagonal element under repeated scattering.
///
/// `λ = Γ(1 - ⟨Φ₀|S_m†S_n|Φ₀⟩)` is complex in general: the real part damps
/// `|ρ_nm|`, the imaginary part rotates its phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayRate {
    pub rate: f64,
    pub phase_rate: f64,
}

impl DecayRate {
    /// `|ρ_nm(t)| / |ρ_nm(0)|`.
    pub fn magnitude_factor(&self, t: f64) -> f64 {
        (-self.rate * t).exp()
    }

    /// Full complex factor `e^{-λt}`.
    pub fn factor(&self, t: f64) -> Complex64 {
        (-Complex64::new(self.rate, self.phase_rate) * t).exp()
    }
}

pub fn offdiag_decay_rate(collision_rate: f64, overlap: Complex64) -> Result<DecayRate> {
    require_non_negative("collision_rate", collision_rate)?;
    if overlap.norm() > 1.0 + tolerance::OVERLAP_SLACK {
        return Err(Error::InvalidOverlap(overlap.norm()));
    }
    let lambda = collision_rate * (Complex64::new(1.0, 0.0) - overlap);
    Ok(DecayRate {
        rate: lambda.re,
        phase_rate: lambda.im,
    })
}

/// `ρ(x,x',t) = ρ(x,x',0) · exp(-Λt(x-x')²)`. The diagonal is copied untouched.
pub fn apply_spatial_decoherence(
    rho: &DensityMatrix,
    lambda: f64,
    t: f64,
) -> Result<DensityMatrix> {
    let grid = rho.spatial_grid()?;
    let lt = lambda * t;
    if !(lt.is_finite() && lt >= 0.0) {
        return Err(Error::param("lambda*t", format!("must be >= 0, got {lt}")));
    }
    let factors = spatial_decoherence_factors(&grid.points(), lt);
    let mut out = rho.clone();
    apply_factors(&mut out, &factors);
    Ok(out)
}

/// Matrix of `exp(-s·(xᵢ-xⱼ)²)`, exactly 1 on the diagonal.
pub(crate) fn spatial_decoherence_factors(points: &[f64], s: f64) -> DMatrix<f64> {
    let n = points.len();
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            1.0
        } else {
            let d = points[i] - points[j];
            (-s * d * d).exp()
        }
    })
}

pub(crate) fn apply_factors(rho: &mut DensityMatrix, factors: &DMatrix<f64>) {
    let m = rho.elements_mut();
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if i != j {
                m[(i, j)] *= factors[(i, j)];
            }
        }
    }
}
