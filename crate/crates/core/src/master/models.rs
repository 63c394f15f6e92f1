use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::units::{UnitSystem, HBAR_CGS, K_B_CGS};

/// Free particle with position-localising decoherence of strength Λ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeDecoherenceModel {
    pub mass: f64,
    pub lambda: f64,
}

impl FreeDecoherenceModel {
    pub fn new(mass: f64, lambda: f64) -> Result<Self> {
        Ok(Self {
            mass: require_positive("mass", mass)?,
            lambda: require_non_negative("lambda", lambda)?,
        })
    }
}

/// Quantum Brownian motion with friction γ at temperature T.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaldeiraLeggettModel {
    pub mass: f64,
    pub gamma: f64,
    pub temperature: f64,
    pub units: UnitSystem,
}

impl CaldeiraLeggettModel {
    pub fn new(mass: f64, gamma: f64, temperature: f64) -> Result<Self> {
        Ok(Self {
            mass: require_positive("mass", mass)?,
            gamma: require_non_negative("gamma", gamma)?,
            temperature: require_non_negative("temperature", temperature)?,
            units: UnitSystem::Natural,
        })
    }

    pub fn with_units(self, units: UnitSystem) -> Self {
        Self { units, ..self }
    }

    /// `Λ = m γ k_B T / ħ²`.
    pub fn lambda(&self) -> f64 {
        let hbar = self.units.hbar();
        self.mass * self.gamma * self.units.boltzmann() * self.temperature / (hbar * hbar)
    }
}

/// Either master equation handled by the integrators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MasterModel {
    Free(FreeDecoherenceModel),
    CaldeiraLeggett(CaldeiraLeggettModel),
}

impl MasterModel {
    pub fn mass(&self) -> f64 {
        match self {
            MasterModel::Free(m) => m.mass,
            MasterModel::CaldeiraLeggett(m) => m.mass,
        }
    }

    pub fn lambda(&self) -> f64 {
        match self {
            MasterModel::Free(m) => m.lambda,
            MasterModel::CaldeiraLeggett(m) => m.lambda(),
        }
    }

    pub fn gamma(&self) -> f64 {
        match self {
            MasterModel::Free(_) => 0.0,
            MasterModel::CaldeiraLeggett(m) => m.gamma,
        }
    }
}

impl From<FreeDecoherenceModel> for MasterModel {
    fn from(m: FreeDecoherenceModel) -> Self {
        MasterModel::Free(m)
    }
}

impl From<CaldeiraLeggettModel> for MasterModel {
    fn from(m: CaldeiraLeggettModel) -> Self {
        MasterModel::CaldeiraLeggett(m)
    }
}

/// Integration scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    /// Exact kinetic factor in Fourier space, exact decoherence factor,
    /// symmetric (Strang) splitting.
    #[default]
    SplitStep,
    /// Classical Runge–Kutta on the full right-hand side with a three-point
    /// Laplacian and hard walls.
    Rk4,
}

impl Scheme {
    pub fn tag(self) -> &'static str {
        match self {
            Scheme::SplitStep => "split-step",
            Scheme::Rk4 => "rk4",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "split-step" => Some(Scheme::SplitStep),
            "rk4" => Some(Scheme::Rk4),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrationPlan {
    pub dt: f64,
    pub n_steps: usize,
    pub record_every: usize,
    pub scheme: Scheme,
}

impl IntegrationPlan {
    pub fn new(dt: f64, n_steps: usize, record_every: usize, scheme: Scheme) -> Result<Self> {
        require_positive("dt", dt)?;
        if record_every == 0 {
            return Err(Error::param("record_every", "must be >= 1"));
        }
        Ok(Self {
            dt,
            n_steps,
            record_every,
            scheme,
        })
    }

    /// Plan reaching `t_final` in steps of at most `dt_max`.
    pub fn covering(t_final: f64, dt_max: f64, records: usize, scheme: Scheme) -> Result<Self> {
        require_positive("t_final", t_final)?;
        require_positive("dt", dt_max)?;
        let n_steps = (t_final / dt_max).ceil() as usize;
        let record_every = (n_steps / records.max(1)).max(1);
        Self::new(t_final / n_steps as f64, n_steps, record_every, scheme)
    }

    pub fn duration(&self) -> f64 {
        self.dt * self.n_steps as f64
    }
}

/// `m k_B T (δx)² / ħ²` in CGS: ratio of the decoherence rate to the
/// relaxation rate for a separation δx.
pub fn decoherence_relaxation_ratio(mass_g: f64, temperature_k: f64, dx_cm: f64) -> Result<f64> {
    require_positive("mass", mass_g)?;
    require_positive("temperature", temperature_k)?;
    require_positive("dx", dx_cm)?;
    Ok(mass_g * K_B_CGS * temperature_k * dx_cm * dx_cm / (HBAR_CGS * HBAR_CGS))
}

/// `λ_th = ħ / sqrt(m k_B T)` in cm.
pub fn reduced_thermal_wavelength(mass_g: f64, temperature_k: f64) -> Result<f64> {
    require_positive("mass", mass_g)?;
    require_positive("temperature", temperature_k)?;
    Ok(HBAR_CGS / (mass_g * K_B_CGS * temperature_k).sqrt())
}
