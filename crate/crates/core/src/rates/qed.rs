//! Decoherence of a superposed electric field by a charged scalar field,
//! natural units (ħ = c = 1).

use std::f64::consts::PI;

use crate::error::{require_non_negative, require_positive, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QedScenario {
    pub charge: f64,
    pub mass: f64,
    pub field: f64,
    pub volume: f64,
    pub time: f64,
}

impl QedScenario {
    pub fn new(charge: f64, mass: f64, field: f64, volume: f64, time: f64) -> Result<Self> {
        if !charge.is_finite() {
            return Err(Error::param("charge", "must be finite"));
        }
        require_positive("mass", mass)?;
        require_positive("volume", volume)?;
        require_non_negative("field", field)?;
        require_non_negative("time", time)?;
        Ok(Self {
            charge,
            mass,
            field,
            volume,
            time,
        })
    }

    pub fn at_time(self, time: f64) -> Self {
        Self { time, ..self }
    }

    /// `E_c = m²/e`.
    pub fn critical_field(&self) -> f64 {
        self.mass * self.mass / self.charge.abs()
    }
}

/// `ln D_V` (≤ 0), vacuum-polarisation contribution.
pub fn qed_vacuum_exponent(s: &QedScenario) -> f64 {
    let ee = s.charge * s.field;
    let m = s.mass;
    let c = 256.0 * PI * PI;
    let first = s.volume * s.time / c * ee.powi(3) / (m * m + (ee * s.time).powi(2));
    let second = s.volume * ee * ee / (c * m) * (ee * s.time / m).atan();
    -(first + second)
}

/// `D_V ∈ (0, 1]`.
pub fn qed_vacuum_factor(s: &QedScenario) -> f64 {
    qed_vacuum_exponent(s).exp()
}

/// Late-time value `exp(-V e²E²/(512π m))` of the vacuum factor.
pub fn qed_vacuum_limit(s: &QedScenario) -> f64 {
    let ee = s.charge * s.field;
    (-s.volume * ee * ee / (512.0 * PI * s.mass)).exp()
}

/// `ln D_PC` (≤ 0), pair-creation contribution.
pub fn qed_pair_exponent(s: &QedScenario) -> f64 {
    let ee = (s.charge * s.field).abs();
    if ee == 0.0 {
        return 0.0;
    }
    -s.volume * s.time * ee * ee / (4.0 * PI * PI) * (-PI * s.mass * s.mass / ee).exp()
}

/// `D_PC ∈ (0, 1]`.
pub fn qed_pair_factor(s: &QedScenario) -> f64 {
    qed_pair_exponent(s).exp()
}

/// `|ln D_V| / |ln D_PC|`; valid above the critical field.
pub fn qed_dominance_ratio(s: &QedScenario) -> Result<f64> {
    let ec = s.critical_field();
    if !(s.field > ec) {
        return Err(Error::RegimeError(format!(
            "field {} must exceed the critical field {ec}",
            s.field
        )));
    }
    if !(s.time > 0.0) {
        return Err(Error::RegimeError("time must be > 0".into()));
    }
    Ok(qed_vacuum_exponent(s).abs() / qed_pair_exponent(s).abs())
}
