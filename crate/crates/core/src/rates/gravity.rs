//! Decoherence of a superposed homogeneous gravitational field by a gas.
//!
//! The rate is evaluated numerically in CGS. `Γ(g - g')²` is not
//! dimensionless when g carries cm/s²; the meaningful output is the relative
//! coherence width `Δg/g` obtained with a reference acceleration.

use std::f64::consts::PI;

use crate::error::{require_positive, Result};
use crate::units::K_B_CGS;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GravityScenario {
    /// Particle density in cm⁻³.
    pub density: f64,
    /// Particle mass in g.
    pub particle_mass: f64,
    /// Temperature in K.
    pub temperature: f64,
    /// Box edge in cm.
    pub box_size: f64,
    /// Elapsed time in s.
    pub time: f64,
}

impl GravityScenario {
    pub fn new(
        density: f64,
        particle_mass: f64,
        temperature: f64,
        box_size: f64,
        time: f64,
    ) -> Result<Self> {
        Ok(Self {
            density: require_positive("density", density)?,
            particle_mass: require_positive("particle_mass", particle_mass)?,
            temperature: require_positive("temperature", temperature)?,
            box_size: require_positive("box_size", box_size)?,
            time: require_positive("time", time)?,
        })
    }

    /// Air at 300 K in a 1 cm box observed for 1 s.
    pub fn air() -> Self {
        Self {
            density: 2.7e19,
            particle_mass: 4.65e-23,
            temperature: 300.0,
            box_size: 1.0,
            time: 1.0,
        }
    }
}

/// `Γ = n L⁴ (π m / (2 k_B T))^{3/2}`.
pub fn gravity_rate(s: &GravityScenario) -> f64 {
    s.density
        * s.box_size.powi(4)
        * (PI * s.particle_mass / (2.0 * K_B_CGS * s.temperature)).powf(1.5)
}

/// `Δg/g = 1 / (g_ref · sqrt(Γ t))`, the separation at which the damping
/// exponent reaches 1. Infinite when `Γt = 0`.
pub fn gravity_coherence_width(s: &GravityScenario, g_ref: f64) -> f64 {
    coherence_width_from_rate(gravity_rate(s), s.time, g_ref)
}

pub(crate) fn coherence_width_from_rate(rate: f64, time: f64, g_ref: f64) -> f64 {
    let gt = rate * time;
    if gt <= 0.0 {
        return f64::INFINITY;
    }
    1.0 / (g_ref * gt.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::G_REF_CGS;

    #[test]
    fn scaling_laws() {
        let s = GravityScenario::air();
        let g = gravity_rate(&s);
        let doubled = GravityScenario {
            density: 2.0 * s.density,
            ..s
        };
        assert!((gravity_rate(&doubled) / g - 2.0).abs() < 1e-14);
        let hot = GravityScenario {
            temperature: 4.0 * s.temperature,
            ..s
        };
        assert!((gravity_rate(&hot) / g - 0.125).abs() < 1e-14);
    }

    #[test]
    fn width_scaling_and_limit() {
        let s = GravityScenario::air();
        let w = gravity_coherence_width(&s, G_REF_CGS);
        let later = GravityScenario {
            time: 100.0 * s.time,
            ..s
        };
        assert!((gravity_coherence_width(&later, G_REF_CGS) / w - 0.1).abs() < 1e-14);
        assert_eq!(
            coherence_width_from_rate(0.0, 1.0, G_REF_CGS),
            f64::INFINITY
        );
    }

    #[test]
    fn rejects_non_positive() {
        assert!(GravityScenario::new(0.0, 1.0, 1.0, 1.0, 1.0).is_err());
        assert!(GravityScenario::new(1.0, 1.0, 1.0, 1.0, 0.0).is_err());
    }
}
