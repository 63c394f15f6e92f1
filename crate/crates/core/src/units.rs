//! Unit systems and the CGS constants used by the closed-form estimates.

use std::fmt;

/// Reduced Planck constant in erg·s.
pub const HBAR_CGS: f64 = 1.0546e-27;

/// Boltzmann constant in erg/K.
pub const K_B_CGS: f64 = 1.3807e-16;

/// Reference gravitational acceleration in cm/s² used to normalise Δg.
pub const G_REF_CGS: f64 = 981.0;

/// Unit system a grid or result is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum UnitSystem {
    /// ħ = 1 and unit mass unless stated otherwise.
    #[default]
    Natural,
    Cgs,
}

impl UnitSystem {
    pub fn tag(self) -> &'static str {
        match self {
            UnitSystem::Natural => "natural",
            UnitSystem::Cgs => "cgs",
        }
    }

    /// Numeric tag used by the binary dump format.
    pub fn code(self) -> u8 {
        match self {
            UnitSystem::Natural => 0,
            UnitSystem::Cgs => 1,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(UnitSystem::Natural),
            1 => Some(UnitSystem::Cgs),
            _ => None,
        }
    }

    pub fn hbar(self) -> f64 {
        match self {
            UnitSystem::Natural => 1.0,
            UnitSystem::Cgs => HBAR_CGS,
        }
    }

    pub fn boltzmann(self) -> f64 {
        match self {
            UnitSystem::Natural => 1.0,
            UnitSystem::Cgs => K_B_CGS,
        }
    }
}

impl fmt::Display for UnitSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}
