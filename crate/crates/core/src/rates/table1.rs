//! Localisation-rate table for five environments and three particle sizes.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use super::scattering::{localization_rate, ScatteringEnvironment};
use crate::error::{Error, Result};

const BUILTIN: &str = include_str!("../../data/table1_presets.csv");

const HEADER: [&str; 7] = [
    "environment",
    "size_cm",
    "k_per_cm",
    "flux_per_cm2_s",
    "sigma_eff_cm2",
    "regime",
    "reference_log10",
];

/// Which cross-section model a preset uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `σ_eff = πa²`.
    Geometric,
    /// Wavelength larger than the particle; dipole (Rayleigh) suppressed cross section.
    LongWavelength,
}

impl Regime {
    pub fn tag(self) -> &'static str {
        match self {
            Regime::Geometric => "geometric",
            Regime::LongWavelength => "long_wavelength_regime",
        }
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "geometric" => Ok(Regime::Geometric),
            "long_wavelength_regime" => Ok(Regime::LongWavelength),
            other => Err(Error::Preset(format!("unknown regime `{other}`"))),
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// One record of the preset file.
#[derive(Debug, Clone, PartialEq)]
pub struct Table1Preset {
    pub environment: ScatteringEnvironment,
    pub size_cm: f64,
    pub regime: Regime,
    pub reference_log10: f64,
}

/// A computed cell next to its reference value.
#[derive(Debug, Clone, PartialEq)]
pub struct Table1Row {
    pub environment: String,
    pub size_cm: f64,
    pub regime: Regime,
    pub lambda: f64,
    pub reference_log10: f64,
}

impl Table1Row {
    pub fn computed_log10(&self) -> f64 {
        self.lambda.log10()
    }

    pub fn reference_value(&self) -> f64 {
        10f64.powf(self.reference_log10)
    }

    /// `log10(Λ_computed) - log10(Λ_reference)`.
    pub fn log10_deviation(&self) -> f64 {
        self.computed_log10() - self.reference_log10
    }
}

/// Parses preset records. Lines starting with `#` and blank lines are skipped;
/// the first remaining line must be the header.
pub fn parse_table1_presets(text: &str) -> Result<Vec<Table1Preset>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Preset("missing header".into()))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols != HEADER {
        return Err(Error::Preset(format!("unexpected header `{header}`")));
    }
    let mut out = Vec::new();
    for (line_no, line) in lines {
        let f: Vec<&str> = line.split(',').map(str::trim).collect();
        if f.len() != HEADER.len() {
            return Err(Error::Preset(format!(
                "line {line_no}: expected {} fields, found {}",
                HEADER.len(),
                f.len()
            )));
        }
        let num = |idx: usize| -> Result<f64> {
            f[idx]
                .parse::<f64>()
                .map_err(|e| Error::Preset(format!("line {line_no}: field `{}`: {e}", HEADER[idx])))
        };
        let environment = ScatteringEnvironment::new(f[0], num(2)?, num(3)?, num(4)?, 1.0)
            .map_err(|e| Error::Preset(format!("line {line_no}: {e}")))?;
        out.push(Table1Preset {
            environment,
            size_cm: num(1)?,
            regime: f[5].parse()?,
            reference_log10: num(6)?,
        });
    }
    Ok(out)
}

/// Presets shipped with the crate.
pub fn builtin_table1_presets() -> Vec<Table1Preset> {
    parse_table1_presets(BUILTIN).expect("shipped preset file is valid")
}

pub fn load_table1_presets(path: &Path) -> Result<Vec<Table1Preset>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Preset(format!("{}: {e}", path.display())))?;
    parse_table1_presets(&text)
}

pub fn table1_from_presets(presets: &[Table1Preset]) -> Vec<Table1Row> {
    presets
        .iter()
        .map(|p| Table1Row {
            environment: p.environment.label.clone(),
            size_cm: p.size_cm,
            regime: p.regime,
            lambda: localization_rate(&p.environment),
            reference_log10: p.reference_log10,
        })
        .collect()
}

/// The 15-cell table from the shipped presets.
pub fn table1_generate() -> Vec<Table1Row> {
    table1_from_presets(&builtin_table1_presets())
}
