//! Scenario files: line-oriented `key = value`, `#` comments and an optional
//! `[section]` named after the experiment.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

/// Configuration errors; each names the offending line or key.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("missing required key `{0}`")]
    MissingKey(String),
    #[error("invalid value for `{key}`: {reason}")]
    Validation { key: String, reason: String },
    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Experiment {
    Localize,
    EvolveFree,
    EvolveCl,
    Wigner,
    ZenoAnalytic,
    ZenoPointer,
    Chiral,
    Qed,
    Gravity,
    Table1,
    Sweep,
}

impl Experiment {
    pub const ALL: [Experiment; 11] = [
        Experiment::Localize,
        Experiment::EvolveFree,
        Experiment::EvolveCl,
        Experiment::Wigner,
        Experiment::ZenoAnalytic,
        Experiment::ZenoPointer,
        Experiment::Chiral,
        Experiment::Qed,
        Experiment::Gravity,
        Experiment::Table1,
        Experiment::Sweep,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Experiment::Localize => "localize",
            Experiment::EvolveFree => "evolve-free",
            Experiment::EvolveCl => "evolve-cl",
            Experiment::Wigner => "wigner",
            Experiment::ZenoAnalytic => "zeno-analytic",
            Experiment::ZenoPointer => "zeno-pointer",
            Experiment::Chiral => "chiral",
            Experiment::Qed => "qed",
            Experiment::Gravity => "gravity",
            Experiment::Table1 => "table1",
            Experiment::Sweep => "sweep",
        }
    }

    /// Parameter schema of the experiment.
    pub fn keys(self) -> &'static [Key] {
        use Kind::*;
        const SCHEME: Kind = Choice(&["split-step", "rk4"]);
        match self {
            Experiment::Localize => {
                const {
                    &[
                        Key::new("n_points", Count, Some("128")),
                        Key::new("x_min", Real, Some("-12")),
                        Key::new("x_max", Real, Some("12")),
                        Key::new("separation", Pos, Some("6")),
                        Key::new("width", Pos, Some("1")),
                        Key::new("lambda", NonNeg, None),
                        Key::new("t", NonNeg, Some("1")),
                    ]
                }
            }
            Experiment::EvolveFree => {
                const {
                    &[
                        Key::new("mass", Pos, Some("1")),
                        Key::new("lambda", NonNeg, None),
                        Key::new("sigma0", Pos, Some("1")),
                        Key::new("center", Real, Some("0")),
                        Key::new("momentum", Real, Some("0")),
                        Key::new("n_points", Count, Some("512")),
                        Key::new("x_min", Real, Some("-8")),
                        Key::new("x_max", Real, Some("8")),
                        Key::new("t_final", Pos, Some("10")),
                        Key::new("dt", Pos, Some("0.05")),
                        Key::new("records", Count, Some("100")),
                        Key::new("scheme", SCHEME, Some("split-step")),
                    ]
                }
            }
            Experiment::EvolveCl => {
                const {
                    &[
                        Key::new("mode", Choice(&["series", "ratio"]), Some("series")),
                        Key::new("mass", Pos, Some("1")),
                        Key::new("gamma", NonNeg, Some("1")),
                        Key::new("temperature", NonNeg, Some("0.25")),
                        Key::new("sigma0", Pos, Some("1")),
                        Key::new("center", Real, Some("0")),
                        Key::new("momentum", Real, Some("1")),
                        Key::new("n_points", Count, Some("128")),
                        Key::new("x_min", Real, Some("-10")),
                        Key::new("x_max", Real, Some("10")),
                        Key::new("t_final", Pos, Some("1")),
                        Key::new("dt", Pos, Some("0.005")),
                        Key::new("records", Count, Some("50")),
                        Key::new("scheme", SCHEME, Some("split-step")),
                        Key::new("mass_g", Pos, Some("1")),
                        Key::new("temperature_k", Pos, Some("300")),
                        Key::new("dx_cm", Pos, Some("1")),
                    ]
                }
            }
            Experiment::Wigner => {
                const {
                    &[
                        Key::new(
                            "state",
                            Choice(&["gaussian", "cat", "oscillator"]),
                            Some("cat"),
                        ),
                        Key::new(
                            "output",
                            Choice(&["wigner", "density", "both"]),
                            Some("wigner"),
                        ),
                        Key::new("n_points", Count, Some("256")),
                        Key::new("x_min", Real, Some("-10")),
                        Key::new("x_max", Real, Some("10")),
                        Key::new("separation", Pos, Some("6")),
                        Key::new("width", Pos, Some("1")),
                        Key::new("n", Count0, Some("9")),
                        Key::new("lambda_t", NonNeg, Some("0")),
                    ]
                }
            }
            Experiment::ZenoAnalytic => {
                const {
                    &[
                        Key::new("v", Pos, Some("1")),
                        Key::new("t", Pos, Some("1")),
                        Key::new("n_max", Count, Some("64")),
                        Key::new("gamma_decay", NonNeg, Some("1")),
                    ]
                }
            }
            Experiment::ZenoPointer => {
                const {
                    &[
                        Key::new("mode", Choice(&["series", "scan"]), Some("series")),
                        Key::new("v", NonNeg, Some("1")),
                        Key::new("e", Real, Some("0")),
                        Key::new("gamma", NonNeg, Some("0")),
                        Key::new("pointer_width", Pos, Some("1")),
                        Key::new("n_points", Count, Some("1024")),
                        Key::new("x_min", Real, Some("-72")),
                        Key::new("x_max", Real, Some("72")),
                        Key::new("t_final", Pos, Some("1.5707963267948966")),
                        Key::new("dt", Pos, Some("0.01")),
                        Key::new("records", Count, Some("157")),
                        Key::new("t_fixed", Pos, Some("1.5707963267948966")),
                        Key::new("gamma_min", NonNeg, Some("0")),
                        Key::new("gamma_max", NonNeg, Some("40")),
                        Key::new("gamma_count", Count, Some("41")),
                    ]
                }
            }
            Experiment::Chiral => {
                const {
                    &[
                        Key::new("delta", Pos, Some("1")),
                        Key::new("lambda_env", NonNeg, None),
                        Key::new("periods", Pos, Some("10")),
                        Key::new("records", Count, Some("200")),
                    ]
                }
            }
            Experiment::Qed => {
                const {
                    &[
                        Key::new("charge", Pos, Some("1")),
                        Key::new("mass", Pos, Some("1")),
                        Key::new("field", NonNeg, Some("2")),
                        Key::new("volume", Pos, Some("1")),
                        Key::new("t_min", Pos, Some("1")),
                        Key::new("t_max", Pos, Some("100")),
                        Key::new("count", Count, Some("21")),
                    ]
                }
            }
            Experiment::Gravity => {
                const {
                    &[
                        Key::new("density", Pos, Some("2.7e19")),
                        Key::new("particle_mass", Pos, Some("4.65e-23")),
                        Key::new("temperature", Pos, Some("300")),
                        Key::new("box_size", Pos, Some("1")),
                        Key::new("time", Pos, Some("1")),
                        Key::new("g_ref", Pos, Some("981")),
                    ]
                }
            }
            Experiment::Table1 => const { &[Key::new("presets", Text, Some(""))] },
            Experiment::Sweep => {
                const {
                    &[
                        Key::new("base", Text, None),
                        Key::new("parameter", Text, None),
                        Key::new("values", RealList, None),
                        Key::new("workers", Count, Some("4")),
                    ]
                }
            }
        }
    }
}

impl FromStr for Experiment {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.tag() == s)
            .ok_or_else(|| ConfigError::UnknownExperiment(s.to_string()))
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kind {
    Real,
    NonNeg,
    Pos,
    /// Integer ≥ 1.
    Count,
    /// Integer ≥ 0.
    Count0,
    Choice(&'static [&'static str]),
    Text,
    /// Comma-separated reals.
    RealList,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Key {
    pub name: &'static str,
    pub kind: Kind,
    pub default: Option<&'static str>,
}

impl Key {
    const fn new(name: &'static str, kind: Kind, default: Option<&'static str>) -> Self {
        Self {
            name,
            kind,
            default,
        }
    }

    fn validate(&self, value: &str) -> Result<(), ConfigError> {
        let fail = |reason: String| ConfigError::Validation {
            key: self.name.to_string(),
            reason,
        };
        let real = |v: &str| -> Result<f64, ConfigError> {
            let x: f64 = v
                .trim()
                .parse()
                .map_err(|_| fail(format!("`{v}` is not a number")))?;
            if x.is_finite() {
                Ok(x)
            } else {
                Err(fail(format!("`{v}` is not finite")))
            }
        };
        match self.kind {
            Kind::Real => {
                real(value)?;
            }
            Kind::NonNeg => {
                if real(value)? < 0.0 {
                    return Err(fail(format!("must be >= 0, got {value}")));
                }
            }
            Kind::Pos => {
                if real(value)? <= 0.0 {
                    return Err(fail(format!("must be > 0, got {value}")));
                }
            }
            Kind::Count | Kind::Count0 => {
                let n: usize = value
                    .parse()
                    .map_err(|_| fail(format!("`{value}` is not a non-negative integer")))?;
                if self.kind == Kind::Count && n == 0 {
                    return Err(fail("must be >= 1".into()));
                }
            }
            Kind::Choice(options) => {
                if !options.contains(&value) {
                    return Err(fail(format!("expected one of {}", options.join(", "))));
                }
            }
            Kind::Text => {}
            Kind::RealList => {
                if value.trim().is_empty() {
                    return Err(fail("list is empty".into()));
                }
                for v in value.split(',') {
                    real(v)?;
                }
            }
        }
        Ok(())
    }
}

/// Validated scenario with defaults filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub experiment: Experiment,
    pub output_dir: Option<PathBuf>,
    /// Reserved; every model is deterministic.
    pub seed: u64,
    params: BTreeMap<String, String>,
    /// Base experiment of a sweep and the parameters forwarded to it.
    base: Option<(Experiment, BTreeMap<String, String>)>,
}

impl ScenarioConfig {
    /// Builds a config from parameters, filling defaults and validating.
    pub fn from_params(
        experiment: Experiment,
        params: BTreeMap<String, String>,
    ) -> Result<Self, ConfigError> {
        if experiment == Experiment::Sweep {
            return Self::sweep(params);
        }
        let schema = experiment.keys();
        for k in params.keys() {
            if !schema.iter().any(|s| s.name == k) {
                return Err(ConfigError::UnknownKey(k.clone()));
            }
        }
        let mut filled = BTreeMap::new();
        for key in schema {
            let value = match (params.get(key.name), key.default) {
                (Some(v), _) => v.clone(),
                (None, Some(d)) => d.to_string(),
                (None, None) => return Err(ConfigError::MissingKey(key.name.to_string())),
            };
            key.validate(&value)?;
            filled.insert(key.name.to_string(), value);
        }
        Ok(Self {
            experiment,
            output_dir: None,
            seed: 0,
            params: filled,
            base: None,
        })
    }

    fn sweep(mut params: BTreeMap<String, String>) -> Result<Self, ConfigError> {
        let mut own = BTreeMap::new();
        for key in Experiment::Sweep.keys() {
            let value = match (params.remove(key.name), key.default) {
                (Some(v), _) => v,
                (None, Some(d)) => d.to_string(),
                (None, None) => return Err(ConfigError::MissingKey(key.name.to_string())),
            };
            key.validate(&value)?;
            own.insert(key.name.to_string(), value);
        }
        let base: Experiment = own["base"].parse()?;
        if base == Experiment::Sweep {
            return Err(ConfigError::Validation {
                key: "base".into(),
                reason: "a sweep cannot repeat a sweep".into(),
            });
        }
        let parameter = &own["parameter"];
        let Some(spec) = base.keys().iter().find(|k| k.name == parameter) else {
            return Err(ConfigError::Validation {
                key: "parameter".into(),
                reason: format!("`{parameter}` is not a parameter of {base}"),
            });
        };
        if params.contains_key(parameter) {
            return Err(ConfigError::Validation {
                key: parameter.clone(),
                reason: "swept parameter is set by `values`".into(),
            });
        }
        for v in own["values"].split(',') {
            spec.validate(v.trim())?;
            let mut probe = params.clone();
            probe.insert(parameter.clone(), v.trim().to_string());
            Self::from_params(base, probe)?;
        }
        Ok(Self {
            experiment: Experiment::Sweep,
            output_dir: None,
            seed: 0,
            params: own,
            base: Some((base, params)),
        })
    }

    pub fn params(&self) -> &BTreeMap<String, String> {
        &self.params
    }

    pub fn get(&self, key: &str) -> Result<&str, ConfigError> {
        self.params
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| ConfigError::MissingKey(key.to_string()))
    }

    pub fn f64(&self, key: &str) -> Result<f64, ConfigError> {
        let v = self.get(key)?;
        v.trim().parse().map_err(|_| ConfigError::Validation {
            key: key.to_string(),
            reason: format!("`{v}` is not a number"),
        })
    }

    pub fn usize(&self, key: &str) -> Result<usize, ConfigError> {
        let v = self.get(key)?;
        v.trim().parse().map_err(|_| ConfigError::Validation {
            key: key.to_string(),
            reason: format!("`{v}` is not an integer"),
        })
    }

    pub fn list(&self, key: &str) -> Result<Vec<f64>, ConfigError> {
        self.get(key)?
            .split(',')
            .map(|v| {
                v.trim().parse().map_err(|_| ConfigError::Validation {
                    key: key.to_string(),
                    reason: format!("`{v}` is not a number"),
                })
            })
            .collect()
    }

    /// Swept values of a sweep, as written.
    pub fn sweep_values(&self) -> Vec<String> {
        self.params
            .get("values")
            .map(|v| v.split(',').map(|x| x.trim().to_string()).collect())
            .unwrap_or_default()
    }

    /// Base scenario of a sweep with the swept parameter set to `value`.
    pub fn sweep_instance(&self, value: &str) -> Result<ScenarioConfig, ConfigError> {
        let (base, params) = self
            .base
            .as_ref()
            .ok_or_else(|| ConfigError::MissingKey("base".into()))?;
        let mut params = params.clone();
        params.insert(self.get("parameter")?.to_string(), value.trim().to_string());
        let mut cfg = Self::from_params(*base, params)?;
        cfg.seed = self.seed;
        Ok(cfg)
    }

    /// Canonical text form: reparsing it yields the same config.
    pub fn echo(&self) -> String {
        let mut out = format!("experiment = {}\n", self.experiment);
        if let Some(dir) = &self.output_dir {
            out.push_str(&format!("output_dir = {}\n", dir.display()));
        }
        out.push_str(&format!("seed = {}\n", self.seed));
        out.push_str(&format!("[{}]\n", self.experiment));
        for (k, v) in &self.params {
            out.push_str(&format!("{k} = {v}\n"));
        }
        if let Some((_, base)) = &self.base {
            for (k, v) in base {
                out.push_str(&format!("{k} = {v}\n"));
            }
        }
        out
    }
}

/// Parses scenario text.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let mut experiment: Option<Experiment> = None;
    let mut output_dir = None;
    let mut seed = 0u64;
    let mut params = BTreeMap::new();
    let mut in_section = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parse_err = |message: String| ConfigError::Parse {
            line: line_no,
            message,
        };
        if let Some(rest) = line.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| parse_err("unterminated section header".into()))?
                .trim();
            let exp = experiment.ok_or_else(|| parse_err("section before `experiment`".into()))?;
            if name != exp.tag() {
                return Err(parse_err(format!(
                    "section `{name}` does not match experiment `{exp}`"
                )));
            }
            in_section = true;
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| parse_err(format!("expected `key = value`, found `{line}`")))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(parse_err("empty key".into()));
        }
        match (key, in_section) {
            ("experiment", false) => {
                if experiment.is_some() {
                    return Err(parse_err("duplicate key `experiment`".into()));
                }
                experiment = Some(value.parse()?);
            }
            ("output_dir", false) => output_dir = Some(PathBuf::from(value)),
            ("seed", false) => {
                seed = value.parse().map_err(|_| ConfigError::Validation {
                    key: "seed".into(),
                    reason: format!("`{value}` is not a non-negative integer"),
                })?
            }
            _ => {
                if params.insert(key.to_string(), value.to_string()).is_some() {
                    return Err(parse_err(format!("duplicate key `{key}`")));
                }
            }
        }
    }
    let experiment = experiment.ok_or_else(|| ConfigError::MissingKey("experiment".into()))?;
    let mut cfg = ScenarioConfig::from_params(experiment, params)?;
    cfg.output_dir = output_dir;
    cfg.seed = seed;
    Ok(cfg)
}
