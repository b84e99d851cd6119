//! Run configuration: a TOML file with nested sections, overridable from the
//! command line with `--section.key=value` flags.

use anyhow::{anyhow, bail, Context, Result};
use ossidamp_core::quadrature::QuadratureSpec;
use ossidamp_core::susceptibility::{Extrapolation, SusceptibilityModel, TabulatedChi};
use ossidamp_core::thermo::{Ensemble, OscillatorParams, Regime};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub model: ModelConfig,
    #[serde(default)]
    pub oscillator: OscillatorConfig,
    pub ensemble: EnsembleConfig,
    #[serde(default)]
    pub quadrature: QuadratureConfig,
    #[serde(default)]
    pub oracle: OracleConfig,
    #[serde(default)]
    pub autocorr: AutocorrConfig,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub validate: ValidateConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelConfig {
    Lorentz {
        chi0: f64,
        omega_l: f64,
        gamma_l: f64,
    },
    Drude {
        gamma: f64,
        lambda: f64,
    },
    PseudoOhmic {
        gamma: f64,
    },
    Tabulated {
        path: PathBuf,
        #[serde(default)]
        extrapolation: ExtrapolationConfig,
    },
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum ExtrapolationConfig {
    #[default]
    Forbid,
    Zero,
    Hold,
}

impl From<ExtrapolationConfig> for Extrapolation {
    fn from(value: ExtrapolationConfig) -> Self {
        match value {
            ExtrapolationConfig::Forbid => Extrapolation::Forbid,
            ExtrapolationConfig::Zero => Extrapolation::Zero,
            ExtrapolationConfig::Hold => Extrapolation::Hold,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OscillatorConfig {
    #[serde(default = "one")]
    pub omega0: f64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default = "one")]
    pub c: f64,
}

fn default_gamma() -> f64 {
    0.3
}

impl Default for OscillatorConfig {
    fn default() -> Self {
        Self {
            omega0: 1.0,
            gamma: 0.3,
            c: 1.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    pub regime: RegimeConfig,
    /// Strictly increasing temperature grid.
    pub temperatures: Vec<f64>,
    #[serde(default = "one")]
    pub hbar: f64,
    #[serde(default = "one")]
    pub k_b: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum RegimeConfig {
    Quantum,
    Classical,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureConfig {
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
    #[serde(default)]
    pub abs_tol: f64,
    #[serde(default = "default_max_subdivisions")]
    pub max_subdivisions: usize,
    #[serde(default = "default_tail_probe_decades")]
    pub tail_probe_decades: usize,
    #[serde(default)]
    pub cutoff: Option<f64>,
}

fn default_rel_tol() -> f64 {
    1e-10
}

fn default_max_subdivisions() -> usize {
    4000
}

fn default_tail_probe_decades() -> usize {
    3
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 0.0,
            max_subdivisions: 4000,
            tail_probe_decades: 3,
            cutoff: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    #[serde(default = "default_n_modes")]
    pub n_modes: Vec<usize>,
    #[serde(default = "default_omega_max")]
    pub omega_max: Vec<f64>,
}

fn default_n_modes() -> Vec<usize> {
    vec![250, 500, 1000, 2000]
}

fn default_omega_max() -> Vec<f64> {
    vec![100.0]
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            n_modes: vec![250, 500, 1000, 2000],
            omega_max: vec![100.0],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutocorrConfig {
    #[serde(default = "default_dt_max")]
    pub dt_max: f64,
    #[serde(default = "default_autocorr_points")]
    pub n_points: usize,
}

fn default_dt_max() -> f64 {
    20.0
}

fn default_autocorr_points() -> usize {
    41
}

impl Default for AutocorrConfig {
    fn default() -> Self {
        Self {
            dt_max: 20.0,
            n_points: 41,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Dotted config path, e.g. `model.chi0`.
    pub parameter: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateConfig {
    /// Demonstration configs with deliberately unphysical models: physicality
    /// failures are expected and do not fail the run.
    #[serde(default)]
    pub expect_invalid: bool,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default = "default_workers")]
    pub workers: usize,
}

fn default_workers() -> usize {
    1
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { workers: 1 }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            bail!(
                "schema_version: expected {SCHEMA_VERSION}, found {}",
                self.schema_version
            );
        }
        if self.ensemble.temperatures.is_empty() {
            bail!("ensemble.temperatures: at least one temperature required");
        }
        for (i, t) in self.ensemble.temperatures.iter().enumerate() {
            if !(*t > 0.0) {
                bail!("ensemble.temperatures[{i}]: must be > 0, got {t}");
            }
            if i > 0 && self.ensemble.temperatures[i - 1] >= *t {
                bail!("ensemble.temperatures: must be strictly increasing at index {i}");
            }
        }
        if !(self.ensemble.hbar > 0.0) || !(self.ensemble.k_b > 0.0) {
            bail!("ensemble.hbar and ensemble.k_b must be > 0");
        }
        if !(self.quadrature.rel_tol > 0.0) {
            bail!("quadrature.rel_tol: must be > 0");
        }
        if self.quadrature.abs_tol < 0.0 {
            bail!("quadrature.abs_tol: must be >= 0");
        }
        if self.quadrature.tail_probe_decades < 2 {
            bail!("quadrature.tail_probe_decades: must be >= 2");
        }
        if !(self.oscillator.omega0 > 0.0) || !(self.oscillator.c > 0.0) {
            bail!("oscillator.omega0 and oscillator.c must be > 0");
        }
        if self.oscillator.gamma < 0.0 {
            bail!("oscillator.gamma: must be >= 0");
        }
        if self.oracle.n_modes.is_empty() || self.oracle.omega_max.is_empty() {
            bail!("oracle.n_modes and oracle.omega_max must be non-empty");
        }
        if self.autocorr.n_points < 2 {
            bail!("autocorr.n_points: must be >= 2");
        }
        if !(self.autocorr.dt_max > 0.0) {
            bail!("autocorr.dt_max: must be > 0");
        }
        if self.output.workers < 1 {
            bail!("output.workers: must be >= 1");
        }
        if let Some(sweep) = &self.sweep {
            if sweep.values.is_empty() {
                bail!("sweep.values: must be non-empty");
            }
        }
        Ok(())
    }

    pub fn build_model(&self, base_dir: &Path) -> Result<SusceptibilityModel<f64>> {
        let model = match &self.model {
            ModelConfig::Lorentz {
                chi0,
                omega_l,
                gamma_l,
            } => SusceptibilityModel::lorentz(*chi0, *omega_l, *gamma_l),
            ModelConfig::Drude { gamma, lambda } => {
                SusceptibilityModel::drude(*gamma, *lambda, self.oscillator.omega0)
            }
            ModelConfig::PseudoOhmic { gamma } => {
                SusceptibilityModel::pseudo_ohmic(*gamma, self.oscillator.omega0)
            }
            ModelConfig::Tabulated {
                path,
                extrapolation,
            } => {
                let resolved = if path.is_absolute() {
                    path.clone()
                } else {
                    base_dir.join(path)
                };
                TabulatedChi::from_path(&resolved, (*extrapolation).into())
                    .map(|t| SusceptibilityModel::Tabulated(Box::new(t)))
            }
        };
        model.map_err(|e| anyhow!("model: {e}"))
    }

    pub fn build_quadrature_spec(&self) -> QuadratureSpec<f64> {
        QuadratureSpec {
            rel_tol: self.quadrature.rel_tol,
            abs_tol: self.quadrature.abs_tol,
            max_subdivisions: self.quadrature.max_subdivisions,
            tail_probe_decades: self.quadrature.tail_probe_decades,
            cutoff: self.quadrature.cutoff,
            omega_split: None,
            breakpoints: Vec::new(),
        }
    }

    pub fn build_oscillator(&self) -> OscillatorParams<f64> {
        OscillatorParams::new(
            self.oscillator.omega0,
            self.oscillator.gamma,
            self.oscillator.c,
        )
    }

    pub fn ensemble_at(&self, temperature: f64) -> Ensemble<f64> {
        Ensemble {
            temperature,
            hbar: self.ensemble.hbar,
            k_b: self.ensemble.k_b,
            regime: match self.ensemble.regime {
                RegimeConfig::Quantum => Regime::Quantum,
                RegimeConfig::Classical => Regime::Classical,
            },
        }
    }

    /// Worker count: `OSSIDAMP_THREADS` overrides the config key.
    pub fn workers(&self) -> usize {
        match std::env::var("OSSIDAMP_THREADS") {
            Ok(v) => v
                .parse()
                .ok()
                .filter(|n| *n >= 1)
                .unwrap_or(self.output.workers),
            Err(_) => self.output.workers,
        }
    }
}

/// A `--section.key=value` command-line override.
#[derive(Debug, Clone, PartialEq)]
pub struct Override {
    pub path: Vec<String>,
    pub raw_value: String,
}

/// Splits argv into overrides (`--dotted.path=value`) and everything else.
pub fn extract_overrides(args: Vec<String>) -> (Vec<String>, Vec<Override>) {
    let mut rest = Vec::new();
    let mut overrides = Vec::new();
    for arg in args {
        match parse_override(&arg) {
            Some(o) => overrides.push(o),
            None => rest.push(arg),
        }
    }
    (rest, overrides)
}

fn parse_override(arg: &str) -> Option<Override> {
    let body = arg.strip_prefix("--")?;
    let (path, value) = body.split_once('=')?;
    if !path.contains('.') {
        return None;
    }
    let segments: Vec<String> = path.split('.').map(str::to_owned).collect();
    if segments.iter().any(|s| {
        s.is_empty()
            || !s
                .chars()
                .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
    }) {
        return None;
    }
    Some(Override {
        path: segments,
        raw_value: value.to_owned(),
    })
}

/// Loads the config file and applies overrides, then validates.
pub fn load_config(path: &Path, overrides: &[Override]) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let mut value: toml::Value = text
        .parse()
        .with_context(|| format!("parsing config {}", path.display()))?;
    for o in overrides {
        apply_override(&mut value, o)?;
    }
    let config: RunConfig = value
        .try_into()
        .map_err(|e| anyhow!("config schema: {e}"))?;
    config.validate()?;
    Ok(config)
}

pub fn apply_override(root: &mut toml::Value, o: &Override) -> Result<()> {
    let parsed = parse_toml_value(&o.raw_value);
    let mut node = root;
    for (i, segment) in o.path.iter().enumerate() {
        let table = node
            .as_table_mut()
            .ok_or_else(|| anyhow!("override --{}: not a table", o.path[..i].join(".")))?;
        if i + 1 == o.path.len() {
            table.insert(segment.clone(), parsed);
            return Ok(());
        }
        node = table
            .entry(segment.clone())
            .or_insert_with(|| toml::Value::Table(Default::default()));
    }
    unreachable!("override paths have at least two segments")
}

/// Values parse as TOML scalars/arrays where possible, else as strings.
fn parse_toml_value(raw: &str) -> toml::Value {
    let doc = format!("v = {raw}");
    if let Ok(table) = doc.parse::<toml::Table>() {
        if let Some(v) = table.get("v") {
            return v.clone();
        }
    }
    toml::Value::String(raw.to_owned())
}

/// FNV-1a over the canonical (sorted-key) JSON form of the config.
pub fn config_hash(config: &RunConfig) -> Result<String> {
    let canonical = serde_json::to_value(config)?;
    let bytes = serde_json::to_string(&canonical)?;
    let mut hash: u64 = 0xcbf29ce484222325;
    for b in bytes.as_bytes() {
        hash ^= u64::from(*b);
        hash = hash.wrapping_mul(0x100000001b3);
    }
    Ok(format!("{hash:016x}"))
}
