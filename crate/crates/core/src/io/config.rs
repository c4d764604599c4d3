use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::ConfigError;
use crate::spectroscopy::SweepConfig;
use crate::spin::SpinSystemConfig;
use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    CptSweep,
    PowerSeries,
    Energetics,
    Extrapolate,
    Levels,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::CptSweep => "cpt-sweep",
            Command::PowerSeries => "power-series",
            Command::Energetics => "energetics",
            Command::Extrapolate => "extrapolate",
            Command::Levels => "levels",
        }
    }

    /// TOML table holding the settings of this command.
    pub fn section(self) -> &'static str {
        match self {
            Command::CptSweep => "cpt_sweep",
            Command::PowerSeries => "power_series",
            Command::Energetics => "energetics",
            Command::Extrapolate => "extrapolate",
            Command::Levels => "levels",
        }
    }

    pub const ALL: [Command; 5] = [
        Command::CptSweep,
        Command::PowerSeries,
        Command::Energetics,
        Command::Extrapolate,
        Command::Levels,
    ];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerSeriesConfig {
    pub pump_rabi_hz: Vec<f64>,
    pub sweep: SweepConfig,
}

/// A charge state of a named defect.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateRef {
    pub defect: String,
    pub charge: i32,
}

/// Binding energy of `complex` against its isolated `parts`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BindingSpec {
    pub complex: StateRef,
    pub parts: Vec<StateRef>,
    /// Fermi level at which the formation energies are evaluated, eV.
    #[serde(default)]
    pub e_fermi_ev: f64,
}

fn default_gap() -> f64 {
    3.31
}

fn default_fermi_step() -> f64 {
    0.01
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergeticsConfig {
    pub records: PathBuf,
    pub chemical_potentials: PathBuf,
    #[serde(default = "default_gap")]
    pub gap_ev: f64,
    /// Fermi-level spacing of the diagram grid, eV.
    #[serde(default = "default_fermi_step")]
    pub fermi_step_ev: f64,
    /// Conditions to evaluate; empty means every condition in the table.
    #[serde(default)]
    pub conditions: Vec<String>,
    #[serde(default)]
    pub binding: Vec<BindingSpec>,
}

fn default_fit_method() -> String {
    "semilocal".into()
}

fn default_anchor_method() -> String {
    "hybrid".into()
}

fn default_n_min() -> u32 {
    432
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExtrapolateConfig {
    pub points: PathBuf,
    #[serde(default = "default_fit_method")]
    pub fit_method: String,
    #[serde(default = "default_anchor_method")]
    pub anchor_method: String,
    #[serde(default = "default_n_min")]
    pub n_min: u32,
    /// Supercell size of the anchor point; defaults to the largest available.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor_atoms: Option<u32>,
}

fn default_temperature() -> f64 {
    8.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelsConfig {
    #[serde(default)]
    pub system: SpinSystemConfig,
    #[serde(default = "default_temperature")]
    pub temperature_k: f64,
}

impl Default for LevelsConfig {
    fn default() -> Self {
        Self {
            system: SpinSystemConfig::default(),
            temperature_k: default_temperature(),
        }
    }
}

/// A run: one command and its settings. Output location is not part of the
/// configuration, so the config hash does not depend on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cpt_sweep: Option<SweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power_series: Option<PowerSeriesConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energetics: Option<EnergeticsConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extrapolate: Option<ExtrapolateConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<LevelsConfig>,
}

impl RunConfig {
    pub fn command(&self) -> Command {
        self.command.expect("resolved configs carry a command")
    }

    /// Canonical TOML form; its SHA-256 tags every output.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config types serialize to TOML")
    }

    fn has_section(&self, c: Command) -> bool {
        match c {
            Command::CptSweep => self.cpt_sweep.is_some(),
            Command::PowerSeries => self.power_series.is_some(),
            Command::Energetics => self.energetics.is_some(),
            Command::Extrapolate => self.extrapolate.is_some(),
            Command::Levels => self.levels.is_some(),
        }
    }
}

/// 1-based line of a byte offset.
fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].bytes().filter(|b| *b == b'\n').count() + 1
}

/// Finds `key = …` inside the tables under `section`; returns the dotted
/// path and line.
fn locate_key(text: &str, section: &str, key: &str) -> (String, Option<usize>) {
    let mut table = String::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with('[') {
            table = line.trim_matches(|c| c == '[' || c == ']').trim().to_string();
            continue;
        }
        let Some((k, _)) = line.split_once('=') else { continue };
        let in_section = table == section || table.starts_with(&format!("{section}."));
        if in_section && k.trim() == key {
            return (format!("{table}.{key}"), Some(i + 1));
        }
    }
    (format!("{section}.{key}"), None)
}

fn resolve_path(base: &Path, p: &Path, text: &str, section: &str, key: &str, file: &Path) -> Result<PathBuf, ConfigError> {
    let joined = if p.is_absolute() { p.to_path_buf() } else { base.join(p) };
    joined.canonicalize().map_err(|e| {
        let (path, line) = locate_key(text, section, key);
        ConfigError::file(file, format!("cannot open `{}`: {e}", joined.display()))
            .at_field(path)
            .at_line(line)
    })
}

fn semantic(file: &Path, text: &str, section: &str, err: Error) -> ConfigError {
    match err {
        Error::InvalidParameter { field, reason } => {
            let key = field.rsplit('.').next().unwrap_or(field);
            let (path, line) = locate_key(text, section, key);
            ConfigError::file(file, reason).at_field(path).at_line(line)
        }
        other => ConfigError::file(file, other.to_string()).at_field(section),
    }
}

fn validate_section(cfg: &RunConfig) -> Result<(), Error> {
    match cfg.command() {
        Command::CptSweep => cfg.cpt_sweep.as_ref().expect("checked").validate(),
        Command::PowerSeries => {
            let ps = cfg.power_series.as_ref().expect("checked");
            if ps.pump_rabi_hz.len() < 2 {
                return Err(Error::invalid("pump_rabi_hz", "need at least two values"));
            }
            if ps.pump_rabi_hz.iter().any(|r| !r.is_finite() || *r < 0.0) {
                return Err(Error::invalid("pump_rabi_hz", "values must be finite and >= 0"));
            }
            ps.sweep.validate()
        }
        Command::Energetics => {
            let e = cfg.energetics.as_ref().expect("checked");
            crate::energetics::HostBand::new(e.gap_ev)?;
            if !(e.fermi_step_ev > 0.0 && e.fermi_step_ev.is_finite()) {
                return Err(Error::invalid("fermi_step_ev", "must be > 0"));
            }
            Ok(())
        }
        Command::Extrapolate => {
            let x = cfg.extrapolate.as_ref().expect("checked");
            if x.n_min < 16 {
                return Err(Error::invalid("n_min", "must be >= 16"));
            }
            Ok(())
        }
        Command::Levels => {
            let l = cfg.levels.as_ref().expect("checked");
            l.system.validate()?;
            if !(l.temperature_k > 0.0 && l.temperature_k.is_finite()) {
                return Err(Error::invalid("temperature_k", "must be > 0"));
            }
            Ok(())
        }
    }
}

/// Read, validate and resolve a run configuration.
///
/// `command` comes from the command line; a `command` key in the file must
/// agree with it. Relative input paths are resolved against the directory
/// of the config file.
pub fn parse_config(path: &Path, command: Option<Command>) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError::file(path, e.to_string()))?;
    let de = toml::Deserializer::new(&text);
    let mut cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        let line = inner.span().map(|s| line_of(&text, s.start));
        ConfigError::file(path, inner.message().to_string())
            .at_field(if field == "." { String::new() } else { field })
            .at_line(line)
    })?;

    let cmd = match (cfg.command, command) {
        (Some(a), Some(b)) if a != b => {
            let (_, line) = locate_key(&text, "", "command");
            return Err(ConfigError::file(
                path,
                format!("config is for `{}` but `{}` was requested", a.name(), b.name()),
            )
            .at_field("command")
            .at_line(line));
        }
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => {
            return Err(ConfigError::file(path, "missing `command`").at_field("command"));
        }
    };
    cfg.command = Some(cmd);
    if cmd == Command::Levels && cfg.levels.is_none() {
        cfg.levels = Some(LevelsConfig::default());
    }
    for other in Command::ALL {
        if other != cmd && cfg.has_section(other) {
            return Err(ConfigError::file(
                path,
                format!("table `{}` does not belong to `{}`", other.section(), cmd.name()),
            )
            .at_field(other.section()));
        }
    }
    if !cfg.has_section(cmd) {
        return Err(
            ConfigError::file(path, format!("missing table `[{}]`", cmd.section())).at_field(cmd.section())
        );
    }

    let base = path.parent().unwrap_or(Path::new("."));
    if let Some(e) = cfg.energetics.as_mut() {
        e.records = resolve_path(base, &e.records, &text, "energetics", "records", path)?;
        e.chemical_potentials =
            resolve_path(base, &e.chemical_potentials, &text, "energetics", "chemical_potentials", path)?;
    }
    if let Some(x) = cfg.extrapolate.as_mut() {
        x.points = resolve_path(base, &x.points, &text, "extrapolate", "points", path)?;
    }
    validate_section(&cfg).map_err(|e| semantic(path, &text, cmd.section(), e))?;
    Ok(cfg)
}
