// SPDX-License-Identifier: Apache-2.0

//! Layered run configuration: bundled defaults, then an optional user file,
//! then `--key value` overrides. Files are TOML with one section per model.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;
use toml::{Table, Value};

use crate::error::{Error, Result};
use crate::fmo::{DrudeSpectralDensity, FmoConfig, FmoHamiltonian, InitialState};
use crate::models::{DonorAcceptorParams, PhotocellParams, ToyParams};
use crate::sweep::{linspace, SweepFixed, SweepSpec};

pub const DEFAULT_CONFIG: &str = include_str!("../../data/defaults.conf");

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config syntax error: {0}")]
    Parse(String),
    #[error("unknown config keys: {}", .0.join(", "))]
    UnknownKeys(Vec<String>),
    #[error("missing required key {0}")]
    Missing(String),
    #[error("{key} must be {expected} (got {found})")]
    Malformed { key: String, expected: &'static str, found: String },
    #[error("cannot read {path}: {reason}")]
    Unreadable { path: String, reason: String },
    #[error("unknown command {0:?}")]
    UnknownCommand(String),
    #[error("bad command-line argument: {0}")]
    Flag(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Float,
    Int,
    Str,
}

struct Key {
    name: &'static str,
    kind: Kind,
    required: bool,
}

const fn req(name: &'static str, kind: Kind) -> Key {
    Key { name, kind, required: true }
}

const fn opt(name: &'static str, kind: Kind) -> Key {
    Key { name, kind, required: false }
}

use Kind::{Float as F, Int as I, Str as S};

const SCHEMA: &[(&str, &[Key])] = &[
    (
        "toy",
        &[
            req("omega_abs", F),
            req("omega_rc", F),
            req("gamma", F),
            req("t_abs", F),
            req("t_loss", F),
            opt("gamma_h", F),
            opt("gamma_c", F),
        ],
    ),
    (
        "donor_acceptor",
        &[
            req("omega_a", F),
            req("omega_b", F),
            req("omega_alpha", F),
            req("omega_beta", F),
            req("gamma_h", F),
            req("gamma_c", F),
            req("gamma_load", F),
            req("gamma_return", F),
            req("t_h", F),
            req("t_c", F),
        ],
    ),
    (
        "photocell",
        &[
            req("omega_x1", F),
            req("omega_x2", F),
            req("omega_alpha", F),
            req("omega_beta", F),
            req("omega_b", F),
            req("gamma_h", F),
            req("gamma_x", F),
            req("gamma_c", F),
            req("gamma_load", F),
            req("gamma_return", F),
            req("t_h", F),
            req("t_c", F),
        ],
    ),
    (
        "fmo",
        &[
            opt("data_file", S),
            req("omega_ant", F),
            req("n_pigments", I),
            req("mu_ant_ind", F),
            req("mu_fmo", F),
            req("lambda_geo", F),
            req("t_sun", F),
            req("t_loss", F),
            req("gamma_sink", F),
            opt("gamma_ant_fmo", F),
            req("radiative_rate", F),
            req("reorganization", F),
            req("cutoff", F),
            req("initial_state", S),
            req("t_end_ps", F),
            req("n_points", I),
        ],
    ),
    (
        "sweep",
        &[
            req("model", S),
            req("axis", S),
            req("lo", F),
            req("hi", F),
            req("n_points", I),
            req("omega_abs", F),
            req("omega_ratio", F),
            req("temp_ratio", F),
            req("t_abs", F),
            req("gamma", F),
            opt("gamma_h", F),
            opt("gamma_c", F),
            opt("gamma_x", F),
            opt("gamma_return", F),
        ],
    ),
    (
        "compare",
        &[
            req("omega_abs", F),
            req("omega_rc", F),
            req("gamma", F),
            req("t_abs", F),
            req("lo", F),
            req("hi", F),
            req("n_points", I),
        ],
    ),
];

fn schema(section: &str) -> Option<&'static [Key]> {
    SCHEMA.iter().find(|(s, _)| *s == section).map(|(_, k)| *k)
}

fn key_schema(section: &str, key: &str) -> Option<&'static Key> {
    schema(section)?.iter().find(|k| k.name == key)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    ToyDecay,
    ToyHam,
    DonorAcceptor,
    Photocell,
    FmoTrace,
    Sweep,
    ComparePower,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::ToyDecay,
        Command::ToyHam,
        Command::DonorAcceptor,
        Command::Photocell,
        Command::FmoTrace,
        Command::Sweep,
        Command::ComparePower,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Command::ToyDecay => "toy-decay",
            Command::ToyHam => "toy-ham",
            Command::DonorAcceptor => "donor-acceptor",
            Command::Photocell => "photocell",
            Command::FmoTrace => "fmo-trace",
            Command::Sweep => "sweep",
            Command::ComparePower => "compare-power",
        }
    }

    /// Config section read by this command.
    pub fn section(&self) -> &'static str {
        match self {
            Command::ToyDecay | Command::ToyHam => "toy",
            Command::DonorAcceptor => "donor_acceptor",
            Command::Photocell => "photocell",
            Command::FmoTrace => "fmo",
            Command::Sweep => "sweep",
            Command::ComparePower => "compare",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Command {
    type Err = ConfigError;
    fn from_str(s: &str) -> std::result::Result<Self, ConfigError> {
        Command::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| ConfigError::UnknownCommand(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = ConfigError;
    fn from_str(s: &str) -> std::result::Result<Self, ConfigError> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(ConfigError::Malformed {
                key: "format".into(),
                expected: "csv or json",
                found: s.into(),
            }),
        }
    }
}

pub type Sections = BTreeMap<String, BTreeMap<String, Value>>;

/// Fully merged configuration for one command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub sections: Sections,
    /// `None` writes to stdout.
    pub output_path: Option<PathBuf>,
    pub format: OutputFormat,
}

fn parse_layer(text: &str) -> std::result::Result<Sections, ConfigError> {
    let table: Table = text.parse().map_err(|e: toml::de::Error| ConfigError::Parse(e.to_string()))?;
    let mut out = Sections::new();
    let mut unknown = Vec::new();
    for (section, body) in table {
        let Value::Table(body) = body else {
            unknown.push(section);
            continue;
        };
        if schema(&section).is_none() {
            unknown.push(format!("[{section}]"));
            continue;
        }
        let entry = out.entry(section.clone()).or_default();
        for (key, value) in body {
            match key_schema(&section, &key) {
                Some(k) => {
                    entry.insert(key.clone(), coerce(&format!("{section}.{key}"), k.kind, value)?);
                }
                None => unknown.push(format!("{section}.{key}")),
            }
        }
    }
    if unknown.is_empty() {
        Ok(out)
    } else {
        Err(ConfigError::UnknownKeys(unknown))
    }
}

fn describe(v: &Value) -> String {
    match v {
        Value::String(s) => format!("{s:?}"),
        other => other.to_string(),
    }
}

fn coerce(key: &str, kind: Kind, value: Value) -> std::result::Result<Value, ConfigError> {
    let bad = |expected| ConfigError::Malformed {
        key: key.to_string(),
        expected,
        found: describe(&value),
    };
    match (kind, &value) {
        (Kind::Float, Value::Float(_)) => Ok(value),
        (Kind::Float, Value::Integer(i)) => Ok(Value::Float(*i as f64)),
        (Kind::Float, _) => Err(bad("a number")),
        (Kind::Int, Value::Integer(_)) => Ok(value),
        (Kind::Int, _) => Err(bad("an integer")),
        (Kind::Str, Value::String(_)) => Ok(value),
        (Kind::Str, _) => Err(bad("a string")),
    }
}

/// Parses a flag value as a TOML scalar, falling back to a bare string.
fn flag_value(raw: &str) -> Value {
    format!("v = {raw}")
        .parse::<Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(raw.to_string()))
}

fn merge(into: &mut Sections, layer: Sections) {
    for (section, body) in layer {
        into.entry(section).or_default().extend(body);
    }
}

impl RunConfig {
    /// Bundled defaults, then `file_text`, then `flags` (`(key, value)` pairs,
    /// key either `name` for the command's own section or `section.name`).
    pub fn parse(command: Command, file_text: Option<&str>, flags: &[(String, String)]) -> Result<Self> {
        Self::parse_layers(command, &[DEFAULT_CONFIG, file_text.unwrap_or("")], flags)
    }

    /// Like [`RunConfig::parse`] without the bundled defaults.
    pub fn parse_strict(command: Command, file_text: &str, flags: &[(String, String)]) -> Result<Self> {
        Self::parse_layers(command, &[file_text], flags)
    }

    fn parse_layers(command: Command, layers: &[&str], flags: &[(String, String)]) -> Result<Self> {
        let mut sections = Sections::new();
        for text in layers {
            merge(&mut sections, parse_layer(text)?);
        }
        let mut unknown = Vec::new();
        for (key, raw) in flags {
            let (section, name) = key.split_once('.').unwrap_or((command.section(), key.as_str()));
            let Some(k) = key_schema(section, name) else {
                unknown.push(key.clone());
                continue;
            };
            let value = coerce(&format!("{section}.{name}"), k.kind, flag_value(raw))?;
            sections.entry(section.to_string()).or_default().insert(name.to_string(), value);
        }
        if !unknown.is_empty() {
            return Err(ConfigError::UnknownKeys(unknown).into());
        }
        let cfg = RunConfig {
            command,
            sections,
            output_path: None,
            format: OutputFormat::Csv,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks required keys of the command's section and the physical
    /// constraints of the resulting model.
    pub fn validate(&self) -> Result<()> {
        let section = self.command.section();
        for k in schema(section).unwrap_or(&[]) {
            if k.required && self.value(section, k.name).is_none() {
                return Err(ConfigError::Missing(format!("{section}.{}", k.name)).into());
            }
        }
        match self.command {
            Command::ToyDecay => self.toy_params().map(drop),
            Command::ToyHam => self.toy_params()?.validate_weak_coupling(),
            Command::DonorAcceptor => self.donor_acceptor_params().map(drop),
            Command::Photocell => self.photocell_params().map(drop),
            Command::FmoTrace => self.fmo_config()?.0.validate(),
            Command::Sweep => self.sweep_spec()?.validate(),
            Command::ComparePower => self.compare_params().map(drop),
        }
    }

    fn value(&self, section: &str, key: &str) -> Option<&Value> {
        self.sections.get(section)?.get(key)
    }

    fn float(&self, section: &str, key: &str) -> Result<f64> {
        self.opt_float(section, key)?
            .ok_or_else(|| ConfigError::Missing(format!("{section}.{key}")).into())
    }

    fn opt_float(&self, section: &str, key: &str) -> Result<Option<f64>> {
        Ok(self.value(section, key).and_then(Value::as_float))
    }

    fn int(&self, section: &str, key: &str) -> Result<i64> {
        self.value(section, key)
            .and_then(Value::as_integer)
            .ok_or_else(|| ConfigError::Missing(format!("{section}.{key}")).into())
    }

    fn string(&self, section: &str, key: &str) -> Result<&str> {
        self.value(section, key)
            .and_then(Value::as_str)
            .ok_or_else(|| ConfigError::Missing(format!("{section}.{key}")).into())
    }

    fn choice<T: FromStr>(&self, section: &str, key: &str, expected: &'static str) -> Result<T> {
        let raw = self.string(section, key)?;
        raw.parse().map_err(|_| {
            ConfigError::Malformed {
                key: format!("{section}.{key}"),
                expected,
                found: format!("{raw:?}"),
            }
            .into()
        })
    }

    fn count(&self, section: &str, key: &str) -> Result<usize> {
        let n = self.int(section, key)?;
        usize::try_from(n).map_err(|_| Error::invalid(format!("{section}.{key}"), "nonnegative"))
    }

    pub fn toy_params(&self) -> Result<ToyParams> {
        let f = |k| self.float("toy", k);
        let mut p = ToyParams::new(f("omega_abs")?, f("omega_rc")?, f("gamma")?, f("t_abs")?, f("t_loss")?)?;
        p.gamma_h = self.opt_float("toy", "gamma_h")?;
        p.gamma_c = self.opt_float("toy", "gamma_c")?;
        p.validate()?;
        Ok(p)
    }

    pub fn donor_acceptor_params(&self) -> Result<DonorAcceptorParams> {
        let f = |k| self.float("donor_acceptor", k);
        let p = DonorAcceptorParams {
            omega_a: f("omega_a")?,
            omega_b: f("omega_b")?,
            omega_alpha: f("omega_alpha")?,
            omega_beta: f("omega_beta")?,
            gamma_h: f("gamma_h")?,
            gamma_c: f("gamma_c")?,
            gamma_load: f("gamma_load")?,
            gamma_return: f("gamma_return")?,
            t_h: f("t_h")?,
            t_c: f("t_c")?,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn photocell_params(&self) -> Result<PhotocellParams> {
        let f = |k| self.float("photocell", k);
        let p = PhotocellParams {
            omega_x1: f("omega_x1")?,
            omega_x2: f("omega_x2")?,
            omega_alpha: f("omega_alpha")?,
            omega_beta: f("omega_beta")?,
            omega_b: f("omega_b")?,
            gamma_h: f("gamma_h")?,
            gamma_x: f("gamma_x")?,
            gamma_c: f("gamma_c")?,
            gamma_load: f("gamma_load")?,
            gamma_return: f("gamma_return")?,
            t_h: f("t_h")?,
            t_c: f("t_c")?,
        };
        p.validate()?;
        Ok(p)
    }

    /// FMO configuration and its output grid in ps.
    pub fn fmo_config(&self) -> Result<(FmoConfig, Vec<f64>)> {
        let f = |k| self.float("fmo", k);
        let hamiltonian = match self.value("fmo", "data_file").and_then(Value::as_str) {
            Some(path) => FmoHamiltonian::from_file(Path::new(path)).map_err(|e| match e {
                Error::Io(io) => ConfigError::Unreadable {
                    path: path.to_string(),
                    reason: io.to_string(),
                }
                .into(),
                other => other,
            })?,
            None => FmoHamiltonian::bundled(),
        };
        let n_pigments = u32::try_from(self.int("fmo", "n_pigments")?)
            .map_err(|_| Error::invalid("fmo.n_pigments", "a positive integer"))?;
        let initial_state = match self.string("fmo", "initial_state")? {
            "ground" => InitialState::Ground,
            "antenna" => InitialState::Antenna,
            other => {
                return Err(ConfigError::Malformed {
                    key: "fmo.initial_state".into(),
                    expected: "\"ground\" or \"antenna\"",
                    found: format!("{other:?}"),
                }
                .into())
            }
        };
        let gamma_sink = f("gamma_sink")?;
        let cfg = FmoConfig {
            hamiltonian,
            omega_ant: f("omega_ant")?,
            n_pigments,
            mu_ant_ind: f("mu_ant_ind")?,
            mu_fmo: f("mu_fmo")?,
            lambda_geo: f("lambda_geo")?,
            t_sun: f("t_sun")?,
            t_loss: f("t_loss")?,
            gamma_sink,
            gamma_ant_fmo: self.opt_float("fmo", "gamma_ant_fmo")?.unwrap_or(gamma_sink / 10.0),
            radiative_rate: f("radiative_rate")?,
            spectral_density: DrudeSpectralDensity {
                reorganization: f("reorganization")?,
                cutoff: f("cutoff")?,
            },
            initial_state,
        };
        cfg.validate()?;
        let t_end = f("t_end_ps")?;
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(Error::invalid("fmo.t_end_ps", "> 0"));
        }
        let grid = linspace(0.0, t_end, self.count("fmo", "n_points")?)?;
        Ok((cfg, grid))
    }

    pub fn sweep_spec(&self) -> Result<SweepSpec> {
        let f = |k| self.float("sweep", k);
        let o = |k| self.opt_float("sweep", k);
        let spec = SweepSpec {
            model: self.choice("sweep", "model", "one of toy_decay, toy_ham, dorfman, creatore")?,
            axis: self.choice("sweep", "axis", "one of omega_ratio, temp_ratio")?,
            grid: linspace(f("lo")?, f("hi")?, self.count("sweep", "n_points")?)?,
            fixed: SweepFixed {
                omega_abs: f("omega_abs")?,
                omega_ratio: f("omega_ratio")?,
                temp_ratio: f("temp_ratio")?,
                t_abs: f("t_abs")?,
                gamma: f("gamma")?,
                gamma_h: o("gamma_h")?,
                gamma_c: o("gamma_c")?,
                gamma_x: o("gamma_x")?,
                gamma_return: o("gamma_return")?,
            },
        };
        Ok(spec)
    }

    /// Toy parameters (with `t_loss = t_abs`) and the temperature-ratio grid.
    pub fn compare_params(&self) -> Result<(ToyParams, Vec<f64>)> {
        let f = |k| self.float("compare", k);
        let t_abs = f("t_abs")?;
        let p = ToyParams::new(f("omega_abs")?, f("omega_rc")?, f("gamma")?, t_abs, t_abs)?;
        p.validate_weak_coupling()?;
        let lo = f("lo")?;
        if !(lo > 0.0) {
            return Err(Error::invalid("compare.lo", "> 0"));
        }
        let grid = linspace(lo, f("hi")?, self.count("compare", "n_points")?)?;
        Ok((p, grid))
    }

    /// Canonical TOML text of the merged configuration.
    pub fn to_config_text(&self) -> String {
        let mut root = Table::new();
        for (section, body) in &self.sections {
            let t: Table = body.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
            root.insert(section.clone(), Value::Table(t));
        }
        toml::to_string(&root).expect("config tables serialize")
    }
}
