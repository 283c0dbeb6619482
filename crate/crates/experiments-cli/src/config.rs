//! Experiment configuration.
//!
//! Config files are INI-style: `[doublewell]`, `[ising]` or `[validate]`
//! sections of `key = value` lines, `#` comments, lists comma-separated.
//! Keys outside any section apply to every command. Keys are the long CLI
//! flag names, and a flag given on the command line overrides the file.
//!
//! ```text
//! [ising]
//! beta = 0.1:4.0:0.1   # start:stop:step, inclusive
//! m = 3..11            # inclusive range; lists like 1,2,5 also work
//! mode = oracle
//! no-penalty = false
//! ```

use crate::{CliError, Result};
use qmh_filter::FilterMode;
use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

/// Default penalty phase, the four-digit value used in every experiment.
#[allow(clippy::approx_constant)]
pub const DEFAULT_VARPHI: f64 = 1.0472;

/// Largest register the simulators accept.
pub const MAX_SIM_CAP: usize = qmh_sim::DEFAULT_SIM_CAP;

/// Experiment kinds with their own defaults.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    DoubleWell,
    Ising,
    Validate,
}

impl Command {
    fn section(self) -> &'static str {
        match self {
            Command::DoubleWell => "doublewell",
            Command::Ising => "ising",
            Command::Validate => "validate",
        }
    }

    fn keys(self) -> &'static [&'static str] {
        match self {
            Command::DoubleWell => DOUBLEWELL_KEYS,
            Command::Ising => ISING_KEYS,
            Command::Validate => VALIDATE_KEYS,
        }
    }
}

const DOUBLEWELL_KEYS: &[&str] = &[
    "m", "varphi", "mode", "no-penalty", "out", "jobs", "sim-cap", "dense-cap", "side", "temperature", "compare-unpenalised",
];
const ISING_KEYS: &[&str] =
    &["m", "varphi", "mode", "no-penalty", "out", "jobs", "sim-cap", "dense-cap", "beta", "spins", "coupling", "field"];
const VALIDATE_KEYS: &[&str] = &["varphi", "dense-cap", "mutate"];

/// Raw `key = value` settings before typing.
pub type Settings = BTreeMap<String, String>;

/// Reads the global and command sections of an INI file.
pub fn read_config_file(path: &Path, command: Command) -> Result<Settings> {
    let ini = ini::Ini::load_from_file(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let mut out = Settings::new();
    for (section, props) in ini.iter() {
        if section.is_none() || section == Some(command.section()) {
            for (k, v) in props.iter() {
                out.insert(k.to_string(), v.to_string());
            }
        }
    }
    Ok(out)
}

/// Typed experiment settings.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub command: Command,
    /// Grid side of the double-well torus.
    pub side: usize,
    pub temperature: f64,
    pub spins: usize,
    pub coupling: f64,
    pub field: f64,
    /// Precision list.
    pub m: Vec<usize>,
    /// Inverse temperatures for Ising sweeps.
    pub beta: Vec<f64>,
    pub varphi: f64,
    pub mode: FilterMode,
    pub penalised: bool,
    /// Adds the unpenalised `m = 5` run to the double-well table.
    pub compare_unpenalised: bool,
    pub out: PathBuf,
    pub jobs: usize,
    pub sim_cap: usize,
    pub dense_cap: usize,
    /// Deliberate fault for mutation checks of `validate`.
    pub mutate: Option<String>,
}

impl ExperimentConfig {
    /// Defaults for `command`.
    pub fn defaults(command: Command) -> Self {
        let (m, mode, out) = match command {
            Command::DoubleWell => ((1..=4).collect(), FilterMode::Coherent, "results/doublewell.json"),
            Command::Ising => ((3..=11).collect(), FilterMode::Oracle, "results/ising.json"),
            Command::Validate => (vec![1], FilterMode::Oracle, "results/validate.json"),
        };
        Self {
            command,
            side: 4,
            temperature: 1.0,
            spins: 4,
            coupling: 1.0,
            field: 0.0,
            m,
            beta: parse_beta("0.1:4.0:0.1").expect("default grid"),
            varphi: DEFAULT_VARPHI,
            mode,
            penalised: true,
            compare_unpenalised: false,
            out: PathBuf::from(out),
            jobs: 1,
            sim_cap: MAX_SIM_CAP,
            dense_cap: qmh_sim::DEFAULT_DENSE_CAP,
            mutate: None,
        }
    }

    /// Applies `settings` over the defaults, rejecting unknown keys.
    pub fn from_settings(command: Command, settings: &Settings) -> Result<Self> {
        let mut cfg = Self::defaults(command);
        for (key, value) in settings {
            if !command.keys().contains(&key.as_str()) {
                return Err(CliError::Config(format!("unknown key `{key}` for {}", command.section())));
            }
            let value = value.trim();
            match key.as_str() {
                "side" => cfg.side = parse_num(key, value)?,
                "temperature" => cfg.temperature = parse_num(key, value)?,
                "spins" => cfg.spins = parse_num(key, value)?,
                "coupling" => cfg.coupling = parse_num(key, value)?,
                "field" => cfg.field = parse_num(key, value)?,
                "m" => cfg.m = parse_m(value)?,
                "beta" => cfg.beta = parse_beta(value)?,
                "varphi" => cfg.varphi = parse_num(key, value)?,
                "mode" => cfg.mode = value.parse()?,
                "no-penalty" => cfg.penalised = !parse_bool(key, value)?,
                "compare-unpenalised" => cfg.compare_unpenalised = parse_bool(key, value)?,
                "out" => cfg.out = PathBuf::from(value),
                "jobs" => cfg.jobs = parse_num(key, value)?,
                "sim-cap" => cfg.sim_cap = parse_num(key, value)?,
                "dense-cap" => cfg.dense_cap = parse_num(key, value)?,
                "mutate" => cfg.mutate = Some(value.to_string()),
                _ => unreachable!("key list and match arms agree"),
            }
        }
        cfg.check()?;
        Ok(cfg)
    }

    fn check(&self) -> Result<()> {
        let bad = |msg: String| Err(CliError::Config(msg));
        if self.m.is_empty() || self.m.contains(&0) {
            return bad("m list must be nonempty with entries ≥ 1".into());
        }
        if self.beta.is_empty() || self.beta.iter().any(|b| b.is_nan() || *b < 0.0 || !b.is_finite()) {
            return bad("beta grid must be nonempty and nonnegative".into());
        }
        if !(0.0..TAU).contains(&self.varphi) {
            return bad(format!("varphi {} outside [0, 2π)", self.varphi));
        }
        if self.jobs == 0 {
            return bad("jobs must be at least 1".into());
        }
        if self.sim_cap > MAX_SIM_CAP {
            return bad(format!("sim-cap {} above the simulator limit {MAX_SIM_CAP}", self.sim_cap));
        }
        if let Some(m) = &self.mutate {
            if m != "penalty-off" {
                return bad(format!("unknown mutation `{m}` (known: penalty-off)"));
            }
        }
        Ok(())
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| CliError::Config(format!("bad value `{value}` for `{key}`")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(CliError::Config(format!("bad boolean `{value}` for `{key}`"))),
    }
}

/// Parses `1,2,4` or inclusive ranges `3..11`, mixed freely.
pub fn parse_m(value: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in value.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let (a, b): (usize, usize) = (parse_num("m", a.trim())?, parse_num("m", b.trim())?);
            if a > b {
                return Err(CliError::Config(format!("empty range `{part}`")));
            }
            out.extend(a..=b);
        } else {
            out.push(parse_num("m", part)?);
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Parses `start:stop:step` (inclusive) or a comma-separated list.
/// Grid points are rounded to 12 decimals.
pub fn parse_beta(value: &str) -> Result<Vec<f64>> {
    let round = |x: f64| (x * 1e12).round() / 1e12;
    let parts: Vec<&str> = value.split(':').map(str::trim).collect();
    let mut out = match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step): (f64, f64, f64) = (parse_num("beta", start)?, parse_num("beta", stop)?, parse_num("beta", step)?);
            if step.is_nan() || step <= 0.0 || stop < start {
                return Err(CliError::Config(format!("bad beta grid `{value}`")));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize;
            (0..=count).map(|k| round(start + k as f64 * step)).collect()
        }
        [_] => value.split(',').map(|p| parse_num("beta", p.trim())).collect::<Result<Vec<f64>>>()?,
        _ => return Err(CliError::Config(format!("bad beta grid `{value}`"))),
    };
    out.sort_by(f64::total_cmp);
    out.dedup();
    Ok(out)
}
