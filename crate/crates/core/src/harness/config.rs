//! Line-oriented `key = value` experiment configuration.
//!
//! `#` starts a comment; blank lines are ignored. Only `experiment` is
//! required; every other key has a per-experiment default that is echoed to
//! the run manifest. Keys that do not apply to the chosen experiment are
//! rejected, as are unknown and duplicate keys.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

use crate::solver::Scheme;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

fn err(line: Option<usize>, message: impl Into<String>) -> ConfigError {
    ConfigError {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Experiment {
    AdvectSweep,
    BurgersShock,
    ShockZoom,
    ShuOsher,
    Audit,
    MonotoneCheck,
    Convergence,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::AdvectSweep,
        Experiment::BurgersShock,
        Experiment::ShockZoom,
        Experiment::ShuOsher,
        Experiment::Audit,
        Experiment::MonotoneCheck,
        Experiment::Convergence,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Experiment::AdvectSweep => "advect-sweep",
            Experiment::BurgersShock => "burgers-shock",
            Experiment::ShockZoom => "shock-zoom",
            Experiment::ShuOsher => "shu-osher",
            Experiment::Audit => "audit",
            Experiment::MonotoneCheck => "monotone-check",
            Experiment::Convergence => "convergence",
        }
    }

    /// Optional keys accepted by this experiment, in manifest order.
    pub fn keys(&self) -> &'static [&'static str] {
        match self {
            Experiment::AdvectSweep => &[
                "n_cells", "delta", "cfl", "cfl_weno", "schemes", "length", "wave_speed", "n_frequencies", "out_dir",
            ],
            Experiment::BurgersShock => &["n_cells", "delta", "cfl", "cfl_weno", "t_final", "schemes", "length", "out_dir"],
            Experiment::ShockZoom => &[
                "n_cells", "delta", "cfl", "cfl_weno", "t_final", "schemes", "length", "zoom_cells", "out_dir",
            ],
            Experiment::ShuOsher => &["n_cells", "delta", "cfl", "t_final", "gamma", "out_dir"],
            Experiment::Audit => &["n_cells", "delta", "cfl", "steps", "seed", "noise", "length", "out_dir"],
            Experiment::MonotoneCheck => &["delta", "q_range", "advection_lambda", "burgers_lambda", "out_dir"],
            Experiment::Convergence => &["n_cells", "deltas", "cfl", "t_final", "length", "out_dir"],
        }
    }

    pub fn summary(&self) -> &'static str {
        match self {
            Experiment::AdvectSweep => "Gaussian packet transport error versus normalized frequency",
            Experiment::BurgersShock => "Burgers sine-wave shock versus Hopf-Lax, upwind and WENO5",
            Experiment::ShockZoom => "magnified window around the Burgers shock",
            Experiment::ShuOsher => "Shu-Osher shock/entropy-wave interaction for the Euler system",
            Experiment::Audit => "integer mass ledger versus floating sums over many steps",
            Experiment::MonotoneCheck => "exhaustive monotonicity scan of the three-point update",
            Experiment::Convergence => "L1 distance to Hopf-Lax as the quantum shrinks",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Experiment::ALL.iter().map(|e| e.name()).collect();
                format!("unknown experiment '{s}' (expected one of {})", names.join(", "))
            })
    }
}

const ALL_KEYS: &[&str] = &[
    "experiment",
    "n_cells",
    "delta",
    "deltas",
    "cfl",
    "cfl_weno",
    "t_final",
    "schemes",
    "seed",
    "out_dir",
    "steps",
    "noise",
    "gamma",
    "length",
    "wave_speed",
    "n_frequencies",
    "zoom_cells",
    "q_range",
    "advection_lambda",
    "burgers_lambda",
];

/// Fully resolved configuration. Fields that do not apply to the experiment
/// keep their defaults and are never read.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub n_cells: usize,
    pub delta: f64,
    pub deltas: Vec<f64>,
    pub cfl: f64,
    pub cfl_weno: f64,
    pub t_final: f64,
    pub schemes: Vec<Scheme>,
    pub seed: u64,
    pub out_dir: PathBuf,
    pub steps: usize,
    pub noise: f64,
    pub gamma: f64,
    pub length: f64,
    pub wave_speed: f64,
    pub n_frequencies: usize,
    pub zoom_cells: usize,
    pub q_range: i64,
    pub advection_lambda: f64,
    pub burgers_lambda: f64,
}

impl ExperimentConfig {
    /// Documented defaults for an experiment.
    pub fn defaults(experiment: Experiment) -> Self {
        let (n_cells, delta, cfl, t_final) = match experiment {
            Experiment::AdvectSweep => (256, 1e-3, 0.9, 1.0),
            Experiment::BurgersShock | Experiment::ShockZoom => (640, 1e-3, 0.9, 0.25),
            Experiment::ShuOsher => (1600, 1e-4, 0.9, 1.8),
            Experiment::Audit => (512, 1e-3, 0.9, 1.0),
            Experiment::MonotoneCheck => (2, 0.02, 0.9, 1.0),
            Experiment::Convergence => (2048, 1e-3, 0.9, 0.25),
        };
        Self {
            experiment,
            n_cells,
            delta,
            deltas: vec![1e-2, 1e-3, 1e-4],
            cfl,
            cfl_weno: 0.45,
            t_final,
            schemes: Scheme::ALL.to_vec(),
            seed: 0,
            out_dir: PathBuf::from("results"),
            steps: 100_000,
            noise: 0.25,
            gamma: 1.4,
            length: 1.0,
            wave_speed: 1.0,
            n_frequencies: 10,
            zoom_cells: 32,
            q_range: 50,
            advection_lambda: 0.9,
            burgers_lambda: 0.4,
        }
    }

    /// Resolved values of every key the experiment accepts, as `key = value` text.
    pub fn manifest_entries(&self) -> Vec<(&'static str, String)> {
        let mut out = vec![("experiment", self.experiment.name().to_string())];
        for &key in self.experiment.keys() {
            let value = match key {
                "n_cells" => self.n_cells.to_string(),
                "delta" => fmt_real(self.delta),
                "deltas" => self.deltas.iter().map(|d| fmt_real(*d)).collect::<Vec<_>>().join(", "),
                "cfl" => fmt_real(self.cfl),
                "cfl_weno" => fmt_real(self.cfl_weno),
                "t_final" => fmt_real(self.t_final),
                "schemes" => self.schemes.iter().map(|s| s.name()).collect::<Vec<_>>().join(", "),
                "seed" => self.seed.to_string(),
                "out_dir" => self.out_dir.display().to_string(),
                "steps" => self.steps.to_string(),
                "noise" => fmt_real(self.noise),
                "gamma" => fmt_real(self.gamma),
                "length" => fmt_real(self.length),
                "wave_speed" => fmt_real(self.wave_speed),
                "n_frequencies" => self.n_frequencies.to_string(),
                "zoom_cells" => self.zoom_cells.to_string(),
                "q_range" => self.q_range.to_string(),
                "advection_lambda" => fmt_real(self.advection_lambda),
                "burgers_lambda" => fmt_real(self.burgers_lambda),
                _ => unreachable!("key table out of sync: {key}"),
            };
            out.push((key, value));
        }
        out
    }
}

fn fmt_real(x: f64) -> String {
    // shortest representation that round-trips
    format!("{x:?}")
}

fn positive_f64(key: &str, raw: &str, line: usize) -> Result<f64, ConfigError> {
    let v: f64 = raw
        .parse()
        .map_err(|_| err(Some(line), format!("{key}: expected a real number, got '{raw}'")))?;
    if !(v.is_finite() && v > 0.0) {
        return Err(err(Some(line), format!("{key} must be positive")));
    }
    Ok(v)
}

fn positive_usize(key: &str, raw: &str, line: usize) -> Result<usize, ConfigError> {
    let v: usize = raw
        .parse()
        .map_err(|_| err(Some(line), format!("{key}: expected a positive integer, got '{raw}'")))?;
    if v == 0 {
        return Err(err(Some(line), format!("{key} must be positive")));
    }
    Ok(v)
}

fn apply(cfg: &mut ExperimentConfig, key: &str, raw: &str, line: usize) -> Result<(), ConfigError> {
    match key {
        "n_cells" => {
            cfg.n_cells = positive_usize(key, raw, line)?;
            if cfg.n_cells < 2 {
                return Err(err(Some(line), "n_cells must be at least 2"));
            }
        }
        "delta" => cfg.delta = positive_f64(key, raw, line)?,
        "deltas" => {
            cfg.deltas = raw
                .split(',')
                .map(|s| positive_f64("deltas", s.trim(), line))
                .collect::<Result<_, _>>()?;
        }
        "cfl" => {
            cfg.cfl = positive_f64(key, raw, line)?;
            if cfg.cfl > 1.0 {
                return Err(err(Some(line), "cfl must not exceed 1"));
            }
        }
        "cfl_weno" => {
            cfg.cfl_weno = positive_f64(key, raw, line)?;
            if cfg.cfl_weno > crate::baselines::WENO_CFL_LIMIT {
                return Err(err(Some(line), "cfl_weno must not exceed 0.5"));
            }
        }
        "t_final" => cfg.t_final = positive_f64(key, raw, line)?,
        "schemes" => {
            let mut schemes = Vec::new();
            for name in raw.split(',').map(str::trim) {
                let s: Scheme = name.parse().map_err(|e: crate::Error| err(Some(line), e.to_string()))?;
                if schemes.contains(&s) {
                    return Err(err(Some(line), format!("scheme '{name}' listed twice")));
                }
                schemes.push(s);
            }
            cfg.schemes = schemes;
        }
        "seed" => {
            cfg.seed = raw
                .parse()
                .map_err(|_| err(Some(line), format!("seed: expected an unsigned 64-bit integer, got '{raw}'")))?
        }
        "out_dir" => {
            if raw.is_empty() {
                return Err(err(Some(line), "out_dir must not be empty"));
            }
            cfg.out_dir = PathBuf::from(raw);
        }
        "steps" => cfg.steps = positive_usize(key, raw, line)?,
        "noise" => {
            let v: f64 = raw
                .parse()
                .map_err(|_| err(Some(line), format!("noise: expected a real number, got '{raw}'")))?;
            if !(v.is_finite() && v >= 0.0) {
                return Err(err(Some(line), "noise must be nonnegative"));
            }
            cfg.noise = v;
        }
        "gamma" => {
            cfg.gamma = positive_f64(key, raw, line)?;
            if cfg.gamma <= 1.0 {
                return Err(err(Some(line), "gamma must exceed 1"));
            }
        }
        "length" => cfg.length = positive_f64(key, raw, line)?,
        "wave_speed" => cfg.wave_speed = positive_f64(key, raw, line)?,
        "n_frequencies" => cfg.n_frequencies = positive_usize(key, raw, line)?,
        "zoom_cells" => cfg.zoom_cells = positive_usize(key, raw, line)?,
        "q_range" => cfg.q_range = positive_usize(key, raw, line)? as i64,
        "advection_lambda" => cfg.advection_lambda = positive_f64(key, raw, line)?,
        "burgers_lambda" => cfg.burgers_lambda = positive_f64(key, raw, line)?,
        _ => return Err(err(Some(line), format!("unknown key: {key}"))),
    }
    Ok(())
}

/// Parses configuration text.
pub fn parse_config_str(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut entries: BTreeMap<String, (String, usize)> = BTreeMap::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw_line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(Some(line), format!("expected 'key = value', got '{content}'")))?;
        let (key, value) = (key.trim(), value.trim());
        if !ALL_KEYS.contains(&key) {
            return Err(err(Some(line), format!("unknown key: {key}")));
        }
        if let Some((_, first)) = entries.get(key) {
            return Err(err(Some(line), format!("duplicate key: {key} (first set on line {first})")));
        }
        entries.insert(key.to_string(), (value.to_string(), line));
    }

    let (name, line) = entries
        .remove("experiment")
        .ok_or_else(|| err(None, "missing key: experiment"))?;
    let experiment: Experiment = name.parse().map_err(|m: String| err(Some(line), m))?;
    let mut cfg = ExperimentConfig::defaults(experiment);

    // apply in file order so the first bad line is the one reported
    let mut ordered: Vec<_> = entries.into_iter().collect();
    ordered.sort_by_key(|(_, (_, line))| *line);
    for (key, (value, line)) in ordered {
        if !experiment.keys().contains(&key.as_str()) {
            return Err(err(
                Some(line),
                format!("key '{key}' does not apply to experiment {experiment}"),
            ));
        }
        apply(&mut cfg, &key, &value, line)?;
    }
    if experiment == Experiment::ShuOsher && cfg.n_cells < 10 {
        return Err(err(None, "shu-osher needs n_cells >= 10"));
    }
    if matches!(experiment, Experiment::AdvectSweep | Experiment::BurgersShock | Experiment::ShockZoom)
        && cfg.schemes.contains(&Scheme::Weno5)
        && cfg.n_cells < 7
    {
        return Err(err(None, "weno5 needs n_cells >= 7"));
    }
    Ok(cfg)
}

/// Reads and parses a configuration file.
pub fn parse_config(path: &Path) -> Result<ExperimentConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| err(None, format!("cannot read {}: {e}", path.display())))?;
    parse_config_str(&text)
}

/// Help text describing every experiment and its keys.
pub fn describe_experiments() -> String {
    let mut out = String::new();
    for e in Experiment::ALL {
        let d = ExperimentConfig::defaults(e);
        out.push_str(&format!("{:<15} {}\n", e.name(), e.summary()));
        out.push_str("  required: experiment\n  optional:");
        for (key, value) in d.manifest_entries().into_iter().skip(1) {
            out.push_str(&format!(" {key}={value}"));
        }
        out.push('\n');
    }
    out
}
