//! Run configuration: defaults, overridden by a `key = value` file, then by
//! command-line flags.

use std::path::{Path, PathBuf};
use std::str::FromStr;

use special_graphs::forms::DEFAULT_CANON_MAX_D;
use special_graphs::graphs::DEFAULT_SYMMETRY_MAX_R;
use special_graphs::realization::{DEFAULT_SIGN_MAX_R, DEFAULT_SOLVER_MAX_R};

/// Environment variable naming the config file.
pub const CONFIG_ENV: &str = "SPECGRAPH_CONFIG";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "dot" => Ok(Format::Dot),
            "csv" => Ok(Format::Csv),
            _ => Err(format!("unknown format {s:?} (json, dot or csv)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub canon_max_d: usize,
    pub solver_max_r: usize,
    pub symmetry_max_r: usize,
    pub sign_max_r: usize,
    pub tol: f64,
    pub output: Option<PathBuf>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            canon_max_d: DEFAULT_CANON_MAX_D,
            solver_max_r: DEFAULT_SOLVER_MAX_R,
            symmetry_max_r: DEFAULT_SYMMETRY_MAX_R,
            sign_max_r: DEFAULT_SIGN_MAX_R,
            tol: 1e-6,
            output: None,
            format: Format::Json,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T, String> {
    value
        .parse()
        .map_err(|_| format!("config: bad value {value:?} for {key}"))
}

impl RunConfig {
    /// Applies `key = value` lines; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<(), String> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("config line {}: expected key = value", n + 1))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "seed" => self.seed = parse(key, value)?,
                "canon_max_d" => self.canon_max_d = parse(key, value)?,
                "solver_max_r" => self.solver_max_r = parse(key, value)?,
                "symmetry_max_r" => self.symmetry_max_r = parse(key, value)?,
                "sign_max_r" => self.sign_max_r = parse(key, value)?,
                "tol" => self.tol = parse(key, value)?,
                "output" => self.output = Some(PathBuf::from(value)),
                "format" => self.format = parse(key, value)?,
                _ => return Err(format!("config line {}: unknown key {key:?}", n + 1)),
            }
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let mut cfg = RunConfig::default();
        cfg.apply_text(&text)?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        let caps = [
            ("canon_max_d", self.canon_max_d),
            ("solver_max_r", self.solver_max_r),
            ("symmetry_max_r", self.symmetry_max_r),
            ("sign_max_r", self.sign_max_r),
        ];
        if let Some((key, _)) = caps.iter().find(|(_, v)| *v == 0) {
            return Err(format!("config: {key} must be positive"));
        }
        if !(self.tol > 0.0 && self.tol <= 1e-2) {
            return Err(format!(
                "config: tol must lie in (0, 1e-2], got {}",
                self.tol
            ));
        }
        Ok(())
    }
}
