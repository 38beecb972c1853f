//! Resolved run configuration: defaults, then the `key = value` file, then flags.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::Path;

use sl2heat::synthesis::{CutoffPolicy, SynthesisConfig};

use crate::CliError;

/// Settings a config file may provide; each is overridden by its flag.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FileConfig {
    pub tol: Option<f64>,
    pub t_min: Option<f64>,
    pub nu_nodes_per_unit: Option<usize>,
    pub ktype_cutoff: Option<CutoffPolicy>,
    pub n_max: Option<i64>,
    pub paths: Option<usize>,
    pub seed: Option<u64>,
    pub out: Option<String>,
}

pub const KEYS: [&str; 8] = [
    "tol",
    "t_min",
    "nu_nodes_per_unit",
    "ktype_cutoff",
    "n_max",
    "paths",
    "seed",
    "out",
];

fn parse_value<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<T, CliError> {
    value
        .parse()
        .map_err(|_| CliError::Parse(format!("config line {line}: bad value '{value}' for {key}")))
}

pub fn parse_cutoff(value: &str) -> Result<CutoffPolicy, String> {
    match value {
        "auto" | "automatic" => Ok(CutoffPolicy::Automatic),
        v => v
            .parse::<i64>()
            .ok()
            .filter(|n| *n >= 0)
            .map(CutoffPolicy::Fixed)
            .ok_or_else(|| {
                format!("ktype cutoff must be 'auto' or a nonnegative integer, got '{v}'")
            }),
    }
}

impl FileConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = FileConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Parse(format!("config line {line_no}: expected key = value"))
            })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "tol" => cfg.tol = Some(parse_value(key, value, line_no)?),
                "t_min" => cfg.t_min = Some(parse_value(key, value, line_no)?),
                "nu_nodes_per_unit" => {
                    cfg.nu_nodes_per_unit = Some(parse_value(key, value, line_no)?)
                }
                "ktype_cutoff" => {
                    cfg.ktype_cutoff = Some(
                        parse_cutoff(value)
                            .map_err(|e| CliError::Parse(format!("config line {line_no}: {e}")))?,
                    )
                }
                "n_max" => cfg.n_max = Some(parse_value(key, value, line_no)?),
                "paths" => cfg.paths = Some(parse_value(key, value, line_no)?),
                "seed" => cfg.seed = Some(parse_value(key, value, line_no)?),
                "out" => cfg.out = Some(value.to_string()),
                other => {
                    return Err(CliError::Parse(format!(
                        "config line {line_no}: unknown key '{other}' (known: {})",
                        KEYS.join(", ")
                    )))
                }
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

pub const DEFAULT_PATHS: usize = 100_000;
pub const DEFAULT_SEED: u64 = 7;

/// Everything that determines a run's output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Resolved {
    pub command: String,
    pub synthesis: SynthesisConfig,
    pub paths: usize,
    pub seed: u64,
    pub inputs: BTreeMap<String, serde_json::Value>,
}

impl Resolved {
    /// SHA-256 of the canonical JSON of the resolved configuration.
    pub fn fingerprint(&self) -> String {
        let text = serde_json::to_string(self).expect("config serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

/// Flag values that may override the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub tol: Option<f64>,
    pub t_min: Option<f64>,
    pub ktype_cutoff: Option<CutoffPolicy>,
    pub paths: Option<usize>,
    pub seed: Option<u64>,
}

pub fn resolve_synthesis(
    file: &FileConfig,
    flags: &Overrides,
) -> Result<SynthesisConfig, CliError> {
    let d = SynthesisConfig::default();
    let cfg = SynthesisConfig {
        tol: flags.tol.or(file.tol).unwrap_or(d.tol),
        t_min: flags.t_min.or(file.t_min).unwrap_or(d.t_min),
        nu_nodes_per_unit: file.nu_nodes_per_unit.unwrap_or(d.nu_nodes_per_unit),
        ktype_cutoff_policy: flags
            .ktype_cutoff
            .or(file.ktype_cutoff)
            .unwrap_or(d.ktype_cutoff_policy),
        n_max: file.n_max.unwrap_or(d.n_max),
    };
    cfg.validate().map_err(|e| CliError::Parse(e.to_string()))?;
    Ok(cfg)
}
