//! Config file schema: one TOML document describes the weight, the space,
//! and the parameters of whichever experiment the subcommand runs. Loading
//! also hashes the raw bytes so every output can carry a short fingerprint
//! of the exact configuration that produced it.

use serde::Deserialize;
use sha2::{Digest, Sha256};
use shiftlab_core::space::{GridFunction, Mode, Representation, SpaceSpec};
use shiftlab_core::weights::WeightFunction;
use std::path::Path;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub weight: WeightConfig,
    pub space: SpaceConfig,
    pub seed: Option<u64>,
    pub witness: Option<WitnessConfig>,
    pub entropy: Option<EntropyConfig>,
    pub chain: Option<ChainConfig>,
    pub diagnose: Option<DiagnoseConfig>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightConfig {
    Constant { c: f64 },
    Exponential { base: f64 },
    RationalDecay,
    IntegrableExp,
    SpikeTrain { spacing: f64, rate: f64, count: usize },
    Tabulated { xs: Vec<f64>, vs: Vec<f64> },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceConfig {
    /// "lp" (needs p) or "c0v".
    pub mode: String,
    pub p: Option<f64>,
    /// "pwc" or "pwl"; c0v mode forces pwl.
    pub representation: Option<String>,
    pub x_max: f64,
    pub step: f64,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessConfig {
    Nonvanishing {
        depth: usize,
        samples: Option<bool>,
    },
    Separated {
        depth: usize,
        /// Explicit member counts per level; overrides `schedule`.
        a: Option<Vec<usize>>,
        /// "rate_increasing" (default) or "quadratic".
        schedule: Option<String>,
        budget: Option<usize>,
        sample_budget: Option<usize>,
    },
    Periodic {
        period: f64,
        shape: Vec<[f64; 3]>,
    },
    Windowed {
        window: f64,
        depth: usize,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntropyConfig {
    pub depth: usize,
    pub a: Option<Vec<usize>>,
    pub schedule: Option<String>,
    pub budget: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ChainConfig {
    Constant {
        target: Vec<[f64; 3]>,
        t: f64,
        epsilon: f64,
        export_points: Option<bool>,
    },
    ThroughZero {
        start: Vec<[f64; 3]>,
        target: Vec<[f64; 3]>,
        t: f64,
        epsilon: f64,
    },
    Escape {
        start: Vec<[f64; 3]>,
        t: f64,
        epsilon: f64,
        budget: usize,
    },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DiagnoseConfig {
    Orbit {
        f: Vec<[f64; 3]>,
        t_list: Option<Vec<f64>>,
        t_max: Option<f64>,
        t_step: Option<f64>,
        window: Option<f64>,
    },
    LiYorke {
        f: Vec<[f64; 3]>,
        g: Option<Vec<[f64; 3]>>,
        t_list: Option<Vec<f64>>,
        t_max: Option<f64>,
        t_step: Option<f64>,
        delta: f64,
    },
    Densities {
        f: Vec<[f64; 3]>,
        g: Option<Vec<[f64; 3]>>,
        horizon: f64,
        delta: f64,
        epsilon: f64,
        stride: Option<usize>,
    },
    UniformBound {
        probes: Option<Vec<Vec<[f64; 3]>>>,
        random_probes: Option<usize>,
        t_list: Option<Vec<f64>>,
        t_max: Option<f64>,
        t_step: Option<f64>,
    },
}

/// Parses the file and returns the config together with a 16-hex-digit
/// fingerprint of its raw bytes. Parse failures keep the line/column
/// locations the TOML parser reports.
pub fn load(path: &Path) -> Result<(Config, String), String> {
    let bytes = std::fs::read(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let mut hasher = Sha256::new();
    hasher.update(&bytes);
    let hash = hex_prefix(&hasher.finalize(), 16);
    let text = String::from_utf8(bytes)
        .map_err(|e| format!("{} is not UTF-8: {e}", path.display()))?;
    let config: Config = toml::from_str(&text).map_err(|e| e.to_string())?;
    Ok((config, hash))
}

fn hex_prefix(digest: &[u8], chars: usize) -> String {
    let mut out = String::with_capacity(chars);
    for byte in digest {
        out.push_str(&format!("{byte:02x}"));
        if out.len() >= chars {
            break;
        }
    }
    out.truncate(chars);
    out
}

pub fn build_weight(cfg: &WeightConfig) -> Result<WeightFunction, String> {
    let v = match cfg {
        WeightConfig::Constant { c } => WeightFunction::constant(*c),
        WeightConfig::Exponential { base } => WeightFunction::exponential(*base),
        WeightConfig::RationalDecay => Ok(WeightFunction::rational_decay()),
        WeightConfig::IntegrableExp => Ok(WeightFunction::integrable_exp()),
        WeightConfig::SpikeTrain { spacing, rate, count } => {
            WeightFunction::spike_train(*spacing, *rate, *count)
        }
        WeightConfig::Tabulated { xs, vs } => WeightFunction::tabulated(xs.clone(), vs.clone()),
    };
    v.map_err(|e| e.to_string())
}

pub fn build_space(cfg: &Config) -> Result<SpaceSpec, String> {
    let v = build_weight(&cfg.weight)?;
    build_space_with(v, cfg)
}

/// Same as `build_space` but keeps certificates (or other state) already
/// attached to `v`.
pub fn build_space_with(v: WeightFunction, cfg: &Config) -> Result<SpaceSpec, String> {
    let sc = &cfg.space;
    let mode = match sc.mode.as_str() {
        "lp" => {
            let p = sc.p.ok_or("space.p is required when mode = \"lp\"")?;
            Mode::Lp { p }
        }
        "c0v" => Mode::C0v,
        other => return Err(format!("unknown space.mode {other:?} (use \"lp\" or \"c0v\")")),
    };
    let repr = match (sc.representation.as_deref(), &mode) {
        (None, Mode::C0v) | (Some("pwl"), _) => Representation::PiecewiseLinear,
        (None, _) | (Some("pwc"), _) => Representation::PiecewiseConstant,
        (Some(other), _) => {
            return Err(format!(
                "unknown space.representation {other:?} (use \"pwc\" or \"pwl\")"
            ))
        }
    };
    SpaceSpec::new(v, mode, repr, sc.x_max, sc.step).map_err(|e| e.to_string())
}

/// Sum of indicator blocks [from, to, amplitude].
pub fn build_function(spec: &SpaceSpec, blocks: &[[f64; 3]]) -> GridFunction {
    let mut f = spec.zero();
    for b in blocks {
        f = f.add(&spec.indicator(b[0], b[1], b[2]));
    }
    f
}

/// Either an explicit time list or the multiples of t_step up to t_max.
pub fn resolve_times(
    t_list: &Option<Vec<f64>>,
    t_max: &Option<f64>,
    t_step: &Option<f64>,
) -> Result<Vec<f64>, String> {
    if let Some(list) = t_list {
        if list.is_empty() {
            return Err("t_list must not be empty".into());
        }
        return Ok(list.clone());
    }
    match (t_max, t_step) {
        (Some(tm), Some(ts)) if *ts > 0.0 && *tm >= *ts => {
            let n = (tm / ts + 1e-9).floor() as usize;
            Ok((0..=n).map(|k| k as f64 * ts).collect())
        }
        _ => Err("need either t_list or a positive t_max/t_step pair".into()),
    }
}
