//! Run configuration: the flat `key = value` file format, CLI overrides,
//! and deterministic generation of initial data from a seed.
//!
//! A configuration file is plain UTF-8 text. Each non-empty line holds one
//! `key = value` pair with dotted keys (`model.kappa_s = 10`). Everything
//! after a `#` is a comment. Unknown keys are rejected so that typos fail
//! loudly instead of silently running defaults.

use std::collections::BTreeMap;
use std::fmt;

use bicluster_core::model::{ModelParams, SystemState, WeightKind, WeightSpec};

use crate::rng::XorShift64Star;

/// How generated velocities are re-centred after sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Centering {
    /// Each group's mean velocity is subtracted from that group.
    PerGroup,
    /// The mean over both groups combined is subtracted from everyone.
    Global,
}

impl Centering {
    fn as_str(self) -> &'static str {
        match self {
            Centering::PerGroup => "per-group",
            Centering::Global => "global",
        }
    }
}

/// Which initial-data recipe a run uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitKind {
    /// Positions uniform in per-group boxes, velocities uniform then centred.
    RandomBox,
    /// States listed verbatim in the configuration.
    Explicit,
}

/// Initial-data settings. Box bounds left as `None` default to the unit
/// cube in the model dimension when the state is generated.
#[derive(Debug, Clone)]
pub struct InitConfig {
    pub kind: InitKind,
    pub box1_min: Option<Vec<f64>>,
    pub box1_max: Option<Vec<f64>>,
    pub box2_min: Option<Vec<f64>>,
    pub box2_max: Option<Vec<f64>>,
    pub velocity_scale: f64,
    pub centering: Centering,
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    pub y: Vec<f64>,
    pub w: Vec<f64>,
}

impl Default for InitConfig {
    fn default() -> Self {
        Self {
            kind: InitKind::RandomBox,
            box1_min: None,
            box1_max: None,
            box2_min: None,
            box2_max: None,
            velocity_scale: 1.0,
            centering: Centering::PerGroup,
            x: Vec::new(),
            v: Vec::new(),
            y: Vec::new(),
            w: Vec::new(),
        }
    }
}

/// Time-stepping settings.
#[derive(Debug, Clone, Copy)]
pub struct SimParams {
    pub dt: f64,
    pub t_end: f64,
    pub sample_stride: usize,
}

/// The certificate families a run can evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CertificateKind {
    Theorem31,
    Theorem41,
    Theorem51,
    Lyapunov,
}

impl CertificateKind {
    pub const ALL: [CertificateKind; 4] = [
        CertificateKind::Theorem31,
        CertificateKind::Theorem41,
        CertificateKind::Theorem51,
        CertificateKind::Lyapunov,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CertificateKind::Theorem31 => "theorem31",
            CertificateKind::Theorem41 => "theorem41",
            CertificateKind::Theorem51 => "theorem51",
            CertificateKind::Lyapunov => "lyapunov",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "theorem31" => Some(CertificateKind::Theorem31),
            "theorem41" => Some(CertificateKind::Theorem41),
            "theorem51" => Some(CertificateKind::Theorem51),
            "lyapunov" => Some(CertificateKind::Lyapunov),
            _ => None,
        }
    }
}

/// A complete run description: model, integrator window, initial data,
/// seed, and which certificates to evaluate.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: ModelParams,
    pub sim: SimParams,
    pub init: InitConfig,
    pub seed: u64,
    pub certificates: Vec<CertificateKind>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: ModelParams {
                n1: 2,
                n2: 2,
                dim: 2,
                kappa_s: 1.0,
                kappa_d: 1.0,
                delta: 0.0,
                psi_s: WeightSpec::constant(1.0),
                psi_d: WeightSpec::constant(1.0),
            },
            sim: SimParams {
                dt: 1e-3,
                t_end: 10.0,
                sample_stride: 10,
            },
            init: InitConfig::default(),
            seed: 42,
            certificates: CertificateKind::ALL.to_vec(),
        }
    }
}

/// Errors raised while reading configuration or generating initial data.
#[derive(Debug, Clone)]
pub enum ConfigError {
    Syntax { line: usize, content: String },
    UnknownKey { key: String },
    BadValue { key: String, value: String, reason: String },
    UnknownPreset { name: String },
    Invalid(String),
    Io { path: String, message: String },
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Syntax { line, content } => {
                write!(f, "line {line}: expected `key = value`, found `{content}`")
            }
            ConfigError::UnknownKey { key } => write!(f, "unknown configuration key `{key}`"),
            ConfigError::BadValue { key, value, reason } => {
                write!(f, "bad value `{value}` for `{key}`: {reason}")
            }
            ConfigError::UnknownPreset { name } => {
                write!(f, "unknown preset `{name}` (run `bicluster presets` for the catalog)")
            }
            ConfigError::Invalid(msg) => write!(f, "invalid configuration: {msg}"),
            ConfigError::Io { path, message } => write!(f, "{path}: {message}"),
        }
    }
}

impl std::error::Error for ConfigError {}

fn bad<T>(key: &str, value: &str, reason: &str) -> Result<T, ConfigError> {
    Err(ConfigError::BadValue {
        key: key.to_string(),
        value: value.to_string(),
        reason: reason.to_string(),
    })
}

fn parse_f64(key: &str, value: &str) -> Result<f64, ConfigError> {
    match value.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        Ok(_) => bad(key, value, "must be finite"),
        Err(_) => bad(key, value, "expected a number"),
    }
}

fn parse_usize(key: &str, value: &str) -> Result<usize, ConfigError> {
    value
        .parse::<usize>()
        .or_else(|_| bad(key, value, "expected a non-negative integer"))
}

fn parse_u64(key: &str, value: &str) -> Result<u64, ConfigError> {
    value
        .parse::<u64>()
        .or_else(|_| bad(key, value, "expected a non-negative integer"))
}

fn parse_list(key: &str, value: &str) -> Result<Vec<f64>, ConfigError> {
    if value.trim().is_empty() {
        return bad(key, value, "expected a comma-separated list of numbers");
    }
    value
        .split(',')
        .map(|item| parse_f64(key, item.trim()))
        .collect()
}

fn parse_weight_kind(key: &str, value: &str) -> Result<WeightKind, ConfigError> {
    match value {
        "constant" => Ok(WeightKind::Constant),
        "power-law" => Ok(WeightKind::PowerLaw),
        "exponential" => Ok(WeightKind::Exponential),
        _ => bad(key, value, "expected constant | power-law | exponential"),
    }
}

fn weight_kind_str(kind: WeightKind) -> &'static str {
    match kind {
        WeightKind::Constant => "constant",
        WeightKind::PowerLaw => "power-law",
        WeightKind::Exponential => "exponential",
    }
}

fn parse_certificates(key: &str, value: &str) -> Result<Vec<CertificateKind>, ConfigError> {
    match value {
        "all" => Ok(CertificateKind::ALL.to_vec()),
        "none" => Ok(Vec::new()),
        _ => {
            let mut kinds = Vec::new();
            for item in value.split(',') {
                let item = item.trim();
                let kind = CertificateKind::parse(item).ok_or_else(|| ConfigError::BadValue {
                    key: key.to_string(),
                    value: item.to_string(),
                    reason: "expected all | none | theorem31 | theorem41 | theorem51 | lyapunov"
                        .to_string(),
                })?;
                if !kinds.contains(&kind) {
                    kinds.push(kind);
                }
            }
            Ok(kinds)
        }
    }
}

/// Applies one `key = value` assignment to a configuration. This is also
/// the mechanism sweeps use to vary an axis.
pub fn apply_key(cfg: &mut RunConfig, key: &str, value: &str) -> Result<(), ConfigError> {
    match key {
        "model.n1" => cfg.model.n1 = parse_usize(key, value)?,
        "model.n2" => cfg.model.n2 = parse_usize(key, value)?,
        "model.dim" => cfg.model.dim = parse_usize(key, value)?,
        "model.kappa_s" => cfg.model.kappa_s = parse_f64(key, value)?,
        "model.kappa_d" => cfg.model.kappa_d = parse_f64(key, value)?,
        "model.delta" => cfg.model.delta = parse_f64(key, value)?,
        "model.psi_s.kind" => cfg.model.psi_s.kind = parse_weight_kind(key, value)?,
        "model.psi_s.amplitude" => cfg.model.psi_s.amplitude = parse_f64(key, value)?,
        "model.psi_s.beta" => cfg.model.psi_s.beta = parse_f64(key, value)?,
        "model.psi_d.kind" => cfg.model.psi_d.kind = parse_weight_kind(key, value)?,
        "model.psi_d.amplitude" => cfg.model.psi_d.amplitude = parse_f64(key, value)?,
        "model.psi_d.beta" => cfg.model.psi_d.beta = parse_f64(key, value)?,
        "sim.dt" => cfg.sim.dt = parse_f64(key, value)?,
        "sim.t_end" => cfg.sim.t_end = parse_f64(key, value)?,
        "sim.sample_stride" => cfg.sim.sample_stride = parse_usize(key, value)?,
        "seed" => cfg.seed = parse_u64(key, value)?,
        "certificates" => cfg.certificates = parse_certificates(key, value)?,
        "init.kind" => {
            cfg.init.kind = match value {
                "random-box" => InitKind::RandomBox,
                "explicit" => InitKind::Explicit,
                _ => return bad(key, value, "expected random-box | explicit"),
            }
        }
        "init.velocity_scale" => cfg.init.velocity_scale = parse_f64(key, value)?,
        "init.velocity_centering" => {
            cfg.init.centering = match value {
                "per-group" => Centering::PerGroup,
                "global" => Centering::Global,
                _ => return bad(key, value, "expected per-group | global"),
            }
        }
        "init.box1.min" => cfg.init.box1_min = Some(parse_list(key, value)?),
        "init.box1.max" => cfg.init.box1_max = Some(parse_list(key, value)?),
        "init.box2.min" => cfg.init.box2_min = Some(parse_list(key, value)?),
        "init.box2.max" => cfg.init.box2_max = Some(parse_list(key, value)?),
        "init.x" => cfg.init.x = parse_list(key, value)?,
        "init.v" => cfg.init.v = parse_list(key, value)?,
        "init.y" => cfg.init.y = parse_list(key, value)?,
        "init.w" => cfg.init.w = parse_list(key, value)?,
        _ => return Err(ConfigError::UnknownKey { key: key.to_string() }),
    }
    Ok(())
}

/// Parses configuration text on top of a base configuration. Later lines
/// override earlier ones; the base supplies everything left unset.
pub fn parse_config_text(text: &str, base: RunConfig) -> Result<RunConfig, ConfigError> {
    let mut cfg = base;
    for (idx, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line: idx + 1,
            content: line.to_string(),
        })?;
        apply_key(&mut cfg, key.trim(), value.trim())?;
    }
    Ok(cfg)
}

fn fmt_f64(x: f64) -> String {
    format!("{x:e}")
}

fn fmt_list(xs: &[f64]) -> String {
    xs.iter().map(|x| fmt_f64(*x)).collect::<Vec<_>>().join(",")
}

/// Flattens a configuration back into the `key = value` map that the
/// parser accepts, so a run's JSON echo can be replayed verbatim.
pub fn to_flat(cfg: &RunConfig) -> BTreeMap<String, String> {
    let mut map = BTreeMap::new();
    let mut put = |k: &str, v: String| {
        map.insert(k.to_string(), v);
    };
    put("model.n1", cfg.model.n1.to_string());
    put("model.n2", cfg.model.n2.to_string());
    put("model.dim", cfg.model.dim.to_string());
    put("model.kappa_s", fmt_f64(cfg.model.kappa_s));
    put("model.kappa_d", fmt_f64(cfg.model.kappa_d));
    put("model.delta", fmt_f64(cfg.model.delta));
    put("model.psi_s.kind", weight_kind_str(cfg.model.psi_s.kind).to_string());
    put("model.psi_s.amplitude", fmt_f64(cfg.model.psi_s.amplitude));
    put("model.psi_s.beta", fmt_f64(cfg.model.psi_s.beta));
    put("model.psi_d.kind", weight_kind_str(cfg.model.psi_d.kind).to_string());
    put("model.psi_d.amplitude", fmt_f64(cfg.model.psi_d.amplitude));
    put("model.psi_d.beta", fmt_f64(cfg.model.psi_d.beta));
    put("sim.dt", fmt_f64(cfg.sim.dt));
    put("sim.t_end", fmt_f64(cfg.sim.t_end));
    put("sim.sample_stride", cfg.sim.sample_stride.to_string());
    put("seed", cfg.seed.to_string());
    let certs = if cfg.certificates.is_empty() {
        "none".to_string()
    } else {
        cfg.certificates
            .iter()
            .map(|c| c.as_str())
            .collect::<Vec<_>>()
            .join(",")
    };
    put("certificates", certs);
    match cfg.init.kind {
        InitKind::RandomBox => {
            put("init.kind", "random-box".to_string());
            put("init.velocity_scale", fmt_f64(cfg.init.velocity_scale));
            put("init.velocity_centering", cfg.init.centering.as_str().to_string());
            if let Some(b) = &cfg.init.box1_min {
                put("init.box1.min", fmt_list(b));
            }
            if let Some(b) = &cfg.init.box1_max {
                put("init.box1.max", fmt_list(b));
            }
            if let Some(b) = &cfg.init.box2_min {
                put("init.box2.min", fmt_list(b));
            }
            if let Some(b) = &cfg.init.box2_max {
                put("init.box2.max", fmt_list(b));
            }
        }
        InitKind::Explicit => {
            put("init.kind", "explicit".to_string());
            put("init.x", fmt_list(&cfg.init.x));
            put("init.v", fmt_list(&cfg.init.v));
            put("init.y", fmt_list(&cfg.init.y));
            put("init.w", fmt_list(&cfg.init.w));
        }
    }
    map
}

fn resolve_box(
    min: &Option<Vec<f64>>,
    max: &Option<Vec<f64>>,
    dim: usize,
    label: &str,
) -> Result<(Vec<f64>, Vec<f64>), ConfigError> {
    let lo = min.clone().unwrap_or_else(|| vec![0.0; dim]);
    let hi = max.clone().unwrap_or_else(|| vec![1.0; dim]);
    if lo.len() != dim || hi.len() != dim {
        return Err(ConfigError::Invalid(format!(
            "{label} bounds must have {dim} components (got {} and {})",
            lo.len(),
            hi.len()
        )));
    }
    for k in 0..dim {
        if !(lo[k] <= hi[k]) {
            return Err(ConfigError::Invalid(format!(
                "{label} is empty in component {k}: min {} > max {}",
                lo[k], hi[k]
            )));
        }
    }
    Ok((lo, hi))
}

fn center_velocities(init: &InitConfig, v: &mut [f64], w: &mut [f64], dim: usize) {
    match init.centering {
        Centering::PerGroup => {
            subtract_mean(v, dim);
            subtract_mean(w, dim);
        }
        Centering::Global => {
            let n = (v.len() + w.len()) / dim;
            let mut mean = vec![0.0; dim];
            for (i, val) in v.iter().chain(w.iter()).enumerate() {
                mean[i % dim] += val;
            }
            for m in &mut mean {
                *m /= n as f64;
            }
            for (i, val) in v.iter_mut().enumerate() {
                *val -= mean[i % dim];
            }
            for (i, val) in w.iter_mut().enumerate() {
                *val -= mean[i % dim];
            }
        }
    }
}

fn subtract_mean(vals: &mut [f64], dim: usize) {
    if vals.is_empty() {
        return;
    }
    let n = vals.len() / dim;
    let mut mean = vec![0.0; dim];
    for (i, val) in vals.iter().enumerate() {
        mean[i % dim] += val;
    }
    for m in &mut mean {
        *m /= n as f64;
    }
    for (i, val) in vals.iter_mut().enumerate() {
        *val -= mean[i % dim];
    }
}

/// Builds the initial state for a run.
///
/// For `random-box` data the draw order is pinned: group-1 positions,
/// group-1 velocities, group-2 positions, group-2 velocities, each
/// particle-major and component-minor. Positions are uniform in the
/// per-group boxes; velocities are uniform in `[-s, s]` per component and
/// then re-centred according to the centering mode.
pub fn generate_initial(
    init: &InitConfig,
    params: &ModelParams,
    seed: u64,
) -> Result<SystemState, ConfigError> {
    match init.kind {
        InitKind::Explicit => {
            let want = [
                ("init.x", init.x.len(), params.n1 * params.dim),
                ("init.v", init.v.len(), params.n1 * params.dim),
                ("init.y", init.y.len(), params.n2 * params.dim),
                ("init.w", init.w.len(), params.n2 * params.dim),
            ];
            for (name, got, expect) in want {
                if got != expect {
                    return Err(ConfigError::Invalid(format!(
                        "{name} must list {expect} numbers for this model, got {got}"
                    )));
                }
            }
            Ok(SystemState {
                x: init.x.clone(),
                v: init.v.clone(),
                y: init.y.clone(),
                w: init.w.clone(),
            })
        }
        InitKind::RandomBox => {
            let dim = params.dim;
            let (b1lo, b1hi) = resolve_box(&init.box1_min, &init.box1_max, dim, "init.box1")?;
            let (b2lo, b2hi) = resolve_box(&init.box2_min, &init.box2_max, dim, "init.box2")?;
            let s = init.velocity_scale;
            if !(s > 0.0) || !s.is_finite() {
                return Err(ConfigError::Invalid(format!(
                    "init.velocity_scale must be positive and finite, got {s}"
                )));
            }
            let mut rng = XorShift64Star::new(seed);
            let mut draw_block = |n: usize, lo: &dyn Fn(usize) -> f64, hi: &dyn Fn(usize) -> f64| {
                let mut out = Vec::with_capacity(n * dim);
                for _ in 0..n {
                    for k in 0..dim {
                        out.push(rng.uniform_in(lo(k), hi(k)));
                    }
                }
                out
            };
            let x = draw_block(params.n1, &|k| b1lo[k], &|k| b1hi[k]);
            let mut v = draw_block(params.n1, &|_| -s, &|_| s);
            let y = draw_block(params.n2, &|k| b2lo[k], &|k| b2hi[k]);
            let mut w = draw_block(params.n2, &|_| -s, &|_| s);
            center_velocities(init, &mut v, &mut w, dim);
            Ok(SystemState { x, v, y, w })
        }
    }
}
