//! Flat `section.key = value` configuration files.
//!
//! Blank lines and `#` comments are ignored. Every key maps onto one
//! [`SimConfig`] field; unknown keys and unparsable values are reported
//! with their line number.

use std::fmt;
use std::str::FromStr;

use agibtc::ibtc::ProfileEntry;
use agibtc::sim::{default_kt, default_profile, SimConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub key: String,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: key `{}`: {}", self.key, self.message),
            None => write!(f, "key `{}`: {}", self.key, self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

/// Numeric precision of the soft-decision path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Precision {
    F32,
    #[default]
    F64,
}

impl Precision {
    pub fn name(self) -> &'static str {
        match self {
            Precision::F32 => "f32",
            Precision::F64 => "f64",
        }
    }
}

/// A parsed run description.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub sim: SimConfig,
    pub precision: Precision,
    profile_set: bool,
    kt_set: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            sim: SimConfig::default(),
            precision: Precision::F64,
            profile_set: false,
            kt_set: false,
        }
    }
}

pub const KEYS: &[&str] = &[
    "scheme",
    "code",
    "profile",
    "kt",
    "modulation",
    "demapper",
    "iterations",
    "early_stop",
    "strict_profile",
    "seed",
    "workers",
    "precision",
    "ebn0.start",
    "ebn0.stop",
    "ebn0.step",
    "chase.p",
    "chase.s",
    "chase.alpha",
    "chase.beta",
    "chase.on_failure",
    "stop.min_bit_errors",
    "stop.max_frames",
    "stop.max_seconds",
];

fn parse<T: FromStr>(v: &str) -> Result<T, String>
where
    T::Err: fmt::Display,
{
    v.parse::<T>().map_err(|e| format!("cannot parse `{v}`: {e}"))
}

fn parse_opt<T: FromStr>(v: &str) -> Result<Option<T>, String>
where
    T::Err: fmt::Display,
{
    if v.eq_ignore_ascii_case("none") {
        Ok(None)
    } else {
        parse(v).map(Some)
    }
}

fn parse_bool(v: &str) -> Result<bool, String> {
    match v {
        "true" | "yes" | "1" | "on" => Ok(true),
        "false" | "no" | "0" | "off" => Ok(false),
        _ => Err(format!("expected a boolean, got `{v}`")),
    }
}

fn parse_list(v: &str) -> Result<Vec<f64>, String> {
    let out: Result<Vec<f64>, String> = v.split(',').map(|x| parse(x.trim())).collect();
    let out = out?;
    if out.is_empty() {
        return Err("empty list".into());
    }
    Ok(out)
}

/// Parses `degree:share` pairs separated by commas, e.g. `2:0.85,3:0.10,9:0.05`.
pub fn parse_profile(v: &str) -> Result<Vec<ProfileEntry>, String> {
    v.split(',')
        .map(|item| {
            let (d, s) = item
                .trim()
                .split_once(':')
                .ok_or_else(|| format!("profile entry `{item}` is not degree:share"))?;
            Ok(ProfileEntry::new(parse(d.trim())?, parse(s.trim())?))
        })
        .collect()
}

impl RunConfig {
    /// Applies one key. Keys are matched after trimming; values are trimmed.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let v = value.trim();
        let c = &mut self.sim;
        match key.trim() {
            "scheme" => c.scheme = parse(v)?,
            "code" => c.code = parse(v)?,
            "profile" => {
                c.profile = parse_profile(v)?;
                self.profile_set = true;
            }
            "kt" => {
                c.kt = parse(v)?;
                self.kt_set = true;
            }
            "modulation" => c.modulation = parse(v)?,
            "demapper" => c.demapper = parse(v)?,
            "iterations" => c.iterations = parse(v)?,
            "early_stop" => c.early_stop = parse_bool(v)?,
            "strict_profile" => c.strict_profile = parse_bool(v)?,
            "seed" => c.seed = parse(v)?,
            "workers" => c.workers = parse(v)?,
            "precision" => {
                self.precision = match v {
                    "f32" => Precision::F32,
                    "f64" => Precision::F64,
                    _ => return Err(format!("expected f32 or f64, got `{v}`")),
                }
            }
            "ebn0.start" => c.sweep.start = parse(v)?,
            "ebn0.stop" => c.sweep.stop = parse(v)?,
            "ebn0.step" => c.sweep.step = parse(v)?,
            "chase.p" => c.chase.p = parse(v)?,
            "chase.s" => c.chase.s = parse(v)?,
            "chase.alpha" => c.chase.alpha_schedule = parse_list(v)?,
            "chase.beta" => c.chase.beta_schedule = parse_list(v)?,
            "chase.on_failure" => c.chase.on_failure = parse(v)?,
            "stop.min_bit_errors" => c.stop.min_bit_errors = parse_opt(v)?,
            "stop.max_frames" => c.stop.max_frames = parse_opt(v)?,
            "stop.max_seconds" => c.stop.max_seconds = parse_opt(v)?,
            other => return Err(format!("unknown key `{other}` (known keys: {})", KEYS.join(", "))),
        }
        Ok(())
    }

    /// Parses a whole file on top of the defaults.
    pub fn parse_text(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(ConfigError {
                    line: Some(i + 1),
                    key: line.to_string(),
                    message: "expected `key = value`".into(),
                });
            };
            cfg.set(k, v).map_err(|message| ConfigError {
                line: Some(i + 1),
                key: k.trim().to_string(),
                message,
            })?;
        }
        Ok(cfg)
    }

    /// Fills code-dependent defaults that were not set explicitly, then validates.
    pub fn finish(mut self) -> Result<Self, ConfigError> {
        if !self.profile_set {
            self.sim.profile = default_profile(self.sim.code);
        }
        if !self.kt_set {
            self.sim.kt = default_kt(self.sim.code);
        }
        self.sim.validate().map_err(|e| ConfigError {
            line: None,
            key: "config".into(),
            message: e.to_string(),
        })?;
        Ok(self)
    }

    /// Canonical text form; parsing it reproduces this configuration.
    pub fn to_text(&self) -> String {
        let c = &self.sim;
        let opt = |v: Option<String>| v.unwrap_or_else(|| "none".into());
        let list = |v: &[f64]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        let profile = c
            .profile
            .iter()
            .map(|e| format!("{}:{}", e.degree, e.share))
            .collect::<Vec<_>>()
            .join(",");
        [
            format!("scheme = {}", c.scheme),
            format!("code = {}", c.code),
            format!("profile = {profile}"),
            format!("kt = {}", c.kt),
            format!("modulation = {}", c.modulation),
            format!("demapper = {}", c.demapper),
            format!("iterations = {}", c.iterations),
            format!("early_stop = {}", c.early_stop),
            format!("strict_profile = {}", c.strict_profile),
            format!("seed = {}", c.seed),
            format!("workers = {}", c.workers),
            format!("precision = {}", self.precision.name()),
            format!("ebn0.start = {}", c.sweep.start),
            format!("ebn0.stop = {}", c.sweep.stop),
            format!("ebn0.step = {}", c.sweep.step),
            format!("chase.p = {}", c.chase.p),
            format!("chase.s = {}", c.chase.s),
            format!("chase.alpha = {}", list(&c.chase.alpha_schedule)),
            format!("chase.beta = {}", list(&c.chase.beta_schedule)),
            format!("chase.on_failure = {}", c.chase.on_failure.name()),
            format!("stop.min_bit_errors = {}", opt(c.stop.min_bit_errors.map(|v| v.to_string()))),
            format!("stop.max_frames = {}", opt(c.stop.max_frames.map(|v| v.to_string()))),
            format!("stop.max_seconds = {}", opt(c.stop.max_seconds.map(|v| v.to_string()))),
        ]
        .join("\n")
            + "\n"
    }
}
