//! JSON manifests written next to simulation and comparison outputs.

use std::time::{SystemTime, UNIX_EPOCH};

use agibtc::sim::{PointResult, SimConfig};
use serde::Serialize;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize)]
pub struct Outputs {
    pub csv: String,
    pub manifest: String,
}

#[derive(Debug, Serialize)]
pub struct PointSummary {
    pub ebn0_db: f64,
    pub frames: u64,
    pub bit_errors: u64,
    pub ber: f64,
    pub ci95: f64,
    pub complexity_per_bit: f64,
}

impl From<&PointResult> for PointSummary {
    fn from(r: &PointResult) -> Self {
        PointSummary {
            ebn0_db: r.ebn0_db,
            frames: r.frames,
            bit_errors: r.bit_errors,
            ber: r.ber,
            ci95: r.ci95,
            complexity_per_bit: r.complexity_per_bit(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub csv_schema_version: u32,
    pub csv_header: &'static str,
    pub seed: u64,
    pub timestamp_unix: u64,
    pub precision: &'static str,
    pub code_rate: f64,
    /// Chase test words per information bit with every iteration run.
    pub nominal_complexity_per_bit: f64,
    /// Config file text that reproduces this run.
    pub config_text: String,
    pub config: SimConfig,
    pub outputs: Outputs,
    pub points: Vec<PointSummary>,
}

#[derive(Debug, Serialize)]
pub struct CurveSummary {
    pub path: String,
    pub crossing_db: f64,
    pub complexity_per_bit: f64,
}

#[derive(Debug, Serialize)]
pub struct CompareManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub csv_schema_version: u32,
    pub timestamp_unix: u64,
    pub target_ber: f64,
    /// Eb/N0 of `b` minus Eb/N0 of `a` at the target.
    pub gain_db: f64,
    pub a: CurveSummary,
    pub b: CurveSummary,
    /// Complexity per bit of `a` over that of `b`.
    pub complexity_ratio: f64,
}

pub fn now_unix() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

