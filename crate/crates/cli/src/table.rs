//! Reading result CSVs back in.

use std::path::Path;

use agibtc::sim::{ci95, CSV_HEADER};
use anyhow::{bail, Context, Result};
use serde::Deserialize;

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct Row {
    pub ebn0_db: f64,
    pub ber: f64,
    pub fer: f64,
    pub frames: u64,
    pub info_bits: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub mean_iters: f64,
    pub chase_failures: u64,
    pub complexity: u64,
}

impl Row {
    pub fn ci95(&self) -> f64 {
        ci95(self.bit_errors, self.info_bits)
    }
}

/// Parses a result table; errors name the offending line.
pub fn parse(text: &str, source: &str) -> Result<Vec<Row>> {
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = reader.headers().with_context(|| format!("{source}: unreadable header"))?;
    let got: Vec<&str> = header.iter().collect();
    let want: Vec<&str> = CSV_HEADER.split(',').collect();
    if got != want {
        bail!("{source}: header is `{}`, expected `{CSV_HEADER}`", got.join(","));
    }
    let mut rows = Vec::new();
    for (i, rec) in reader.deserialize::<Row>().enumerate() {
        // Line 1 is the header.
        let line = i + 2;
        let row = rec.map_err(|e| anyhow::anyhow!("{source}: malformed row {} (line {line}): {e}", i + 1))?;
        if !(0.0..=1.0).contains(&row.ber) || !row.ebn0_db.is_finite() {
            bail!("{source}: malformed row {} (line {line}): ber {} or ebn0_db {} out of range", i + 1, row.ber, row.ebn0_db);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        bail!("{source}: no data rows");
    }
    Ok(rows)
}

pub fn read(path: &Path) -> Result<Vec<Row>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse(&text, &path.display().to_string())
}

pub fn curve(rows: &[Row]) -> Vec<(f64, f64)> {
    let mut c: Vec<(f64, f64)> = rows.iter().map(|r| (r.ebn0_db, r.ber)).collect();
    c.sort_by(|a, b| a.0.total_cmp(&b.0));
    c
}

/// Complexity counter per information bit pooled over all rows.
pub fn pooled_complexity_per_bit(rows: &[Row]) -> f64 {
    let bits: u64 = rows.iter().map(|r| r.info_bits).sum();
    let work: u64 = rows.iter().map(|r| r.complexity).sum();
    if bits == 0 {
        0.0
    } else {
        work as f64 / bits as f64
    }
}
