//! Seeded Monte Carlo BER/FER measurement over Eb/N0 sweeps.
//!
//! Frame `f` draws its information, channel and interleaver randomness from
//! seeds derived from `(master seed, f)`. Frames are simulated in fixed-size
//! batches and folded in frame order, so the stop rule sees the same
//! sequence of outcomes for any worker count.

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::Instant;

use num_complex::Complex;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::btc::{decode_product, encode_product, product_rate};
use crate::channel::{noise_variance, transmit, ChannelParams};
use crate::error::{Error, Result};
use crate::galois::Gf16;
use crate::hermitian::{AgCode, CodeId};
use crate::ibtc::{decode_frame, DecoderState, IbtcCodec, Interleaver, ProfileEntry, Validation};
use crate::modem::{bits_to_symbol_reliability, symbols_to_bits, Constellation, Demapper, Modulation, BITS_PER_FIELD_SYMBOL};
use crate::scalar::Real;
use crate::seed::{frame_rng, Stream};
use crate::siso::{ChaseConfig, SymbolReliability};

/// CSV header written by [`SimResult::to_csv`].
pub const CSV_HEADER: &str = "ebn0_db,ber,fer,frames,info_bits,bit_errors,frame_errors,mean_iters,chase_failures,complexity";

/// Version tag of the CSV layout.
pub const CSV_SCHEMA_VERSION: u32 = 1;

/// Frames simulated per scheduling batch.
const BATCH: u64 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    Ibtc,
    Btc,
    Uncoded,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Ibtc => "ibtc",
            Scheme::Btc => "btc",
            Scheme::Uncoded => "uncoded",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ibtc" => Ok(Scheme::Ibtc),
            "btc" => Ok(Scheme::Btc),
            "uncoded" => Ok(Scheme::Uncoded),
            other => Err(Error::Config(format!("unknown scheme `{other}` (expected ibtc, btc or uncoded)"))),
        }
    }
}

/// Inclusive Eb/N0 grid in dB.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Sweep {
    pub fn single(ebn0_db: f64) -> Self {
        Sweep {
            start: ebn0_db,
            stop: ebn0_db,
            step: 1.0,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        if self.stop < self.start || !(self.step > 0.0) {
            return Vec::new();
        }
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| {
                // Round to 1e-9 dB so printed values do not carry accumulation noise.
                let v = self.start + i as f64 * self.step;
                (v * 1e9).round() / 1e9
            })
            .collect()
    }
}

/// Per-point stop rule; the first bound reached ends the point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StopRule {
    pub min_bit_errors: Option<u64>,
    pub max_frames: Option<u64>,
    pub max_seconds: Option<f64>,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            min_bit_errors: Some(100),
            max_frames: Some(100_000),
            max_seconds: Some(600.0),
        }
    }
}

impl StopRule {
    pub fn is_bounded(&self) -> bool {
        self.min_bit_errors.is_some() || self.max_frames.is_some() || self.max_seconds.is_some()
    }
}

/// Everything needed to reproduce one sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub scheme: Scheme,
    pub code: CodeId,
    pub profile: Vec<ProfileEntry>,
    /// Information symbols per IBTC or uncoded frame.
    pub kt: usize,
    pub modulation: Modulation,
    pub demapper: Demapper,
    pub sweep: Sweep,
    pub iterations: usize,
    pub chase: ChaseConfig,
    pub stop: StopRule,
    pub seed: u64,
    /// Worker threads; 0 picks the machine default.
    pub workers: usize,
    pub early_stop: bool,
    pub strict_profile: bool,
}

/// Degree profile used when none is configured.
pub fn default_profile(code: CodeId) -> Vec<ProfileEntry> {
    match code {
        CodeId::Ag64_49 => vec![ProfileEntry::new(2, 0.85), ProfileEntry::new(3, 0.10), ProfileEntry::new(9, 0.05)],
        CodeId::Ag64_44 => vec![ProfileEntry::new(2, 0.90), ProfileEntry::new(4, 0.10)],
    }
}

/// Frame size used when none is configured.
pub fn default_kt(code: CodeId) -> usize {
    match code {
        CodeId::Ag64_49 => 980,
        CodeId::Ag64_44 => 440,
    }
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig::for_code(Scheme::Ibtc, CodeId::Ag64_49, Modulation::Bpsk)
    }
}

impl SimConfig {
    pub fn for_code(scheme: Scheme, code: CodeId, modulation: Modulation) -> Self {
        SimConfig {
            scheme,
            code,
            profile: default_profile(code),
            kt: default_kt(code),
            modulation,
            demapper: Demapper::Exact,
            sweep: Sweep {
                start: 0.0,
                stop: 10.0,
                step: 1.0,
            },
            iterations: 8,
            chase: ChaseConfig::default(),
            stop: StopRule::default(),
            seed: 1,
            workers: 0,
            early_stop: false,
            strict_profile: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sweep.points().is_empty() {
            return Err(Error::Config("Eb/N0 sweep is empty".into()));
        }
        if !self.stop.is_bounded() {
            return Err(Error::Config("stop rule needs at least one bound".into()));
        }
        if self.iterations == 0 {
            return Err(Error::Config("iterations must be >= 1".into()));
        }
        if self.kt == 0 {
            return Err(Error::Config("kt must be >= 1".into()));
        }
        self.chase.validate()
    }
}

/// One sweep point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub ebn0_db: f64,
    pub frames: u64,
    pub info_bits: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub ber: f64,
    pub fer: f64,
    /// 95% normal-approximation half-width of `ber`.
    pub ci95: f64,
    pub mean_iters: f64,
    pub chase_failures: u64,
    /// Sum over decodes of Chase test words hard-decoded.
    pub complexity: u64,
}

impl PointResult {
    /// Complexity counter per information bit.
    pub fn complexity_per_bit(&self) -> f64 {
        if self.info_bits == 0 {
            0.0
        } else {
            self.complexity as f64 / self.info_bits as f64
        }
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{:.6e},{:.6e},{},{},{},{},{:.3},{},{}",
            self.ebn0_db,
            self.ber,
            self.fer,
            self.frames,
            self.info_bits,
            self.bit_errors,
            self.frame_errors,
            self.mean_iters,
            self.chase_failures,
            self.complexity
        )
    }
}

/// 95% half-width of a binomial proportion, normal approximation.
pub fn ci95(errors: u64, trials: u64) -> f64 {
    if trials == 0 {
        return 0.0;
    }
    let p = errors as f64 / trials as f64;
    1.96 * (p * (1.0 - p) / trials as f64).sqrt()
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub rows: Vec<PointResult>,
}

impl SimResult {
    pub fn to_csv(&self) -> String {
        let mut s = String::with_capacity(64 * (self.rows.len() + 1));
        s.push_str(CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            let _ = writeln!(s, "{}", r.csv_row());
        }
        s
    }

    /// `(ebn0_db, ber)` pairs.
    pub fn curve(&self) -> Vec<(f64, f64)> {
        self.rows.iter().map(|r| (r.ebn0_db, r.ber)).collect()
    }
}

/// Outcome of one simulated frame.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FrameOutcome {
    pub info_bits: u64,
    pub bit_errors: u64,
    pub iterations: u64,
    pub chase_failures: u64,
    pub complexity: u64,
}

#[derive(Debug, Clone, Default)]
struct Tally {
    frames: u64,
    info_bits: u64,
    bit_errors: u64,
    frame_errors: u64,
    iterations: u64,
    chase_failures: u64,
    complexity: u64,
}

impl Tally {
    fn add(&mut self, o: &FrameOutcome) {
        self.frames += 1;
        self.info_bits += o.info_bits;
        self.bit_errors += o.bit_errors;
        self.frame_errors += (o.bit_errors > 0) as u64;
        self.iterations += o.iterations;
        self.chase_failures += o.chase_failures;
        self.complexity += o.complexity;
    }

    fn into_point(self, ebn0_db: f64) -> PointResult {
        let ratio = |a: u64, b: u64| if b == 0 { 0.0 } else { a as f64 / b as f64 };
        PointResult {
            ebn0_db,
            frames: self.frames,
            info_bits: self.info_bits,
            bit_errors: self.bit_errors,
            frame_errors: self.frame_errors,
            ber: ratio(self.bit_errors, self.info_bits),
            fer: ratio(self.frame_errors, self.frames),
            ci95: ci95(self.bit_errors, self.info_bits),
            mean_iters: ratio(self.iterations, self.frames),
            chase_failures: self.chase_failures,
            complexity: self.complexity,
        }
    }
}

/// A configured codec ready to simulate frames.
pub struct Simulator {
    cfg: SimConfig,
    code: AgCode,
    ibtc: Option<IbtcParts>,
}

struct IbtcParts {
    profile: crate::ibtc::DegreeProfile,
    layout: crate::ibtc::FrameLayout,
    map: crate::ibtc::RepetitionMap,
}

impl Simulator {
    pub fn new(cfg: SimConfig) -> Result<Self> {
        cfg.validate()?;
        let code = cfg.code.build();
        let ibtc = if cfg.scheme == Scheme::Ibtc {
            let validation = if cfg.strict_profile {
                Validation::Strict
            } else {
                Validation::Relaxed
            };
            let codec = IbtcCodec::new(&code, &cfg.profile, cfg.kt, validation)?;
            Some(IbtcParts {
                profile: codec.profile,
                layout: codec.layout,
                map: codec.map,
            })
        } else {
            None
        };
        Ok(Simulator { cfg, code, ibtc })
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    pub fn code(&self) -> &AgCode {
        &self.code
    }

    fn codec(&self) -> Option<IbtcCodec<'_>> {
        self.ibtc.as_ref().map(|p| IbtcCodec {
            code: &self.code,
            profile: p.profile.clone(),
            layout: p.layout,
            map: p.map.clone(),
        })
    }

    /// Code rate entering the Eb/N0 normalization.
    pub fn rate(&self) -> f64 {
        match self.cfg.scheme {
            Scheme::Ibtc => self.ibtc.as_ref().expect("ibtc parts").layout.rate_f64(),
            Scheme::Btc => {
                let r = product_rate(&self.code);
                *r.numer() as f64 / *r.denom() as f64
            }
            Scheme::Uncoded => 1.0,
        }
    }

    /// Information symbols per frame.
    pub fn info_symbols(&self) -> usize {
        match self.cfg.scheme {
            Scheme::Btc => self.code.k * self.code.k,
            _ => self.cfg.kt,
        }
    }

    /// Expected Chase test words per frame with no early stopping.
    pub fn nominal_complexity(&self) -> u64 {
        let per_decode = self.cfg.chase.max_candidates() as u64;
        let decodes = match self.cfg.scheme {
            Scheme::Ibtc => self.ibtc.as_ref().expect("ibtc parts").layout.codewords as u64,
            Scheme::Btc => 2 * self.code.n as u64,
            Scheme::Uncoded => 0,
        };
        decodes * per_decode * self.cfg.iterations as u64
    }

    pub fn n0(&self, ebn0_db: f64) -> Result<f64> {
        noise_variance(&ChannelParams {
            ebn0_db,
            code_rate: self.rate(),
            bits_per_symbol: self.cfg.modulation.bits_per_symbol(),
        })
    }

    /// Simulates frame `index` at noise variance `n0`.
    pub fn frame<T: Real>(&self, index: u64, n0: f64) -> FrameOutcome {
        let cfg = &self.cfg;
        let mut info_rng = frame_rng(cfg.seed, Stream::Info, index);
        let info: Vec<Gf16> = (0..self.info_symbols())
            .map(|_| Gf16::new(info_rng.random_range(0..16u8)))
            .collect();

        let codec = self.codec();
        let interleaver = codec
            .as_ref()
            .map(|c| Interleaver::for_frame(c.layout.ht, cfg.seed, index));
        let tx: Vec<Gf16> = match cfg.scheme {
            Scheme::Ibtc => {
                let codec = codec.as_ref().expect("codec");
                codec
                    .encode(&info, interleaver.as_ref().expect("interleaver"))
                    .expect("layout-sized frame")
                    .symbols()
            }
            Scheme::Btc => encode_product(&self.code, &info).expect("k x k block").grid,
            Scheme::Uncoded => info.clone(),
        };

        let rx = receive::<T, _>(&tx, cfg.modulation, cfg.demapper, n0, &mut frame_rng(cfg.seed, Stream::Channel, index));

        let (estimate, iterations, chase_failures, complexity) = match cfg.scheme {
            Scheme::Ibtc => {
                let codec = codec.as_ref().expect("codec");
                let kt = codec.layout.kt;
                let mut state = DecoderState::new(codec, rx[..kt].to_vec(), rx[kt..].to_vec()).expect("sized state");
                let out = decode_frame(
                    &mut state,
                    codec,
                    interleaver.as_ref().expect("interleaver"),
                    &cfg.chase,
                    cfg.iterations,
                    cfg.early_stop,
                );
                let iters = out.iterations.len() as u64;
                (out.info.clone(), iters, out.chase_failures() as u64, out.candidates() as u64)
            }
            Scheme::Btc => {
                let out = decode_product(&rx, &self.code, &cfg.chase, cfg.iterations, cfg.early_stop).expect("sized grid");
                let iters = out.iterations.len() as u64;
                (out.info.clone(), iters, out.chase_failures() as u64, out.candidates() as u64)
            }
            Scheme::Uncoded => (rx.iter().map(SymbolReliability::best).collect(), 0, 0, 0),
        };

        let bit_errors = info
            .iter()
            .zip(&estimate)
            .map(|(a, b)| (a.value() ^ b.value()).count_ones() as u64)
            .sum();
        FrameOutcome {
            info_bits: (info.len() * BITS_PER_FIELD_SYMBOL) as u64,
            bit_errors,
            iterations,
            chase_failures,
            complexity,
        }
    }

    /// Measures one Eb/N0 point under the configured stop rule.
    pub fn run_point<T: Real>(&self, ebn0_db: f64) -> Result<PointResult> {
        let n0 = self.n0(ebn0_db)?;
        let stop = self.cfg.stop;
        let started = Instant::now();
        let mut tally = Tally::default();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.cfg.workers)
            .build()
            .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
        'outer: loop {
            let remaining = stop.max_frames.map_or(BATCH, |m| m.saturating_sub(tally.frames).min(BATCH));
            if remaining == 0 {
                break;
            }
            let first = tally.frames;
            let outcomes: Vec<FrameOutcome> = pool.install(|| {
                (first..first + remaining)
                    .into_par_iter()
                    .map(|f| self.frame::<T>(f, n0))
                    .collect()
            });
            for o in &outcomes {
                tally.add(o);
                if stop.min_bit_errors.is_some_and(|m| tally.bit_errors >= m)
                    || stop.max_frames.is_some_and(|m| tally.frames >= m)
                {
                    break 'outer;
                }
            }
            if stop.max_seconds.is_some_and(|s| started.elapsed().as_secs_f64() >= s) {
                break;
            }
        }
        Ok(tally.into_point(ebn0_db))
    }

    /// Runs every sweep point, reporting each as it completes.
    pub fn run_sweep<T: Real>(&self, mut progress: impl FnMut(&PointResult)) -> Result<SimResult> {
        let mut rows = Vec::new();
        for ebn0 in self.cfg.sweep.points() {
            let row = self.run_point::<T>(ebn0)?;
            progress(&row);
            rows.push(row);
        }
        Ok(SimResult { rows })
    }
}

/// Serializes, modulates, fades and demaps `symbols`; returns one reliability per symbol.
pub fn receive<T: Real, R: Rng + ?Sized>(
    symbols: &[Gf16],
    modulation: Modulation,
    demapper: Demapper,
    n0: f64,
    rng: &mut R,
) -> Vec<SymbolReliability<T>> {
    let constellation = Constellation::<T>::new(modulation);
    let bits = symbols_to_bits(symbols);
    let x: Vec<Complex<T>> = constellation.modulate(&bits);
    let obs = transmit(&x, n0, rng);
    let bps = constellation.bits_per_symbol;
    // Floor keeps the demapper finite when the point is effectively noiseless.
    let n0t = T::lit(n0.max(1e-12));
    let mut llrs = vec![T::zero(); obs.len() * bps];
    for (o, out) in obs.iter().zip(llrs.chunks_exact_mut(bps)) {
        constellation.demodulate_into(o.y, o.h, n0t, demapper, out);
    }
    // Pad bits past the last field symbol are dropped here.
    llrs.chunks_exact(BITS_PER_FIELD_SYMBOL)
        .take(symbols.len())
        .map(bits_to_symbol_reliability)
        .collect()
}

/// Convenience wrapper: build a simulator and run one point in `f64`.
pub fn run_point(cfg: &SimConfig, ebn0_db: f64) -> Result<PointResult> {
    Simulator::new(cfg.clone())?.run_point::<f64>(ebn0_db)
}

/// Convenience wrapper: build a simulator and run the whole sweep in `f64`.
pub fn run_sweep(cfg: &SimConfig, progress: impl FnMut(&PointResult)) -> Result<SimResult> {
    Simulator::new(cfg.clone())?.run_sweep::<f64>(progress)
}

/// Eb/N0 at which a BER curve first crosses `target`, interpolating `log10(ber)` linearly.
pub fn crossing(curve: &[(f64, f64)], target: f64) -> Result<f64> {
    if !(target > 0.0) {
        return Err(Error::NotBracketed(target));
    }
    let lt = target.log10();
    for w in curve.windows(2) {
        let ((x1, b1), (x2, b2)) = (w[0], w[1]);
        if b1 == target {
            return Ok(x1);
        }
        if b1 > target && b2 <= target {
            if b2 == target {
                return Ok(x2);
            }
            if b2 <= 0.0 {
                // A zero-error point cannot be placed on a log axis.
                return Err(Error::NotBracketed(target));
            }
            let (l1, l2) = (b1.log10(), b2.log10());
            return Ok(x1 + (lt - l1) * (x2 - x1) / (l2 - l1));
        }
    }
    match curve.last() {
        Some(&(x, b)) if b == target => Ok(x),
        _ => Err(Error::NotBracketed(target)),
    }
}

/// Coding gain of curve `a` over curve `b` at `target`: `EbN0_b - EbN0_a` in dB.
pub fn gain_at_ber(curve_a: &[(f64, f64)], curve_b: &[(f64, f64)], target: f64) -> Result<f64> {
    Ok(crossing(curve_b, target)? - crossing(curve_a, target)?)
}

/// Where a scheme's BER curve crosses a target, with the points that bracket it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingMeasurement {
    pub ebn0_db: f64,
    /// Half-width of the crossing from the 95% BER band.
    pub halfwidth_db: f64,
    pub rows: Vec<PointResult>,
}

/// Locates the `target` crossing of the configured scheme.
///
/// A coarse walk in `coarse_step` dB from `start` (with a cheap stop rule of
/// `coarse_bits` information bits) brackets the crossing; the bracket is
/// then re-measured every `fine_step` dB under the configured stop rule
/// until one point lies at or above `target` and the next below it.
pub fn locate_crossing<T: Real>(
    sim: &Simulator,
    start: f64,
    coarse_step: f64,
    fine_step: f64,
    target: f64,
    coarse_bits: u64,
    max_points: usize,
) -> Result<CrossingMeasurement> {
    let bits_per_frame = (sim.info_symbols() * BITS_PER_FIELD_SYMBOL) as u64;
    let coarse = Simulator {
        cfg: SimConfig {
            stop: StopRule {
                min_bit_errors: sim.cfg.stop.min_bit_errors,
                max_frames: Some(coarse_bits.div_ceil(bits_per_frame).max(1)),
                max_seconds: sim.cfg.stop.max_seconds,
            },
            ..sim.cfg.clone()
        },
        code: sim.code.clone(),
        ibtc: sim.ibtc.as_ref().map(|p| IbtcParts {
            profile: p.profile.clone(),
            layout: p.layout,
            map: p.map.clone(),
        }),
    };
    let mut x = start;
    let mut above = None;
    for _ in 0..max_points {
        let r = coarse.run_point::<T>(x)?;
        if r.ber >= target {
            above = Some(x);
        } else if above.is_some() {
            break;
        } else {
            // Started below the target: step back.
            x -= 2.0 * coarse_step;
            continue;
        }
        x += coarse_step;
    }
    let lo = above.ok_or(Error::NotBracketed(target))?;

    let mut rows: Vec<PointResult> = Vec::new();
    let mut x = lo;
    for _ in 0..max_points {
        let r = sim.run_point::<T>(x)?;
        let below = r.ber < target;
        if below && rows.is_empty() {
            // The coarse estimate was optimistic; back off one fine step.
            rows.push(r);
            x -= fine_step;
            rows.sort_by(|a, b| a.ebn0_db.total_cmp(&b.ebn0_db));
            continue;
        }
        rows.push(r);
        rows.sort_by(|a, b| a.ebn0_db.total_cmp(&b.ebn0_db));
        let curve: Vec<(f64, f64)> = rows.iter().map(|r| (r.ebn0_db, r.ber)).collect();
        if let Ok(ebn0_db) = crossing(&curve, target) {
            let halfwidth_db = crossing_halfwidth(&rows, target)?;
            return Ok(CrossingMeasurement { ebn0_db, halfwidth_db, rows });
        }
        x = if below {
            rows[0].ebn0_db - fine_step
        } else {
            rows.last().map_or(x, |r| r.ebn0_db) + fine_step
        };
    }
    Err(Error::NotBracketed(target))
}

/// Half-width in dB of a curve's crossing: the relative 95% BER band of the
/// bracketing points mapped through the local slope of `log10(ber)`.
pub fn crossing_halfwidth(rows: &[PointResult], target: f64) -> Result<f64> {
    let mut sorted: Vec<&PointResult> = rows.iter().collect();
    sorted.sort_by(|a, b| a.ebn0_db.total_cmp(&b.ebn0_db));
    let seg = sorted
        .windows(2)
        .find(|w| w[0].ber > target && w[1].ber <= target && w[1].ber > 0.0)
        .ok_or(Error::NotBracketed(target))?;
    let (a, b) = (seg[0], seg[1]);
    let slope = (b.ber.log10() - a.ber.log10()) / (b.ebn0_db - a.ebn0_db);
    let rel = (a.ci95 / a.ber).max(b.ci95 / b.ber);
    Ok((1.0 + rel).log10() / slope.abs())
}
