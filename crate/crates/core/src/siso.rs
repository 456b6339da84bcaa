//! Symbol-level Chase decoding with extrinsic output.
//!
//! Reliabilities are 16-entry log-likelihood vectors normalized so that the
//! most likely value sits at 0. A Chase pass perturbs the least reliable
//! positions with their runner-up values, hard-decodes every test word and
//! derives per-value extrinsic information from the best competing codeword.
//!
//! For a value `v` at position `l` with a competitor carrying `v` there, the
//! extrinsic is `alpha * (Lout - Lin)`, where `Lout` is the metric gap between
//! that competitor and the decision and `Lin` the input gap between `v` and the
//! decided value. Without a competitor it is `-beta * S - max(0, Lin)`, with `S`
//! the mean input margin of the word. A failed pass yields a uniform extrinsic
//! unless [`FailureExtrinsic::Fallback`] is selected.

use serde::{Deserialize, Serialize};

use crate::galois::Gf16;
use crate::hermitian::{AgCode, Codeword, ErrorPattern};
use crate::scalar::{clamp_llr, Real, LLR_CLAMP};

/// Alphabet size.
pub const Q: usize = 16;

/// Log-likelihood of each GF(16) value, maximum entry 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolReliability<T> {
    loglik: [T; Q],
}

impl<T: Real> Default for SymbolReliability<T> {
    fn default() -> Self {
        Self::uniform()
    }
}

impl<T: Real> SymbolReliability<T> {
    /// Equal probability for every value.
    pub fn uniform() -> Self {
        SymbolReliability { loglik: [T::zero(); Q] }
    }

    /// Certainty at `v`, clamped.
    pub fn one_hot(v: Gf16) -> Self {
        let mut loglik = [-T::lit(LLR_CLAMP); Q];
        loglik[v.index()] = T::zero();
        SymbolReliability { loglik }
    }

    /// Clamps and shifts raw log-likelihoods so the maximum is 0.
    pub fn from_loglik(mut raw: [T; Q]) -> Self {
        let max = raw.iter().fold(T::neg_infinity(), |m, &v| if v.is_nan() { m } else { m.max(v) });
        let max = if max.is_finite() { max } else { T::zero() };
        for v in raw.iter_mut() {
            *v = clamp_llr(*v - max);
        }
        SymbolReliability { loglik: raw }
    }

    #[inline]
    pub fn loglik(&self, v: Gf16) -> T {
        self.loglik[v.index()]
    }

    #[inline]
    pub fn as_array(&self) -> &[T; Q] {
        &self.loglik
    }

    /// Most likely value; ties go to the smallest representation.
    #[inline]
    pub fn best(&self) -> Gf16 {
        let mut b = 0;
        for v in 1..Q {
            if self.loglik[v] > self.loglik[b] {
                b = v;
            }
        }
        Gf16::new(b as u8)
    }

    /// Values other than `best()` in decreasing likelihood, ties by value.
    pub fn ranked_alternatives(&self) -> [Gf16; Q - 1] {
        let best = self.best().index();
        let mut out = [Gf16::ZERO; Q - 1];
        let mut n = 0;
        for v in 0..Q {
            if v != best {
                out[n] = Gf16::new(v as u8);
                n += 1;
            }
        }
        // Stable sort keeps equal likelihoods in value order.
        out.sort_by(|a, b| {
            self.loglik[b.index()]
                .partial_cmp(&self.loglik[a.index()])
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        out
    }

    /// Gap between the best and the runner-up log-likelihood.
    pub fn margin(&self) -> T {
        margin(self)
    }

    /// Log-domain product of independent beliefs.
    pub fn combine(&self, other: &Self) -> Self {
        let mut raw = self.loglik;
        for (r, &o) in raw.iter_mut().zip(&other.loglik) {
            *r += o;
        }
        Self::from_loglik(raw)
    }

    /// Adds `other` into `acc` without renormalizing.
    #[inline]
    pub fn accumulate(acc: &mut [T; Q], other: &Self) {
        for (a, &o) in acc.iter_mut().zip(&other.loglik) {
            *a += o;
        }
    }
}

/// `0 - runner_up`, i.e. how far the best value stands above the rest.
pub fn margin<T: Real>(rel: &SymbolReliability<T>) -> T {
    let best = rel.best().index();
    let runner = (0..Q)
        .filter(|&v| v != best)
        .map(|v| rel.loglik[v])
        .fold(T::neg_infinity(), T::max);
    rel.loglik[best] - runner
}

/// Soft input of one codeword.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftWord<T> {
    pub symbols: Vec<SymbolReliability<T>>,
}

/// Extrinsic output of one codeword; channel and a priori terms removed.
pub type ExtrinsicWord<T> = SoftWord<T>;

impl<T: Real> SoftWord<T> {
    pub fn new(symbols: Vec<SymbolReliability<T>>) -> Self {
        SoftWord { symbols }
    }

    pub fn uniform(n: usize) -> Self {
        SoftWord {
            symbols: vec![SymbolReliability::uniform(); n],
        }
    }

    /// Near-certain reliabilities for a known word.
    pub fn from_hard(word: &[Gf16]) -> Self {
        SoftWord {
            symbols: word.iter().map(|&v| SymbolReliability::one_hot(v)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn hard_decision(&self) -> Vec<Gf16> {
        self.symbols.iter().map(SymbolReliability::best).collect()
    }
}

/// Extrinsic emitted when no Chase test word decodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum FailureExtrinsic {
    /// No information: uniform reliabilities.
    #[default]
    Neutral,
    /// The beta fallback favoring the raw hard decision.
    Fallback,
}

impl std::str::FromStr for FailureExtrinsic {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "neutral" => Ok(FailureExtrinsic::Neutral),
            "fallback" => Ok(FailureExtrinsic::Fallback),
            other => Err(crate::Error::Config(format!("unknown failure mode `{other}` (expected neutral or fallback)"))),
        }
    }
}

impl FailureExtrinsic {
    pub fn name(self) -> &'static str {
        match self {
            FailureExtrinsic::Neutral => "neutral",
            FailureExtrinsic::Fallback => "fallback",
        }
    }
}

/// Chase search and extrinsic scaling parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChaseConfig {
    /// Number of least reliable positions perturbed.
    pub p: usize,
    /// Alternative values tried per perturbed position.
    pub s: usize,
    /// Extrinsic scaling per iteration; the last entry repeats.
    pub alpha_schedule: Vec<f64>,
    /// Fallback reliability per iteration, in units of the word's mean margin.
    pub beta_schedule: Vec<f64>,
    /// What a failed decode reports as extrinsic.
    #[serde(default)]
    pub on_failure: FailureExtrinsic,
}

impl Default for ChaseConfig {
    fn default() -> Self {
        let sched = vec![0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];
        ChaseConfig {
            p: 4,
            s: 2,
            alpha_schedule: sched.clone(),
            beta_schedule: sched,
            on_failure: FailureExtrinsic::Neutral,
        }
    }
}

impl ChaseConfig {
    pub fn validate(&self) -> crate::Result<()> {
        if !(1..=Q - 1).contains(&self.s) {
            return Err(crate::Error::Config(format!("chase.s = {} must be in [1, 15]", self.s)));
        }
        if self.alpha_schedule.is_empty() || self.beta_schedule.is_empty() {
            return Err(crate::Error::Config("chase schedules must be non-empty".into()));
        }
        Ok(())
    }

    /// Extrinsic scale for a 0-based iteration index.
    pub fn alpha(&self, iteration: usize) -> f64 {
        clamped(&self.alpha_schedule, iteration)
    }

    pub fn beta(&self, iteration: usize) -> f64 {
        clamped(&self.beta_schedule, iteration)
    }

    /// Upper bound on test words per decode, `(s+1)^p`.
    pub fn max_candidates(&self) -> usize {
        (self.s + 1).pow(self.p as u32)
    }
}

fn clamped(s: &[f64], i: usize) -> f64 {
    s[i.min(s.len() - 1)]
}

/// Result of [`chase_decode`].
#[derive(Debug, Clone)]
pub struct ChaseOutput<T> {
    pub decision: Codeword,
    pub extrinsic: ExtrinsicWord<T>,
    /// No test word decoded; `decision` is the raw hard decision.
    pub failed: bool,
    /// Test words generated and hard-decoded.
    pub candidates: usize,
    /// Distinct codewords found.
    pub distinct: usize,
}

/// Sparse codeword: positions (ascending) where it differs from the hard decision.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Candidate<T> {
    diff: Vec<(u8, Gf16)>,
    metric: T,
}

/// Soft-input soft-output decode of one codeword. `iteration` is 0-based.
pub fn chase_decode<T: Real>(
    code: &AgCode,
    input: &SoftWord<T>,
    cfg: &ChaseConfig,
    iteration: usize,
) -> ChaseOutput<T> {
    let n = code.n;
    assert_eq!(input.len(), n, "soft word length");
    let hd = input.hard_decision();

    // Least reliable positions, ties by index.
    let margins: Vec<T> = input.symbols.iter().map(margin).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| margins[a].partial_cmp(&margins[b]).unwrap_or(std::cmp::Ordering::Equal));
    let p = cfg.p.min(n);
    let s = cfg.s.clamp(1, Q - 1);
    let chosen = &order[..p];
    let alts: Vec<[Gf16; Q - 1]> = chosen.iter().map(|&l| input.symbols[l].ranked_alternatives()).collect();

    let r = code.redundancy();
    let mut base = vec![Gf16::ZERO; r];
    code.syndrome(&hd, &mut base);

    let mut found: Vec<Candidate<T>> = Vec::new();
    let mut digits = vec![0usize; p];
    let mut syn = vec![Gf16::ZERO; r];
    let mut candidates = 0;
    loop {
        candidates += 1;
        syn.copy_from_slice(&base);
        let mut subs: Vec<(u8, Gf16)> = Vec::with_capacity(p);
        for (i, &d) in digits.iter().enumerate() {
            if d > 0 {
                let l = chosen[i];
                let v = alts[i][d - 1];
                let delta = v + hd[l];
                for (o, &h) in syn.iter_mut().zip(code.check_column(l)) {
                    *o += delta * h;
                }
                subs.push((l as u8, v));
            }
        }
        if let Ok(errs) = code.locate_errors(&syn) {
            let diff = merge_diff(&hd, &subs, &errs);
            if !found.iter().any(|c| c.diff == diff) {
                let metric = diff
                    .iter()
                    .fold(T::zero(), |acc, &(l, v)| acc + input.symbols[l as usize].loglik(v));
                found.push(Candidate { diff, metric });
            }
        }
        // Mixed-radix increment over the perturbation digits.
        let mut i = 0;
        while i < p {
            digits[i] += 1;
            if digits[i] <= s {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        if i == p {
            break;
        }
    }

    let mean_margin = margins.iter().fold(T::zero(), |a, &m| a + m) / T::lit(n as f64);
    let alpha = T::lit(cfg.alpha(iteration));
    let fallback = -(T::lit(cfg.beta(iteration)) * mean_margin);

    if found.is_empty() {
        let extrinsic = match cfg.on_failure {
            FailureExtrinsic::Neutral => SoftWord::uniform(n),
            FailureExtrinsic::Fallback => SoftWord::new(hd.iter().map(|&v| fallback_reliability(v, fallback)).collect()),
        };
        return ChaseOutput {
            decision: Codeword(hd),
            extrinsic,
            failed: true,
            candidates,
            distinct: 0,
        };
    }

    // First maximum in generation order wins ties.
    let best_idx = found
        .iter()
        .enumerate()
        .fold(0, |b, (i, c)| if c.metric > found[b].metric { i } else { b });
    let best = &found[best_idx];
    let mut decision = hd.clone();
    for &(l, v) in &best.diff {
        decision[l as usize] = v;
    }

    // Best competitor metric for each (position, value) differing from the decision.
    let mut comp = vec![T::neg_infinity(); n * Q];
    let mut touched = vec![false; n];
    for (ci, c) in found.iter().enumerate() {
        if ci == best_idx {
            continue;
        }
        let mut visit = |l: usize, v: Gf16| {
            if v != decision[l] {
                let slot = &mut comp[l * Q + v.index()];
                if c.metric > *slot {
                    *slot = c.metric;
                }
                touched[l] = true;
            }
        };
        for &(l, v) in &c.diff {
            visit(l as usize, v);
        }
        // Positions where the decision moved off the hard decision but `c` did not.
        for &(l, _) in &best.diff {
            if c.diff.binary_search_by_key(&l, |&(p, _)| p).is_err() {
                visit(l as usize, hd[l as usize]);
            }
        }
    }

    let symbols = (0..n)
        .map(|l| {
            let d = decision[l];
            let inp = &input.symbols[l];
            if !touched[l] && inp.best() == d {
                return fallback_reliability(d, fallback);
            }
            let mut raw = [T::zero(); Q];
            for (v, slot) in raw.iter_mut().enumerate() {
                if v == d.index() {
                    continue;
                }
                let cm = comp[l * Q + v];
                let soft_in = inp.as_array()[v] - inp.loglik(d);
                *slot = if cm.is_finite() {
                    let soft_out = cm - best.metric;
                    alpha * (soft_out - soft_in)
                } else {
                    fallback - soft_in.max(T::zero())
                };
            }
            SymbolReliability::from_loglik(raw)
        })
        .collect();

    ChaseOutput {
        decision: Codeword(decision),
        extrinsic: SoftWord::new(symbols),
        failed: false,
        candidates,
        distinct: found.len(),
    }
}

fn fallback_reliability<T: Real>(favored: Gf16, fallback: T) -> SymbolReliability<T> {
    let mut raw = [fallback; Q];
    raw[favored.index()] = T::zero();
    SymbolReliability::from_loglik(raw)
}

/// Differences from `hd` after applying substitutions and then the error pattern.
fn merge_diff(hd: &[Gf16], subs: &[(u8, Gf16)], errs: &ErrorPattern) -> Vec<(u8, Gf16)> {
    let mut diff: Vec<(u8, Gf16)> = subs.to_vec();
    for (pos, e) in errs.iter() {
        let pos8 = pos as u8;
        match diff.iter_mut().find(|(l, _)| *l == pos8) {
            Some(entry) => entry.1 += e,
            None => diff.push((pos8, hd[pos] + e)),
        }
    }
    diff.retain(|&(l, v)| v != hd[l as usize]);
    diff.sort_unstable_by_key(|&(l, _)| l);
    diff
}
