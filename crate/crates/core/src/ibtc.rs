//! Irregular block turbo code over a single AG component code.
//!
//! Encoder: information symbols are repeated a non-uniform number of times
//! (the degree profile), permuted by a per-frame random interleaver, cut
//! into blocks of `k` and systematically encoded. Only the original
//! symbols and the parity of each block are transmitted.
//!
//! Decoder: each block's soft input combines the repeated channel values,
//! the block's parity observations and the a priori term. The extrinsic
//! output of all copies of a symbol is exchanged through the repetition
//! node, where copy `i` receives the log-domain sum of the other copies'
//! extrinsics as its next a priori.

use num_rational::Ratio;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galois::Gf16;
use crate::hermitian::AgCode;
use crate::scalar::Real;
use crate::seed::{frame_rng, Stream};
use crate::siso::{chase_decode, ChaseConfig, SoftWord, SymbolReliability, Q};

/// Most distinct degrees a profile may use.
pub const MAX_DISTINCT_DEGREES: usize = 3;

/// Allowed degree-2 share under strict validation.
pub const DEGREE_TWO_SHARE: (f64, f64) = (0.75, 0.95);

/// One profile entry as configured: repetition degree and share of the info symbols.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub degree: usize,
    pub share: f64,
}

impl ProfileEntry {
    pub fn new(degree: usize, share: f64) -> Self {
        ProfileEntry { degree, share }
    }
}

/// Degree profile resolved to integer symbol counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeProfile {
    /// Entries sorted by ascending degree.
    pub entries: Vec<ProfileEntry>,
    /// Symbols per entry; sums to `K_t`.
    pub counts: Vec<usize>,
}

impl DegreeProfile {
    pub fn max_degree(&self) -> usize {
        self.entries.iter().map(|e| e.degree).max().unwrap_or(0)
    }

    /// Degree of each original symbol, group-major.
    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries
            .iter()
            .zip(&self.counts)
            .flat_map(|(e, &c)| std::iter::repeat(e.degree).take(c))
    }
}

/// Frame accounting derived from a resolved profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameLayout {
    pub n: usize,
    pub k: usize,
    /// Original information symbols.
    pub kt: usize,
    /// Symbols after repetition, `sum d_j f_j`.
    pub ht: usize,
    /// Component codewords per frame, `ht / k`.
    pub codewords: usize,
    /// Transmitted parity symbols.
    pub pt: usize,
    /// Transmitted symbols, `kt + pt`.
    pub nt: usize,
    /// Symbols moved between the two lowest degrees to make `ht` divisible by `k`.
    pub moved: usize,
}

impl FrameLayout {
    /// `kt / (kt + pt)`, exact.
    pub fn rate(&self) -> Ratio<u64> {
        Ratio::new(self.kt as u64, self.nt as u64)
    }

    pub fn rate_f64(&self) -> f64 {
        self.kt as f64 / self.nt as f64
    }
}

/// Whether the degree-2 share must lie in [`DEGREE_TWO_SHARE`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Validation {
    #[default]
    Strict,
    Relaxed,
}

/// Resolves shares into counts and checks the frame fits whole codewords.
///
/// Counts use largest-remainder rounding. If `sum d_j f_j` is not a multiple
/// of `code.k`, symbols move one at a time from the lowest to the second
/// lowest degree until it is.
pub fn resolve_profile(
    shares: &[ProfileEntry],
    kt: usize,
    code: &AgCode,
    validation: Validation,
) -> Result<(DegreeProfile, FrameLayout)> {
    resolve_profile_for(shares, kt, code.n, code.k, validation)
}

/// [`resolve_profile`] given only the component code's `(n, k)`.
pub fn resolve_profile_for(
    shares: &[ProfileEntry],
    kt: usize,
    n: usize,
    k: usize,
    validation: Validation,
) -> Result<(DegreeProfile, FrameLayout)> {
    let bad = |m: String| Err(Error::Profile(m));
    if kt == 0 {
        return bad("K_t must be at least 1".into());
    }
    if shares.is_empty() || shares.len() > MAX_DISTINCT_DEGREES {
        return bad(format!("need 1..={MAX_DISTINCT_DEGREES} degrees, got {}", shares.len()));
    }
    let mut entries = shares.to_vec();
    entries.sort_by_key(|e| e.degree);
    if entries.windows(2).any(|w| w[0].degree == w[1].degree) {
        return bad("degrees must be distinct".into());
    }
    if let Some(e) = entries.iter().find(|e| e.degree < 2) {
        return bad(format!("degree {} is below 2", e.degree));
    }
    if entries.iter().any(|e| !(e.share > 0.0) || !e.share.is_finite()) {
        return bad("shares must be positive".into());
    }
    let total: f64 = entries.iter().map(|e| e.share).sum();
    if (total - 1.0).abs() > 1e-6 {
        return bad(format!("shares sum to {total}, expected 1"));
    }
    if validation == Validation::Strict {
        let two = entries.iter().find(|e| e.degree == 2).map_or(0.0, |e| e.share);
        let (lo, hi) = DEGREE_TWO_SHARE;
        if two < lo - 1e-12 || two > hi + 1e-12 {
            return bad(format!("degree-2 share {two} outside [{lo}, {hi}]"));
        }
    }

    // Largest remainder, with a small guard so exact products do not floor down.
    let quotas: Vec<f64> = entries.iter().map(|e| e.share / total * kt as f64).collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| (q + 1e-9).floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..entries.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = quotas[a] - counts[a] as f64;
        let rb = quotas[b] - counts[b] as f64;
        rb.partial_cmp(&ra).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b))
    });
    for &i in order.iter().take(kt.saturating_sub(assigned)) {
        counts[i] += 1;
    }

    let repeated = |c: &[usize]| -> usize { entries.iter().zip(c).map(|(e, &f)| e.degree * f).sum() };
    let mut moved = 0;
    while repeated(&counts) % k != 0 {
        if entries.len() < 2 || counts[0] == 0 || moved >= kt {
            return bad(format!(
                "cannot make the repeated length {} a multiple of k = {k}",
                repeated(&counts)
            ));
        }
        counts[0] -= 1;
        counts[1] += 1;
        moved += 1;
    }

    let ht = repeated(&counts);
    let codewords = ht / k;
    let pt = codewords * (n - k);
    let layout = FrameLayout {
        n,
        k,
        kt,
        ht,
        codewords,
        pt,
        nt: kt + pt,
        moved,
    };
    Ok((DegreeProfile { entries, counts }, layout))
}

/// Where every copy of every original symbol sits in the repeated sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepetitionMap {
    /// Original symbol index of each repeated position.
    pub source: Vec<usize>,
    /// Repeated positions of each original symbol.
    pub copies: Vec<Vec<usize>>,
}

impl RepetitionMap {
    /// Group-major layout: each group's symbols are written `d` times in a row.
    pub fn new(profile: &DegreeProfile) -> Self {
        let kt: usize = profile.counts.iter().sum();
        let mut source = Vec::new();
        let mut copies = vec![Vec::new(); kt];
        let mut start = 0;
        for (e, &count) in profile.entries.iter().zip(&profile.counts) {
            for _ in 0..e.degree {
                for i in start..start + count {
                    copies[i].push(source.len());
                    source.push(i);
                }
            }
            start += count;
        }
        RepetitionMap { source, copies }
    }
}

/// Repeats each information symbol according to its degree.
pub fn repeat_nonuniform(info: &[Gf16], map: &RepetitionMap) -> Result<Vec<Gf16>> {
    if info.len() != map.copies.len() {
        return Err(Error::Length {
            expected: map.copies.len(),
            got: info.len(),
        });
    }
    Ok(map.source.iter().map(|&i| info[i]).collect())
}

/// Random permutation of the repeated sequence, regenerated per frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interleaver {
    /// `out[j] = input[perm[j]]`.
    pub perm: Vec<usize>,
    pub seed: u64,
    pub frame: u64,
}

impl Interleaver {
    /// Fisher-Yates shuffle seeded from `(master, frame)`.
    pub fn for_frame(len: usize, master: u64, frame: u64) -> Self {
        let mut perm: Vec<usize> = (0..len).collect();
        perm.shuffle(&mut frame_rng(master, Stream::Interleaver, frame));
        Interleaver {
            perm,
            seed: master,
            frame,
        }
    }

    pub fn identity(len: usize) -> Self {
        Interleaver {
            perm: (0..len).collect(),
            seed: 0,
            frame: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn interleave<V: Copy>(&self, input: &[V]) -> Vec<V> {
        self.perm.iter().map(|&p| input[p]).collect()
    }

    pub fn deinterleave<V: Copy + Default>(&self, input: &[V]) -> Vec<V> {
        let mut out = vec![V::default(); input.len()];
        for (j, &p) in self.perm.iter().enumerate() {
            out[p] = input[j];
        }
        out
    }
}

/// Transmitted frame: the original symbols followed by every block's parity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TxFrame {
    pub info: Vec<Gf16>,
    pub parity: Vec<Gf16>,
}

impl TxFrame {
    pub fn symbols(&self) -> Vec<Gf16> {
        let mut s = self.info.clone();
        s.extend_from_slice(&self.parity);
        s
    }
}

/// Repetition, interleaving and single-code encoding bundled for one profile.
#[derive(Debug, Clone)]
pub struct IbtcCodec<'a> {
    pub code: &'a AgCode,
    pub profile: DegreeProfile,
    pub layout: FrameLayout,
    pub map: RepetitionMap,
}

impl<'a> IbtcCodec<'a> {
    pub fn new(code: &'a AgCode, shares: &[ProfileEntry], kt: usize, validation: Validation) -> Result<Self> {
        let (profile, layout) = resolve_profile(shares, kt, code, validation)?;
        let map = RepetitionMap::new(&profile);
        Ok(IbtcCodec {
            code,
            profile,
            layout,
            map,
        })
    }

    pub fn encode(&self, info: &[Gf16], interleaver: &Interleaver) -> Result<TxFrame> {
        encode_frame(info, self, interleaver)
    }
}

/// repeat, interleave, encode each block of `k`, keep only the parity.
pub fn encode_frame(info: &[Gf16], codec: &IbtcCodec<'_>, interleaver: &Interleaver) -> Result<TxFrame> {
    let layout = &codec.layout;
    if interleaver.len() != layout.ht {
        return Err(Error::Length {
            expected: layout.ht,
            got: interleaver.len(),
        });
    }
    let repeated = repeat_nonuniform(info, &codec.map)?;
    let mixed = interleaver.interleave(&repeated);
    let r = layout.n - layout.k;
    let mut parity = vec![Gf16::ZERO; layout.pt];
    for (block, out) in mixed.chunks_exact(layout.k).zip(parity.chunks_exact_mut(r)) {
        codec.code.parity_of(block, out);
    }
    Ok(TxFrame {
        info: info.to_vec(),
        parity,
    })
}

/// Soft state of the iterative decoder; all per-copy vectors are in repeated order.
#[derive(Debug, Clone)]
pub struct DecoderState<T> {
    pub channel_info: Vec<SymbolReliability<T>>,
    pub channel_parity: Vec<SymbolReliability<T>>,
    /// Channel reliability replicated onto every copy.
    pub repeated: Vec<SymbolReliability<T>>,
    pub apriori: Vec<SymbolReliability<T>>,
    pub extrinsic: Vec<SymbolReliability<T>>,
    pub iteration: usize,
}

impl<T: Real> DecoderState<T> {
    pub fn new(
        codec: &IbtcCodec<'_>,
        channel_info: Vec<SymbolReliability<T>>,
        channel_parity: Vec<SymbolReliability<T>>,
    ) -> Result<Self> {
        let l = &codec.layout;
        for (want, got) in [(l.kt, channel_info.len()), (l.pt, channel_parity.len())] {
            if want != got {
                return Err(Error::Length { expected: want, got });
            }
        }
        let repeated = codec.map.source.iter().map(|&i| channel_info[i]).collect();
        Ok(DecoderState {
            channel_info,
            channel_parity,
            repeated,
            apriori: vec![SymbolReliability::uniform(); l.ht],
            extrinsic: vec![SymbolReliability::uniform(); l.ht],
            iteration: 0,
        })
    }
}

/// Per-iteration decoder statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationStats {
    pub chase_failures: usize,
    pub candidates: usize,
    /// Symbol decisions after this iteration.
    pub decision: Vec<Gf16>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IbtcDecodeOutput {
    pub info: Vec<Gf16>,
    pub iterations: Vec<IterationStats>,
}

impl IbtcDecodeOutput {
    pub fn chase_failures(&self) -> usize {
        self.iterations.iter().map(|s| s.chase_failures).sum()
    }

    pub fn candidates(&self) -> usize {
        self.iterations.iter().map(|s| s.candidates).sum()
    }
}

/// Repetition-node update: each copy's a priori is the log-domain sum of the
/// other copies' extrinsics.
pub fn aggregate_extrinsics<T: Real>(
    extrinsic: &[SymbolReliability<T>],
    map: &RepetitionMap,
    apriori: &mut [SymbolReliability<T>],
) {
    for copies in &map.copies {
        let mut total = [T::zero(); Q];
        for &c in copies {
            SymbolReliability::accumulate(&mut total, &extrinsic[c]);
        }
        for &c in copies {
            let mut own = total;
            for (o, &e) in own.iter_mut().zip(extrinsic[c].as_array()) {
                *o -= e;
            }
            apriori[c] = SymbolReliability::from_loglik(own);
        }
    }
}

/// Decision for every original symbol from channel and all extrinsics.
fn symbol_decisions<T: Real>(state: &DecoderState<T>, map: &RepetitionMap) -> Vec<Gf16> {
    map.copies
        .iter()
        .zip(&state.channel_info)
        .map(|(copies, ch)| {
            let mut total = *ch.as_array();
            for &c in copies {
                SymbolReliability::accumulate(&mut total, &state.extrinsic[c]);
            }
            SymbolReliability::from_loglik(total).best()
        })
        .collect()
}

/// Iterative decoding; `iters >= 1`. With `early_stop`, stops once every block
/// decodes and agrees with the symbol decisions.
pub fn decode_frame<T: Real>(
    state: &mut DecoderState<T>,
    codec: &IbtcCodec<'_>,
    interleaver: &Interleaver,
    cfg: &ChaseConfig,
    iters: usize,
    early_stop: bool,
) -> IbtcDecodeOutput {
    let code = codec.code;
    let layout = &codec.layout;
    let (n, k) = (layout.n, layout.k);
    let r = n - k;
    let mut stats = Vec::with_capacity(iters);
    let mut word = SoftWord::uniform(n);
    let mut block_decisions = vec![Gf16::ZERO; layout.ht];

    for _ in 0..iters.max(1) {
        let it = state.iteration;
        let mut failures = 0;
        let mut candidates = 0;
        for b in 0..layout.codewords {
            for (i, &pos) in code.info_positions.iter().enumerate() {
                let src = interleaver.perm[b * k + i];
                word.symbols[pos] = state.repeated[src].combine(&state.apriori[src]);
            }
            for (i, &pos) in code.parity_positions.iter().enumerate() {
                word.symbols[pos] = state.channel_parity[b * r + i];
            }
            let out = chase_decode(code, &word, cfg, it);
            failures += out.failed as usize;
            candidates += out.candidates;
            for (i, &pos) in code.info_positions.iter().enumerate() {
                let src = interleaver.perm[b * k + i];
                state.extrinsic[src] = out.extrinsic.symbols[pos];
                block_decisions[src] = out.decision[pos];
            }
        }
        aggregate_extrinsics(&state.extrinsic, &codec.map, &mut state.apriori);
        state.iteration += 1;
        let decision = symbol_decisions(state, &codec.map);
        let settled = failures == 0
            && codec
                .map
                .source
                .iter()
                .zip(&block_decisions)
                .all(|(&s, &d)| decision[s] == d);
        stats.push(IterationStats {
            chase_failures: failures,
            candidates,
            decision,
        });
        if early_stop && settled {
            break;
        }
    }
    let info = stats.last().map(|s| s.decision.clone()).unwrap_or_default();
    IbtcDecodeOutput {
        info,
        iterations: stats,
    }
}
