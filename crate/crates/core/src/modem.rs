//! Gray-mapped BPSK/QPSK/16QAM/64QAM and coherent soft demapping.
//!
//! Labels are read most-significant bit first. Square constellations
//! spend the first half of the label on the in-phase axis and the second
//! half on quadrature. Each axis is a reflected-Gray PAM: level index `i`
//! (0 = most positive amplitude) carries label `i ^ (i >> 1)`, so BPSK maps
//! bit 0 to +1.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galois::Gf16;
use crate::scalar::{clamp_llr, Real};
use crate::siso::{SymbolReliability, Q};

/// Bits per GF(16) symbol on the wire.
pub const BITS_PER_FIELD_SYMBOL: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Modulation {
    Bpsk,
    Qpsk,
    Qam16,
    Qam64,
}

impl Modulation {
    pub const ALL: [Modulation; 4] = [Modulation::Bpsk, Modulation::Qpsk, Modulation::Qam16, Modulation::Qam64];

    pub fn bits_per_symbol(self) -> usize {
        match self {
            Modulation::Bpsk => 1,
            Modulation::Qpsk => 2,
            Modulation::Qam16 => 4,
            Modulation::Qam64 => 6,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Modulation::Bpsk => "bpsk",
            Modulation::Qpsk => "qpsk",
            Modulation::Qam16 => "16qam",
            Modulation::Qam64 => "64qam",
        }
    }
}

impl fmt::Display for Modulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Modulation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Modulation::ALL
            .into_iter()
            .find(|m| m.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::Config(format!("unknown modulation `{s}` (expected bpsk, qpsk, 16qam or 64qam)")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Demapper {
    /// Log-sum over all constellation points.
    #[default]
    Exact,
    /// Max over constellation points.
    MaxLog,
}

impl Demapper {
    pub fn name(self) -> &'static str {
        match self {
            Demapper::Exact => "exact",
            Demapper::MaxLog => "maxlog",
        }
    }
}

impl fmt::Display for Demapper {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Demapper {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Demapper::Exact),
            "maxlog" => Ok(Demapper::MaxLog),
            other => Err(Error::Config(format!("unknown demapper `{other}` (expected exact or maxlog)"))),
        }
    }
}

/// Soft bit: positive favors 0.
pub type BitLlr<T> = T;

/// Constellation indexed by label: `points[label]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation<T> {
    pub scheme: Modulation,
    pub bits_per_symbol: usize,
    pub points: Vec<Complex<T>>,
}

fn gray_pam(bits: usize) -> Vec<i32> {
    let levels = 1usize << bits;
    let mut amp = vec![0; levels];
    for i in 0..levels {
        amp[i ^ (i >> 1)] = (levels as i32 - 1) - 2 * i as i32;
    }
    amp
}

impl<T: Real> Constellation<T> {
    pub fn new(scheme: Modulation) -> Self {
        let bps = scheme.bits_per_symbol();
        let raw: Vec<(i32, i32)> = if scheme == Modulation::Bpsk {
            gray_pam(1).into_iter().map(|a| (a, 0)).collect()
        } else {
            let half = bps / 2;
            let pam = gray_pam(half);
            let mask = (1 << half) - 1;
            (0..1usize << bps).map(|label| (pam[label >> half], pam[label & mask])).collect()
        };
        let energy = raw.iter().map(|&(i, q)| (i * i + q * q) as f64).sum::<f64>() / raw.len() as f64;
        let scale = 1.0 / energy.sqrt();
        let points = raw
            .into_iter()
            .map(|(i, q)| Complex::new(T::lit(i as f64 * scale), T::lit(q as f64 * scale)))
            .collect();
        Constellation {
            scheme,
            bits_per_symbol: bps,
            points,
        }
    }

    /// Maps bits (0/1 values) to points, zero-padding the tail to a whole symbol.
    pub fn modulate(&self, bits: &[u8]) -> Vec<Complex<T>> {
        bits.chunks(self.bits_per_symbol)
            .map(|chunk| {
                let label = (0..self.bits_per_symbol)
                    .fold(0usize, |acc, i| (acc << 1) | chunk.get(i).map_or(0, |&b| (b & 1) as usize));
                self.points[label]
            })
            .collect()
    }

    /// Per-bit LLRs of one received sample, written to `out[..bits_per_symbol]`.
    pub fn demodulate_into(&self, y: Complex<T>, h: Complex<T>, n0: T, demapper: Demapper, out: &mut [T]) {
        debug_assert!(n0 > T::zero());
        let bps = self.bits_per_symbol;
        let mut metric = [T::zero(); 64];
        let mut top = T::neg_infinity();
        for (m, &x) in metric.iter_mut().zip(&self.points) {
            *m = -(y - h * x).norm_sqr() / n0;
            top = top.max(*m);
        }
        let metric = &metric[..self.points.len()];
        for (bit, slot) in out[..bps].iter_mut().enumerate() {
            let shift = bps - 1 - bit;
            let llr = match demapper {
                Demapper::MaxLog => {
                    let (mut m0, mut m1) = (T::neg_infinity(), T::neg_infinity());
                    for (label, &m) in metric.iter().enumerate() {
                        if label >> shift & 1 == 0 {
                            m0 = m0.max(m);
                        } else {
                            m1 = m1.max(m);
                        }
                    }
                    m0 - m1
                }
                Demapper::Exact => {
                    let (mut s0, mut s1) = (T::zero(), T::zero());
                    for (label, &m) in metric.iter().enumerate() {
                        let e = (m - top).exp();
                        if label >> shift & 1 == 0 {
                            s0 += e;
                        } else {
                            s1 += e;
                        }
                    }
                    s0.ln() - s1.ln()
                }
            };
            *slot = clamp_llr(llr);
        }
    }

    pub fn demodulate(&self, y: Complex<T>, h: Complex<T>, n0: T, demapper: Demapper) -> Vec<BitLlr<T>> {
        let mut out = vec![T::zero(); self.bits_per_symbol];
        self.demodulate_into(y, h, n0, demapper, &mut out);
        out
    }

    /// Mean of `|x|^2` over the constellation.
    pub fn average_energy(&self) -> T {
        self.points.iter().map(|p| p.norm_sqr()).sum::<T>() / T::lit(self.points.len() as f64)
    }
}

/// Symbol log-likelihoods from four bit LLRs (most significant first), assuming independent bits.
pub fn bits_to_symbol_reliability<T: Real>(llrs: &[T]) -> SymbolReliability<T> {
    assert_eq!(llrs.len(), BITS_PER_FIELD_SYMBOL);
    let mut raw = [T::zero(); Q];
    for (v, slot) in raw.iter_mut().enumerate() {
        for (i, &l) in llrs.iter().enumerate() {
            if v >> (BITS_PER_FIELD_SYMBOL - 1 - i) & 1 == 1 {
                *slot -= l;
            }
        }
    }
    SymbolReliability::from_loglik(raw)
}

/// Serializes field symbols to bits, most significant first.
pub fn symbols_to_bits(symbols: &[Gf16]) -> Vec<u8> {
    symbols
        .iter()
        .flat_map(|s| (0..BITS_PER_FIELD_SYMBOL).rev().map(move |i| s.value() >> i & 1))
        .collect()
}

/// Number of modulation symbols carrying `field_symbols` GF(16) symbols.
pub fn modulation_symbols_for(field_symbols: usize, m: Modulation) -> usize {
    (field_symbols * BITS_PER_FIELD_SYMBOL).div_ceil(m.bits_per_symbol())
}
