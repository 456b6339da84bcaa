//! Regular AG block turbo code: the square product of one AG code with itself.
//!
//! Rows are encoded first, then every column. Information occupies the
//! cells whose row and column are both information positions of the
//! component code. The row/column transpose plays the role of the block
//! interleaver.

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::galois::Gf16;
use crate::hermitian::AgCode;
use crate::scalar::Real;
use crate::siso::{chase_decode, ChaseConfig, SoftWord, SymbolReliability};

/// Fully encoded `n x n` block, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductBlock {
    pub n: usize,
    pub k: usize,
    pub grid: Vec<Gf16>,
}

impl ProductBlock {
    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Gf16 {
        self.grid[r * self.n + c]
    }

    pub fn row(&self, r: usize) -> &[Gf16] {
        &self.grid[r * self.n..(r + 1) * self.n]
    }

    pub fn column(&self, c: usize) -> Vec<Gf16> {
        (0..self.n).map(|r| self.get(r, c)).collect()
    }

    pub fn transpose(&self) -> ProductBlock {
        let n = self.n;
        let grid = (0..n * n).map(|i| self.grid[(i % n) * n + i / n]).collect();
        ProductBlock { n, k: self.k, grid }
    }

    /// Information region, row-major `k x k`.
    pub fn info(&self, code: &AgCode) -> Vec<Gf16> {
        code.info_positions
            .iter()
            .flat_map(|&r| code.info_positions.iter().map(move |&c| (r, c)))
            .map(|(r, c)| self.get(r, c))
            .collect()
    }

    /// Every row and every column satisfies the component parity checks.
    pub fn verify(&self, code: &AgCode) -> bool {
        (0..self.n).all(|i| code.is_codeword(self.row(i)) && code.is_codeword(&self.column(i)))
    }
}

/// `(k/n)^2`.
pub fn product_rate(code: &AgCode) -> Ratio<u64> {
    Ratio::new((code.k * code.k) as u64, (code.n * code.n) as u64)
}

/// Encodes a row-major `k x k` information block.
pub fn encode_product(code: &AgCode, info: &[Gf16]) -> Result<ProductBlock> {
    let (n, k) = (code.n, code.k);
    if info.len() != k * k {
        return Err(Error::Length {
            expected: k * k,
            got: info.len(),
        });
    }
    let mut grid = vec![Gf16::ZERO; n * n];
    for (i, row) in info.chunks_exact(k).enumerate() {
        let cw = code.encode(row)?;
        let r = code.info_positions[i];
        grid[r * n..(r + 1) * n].copy_from_slice(&cw);
    }
    let mut col = vec![Gf16::ZERO; k];
    for c in 0..n {
        for (dst, &r) in col.iter_mut().zip(&code.info_positions) {
            *dst = grid[r * n + c];
        }
        let cw = code.encode(&col)?;
        for (r, &v) in cw.iter().enumerate() {
            grid[r * n + c] = v;
        }
    }
    Ok(ProductBlock { n, k, grid })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HalfIterationStats {
    pub failures: usize,
    pub candidates: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BtcIterationStats {
    pub rows: HalfIterationStats,
    pub columns: HalfIterationStats,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BtcDecodeOutput {
    /// Row-major `k x k` information estimate.
    pub info: Vec<Gf16>,
    pub iterations: Vec<BtcIterationStats>,
}

impl BtcDecodeOutput {
    pub fn chase_failures(&self) -> usize {
        self.iterations.iter().map(|s| s.rows.failures + s.columns.failures).sum()
    }

    pub fn candidates(&self) -> usize {
        self.iterations.iter().map(|s| s.rows.candidates + s.columns.candidates).sum()
    }
}

/// Iterative row/column decoding of an `n x n` grid of channel reliabilities.
///
/// Each half-iteration feeds one dimension the channel plus the other
/// dimension's latest extrinsic. With `early_stop`, stops after an
/// iteration in which every row and column decoded and the decisions agree.
pub fn decode_product<T: Real>(
    soft: &[SymbolReliability<T>],
    code: &AgCode,
    cfg: &ChaseConfig,
    iters: usize,
    early_stop: bool,
) -> Result<BtcDecodeOutput> {
    let n = code.n;
    if soft.len() != n * n {
        return Err(Error::Length {
            expected: n * n,
            got: soft.len(),
        });
    }
    let mut w_row = vec![SymbolReliability::<T>::uniform(); n * n];
    let mut w_col = vec![SymbolReliability::<T>::uniform(); n * n];
    let mut row_dec = vec![Gf16::ZERO; n * n];
    let mut col_dec = vec![Gf16::ZERO; n * n];
    let mut word = SoftWord::uniform(n);
    let mut stats = Vec::with_capacity(iters);

    for it in 0..iters.max(1) {
        let mut rows = HalfIterationStats::default();
        for r in 0..n {
            for c in 0..n {
                word.symbols[c] = soft[r * n + c].combine(&w_col[r * n + c]);
            }
            let out = chase_decode(code, &word, cfg, it);
            rows.failures += out.failed as usize;
            rows.candidates += out.candidates;
            for c in 0..n {
                w_row[r * n + c] = out.extrinsic.symbols[c];
                row_dec[r * n + c] = out.decision[c];
            }
        }
        let mut columns = HalfIterationStats::default();
        for c in 0..n {
            for r in 0..n {
                word.symbols[r] = soft[r * n + c].combine(&w_row[r * n + c]);
            }
            let out = chase_decode(code, &word, cfg, it);
            columns.failures += out.failed as usize;
            columns.candidates += out.candidates;
            for r in 0..n {
                w_col[r * n + c] = out.extrinsic.symbols[r];
                col_dec[r * n + c] = out.decision[r];
            }
        }
        let settled = rows.failures == 0 && columns.failures == 0 && row_dec == col_dec;
        stats.push(BtcIterationStats { rows, columns });
        if early_stop && settled {
            break;
        }
    }

    let info = code
        .info_positions
        .iter()
        .flat_map(|&r| code.info_positions.iter().map(move |&c| r * n + c))
        .map(|i| {
            let mut acc = *soft[i].as_array();
            SymbolReliability::accumulate(&mut acc, &w_row[i]);
            SymbolReliability::accumulate(&mut acc, &w_col[i]);
            SymbolReliability::from_loglik(acc).best()
        })
        .collect();
    Ok(BtcDecodeOutput { info, iterations: stats })
}
