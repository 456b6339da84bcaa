//! Basic syndrome decoding, guaranteed up to `t = floor((d* - 1 - g) / 2)` errors.
//!
//! With `t` the radius, the locator space is `L((t+g) P_inf)` and the test
//! space `L((t+2g-1) P_inf)`. Every product of the two lies in the dual
//! code's function space, so the syndrome matrix `S[i][j] = <r, phi_i psi_j>`
//! depends only on the error. A nonzero `f` with `f^T S = 0` vanishes on the
//! error positions; the error values then follow from the parity checks
//! restricted to the zeros of `f`.
//!
//! The locator often still works for a few more than `t` errors. Such a
//! correction is accepted when it verifies and has weight at most
//! `floor((d* - 1) / 2)`, since it is then the unique nearest codeword.

use std::fmt;

use super::{AgCode, Codeword, LENGTH};
use crate::galois::Gf16;

/// Largest unique-decoding radius among the supported codes.
pub const MAX_WEIGHT: usize = 7;

const MAX_ZEROS: usize = 16;
const MAX_DIM_A: usize = 8;
const MAX_DIM_Y: usize = 12;
const MAX_CHECKS: usize = 24;

/// Why a received word could not be decoded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeFailure {
    /// The syndrome matrix has full rank: more errors than the locator space can cover.
    NoLocator,
    /// The error values are inconsistent with the syndrome.
    Unsolvable,
    /// A consistent correction exists but exceeds the unique-decoding radius.
    BeyondRadius,
}

impl fmt::Display for DecodeFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DecodeFailure::NoLocator => "no error locator",
            DecodeFailure::Unsolvable => "error values unsolvable",
            DecodeFailure::BeyondRadius => "correction exceeds decoding radius",
        })
    }
}

impl std::error::Error for DecodeFailure {}

/// Sparse error vector with at most [`MAX_WEIGHT`] entries.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ErrorPattern {
    len: u8,
    pos: [u8; MAX_WEIGHT],
    val: [Gf16; MAX_WEIGHT],
}

impl ErrorPattern {
    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, Gf16)> + '_ {
        (0..self.len()).map(|i| (self.pos[i] as usize, self.val[i]))
    }

    fn push(&mut self, pos: usize, val: Gf16) {
        self.pos[self.len()] = pos as u8;
        self.val[self.len()] = val;
        self.len += 1;
    }
}

impl AgCode {
    /// Bounded-distance hard-decision decoding.
    ///
    /// Always succeeds within [`AgCode::radius`] of a codeword; may also
    /// succeed up to [`AgCode::unique_radius`]. A returned word always
    /// satisfies every parity check and is the unique codeword that close.
    pub fn hard_decode(&self, received: &[Gf16]) -> Result<Codeword, DecodeFailure> {
        assert_eq!(received.len(), self.n, "received word length");
        let mut syn = [Gf16::ZERO; MAX_CHECKS];
        let syn = &mut syn[..self.redundancy()];
        self.syndrome(received, syn);
        let errors = self.locate_errors(syn)?;
        let mut word = received.to_vec();
        for (p, v) in errors.iter() {
            word[p] += v;
        }
        Ok(Codeword(word))
    }

    /// Finds an error pattern of weight `<= unique_radius` with the given syndrome.
    pub fn locate_errors(&self, syn: &[Gf16]) -> Result<ErrorPattern, DecodeFailure> {
        debug_assert_eq!(syn.len(), self.redundancy());
        let mut out = ErrorPattern::default();
        if syn.iter().all(|s| s.is_zero()) {
            return Ok(out);
        }
        let lt = &self.locator;
        let (da, dy) = (lt.dim_a, lt.dim_y);

        // Transposed syndrome matrix: rows indexed by the test space, columns by
        // the locator space, so the locator is its right kernel.
        let mut st = [Gf16::ZERO; MAX_DIM_A * MAX_DIM_Y];
        for i in 0..da {
            for j in 0..dy {
                let [p, q] = lt.products[i * dy + j];
                let mut v = syn[p as usize];
                if q != u8::MAX {
                    v += syn[q as usize];
                }
                st[j * da + i] = v;
            }
        }
        let f = right_kernel_vector(&mut st[..dy * da], dy, da).ok_or(DecodeFailure::NoLocator)?;

        let mut zeros = [0u8; MAX_ZEROS];
        let mut nz = 0;
        for pos in 0..LENGTH {
            let ev = &lt.a_eval[pos * da..(pos + 1) * da];
            let v = ev.iter().zip(&f[..da]).fold(Gf16::ZERO, |acc, (&e, &c)| acc + e * c);
            if v.is_zero() {
                if nz == MAX_ZEROS {
                    return Err(DecodeFailure::Unsolvable);
                }
                zeros[nz] = pos as u8;
                nz += 1;
            }
        }
        if nz == 0 {
            return Err(DecodeFailure::Unsolvable);
        }

        // Solve H_Z e = s by elimination on the augmented system.
        let rows = syn.len();
        let w = nz + 1;
        let mut aug = [Gf16::ZERO; MAX_CHECKS * (MAX_ZEROS + 1)];
        for (c, &z) in zeros[..nz].iter().enumerate() {
            for (r, &h) in self.check_column(z as usize).iter().enumerate() {
                aug[r * w + c] = h;
            }
        }
        for r in 0..rows {
            aug[r * w + nz] = syn[r];
        }
        let mut rank = 0;
        for c in 0..nz {
            let Some(p) = (rank..rows).find(|&r| !aug[r * w + c].is_zero()) else {
                // Columns of H on fewer than d positions are independent.
                return Err(DecodeFailure::Unsolvable);
            };
            if p != rank {
                for j in 0..w {
                    aug.swap(p * w + j, rank * w + j);
                }
            }
            let s = aug[rank * w + c].inv().expect("nonzero pivot");
            for j in c..w {
                aug[rank * w + j] *= s;
            }
            for r in 0..rows {
                let k = aug[r * w + c];
                if r != rank && !k.is_zero() {
                    for j in c..w {
                        let d = k * aug[rank * w + j];
                        aug[r * w + j] += d;
                    }
                }
            }
            rank += 1;
        }
        if (rank..rows).any(|r| !aug[r * w + nz].is_zero()) {
            return Err(DecodeFailure::Unsolvable);
        }
        for (c, &z) in zeros[..nz].iter().enumerate() {
            let v = aug[c * w + nz];
            if !v.is_zero() {
                if out.len() == self.unique_radius() {
                    return Err(DecodeFailure::BeyondRadius);
                }
                out.push(z as usize, v);
            }
        }
        Ok(out)
    }
}

/// Some nonzero `x` with `M x = 0` for the `rows x cols` matrix `m`, if one exists.
fn right_kernel_vector(m: &mut [Gf16], rows: usize, cols: usize) -> Option<[Gf16; MAX_DIM_A]> {
    let mut pivot_col = [usize::MAX; MAX_DIM_A];
    let mut is_pivot = [false; MAX_DIM_A];
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i * cols + c].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                m.swap(p * cols + j, r * cols + j);
            }
        }
        let s = m[r * cols + c].inv().expect("nonzero pivot");
        for j in c..cols {
            m[r * cols + j] *= s;
        }
        for i in 0..rows {
            let k = m[i * cols + c];
            if i != r && !k.is_zero() {
                for j in c..cols {
                    let d = k * m[r * cols + j];
                    m[i * cols + j] += d;
                }
            }
        }
        pivot_col[r] = c;
        is_pivot[c] = true;
        r += 1;
    }
    let free = (0..cols).find(|&c| !is_pivot[c])?;
    let mut x = [Gf16::ZERO; MAX_DIM_A];
    x[free] = Gf16::ONE;
    for (row, &pc) in pivot_col[..r].iter().enumerate() {
        x[pc] = m[row * cols + free];
    }
    Some(x)
}
