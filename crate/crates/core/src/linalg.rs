//! Dense linear algebra over GF(16).

use crate::galois::Gf16;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Gf16>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Gf16::ZERO; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<Gf16>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Matrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            m.row_mut(i).copy_from_slice(r);
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Gf16 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Gf16) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[Gf16] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [Gf16] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.data.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    /// Reduces in place to reduced row-echelon form and returns the pivot columns.
    ///
    /// Columns are scanned left to right, so pivots are the leftmost
    /// independent columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let s = self.get(r, c).inv().expect("pivot is nonzero");
            for v in self.row_mut(r) {
                *v *= s;
            }
            for i in 0..self.rows {
                let f = self.get(i, c);
                if i != r && !f.is_zero() {
                    for j in 0..self.cols {
                        let d = f * self.get(r, j);
                        self.data[i * self.cols + j] += d;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// A basis of the right null space `{x : A x = 0}`.
    pub fn null_space(&self) -> Vec<Vec<Gf16>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![Gf16::ZERO; self.cols];
                x[f] = Gf16::ONE;
                for (r, &pc) in pivots.iter().enumerate() {
                    // Characteristic 2: -v == v.
                    x[pc] = m.get(r, f);
                }
                x
            })
            .collect()
    }

    pub fn mul_vec(&self, x: &[Gf16]) -> Vec<Gf16> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .fold(Gf16::ZERO, |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }
}

/// Solves `A x = b` for a unique `x`; `None` if inconsistent or underdetermined.
///
/// `a` is given column-wise: `columns[j]` is column `j`, all of length `b.len()`.
/// Works on a small stack-free scratch buffer sized by the caller's data.
pub fn solve_columns(columns: &[&[Gf16]], b: &[Gf16], scratch: &mut Vec<Gf16>) -> Option<Vec<Gf16>> {
    let rows = b.len();
    let n = columns.len();
    let w = n + 1;
    scratch.clear();
    scratch.resize(rows * w, Gf16::ZERO);
    for (j, col) in columns.iter().enumerate() {
        for i in 0..rows {
            scratch[i * w + j] = col[i];
        }
    }
    for i in 0..rows {
        scratch[i * w + n] = b[i];
    }
    let mut r = 0;
    for c in 0..n {
        let p = (r..rows).find(|&i| !scratch[i * w + c].is_zero())?;
        if p != r {
            for j in 0..w {
                scratch.swap(p * w + j, r * w + j);
            }
        }
        let s = scratch[r * w + c].inv().expect("pivot is nonzero");
        for j in c..w {
            scratch[r * w + j] *= s;
        }
        for i in 0..rows {
            let f = scratch[i * w + c];
            if i != r && !f.is_zero() {
                for j in c..w {
                    let d = f * scratch[r * w + j];
                    scratch[i * w + j] += d;
                }
            }
        }
        r += 1;
    }
    if (r..rows).any(|i| !scratch[i * w + n].is_zero()) {
        return None;
    }
    Some((0..n).map(|i| scratch[i * w + n]).collect())
}
