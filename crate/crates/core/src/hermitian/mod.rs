//! One-point Hermitian codes over GF(16).
//!
//! The curve is `y^4 + y = x^5`, which has 64 affine rational points and
//! genus 6. A code of pole bound `m` evaluates the monomials `x^a y^b`
//! (`b <= 3`, `4a + 5b <= m`) at every affine point. Its dual is the same
//! construction with bound `n + 2g - 2 - m`, which is what the syndrome
//! decoder in [`decode`] relies on.

mod decode;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galois::Gf16;
use crate::linalg::Matrix;

pub use decode::{DecodeFailure, ErrorPattern, MAX_WEIGHT};

/// Genus of `y^4 + y = x^5`.
pub const GENUS: usize = 6;

/// Number of affine rational points, and the code length.
pub const LENGTH: usize = 64;

/// Affine point `(x, y)` on the curve.
pub type Point = (Gf16, Gf16);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermitianCurve {
    pub points: Vec<Point>,
}

impl HermitianCurve {
    pub const GENUS: usize = GENUS;

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, (x, y): Point) -> bool {
        on_curve(x, y)
    }
}

#[inline]
fn on_curve(x: Gf16, y: Gf16) -> bool {
    y.powu(4) + y == x.powu(5)
}

/// All affine points, ordered lexicographically by `(x, y)` representation.
pub fn enumerate_points() -> HermitianCurve {
    let points = Gf16::all()
        .flat_map(|x| Gf16::all().map(move |y| (x, y)))
        .filter(|&(x, y)| on_curve(x, y))
        .collect();
    HermitianCurve { points }
}

/// The function `x^a y^b`, with pole order `4a + 5b` at infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub a: u32,
    pub b: u32,
}

impl Monomial {
    pub fn new(a: u32, b: u32) -> Self {
        assert!(b <= 3, "y exponent must be reduced below 4");
        Monomial { a, b }
    }

    #[inline]
    pub fn pole_order(self) -> u32 {
        4 * self.a + 5 * self.b
    }

    #[inline]
    pub fn eval(self, (x, y): Point) -> Gf16 {
        x.powu(self.a) * y.powu(self.b)
    }
}

/// Monomials with pole order `<= m`, sorted by pole order (orders are distinct).
pub fn monomials_up_to(m: u32) -> Vec<Monomial> {
    let mut out: Vec<Monomial> = (0..=3u32)
        .flat_map(|b| (0..).map(move |a| Monomial { a, b }).take_while(move |mo| mo.pole_order() <= m))
        .collect();
    out.sort_by_key(|mo| mo.pole_order());
    out
}

/// Dimension of `L(m P_inf)` by counting monomials.
pub fn riemann_roch_dimension(m: u32) -> usize {
    monomials_up_to(m).len()
}

/// Which of the two supported codes to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CodeId {
    /// (64, 49), pole bound 54.
    Ag64_49,
    /// (64, 44), pole bound 49.
    Ag64_44,
}

impl CodeId {
    pub fn dimension(self) -> usize {
        match self {
            CodeId::Ag64_49 => 49,
            CodeId::Ag64_44 => 44,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CodeId::Ag64_49 => "ag64_49",
            CodeId::Ag64_44 => "ag64_44",
        }
    }

    pub fn build(self) -> AgCode {
        build_code(self.dimension()).expect("supported code parameters")
    }
}

impl fmt::Display for CodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for CodeId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ag64_49" => Ok(CodeId::Ag64_49),
            "ag64_44" => Ok(CodeId::Ag64_44),
            other => Err(Error::Config(format!("unknown code `{other}` (expected ag64_49 or ag64_44)"))),
        }
    }
}

/// A codeword of length 64.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Codeword(pub Vec<Gf16>);

impl Codeword {
    pub fn symbols(&self) -> &[Gf16] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.iter().filter(|v| !v.is_zero()).count()
    }
}

impl std::ops::Deref for Codeword {
    type Target = [Gf16];
    fn deref(&self) -> &[Gf16] {
        &self.0
    }
}

/// Error-locator tables for the basic syndrome decoder.
#[derive(Debug, Clone)]
pub(crate) struct LocatorTables {
    /// Locator space basis size, `dim L((t+g) P_inf)`.
    pub dim_a: usize,
    /// Test space basis size, `dim L((t+2g-1) P_inf)`.
    pub dim_y: usize,
    /// For each (i, j) in A x Y: indices of dual monomials summing to `phi_i * psi_j`.
    pub products: Vec<[u8; 2]>,
    /// Evaluations of the locator basis at each point: `LENGTH * dim_a`.
    pub a_eval: Vec<Gf16>,
}

/// One-point Hermitian code with a systematic generator.
#[derive(Debug, Clone)]
pub struct AgCode {
    pub n: usize,
    pub k: usize,
    pub m: u32,
    pub designed_distance: usize,
    pub basis: Vec<Monomial>,
    pub generator_systematic: Matrix,
    pub info_positions: Vec<usize>,
    pub parity_positions: Vec<usize>,
    /// Basis of the dual code, `L((n + 2g - 2 - m) P_inf)`.
    pub dual_basis: Vec<Monomial>,
    /// Parity-check matrix: dual monomials evaluated at the points.
    pub parity_check: Matrix,
    curve: HermitianCurve,
    /// `parity_check` stored column-major, one column per position.
    check_columns: Vec<Gf16>,
    /// Parity part of the systematic generator: `k * (n - k)`.
    parity_rows: Vec<Gf16>,
    pub(crate) locator: LocatorTables,
}

/// Builds AG(64, 49) or AG(64, 44).
pub fn build_code(k_target: usize) -> Result<AgCode> {
    if k_target != 49 && k_target != 44 {
        return Err(Error::UnsupportedCode(k_target));
    }
    let g = GENUS as u32;
    let n = LENGTH;
    let m = k_target as u32 + g - 1;
    let curve = enumerate_points();
    let basis = monomials_up_to(m);
    let raw = evaluation_matrix(&basis, &curve);

    let mut sys = raw.clone();
    let pivots = sys.rref();
    if pivots.len() != k_target || basis.len() != k_target {
        return Err(Error::RankDeficient {
            rank: pivots.len(),
            expected: k_target,
        });
    }
    let info_positions = pivots;
    let parity_positions: Vec<usize> = (0..n).filter(|c| !info_positions.contains(c)).collect();

    let dual_m = (n as u32 + 2 * g - 2) - m;
    let dual_basis = monomials_up_to(dual_m);
    let parity_check = evaluation_matrix(&dual_basis, &curve);
    debug_assert_eq!(dual_basis.len(), n - k_target);

    let r = parity_check.rows();
    let mut check_columns = Vec::with_capacity(n * r);
    for c in 0..n {
        check_columns.extend((0..r).map(|i| parity_check.get(i, c)));
    }
    let mut parity_rows = Vec::with_capacity(k_target * (n - k_target));
    for i in 0..k_target {
        parity_rows.extend(parity_positions.iter().map(|&c| sys.get(i, c)));
    }

    let designed_distance = n - m as usize;
    let t = (designed_distance - 1 - GENUS) / 2;
    let locator = locator_tables(t as u32, &dual_basis, &curve);

    Ok(AgCode {
        n,
        k: k_target,
        m,
        designed_distance,
        basis,
        generator_systematic: sys,
        info_positions,
        parity_positions,
        dual_basis,
        parity_check,
        curve,
        check_columns,
        parity_rows,
        locator,
    })
}

fn evaluation_matrix(basis: &[Monomial], curve: &HermitianCurve) -> Matrix {
    let mut m = Matrix::zeros(basis.len(), curve.len());
    for (i, mo) in basis.iter().enumerate() {
        for (j, &p) in curve.points.iter().enumerate() {
            m.set(i, j, mo.eval(p));
        }
    }
    m
}

fn locator_tables(t: u32, dual_basis: &[Monomial], curve: &HermitianCurve) -> LocatorTables {
    let g = GENUS as u32;
    let a_basis = monomials_up_to(t + g);
    let y_basis = monomials_up_to(t + 2 * g - 1);
    let index_of = |mo: Monomial| -> u8 {
        dual_basis
            .iter()
            .position(|&d| d == mo)
            .expect("locator product lies in the dual space") as u8
    };
    let mut products = Vec::with_capacity(a_basis.len() * y_basis.len());
    for fa in &a_basis {
        for fy in &y_basis {
            let (a, b) = (fa.a + fy.a, fa.b + fy.b);
            // y^4 = x^5 + y on the curve.
            let entry = if b >= 4 {
                [
                    index_of(Monomial::new(a + 5, b - 4)),
                    index_of(Monomial::new(a, b - 3)),
                ]
            } else {
                let i = index_of(Monomial::new(a, b));
                [i, u8::MAX]
            };
            products.push(entry);
        }
    }
    let mut a_eval = Vec::with_capacity(curve.len() * a_basis.len());
    for &p in &curve.points {
        a_eval.extend(a_basis.iter().map(|mo| mo.eval(p)));
    }
    LocatorTables {
        dim_a: a_basis.len(),
        dim_y: y_basis.len(),
        products,
        a_eval,
    }
}

impl AgCode {
    pub fn genus(&self) -> usize {
        GENUS
    }

    /// Guaranteed correction radius of [`AgCode::hard_decode`].
    pub fn radius(&self) -> usize {
        (self.designed_distance - 1 - GENUS) / 2
    }

    /// Half the designed distance: corrections this light are unambiguous.
    pub fn unique_radius(&self) -> usize {
        (self.designed_distance - 1) / 2
    }

    pub fn redundancy(&self) -> usize {
        self.n - self.k
    }

    pub fn curve(&self) -> &HermitianCurve {
        &self.curve
    }

    /// Column `pos` of the parity-check matrix.
    #[inline]
    pub fn check_column(&self, pos: usize) -> &[Gf16] {
        let r = self.redundancy();
        &self.check_columns[pos * r..(pos + 1) * r]
    }

    /// Parity symbols for `info`, in `parity_positions` order.
    pub fn parity_of(&self, info: &[Gf16], out: &mut [Gf16]) {
        let r = self.redundancy();
        debug_assert_eq!(info.len(), self.k);
        debug_assert_eq!(out.len(), r);
        out.fill(Gf16::ZERO);
        for (i, &u) in info.iter().enumerate() {
            if u.is_zero() {
                continue;
            }
            let row = &self.parity_rows[i * r..(i + 1) * r];
            for (o, &p) in out.iter_mut().zip(row) {
                *o += u * p;
            }
        }
    }

    /// Systematic encoding: `info` appears verbatim at `info_positions`.
    pub fn encode(&self, info: &[Gf16]) -> Result<Codeword> {
        if info.len() != self.k {
            return Err(Error::Length {
                expected: self.k,
                got: info.len(),
            });
        }
        let mut parity = vec![Gf16::ZERO; self.redundancy()];
        self.parity_of(info, &mut parity);
        let mut word = vec![Gf16::ZERO; self.n];
        for (&p, &u) in self.info_positions.iter().zip(info) {
            word[p] = u;
        }
        for (&p, &v) in self.parity_positions.iter().zip(&parity) {
            word[p] = v;
        }
        Ok(Codeword(word))
    }

    /// Reads the information symbols back out of a word.
    pub fn extract_info(&self, word: &[Gf16]) -> Vec<Gf16> {
        self.info_positions.iter().map(|&p| word[p]).collect()
    }

    /// Syndrome `H r` of a length-`n` word.
    pub fn syndrome(&self, word: &[Gf16], out: &mut [Gf16]) {
        debug_assert_eq!(word.len(), self.n);
        out.fill(Gf16::ZERO);
        for (pos, &v) in word.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            for (o, &h) in out.iter_mut().zip(self.check_column(pos)) {
                *o += v * h;
            }
        }
    }

    pub fn is_codeword(&self, word: &[Gf16]) -> bool {
        if word.len() != self.n {
            return false;
        }
        let mut s = vec![Gf16::ZERO; self.redundancy()];
        self.syndrome(word, &mut s);
        s.iter().all(|v| v.is_zero())
    }
}
