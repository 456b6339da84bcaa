//! Table-driven arithmetic in GF(2^4).
//!
//! Elements use the polynomial basis over the primitive polynomial
//! `x^4 + x + 1`: bit `i` of the representation is the coefficient of
//! `alpha^i`. All tables are computed at compile time, so every
//! [`FieldContext`] is the same immutable value.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Sub};

use crate::error::{Error, Result};

/// Primitive polynomial `x^4 + x + 1` as a bitmask.
pub const PRIMITIVE_POLY: u8 = 0b1_0011;

/// Number of field elements.
pub const ORDER: usize = 16;

/// Order of the multiplicative group.
pub const GROUP_ORDER: usize = 15;

/// An element of GF(16).
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Gf16(u8);

/// Exp/log tables for GF(16) under [`PRIMITIVE_POLY`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldContext {
    pub primitive_poly: u8,
    pub exp_table: [Gf16; GROUP_ORDER],
    pub log_table: [u8; ORDER],
}

const fn make_exp() -> [u8; GROUP_ORDER] {
    let mut exp = [0u8; GROUP_ORDER];
    let mut v: u8 = 1;
    let mut i = 0;
    while i < GROUP_ORDER {
        exp[i] = v;
        v <<= 1;
        if v & 0x10 != 0 {
            v ^= PRIMITIVE_POLY;
        }
        i += 1;
    }
    exp
}

const EXP: [u8; GROUP_ORDER] = make_exp();

const fn make_log() -> [u8; ORDER] {
    // log[0] is unused and left at 0.
    let mut log = [0u8; ORDER];
    let mut i = 0;
    while i < GROUP_ORDER {
        log[EXP[i] as usize] = i as u8;
        i += 1;
    }
    log
}

const LOG: [u8; ORDER] = make_log();

const fn make_mul() -> [[u8; ORDER]; ORDER] {
    let mut t = [[0u8; ORDER]; ORDER];
    let mut a = 1;
    while a < ORDER {
        let mut b = 1;
        while b < ORDER {
            t[a][b] = EXP[(LOG[a] as usize + LOG[b] as usize) % GROUP_ORDER];
            b += 1;
        }
        a += 1;
    }
    t
}

const MUL: [[u8; ORDER]; ORDER] = make_mul();

const fn make_inv() -> [u8; ORDER] {
    let mut t = [0u8; ORDER];
    let mut a = 1;
    while a < ORDER {
        t[a] = EXP[(GROUP_ORDER - LOG[a] as usize) % GROUP_ORDER];
        a += 1;
    }
    t
}

const INV: [u8; ORDER] = make_inv();

/// Returns the arithmetic tables of GF(16).
pub fn build_field() -> FieldContext {
    let mut exp_table = [Gf16::ZERO; GROUP_ORDER];
    for (dst, &v) in exp_table.iter_mut().zip(EXP.iter()) {
        *dst = Gf16(v);
    }
    FieldContext {
        primitive_poly: PRIMITIVE_POLY,
        exp_table,
        log_table: LOG,
    }
}

impl Gf16 {
    pub const ZERO: Gf16 = Gf16(0);
    pub const ONE: Gf16 = Gf16(1);
    /// The primitive element `alpha`.
    pub const ALPHA: Gf16 = Gf16(2);

    /// Builds an element from the low four bits of `v`.
    ///
    /// Panics if `v > 15`; use [`Gf16::try_new`] for unchecked input.
    #[inline]
    pub const fn new(v: u8) -> Self {
        assert!(v < 16, "GF(16) element out of range");
        Gf16(v)
    }

    pub fn try_new(v: u8) -> Result<Self> {
        if v < 16 {
            Ok(Gf16(v))
        } else {
            Err(Error::FieldRange(v))
        }
    }

    #[inline]
    pub const fn value(self) -> u8 {
        self.0
    }

    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Iterates over all 16 elements in increasing representation order.
    pub fn all() -> impl Iterator<Item = Gf16> + Clone {
        (0..16u8).map(Gf16)
    }

    /// Iterates over the 15 nonzero elements.
    pub fn nonzero() -> impl Iterator<Item = Gf16> + Clone {
        (1..16u8).map(Gf16)
    }

    /// `alpha^e`, exponent taken mod 15.
    #[inline]
    pub fn exp(e: i64) -> Gf16 {
        Gf16(EXP[e.rem_euclid(GROUP_ORDER as i64) as usize])
    }

    /// Discrete logarithm base `alpha`; `None` for zero.
    #[inline]
    pub fn log(self) -> Option<u8> {
        (!self.is_zero()).then(|| LOG[self.index()])
    }

    #[inline]
    pub fn inv(self) -> Result<Gf16> {
        if self.is_zero() {
            Err(Error::ZeroInverse)
        } else {
            Ok(Gf16(INV[self.index()]))
        }
    }

    pub fn pow(self, e: i64) -> Result<Gf16> {
        if self.is_zero() {
            return match e {
                0 => Ok(Gf16::ONE),
                e if e > 0 => Ok(Gf16::ZERO),
                _ => Err(Error::ZeroInverse),
            };
        }
        let l = LOG[self.index()] as i64;
        Ok(Gf16::exp(l * e.rem_euclid(GROUP_ORDER as i64)))
    }

    /// Non-failing power for nonnegative exponents.
    #[inline]
    pub fn powu(self, e: u32) -> Gf16 {
        if e == 0 {
            Gf16::ONE
        } else if self.is_zero() {
            Gf16::ZERO
        } else {
            Gf16::exp(LOG[self.index()] as i64 * e as i64)
        }
    }
}

/// Characteristic-2 addition.
#[inline]
pub fn add(a: Gf16, b: Gf16) -> Gf16 {
    Gf16(a.0 ^ b.0)
}

#[inline]
pub fn mul(a: Gf16, b: Gf16) -> Gf16 {
    Gf16(MUL[a.index()][b.index()])
}

#[inline]
pub fn inv(a: Gf16) -> Result<Gf16> {
    a.inv()
}

#[inline]
pub fn pow(a: Gf16, e: i64) -> Result<Gf16> {
    a.pow(e)
}

impl Add for Gf16 {
    type Output = Gf16;
    #[inline]
    fn add(self, rhs: Gf16) -> Gf16 {
        add(self, rhs)
    }
}

impl Sub for Gf16 {
    type Output = Gf16;
    #[inline]
    fn sub(self, rhs: Gf16) -> Gf16 {
        add(self, rhs)
    }
}

impl AddAssign for Gf16 {
    #[inline]
    fn add_assign(&mut self, rhs: Gf16) {
        self.0 ^= rhs.0;
    }
}

impl Mul for Gf16 {
    type Output = Gf16;
    #[inline]
    fn mul(self, rhs: Gf16) -> Gf16 {
        mul(self, rhs)
    }
}

impl MulAssign for Gf16 {
    #[inline]
    fn mul_assign(&mut self, rhs: Gf16) {
        *self = mul(*self, rhs);
    }
}

impl fmt::Debug for Gf16 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf16({})", self.0)
    }
}

impl fmt::Display for Gf16 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x}", self.0)
    }
}

impl TryFrom<u8> for Gf16 {
    type Error = Error;
    fn try_from(v: u8) -> Result<Self> {
        Gf16::try_new(v)
    }
}

impl From<Gf16> for u8 {
    fn from(v: Gf16) -> u8 {
        v.0
    }
}
