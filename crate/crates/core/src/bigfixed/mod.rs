//! Signed arbitrary-precision fixed-point numbers.
//!
//! A [`BigFixed`] is `mantissa * 2^-frac_bits` with an arbitrary-size integer
//! mantissa. Every rounding step truncates toward zero. Operands with different
//! `frac_bits` are aligned by exact shifting before they are combined, so the
//! only inexact step of `add`/`sub`/`mul`/`div` is the final truncation to the
//! requested number of fractional bits.

mod elementary;
pub(crate) mod render;

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::pnotation::Rational;
use crate::{Error, Result};

pub use elementary::{atan_ref, isqrt, ln_ref, pi_ref, sqrt_ref};
pub use render::format_digits;

/// Extra bits carried internally by the transcendental reference functions.
pub const GUARD_BITS: u32 = 64;

#[derive(Clone, Debug)]
pub struct BigFixed {
    mant: BigInt,
    frac_bits: u32,
}

/// `m >> k` rounded toward zero.
pub(crate) fn shr_trunc(m: &BigInt, k: u32) -> BigInt {
    if k == 0 {
        return m.clone();
    }
    let mag = m.magnitude() >> k as usize;
    BigInt::from_biguint(m.sign(), mag)
}

fn rescale(m: &BigInt, from: u32, to: u32) -> BigInt {
    match to.cmp(&from) {
        Ordering::Equal => m.clone(),
        Ordering::Greater => m << (to - from) as usize,
        Ordering::Less => shr_trunc(m, from - to),
    }
}

impl BigFixed {
    pub fn zero(frac_bits: u32) -> Self {
        BigFixed {
            mant: BigInt::zero(),
            frac_bits,
        }
    }

    /// Builds `mant * 2^-frac_bits` directly from a mantissa.
    pub fn from_mantissa(mant: BigInt, frac_bits: u32) -> Self {
        BigFixed { mant, frac_bits }
    }

    pub fn from_int(v: impl Into<BigInt>, frac_bits: u32) -> Self {
        BigFixed {
            mant: v.into() << frac_bits as usize,
            frac_bits,
        }
    }

    /// `num/den` truncated toward zero to `frac_bits` bits.
    pub fn from_ratio(num: &BigInt, den: &BigInt, frac_bits: u32) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivideByZero);
        }
        let scaled: BigInt = num << frac_bits as usize;
        Ok(BigFixed {
            mant: scaled / den,
            frac_bits,
        })
    }

    pub fn from_rational(q: &Rational, frac_bits: u32) -> Self {
        Self::from_ratio(q.numer(), q.denom(), frac_bits).expect("rational denominator is positive")
    }

    /// `2^k` exactly, at `max(-k, 0)` fractional bits.
    pub fn pow2(k: i64) -> Self {
        if k >= 0 {
            BigFixed::from_int(BigInt::one() << k as usize, 0)
        } else {
            BigFixed::from_mantissa(BigInt::one(), (-k) as u32)
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn frac_bits(&self) -> u32 {
        self.frac_bits
    }

    /// -1, 0 or +1.
    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn abs(&self) -> Self {
        BigFixed {
            mant: self.mant.abs(),
            frac_bits: self.frac_bits,
        }
    }

    /// Re-expresses the value with `frac_bits` fractional bits, truncating
    /// toward zero when bits are dropped.
    pub fn with_frac_bits(&self, frac_bits: u32) -> Self {
        BigFixed {
            mant: rescale(&self.mant, self.frac_bits, frac_bits),
            frac_bits,
        }
    }

    pub fn add(&self, other: &Self, frac_bits: u32) -> Self {
        let w = self.frac_bits.max(other.frac_bits);
        let sum = rescale(&self.mant, self.frac_bits, w) + rescale(&other.mant, other.frac_bits, w);
        BigFixed::from_mantissa(sum, w).with_frac_bits(frac_bits)
    }

    pub fn sub(&self, other: &Self, frac_bits: u32) -> Self {
        self.add(&-other, frac_bits)
    }

    pub fn mul(&self, other: &Self, frac_bits: u32) -> Self {
        let prod = &self.mant * &other.mant;
        BigFixed::from_mantissa(prod, self.frac_bits + other.frac_bits).with_frac_bits(frac_bits)
    }

    pub fn div(&self, other: &Self, frac_bits: u32) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivideByZero);
        }
        // (a 2^-fa) / (c 2^-fc) * 2^F = a 2^(F + fc) / (c 2^fa)
        let num: BigInt = &self.mant << (frac_bits + other.frac_bits) as usize;
        let den: BigInt = &other.mant << self.frac_bits as usize;
        Ok(BigFixed::from_mantissa(num / den, frac_bits))
    }

    /// Exact product with an integer.
    pub fn mul_int(&self, k: &BigInt) -> Self {
        BigFixed::from_mantissa(&self.mant * k, self.frac_bits)
    }

    /// Exact multiplication by `2^k` (k may be negative).
    pub fn shl(&self, k: i64) -> Self {
        if k >= 0 {
            BigFixed::from_mantissa(&self.mant << k as usize, self.frac_bits)
        } else {
            BigFixed::from_mantissa(self.mant.clone(), self.frac_bits + (-k) as u32)
        }
    }

    /// `q * self` truncated to `frac_bits`.
    pub fn mul_rational(&self, q: &Rational, frac_bits: u32) -> Self {
        let num = &self.mant * q.numer();
        let den: BigInt = q.denom() << self.frac_bits as usize;
        let scaled: BigInt = num << frac_bits as usize;
        BigFixed::from_mantissa(scaled / den, frac_bits)
    }

    /// Largest integer not above the value.
    pub fn floor(&self) -> BigInt {
        self.mant.div_floor(&(BigInt::one() << self.frac_bits as usize))
    }

    /// Mantissa of `x - floor(x)` at `frac_bits`, always in `[0, 2^frac_bits)`.
    pub fn frac_mantissa(&self) -> BigUint {
        let one = BigInt::one() << self.frac_bits as usize;
        self.mant
            .mod_floor(&one)
            .to_biguint()
            .expect("mod_floor of a positive modulus is nonnegative")
    }

    /// Approximate `log2 |x|`; `None` for zero.
    pub fn log2_abs(&self) -> Option<f64> {
        if self.mant.is_zero() {
            return None;
        }
        let mag = self.mant.magnitude();
        let bits = mag.bits();
        let top = if bits > 60 {
            (mag >> (bits - 60) as usize).to_f64().unwrap_or(0.0).log2() + (bits - 60) as f64
        } else {
            mag.to_f64().unwrap_or(0.0).log2()
        };
        Some(top - self.frac_bits as f64)
    }

    /// Lossy conversion, for diagnostics only.
    pub fn to_f64(&self) -> f64 {
        match self.log2_abs() {
            None => 0.0,
            Some(l) => self.signum() as f64 * l.exp2(),
        }
    }

    fn aligned_cmp(&self, other: &Self) -> Ordering {
        let w = self.frac_bits.max(other.frac_bits);
        rescale(&self.mant, self.frac_bits, w).cmp(&rescale(&other.mant, other.frac_bits, w))
    }
}

impl std::ops::Neg for &BigFixed {
    type Output = BigFixed;
    fn neg(self) -> BigFixed {
        BigFixed::from_mantissa(-&self.mant, self.frac_bits)
    }
}

impl std::ops::Neg for BigFixed {
    type Output = BigFixed;
    fn neg(self) -> BigFixed {
        BigFixed::from_mantissa(-self.mant, self.frac_bits)
    }
}

/// Equality and ordering compare values, not representations: `1.0` at 8
/// fractional bits equals `1.0` at 64.
impl PartialEq for BigFixed {
    fn eq(&self, other: &Self) -> bool {
        self.aligned_cmp(other) == Ordering::Equal
    }
}

impl Eq for BigFixed {}

impl PartialOrd for BigFixed {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BigFixed {
    fn cmp(&self, other: &Self) -> Ordering {
        self.aligned_cmp(other)
    }
}

impl fmt::Display for BigFixed {
    /// Decimal rendering with as many digits as the fractional bits justify.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f
            .precision()
            .unwrap_or(((self.frac_bits as f64) * std::f64::consts::LOG10_2).floor() as usize);
        f.write_str(&self.to_string_radix(10, digits))
    }
}
