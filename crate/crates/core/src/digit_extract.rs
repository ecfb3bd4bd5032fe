//! Base-`b` digits of a P-formula's value at an arbitrary position.
//!
//! `frac(b^d P)` splits at `k = d`. Head terms `a_j b^(d-k) / (mk+j)` only
//! matter mod 1, so `b^(d-k)` is reduced mod `mk+j` by modular
//! exponentiation; each residue fraction is then taken to a fixed-point
//! accumulator of `c + g` base-`b` digits (plus a few binary guard bits) and
//! summed mod 1. The tail `k > d` decays geometrically and is summed until its
//! terms drop below one unit of the accumulator.
//!
//! Every inexact division contributes at most one unit of error. When the
//! accumulated estimate lies closer to a digit boundary than the hazard margin
//! the digits are not certified and [`Error::BoundaryHazard`] is returned.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::bigfixed::format_digits;
use crate::bigfixed::render::to_digits;
use crate::pnotation::PFormula;
use crate::transforms::rewrite_power;
use crate::{Error, Result};

pub const DEFAULT_GUARD: u32 = 12;
pub const MAX_GUARD: u32 = 48;

/// Head sums with more terms than this are split across workers.
const PAR_CHUNK: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DigitRun {
    #[serde(with = "crate::pnotation::json::int")]
    pub base: BigInt,
    pub start: u64,
    pub digits: String,
    pub guard_digits: u32,
    /// The original formula when its base was negative and extraction ran on
    /// the `r = 2` rewrite (whose value is `b` times the original).
    pub normalized_from: Option<PFormula>,
}

/// `base^exp mod modulus` by left-to-right binary exponentiation.
pub fn mod_pow(base: u64, exp: u64, modulus: u64) -> u64 {
    assert!(modulus >= 1, "modulus must be positive");
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let b = base as u128 % m;
    let mut r: u128 = 1;
    for i in (0..64 - exp.leading_zeros()).rev() {
        r = r * r % m;
        if exp >> i & 1 == 1 {
            r = r * b % m;
        }
    }
    r as u64
}

/// `c` digits from position `d` with the default guard.
pub fn extract_digits(f: &PFormula, d: u64, c: usize) -> Result<DigitRun> {
    extract_digits_guarded(f, d, c, DEFAULT_GUARD)
}

/// Retries with doubled guard digits on a boundary hazard, up to
/// [`MAX_GUARD`].
pub fn extract_digits_retrying(f: &PFormula, d: u64, c: usize, guard: u32) -> Result<DigitRun> {
    let mut g = guard;
    loop {
        match extract_digits_guarded(f, d, c, g) {
            Err(Error::BoundaryHazard { .. }) if g < MAX_GUARD => g = (g * 2).min(MAX_GUARD),
            r => return r,
        }
    }
}

pub fn extract_digits_guarded(f: &PFormula, d: u64, c: usize, guard: u32) -> Result<DigitRun> {
    f.validate()?;
    if f.s != 1 {
        return Err(Error::UnsupportedExponent(f.s));
    }
    if c == 0 {
        return Err(Error::Domain("digit count must be positive".into()));
    }
    let (work, normalized_from) = if f.b.sign() == Sign::Minus {
        (rewrite_power(f, 2)?.formula, Some(f.clone()))
    } else {
        (f.clone(), None)
    };
    let base = work.b.magnitude().clone();
    let values = frac_digits_at(&work, &base, d, c, guard)?;
    Ok(DigitRun {
        base: work.b.clone(),
        start: d,
        digits: format_digits(&values, &base),
        guard_digits: guard,
        normalized_from,
    })
}

/// Fixed-point frame: one unit is `1 / modulus` with
/// `modulus = base^(c+g) * 2^extra`.
struct Frame {
    modulus: BigUint,
    /// One digit at position `c`, i.e. `base^g * 2^extra` units.
    digit_unit: BigUint,
    margin: BigUint,
}

fn frac_digits_at(f: &PFormula, base: &BigUint, d: u64, c: usize, g: u32) -> Result<Vec<BigUint>> {
    let m = f.m as u64;
    let head_terms = d
        .checked_add(1)
        .and_then(|k| k.checked_mul(m))
        .filter(|&t| t <= u64::MAX / 2)
        .ok_or_else(|| Error::Domain("digit position too large".into()))?;
    // room for one unit of error per term without touching the base digits
    let extra = 64 - (head_terms + 64).leading_zeros() + 4;
    let digit_unit = base.pow(g) << extra as usize;
    let frame = Frame {
        modulus: base.pow(c as u32) * &digit_unit,
        margin: base.pow(g - g / 2) << extra as usize,
        digit_unit,
    };

    let (head, mut err) = head_sum(f, base, d, &frame.modulus);
    let (tail, tail_err) = tail_sum(f, base, d, &frame.modulus);
    err += tail_err;

    let m_int = BigInt::from(frame.modulus.clone());
    let y = (BigInt::from(head) + tail).mod_floor(&m_int);
    let y = y.to_biguint().expect("reduced mod a positive modulus");

    if err > 0 {
        let r = &y % &frame.digit_unit;
        let dist = r.clone().min(&frame.digit_unit - &r);
        let need = frame.margin.clone().max(BigUint::from(err));
        if dist < need {
            return Err(Error::BoundaryHazard { guard: g });
        }
    }
    Ok(to_digits(y / &frame.digit_unit, base, c))
}

/// `sum_{k<=d} sum_j frac(a_j b^(d-k) / (mk+j))` in units of `1/modulus`,
/// reduced mod `modulus`, and the count of inexact (floored) divisions.
fn head_sum(f: &PFormula, base: &BigUint, d: u64, modulus: &BigUint) -> (BigUint, u64) {
    let chunks: Vec<(u64, u64)> = (0..=d / PAR_CHUNK)
        .map(|i| (i * PAR_CHUNK, ((i + 1) * PAR_CHUNK).min(d + 1)))
        .filter(|(lo, hi)| lo < hi)
        .collect();
    let partial = |&(lo, hi): &(u64, u64)| head_range(f, base, d, lo, hi, modulus);
    let parts: Vec<(BigUint, u64)> = if chunks.len() > 1 {
        chunks.par_iter().map(partial).collect()
    } else {
        chunks.iter().map(partial).collect()
    };
    parts.into_iter().fold((BigUint::zero(), 0), |(acc, e), (s, es)| ((acc + s) % modulus, e + es))
}

fn head_range(f: &PFormula, base: &BigUint, d: u64, lo: u64, hi: u64, modulus: &BigUint) -> (BigUint, u64) {
    let m = f.m as u64;
    let mut acc = BigUint::zero();
    let mut inexact = 0;
    for (j, a) in f.a.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for k in lo..hi {
            let q = m * k + j as u64 + 1;
            let bq = (base % q).to_u64().expect("residue below u64 modulus");
            let aq = a.mod_floor(&BigInt::from(q)).to_u64().expect("residue below u64 modulus");
            let t = (aq as u128 * mod_pow(bq, d - k, q) as u128 % q as u128) as u64;
            if t == 0 {
                continue;
            }
            let (x, rem) = (modulus * t).div_rem(&BigUint::from(q));
            if !rem.is_zero() {
                inexact += 1;
            }
            acc += x;
            if &acc >= modulus {
                acc -= modulus;
            }
        }
    }
    (acc, inexact)
}

/// `sum_{k>d} a_j b^(d-k) / (mk+j)` in units of `1/modulus` (signed, each
/// term truncated toward zero), and an error bound in units that also covers
/// the neglected remainder.
fn tail_sum(f: &PFormula, base: &BigUint, d: u64, modulus: &BigUint) -> (BigInt, u64) {
    let l1 = f.coefficient_l1();
    if l1.is_zero() {
        return (BigInt::zero(), 0);
    }
    let m = f.m as u64;
    let scaled = BigInt::from(modulus.clone());
    let mut sum = BigInt::zero();
    let mut err = 0u64;
    let mut pow = base.clone();
    let mut k = d + 1;
    // every term at level k is below l1 / (b^(k-d) (mk+1)); once that drops
    // below one unit, the rest of the series is below b/(b-1) <= 2 units
    while &l1 * modulus >= &pow * BigUint::from(m * k + 1) {
        for (j, a) in f.a.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let den = BigInt::from(&pow * BigUint::from(m * k + j as u64 + 1));
            let (x, rem) = (a * &scaled).div_rem(&den);
            if !rem.is_zero() {
                err += 1;
            }
            sum += x;
        }
        pow *= base;
        k += 1;
    }
    (sum, err + 2)
}
