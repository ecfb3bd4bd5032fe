//! Evaluation of P-formulas and closed forms to a requested precision.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::bigfixed::{atan_ref, isqrt, ln_ref, BigFixed, GUARD_BITS};
use crate::pnotation::{ClosedForm, PFormula};
use crate::{Error, Result};

/// Extra bits demanded of the truncated tail beyond the target precision.
pub const TAIL_MARGIN_BITS: u32 = 8;

/// Below this many `(k, j)` terms the sum runs on the calling thread.
const PAR_THRESHOLD: usize = 512;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalReport {
    /// Within `2^-F` of the series value; carries `F + 8` fractional bits.
    pub value: BigFixed,
    pub terms_used: usize,
    /// Upper bound on the omitted tail `|sum_{k >= K}|`.
    pub tail_bound: BigFixed,
}

/// Smallest `K` with `(sum |a_j|) |b|^-K |b|/(|b|-1) < 2^-(F+8)`.
///
/// Every denominator `(m k + j)^s` is at least one, so this majorizes the
/// tail for any `s` and `m`.
pub fn tail_start(f: &PFormula, frac_bits: u32) -> Result<usize> {
    f.validate()?;
    let l1 = f.coefficient_l1();
    if l1.is_zero() {
        return Ok(0);
    }
    let b = f.b.magnitude();
    // l1 |b| 2^(F+8) < |b|^K (|b| - 1)
    let lhs: BigUint = (&l1 * b) << (frac_bits + TAIL_MARGIN_BITS) as usize;
    let bm1 = b - 1u32;
    let mut bk = BigUint::one();
    let mut k = 0usize;
    while &bk * &bm1 <= lhs {
        bk *= b;
        k += 1;
    }
    Ok(k)
}

fn tail_bound(f: &PFormula, terms: usize, frac_bits: u32) -> BigFixed {
    let l1 = BigInt::from(f.coefficient_l1());
    if l1.is_zero() {
        return BigFixed::zero(frac_bits);
    }
    let b = BigInt::from(f.b.magnitude().clone());
    let num = l1 * &b;
    let den = num_traits::pow(b.clone(), terms) * (&b - 1);
    let t = BigFixed::from_ratio(&num, &den, frac_bits).expect("|b| >= 2");
    // round up so the result stays a bound
    BigFixed::from_mantissa(t.mantissa() + 1, frac_bits)
}

/// Sum of the first `terms` outer terms at `w` fractional bits. Each `(k, j)`
/// contribution is one exact-numerator integer division, so the result is
/// within `terms * m` units of `2^-w` and independent of how the work is
/// split across threads.
fn head_sum(f: &PFormula, terms: usize, w: u32) -> BigInt {
    let one = BigInt::one() << w as usize;
    let mut powers = Vec::with_capacity(terms);
    let mut bk = BigInt::one();
    for _ in 0..terms {
        powers.push(bk.clone());
        bk *= &f.b;
    }
    let term = |k: usize| -> BigInt {
        let mut acc = BigInt::zero();
        for (j, aj) in f.a.iter().enumerate() {
            if aj.is_zero() {
                continue;
            }
            let d = num_traits::pow(BigInt::from(f.m * k + j + 1), f.s as usize);
            acc += (aj * &one) / (&powers[k] * d);
        }
        acc
    };
    if terms * f.m >= PAR_THRESHOLD {
        (0..terms).into_par_iter().map(term).sum()
    } else {
        (0..terms).map(term).sum()
    }
}

/// Evaluates `f` to within `2^-F`.
pub fn eval_p(f: &PFormula, frac_bits: u32) -> Result<EvalReport> {
    let terms = tail_start(f, frac_bits)?;
    let w = frac_bits + GUARD_BITS;
    let sum = head_sum(f, terms, w);
    let value = BigFixed::from_mantissa(sum, w).with_frac_bits(frac_bits + TAIL_MARGIN_BITS);
    Ok(EvalReport {
        value,
        terms_used: terms,
        tail_bound: tail_bound(f, terms, w),
    })
}

/// Value at `w` bits plus an error bound in units of `2^-w`.
struct Approx {
    v: BigInt,
    err: BigUint,
}

enum Stall {
    /// An operand's enclosure straddles zero; more bits may separate it.
    NeedBits,
    Fatal(Error),
}

impl From<Error> for Stall {
    fn from(e: Error) -> Self {
        Stall::Fatal(e)
    }
}

fn ceil_shr(x: BigUint, k: u32) -> BigUint {
    let one = BigUint::one() << k as usize;
    (x + &one - 1u32) >> k as usize
}

fn ceil_div(x: BigUint, d: &BigUint) -> BigUint {
    (x + d - 1u32) / d
}

fn approx(e: &ClosedForm, w: u32) -> std::result::Result<Approx, Stall> {
    use ClosedForm::*;
    Ok(match e {
        Int(v) => Approx {
            v: v << w as usize,
            err: BigUint::zero(),
        },
        Rat(q) => Approx {
            v: (q.numer() << w as usize) / q.denom(),
            err: BigUint::one(),
        },
        Sqrt(q) => {
            // sqrt(p/q) = sqrt(p q) / q
            let radicand = (q.numer() * q.denom()).to_biguint().ok_or(Error::NegativeOperand)?;
            let root = BigInt::from(isqrt(&(radicand << (2 * w) as usize)));
            Approx {
                v: root / q.denom(),
                err: BigUint::from(2u32),
            }
        }
        Add(a, b) | Sub(a, b) => {
            let x = approx(a, w)?;
            let y = approx(b, w)?;
            let v = if matches!(e, Add(..)) { x.v + y.v } else { x.v - y.v };
            Approx { v, err: x.err + y.err }
        }
        Mul(a, b) => {
            let x = approx(a, w)?;
            let y = approx(b, w)?;
            let v = crate::bigfixed::shr_trunc(&(&x.v * &y.v), w);
            let spread = x.v.magnitude() * &y.err + y.v.magnitude() * &x.err + &x.err * &y.err;
            Approx {
                v,
                err: ceil_shr(spread, w) + 1u32,
            }
        }
        Div(a, b) => {
            let x = approx(a, w)?;
            let y = approx(b, w)?;
            let ymag = y.v.magnitude();
            if *ymag <= y.err {
                return Err(if y.err.is_zero() {
                    Stall::Fatal(Error::DivideByZero)
                } else {
                    Stall::NeedBits
                });
            }
            let q = (&x.v << w as usize) / &y.v;
            let spread = (&x.err << w as usize) + q.magnitude() * &y.err;
            Approx {
                v: q,
                err: ceil_div(spread, &(ymag - &y.err)) + 1u32,
            }
        }
        Arctan(a) => {
            let x = approx(a, w)?;
            let r = atan_ref(&BigFixed::from_mantissa(x.v, w), w);
            Approx {
                v: r.mantissa().clone(),
                // atan is 1-Lipschitz; atan_ref adds at most 4 units
                err: x.err + 4u32,
            }
        }
        Ln(a) => {
            let x = approx(a, w)?;
            if x.v.is_negative() || x.v.magnitude() <= &x.err {
                let definitely_nonpositive = !x.v.is_positive() && x.v.magnitude() >= &x.err;
                return Err(if definitely_nonpositive {
                    Stall::Fatal(Error::Domain(format!("logarithm of nonpositive value in `{e}`")))
                } else {
                    Stall::NeedBits
                });
            }
            let lower = x.v.magnitude() - &x.err;
            let r = ln_ref(&BigFixed::from_mantissa(x.v.clone(), w), w)?;
            // |ln x - ln x'| <= |x - x'| / min(x, x')
            let spread = &x.err << w as usize;
            Approx {
                v: r.mantissa().clone(),
                err: ceil_div(spread, &lower) + 4u32,
            }
        }
    })
}

/// Highest working precision tried before an ambiguous operand is reported
/// as a domain error.
const MAX_EXTRA_BITS: u32 = 4096;

/// Evaluates a closed form to within `2^(-F+4)`.
///
/// Errors are propagated through the tree as explicit bounds; the working
/// precision starts at `F + 64` and is raised until the accumulated bound
/// fits the target.
pub fn eval_closed(e: &ClosedForm, frac_bits: u32) -> Result<BigFixed> {
    let mut w = frac_bits + GUARD_BITS;
    loop {
        match approx(e, w) {
            Ok(a) => {
                // need err * 2^-w <= 2^(-F+3)
                let budget_bits = (w - frac_bits + 3) as u64;
                let err_bits = a.err.bits();
                if err_bits <= budget_bits {
                    return Ok(BigFixed::from_mantissa(a.v, w).with_frac_bits(frac_bits));
                }
                w += (err_bits - budget_bits) as u32 + 8;
            }
            Err(Stall::Fatal(err)) => return Err(err),
            Err(Stall::NeedBits) => w += w.min(512),
        }
        if w > frac_bits + GUARD_BITS + MAX_EXTRA_BITS {
            return Err(Error::Domain(format!(
                "cannot separate an operand of `{e}` from zero"
            )));
        }
    }
}
