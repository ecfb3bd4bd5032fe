//! Reference `sqrt`, `atan`, `ln` and `pi`.
//!
//! All series work on raw mantissas at `F + GUARD_BITS` fractional bits and
//! stop at the first term that truncates to zero at that precision. Results
//! are then truncated to the requested `F`; the contract is
//! `|result - f(x)| <= 2^(-F+2)` for `atan_ref`/`ln_ref`/`pi_ref` and
//! `<= 2^-F` for `sqrt_ref`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use super::{BigFixed, GUARD_BITS};
use crate::{Error, Result};

/// Floor of the square root, by Newton iteration.
pub fn isqrt(n: &BigUint) -> BigUint {
    if n.is_zero() {
        return BigUint::zero();
    }
    // 2^ceil(bits/2) is an upper bound on sqrt(n); Newton decreases
    // monotonically from any upper bound to the floor.
    let mut x = BigUint::one() << ((n.bits() as usize).div_ceil(2));
    loop {
        let y = (&x + n / &x) >> 1usize;
        if y >= x {
            return x;
        }
        x = y;
    }
}

pub fn sqrt_ref(x: &BigFixed, frac_bits: u32) -> Result<BigFixed> {
    if x.signum() < 0 {
        return Err(Error::NegativeOperand);
    }
    let mag = x.mantissa().magnitude();
    let target = 2 * frac_bits;
    let scaled = if target >= x.frac_bits() {
        mag << (target - x.frac_bits()) as usize
    } else {
        mag >> (x.frac_bits() - target) as usize
    };
    Ok(BigFixed::from_mantissa(BigInt::from(isqrt(&scaled)), frac_bits))
}

/// `sum (-1)^k t^(2k+1) / (2k+1)` for `0 <= t < 2^w / 4`, on mantissas.
fn atan_series(t: &BigInt, w: u32, alternating: bool) -> BigInt {
    let t2: BigInt = (t * t) >> w as usize;
    let mut power = t.clone();
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    loop {
        let term = &power / BigInt::from(2 * k + 1);
        if term.is_zero() {
            break;
        }
        if alternating && k % 2 == 1 {
            sum -= term;
        } else {
            sum += term;
        }
        power = (&power * &t2) >> w as usize;
        k += 1;
    }
    sum
}

/// pi at `w` fractional bits via 16 atan(1/5) - 4 atan(1/239).
pub(crate) fn pi_mantissa(w: u32) -> BigInt {
    let one = BigInt::one() << w as usize;
    let a5 = atan_series(&(&one / 5), w, true);
    let a239 = atan_series(&(&one / 239), w, true);
    a5 * 16 - a239 * 4
}

pub fn pi_ref(frac_bits: u32) -> BigFixed {
    let w = frac_bits + GUARD_BITS;
    BigFixed::from_mantissa(pi_mantissa(w), w).with_frac_bits(frac_bits)
}

pub fn atan_ref(x: &BigFixed, frac_bits: u32) -> BigFixed {
    let w = frac_bits + GUARD_BITS;
    let one = BigInt::one() << w as usize;
    let quarter = &one >> 2usize;

    let t = x.with_frac_bits(w).mantissa().clone();
    let negative = t.is_negative();
    let mut t = t.abs();

    // atan(x) = pi/2 - atan(1/x) for x > 1
    let complement = t > one;
    if complement {
        t = (&one << w as usize) / &t;
    }

    // atan(x) = 2 atan(x / (1 + sqrt(1 + x^2)))
    let mut halvings = 0usize;
    while t >= quarter {
        let t2: BigInt = (&t * &t) >> w as usize;
        let radicand = ((&one + t2) << w as usize).to_biguint().expect("positive");
        let root = BigInt::from(isqrt(&radicand));
        t = (&t << w as usize) / (&one + root);
        halvings += 1;
    }

    let mut r = atan_series(&t, w, true) << halvings;
    if complement {
        r = (pi_mantissa(w) >> 1usize) - r;
    }
    if negative {
        r = -r;
    }
    BigFixed::from_mantissa(r, w).with_frac_bits(frac_bits)
}

pub fn ln_ref(x: &BigFixed, frac_bits: u32) -> Result<BigFixed> {
    if x.signum() <= 0 {
        return Err(Error::Domain("logarithm of a nonpositive number".into()));
    }
    let w = frac_bits + GUARD_BITS;
    let one = BigInt::one() << w as usize;

    // x = 2^k * y with y in [1, 2)
    let bits = x.mantissa().bits() as i64;
    let k = bits - 1 - x.frac_bits() as i64;
    let shift = w as i64 - (bits - 1);
    let y = if shift >= 0 {
        x.mantissa() << shift as usize
    } else {
        x.mantissa() >> (-shift) as usize
    };

    // ln y = 2 atanh((y - 1) / (y + 1)), argument in [0, 1/3)
    let t = ((&y - &one) << w as usize) / (&y + &one);
    let mut r = atan_series(&t, w, false) * 2;
    if k != 0 {
        let ln2 = atan_series(&(&one / 3), w, false) * 2;
        r += ln2 * k;
    }
    Ok(BigFixed::from_mantissa(r, w).with_frac_bits(frac_bits))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fx(v: i64) -> BigFixed {
        BigFixed::from_int(v, 0)
    }

    fn close(a: &BigFixed, b: &BigFixed, log2_tol: i64) -> bool {
        let d = a.sub(b, a.frac_bits().max(b.frac_bits())).abs();
        d <= BigFixed::pow2(log2_tol)
    }

    /// Independent arctan(1/q) for integer q, summed directly in integers.
    fn atan_inv_oracle(q: u64, w: u32) -> BigInt {
        let one = BigInt::one() << w as usize;
        let q2 = BigInt::from(q * q);
        let mut power = &one / BigInt::from(q);
        let mut sum = BigInt::zero();
        let mut n = 0u64;
        while !power.is_zero() {
            let term = &power / BigInt::from(2 * n + 1);
            if n % 2 == 0 {
                sum += term
            } else {
                sum -= term
            }
            power /= &q2;
            n += 1;
        }
        sum
    }

    const PI_HEX: &str = "3.243F6A8885A308D313198A2E03707344A4093822299F31D0082EFA98EC4E6C89";

    #[test]
    fn isqrt_agrees_with_num_integer() {
        for n in (0u64..2000).chain([u64::MAX, 1 << 62, (1 << 62) - 1]) {
            let n = BigUint::from(n);
            assert_eq!(isqrt(&n), n.sqrt(), "n = {n}");
        }
        let big = BigUint::from(3u32).pow(301);
        assert_eq!(isqrt(&big), big.sqrt());
    }

    #[test]
    fn sqrt_of_perfect_squares_and_zero() {
        for f in [0, 7, 64, 200] {
            assert_eq!(sqrt_ref(&fx(4), f).unwrap(), fx(2));
            assert!(sqrt_ref(&fx(0), f).unwrap().is_zero());
        }
        assert_eq!(sqrt_ref(&fx(-1), 8), Err(Error::NegativeOperand));
    }

    #[test]
    fn sqrt2_hex_digits() {
        let r = sqrt_ref(&fx(2), 64).unwrap();
        assert!(r.to_string_radix(16, 10).ends_with(".6A09E667F3"));
        let sq = r.mul(&r, 128);
        assert!(close(&sq, &fx(2), -62));
    }

    #[test]
    fn sqrt_squared_within_contract() {
        let r = sqrt_ref(&fx(2), 128).unwrap();
        assert!(close(&r.mul(&r, 128), &fx(2), -126));
    }

    #[test]
    fn pi_matches_two_independent_machin_compositions() {
        let w = 320;
        // Machin: 16 atan(1/5) - 4 atan(1/239)
        let machin = atan_inv_oracle(5, w) * 16 - atan_inv_oracle(239, w) * 4;
        // Gauss: 48 atan(1/18) + 32 atan(1/57) - 20 atan(1/239)
        let gauss =
            atan_inv_oracle(18, w) * 48 + atan_inv_oracle(57, w) * 32 - atan_inv_oracle(239, w) * 20;
        let machin = BigFixed::from_mantissa(machin, w);
        let gauss = BigFixed::from_mantissa(gauss, w);
        assert!(close(&machin, &gauss, -300));

        let quarter = atan_ref(&fx(1), 256);
        let four = quarter.mul_int(&BigInt::from(4));
        assert!(close(&four, &machin, -250));
        assert!(four.to_string_radix(16, 64).starts_with(&PI_HEX[..62]));
        assert!(pi_ref(256).to_string_radix(16, 64).starts_with(&PI_HEX[..62]));
    }

    #[test]
    fn atan_reflection() {
        let f = 200;
        let half_pi = pi_ref(f + 8).shl(-1);
        for (p, q) in [(1, 3), (2, 1), (7, 5), (1, 100), (250, 3)] {
            let x = BigFixed::from_ratio(&BigInt::from(p), &BigInt::from(q), f + 64).unwrap();
            let inv = BigFixed::from_ratio(&BigInt::from(q), &BigInt::from(p), f + 64).unwrap();
            let s = atan_ref(&x, f).add(&atan_ref(&inv, f), f);
            assert!(close(&s, &half_pi, -(f as i64) + 4), "{p}/{q}");
        }
    }

    #[test]
    fn atan_is_odd() {
        let x = BigFixed::from_ratio(&BigInt::from(-3), &BigInt::from(7), 100).unwrap();
        assert_eq!(atan_ref(&x, 90), -atan_ref(&x.abs(), 90));
        assert!(atan_ref(&fx(0), 64).is_zero());
    }

    #[test]
    fn ln_of_one_is_exactly_zero() {
        for f in [1, 64, 300] {
            assert!(ln_ref(&fx(1), f).unwrap().is_zero());
        }
    }

    #[test]
    fn ln_domain() {
        assert!(matches!(ln_ref(&fx(0), 64), Err(Error::Domain(_))));
        assert!(matches!(ln_ref(&fx(-2), 64), Err(Error::Domain(_))));
    }

    #[test]
    fn ln2_value_and_consistency() {
        let l2 = ln_ref(&fx(2), 64).unwrap();
        assert!(l2.to_string_radix(10, 15).starts_with("0.693147180559945"));
        let l4 = ln_ref(&fx(4), 64).unwrap();
        assert!(close(&l2.add(&l2, 64), &l4, -62));
    }

    #[test]
    fn ln_multiplicative() {
        let f = 160;
        let primes = [2i64, 3, 5, 7];
        for &a in &primes {
            for &b in &primes {
                let lhs = ln_ref(&fx(a * b), f).unwrap();
                let rhs = ln_ref(&fx(a), f).unwrap().add(&ln_ref(&fx(b), f).unwrap(), f);
                assert!(close(&lhs, &rhs, -(f as i64) + 4), "{a}*{b}");
            }
        }
    }

    #[test]
    fn ln_of_fractions_below_one() {
        let half = BigFixed::pow2(-1);
        let l = ln_ref(&half, 128).unwrap();
        assert!(close(&l, &-ln_ref(&fx(2), 128).unwrap(), -126));
    }

    #[test]
    fn precision_is_monotone() {
        let x = BigFixed::from_ratio(&BigInt::from(17), &BigInt::from(9), 300).unwrap();
        for f in [32u32, 100, 200] {
            let lo = atan_ref(&x, f);
            let hi = atan_ref(&x, f + 64);
            assert!(close(&lo, &hi, -(f as i64) + 3));
            let lo = ln_ref(&x, f).unwrap();
            let hi = ln_ref(&x, f + 64).unwrap();
            assert!(close(&lo, &hi, -(f as i64) + 3));
        }
    }

    #[test]
    fn deterministic() {
        let x = BigFixed::from_ratio(&BigInt::from(5), &BigInt::from(11), 200).unwrap();
        assert_eq!(atan_ref(&x, 150).mantissa(), atan_ref(&x, 150).mantissa());
        assert_eq!(ln_ref(&x, 150).unwrap().mantissa(), ln_ref(&x, 150).unwrap().mantissa());
    }
}
