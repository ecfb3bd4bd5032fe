//! Digit rendering in arbitrary bases.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::BigFixed;

const ALPHABET: &[u8; 36] = b"0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ";

/// Renders digit values in `base`: one character per digit from `0-9A-Z` for
/// bases up to 36, otherwise decimal digit values joined by `:`.
pub fn format_digits(digits: &[BigUint], base: &BigUint) -> String {
    if *base <= BigUint::from(36u32) {
        digits
            .iter()
            .map(|d| ALPHABET[d.to_usize().expect("digit below base")] as char)
            .collect()
    } else {
        digits.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(":")
    }
}

/// The `count` least significant base-`base` digits of `v`, most significant
/// first, zero padded.
pub(crate) fn to_digits(mut v: BigUint, base: &BigUint, count: usize) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); count];
    for slot in out.iter_mut().rev() {
        let (q, r) = v.div_rem(base);
        *slot = r;
        v = q;
    }
    out
}

impl BigFixed {
    /// The first `count` digits of `x - floor(x)` in `base`, truncated.
    pub fn frac_digits(&self, base: &BigUint, count: usize) -> Vec<BigUint> {
        let scaled = (self.frac_mantissa() * base.pow(count as u32)) >> self.frac_bits() as usize;
        to_digits(scaled, base, count)
    }

    /// Sign, integer part and `frac_digits` truncated fractional digits of
    /// `|x|` in a base between 2 and 36.
    pub fn to_string_radix(&self, base: u32, frac_digits: usize) -> String {
        assert!((2..=36).contains(&base), "radix must be in 2..=36");
        let mag = self.mantissa().magnitude();
        let int_part = mag >> self.frac_bits() as usize;
        let mut s = String::new();
        if self.signum() < 0 {
            s.push('-');
        }
        s.push_str(&int_part.to_str_radix(base).to_uppercase());
        if frac_digits > 0 {
            let one = BigUint::from(1u32) << self.frac_bits() as usize;
            let frac = mag % &one;
            let b = BigUint::from(base);
            let scaled = (frac * b.pow(frac_digits as u32)) >> self.frac_bits() as usize;
            s.push('.');
            s.push_str(&format_digits(&to_digits(scaled, &b, frac_digits), &b));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn renders_integer_and_fraction() {
        let x = BigFixed::from_mantissa(BigInt::from(-0x1A8), 4); // -26.5
        assert_eq!(x.to_string_radix(10, 3), "-26.500");
        assert_eq!(x.to_string_radix(16, 2), "-1A.80");
        assert_eq!(x.to_string_radix(2, 0), "-11010");
    }

    #[test]
    fn frac_digits_use_floor_fraction() {
        let x = BigFixed::from_mantissa(BigInt::from(-3), 2); // -0.75, frac = 0.25
        let d = x.frac_digits(&BigUint::from(10u32), 3);
        assert_eq!(format_digits(&d, &BigUint::from(10u32)), "250");
    }

    #[test]
    fn large_bases_use_colons() {
        let base = BigUint::from(1000u32);
        let x = BigFixed::from_ratio(&BigInt::from(1), &BigInt::from(7), 80).unwrap();
        let d = x.frac_digits(&base, 3);
        assert_eq!(format_digits(&d, &base), "142:857:142");
    }
}
