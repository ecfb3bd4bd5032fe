use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::json;
use super::Rational;
use crate::{Error, Result};

/// `P(s, b, m, A)`: `sum_{k>=0} b^-k sum_{j=1..m} a_j / (m k + j)^s`.
///
/// Fields are public so that malformed formulas can be represented and then
/// rejected by [`PFormula::validate`]; every evaluating operation validates
/// first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PFormula {
    pub s: u32,
    #[serde(with = "json::int")]
    pub b: BigInt,
    pub m: usize,
    #[serde(with = "json::int_vec")]
    pub a: Vec<BigInt>,
}

impl PFormula {
    /// Builds and validates a formula with `m = a.len()`.
    pub fn new(s: u32, b: impl Into<BigInt>, a: Vec<BigInt>) -> Result<Self> {
        let f = PFormula {
            s,
            b: b.into(),
            m: a.len(),
            a,
        };
        f.validate()?;
        Ok(f)
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64(s: u32, b: i64, a: &[i64]) -> Result<Self> {
        Self::new(s, b, a.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// The all-zero formula of the given shape.
    pub fn zero(s: u32, b: impl Into<BigInt>, m: usize) -> Self {
        PFormula {
            s,
            b: b.into(),
            m,
            a: vec![BigInt::zero(); m],
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.b.abs() < BigInt::from(2) {
            return Err(Error::InvalidBase(self.b.to_string()));
        }
        if self.a.len() != self.m {
            return Err(Error::BadLength {
                expected: self.m,
                got: self.a.len(),
            });
        }
        if self.s < 1 {
            return Err(Error::BadExponent(self.s));
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(Zero::is_zero)
    }

    /// Same `(s, b, m)`.
    pub fn same_shape(&self, other: &PFormula) -> bool {
        self.s == other.s && self.b == other.b && self.m == other.m
    }

    /// `sum_j |a_j|`.
    pub fn coefficient_l1(&self) -> BigUint {
        self.a.iter().map(|x| x.magnitude().clone()).sum()
    }

    /// The exact `k`-th outer term `b^-k sum_j a_j / (m k + j)^s`.
    pub fn term_exact(&self, k: usize) -> Rational {
        let inner = self.inner_sum(k);
        let bk = num_traits::pow(self.b.clone(), k);
        Rational::from(inner / BigRational::from_integer(bk))
    }

    fn inner_sum(&self, k: usize) -> BigRational {
        let mut acc = BigRational::zero();
        for (j, aj) in self.a.iter().enumerate() {
            if aj.is_zero() {
                continue;
            }
            let d = BigInt::from(self.m * k + j + 1);
            let den = num_traits::pow(d, self.s as usize);
            acc += BigRational::new(aj.clone(), den);
        }
        acc
    }

    /// Exact truncation `sum_{k=0}^{terms-1}` of the defining series.
    pub fn partial_sum_exact(&self, terms: usize) -> Result<Rational> {
        self.validate()?;
        // Horner in 1/b from the last term down keeps denominators small.
        let inv_b = BigRational::new(BigInt::one(), self.b.clone());
        let mut acc = BigRational::zero();
        for k in (0..terms).rev() {
            acc = acc * &inv_b + self.inner_sum(k);
        }
        Ok(Rational::from(acc))
    }
}

impl fmt::Display for PFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P({},{},{},(", self.s, self.b, self.m)?;
        for (i, a) in self.a.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("))")
    }
}

impl FromStr for PFormula {
    type Err = Error;

    /// [`parse`] followed by [`PFormula::validate`].
    fn from_str(s: &str) -> Result<Self> {
        let f = parse(s)?;
        f.validate()?;
        Ok(f)
    }
}

/// Strips whitespace; `print(parse(x)) == normalize(x)` for canonical input.
pub fn normalize(text: &str) -> String {
    text.chars().filter(|c| !c.is_whitespace()).collect()
}

/// Parses `P(<s>,<b>,<m>,(<a1>,...,<am>))`. Only integer literals are
/// accepted. The result is syntactically well-formed but not validated.
pub fn parse(text: &str) -> Result<PFormula> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    p.expect(b'P')?;
    p.expect(b'(')?;
    let s = p.unsigned("exponent s")?;
    p.expect(b',')?;
    let b = p.integer()?;
    p.expect(b',')?;
    let m = p.unsigned("length m")?;
    p.expect(b',')?;
    p.expect(b'(')?;
    let mut a = vec![p.integer()?];
    while p.peek() == Some(b',') {
        p.pos += 1;
        a.push(p.integer()?);
    }
    p.expect(b')')?;
    p.expect(b')')?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::parse(p.pos, "trailing input"));
    }
    let s = u32::try_from(&s).map_err(|_| Error::parse(0, "exponent out of range"))?;
    let m = usize::try_from(&m).map_err(|_| Error::parse(0, "length out of range"))?;
    Ok(PFormula { s, b, m, a })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => Err(Error::parse(
                self.pos,
                format!("expected `{}`, found `{}`", c as char, x as char),
            )),
            None => Err(Error::parse(self.pos, format!("expected `{}`, found end of input", c as char))),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-' | b'+')) {
            self.pos += 1;
            self.skip_ws();
        }
        let digits_start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(Error::parse(self.pos, "expected an integer literal"));
        }
        let sign_neg = self.src[start] == b'-';
        let digits = std::str::from_utf8(&self.src[digits_start..self.pos]).expect("ascii");
        let v: BigInt = digits.parse().expect("digit run");
        Ok(if sign_neg { -v } else { v })
    }

    fn unsigned(&mut self, what: &str) -> Result<BigInt> {
        let at = {
            self.skip_ws();
            self.pos
        };
        let v = self.integer()?;
        if v.is_negative() {
            return Err(Error::parse(at, format!("{what} must be nonnegative")));
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: u32, b: i64, a: &[i64]) -> PFormula {
        PFormula::from_i64(s, b, a).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(p(1, 16, &[8, 8, 4, 0, -2, -2, -1, 0]).validate().is_ok());
        let bad_base = PFormula {
            s: 1,
            b: BigInt::from(1),
            m: 4,
            a: [1, 0, -1, 0].iter().map(|&x| BigInt::from(x)).collect(),
        };
        assert_eq!(bad_base.validate(), Err(Error::InvalidBase("1".into())));
        let bad_len = PFormula {
            s: 1,
            b: BigInt::from(10),
            m: 2,
            a: vec![BigInt::from(1)],
        };
        assert_eq!(bad_len.validate(), Err(Error::BadLength { expected: 2, got: 1 }));
        let bad_s = PFormula { s: 0, ..p(1, 10, &[1]) };
        assert_eq!(bad_s.validate(), Err(Error::BadExponent(0)));
        assert!(PFormula::from_i64(1, -1, &[1]).is_err());
    }

    #[test]
    fn partial_sum_examples() {
        assert_eq!(p(1, 2, &[1]).partial_sum_exact(2).unwrap(), Rational::new(5, 4));
        assert_eq!(p(1, 4, &[2, 0, -1, 0]).partial_sum_exact(1).unwrap(), Rational::new(5, 3));
        assert_eq!(p(1, 4, &[2, 0, -1, 0]).partial_sum_exact(0).unwrap(), Rational::zero());
        assert_eq!(p(2, -3, &[1, 1]).partial_sum_exact(0).unwrap(), Rational::zero());
    }

    #[test]
    fn higher_exponent_partial_sum() {
        // P(2,2,1,(1)) first two terms: 1 + (1/2)(1/4)
        assert_eq!(p(2, 2, &[1]).partial_sum_exact(2).unwrap(), Rational::new(9, 8));
    }

    #[test]
    fn parse_print() {
        let text = "P(1,16,8,(8,8,4,0,-2,-2,-1,0))";
        let f = parse(text).unwrap();
        assert_eq!(f, p(1, 16, &[8, 8, 4, 0, -2, -2, -1, 0]));
        assert_eq!(f.to_string(), text);
        let spaced = parse(" P( 1 , -27 ,6, ( 9, 0,0,0, - 1 ,0) ) ").unwrap();
        assert_eq!(spaced, p(1, -27, &[9, 0, 0, 0, -1, 0]));
    }

    #[test]
    fn parse_rejects_symbols() {
        match parse("P(1,-n^3,3,(n,1,0))") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(matches!(parse("P(1,2,1,(1)) x"), Err(Error::Parse { .. })));
        assert!(matches!(parse("P(-1,2,1,(1))"), Err(Error::Parse { .. })));
        assert!(matches!(parse("Q(1,2,1,(1))"), Err(Error::Parse { pos: 0, .. })));
    }

    #[test]
    fn from_str_validates() {
        assert_eq!(
            "P(1,10,2,(1))".parse::<PFormula>(),
            Err(Error::BadLength { expected: 2, got: 1 })
        );
        assert!(parse("P(1,10,2,(1))").is_ok());
    }

    #[test]
    fn json_shape() {
        let f = p(1, -4, &[2, 0, -1, 0]);
        let j = serde_json::to_string(&f).unwrap();
        assert_eq!(j, r#"{"s":1,"b":-4,"m":4,"a":[2,0,-1,0]}"#);
        let big: PFormula =
            serde_json::from_str(r#"{"s":1,"b":123456789012345678901234567890,"m":1,"a":[1]}"#).unwrap();
        assert_eq!(big.b.to_string(), "123456789012345678901234567890");
    }

    fn arb_formula() -> impl Strategy<Value = PFormula> {
        (1u32..4, 2i64..1000, any::<bool>(), prop::collection::vec(-10_000i64..10_000, 1..10)).prop_map(
            |(s, b, neg, a)| {
                let b = if neg { -b } else { b };
                p(s, b, &a)
            },
        )
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(f in arb_formula()) {
            let text = f.to_string();
            let back = parse(&text).unwrap();
            prop_assert_eq!(&back, &f);
            prop_assert_eq!(back.to_string(), normalize(&text));
        }

        #[test]
        fn partial_sum_step(f in arb_formula(), k in 0usize..10) {
            let a = f.partial_sum_exact(k + 1).unwrap();
            let b = f.partial_sum_exact(k).unwrap();
            prop_assert_eq!(a - b, f.term_exact(k));
        }

        #[test]
        fn partial_sum_linear(
            b in 2i64..50,
            a1 in prop::collection::vec(-50i64..50, 3),
            a2 in prop::collection::vec(-50i64..50, 3),
            c1 in -5i64..5,
            c2 in -5i64..5,
            k in 0usize..=16,
        ) {
            let f1 = p(1, b, &a1);
            let f2 = p(1, b, &a2);
            let mixed: Vec<i64> = a1.iter().zip(&a2).map(|(x, y)| c1 * x + c2 * y).collect();
            let lhs = p(1, b, &mixed).partial_sum_exact(k).unwrap();
            let rhs = Rational::from(c1) * f1.partial_sum_exact(k).unwrap()
                + Rational::from(c2) * f2.partial_sum_exact(k).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
