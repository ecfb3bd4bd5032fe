use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::json;
use crate::Error;

/// Exact rational, always reduced with a positive denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "RationalJson", try_from = "RationalJson")]
pub struct Rational(BigRational);

impl Rational {
    /// Panics if `den` is zero.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Self {
        Rational(BigRational::new(num.into(), den.into()))
    }

    pub fn from_int(v: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(v.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        Rational(self.0.recip())
    }

    /// `self^e` for any integer exponent; panics on `0^-e`.
    pub fn pow(&self, e: i32) -> Self {
        Rational(num_traits::Pow::pow(&self.0, e))
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_int(v)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `p` or `p/q` with optional signs and surrounding whitespace.
    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (t, "1"),
        };
        let num: BigInt = num
            .parse()
            .map_err(|_| Error::parse(0, format!("not a rational: `{t}`")))?;
        let den: BigInt = den
            .parse()
            .map_err(|_| Error::parse(0, format!("not a rational: `{t}`")))?;
        if den.is_zero() {
            return Err(Error::DivideByZero);
        }
        Ok(Rational::new(num, den))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($tr::$method(&self.0, &rhs.0))
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($tr::$method(self.0, rhs.0))
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($tr::$method(self.0, &rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

#[derive(Serialize, Deserialize)]
struct RationalJson {
    #[serde(with = "json::int")]
    num: BigInt,
    #[serde(with = "json::int")]
    den: BigInt,
}

impl From<Rational> for RationalJson {
    fn from(r: Rational) -> Self {
        let (num, den) = r.0.into_raw();
        RationalJson { num, den }
    }
}

impl TryFrom<RationalJson> for Rational {
    type Error = String;
    fn try_from(j: RationalJson) -> Result<Self, String> {
        if !j.den.is_positive() {
            return Err(format!("denominator must be positive, got {}", j.den));
        }
        Ok(Rational::new(j.num, j.den))
    }
}
