use std::fmt;
use std::ops;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::Rational;
use crate::{Error, Result};

/// Deepest tree accepted by the parser and by instance construction. Family
/// templates need 7 levels; combinations add two per step.
pub const MAX_DEPTH: usize = 32;

/// Left-hand side of a family identity, as an expression tree.
///
/// Square roots are taken of nonnegative rationals only. Domain constraints
/// of `Ln` and `Div` are checked when the tree is evaluated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosedForm {
    Int(BigInt),
    Rat(Rational),
    Sqrt(Rational),
    Add(Box<ClosedForm>, Box<ClosedForm>),
    Sub(Box<ClosedForm>, Box<ClosedForm>),
    Mul(Box<ClosedForm>, Box<ClosedForm>),
    Div(Box<ClosedForm>, Box<ClosedForm>),
    Arctan(Box<ClosedForm>),
    Ln(Box<ClosedForm>),
}

impl ClosedForm {
    pub fn int(v: impl Into<BigInt>) -> Self {
        ClosedForm::Int(v.into())
    }

    /// A rational literal; integral values become `Int`.
    pub fn rat(q: Rational) -> Self {
        if q.is_integer() {
            ClosedForm::Int(q.numer().clone())
        } else {
            ClosedForm::Rat(q)
        }
    }

    /// Panics on a negative operand.
    pub fn sqrt(q: impl Into<Rational>) -> Self {
        let q = q.into();
        assert!(!q.is_negative(), "square root of a negative rational");
        ClosedForm::Sqrt(q)
    }

    pub fn atan(x: ClosedForm) -> Self {
        ClosedForm::Arctan(Box::new(x))
    }

    pub fn ln(x: ClosedForm) -> Self {
        ClosedForm::Ln(Box::new(x))
    }

    /// Leaves count as depth 1.
    pub fn depth(&self) -> usize {
        use ClosedForm::*;
        match self {
            Int(_) | Rat(_) | Sqrt(_) => 1,
            Arctan(x) | Ln(x) => 1 + x.depth(),
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Exact value when the tree is built from literals and arithmetic only.
    pub fn as_rational(&self) -> Option<Rational> {
        use ClosedForm::*;
        match self {
            Int(v) => Some(Rational::from_int(v.clone())),
            Rat(q) => Some(q.clone()),
            Add(a, b) => Some(a.as_rational()? + b.as_rational()?),
            Sub(a, b) => Some(a.as_rational()? - b.as_rational()?),
            Mul(a, b) => Some(a.as_rational()? * b.as_rational()?),
            Div(a, b) => {
                let d = b.as_rational()?;
                if d.is_zero() {
                    None
                } else {
                    Some(a.as_rational()? / d)
                }
            }
            Sqrt(_) | Arctan(_) | Ln(_) => None,
        }
    }

    fn precedence(&self) -> u8 {
        use ClosedForm::*;
        match self {
            Int(v) if v.is_negative() => 0,
            Rat(q) if q.is_negative() => 0,
            Add(..) | Sub(..) => 1,
            Mul(..) | Div(..) | Rat(_) => 2,
            _ => 3,
        }
    }
}

macro_rules! closed_binop {
    ($tr:ident, $method:ident, $variant:ident) => {
        impl ops::$tr for ClosedForm {
            type Output = ClosedForm;
            fn $method(self, rhs: ClosedForm) -> ClosedForm {
                ClosedForm::$variant(Box::new(self), Box::new(rhs))
            }
        }
    };
}

closed_binop!(Add, add, Add);
closed_binop!(Sub, sub, Sub);
closed_binop!(Mul, mul, Mul);
closed_binop!(Div, div, Div);

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ClosedForm::*;
        let (op, a, b, prec) = match self {
            Int(v) => return write!(f, "{v}"),
            Rat(q) => return write!(f, "{q}"),
            Sqrt(q) => return write!(f, "sqrt({q})"),
            Arctan(x) => return write!(f, "atan({x})"),
            Ln(x) => return write!(f, "ln({x})"),
            Add(a, b) => ("+", a, b, 1),
            Sub(a, b) => ("-", a, b, 1),
            Mul(a, b) => ("*", a, b, 2),
            Div(a, b) => ("/", a, b, 2),
        };
        if a.precedence() < prec {
            write!(f, "({a})")?;
        } else {
            write!(f, "{a}")?;
        }
        f.write_str(op)?;
        // the parser is left-associative, so a right operand of equal
        // precedence keeps its parentheses
        if b.precedence() <= prec {
            write!(f, "({b})")
        } else {
            write!(f, "{b}")
        }
    }
}

impl FromStr for ClosedForm {
    type Err = Error;

    /// Infix text over integer literals, `+ - * /`, parentheses and the
    /// functions `atan`, `ln`, `sqrt`. `sqrt` takes a rational-valued operand.
    fn from_str(s: &str) -> Result<Self> {
        let mut p = ExprParser { src: s.as_bytes(), pos: 0 };
        let e = p.expr(0)?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(Error::parse(p.pos, "trailing input"));
        }
        if e.depth() > MAX_DEPTH {
            return Err(Error::parse(0, format!("expression deeper than {MAX_DEPTH}")));
        }
        Ok(e)
    }
}

struct ExprParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl ExprParser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn depth_check(&self, depth: usize) -> Result<()> {
        if depth > 4 * MAX_DEPTH {
            Err(Error::parse(self.pos, "expression nested too deeply"))
        } else {
            Ok(())
        }
    }

    fn expr(&mut self, depth: usize) -> Result<ClosedForm> {
        self.depth_check(depth)?;
        let mut lhs = self.term(depth + 1)?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term(depth + 1)?;
            lhs = if c == b'+' { lhs + rhs } else { lhs - rhs };
        }
        Ok(lhs)
    }

    fn term(&mut self, depth: usize) -> Result<ClosedForm> {
        self.depth_check(depth)?;
        let mut lhs = self.factor(depth + 1)?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.factor(depth + 1)?;
            lhs = match (c, &lhs, &rhs) {
                (b'/', ClosedForm::Int(p), ClosedForm::Int(q)) if !q.is_zero() => {
                    ClosedForm::rat(Rational::new(p.clone(), q.clone()))
                }
                (b'/', _, _) => lhs / rhs,
                _ => lhs * rhs,
            };
        }
        Ok(lhs)
    }

    fn factor(&mut self, depth: usize) -> Result<ClosedForm> {
        self.depth_check(depth)?;
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(match self.factor(depth + 1)? {
                    ClosedForm::Int(v) => ClosedForm::Int(-v),
                    other => ClosedForm::int(-1) * other,
                })
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr(depth + 1)?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                Ok(ClosedForm::Int(digits.parse().expect("digit run")))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                self.expect(b'(')?;
                let arg = self.expr(depth + 1)?;
                self.expect(b')')?;
                match name {
                    "atan" => Ok(ClosedForm::atan(arg)),
                    "ln" => Ok(ClosedForm::ln(arg)),
                    "sqrt" => match arg.as_rational() {
                        Some(q) if !q.is_negative() => Ok(ClosedForm::Sqrt(q)),
                        _ => Err(Error::parse(start, "sqrt operand must be a nonnegative rational")),
                    },
                    _ => Err(Error::parse(start, format!("unknown function `{name}`"))),
                }
            }
            Some(c) => Err(Error::parse(self.pos, format!("unexpected `{}`", c as char))),
            None => Err(Error::parse(self.pos, "unexpected end of input")),
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected `{}`", c as char)))
        }
    }
}

/// `x^e` for a nonnegative integer exponent, as an `Int` literal.
pub(crate) fn int_pow(x: &BigInt, e: usize) -> ClosedForm {
    ClosedForm::Int(num_traits::pow(x.clone(), e))
}

/// Product that drops literal factors of one.
pub(crate) fn mul1(a: ClosedForm, b: ClosedForm) -> ClosedForm {
    match (&a, &b) {
        (ClosedForm::Int(v), _) if v.is_one() => b,
        (_, ClosedForm::Int(v)) if v.is_one() => a,
        _ => a * b,
    }
}
