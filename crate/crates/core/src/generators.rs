//! The registry of parameterized BBP-type families.
//!
//! Every family comes from one of two generator identities, valid for
//! `|p| < 1`:
//!
//! ```text
//!   atan(p sin x / (1 - p cos x))  = sum_{k>=1} p^k sin(kx) / k
//!   -1/2 ln(1 - 2 p cos x + p^2)   = sum_{k>=1} p^k cos(kx) / k
//! ```
//!
//! specialised at `x` in `{pi/2, pi/3, pi/4, pi/6}` with `p` a rational or
//! surd multiple of `1/n`. Each [`FamilyDescriptor`] asserts
//! `closed_form(n) = prefactor(n) * P(1, base(n), m, coefficients(n))` for
//! every integer `n >= n_min`.
//!
//! | label | id               | base      | m |
//! |-------|------------------|-----------|---|
//! | A1    | atan.pi2.sqrt    | n^2       | 4 |
//! | A2    | atan.pi2.alt     | -n        | 2 |
//! | A3    | atan.pi3.minus   | -n^3      | 3 |
//! | A4    | atan.pi3.plus    | n^3       | 3 |
//! | A5    | atan.pi4.minus   | 16 n^8    | 8 |
//! | A6    | atan.pi4.plus    | 16 n^8    | 8 |
//! | A7    | atan.pi4.sum     | n^4       | 8 |
//! | A8    | atan.pi6.minus   | -27 n^6   | 6 |
//! | A9    | atan.pi6.plus    | -27 n^6   | 6 |
//! | A10   | atan.pi6.sum     | -n^3      | 6 |
//! | L1    | log.pi2.plus     | n^2       | 2 |
//! | L2    | log.pi2.minus    | n^2       | 2 |
//! | L3    | log.pi2.sum      | n         | 1 |
//! | L4    | log.pi2.ratio    | n         | 2 |
//! | L5    | log.pi3.minus    | -n^3      | 3 |
//! | L6    | log.pi3.plus     | n^3       | 3 |
//! | L7    | log.pi4.minus    | -4 n^4    | 4 |
//! | L8    | log.pi4.plus     | -4 n^4    | 4 |
//! | L9    | log.pi4.ratio    | -n^2      | 4 |
//! | L10   | log.pi6.minus    | -27 n^6   | 6 |
//! | L11   | log.pi6.plus     | -27 n^6   | 6 |
//! | L12   | log.pi6.ratio    | -n^3      | 6 |

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::pnotation::{int_pow, mul1};
use crate::pnotation::{ClosedForm, FormulaInstance, PFormula, Rational};
use crate::series_eval::eval_closed;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionKind {
    Arctan,
    Log,
}

impl fmt::Display for FunctionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FunctionKind::Arctan => "arctan",
            FunctionKind::Log => "log",
        })
    }
}

#[derive(Serialize)]
pub struct FamilyDescriptor {
    pub id: &'static str,
    pub label: &'static str,
    pub kind: FunctionKind,
    pub n_min: u64,
    pub m: usize,
    pub closed_template: &'static str,
    pub prefactor_template: &'static str,
    pub formula_template: &'static str,
    #[serde(skip)]
    base: fn(&BigInt) -> BigInt,
    #[serde(skip)]
    coefficients: fn(&BigInt) -> Vec<BigInt>,
    #[serde(skip)]
    prefactor: fn(&BigInt) -> Rational,
    #[serde(skip)]
    closed_form: fn(&BigInt) -> ClosedForm,
}

impl FamilyDescriptor {
    pub fn base(&self, n: u64) -> BigInt {
        (self.base)(&BigInt::from(n))
    }

    pub fn coefficients(&self, n: u64) -> Vec<BigInt> {
        (self.coefficients)(&BigInt::from(n))
    }

    pub fn prefactor(&self, n: u64) -> Rational {
        (self.prefactor)(&BigInt::from(n))
    }

    pub fn closed_form(&self, n: u64) -> ClosedForm {
        (self.closed_form)(&BigInt::from(n))
    }

    pub fn formula(&self, n: u64) -> PFormula {
        PFormula {
            s: 1,
            b: self.base(n),
            m: self.m,
            a: self.coefficients(n),
        }
    }
}

impl fmt::Debug for FamilyDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FamilyDescriptor")
            .field("id", &self.id)
            .field("label", &self.label)
            .field("n_min", &self.n_min)
            .finish_non_exhaustive()
    }
}

fn pw(n: &BigInt, e: usize) -> BigInt {
    num_traits::pow(n.clone(), e)
}

fn k(v: i64) -> BigInt {
    BigInt::from(v)
}

fn q(num: BigInt, den: BigInt) -> Rational {
    Rational::new(num, den)
}

fn int(v: BigInt) -> ClosedForm {
    ClosedForm::Int(v)
}

fn sqrt(v: &BigInt) -> ClosedForm {
    ClosedForm::sqrt(Rational::from_int(v.clone()))
}

fn atan(x: ClosedForm) -> ClosedForm {
    ClosedForm::atan(x)
}

fn ln(x: ClosedForm) -> ClosedForm {
    ClosedForm::ln(x)
}

fn ln_ratio(num: BigInt, den: BigInt) -> ClosedForm {
    ClosedForm::ln(ClosedForm::rat(Rational::new(num, den)))
}

/// Quotient that drops a literal divisor of one.
fn div1(a: ClosedForm, b: ClosedForm) -> ClosedForm {
    match &b {
        ClosedForm::Int(v) if v.is_one() => a,
        _ => a / b,
    }
}

/// `(n + sqrt(c) sqrt(n) + 1) / (n - sqrt(c) sqrt(n) + 1)`
fn surd_ratio(n: &BigInt, c: i64) -> ClosedForm {
    let cross = || sqrt(&k(c)) * sqrt(n);
    let num = int(n.clone()) + cross() + int(k(1));
    let den = int(n.clone()) - cross() + int(k(1));
    num / den
}

static FAMILIES: [FamilyDescriptor; 22] = [
    FamilyDescriptor {
        id: "atan.pi2.sqrt",
        label: "A1",
        kind: FunctionKind::Arctan,
        n_min: 2,
        m: 4,
        closed_template: "sqrt(n)*atan(1/sqrt(n))",
        prefactor_template: "1/n",
        formula_template: "P(1,n^2,4,(n,0,-1,0))",
        base: |n| pw(n, 2),
        coefficients: |n| vec![n.clone(), k(0), k(-1), k(0)],
        prefactor: |n| q(k(1), n.clone()),
        closed_form: |n| sqrt(n) * atan(int(k(1)) / sqrt(n)),
    },
    FamilyDescriptor {
        id: "atan.pi2.alt",
        label: "A2",
        kind: FunctionKind::Arctan,
        n_min: 2,
        m: 2,
        closed_template: "sqrt(n)*atan(1/sqrt(n))",
        prefactor_template: "1",
        formula_template: "P(1,-n,2,(1,0))",
        base: |n| -n,
        coefficients: |_| vec![k(1), k(0)],
        prefactor: |_| Rational::one(),
        closed_form: |n| sqrt(n) * atan(int(k(1)) / sqrt(n)),
    },
    FamilyDescriptor {
        id: "atan.pi3.minus",
        label: "A3",
        kind: FunctionKind::Arctan,
        n_min: 2,
        m: 3,
        closed_template: "n^2*sqrt(3)*atan(sqrt(3)/(2n-1))",
        prefactor_template: "3/2",
        formula_template: "P(1,-n^3,3,(n,1,0))",
        base: |n| -pw(n, 3),
        coefficients: |n| vec![n.clone(), k(1), k(0)],
        prefactor: |_| q(k(3), k(2)),
        closed_form: |n| int(pw(n, 2)) * sqrt(&k(3)) * atan(sqrt(&k(3)) / int(2 * n - 1)),
    },
    FamilyDescriptor {
        id: "atan.pi3.plus",
        label: "A4",
        kind: FunctionKind::Arctan,
        n_min: 2,
        m: 3,
        closed_template: "n^2*sqrt(3)*atan(sqrt(3)/(2n+1))",
        prefactor_template: "3/2",
        formula_template: "P(1,n^3,3,(n,-1,0))",
        base: |n| pw(n, 3),
        coefficients: |n| vec![n.clone(), k(-1), k(0)],
        prefactor: |_| q(k(3), k(2)),
        closed_form: |n| int(pw(n, 2)) * sqrt(&k(3)) * atan(sqrt(&k(3)) / int(2 * n + 1)),
    },
    FamilyDescriptor {
        id: "atan.pi4.minus",
        label: "A5",
        kind: FunctionKind::Arctan,
        n_min: 1,
        m: 8,
        closed_template: "n^7*atan(1/(2n-1))",
        prefactor_template: "1/16",
        formula_template: "P(1,16n^8,8,(8n^6,8n^5,4n^4,0,-2n^2,-2n,-1,0))",
        base: |n| 16 * pw(n, 8),
        coefficients: |n| {
            vec![8 * pw(n, 6), 8 * pw(n, 5), 4 * pw(n, 4), k(0), -2 * pw(n, 2), -2 * n, k(-1), k(0)]
        },
        prefactor: |_| q(k(1), k(16)),
        closed_form: |n| mul1(int_pow(n, 7), atan(ClosedForm::rat(q(k(1), 2 * n - 1)))),
    },
    FamilyDescriptor {
        id: "atan.pi4.plus",
        label: "A6",
        kind: FunctionKind::Arctan,
        n_min: 1,
        m: 8,
        closed_template: "n^7*atan(1/(2n+1))",
        prefactor_template: "1/16",
        formula_template: "P(1,16n^8,8,(8n^6,-8n^5,4n^4,0,-2n^2,2n,-1,0))",
        base: |n| 16 * pw(n, 8),
        coefficients: |n| {
            vec![8 * pw(n, 6), -8 * pw(n, 5), 4 * pw(n, 4), k(0), -2 * pw(n, 2), 2 * n, k(-1), k(0)]
        },
        prefactor: |_| q(k(1), k(16)),
        closed_form: |n| mul1(int_pow(n, 7), atan(ClosedForm::rat(q(k(1), 2 * n + 1)))),
    },
    FamilyDescriptor {
        id: "atan.pi4.sum",
        label: "A7",
        kind: FunctionKind::Arctan,
        n_min: 2,
        m: 8,
        closed_template: "n^3*sqrt(2n)*atan(sqrt(2n)/(n-1))",
        prefactor_template: "2",
        formula_template: "P(1,n^4,8,(n^3,0,n^2,0,-n,0,-1,0))",
        base: |n| pw(n, 4),
        coefficients: |n| vec![pw(n, 3), k(0), pw(n, 2), k(0), -n, k(0), k(-1), k(0)],
        prefactor: |_| Rational::from_int(2),
        closed_form: |n| {
            int_pow(n, 3) * sqrt(&(2 * n)) * atan(div1(sqrt(&(2 * n)), int(n - 1)))
        },
    },
    FamilyDescriptor {
        id: "atan.pi6.minus",
        label: "A8",
        kind: FunctionKind::Arctan,
        n_min: 1,
        m: 6,
        closed_template: "27n^5*sqrt(3)*atan(1/(sqrt(3)*(2n-1)))",
        prefactor_template: "3/2",
        formula_template: "P(1,-27n^6,6,(9n^4,9n^3,6n^2,3n,1,0))",
        base: |n| -27 * pw(n, 6),
        coefficients: |n| vec![9 * pw(n, 4), 9 * pw(n, 3), 6 * pw(n, 2), 3 * n, k(1), k(0)],
        prefactor: |_| q(k(3), k(2)),
        closed_form: |n| {
            int(27 * pw(n, 5)) * sqrt(&k(3)) * atan(int(k(1)) / mul1(sqrt(&k(3)), int(2 * n - 1)))
        },
    },
    FamilyDescriptor {
        id: "atan.pi6.plus",
        label: "A9",
        kind: FunctionKind::Arctan,
        n_min: 1,
        m: 6,
        closed_template: "27n^5*sqrt(3)*atan(1/(sqrt(3)*(2n+1)))",
        prefactor_template: "3/2",
        formula_template: "P(1,-27n^6,6,(9n^4,-9n^3,6n^2,-3n,1,0))",
        base: |n| -27 * pw(n, 6),
        coefficients: |n| vec![9 * pw(n, 4), -9 * pw(n, 3), 6 * pw(n, 2), -3 * n, k(1), k(0)],
        prefactor: |_| q(k(3), k(2)),
        closed_form: |n| {
            int(27 * pw(n, 5)) * sqrt(&k(3)) * atan(int(k(1)) / (sqrt(&k(3)) * int(2 * n + 1)))
        },
    },
    FamilyDescriptor {
        id: "atan.pi6.sum",
        label: "A10",
        kind: FunctionKind::Arctan,
        n_min: 2,
        m: 6,
        closed_template: "n^2*sqrt(n)*atan(sqrt(n)/(n-1))",
        prefactor_template: "1",
        formula_template: "P(1,-n^3,6,(n^2,0,2n,0,1,0))",
        base: |n| -pw(n, 3),
        coefficients: |n| vec![pw(n, 2), k(0), 2 * n, k(0), k(1), k(0)],
        prefactor: |_| Rational::one(),
        closed_form: |n| int_pow(n, 2) * sqrt(n) * atan(div1(sqrt(n), int(n - 1))),
    },
    FamilyDescriptor {
        id: "log.pi2.plus",
        label: "L1",
        kind: FunctionKind::Log,
        n_min: 2,
        m: 2,
        closed_template: "ln((n+1)/n)",
        prefactor_template: "1/n^2",
        formula_template: "P(1,n^2,2,(n,-1))",
        base: |n| pw(n, 2),
        coefficients: |n| vec![n.clone(), k(-1)],
        prefactor: |n| q(k(1), pw(n, 2)),
        closed_form: |n| ln_ratio(n + 1, n.clone()),
    },
    FamilyDescriptor {
        id: "log.pi2.minus",
        label: "L2",
        kind: FunctionKind::Log,
        n_min: 2,
        m: 2,
        closed_template: "ln((n-1)/n)",
        prefactor_template: "-1/n^2",
        formula_template: "P(1,n^2,2,(n,1))",
        base: |n| pw(n, 2),
        coefficients: |n| vec![n.clone(), k(1)],
        prefactor: |n| q(k(-1), pw(n, 2)),
        closed_form: |n| ln_ratio(n - 1, n.clone()),
    },
    FamilyDescriptor {
        id: "log.pi2.sum",
        label: "L3",
        kind: FunctionKind::Log,
        n_min: 2,
        m: 1,
        closed_template: "ln((n-1)/n)",
        prefactor_template: "-1/n",
        formula_template: "P(1,n,1,(1))",
        base: |n| n.clone(),
        coefficients: |_| vec![k(1)],
        prefactor: |n| q(k(-1), n.clone()),
        closed_form: |n| ln_ratio(n - 1, n.clone()),
    },
    FamilyDescriptor {
        id: "log.pi2.ratio",
        label: "L4",
        kind: FunctionKind::Log,
        n_min: 2,
        m: 2,
        closed_template: "sqrt(n)*ln((sqrt(n)+1)/(sqrt(n)-1))",
        prefactor_template: "2",
        formula_template: "P(1,n,2,(1,0))",
        base: |n| n.clone(),
        coefficients: |_| vec![k(1), k(0)],
        prefactor: |_| Rational::from_int(2),
        closed_form: |n| {
            sqrt(n) * ln((sqrt(n) + int(k(1))) / (sqrt(n) - int(k(1))))
        },
    },
    FamilyDescriptor {
        id: "log.pi3.minus",
        label: "L5",
        kind: FunctionKind::Log,
        n_min: 2,
        m: 3,
        closed_template: "ln((n^2-n+1)/n^2)",
        prefactor_template: "-1/n^3",
        formula_template: "P(1,-n^3,3,(n^2,-n,-2))",
        base: |n| -pw(n, 3),
        coefficients: |n| vec![pw(n, 2), -n, k(-2)],
        prefactor: |n| q(k(-1), pw(n, 3)),
        closed_form: |n| ln_ratio(pw(n, 2) - n + 1, pw(n, 2)),
    },
    FamilyDescriptor {
        id: "log.pi3.plus",
        label: "L6",
        kind: FunctionKind::Log,
        n_min: 2,
        m: 3,
        closed_template: "ln((n^2+n+1)/n^2)",
        prefactor_template: "1/n^3",
        formula_template: "P(1,n^3,3,(n^2,n,-2))",
        base: |n| pw(n, 3),
        coefficients: |n| vec![pw(n, 2), n.clone(), k(-2)],
        prefactor: |n| q(k(1), pw(n, 3)),
        closed_form: |n| ln_ratio(pw(n, 2) + n + 1, pw(n, 2)),
    },
    FamilyDescriptor {
        id: "log.pi4.minus",
        label: "L7",
        kind: FunctionKind::Log,
        n_min: 1,
        m: 4,
        closed_template: "ln((2n^2-2n+1)/(2n^2))",
        prefactor_template: "-1/(2n^4)",
        formula_template: "P(1,-4n^4,4,(2n^3,0,-n,-1))",
        base: |n| -4 * pw(n, 4),
        coefficients: |n| vec![2 * pw(n, 3), k(0), -n, k(-1)],
        prefactor: |n| q(k(-1), 2 * pw(n, 4)),
        closed_form: |n| ln_ratio(2 * pw(n, 2) - 2 * n + 1, 2 * pw(n, 2)),
    },
    FamilyDescriptor {
        id: "log.pi4.plus",
        label: "L8",
        kind: FunctionKind::Log,
        n_min: 1,
        m: 4,
        closed_template: "ln((2n^2+2n+1)/(2n^2))",
        prefactor_template: "1/(2n^4)",
        formula_template: "P(1,-4n^4,4,(2n^3,0,-n,1))",
        base: |n| -4 * pw(n, 4),
        coefficients: |n| vec![2 * pw(n, 3), k(0), -n, k(1)],
        prefactor: |n| q(k(1), 2 * pw(n, 4)),
        closed_form: |n| ln_ratio(2 * pw(n, 2) + 2 * n + 1, 2 * pw(n, 2)),
    },
    FamilyDescriptor {
        id: "log.pi4.ratio",
        label: "L9",
        kind: FunctionKind::Log,
        n_min: 2,
        m: 4,
        closed_template: "n*sqrt(n)/sqrt(2)*ln((n+sqrt(2)*sqrt(n)+1)/(n-sqrt(2)*sqrt(n)+1))",
        prefactor_template: "2",
        formula_template: "P(1,-n^2,4,(n,0,-1,0))",
        base: |n| -pw(n, 2),
        coefficients: |n| vec![n.clone(), k(0), k(-1), k(0)],
        prefactor: |_| Rational::from_int(2),
        closed_form: |n| int(n.clone()) * sqrt(n) / sqrt(&k(2)) * ln(surd_ratio(n, 2)),
    },
    FamilyDescriptor {
        id: "log.pi6.minus",
        label: "L10",
        kind: FunctionKind::Log,
        n_min: 1,
        m: 6,
        closed_template: "ln((3n^2-3n+1)/(3n^2))",
        prefactor_template: "-1/(27n^6)",
        formula_template: "P(1,-27n^6,6,(27n^5,9n^4,0,-3n^2,-3n,-2))",
        base: |n| -27 * pw(n, 6),
        coefficients: |n| vec![27 * pw(n, 5), 9 * pw(n, 4), k(0), -3 * pw(n, 2), -3 * n, k(-2)],
        prefactor: |n| q(k(-1), 27 * pw(n, 6)),
        closed_form: |n| ln_ratio(3 * pw(n, 2) - 3 * n + 1, 3 * pw(n, 2)),
    },
    FamilyDescriptor {
        id: "log.pi6.plus",
        label: "L11",
        kind: FunctionKind::Log,
        n_min: 1,
        m: 6,
        closed_template: "ln((3n^2+3n+1)/(3n^2))",
        prefactor_template: "1/(27n^6)",
        formula_template: "P(1,-27n^6,6,(27n^5,-9n^4,0,3n^2,-3n,2))",
        base: |n| -27 * pw(n, 6),
        coefficients: |n| vec![27 * pw(n, 5), -9 * pw(n, 4), k(0), 3 * pw(n, 2), -3 * n, k(2)],
        prefactor: |n| q(k(1), 27 * pw(n, 6)),
        closed_form: |n| ln_ratio(3 * pw(n, 2) + 3 * n + 1, 3 * pw(n, 2)),
    },
    FamilyDescriptor {
        id: "log.pi6.ratio",
        label: "L12",
        kind: FunctionKind::Log,
        n_min: 2,
        m: 6,
        closed_template: "n^2*sqrt(n)/sqrt(3)*ln((n+sqrt(3)*sqrt(n)+1)/(n-sqrt(3)*sqrt(n)+1))",
        prefactor_template: "2",
        formula_template: "P(1,-n^3,6,(n^2,0,0,0,-1,0))",
        base: |n| -pw(n, 3),
        coefficients: |n| vec![pw(n, 2), k(0), k(0), k(0), k(-1), k(0)],
        prefactor: |_| Rational::from_int(2),
        closed_form: |n| int_pow(n, 2) * sqrt(n) / sqrt(&k(3)) * ln(surd_ratio(n, 3)),
    },
];

/// All 22 families in registry order.
pub fn list_families() -> &'static [FamilyDescriptor] {
    &FAMILIES
}

/// Looks a family up by stable id (`atan.pi4.minus`) or short label (`A5`).
pub fn family(id: &str) -> Result<&'static FamilyDescriptor> {
    FAMILIES
        .iter()
        .find(|d| d.id == id || d.label.eq_ignore_ascii_case(id))
        .ok_or_else(|| Error::UnknownFamily(id.to_string()))
}

/// Grounds a family at `n`: integer coefficients, reduced prefactor and a
/// closed form whose domain has been checked.
pub fn instantiate(family_id: &str, n: u64) -> Result<FormulaInstance> {
    let d = family(family_id)?;
    if n < d.n_min {
        return Err(Error::ParameterTooSmall { n, n_min: d.n_min });
    }
    let inst = FormulaInstance {
        family_id: d.id.to_string(),
        n,
        prefactor: d.prefactor(n),
        formula: d.formula(n),
        closed_form: d.closed_form(n),
    };
    inst.validate()?;
    eval_closed(&inst.closed_form, 32)?;
    Ok(inst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn registry_shape() {
        assert_eq!(list_families().len(), 22);
        let ids: HashSet<_> = list_families().iter().map(|d| d.id).collect();
        let labels: HashSet<_> = list_families().iter().map(|d| d.label).collect();
        assert_eq!(ids.len(), 22);
        assert_eq!(labels.len(), 22);
        for d in list_families() {
            let inst = instantiate(d.id, d.n_min).unwrap();
            assert!(inst.formula.validate().is_ok(), "{}", d.id);
            assert_eq!(inst.formula.m, d.m);
            assert_eq!(inst.formula.a.len(), d.m);
        }
    }

    #[test]
    fn n_min_is_tight() {
        // below n_min the base degenerates or the closed form leaves its domain
        for d in list_families().iter().filter(|d| d.n_min > 1) {
            let degenerate_base = d.base(1).magnitude() < &num_bigint::BigUint::from(2u32);
            let bad_domain = eval_closed(&d.closed_form(1), 32).is_err();
            assert!(degenerate_base || bad_domain, "{}", d.id);
            assert_eq!(
                instantiate(d.id, 1),
                Err(Error::ParameterTooSmall { n: 1, n_min: d.n_min })
            );
        }
    }

    #[test]
    fn instance_examples() {
        let i = instantiate("A1", 2).unwrap();
        assert_eq!(i.prefactor, Rational::new(1, 2));
        assert_eq!(i.formula.to_string(), "P(1,4,4,(2,0,-1,0))");
        assert_eq!(i.closed_form.to_string(), "sqrt(2)*atan(1/sqrt(2))");

        let i = instantiate("atan.pi4.minus", 1).unwrap();
        assert_eq!(i.prefactor, Rational::new(1, 16));
        assert_eq!(i.formula.to_string(), "P(1,16,8,(8,8,4,0,-2,-2,-1,0))");
        assert_eq!(i.closed_form.to_string(), "atan(1)");

        let i = instantiate("L3", 10).unwrap();
        assert_eq!(i.prefactor, Rational::new(-1, 10));
        assert_eq!(i.formula.to_string(), "P(1,10,1,(1))");
        assert_eq!(i.closed_form.to_string(), "ln(9/10)");

        assert_eq!(instantiate("A1", 1), Err(Error::ParameterTooSmall { n: 1, n_min: 2 }));
        assert!(matches!(instantiate("nope", 3), Err(Error::UnknownFamily(_))));
    }

    #[test]
    fn closed_forms_print_and_reparse() {
        for d in list_families() {
            for n in d.n_min..d.n_min + 3 {
                let cf = d.closed_form(n);
                let text = cf.to_string();
                let back: ClosedForm = text.parse().unwrap();
                assert_eq!(back.to_string(), text, "{} n={n}", d.id);
                let a = eval_closed(&cf, 96).unwrap();
                let b = eval_closed(&back, 96).unwrap();
                assert!(a.sub(&b, 96).abs() <= crate::BigFixed::pow2(-91));
            }
        }
    }

    #[test]
    fn coefficients_are_integral_for_small_n() {
        // coefficient rules are integer polynomials; spot-check growth at n = 25
        let d = family("L10").unwrap();
        let a = d.coefficients(25);
        assert_eq!(a[0], BigInt::from(27u64 * 25u64.pow(5)));
        assert_eq!(d.base(25), BigInt::from(-27i64 * 25i64.pow(6)));
    }
}
