//! Value-preserving formula algebra: base-power rewriting and linear
//! combination of instances.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::pnotation::{ClosedForm, FormulaInstance, PFormula, Rational};
use crate::{Error, Result};

/// A formula in base `b^r` together with `scale = b^(r-1)`, so that
/// `value(original) = value(formula) / scale`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RewriteResult {
    pub formula: PFormula,
    pub scale: Rational,
}

/// Splits the summation index into residue classes mod `r`, giving an
/// equivalent series in base `b^r` of length `m r`.
pub fn rewrite_power(f: &PFormula, r: u32) -> Result<RewriteResult> {
    f.validate()?;
    if f.s != 1 {
        return Err(Error::UnsupportedExponent(f.s));
    }
    if r == 0 {
        return Err(Error::Domain("rewrite power must be at least 1".into()));
    }
    let r = r as usize;
    let mut a = Vec::with_capacity(f.m * r);
    for t in 0..r {
        let w = num_traits::pow(f.b.clone(), r - 1 - t);
        a.extend(f.a.iter().map(|x| x * &w));
    }
    let scale = num_traits::pow(f.b.clone(), r - 1);
    Ok(RewriteResult {
        formula: PFormula { s: 1, b: num_traits::pow(f.b.clone(), r), m: f.m * r, a },
        scale: Rational::from_int(scale),
    })
}

/// Rewrites an instance's formula, moving the scale into the prefactor.
pub fn rewrite_instance(inst: &FormulaInstance, r: u32) -> Result<FormulaInstance> {
    let rw = rewrite_power(&inst.formula, r)?;
    Ok(FormulaInstance {
        family_id: inst.family_id.clone(),
        n: inst.n,
        prefactor: &inst.prefactor / &rw.scale,
        formula: rw.formula,
        closed_form: inst.closed_form.clone(),
    })
}

/// Rewrites both instances to the smallest common base and length, if one
/// exists with powers up to 16.
pub fn align(i1: &FormulaInstance, i2: &FormulaInstance) -> Result<(FormulaInstance, FormulaInstance)> {
    let (f1, f2) = (&i1.formula, &i2.formula);
    if f1.same_shape(f2) {
        return Ok((i1.clone(), i2.clone()));
    }
    if f1.s == f2.s {
        for total in 2..=32u32 {
            for r1 in 1..total.min(17) {
                let r2 = total - r1;
                if r2 > 16 || f1.m * r1 as usize != f2.m * r2 as usize {
                    continue;
                }
                if num_traits::pow(f1.b.clone(), r1 as usize) == num_traits::pow(f2.b.clone(), r2 as usize) {
                    return Ok((rewrite_instance(i1, r1)?, rewrite_instance(i2, r2)?));
                }
            }
        }
    }
    Err(shape_mismatch(f1, f2))
}

fn shape_mismatch(f1: &PFormula, f2: &PFormula) -> Error {
    Error::ShapeMismatch(format!(
        "(s,b,m) = ({},{},{}) vs ({},{},{})",
        f1.s, f1.b, f1.m, f2.s, f2.b, f2.m
    ))
}

/// `c1 * i1 + c2 * i2`, with the coefficient vector reduced to coprime
/// integers whose first nonzero entry is positive.
pub fn combine(
    i1: &FormulaInstance,
    i2: &FormulaInstance,
    c1: &Rational,
    c2: &Rational,
) -> Result<FormulaInstance> {
    let (f1, f2) = (&i1.formula, &i2.formula);
    if !f1.same_shape(f2) {
        return Err(shape_mismatch(f1, f2));
    }
    let w1 = c1 * &i1.prefactor;
    let w2 = c2 * &i2.prefactor;
    let coeffs: Vec<Rational> = f1
        .a
        .iter()
        .zip(&f2.a)
        .map(|(x, y)| &w1 * &Rational::from_int(x.clone()) + &w2 * &Rational::from_int(y.clone()))
        .collect();
    let (content, a) = extract_content(&coeffs);
    Ok(FormulaInstance {
        family_id: format!("({c1})*{}+({c2})*{}", i1.family_id, i2.family_id),
        n: i1.n,
        prefactor: content,
        formula: PFormula { s: f1.s, b: f1.b.clone(), m: f1.m, a },
        closed_form: scaled(c1, &i1.closed_form) + scaled(c2, &i2.closed_form),
    })
}

fn scaled(c: &Rational, e: &ClosedForm) -> ClosedForm {
    if c.is_integer() && c.numer().is_one() {
        e.clone()
    } else {
        ClosedForm::rat(c.clone()) * e.clone()
    }
}

/// Splits rational coefficients as `content * integers`, the integers coprime
/// with a positive leading entry. An all-zero vector has content zero.
fn extract_content(q: &[Rational]) -> (Rational, Vec<BigInt>) {
    let Some(lead) = q.iter().find(|x| !x.is_zero()) else {
        return (Rational::zero(), vec![BigInt::zero(); q.len()]);
    };
    let den = q.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = q.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    let mut g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if lead.is_negative() {
        g = -g;
    }
    let a = ints.iter().map(|x| x / &g).collect();
    (Rational::new(g, den), a)
}
