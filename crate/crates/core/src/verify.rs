//! Numerical certification of the generator identities, every registry
//! family, the rewrite and combination equivalences, and cross-checks against
//! independently written expressions for known constants.
//!
//! Checks never abort: a failing identity (or one that cannot even be
//! evaluated) becomes a failing [`VerifyReport`].

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::bigfixed::{atan_ref, ln_ref, pi_ref, shr_trunc, BigFixed};
use crate::generators::{instantiate, list_families};
use crate::pnotation::{ClosedForm, FormulaInstance, PFormula, Rational};
use crate::series_eval::{eval_closed, eval_p};
use crate::transforms::{combine, rewrite_power};
use crate::{Error, Result};

/// Guard bits for the generator checks.
const GUARD: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Angle {
    /// `q * pi`
    PiMultiple(Rational),
    Radians(Rational),
}

impl Angle {
    fn to_fixed(&self, w: u32) -> BigFixed {
        match self {
            Angle::PiMultiple(q) => pi_ref(w + 8).mul_rational(q, w),
            Angle::Radians(q) => BigFixed::from_rational(q, w),
        }
    }

    fn label(&self) -> String {
        match self {
            Angle::PiMultiple(q) if q.numer().is_one() => format!("pi/{}", q.denom()),
            Angle::PiMultiple(q) => format!("({q})pi"),
            Angle::Radians(q) => q.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorPoint {
    pub p: Rational,
    pub x: Angle,
}

impl GeneratorPoint {
    pub fn new(p: Rational, x: Angle) -> Result<Self> {
        if p.abs() >= Rational::one() {
            return Err(Error::Domain(format!("generator needs |p| < 1, got {p}")));
        }
        Ok(GeneratorPoint { p, x })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub subject: String,
    pub n: Option<u64>,
    pub residual: BigFixed,
    pub tolerance: BigFixed,
    pub pass: bool,
    pub precision: u32,
    pub terms: usize,
    /// Set when the check could not be evaluated at all.
    pub error: Option<String>,
}

impl VerifyReport {
    fn new(subject: String, n: Option<u64>, residual: BigFixed, tolerance: BigFixed, precision: u32, terms: usize) -> Self {
        let residual = residual.abs();
        VerifyReport {
            subject,
            n,
            pass: residual < tolerance,
            residual,
            tolerance,
            precision,
            terms,
            error: None,
        }
    }

    fn failed(subject: String, n: Option<u64>, precision: u32, e: Error) -> Self {
        VerifyReport {
            subject,
            n,
            residual: BigFixed::pow2(0),
            tolerance: BigFixed::pow2(-(precision as i64) + 8),
            pass: false,
            precision,
            terms: 0,
            error: Some(e.to_string()),
        }
    }

    /// An exact (integer or rational) equality: residual 0 when it holds, 1
    /// otherwise.
    fn exact(subject: String, n: Option<u64>, holds: bool, precision: u32) -> Self {
        let residual = if holds { BigFixed::zero(0) } else { BigFixed::pow2(0) };
        VerifyReport::new(subject, n, residual, BigFixed::pow2(-(precision as i64) + 8), precision, 0)
    }

    /// `log2 |residual|`, `None` for an exact zero.
    pub fn residual_log2(&self) -> Option<f64> {
        self.residual.log2_abs()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

impl Serialize for VerifyReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("VerifyReport", if self.error.is_some() { 6 } else { 5 })?;
        st.serialize_field("subject", &self.subject)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("F", &self.precision)?;
        // two decimals keep the output byte-stable and readable
        st.serialize_field("residual_log2", &self.residual_log2().map(|l| (l * 100.0).round() / 100.0))?;
        st.serialize_field("pass", &self.pass)?;
        if let Some(e) = &self.error {
            st.serialize_field("error", e)?;
        }
        st.end()
    }
}

/// `(sin x, cos x)` at `w` fractional bits: Taylor series at `x / 2^8`
/// followed by eight angle doublings.
fn sin_cos(x: &BigFixed, w: u32) -> (BigFixed, BigFixed) {
    const HALVINGS: u32 = 8;
    let wp = w + 2 * HALVINGS + 16;
    let y = shr_trunc(x.with_frac_bits(wp).mantissa(), HALVINGS);
    let one = BigInt::one() << wp as usize;
    let y2 = shr_trunc(&(&y * &y), wp);
    let (mut s, mut c) = (BigInt::zero(), BigInt::zero());
    let (mut ts, mut tc) = (y.clone(), one.clone());
    let mut i = 1u64;
    while !ts.is_zero() || !tc.is_zero() {
        s += &ts;
        c += &tc;
        ts = -shr_trunc(&(&ts * &y2), wp) / BigInt::from((2 * i) * (2 * i + 1));
        tc = -shr_trunc(&(&tc * &y2), wp) / BigInt::from((2 * i - 1) * (2 * i));
        i += 1;
    }
    for _ in 0..HALVINGS {
        let s2 = shr_trunc(&(&s * &c), wp - 1);
        let c2 = shr_trunc(&(&c * &c - &s * &s), wp);
        s = s2;
        c = c2;
    }
    (
        BigFixed::from_mantissa(s, wp).with_frac_bits(w),
        BigFixed::from_mantissa(c, wp).with_frac_bits(w),
    )
}

/// Smallest `K` with `|p|^(K+1) / ((K+1)(1-|p|)) < 2^-F`, and that bound.
pub fn generator_terms(p: &Rational, frac_bits: u32) -> (usize, Rational) {
    let a = p.abs();
    if a.is_zero() {
        return (0, Rational::zero());
    }
    let target = Rational::new(BigInt::one(), BigInt::one() << frac_bits as usize);
    // start from a floating-point estimate, then settle on the exact minimum
    let ratio = a.numer().to_f64().unwrap_or(f64::MAX).log2() - a.denom().to_f64().unwrap_or(f64::MAX).log2();
    let mut k = ((frac_bits as f64 / -ratio).max(0.0) as usize).saturating_sub(64);
    while tail_of(p, k) >= target {
        k += 1;
    }
    while k > 0 && tail_of(p, k - 1) < target {
        k -= 1;
    }
    (k, tail_of(p, k))
}

/// `sum_{k=1..K} p^k f_k / k` where `f_k` is `sin(kx)` or `cos(kx)`.
fn generator_series(pt: &GeneratorPoint, terms: usize, w: u32, use_sin: bool) -> BigFixed {
    let x = pt.x.to_fixed(w + 16);
    let (s1, c1) = sin_cos(&x, w + 16);
    let (s1, c1) = (s1.mantissa().clone(), c1.mantissa().clone());
    let wp = w + 16;
    let (mut s, mut c) = (s1.clone(), c1.clone());
    let (num, den) = (pt.p.numer().clone(), pt.p.denom().clone());
    let (mut pn, mut pd) = (num.clone(), den.clone());
    let mut acc = BigInt::zero();
    for k in 1..=terms {
        let f = if use_sin { &s } else { &c };
        acc += f * &pn / (&pd * BigInt::from(k));
        let s_next = shr_trunc(&(&s * &c1 + &c * &s1), wp);
        let c_next = shr_trunc(&(&c * &c1 - &s * &s1), wp);
        s = s_next;
        c = c_next;
        pn *= &num;
        pd *= &den;
    }
    BigFixed::from_mantissa(acc, wp).with_frac_bits(w)
}

fn tolerance_for(tail: &Rational, frac_bits: u32) -> BigFixed {
    let w = frac_bits + 16;
    // rounded up so the bound stays a bound
    let t = BigFixed::from_rational(tail, w).add(&BigFixed::pow2(-(w as i64)), w);
    t.add(&BigFixed::pow2(-(frac_bits as i64) + 6), w)
}

fn generator_point_parts(pt: &GeneratorPoint, w: u32) -> (BigFixed, BigFixed) {
    let x = pt.x.to_fixed(w);
    let (s, c) = sin_cos(&x, w);
    (s.mul_rational(&pt.p, w), c.mul_rational(&pt.p, w))
}

/// `atan(p sin x / (1 - p cos x))` against `sum_{k=1..K} p^k sin(kx)/k`.
pub fn check_generator_arctan(pt: &GeneratorPoint, frac_bits: u32, terms: usize) -> Result<VerifyReport> {
    let w = frac_bits + GUARD;
    let (ps, pc) = generator_point_parts(pt, w);
    let den = BigFixed::from_int(1, w).sub(&pc, w);
    if den.is_zero() {
        return Err(Error::Domain("1 - p cos x vanishes".into()));
    }
    let lhs = atan_ref(&ps.div(&den, w)?, w);
    let rhs = generator_series(pt, terms, w, true);
    let tail = tail_of(&pt.p, terms);
    Ok(VerifyReport::new(
        format!("generator.arctan(p={},x={})", pt.p, pt.x.label()),
        None,
        lhs.sub(&rhs, w),
        tolerance_for(&tail, frac_bits),
        frac_bits,
        terms,
    ))
}

/// `-1/2 ln(1 - 2p cos x + p^2)` against `sum_{k=1..K} p^k cos(kx)/k`.
pub fn check_generator_log(pt: &GeneratorPoint, frac_bits: u32, terms: usize) -> Result<VerifyReport> {
    let w = frac_bits + GUARD;
    let (_, pc) = generator_point_parts(pt, w);
    let p2 = BigFixed::from_rational(&(&pt.p * &pt.p), w);
    let arg = BigFixed::from_int(1, w).sub(&pc.shl(1), w).add(&p2, w);
    let lhs = -ln_ref(&arg, w)?.shl(-1);
    let rhs = generator_series(pt, terms, w, false);
    let tail = tail_of(&pt.p, terms);
    Ok(VerifyReport::new(
        format!("generator.log(p={},x={})", pt.p, pt.x.label()),
        None,
        lhs.sub(&rhs, w),
        tolerance_for(&tail, frac_bits),
        frac_bits,
        terms,
    ))
}

fn tail_of(p: &Rational, terms: usize) -> Rational {
    let a = p.abs();
    if a.is_zero() {
        return Rational::zero();
    }
    let k1 = terms as i32 + 1;
    &a.pow(k1) / &(&Rational::from_int(k1 as i64) * &(&Rational::one() - &a))
}

/// `|closed_form - prefactor * P|` against `2^(-F+8)`.
pub fn verify_instance(i: &FormulaInstance, frac_bits: u32) -> Result<VerifyReport> {
    let pre_bits = i.prefactor.numer().bits().saturating_sub(i.prefactor.denom().bits()) as u32;
    // compare well below the tolerance so the residual reflects real agreement
    let w = frac_bits + 64;
    let rep = eval_p(&i.formula, w + pre_bits + 2)?;
    let rhs = rep.value.mul_rational(&i.prefactor, w);
    let lhs = eval_closed(&i.closed_form, w)?;
    Ok(VerifyReport::new(
        i.family_id.clone(),
        Some(i.n),
        lhs.sub(&rhs, w),
        BigFixed::pow2(-(frac_bits as i64) + 8),
        frac_bits,
        rep.terms_used,
    ))
}

fn verify_or_report(subject: &str, n: u64, frac_bits: u32, i: Result<FormulaInstance>) -> VerifyReport {
    match i.and_then(|i| verify_instance(&i, frac_bits)) {
        Ok(mut r) => {
            r.subject = subject.to_string();
            r
        }
        Err(e) => VerifyReport::failed(subject.to_string(), Some(n), frac_bits, e),
    }
}

/// The `p` values and angles of the generator grid.
pub fn generator_grid() -> Vec<GeneratorPoint> {
    let ps = [1, 3, 5, 7, 9].iter().flat_map(|&k| [Rational::new(k, 10), Rational::new(-k, 10)]);
    let xs = [
        Angle::PiMultiple(Rational::new(1, 2)),
        Angle::PiMultiple(Rational::new(1, 3)),
        Angle::PiMultiple(Rational::new(1, 4)),
        Angle::PiMultiple(Rational::new(1, 6)),
        Angle::Radians(Rational::one()),
        Angle::Radians(Rational::new(5, 2)),
    ];
    let mut out = Vec::new();
    for p in ps {
        for x in &xs {
            out.push(GeneratorPoint::new(p.clone(), x.clone()).expect("grid p is inside the unit disc"));
        }
    }
    out
}

/// One independently checkable identity.
enum Check {
    Family { id: &'static str, n: u64 },
    Cross { subject: &'static str, id: &'static str, n: u64, prefactor: Option<Rational>, closed: String },
    Summary { label: &'static str, n: u64 },
    RewriteA1 { n: u64 },
    RewriteA2 { n: u64 },
    SumA8A9 { n: u64, numeric: bool },
    SumA5A6 { n: u64, numeric: bool },
    DiffA8A9 { n: u64 },
    SumL1L2 { n: u64 },
    Generator { pt: GeneratorPoint, arctan: bool },
}

fn family_checks(id: &'static str, n_min: u64, n_max: u64) -> impl Iterator<Item = Check> {
    (n_min..=n_max).map(move |n| Check::Family { id, n })
}

fn cross_checks() -> Vec<Check> {
    // pi written with Machin's formula, kept apart from the registry's trees
    const PI: &str = "(16*atan(1/5)-4*atan(1/239))";
    let with_pi = |pre: &str, post: &str| format!("{pre}{PI}{post}");
    let cross = |subject, id, n, closed: &str| Check::Cross { subject, id, n, prefactor: None, closed: closed.into() };
    vec![
        cross("crosscheck.pi/4", "A5", 1, "4*atan(1/5)-atan(1/239)"),
        Check::Cross {
            subject: "crosscheck.pi",
            id: "A5",
            n: 1,
            prefactor: Some(Rational::new(1, 4)),
            closed: PI.into(),
        },
        cross("crosscheck.27sqrt3*pi/6", "A8", 1, &with_pi("27*sqrt(3)*", "/6")),
        cross("crosscheck.4sqrt3*pi/6", "A3", 2, &with_pi("4*sqrt(3)*", "/6")),
        cross("crosscheck.9sqrt3*atan(sqrt3/7)", "A4", 3, &with_pi("9*sqrt(3)*(", "/6-atan(sqrt(1/12)))")),
        cross("crosscheck.16atan2", "A7", 2, "16*(2*(4*atan(1/5)-atan(1/239))-atan(1/2))"),
        cross("crosscheck.2ln3", "L4", 4, "ln(9)"),
        cross("crosscheck.3ln2", "L4", 9, "ln(8)"),
        cross("crosscheck.2sqrt2*ln(1+sqrt2)", "L4", 2, "2*sqrt(2)*ln(1+sqrt(2))"),
        cross("crosscheck.ln(9/10)", "L3", 10, "2*ln(3)-ln(2)-ln(5)"),
        cross("crosscheck.-ln2", "L3", 2, "-ln(2)"),
        cross("crosscheck.2ln5", "L9", 2, "2*ln(5)"),
        Check::Cross {
            subject: "crosscheck.ln5",
            id: "L9",
            n: 2,
            prefactor: Some(Rational::one()),
            closed: "ln(5)".into(),
        },
        cross("crosscheck.9ln7", "L12", 3, "9*ln(7)"),
    ]
}

/// The alternative forms used in the family summary: the pi/6 arctangent
/// pair with `9n^5 sqrt(3)` and prefactor `1/2`, and the pi/6 logarithm pair
/// written with a single `+-` sign template.
fn summary_instance(label: &str, n: u64) -> Result<FormulaInstance> {
    let nb = BigInt::from(n);
    let pw = |e: usize| num_traits::pow(nb.clone(), e);
    let plus = matches!(label, "A9" | "L11");
    let sign = |v: BigInt, s: bool| if s { v } else { -v };
    let (prefactor, a, closed) = match label {
        "A8" | "A9" => {
            let inst = instantiate(label, n)?;
            let closed = format!(
                "{}*sqrt(3)*atan(1/(sqrt(3)*{}))",
                9 * pw(5),
                if plus { 2 * &nb + 1 } else { 2 * &nb - 1 }
            );
            (Rational::new(1, 2), inst.formula.a, closed)
        }
        _ => {
            // (27n^5, -+9n^4, 0, +-3n^2, -3n, +-2), upper sign for the plus family
            let a = vec![
                27 * pw(5),
                sign(9 * pw(4), !plus),
                BigInt::zero(),
                sign(3 * pw(2), plus),
                -3 * &nb,
                sign(BigInt::from(2), plus),
            ];
            let pre = Rational::new(if plus { 1 } else { -1 }, 27 * pw(6));
            let num = if plus { 3 * pw(2) + 3 * &nb + 1 } else { 3 * pw(2) - 3 * &nb + 1 };
            (pre, a, format!("ln({}/{})", num, 3 * pw(2)))
        }
    };
    let formula = PFormula::new(1, -27 * pw(6), a)?;
    Ok(FormulaInstance {
        family_id: format!("summary.{label}"),
        n,
        prefactor,
        formula,
        closed_form: closed.parse()?,
    })
}

fn run_check(c: &Check, f: u32) -> VerifyReport {
    match c {
        Check::Family { id, n } => verify_or_report(id, *n, f, instantiate(id, *n)),
        Check::Cross { subject, id, n, prefactor, closed } => {
            let i = instantiate(id, *n).and_then(|mut i| {
                i.closed_form = closed.parse::<ClosedForm>()?;
                if let Some(p) = prefactor {
                    i.prefactor = p.clone();
                }
                Ok(i)
            });
            verify_or_report(subject, *n, f, i)
        }
        Check::Summary { label, n } => {
            verify_or_report(&format!("summary.{label}"), *n, f, summary_instance(label, *n))
        }
        Check::RewriteA1 { n } => {
            let subject = "rewrite.atan.pi2.sqrt(r=2)".to_string();
            let r = (|| -> Result<bool> {
                let src = instantiate("A1", *n)?.formula;
                let rw = rewrite_power(&src, 2)?;
                let nb = BigInt::from(*n);
                let pw = |e: usize| num_traits::pow(nb.clone(), e);
                let z = BigInt::zero;
                let expected = PFormula::new(1, pw(4), vec![pw(3), z(), -pw(2), z(), nb.clone(), z(), -BigInt::one(), z()])?;
                let mut ok = rw.formula == expected && rw.scale == Rational::from_int(pw(2));
                for k in 0..=8 {
                    ok &= src.partial_sum_exact(2 * k)? * rw.scale.clone() == rw.formula.partial_sum_exact(k)?;
                }
                Ok(ok)
            })();
            exact_or_failed(subject, *n, f, r)
        }
        Check::RewriteA2 { n } => {
            let subject = "rewrite.atan.pi2.alt(r=2)=-atan.pi2.sqrt".to_string();
            let r = (|| -> Result<bool> {
                let rw = rewrite_power(&instantiate("A2", *n)?.formula, 2)?;
                let a1 = instantiate("A1", *n)?.formula;
                let negated: Vec<BigInt> = a1.a.iter().map(|x| -x).collect();
                Ok(rw.formula.b == a1.b && rw.formula.a == negated && rw.scale == Rational::from_int(-(*n as i64)))
            })();
            exact_or_failed(subject, *n, f, r)
        }
        Check::SumA8A9 { n, numeric } => {
            let c = combine_pair("A8", "A9", *n, 1);
            if *numeric {
                return verify_or_report("combine.atan.pi6.minus+plus", *n, f, c);
            }
            let r = c.and_then(|c| {
                let t = instantiate("A10", 3 * n * n)?;
                Ok(c.formula == t.formula && c.prefactor == &t.prefactor * &Rational::from_int(3))
            });
            exact_or_failed("combine.atan.pi6.minus+plus=3*atan.pi6.sum(3n^2)".into(), *n, f, r)
        }
        Check::SumA5A6 { n, numeric } => {
            let c = combine_pair("A5", "A6", *n, 1);
            if *numeric {
                // tangent addition: atan(1/(2n-1)) + atan(1/(2n+1)) = atan(2n/(2n^2-1))
                let c = c.and_then(|mut c| {
                    c.closed_form = format!("{}*atan({}/{})", n.pow(7), 2 * n, 2 * n * n - 1).parse()?;
                    Ok(c)
                });
                return verify_or_report("combine.atan.pi4.minus+plus", *n, f, c);
            }
            let r = c.and_then(|c| {
                let t = instantiate("A7", 2 * n * n)?;
                Ok(c.formula == t.formula && &c.prefactor * &Rational::from_int(16) == t.prefactor)
            });
            exact_or_failed("combine.atan.pi4.minus+plus=atan.pi4.sum(2n^2)/16".into(), *n, f, r)
        }
        Check::DiffA8A9 { n } => verify_or_report("combine.atan.pi6.minus-plus", *n, f, combine_pair("A8", "A9", *n, -1)),
        Check::SumL1L2 { n } => {
            let c = combine_pair("L1", "L2", *n, 1).and_then(|mut c| {
                c.closed_form = format!("ln({}/{})", n * n - 1, n * n).parse()?;
                Ok(c)
            });
            verify_or_report("combine.log.pi2.plus+minus", *n, f, c)
        }
        Check::Generator { pt, arctan } => {
            let (k, _) = generator_terms(&pt.p, f);
            let r = if *arctan { check_generator_arctan(pt, f, k) } else { check_generator_log(pt, f, k) };
            r.unwrap_or_else(|e| {
                let kind = if *arctan { "arctan" } else { "log" };
                VerifyReport::failed(format!("generator.{kind}(p={},x={})", pt.p, pt.x.label()), None, f, e)
            })
        }
    }
}

fn combine_pair(x: &str, y: &str, n: u64, c2: i64) -> Result<FormulaInstance> {
    combine(&instantiate(x, n)?, &instantiate(y, n)?, &Rational::one(), &Rational::from_int(c2))
}

fn exact_or_failed(subject: String, n: u64, f: u32, r: Result<bool>) -> VerifyReport {
    match r {
        Ok(holds) => VerifyReport::exact(subject, Some(n), holds, f),
        Err(e) => VerifyReport::failed(subject, Some(n), f, e),
    }
}

fn generator_checks() -> impl Iterator<Item = Check> {
    generator_grid()
        .into_iter()
        .flat_map(|pt| [Check::Generator { pt: pt.clone(), arctan: true }, Check::Generator { pt, arctan: false }])
}

fn run_checks(checks: &[Check], frac_bits: u32) -> Vec<VerifyReport> {
    checks.par_iter().map(|c| run_check(c, frac_bits)).collect()
}

/// Every family for `n` in `[n_min, n_max]`, the cross-checks, the summary
/// variants, rewrite and combination equivalences, and the generator grid,
/// in that order.
pub fn run_suite(frac_bits: u32, n_max: u64) -> Vec<VerifyReport> {
    let mut checks: Vec<Check> = list_families()
        .iter()
        .flat_map(|d| family_checks(d.id, d.n_min, n_max))
        .collect();
    checks.extend(cross_checks());
    for label in ["A8", "A9", "L10", "L11"] {
        checks.extend((1..=4).map(|n| Check::Summary { label, n }));
    }
    for n in 2..=10 {
        checks.push(Check::RewriteA1 { n });
        checks.push(Check::RewriteA2 { n });
    }
    for n in 2..=10 {
        checks.push(Check::SumA8A9 { n, numeric: false });
        checks.push(Check::SumA8A9 { n, numeric: true });
        checks.push(Check::SumA5A6 { n, numeric: false });
        checks.push(Check::SumA5A6 { n, numeric: true });
        checks.push(Check::DiffA8A9 { n });
        checks.push(Check::SumL1L2 { n });
    }
    checks.extend(generator_checks());
    run_checks(&checks, frac_bits)
}

/// One family's sweep over `[n_min, n_max]`.
pub fn run_family(id: &str, frac_bits: u32, n_max: u64) -> Result<Vec<VerifyReport>> {
    let d = crate::generators::family(id)?;
    let checks: Vec<Check> = family_checks(d.id, d.n_min, n_max).collect();
    Ok(run_checks(&checks, frac_bits))
}

/// Both generator identities over the grid.
pub fn run_generator_grid(frac_bits: u32) -> Vec<VerifyReport> {
    let checks: Vec<Check> = generator_checks().collect();
    run_checks(&checks, frac_bits)
}
