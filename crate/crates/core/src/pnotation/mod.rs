//! P-notation formulas, exact rationals and closed-form expressions.
//!
//! `P(s, b, m, (a_1, ..., a_m))` denotes
//! `sum_{k >= 0} b^-k sum_{j=1..m} a_j / (m k + j)^s`, with `k` starting at 0.
//! A [`FormulaInstance`] pairs such a formula with a rational prefactor and a
//! [`ClosedForm`], asserting `closed_form = prefactor * P`.

mod closed;
mod formula;
mod instance;
pub(crate) mod json;
mod rational;

pub use closed::{ClosedForm, MAX_DEPTH};
pub(crate) use closed::{int_pow, mul1};
pub use formula::{normalize, parse, PFormula};
pub use instance::FormulaInstance;
pub use rational::Rational;
