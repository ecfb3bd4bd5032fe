//! Parameterized BBP-type formula families and the machinery around them.
//!
//! A BBP-type formula is written in P-notation as `P(s, b, m, (a_1, ..., a_m))`
//! and stands for the series
//!
//! ```text
//!   sum_{k >= 0} b^{-k} sum_{j = 1..m} a_j / (m k + j)^s
//! ```
//!
//! The crate is organised bottom-up:
//!
//! * [`pnotation`]: formulas, exact rationals, closed-form expression trees and
//!   their text/JSON interchange forms.
//! * [`bigfixed`]: signed arbitrary-precision fixed-point numbers with reference
//!   `sqrt`, `atan` and `ln`.
//! * [`series_eval`]: evaluation of formulas and closed forms to a requested
//!   number of bits with a rigorous tail bound.
//! * [`generators`]: the registry of the 22 arctangent and logarithm families.
//! * [`transforms`]: base-power rewriting and linear combination of instances.
//! * [`digit_extract`]: base-`b` digits at an arbitrary position without
//!   computing the preceding ones.
//! * [`verify`]: the numerical certification harness.

pub mod bigfixed;
pub mod digit_extract;
mod error;
pub mod generators;
pub mod pnotation;
pub mod series_eval;
pub mod transforms;
pub mod verify;

pub use bigfixed::BigFixed;
pub use generators::{family, instantiate, list_families, FamilyDescriptor, FunctionKind};

pub use error::{Error, Result};

pub use pnotation::{ClosedForm, FormulaInstance, PFormula, Rational};
pub use digit_extract::{extract_digits, DigitRun};
pub use series_eval::{eval_closed, eval_p, tail_start, EvalReport};
pub use verify::{run_suite, verify_instance, VerifyReport};
pub use transforms::{combine, rewrite_power, RewriteResult};

