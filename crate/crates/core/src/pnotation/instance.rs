use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ClosedForm, PFormula, Rational, MAX_DEPTH};
use crate::{Error, Result};

/// A grounded identity `closed_form = prefactor * formula`.
///
/// The identity itself is only ever established numerically, by
/// [`crate::verify::verify_instance`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "InstanceJson", try_from = "InstanceJson")]
pub struct FormulaInstance {
    pub family_id: String,
    pub n: u64,
    pub prefactor: Rational,
    pub formula: PFormula,
    pub closed_form: ClosedForm,
}

impl FormulaInstance {
    pub fn validate(&self) -> Result<()> {
        self.formula.validate()?;
        if self.closed_form.depth() > MAX_DEPTH {
            return Err(Error::Domain(format!("closed form deeper than {MAX_DEPTH}")));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::parse(e.column(), e.to_string()))
    }
}

impl fmt::Display for FormulaInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {} * {}", self.closed_form, self.prefactor, self.formula)
    }
}

#[derive(Serialize, Deserialize)]
struct InstanceJson {
    family: String,
    n: u64,
    prefactor: Rational,
    formula: PFormula,
    closed_form: String,
}

impl From<FormulaInstance> for InstanceJson {
    fn from(i: FormulaInstance) -> Self {
        InstanceJson {
            family: i.family_id,
            n: i.n,
            prefactor: i.prefactor,
            formula: i.formula,
            closed_form: i.closed_form.to_string(),
        }
    }
}

impl TryFrom<InstanceJson> for FormulaInstance {
    type Error = String;

    fn try_from(j: InstanceJson) -> std::result::Result<Self, String> {
        let closed_form = j.closed_form.parse::<ClosedForm>().map_err(|e| e.to_string())?;
        let inst = FormulaInstance {
            family_id: j.family,
            n: j.n,
            prefactor: j.prefactor,
            formula: j.formula,
            closed_form,
        };
        inst.validate().map_err(|e| e.to_string())?;
        Ok(inst)
    }
}
