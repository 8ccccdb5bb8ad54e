//! Outcome of one verification check at one point.

use serde_json::Value;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub check_id: String,
    pub passed: bool,
    /// Data explaining a failure (or, for some checks, the measured value).
    pub witness: Option<Value>,
}

impl CheckOutcome {
    pub fn pass(check_id: impl Into<String>) -> Self {
        CheckOutcome { check_id: check_id.into(), passed: true, witness: None }
    }

    pub fn fail(check_id: impl Into<String>, witness: Value) -> Self {
        CheckOutcome { check_id: check_id.into(), passed: false, witness: Some(witness) }
    }

    pub fn from_result(check_id: impl Into<String>, r: Result<(), Value>) -> Self {
        match r {
            Ok(()) => Self::pass(check_id),
            Err(w) => Self::fail(check_id, w),
        }
    }

    /// Attaches a witness without changing the verdict.
    pub fn with_witness(mut self, w: Value) -> Self {
        self.witness = Some(w);
        self
    }
}

/// Folds several outcomes into one, keeping the first failure's witness.
pub fn all_of(check_id: impl Into<String>, parts: Vec<CheckOutcome>) -> CheckOutcome {
    let check_id = check_id.into();
    match parts.into_iter().find(|c| !c.passed) {
        None => CheckOutcome::pass(check_id),
        Some(bad) => CheckOutcome::fail(
            check_id,
            serde_json::json!({"sub_check": bad.check_id, "witness": bad.witness}),
        ),
    }
}
