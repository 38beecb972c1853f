use serde::{Deserialize, Serialize};
use serde_json::Value;

/// One check: what was computed, against what, and whether it passed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub check: String,
    pub inputs: Value,
    pub computed: f64,
    pub reference: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub diagnostics: Value,
}

impl VerifyReport {
    /// Passes when |computed - reference| ≤ tolerance·|reference|.
    pub fn relative(
        check: &str,
        inputs: Value,
        computed: f64,
        reference: f64,
        tolerance: f64,
    ) -> Self {
        let err = rel_err(computed, reference);
        Self {
            check: check.into(),
            inputs,
            computed,
            reference,
            tolerance,
            pass: err <= tolerance,
            diagnostics: serde_json::json!({ "relative_error": err }),
        }
    }

    /// Passes when computed ≤ tolerance (reference is the ideal value).
    pub fn bounded(
        check: &str,
        inputs: Value,
        computed: f64,
        reference: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            check: check.into(),
            inputs,
            computed,
            reference,
            tolerance,
            pass: computed <= tolerance,
            diagnostics: Value::Null,
        }
    }

    pub fn with_diagnostics(mut self, diagnostics: Value) -> Self {
        match (&mut self.diagnostics, diagnostics) {
            (Value::Object(a), Value::Object(b)) => a.extend(b),
            (slot, d) => *slot = d,
        }
        self
    }

    pub fn failed(check: &str, inputs: Value, message: String) -> Self {
        Self {
            check: check.into(),
            inputs,
            computed: f64::NAN,
            reference: f64::NAN,
            tolerance: f64::NAN,
            pass: false,
            diagnostics: serde_json::json!({ "error": message }),
        }
    }
}

pub(crate) fn rel_err(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        (a - b).abs() / b.abs()
    }
}
