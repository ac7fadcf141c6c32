//! Structured outcome of a verification run.

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One claim, the bounds it was checked under, and what went wrong if
/// anything. Counterexamples are capped so reports stay readable.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub claim: String,
    pub parameters: Value,
    pub status: Status,
    pub counterexamples: Vec<Value>,
}

const MAX_COUNTEREXAMPLES: usize = 20;

impl Report {
    pub fn new(claim: impl Into<String>, parameters: Value) -> Self {
        Report { claim: claim.into(), parameters, status: Status::Pass, counterexamples: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Records a failure. Only the first few witnesses are kept.
    pub fn fail(&mut self, witness: impl Into<Value>) {
        self.status = Status::Fail;
        if self.counterexamples.len() < MAX_COUNTEREXAMPLES {
            self.counterexamples.push(witness.into());
        }
    }

    /// Fails with `witness` unless `ok`.
    pub fn check(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        if !ok {
            self.fail(witness());
        }
    }
}
