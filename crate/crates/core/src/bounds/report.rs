use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::tol;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
    /// Preconditions of the inequality are not met (no clock, no certified
    /// resolution); nothing was compared.
    Inapplicable,
}

/// One evaluated inequality `left ≥ right`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    /// Which result of the theory the inequality instantiates.
    pub anchor: String,
    pub relation: String,
    pub left: f64,
    pub right: f64,
    /// `left - right`.
    pub slack: f64,
    pub inputs: BTreeMap<String, f64>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl BoundReport {
    /// Compares `left ≥ right` with the shared violation tolerance.
    pub fn compare(name: &str, anchor: &str, relation: &str, left: f64, right: f64) -> Self {
        let slack = left - right;
        let verdict = if slack >= -tol::VIOLATION || left == right {
            Verdict::Holds
        } else {
            Verdict::Violated
        };
        BoundReport {
            name: name.into(),
            anchor: anchor.into(),
            relation: relation.into(),
            left,
            right,
            slack,
            inputs: BTreeMap::new(),
            verdict,
            note: None,
        }
    }

    /// `deviation ≤ tolerance` for identities checked numerically; the
    /// tolerance is exact, not widened by the violation tolerance.
    pub fn within(name: &str, anchor: &str, relation: &str, deviation: f64, tolerance: f64) -> Self {
        let mut r = Self::compare(name, anchor, relation, tolerance, deviation);
        r.verdict = if deviation <= tolerance { Verdict::Holds } else { Verdict::Violated };
        r
    }

    pub fn inapplicable(name: &str, anchor: &str, relation: &str, reason: impl Into<String>) -> Self {
        BoundReport {
            name: name.into(),
            anchor: anchor.into(),
            relation: relation.into(),
            left: 0.0,
            right: 0.0,
            slack: 0.0,
            inputs: BTreeMap::new(),
            verdict: Verdict::Inapplicable,
            note: Some(reason.into()),
        }
    }

    pub fn with_input(mut self, key: &str, value: f64) -> Self {
        self.inputs.insert(key.into(), value);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn violated(&self) -> bool {
        self.verdict == Verdict::Violated
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.verdict {
            Verdict::Inapplicable => write!(
                f,
                "{} [{}]: inapplicable ({})",
                self.name,
                self.anchor,
                self.note.as_deref().unwrap_or("")
            ),
            v => write!(
                f,
                "{} [{}]: {:.9e} vs {:.9e} ({}), slack {:.3e}: {:?}",
                self.name, self.anchor, self.left, self.right, self.relation, self.slack, v
            ),
        }
    }
}
