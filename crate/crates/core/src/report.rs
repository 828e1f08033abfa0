//! Proposition-check records.

use serde::{Deserialize, Serialize};

/// One proposition-check record: the two independently computed sides of a
/// bound, the slack between them, and the scale that makes the slack
/// dimensionless.
///
/// `slack` is `rhs − lhs` for scalar bounds and the minimum eigenvalue of
/// the difference for operator-ordered bounds. A report passes when
/// `slack ≥ −tol·scale` at the tolerance the check was declared with.
/// `vacuous` marks bounds the source material itself calls uninformative
/// (degenerate pointer gaps, overlapping bands); vacuous reports pass.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundReport {
    pub proposition: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub scale: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub vacuous: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance_digest: Option<String>,
}

impl BoundReport {
    /// Scalar bound `lhs ≤ rhs` with slack `rhs − lhs`.
    pub fn bound(proposition: &str, lhs: f64, rhs: f64, scale: f64, tol: f64) -> Self {
        let slack = rhs - lhs;
        Self {
            proposition: proposition.to_string(),
            seed: None,
            lhs,
            rhs,
            slack,
            scale,
            pass: slack >= -tol * scale,
            vacuous: false,
            note: None,
            instance_digest: None,
        }
    }

    /// Operator-ordered bound with an explicit slack (minimum eigenvalue of
    /// the difference); `lhs`/`rhs` are informational norms of the two sides.
    pub fn operator_bound(
        proposition: &str,
        lhs: f64,
        rhs: f64,
        slack: f64,
        scale: f64,
        tol: f64,
    ) -> Self {
        Self {
            proposition: proposition.to_string(),
            seed: None,
            lhs,
            rhs,
            slack,
            scale,
            pass: slack >= -tol * scale,
            vacuous: false,
            note: None,
            instance_digest: None,
        }
    }

    /// A bound the proposition itself declares uninformative for this
    /// instance; passes with a note.
    pub fn vacuous(proposition: &str, note: &str) -> Self {
        Self {
            proposition: proposition.to_string(),
            seed: None,
            lhs: 0.0,
            rhs: 0.0,
            slack: 0.0,
            scale: 0.0,
            pass: true,
            vacuous: true,
            note: Some(note.to_string()),
            instance_digest: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn with_digest(mut self, digest: impl Into<String>) -> Self {
        self.instance_digest = Some(digest.into());
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// Dimensionless slack `slack/scale` (the raw slack when scale is 0).
    pub fn normalized_slack(&self) -> f64 {
        if self.scale > 0.0 {
            self.slack / self.scale
        } else {
            self.slack
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_is_scale_relative() {
        let r = BoundReport::bound("p", 1.0 + 5e-9, 1.0, 1.0, 1e-8);
        assert!(r.pass);
        let r = BoundReport::bound("p", 1.0 + 5e-8, 1.0, 1.0, 1e-8);
        assert!(!r.pass);
    }

    #[test]
    fn serialization_omits_empty_fields() {
        let r = BoundReport::bound("cs", 0.5, 1.0, 1.0, 1e-8);
        let json = serde_json::to_string(&r).unwrap();
        assert!(!json.contains("seed"));
        assert!(!json.contains("vacuous"));
        let v = BoundReport::vacuous("x", "gap below threshold");
        assert!(serde_json::to_string(&v).unwrap().contains("vacuous"));
    }
}
