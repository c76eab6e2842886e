use serde::{Deserialize, Serialize};

/// One named verification result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// The identity or property being checked, in symbols.
    pub statement: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
    pub passed: bool,
}

impl Check {
    /// Passes iff `residual <= tolerance` (NaN fails).
    pub fn residual(name: &str, statement: &str, residual: f64, tolerance: f64) -> Self {
        Check {
            name: name.to_string(),
            statement: statement.to_string(),
            residual: Some(residual),
            tolerance: Some(tolerance),
            detail: None,
            passed: residual <= tolerance,
        }
    }

    pub fn flag(name: &str, statement: &str, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            statement: statement.to_string(),
            residual: None,
            tolerance: None,
            detail: Some(detail.into()),
            passed,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

/// Largest value of an iterator of residuals; NaN propagates.
pub fn worst(residuals: impl IntoIterator<Item = f64>) -> f64 {
    residuals
        .into_iter()
        .fold(0.0, |acc, r| if r.is_nan() || acc.is_nan() { f64::NAN } else { acc.max(r) })
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_residual_fails() {
        assert!(!Check::residual("x", "x", f64::NAN, 1.0).passed);
        assert!(worst([1.0, f64::NAN, 0.5]).is_nan());
        assert_eq!(worst([1.0, 3.0, 0.5]), 3.0);
    }
}
