//! Verification certificates: every named check, the first hard failure if
//! any, and fingerprints of the derived structure.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector, Tolerances};
use crate::report::{all_passed, Check};

pub const CERTIFICATE_VERSION: &str = "dqg-certificate-1";

/// The error that stopped a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Failure {
    pub phase: String,
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub axiom: Option<String>,
    pub exit_code: i32,
}

impl Failure {
    pub fn new(phase: &str, err: &Error) -> Self {
        Failure {
            phase: phase.to_string(),
            code: err.code().to_string(),
            message: err.to_string(),
            axiom: err.axiom().map(str::to_string),
            exit_code: err.exit_code(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fingerprints {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub h: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counit: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub antipode_sha256: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub haar: Option<Vec<[f64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub w_sha256: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dual_blocks: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseTiming {
    pub phase: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Certificate {
    pub version: String,
    pub source: String,
    pub block_dims: Vec<usize>,
    pub tolerances: Tolerances,
    pub seed: u64,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failure: Option<Failure>,
    pub fingerprints: Fingerprints,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timings: Option<Vec<PhaseTiming>>,
    pub passed: bool,
}

pub fn vector_fingerprint(v: &CVector) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

/// SHA-256 of the shape and the little-endian bytes of every entry, column-major.
pub fn matrix_sha256(m: &CMatrix) -> String {
    let mut hasher = Sha256::new();
    hasher.update((m.nrows() as u64).to_le_bytes());
    hasher.update((m.ncols() as u64).to_le_bytes());
    for z in m.iter() {
        // -0.0 and 0.0 hash alike
        hasher.update((z.re + 0.0).to_le_bytes());
        hasher.update((z.im + 0.0).to_le_bytes());
    }
    hex::encode(hasher.finalize())
}

impl Certificate {
    pub fn new(source: &str, tolerances: Tolerances, seed: u64) -> Self {
        Certificate {
            version: CERTIFICATE_VERSION.to_string(),
            source: source.to_string(),
            block_dims: Vec::new(),
            tolerances,
            seed,
            checks: Vec::new(),
            failure: None,
            fingerprints: Fingerprints::default(),
            timings: None,
            passed: false,
        }
    }

    pub fn extend(&mut self, checks: impl IntoIterator<Item = Check>) {
        self.checks.extend(checks);
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Sets `passed` from the checks and failure recorded so far.
    pub fn finish(&mut self) {
        self.passed = self.failure.is_none() && all_passed(&self.checks);
    }

    /// 0 on a full pass, the failure's code after a hard error, 2 if a check failed.
    pub fn exit_code(&self) -> i32 {
        match &self.failure {
            Some(f) => f.exit_code,
            None if all_passed(&self.checks) => 0,
            None => 2,
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("plain data serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::ParseError {
            location: format!("line {}, column {}", e.line(), e.column()),
            message: e.to_string(),
        })
    }

    /// Human-readable table, one line per check.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "source:     {}", self.source);
        let _ = writeln!(out, "blocks:     {:?}", self.block_dims);
        let _ = writeln!(
            out,
            "tolerances: residual {:e}, rank {:e}; seed {}",
            self.tolerances.residual, self.tolerances.rank, self.seed
        );
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let verdict = if c.passed { "pass" } else { "FAIL" };
            let value = match (c.residual, c.tolerance) {
                (Some(r), Some(t)) => format!("{r:9.2e} <= {t:.0e}"),
                _ => c.detail.clone().unwrap_or_default(),
            };
            let _ = writeln!(out, "{verdict}  {:width$}  {value:<20}  {}", c.name, c.statement);
        }
        if let Some(f) = &self.failure {
            let _ = writeln!(out, "stopped in phase {}: {} ({})", f.phase, f.code, f.message);
            if let Some(axiom) = &f.axiom {
                let _ = writeln!(out, "failed axiom: {axiom}");
            }
        }
        if let Some(timings) = &self.timings {
            for t in timings {
                let _ = writeln!(out, "time  {:width$}  {:.3} s", t.phase, t.seconds);
            }
        }
        let failed = self.failed_checks().count();
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "{verdict}: {} checks, {failed} failed", self.checks.len());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn json_round_trip() {
        let mut cert = Certificate::new("test", Tolerances::default(), 3);
        cert.extend([Check::residual("x", "x = x", 1e-17, 1e-9), Check::flag("y", "y", false, "no")]);
        cert.failure = Some(Failure::new("structure", &Error::NoSuchH));
        cert.fingerprints.h = Some(vec![[1.0, 0.0]]);
        cert.finish();
        let back = Certificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back, cert);
        assert_eq!(cert.exit_code(), 2);
        assert!(cert.to_table().contains("NoSuchH"));
    }

    #[test]
    fn hash_ignores_sign_of_zero() {
        let a = CMatrix::from_element(2, 2, c(0.0, -0.0));
        let b = CMatrix::from_element(2, 2, c(-0.0, 0.0));
        assert_eq!(matrix_sha256(&a), matrix_sha256(&b));
        assert_ne!(matrix_sha256(&a), matrix_sha256(&CMatrix::from_element(4, 1, c(0.0, 0.0))));
    }

    #[test]
    fn exit_codes() {
        let mut cert = Certificate::new("t", Tolerances::default(), 0);
        cert.extend([Check::residual("x", "x", 0.0, 1e-9)]);
        cert.finish();
        assert_eq!(cert.exit_code(), 0);
        cert.failure = Some(Failure::new("load", &Error::ShapeMismatch("bad".into())));
        assert_eq!(cert.exit_code(), 3);
        cert.failure = Some(Failure::new("dual", &Error::DegenerateSpectrum(8)));
        assert_eq!(cert.exit_code(), 4);
    }
}
