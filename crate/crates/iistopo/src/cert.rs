//! Verification certificates.
//!
//! Every verdict-producing command emits a [`Certificate`] recording
//! what was checked, on which input documents (by content hash), within
//! which explicit bounds, and what came out — so no verdict can quietly
//! overstate what was actually verified. Re-running the same check on
//! documents with the same hashes reproduces the certificate byte for
//! byte.

use crate::json::to_pretty_string;
use crate::Result;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fmt;

/// Which check produced a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertKind {
    /// Bounded-level solvability: search or verification of a one-shot
    /// decision map on an iterated subdivision.
    Act,
    /// Terminating-subdivision solvability: admissibility plus a
    /// carrier-respecting decision map.
    Gact,
    /// Direct protocol checking against a task and a model.
    ProtocolCheck,
}

impl fmt::Display for CertKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertKind::Act => write!(f, "act"),
            CertKind::Gact => write!(f, "gact"),
            CertKind::ProtocolCheck => write!(f, "protocol-check"),
        }
    }
}

/// A self-describing record of one verification verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    /// Which check ran.
    pub kind: CertKind,
    /// Content hashes of the input documents, keyed by role
    /// (`"task"`, `"model"`, `"subdivision"`, ...).
    pub inputs: BTreeMap<String, String>,
    /// `"pass"`, or a short machine-readable reason it failed
    /// (`"unsolvable"`, `"not-admissible"`, `"violation"`, ...).
    pub verdict: String,
    /// The explicit bounds the verdict holds at (`"depth"`,
    /// `"tail_period"`, `"k_max"`, ...). A pass certifies nothing beyond
    /// these.
    pub bounds: BTreeMap<String, u64>,
    /// Supporting detail: counterexample runs, per-level exhaustion
    /// notes, the found decision map's size — one string per item.
    pub witnesses: Vec<String>,
}

impl Certificate {
    /// Starts a certificate with no inputs, bounds, or witnesses.
    pub fn new(kind: CertKind, verdict: impl Into<String>) -> Certificate {
        Certificate {
            kind,
            inputs: BTreeMap::new(),
            verdict: verdict.into(),
            bounds: BTreeMap::new(),
            witnesses: Vec::new(),
        }
    }

    /// Records an input document under a role name, by content hash.
    pub fn with_input(mut self, role: impl Into<String>, document: &Value) -> Certificate {
        self.inputs.insert(role.into(), content_hash(document));
        self
    }

    /// Records one bound the verdict holds at.
    pub fn with_bound(mut self, name: impl Into<String>, value: u64) -> Certificate {
        self.bounds.insert(name.into(), value);
        self
    }

    /// Appends a witness line.
    pub fn with_witness(mut self, witness: impl Into<String>) -> Certificate {
        self.witnesses.push(witness.into());
        self
    }

    /// Whether the verdict is a pass.
    pub fn is_pass(&self) -> bool {
        self.verdict == "pass"
    }

    /// The canonical JSON form.
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("certificates always serialize")
    }

    /// Reads a certificate back from JSON.
    pub fn from_json(value: &Value) -> Result<Certificate> {
        Ok(serde_json::from_value(value.clone())?)
    }
}

/// SHA-256 of the canonical rendering of a document, as lowercase hex.
pub fn content_hash(value: &Value) -> String {
    let mut hasher = Sha256::new();
    hasher.update(to_pretty_string(value).as_bytes());
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::json::task_to_json;
    use crate::tasks::identity_task;

    #[test]
    fn certificates_round_trip() {
        let doc = task_to_json(&identity_task(1));
        let cert = Certificate::new(CertKind::Act, "pass")
            .with_input("task", &doc)
            .with_bound("k_max", 2)
            .with_witness("k=0: identity map");
        assert!(cert.is_pass());
        let back = Certificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back, cert);
    }

    #[test]
    fn kinds_render_in_kebab_case() {
        let cert = Certificate::new(CertKind::ProtocolCheck, "violation");
        assert_eq!(cert.to_json()["kind"], "protocol-check");
        assert!(!cert.is_pass());
        assert_eq!(CertKind::ProtocolCheck.to_string(), "protocol-check");
    }

    #[test]
    fn content_hashes_are_stable_and_discriminating() {
        let a = task_to_json(&identity_task(1));
        let b = task_to_json(&identity_task(2));
        assert_eq!(content_hash(&a), content_hash(&a));
        assert_ne!(content_hash(&a), content_hash(&b));
        assert_eq!(content_hash(&a).len(), 64);
    }

    #[test]
    fn equal_inputs_yield_byte_identical_certificates() {
        let doc = task_to_json(&identity_task(2));
        let make = || {
            Certificate::new(CertKind::Gact, "pass")
                .with_input("task", &doc)
                .with_bound("depth", 4)
                .with_bound("tail_period", 1)
        };
        let a = crate::json::to_pretty_string(&make().to_json());
        let b = crate::json::to_pretty_string(&make().to_json());
        assert_eq!(a, b);
    }
}
