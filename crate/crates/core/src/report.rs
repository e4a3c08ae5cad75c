//! JSON verification reports.
//!
//! Reports are deterministic: identical inputs and flags produce identical
//! bytes except for `timing_ms`.

use serde::Serialize;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputRef {
    pub path: String,
    /// SHA-256 of the canonical encoding of the parsed input.
    pub sha256: String,
}

impl InputRef {
    pub fn new(path: impl Into<String>, canonical_bytes: &[u8]) -> Self {
        Self {
            path: path.into(),
            sha256: sha256_hex(canonical_bytes),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub mode: String,
    pub inputs: Vec<InputRef>,
    pub verdict: Verdict,
    pub certificate: serde_json::Value,
    pub timing_ms: f64,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_digest() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
