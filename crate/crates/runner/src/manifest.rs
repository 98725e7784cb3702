use crate::config::Kind;
use crate::experiments::OutputFile;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputDigest {
    pub path: String,
    pub sha256: String,
}

/// Everything needed to rerun an experiment and check its outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub kind: Kind,
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    pub version: String,
    pub started: String,
    pub finished: String,
    pub outputs: Vec<OutputDigest>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn digests(files: &[OutputFile]) -> Vec<OutputDigest> {
    files.iter().map(|f| OutputDigest { path: f.name.clone(), sha256: sha256_hex(&f.bytes) }).collect()
}

pub fn version_tag() -> String {
    format!("psmom {}", env!("CARGO_PKG_VERSION"))
}

/// Human-readable list of differences, empty when the digests agree.
pub fn compare(expected: &[OutputDigest], actual: &[OutputDigest]) -> Vec<String> {
    let mut problems = Vec::new();
    for e in expected {
        match actual.iter().find(|a| a.path == e.path) {
            None => problems.push(format!("{} was not produced", e.path)),
            Some(a) if a.sha256 != e.sha256 => problems.push(format!("{}: expected {}, got {}", e.path, e.sha256, a.sha256)),
            Some(_) => {}
        }
    }
    for a in actual {
        if !expected.iter().any(|e| e.path == a.path) {
            problems.push(format!("{} is not in the manifest", a.path));
        }
    }
    problems
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_digest() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    #[test]
    fn compare_reports_each_problem() {
        let d = |p: &str, h: &str| OutputDigest { path: p.into(), sha256: h.into() };
        assert!(compare(&[d("a", "1")], &[d("a", "1")]).is_empty());
        assert_eq!(compare(&[d("a", "1"), d("b", "2")], &[d("a", "3"), d("c", "4")]).len(), 3);
    }
}
