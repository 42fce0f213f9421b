//! Run manifests: everything that determines an output, plus its digest.

use crate::json::canonical;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::time::Duration;

pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq)]
pub struct RunManifest {
    pub subcommand: String,
    pub limits: BTreeMap<String, String>,
    pub engine_version: String,
    pub digest: String,
    /// Reported on stderr only; it is the one field that varies between equal runs.
    pub wall_time: Duration,
}

impl RunManifest {
    pub fn new(subcommand: &str, limits: BTreeMap<String, String>, result: &Value, wall_time: Duration) -> Self {
        RunManifest {
            subcommand: subcommand.to_string(),
            limits,
            engine_version: ENGINE_VERSION.to_string(),
            digest: digest(result),
            wall_time,
        }
    }

    pub fn to_json(&self) -> Value {
        let limits: Map<String, Value> = self.limits.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
        json!({
            "subcommand": self.subcommand,
            "limits": limits,
            "engine_version": self.engine_version,
            "digest": self.digest,
        })
    }

    /// `{"manifest": ..., "result": ...}`.
    pub fn document(&self, result: Value) -> Value {
        json!({"manifest": self.to_json(), "result": result})
    }
}

/// SHA-256 of the canonical text, as `sha256:<hex>`.
pub fn digest(v: &Value) -> String {
    let hash = Sha256::digest(canonical(v).as_bytes());
    let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_ignores_key_order_and_wall_time() {
        let a: Value = serde_json::from_str(r#"{"b": "1", "a": ["2"]}"#).unwrap();
        let b: Value = serde_json::from_str(r#"{"a": ["2"], "b": "1"}"#).unwrap();
        assert_eq!(digest(&a), digest(&b));
        let m1 = RunManifest::new("x", BTreeMap::new(), &a, Duration::from_millis(3));
        let m2 = RunManifest::new("x", BTreeMap::new(), &b, Duration::from_secs(9));
        assert_eq!(m1.to_json(), m2.to_json());
        assert!(m1.digest.starts_with("sha256:") && m1.digest.len() == 7 + 64);
    }
}
