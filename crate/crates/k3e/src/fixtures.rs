//! The multiple-cover fixtures file: primitive invariants with provenance
//! tags, and imprimitive counts split into geometric contributions.

use crate::error::{malformed, CliError, CliResult};
use crate::json::{int, parse_int, Json};
use crate::oracles::{bitangents, tangents_from_point};
use k3e_core::enumerative::conjecture_c2;
use k3e_core::scalar::{qint, Q};
use num_traits::Zero;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::path::Path;

pub const DEFAULT_FIXTURES: &str = include_str!("../fixtures/c2.json");

#[derive(Clone, Debug, PartialEq)]
pub struct Tagged {
    pub value: Q,
    pub provenance: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Contribution {
    pub label: String,
    pub tagged: Tagged,
    /// Name of an elementary formula that recomputes the value.
    pub formula: Option<String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub m: i64,
    pub h: i64,
    pub expected: Q,
    pub contributions: Vec<Contribution>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Fixtures {
    pub genus: i64,
    pub deltas: Vec<i64>,
    pub primitive: BTreeMap<i64, Tagged>,
    pub checks: Vec<Check>,
}

fn string(v: &Value, key: &str) -> CliResult<String> {
    v.get(key).and_then(Value::as_str).map(str::to_string).ok_or_else(|| malformed(format!("missing string `{key}`")))
}

fn array<'a>(v: &'a Value, key: &str) -> CliResult<&'a Vec<Value>> {
    v.get(key).and_then(Value::as_array).ok_or_else(|| malformed(format!("missing array `{key}`")))
}

fn tagged(v: &Value) -> CliResult<Tagged> {
    Ok(Tagged { value: Q::from_json(v.get("value").unwrap_or(&Value::Null))?, provenance: string(v, "provenance")? })
}

impl Fixtures {
    pub fn parse(text: &str) -> CliResult<Self> {
        let v: Value = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
        let genus = parse_int(v.get("genus").unwrap_or(&Value::Null))?;
        let deltas = array(&v, "insertion_degrees")?.iter().map(parse_int).collect::<CliResult<_>>()?;
        let mut primitive = BTreeMap::new();
        for p in array(&v, "primitive")? {
            let h = parse_int(p.get("h").unwrap_or(&Value::Null))?;
            if primitive.insert(h, tagged(p)?).is_some() {
                return Err(malformed(format!("duplicate primitive entry for h = {h}")));
            }
        }
        let mut checks = Vec::new();
        for c in array(&v, "checks")? {
            let mut contributions = Vec::new();
            for k in array(c, "contributions")? {
                contributions.push(Contribution {
                    label: string(k, "label")?,
                    tagged: tagged(k)?,
                    formula: k.get("formula").and_then(Value::as_str).map(str::to_string),
                });
            }
            checks.push(Check {
                m: parse_int(c.get("m").unwrap_or(&Value::Null))?,
                h: parse_int(c.get("h").unwrap_or(&Value::Null))?,
                expected: Q::from_json(c.get("expected").unwrap_or(&Value::Null))?,
                contributions,
            });
        }
        Ok(Fixtures { genus, deltas, primitive, checks })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
        Self::parse(&text)
    }

    pub fn default_set() -> Self {
        Self::parse(DEFAULT_FIXTURES).expect("bundled fixtures parse")
    }

    pub fn primitive_values(&self) -> BTreeMap<i64, Q> {
        self.primitive.iter().map(|(h, t)| (*h, t.value.clone())).collect()
    }
}

/// Recomputes an elementary contribution for two points and a smooth sextic.
pub fn elementary(formula: &str) -> Option<Q> {
    let sextic = 6;
    // factor 2 for the choice of node
    match formula {
        "tangent-pairs" => Some(qint(2 * tangents_from_point(sextic).pow(2))),
        "bitangents" => Some(qint(2 * bitangents(sextic))),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub m: i64,
    pub h: i64,
    pub predicted: Q,
    pub expected: Q,
    pub contribution_sum: Q,
    /// (label, stored, recomputed) for contributions with a formula.
    pub recomputed: Vec<(String, Q, Option<Q>)>,
}

impl CheckResult {
    pub fn holds(&self) -> bool {
        self.predicted == self.expected
            && (self.recomputed.is_empty() || self.contribution_sum == self.expected)
            && self.recomputed.iter().all(|(_, stored, again)| again.as_ref() == Some(stored))
    }

    pub fn to_json(&self) -> Value {
        let rec: Vec<Value> = self
            .recomputed
            .iter()
            .map(|(l, s, r)| json!({"label": l, "stored": s.to_json(), "recomputed": r.as_ref().map(Json::to_json)}))
            .collect();
        json!({
            "m": int(self.m),
            "h": int(self.h),
            "predicted": self.predicted.to_json(),
            "expected": self.expected.to_json(),
            "contribution_sum": self.contribution_sum.to_json(),
            "recomputed": rec,
            "holds": self.holds(),
        })
    }
}

pub fn evaluate(fx: &Fixtures) -> CliResult<Vec<CheckResult>> {
    let prim = fx.primitive_values();
    let mut out = Vec::new();
    for c in &fx.checks {
        let predicted = conjecture_c2(c.m, fx.genus, c.h, &fx.deltas, &prim)?;
        let mut sum = Q::zero();
        let mut recomputed = Vec::new();
        for k in &c.contributions {
            sum += &k.tagged.value;
            if let Some(f) = &k.formula {
                recomputed.push((k.label.clone(), k.tagged.value.clone(), elementary(f)));
            }
        }
        out.push(CheckResult { m: c.m, h: c.h, predicted, expected: c.expected.clone(), contribution_sum: sum, recomputed });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_fixtures() {
        let fx = Fixtures::default_set();
        assert_eq!(fx.genus, 2);
        assert_eq!(fx.primitive[&5].value, qint(8728));
        assert!(fx.primitive.values().all(|t| !t.provenance.is_empty()));
        let res = evaluate(&fx).unwrap();
        assert_eq!(res.len(), 1);
        assert_eq!(res[0].predicted, qint(8760));
        assert_eq!(res[0].contribution_sum, qint(6312 + 1800 + 648));
        assert!(res[0].holds());
    }

    #[test]
    fn tampered_values_are_caught() {
        let fx = Fixtures::parse(&DEFAULT_FIXTURES.replace("\"648\"", "\"650\"")).unwrap();
        assert!(!evaluate(&fx).unwrap()[0].holds());
        let fx = Fixtures::parse(&DEFAULT_FIXTURES.replace("\"8728\"", "\"8729\"")).unwrap();
        assert!(!evaluate(&fx).unwrap()[0].holds());
        assert!(Fixtures::parse("{}").is_err());
    }
}
