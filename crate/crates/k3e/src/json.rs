//! Canonical JSON for exact series.
//!
//! A series is `{"var", "val", "trunc", "coeffs": [[exp, coeff], ...]}` with
//! every integer written as a decimal string; `trunc` is `"exact"` for
//! polynomials and `val` is `null` for the zero series. Rationals are
//! `"num/den"` (or just `"num"`), Laurent polynomials in t are
//! `{"t_poly": [[exp, coeff], ...]}`. Objects use sorted keys, so equal values
//! serialise to equal bytes.

use crate::error::{malformed, CliResult};
use k3e_core::kfrac::KFrac;
use k3e_core::laurent::HalfLaurent;
use k3e_core::scalar::{parse_q, q_to_string, Q, QI};
use k3e_core::series::{Coeff, TruncSeries, Var, EXACT};
use serde_json::{json, Map, Value};

pub trait Json: Sized {
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> CliResult<Self>;
}

pub fn int(n: i64) -> Value {
    Value::String(n.to_string())
}

pub fn parse_int(v: &Value) -> CliResult<i64> {
    v.as_str().and_then(|s| s.parse().ok()).ok_or_else(|| malformed(format!("expected an integer string, got {v}")))
}

fn field<'a>(v: &'a Value, key: &str) -> CliResult<&'a Value> {
    v.get(key).ok_or_else(|| malformed(format!("missing key `{key}`")))
}

fn pairs(v: &Value) -> CliResult<&Vec<Value>> {
    v.as_array().ok_or_else(|| malformed("expected an array of [exp, coeff] pairs"))
}

fn pair(p: &Value) -> CliResult<(&Value, &Value)> {
    match p.as_array().map(Vec::as_slice) {
        Some([a, b]) => Ok((a, b)),
        _ => Err(malformed(format!("expected a pair, got {p}"))),
    }
}

impl Json for Q {
    fn to_json(&self) -> Value {
        Value::String(q_to_string(self))
    }
    fn from_json(v: &Value) -> CliResult<Self> {
        v.as_str().and_then(parse_q).ok_or_else(|| malformed(format!("expected a rational string, got {v}")))
    }
}

impl Json for QI {
    fn to_json(&self) -> Value {
        json!({"re": self.re.to_json(), "im": self.im.to_json()})
    }
    fn from_json(v: &Value) -> CliResult<Self> {
        Ok(QI::new(Q::from_json(field(v, "re")?)?, Q::from_json(field(v, "im")?)?))
    }
}

impl Json for HalfLaurent {
    fn to_json(&self) -> Value {
        let terms: Vec<Value> = self.terms().iter().map(|(e, c)| json!([int(*e), c.to_json()])).collect();
        json!({"t_poly": terms})
    }
    fn from_json(v: &Value) -> CliResult<Self> {
        let mut terms = Vec::new();
        for p in pairs(field(v, "t_poly")?)? {
            let (e, c) = pair(p)?;
            terms.push((parse_int(e)?, Q::from_json(c)?));
        }
        Ok(HalfLaurent::from_terms(terms))
    }
}

impl<C: Coeff + Json> Json for TruncSeries<C> {
    fn to_json(&self) -> Value {
        let coeffs: Vec<Value> = self.terms().map(|(e, c)| json!([int(e), c.to_json()])).collect();
        let mut m = Map::new();
        m.insert("var".into(), self.var().name().into());
        m.insert("val".into(), self.valuation().map(int).unwrap_or(Value::Null));
        m.insert("trunc".into(), if self.is_exact() { "exact".into() } else { int(self.trunc()) });
        m.insert("coeffs".into(), Value::Array(coeffs));
        Value::Object(m)
    }
    fn from_json(v: &Value) -> CliResult<Self> {
        let name = field(v, "var")?.as_str().ok_or_else(|| malformed("`var` must be a string"))?;
        let var = Var::from_name(name).ok_or_else(|| malformed(format!("unknown variable `{name}`")))?;
        let trunc = match field(v, "trunc")? {
            Value::String(s) if s == "exact" => EXACT,
            t => parse_int(t)?,
        };
        let mut terms = Vec::new();
        for p in pairs(field(v, "coeffs")?)? {
            let (e, c) = pair(p)?;
            let c = C::from_json(c)?;
            if c.is_zero_elem() {
                return Err(malformed("explicit zero coefficient"));
            }
            terms.push((parse_int(e)?, c));
        }
        if terms.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(malformed("exponents must increase"));
        }
        if terms.last().is_some_and(|(e, _)| *e >= trunc) {
            return Err(malformed("coefficient at or beyond the truncation order"));
        }
        let s = TruncSeries::from_terms(var, terms, trunc);
        let val = match field(v, "val")? {
            Value::Null => None,
            x => Some(parse_int(x)?),
        };
        if val != s.valuation() {
            return Err(malformed("`val` does not match the coefficients"));
        }
        Ok(s)
    }
}

impl Json for KFrac {
    fn to_json(&self) -> Value {
        json!({"num": self.num.to_json(), "k_power": int(self.j as i64)})
    }
    fn from_json(v: &Value) -> CliResult<Self> {
        let j = parse_int(field(v, "k_power")?)?;
        let j = u32::try_from(j).map_err(|_| malformed("`k_power` must be non-negative"))?;
        Ok(KFrac::new(TruncSeries::from_json(field(v, "num")?)?, j))
    }
}

/// Compact canonical text of a value.
pub fn canonical(v: &Value) -> String {
    serde_json::to_string(v).expect("JSON values always serialise")
}

#[cfg(test)]
mod tests {
    use super::*;
    use k3e_core::jacobi::JSeries;
    use k3e_core::scalar::{qfrac, qint};

    #[test]
    fn rational_forms() {
        assert_eq!(qfrac(-3, 6).to_json(), Value::String("-1/2".into()));
        assert_eq!(Q::from_json(&"7".into()).unwrap(), qint(7));
        assert!(Q::from_json(&"1/0".into()).is_err());
        assert!(Q::from_json(&json!(3)).is_err());
    }

    #[test]
    fn nested_round_trip() {
        let lp = HalfLaurent::from_terms([(-2, qint(1)), (0, qfrac(5, 3)), (2, qint(-1))]);
        let s: JSeries = TruncSeries::from_terms(Var::Q, [(-1, lp.clone()), (2, lp.mul(&lp))], 4);
        let outer = TruncSeries::from_terms(Var::Qt, [(0, s.clone()), (1, s.neg_series())], 2);
        let v = outer.to_json();
        assert_eq!(TruncSeries::<JSeries>::from_json(&v).unwrap(), outer);
        assert_eq!(v["trunc"], "2");
        assert_eq!(v["coeffs"][0][1]["val"], "-1");
        let z = TruncSeries::<Q>::zero(Var::U, 3);
        assert_eq!(TruncSeries::<Q>::from_json(&z.to_json()).unwrap(), z);
        let e = TruncSeries::<Q>::one_in(Var::W, EXACT);
        assert_eq!(e.to_json()["trunc"], "exact");
        assert_eq!(TruncSeries::<Q>::from_json(&e.to_json()).unwrap(), e);
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        let good = TruncSeries::from_terms(Var::Q, [(1, qint(2))], 3).to_json();
        let mut bad = good.clone();
        bad["val"] = "0".into();
        assert!(TruncSeries::<Q>::from_json(&bad).is_err());
        let mut bad = good.clone();
        bad["coeffs"] = json!([["5", "1"]]);
        assert!(TruncSeries::<Q>::from_json(&bad).is_err());
        let mut bad = good;
        bad["var"] = "x".into();
        assert!(TruncSeries::<Q>::from_json(&bad).is_err());
    }

    #[test]
    fn keys_are_sorted() {
        let s = TruncSeries::from_terms(Var::Q, [(0, qint(1))], 1);
        assert_eq!(canonical(&s.to_json()), r#"{"coeffs":[["0","1"]],"trunc":"1","val":"0","var":"q"}"#);
    }
}
