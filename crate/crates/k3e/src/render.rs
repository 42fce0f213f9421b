//! Plain-text rendering of result values, for terminal use without `--json`.

use serde_json::Value;
use std::fmt::Write;

fn is_series(v: &Value) -> bool {
    v.get("coeffs").is_some() && v.get("var").is_some()
}

fn t_poly(terms: &[Value]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, p) in terms.iter().enumerate() {
        let (e, c) = (p[0].as_str().unwrap_or("?"), p[1].as_str().unwrap_or("?"));
        let (neg, mag) = match c.strip_prefix('-') {
            Some(m) => (true, m),
            None => (false, c),
        };
        if i == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        match (e, mag) {
            ("0", m) => s.push_str(m),
            (e, "1") => write!(s, "t^{e}").unwrap(),
            (e, m) => write!(s, "{m} t^{e}").unwrap(),
        }
    }
    s
}

/// Inline form for leaves, or `None` when the value needs its own block.
fn inline(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Null => Some("-".into()),
        Value::Number(n) => Some(n.to_string()),
        Value::Object(o) if o.len() == 1 && o.contains_key("t_poly") => Some(t_poly(o["t_poly"].as_array().map(Vec::as_slice).unwrap_or(&[]))),
        _ => None,
    }
}

fn series(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    let var = v["var"].as_str().unwrap_or("?");
    let trunc = v["trunc"].as_str().unwrap_or("?");
    for p in v["coeffs"].as_array().map(Vec::as_slice).unwrap_or(&[]) {
        let e = p[0].as_str().unwrap_or("?");
        match inline(&p[1]) {
            Some(s) => writeln!(out, "{pad}{var}^{e}: {s}").unwrap(),
            None => {
                writeln!(out, "{pad}{var}^{e}:").unwrap();
                value(&p[1], depth + 1, out);
            }
        }
    }
    if trunc != "exact" {
        writeln!(out, "{pad}+ O({var}^{trunc})").unwrap();
    }
}

fn value(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    if let Some(s) = inline(v) {
        writeln!(out, "{pad}{s}").unwrap();
    } else if is_series(v) {
        series(v, depth, out);
    } else if let Value::Object(o) = v {
        for (k, x) in o {
            match inline(x) {
                Some(s) => writeln!(out, "{pad}{k}: {s}").unwrap(),
                None => {
                    writeln!(out, "{pad}{k}:").unwrap();
                    value(x, depth + 1, out);
                }
            }
        }
    } else if let Value::Array(a) = v {
        for (i, x) in a.iter().enumerate() {
            match inline(x) {
                Some(s) => writeln!(out, "{pad}[{i}] {s}").unwrap(),
                None => {
                    writeln!(out, "{pad}[{i}]").unwrap();
                    value(x, depth + 1, out);
                }
            }
        }
    }
}

pub fn render(v: &Value) -> String {
    let mut out = String::new();
    value(v, 0, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn series_and_laurent() {
        let v = json!({"var": "q", "val": "-1", "trunc": "1", "coeffs": [
            ["-1", {"t_poly": [["-2", "-1"], ["0", "2"], ["2", "-1/3"]]}],
            ["0", {"t_poly": [["0", "5"]]}]
        ]});
        assert_eq!(render(&v), "q^-1: -t^-2 + 2 - 1/3 t^2\nq^0: 5\n+ O(q^1)\n");
    }

    #[test]
    fn nested_objects() {
        let v = json!({"equal": true, "value": {"var": "u", "val": null, "trunc": "exact", "coeffs": []}});
        assert_eq!(render(&v), "equal: true\nvalue:\n");
    }
}
