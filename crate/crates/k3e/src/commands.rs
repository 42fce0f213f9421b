//! Computations behind each subcommand. Every command returns its result
//! as canonical JSON together with the limits that determine it.

use crate::error::{CliError, CliResult};
use crate::fixtures::{evaluate, Fixtures};
use crate::json::{int, Json};
use k3e_core::enumerative::{conjecture_b, connect, gw_disconnected, kawai_yoshioka, PrimitiveTable};
use k3e_core::fock::examples::{example_closed_form, example_value, Example};
use k3e_core::fock::lattice::KLattice;
use k3e_core::fock::phi::PhiTable;
use k3e_core::fock::recursion::{e_matrix, trace_on, EOperator};
use k3e_core::fock::solver::{phi_solve, reduced_wdvv};
use k3e_core::fock::state::FockState;
use k3e_core::fock::wdvv::wdvv_check;
use k3e_core::forms::{self, Blocks};
use k3e_core::igusa::{chi10, hilb_h, inverse_chi10, split, to_box, Chi10Method, ClosedForms};
use k3e_core::jacobi::{from_q, restrict, JSeries, WSeries};
use k3e_core::kfrac::FracRing;
use k3e_core::laurent::HalfLaurent;
use k3e_core::series::{TruncSeries, Var};
use serde_json::{json, Value};
use std::collections::BTreeMap;

/// A finished computation: its result and the limits it depends on.
#[derive(Clone, Debug, PartialEq)]
pub struct Output {
    pub subcommand: String,
    pub limits: BTreeMap<String, String>,
    pub result: Value,
}

impl Output {
    fn new(subcommand: impl Into<String>, limits: &[(&str, String)], result: Value) -> Self {
        Output {
            subcommand: subcommand.into(),
            limits: limits.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            result,
        }
    }
}

pub fn parse_window(s: &str) -> CliResult<(i64, i64)> {
    let bad = || CliError::Usage(format!("window must be `lo,hi`, got `{s}`"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let lo: i64 = a.trim().parse().map_err(|_| bad())?;
    let hi: i64 = b.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn window_str(w: (i64, i64)) -> String {
    format!("{},{}", w.0, w.1)
}

pub fn parse_method(s: &str) -> CliResult<Chi10Method> {
    match s {
        "product" => Ok(Chi10Method::Product),
        "hecke" => Ok(Chi10Method::Hecke),
        "lift" => Ok(Chi10Method::Lift),
        _ => Err(CliError::Usage(format!("method must be product, hecke or lift, got `{s}`"))),
    }
}

fn method_name(m: Chi10Method) -> &'static str {
    match m {
        Chi10Method::Product => "product",
        Chi10Method::Hecke => "hecke",
        Chi10Method::Lift => "lift",
    }
}

/// A windowed series restricted to the p-window, as a q-series of t-polynomials.
pub fn windowed(w: &WSeries, q_end: i64, window: (i64, i64)) -> CliResult<Value> {
    let rows = restrict(w, q_end, window.0, window.1)?;
    let s: JSeries = TruncSeries::from_terms(Var::Q, rows.into_iter().map(|(e, ts)| (e, HalfLaurent::from_terms(ts))), q_end);
    Ok(json!({"window": [int(window.0), int(window.1)], "series": s.to_json()}))
}

pub const FORM_NAMES: [&str; 13] =
    ["e2", "e4", "e6", "e8", "e10", "delta", "delta-inverse", "gottsche", "k", "f", "g", "wp", "z"];

pub fn forms_dump(name: &str, qmax: i64, window: Option<(i64, i64)>) -> CliResult<Output> {
    let mut limits = vec![("qmax", qmax.to_string())];
    let result = match name {
        e if e.starts_with('e') && e[1..].parse::<i64>().is_ok() => forms::eisenstein(e[1..].parse().unwrap(), qmax)?.to_json(),
        "delta" => forms::delta(qmax).to_json(),
        "delta-inverse" => forms::delta_inverse(qmax).to_json(),
        "gottsche" => forms::gottsche_product(qmax).to_json(),
        "k" => forms::theta_k(qmax).to_json(),
        // F = −iK
        "f" => json!({"factor": "-i", "series": forms::theta_k(qmax).to_json()}),
        "g" => Blocks::new(qmax).g.to_json(),
        "z" => forms::z_function_and_c(qmax)?.0.series.to_json(),
        "wp" => {
            let w = window.ok_or_else(|| CliError::Usage("wp is meromorphic; pass --window lo,hi".into()))?;
            limits.push(("window", window_str(w)));
            let t_rel = 2 * w.1.max(0) + 2 * qmax + 4;
            windowed(&forms::weierstrass_p_window(qmax, t_rel), qmax, w)?
        }
        _ => return Err(CliError::UnknownObject(name.into())),
    };
    Ok(Output::new(format!("forms dump {name}"), &limits, result))
}

pub fn igusa_chi10(qmax: i64, qtmax: i64, method: Chi10Method) -> CliResult<Output> {
    let s = to_box(&chi10(method, qmax, qtmax)?, qmax, qtmax)?;
    Ok(Output::new(
        "igusa chi10",
        &[("qmax", qmax.to_string()), ("qtmax", qtmax.to_string()), ("method", method_name(method).into())],
        s.to_json(),
    ))
}

pub fn igusa_psi(d: i64, qmax: i64, window: (i64, i64)) -> CliResult<Output> {
    let fam = inverse_chi10(qmax, d.max(-1), window.0, window.1)?;
    let result = windowed(fam.get(d)?, qmax, window)?;
    Ok(Output::new("igusa psi", &[("d", d.to_string()), ("qmax", qmax.to_string()), ("window", window_str(window))], result))
}

pub fn igusa_split(d: i64, qmax: i64, window: (i64, i64), margin: i64) -> CliResult<Output> {
    let fam = inverse_chi10(qmax, d.max(-1), window.0, window.1)?;
    let forms = ClosedForms::new(qmax, fam.t_rel)?;
    let s = split(&fam, &forms, d, margin)?;
    let result = json!({
        "d": int(d),
        "psi": windowed(&s.psi, qmax, window)?,
        "phi": windowed(&s.phi, qmax, window)?,
        "h_index": int(d + 1),
        "h": s.h.to_json(),
    });
    Ok(Output::new(
        "igusa split",
        &[("d", d.to_string()), ("qmax", qmax.to_string()), ("window", window_str(window)), ("margin", margin.to_string())],
        result,
    ))
}

pub fn hilb(d: i64, qmax: i64, window: (i64, i64), margin: i64) -> CliResult<Output> {
    let h = hilb_h(d, qmax, window.0, window.1, margin)?;
    Ok(Output::new(
        "dump H",
        &[("d", d.to_string()), ("qmax", qmax.to_string()), ("window", window_str(window)), ("margin", margin.to_string())],
        h.to_json(),
    ))
}

fn state_json(s: &FockState) -> Value {
    Value::Array(s.parts().iter().map(|p| json!([int(p.m as i64), int(p.c as i64)])).collect())
}

pub fn fock_example(which: &str, d: usize, qmax: i64) -> CliResult<Output> {
    let ex = Example::from_name(which).ok_or_else(|| CliError::UnknownObject(format!("example {which}")))?;
    let lat = KLattice::new();
    let ring = FracRing::new(qmax);
    let phi = PhiTable::seeded(qmax);
    let e = EOperator::new(&lat, &ring, &phi);
    let value = example_value(&e, ex, d)?;
    let closed = example_closed_form(&ring, ex, d);
    let result = json!({
        "value": value.to_json(),
        "closed_form": closed.to_json(),
        "equal": ring.equal(&value, &closed),
    });
    Ok(Output::new(
        format!("fock example {which}"),
        &[("d", d.to_string()), ("qmax", qmax.to_string())],
        result,
    ))
}

pub fn fock_trace(dmax: i64, qmax: i64) -> CliResult<Output> {
    let lat = KLattice::new();
    let ring = FracRing::new(qmax);
    let phi = PhiTable::seeded(qmax);
    let e = EOperator::new(&lat, &ring, &phi);
    let traces: Vec<Value> = (0..=dmax).map(|d| Ok(json!([int(d), trace_on(&e, d)?.to_json()]))).collect::<CliResult<_>>()?;
    Ok(Output::new("fock trace", &[("dmax", dmax.to_string()), ("qmax", qmax.to_string())], Value::Array(traces)))
}

pub fn fock_matrix(d: i64, qmax: i64) -> CliResult<Output> {
    let lat = KLattice::new();
    let ring = FracRing::new(qmax);
    let phi = PhiTable::seeded(qmax);
    let e = EOperator::new(&lat, &ring, &phi);
    let m = e_matrix(&e, d, 0)?;
    let states: Vec<Value> = k3e_core::fock::state::basis(d).iter().map(state_json).collect();
    let rows: Vec<Value> = m.iter().map(|r| Value::Array(r.iter().map(Json::to_json).collect())).collect();
    Ok(Output::new("dump E-matrix", &[("d", d.to_string()), ("qmax", qmax.to_string())], json!({"basis": states, "rows": rows})))
}

pub fn fock_wdvv(d: i64, gamma: &str, gamma2: &str, qmax: i64) -> CliResult<Output> {
    let lat = KLattice::new();
    let class = |n: &str| lat.named(n).ok_or_else(|| CliError::Usage(format!("unknown class `{n}` (use B, F, B+F, 1, p)")));
    let (g, g2) = (class(gamma)?, class(gamma2)?);
    let ring = FracRing::new(qmax);
    let phi = PhiTable::seeded(qmax);
    let e = EOperator::new(&lat, &ring, &phi);
    let rep = wdvv_check(&e, d, &g, &g2)?;
    let failures: Vec<Value> = rep
        .failures
        .iter()
        .map(|r| json!({"equation": int(r.equation as i64), "bra": state_json(&r.bra), "ket": state_json(&r.ket), "q_order": int(r.q_order)}))
        .collect();
    let result = json!({"d": int(d), "entries": int(rep.entries as i64), "failures": failures, "holds": rep.holds()});
    Ok(Output::new(
        "fock wdvv",
        &[("d", d.to_string()), ("gamma", gamma.into()), ("gamma2", gamma2.into()), ("qmax", qmax.to_string())],
        result,
    ))
}

pub fn parse_keys(s: &str) -> CliResult<Vec<(i64, i64)>> {
    s.split(';')
        .filter(|k| !k.trim().is_empty())
        .map(|k| {
            let (a, b) = k.split_once(',').ok_or_else(|| CliError::Usage(format!("key must be `m,l`, got `{k}`")))?;
            let p = |x: &str| x.trim().parse::<i64>().map_err(|_| CliError::Usage(format!("bad key `{k}`")));
            Ok((p(a)?, p(b)?))
        })
        .collect()
}

/// Removes the keys (and their symmetric images) from the printed table and
/// solves for them; the reduced WDVV check on the solving space is reported.
pub fn fock_solve(keys: &[(i64, i64)], qmax: i64) -> CliResult<Output> {
    if keys.is_empty() {
        return Err(CliError::Usage("no keys given".into()));
    }
    let lat = KLattice::new();
    let printed = PhiTable::seeded(qmax);
    let mut base = printed.clone();
    for &(m, l) in keys {
        for k in [(m, l), (-m, -l), (l, m), (-l, -m)] {
            base.remove(k);
        }
    }
    // seeds not reachable from the solving space stay unknown
    if keys.contains(&(2, -1)) {
        base.remove((2, -2));
    }
    let rep = phi_solve(&lat, &base, keys, qmax)?;
    let mut entries = Vec::new();
    for &(m, l) in keys {
        let v = rep.table.get(m, l)?;
        let cmp = printed.get(m, l).ok().map(|p| {
            if v.agrees_with(&p) {
                "printed"
            } else if v.agrees_with(&p.neg_series()) {
                "negative of printed"
            } else {
                "differs from printed"
            }
        });
        entries.push(json!({"m": int(m), "l": int(l), "value": v.to_json(), "compared": cmp}));
    }
    let orders: Vec<Value> = rep.orders.iter().map(|(u, r)| json!({"unknowns": int(*u as i64), "rank": int(*r as i64)})).collect();
    let d = keys.iter().map(|k| k3e_core::fock::solver::reach(*k)).max().unwrap_or(1);
    let check = reduced_wdvv(&lat, &rep.table, d, qmax)?;
    let result = json!({
        "solved": entries,
        "orders": orders,
        "reduced_wdvv": {"d": int(d), "entries": int(check.entries as i64), "skipped": int(check.skipped as i64), "failures": int(check.failures as i64)},
    });
    let key_str = keys.iter().map(|(m, l)| format!("{m},{l}")).collect::<Vec<_>>().join(";");
    Ok(Output::new("fock solve", &[("keys", key_str), ("qmax", qmax.to_string())], result))
}

pub fn phi_table(qmax: i64) -> CliResult<Output> {
    let t = PhiTable::seeded(qmax);
    let seeds: Vec<Value> = t.seeds().map(|((m, l), v)| json!({"m": int(*m), "l": int(*l), "value": v.to_json()})).collect();
    Ok(Output::new("dump phi-table", &[("qmax", qmax.to_string())], Value::Array(seeds)))
}

pub fn enum_gw(umax: i64, qmax: i64, qtmax: i64, connected: bool, method: Chi10Method) -> CliResult<Output> {
    let mut gw = gw_disconnected(method, umax, qmax, qtmax)?;
    if connected {
        gw = connect(&gw)?;
    }
    let result = json!({"connected": gw.connected, "series": gw.series.to_json()});
    Ok(Output::new(
        "enum gw",
        &[
            ("umax", umax.to_string()),
            ("qmax", qmax.to_string()),
            ("qtmax", qtmax.to_string()),
            ("connected", connected.to_string()),
            ("method", method_name(method).into()),
        ],
        result,
    ))
}

pub fn enum_multiple_cover(m: i64, h: i64, umax: i64, qtmax: i64) -> CliResult<Output> {
    // the divisor k = 1 needs N_{m²(h−1)+1}
    let top = m * m * (h - 1).max(0) + 1;
    let gw = gw_disconnected(Chi10Method::Product, umax, top + 1, qtmax)?;
    let tab = PrimitiveTable::from_connected(&connect(&gw)?)?;
    let s = conjecture_b(m, h, &tab)?;
    Ok(Output::new(
        "enum multiple-cover",
        &[("m", m.to_string()), ("h", h.to_string()), ("umax", umax.to_string()), ("qtmax", qtmax.to_string())],
        s.to_json(),
    ))
}

pub fn enum_c2(fixtures: Option<&std::path::Path>) -> CliResult<Output> {
    let fx = match fixtures {
        Some(p) => Fixtures::load(p)?,
        None => Fixtures::default_set(),
    };
    let checks: Vec<Value> = evaluate(&fx)?.iter().map(|c| c.to_json()).collect();
    let primitive: Vec<Value> = fx
        .primitive
        .iter()
        .map(|(h, t)| json!({"h": int(*h), "value": t.value.to_json(), "provenance": t.provenance}))
        .collect();
    let result = json!({"genus": int(fx.genus), "primitive": primitive, "checks": checks});
    let source = fixtures.map(|p| p.display().to_string()).unwrap_or_else(|| "bundled".into());
    Ok(Output::new("enum c2", &[("fixtures", source)], result))
}

/// `wmax` only filters the w-range shown; the coefficients are exact Laurent polynomials.
pub fn enum_ky(wmax: i64, ymax: i64, qmax: i64) -> CliResult<Output> {
    let ky = kawai_yoshioka(ymax, qmax)?;
    let shown = ky.series.map(|ys| ys.map(|p| TruncSeries::from_terms(Var::W, p.terms().filter(|(e, _)| e.abs() <= wmax).map(|(e, c)| (e, c.clone())), p.trunc())));
    let result = json!({"region": ky.region, "series": shown.to_json()});
    Ok(Output::new(
        "enum ky",
        &[("wmax", wmax.to_string()), ("ymax", ymax.to_string()), ("qmax", qmax.to_string())],
        result,
    ))
}

pub const DUMP_OBJECTS: [&str; 8] = ["chi10", "psi", "H", "phi-table", "E-matrix", "gw", "ky", "forms/<name>"];

/// Flags shared by `dump`.
#[derive(Clone, Debug)]
pub struct DumpArgs {
    pub qmax: i64,
    pub qtmax: i64,
    pub umax: i64,
    pub window: (i64, i64),
    pub d: i64,
    pub method: Chi10Method,
}

pub fn dump(object: &str, a: &DumpArgs) -> CliResult<Output> {
    let mut out = match object {
        "chi10" => igusa_chi10(a.qmax, a.qtmax, a.method)?,
        "psi" => igusa_psi(a.d, a.qmax, a.window)?,
        "H" => hilb(a.d, a.qmax, a.window, 3)?,
        "phi-table" => phi_table(a.qmax)?,
        "E-matrix" => fock_matrix(a.d, a.qmax)?,
        "gw" => enum_gw(a.umax, a.qmax, a.qtmax, false, a.method)?,
        "ky" => enum_ky(a.umax, a.umax, a.qmax)?,
        name => match name.strip_prefix("forms/") {
            Some(f) => forms_dump(f, a.qmax, Some(a.window))?,
            None if FORM_NAMES.contains(&name) => forms_dump(name, a.qmax, Some(a.window))?,
            None => return Err(CliError::UnknownObject(name.into())),
        },
    };
    out.subcommand = format!("dump {object}");
    Ok(out)
}

/// −2E₂/Δ below q^n, for comparisons with H₁.
pub fn minus_two_e2_over_delta(n: i64) -> CliResult<JSeries> {
    Ok(from_q(&(&forms::eisenstein(2, n + 2)? * &forms::delta_inverse(n)).scale_int(-2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use k3e_core::scalar::qint;

    #[test]
    fn argument_parsers() {
        assert_eq!(parse_window("-3, 4").unwrap(), (-3, 4));
        assert!(parse_window("4,-3").is_err());
        assert!(parse_window("4").is_err());
        assert_eq!(parse_keys("3,0;3,1").unwrap(), [(3, 0), (3, 1)]);
        assert!(parse_keys("3").is_err());
        assert!(parse_method("fourier").is_err());
    }

    #[test]
    fn chi10_dump_first_block() {
        let out = dump("chi10", &DumpArgs { qmax: 3, qtmax: 3, umax: 2, window: (-4, 4), d: 0, method: Chi10Method::Product }).unwrap();
        let s = TruncSeries::<JSeries>::from_json(&out.result).unwrap();
        let b = Blocks::new(4);
        let want = (&b.k2() * &from_q(&b.delta)).truncate(s.at(1).trunc());
        // −F²Δ = K²Δ
        assert_eq!(s.at(1), want);
        assert_eq!(out.limits["method"], "product");
    }

    #[test]
    fn h1_dump() {
        let out = hilb(1, 3, (-5, 5), 3).unwrap();
        let h = JSeries::from_json(&out.result).unwrap();
        assert!(h.agrees_with(&minus_two_e2_over_delta(3).unwrap()));
    }

    #[test]
    fn gw_genus_zero_row() {
        let out = enum_gw(0, 4, 1, false, Chi10Method::Product).unwrap();
        let s = TruncSeries::<TruncSeries<TruncSeries<k3e_core::scalar::Q>>>::from_json(&out.result["series"]).unwrap();
        let row = s.at(-2).at(-1);
        assert_eq!((-1..3).map(|h| row.at(h)).collect::<Vec<_>>(), [1, 24, 324, 3200].map(qint));
    }

    #[test]
    fn unknown_objects() {
        assert!(matches!(forms_dump("e3x", 3, None), Err(CliError::UnknownObject(_))));
        assert!(matches!(forms_dump("wp", 3, None), Err(CliError::Usage(_))));
        assert!(fock_example("iv", 1, 3).is_err());
    }
}
