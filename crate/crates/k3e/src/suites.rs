//! The verification suites behind `k3e verify` and the acceptance runner.
//! Each criterion is a pure function of [`Limits`]; failures carry a detail line.

use crate::fixtures::{evaluate, Fixtures};
use crate::oracles;
use k3e_core::enumerative::{conjecture_b, conjecture_c2, connect, gw_disconnected, kawai_yoshioka, PrimitiveTable, WPoly};
use k3e_core::error::{Error, Result};
use k3e_core::fock::eb::{c_coeff, resolution_product, to_window as eb_window, EbOperator};
use k3e_core::fock::examples::{example_closed_form, example_value, Example};
use k3e_core::fock::lattice::KLattice;
use k3e_core::fock::phi::{expected_leading, PhiTable};
use k3e_core::fock::recursion::{trace_on, EOperator};
use k3e_core::fock::solver::{phi_solve, reduced_wdvv};
use k3e_core::fock::state::FockState;
use k3e_core::fock::wdvv::wdvv_check;
use k3e_core::forms::{delta_inverse, eisenstein, theta_u_consistency, weierstrass_consistency, weierstrass_u_consistency};
use k3e_core::igusa::{
    check_inverse, chi10, correction_identity, inverse_chi10, margin_width, split, swap_q_qt, to_box, Chi10Method, ClosedForms,
};
use k3e_core::jacobi::{agree_on_window, from_q, JSeries};
use k3e_core::kfrac::FracRing;
use k3e_core::laurent::HalfLaurent;
use k3e_core::scalar::{ipow_q, qfrac, qint, Q};
use k3e_core::series::{TruncSeries, Var, EXACT};
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    /// The truncations the acceptance criteria are stated at.
    Acceptance,
    Quick,
    Full,
}

impl Level {
    pub fn name(self) -> &'static str {
        match self {
            Level::Acceptance => "acceptance",
            Level::Quick => "quick",
            Level::Full => "full",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Limits {
    pub level: Level,
    pub wp_q: i64,
    pub chi_box: i64,
    pub psi_q: i64,
    pub window: (i64, i64),
    pub margin: i64,
    pub example_q: i64,
    pub example_d: usize,
    pub trace_q: i64,
    pub trace_d: i64,
    pub wdvv_q: i64,
    pub wdvv_d: i64,
    pub u_order: i64,
    pub gw_q: i64,
    pub cover_m: i64,
    pub ky_hd: i64,
    /// Adds the solver-extended WDVV check on ℱ₃.
    pub extended: bool,
}

impl Limits {
    pub fn for_level(level: Level) -> Self {
        let base = Limits {
            level,
            wp_q: 8,
            chi_box: 5,
            psi_q: 5,
            window: (-10, 10),
            margin: 3,
            example_q: 5,
            example_d: 4,
            trace_q: 5,
            trace_d: 2,
            wdvv_q: 4,
            wdvv_d: 2,
            u_order: 8,
            gw_q: 5,
            cover_m: 4,
            ky_hd: 3,
            extended: false,
        };
        match level {
            Level::Acceptance => base,
            Level::Quick => Limits {
                wp_q: 4,
                chi_box: 4,
                psi_q: 4,
                window: (-8, 8),
                example_q: 4,
                example_d: 2,
                u_order: 6,
                gw_q: 4,
                cover_m: 3,
                ..base
            },
            Level::Full => Limits { wp_q: 6, chi_box: 6, psi_q: 6, window: (-12, 12), gw_q: 6, extended: true, ..base },
        }
    }

    pub fn to_map(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            m.insert(k.to_string(), v);
        };
        put("level", self.level.name().into());
        put("wp_q", self.wp_q.to_string());
        put("chi_box", self.chi_box.to_string());
        put("psi_q", self.psi_q.to_string());
        put("window", format!("{},{}", self.window.0, self.window.1));
        put("margin", self.margin.to_string());
        put("example_q", self.example_q.to_string());
        put("example_d", self.example_d.to_string());
        put("trace_q", self.trace_q.to_string());
        put("trace_d", self.trace_d.to_string());
        put("wdvv_q", self.wdvv_q.to_string());
        put("wdvv_d", self.wdvv_d.to_string());
        put("u_order", self.u_order.to_string());
        put("gw_q", self.gw_q.to_string());
        put("cover_m", self.cover_m.to_string());
        put("ky_hd", self.ky_hd.to_string());
        put("extended", self.extended.to_string());
        m
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    /// Target runtime at the acceptance truncation.
    pub budget: Duration,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {}: {} [{:.1} s of {} s] {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.elapsed.as_secs_f64(),
            self.budget.as_secs(),
            self.detail
        )
    }
}

type Check = fn(&Limits) -> Result<(bool, String)>;

pub struct Criterion {
    pub id: usize,
    pub title: &'static str,
    pub budget_s: u64,
    check: Check,
}

pub const CRITERIA: [Criterion; 12] = [
    Criterion { id: 1, title: "Weierstrass function consistency", budget_s: 5, check: weierstrass },
    Criterion { id: 2, title: "three constructions of the Igusa cusp form", budget_s: 60, check: three_way_chi10 },
    Criterion { id: 3, title: "closed forms of psi_d from the windowed inverse", budget_s: 60, check: psi_closed_forms },
    Criterion { id: 4, title: "splitting psi_d into polar and finite parts", budget_s: 30, check: splitting },
    Criterion { id: 5, title: "q~^0 correction identity", budget_s: 5, check: correction },
    Criterion { id: 6, title: "closed-form Fock matrix elements", budget_s: 120, check: fock_examples },
    Criterion { id: 7, title: "traces of E^(0) against the psi_d", budget_s: 300, check: traces },
    Criterion { id: 8, title: "WDVV residuals and seed mutations", budget_s: 300, check: wdvv },
    Criterion { id: 9, title: "A1 resolution operator E_B", budget_s: 60, check: resolution },
    Criterion { id: 10, title: "KKV column and Yau-Zaslow numbers", budget_s: 30, check: kkv },
    Criterion { id: 11, title: "multiple cover formulas", budget_s: 10, check: multiple_cover },
    Criterion { id: 12, title: "motivic constraints", budget_s: 60, check: motivic },
];

/// The extra check of the full level.
pub const EXTENDED: Criterion =
    Criterion { id: 13, title: "solver-extended WDVV on the reduced F_3", budget_s: 600, check: extended_wdvv };

impl Criterion {
    pub fn run(&self, lim: &Limits) -> Outcome {
        let start = Instant::now();
        let (passed, detail) = match (self.check)(lim) {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        Outcome {
            id: self.id,
            title: self.title,
            passed,
            detail,
            elapsed: start.elapsed(),
            budget: Duration::from_secs(self.budget_s),
        }
    }
}

/// Thread count from `K3E_THREADS`, else the available parallelism.
pub fn thread_count() -> usize {
    std::env::var("K3E_THREADS")
        .ok()
        .and_then(|s| s.parse().ok())
        .filter(|n| *n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

/// Runs the selected criteria on `threads` workers, heaviest first; the
/// result is ordered by id regardless of completion order.
pub fn run(lim: &Limits, ids: &[usize], threads: usize, mut on_done: impl FnMut(&Outcome) + Send) -> Vec<Outcome> {
    let mut jobs: Vec<&Criterion> = CRITERIA.iter().filter(|c| ids.contains(&c.id)).collect();
    if lim.extended && ids.contains(&EXTENDED.id) {
        jobs.push(&EXTENDED);
    }
    jobs.sort_by_key(|c| std::cmp::Reverse(c.budget_s));
    let next = AtomicUsize::new(0);
    let done: Mutex<Vec<Outcome>> = Mutex::new(Vec::new());
    let report = Mutex::new(&mut on_done);
    std::thread::scope(|s| {
        for _ in 0..threads.max(1).min(jobs.len().max(1)) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(job) = jobs.get(i) else { break };
                let out = job.run(lim);
                (report.lock().unwrap())(&out);
                done.lock().unwrap().push(out);
            });
        }
    });
    let mut out = done.into_inner().unwrap();
    out.sort_by_key(|o| o.id);
    out
}

pub fn all_ids(lim: &Limits) -> Vec<usize> {
    let mut ids: Vec<usize> = CRITERIA.iter().map(|c| c.id).collect();
    if lim.extended {
        ids.push(EXTENDED.id);
    }
    ids
}

fn verdict(parts: &[(&str, bool)]) -> (bool, String) {
    let failed: Vec<&str> = parts.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
    if failed.is_empty() {
        (true, parts.iter().map(|(n, _)| *n).collect::<Vec<_>>().join("; "))
    } else {
        (false, format!("failed: {}", failed.join("; ")))
    }
}

fn weierstrass(lim: &Limits) -> Result<(bool, String)> {
    let (lo, hi) = lim.window;
    let n = lim.wp_q;
    Ok(verdict(&[
        (&format!("three expansions of wp agree on [{lo},{hi}] below q^{n}"), weierstrass_consistency(n, lo, hi)?),
        (&format!("u-expansion of wp to u^{}", lim.u_order), weierstrass_u_consistency(n, lim.u_order)?),
        (&format!("F(u) normalisation to u^{}", lim.u_order), theta_u_consistency(n, lim.u_order)?),
    ]))
}

fn three_way_chi10(lim: &Limits) -> Result<(bool, String)> {
    let n = lim.chi_box;
    let boxed = |m| chi10(m, n, n).and_then(|s| to_box(&s, n, n));
    let p = boxed(Chi10Method::Product)?;
    let h = boxed(Chi10Method::Hecke)?;
    let l = boxed(Chi10Method::Lift)?;
    let first = p.coeff(1)?;
    let b = k3e_core::forms::Blocks::new(n + 1);
    let minus_f2_delta = (&b.k2() * &from_q(&b.delta)).truncate(first.trunc());
    Ok(verdict(&[
        (&format!("product = exp-Hecke on the {n}x{n} box"), p == h),
        ("product = additive lift", p == l),
        ("symmetric under q <-> q~", swap_q_qt(&p, n)? == p),
        ("q~^1 row is -F^2 Delta", first == minus_f2_delta),
    ]))
}

fn psi_closed_forms(lim: &Limits) -> Result<(bool, String)> {
    let (lo, hi) = lim.window;
    let q = lim.psi_q;
    let fam = inverse_chi10(q, 2, lo, hi)?;
    let cf = ClosedForms::new(q, fam.t_rel)?;
    let mut parts = Vec::new();
    for d in -1..=2 {
        parts.push((format!("psi_{d}"), agree_on_window(fam.get(d)?, &cf.psi(d)?, q, lo, hi)?));
    }
    parts.push(("chi10 * (1/chi10) = 1".into(), check_inverse(&fam, 2)?));
    let parts: Vec<(&str, bool)> = parts.iter().map(|(s, b)| (s.as_str(), *b)).collect();
    let (ok, d) = verdict(&parts);
    Ok((ok, format!("{d} (q^{q}, window [{lo},{hi}])")))
}

fn splitting(lim: &Limits) -> Result<(bool, String)> {
    let (lo, hi) = lim.window;
    let q = lim.psi_q;
    let fam = inverse_chi10(q, 2, lo, hi)?;
    let forms = ClosedForms::new(q, fam.t_rel)?;
    let mut widths = Vec::new();
    let mut ok = true;
    let mut h1 = None;
    for d in -1..=2 {
        let psi = fam.get(d)?;
        let diff = (psi + &forms.polar_part(d)?).neg_series();
        let w = margin_width(&diff, q, lo, hi)?;
        widths.push(format!("H_{}: {w}", d + 1));
        ok &= w >= lim.margin;
        match split(&fam, &forms, d, lim.margin) {
            Ok(s) => {
                if d == -1 {
                    ok &= s.h.is_zero_series();
                }
                if d == 0 {
                    h1 = Some(s.h);
                }
            }
            Err(Error::Margin(m)) => {
                ok = false;
                widths.push(format!("margin failure: {m}"));
            }
            Err(e) => return Err(e),
        }
    }
    let want = from_q(&(&eisenstein(2, q + 2)? * &delta_inverse(q)).scale_int(-2));
    let h1_ok = h1.as_ref().is_some_and(|h| h.agrees_with(&want) && h.trunc() >= q);
    Ok((ok && h1_ok, format!("vanishing margins {}; H_1 = -2E_2/Delta: {h1_ok}", widths.join(", "))))
}

fn correction(lim: &Limits) -> Result<(bool, String)> {
    let (lo, hi) = lim.window;
    let ok = correction_identity(lim.psi_q, lo, hi)?;
    Ok((ok, format!("-2E_2/Delta + 24G/(F^2 Delta) = -24 wp/Delta below q^{} on [{lo},{hi}]", lim.psi_q)))
}

fn fock_examples(lim: &Limits) -> Result<(bool, String)> {
    let jobs: Vec<(Example, usize)> =
        [Example::Fiber, Example::Section, Example::PointChain].into_iter().flat_map(|w| (1..=lim.example_d).map(move |d| (w, d))).collect();
    // one operator per example family so the memo is shared across d
    let results: Vec<Result<Vec<(usize, bool)>>> = std::thread::scope(|s| {
        let handles: Vec<_> = [Example::Fiber, Example::Section, Example::PointChain]
            .into_iter()
            .map(|which| {
                s.spawn(move || -> Result<Vec<(usize, bool)>> {
                    let lat = KLattice::new();
                    let ring = FracRing::new(lim.example_q);
                    let phi = PhiTable::seeded(lim.example_q);
                    let e = EOperator::new(&lat, &ring, &phi);
                    (1..=lim.example_d)
                        .map(|d| Ok((d, ring.equal(&example_value(&e, which, d)?, &example_closed_form(&ring, which, d)))))
                        .collect()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut bad = Vec::new();
    for (which, r) in ["(i)", "(ii)", "(iii)"].iter().zip(results) {
        for (d, ok) in r? {
            if !ok {
                bad.push(format!("{which} d={d}"));
            }
        }
    }
    let total = jobs.len();
    if bad.is_empty() {
        Ok((true, format!("{total} matrix elements, d <= {} at q-order {}", lim.example_d, lim.example_q)))
    } else {
        Ok((false, format!("mismatch at {}", bad.join(", "))))
    }
}

fn traces(lim: &Limits) -> Result<(bool, String)> {
    let (lo, hi) = lim.window;
    let n = lim.trace_q;
    let lat = KLattice::new();
    let ring = FracRing::new(n);
    let phi = PhiTable::seeded(n);
    let e = EOperator::new(&lat, &ring, &phi);
    // N/(K^jΔ) is known below q^{n−1}
    let q_end = n - 1;
    let fam = inverse_chi10(q_end, lim.trace_d - 1, lo, hi)?;
    let t_rel = (4 * (hi - lo) + 8 * n + 16) as usize;
    let (inv_k, inv_d) = ring.window_inverses(t_rel)?;
    let mut parts = Vec::new();
    for d in 0..=lim.trace_d {
        let tr = trace_on(&e, d)?;
        let w = ring.to_window(&tr, &inv_k, &inv_d);
        let want = fam.get(d - 1)?.neg_series();
        parts.push((format!("F_{d}: -psi_{}", d - 1), agree_on_window(&w, &want, q_end, lo, hi)?));
    }
    let parts: Vec<(&str, bool)> = parts.iter().map(|(s, b)| (s.as_str(), *b)).collect();
    let (ok, d) = verdict(&parts);
    Ok((ok, format!("{d} (below q^{q_end}, window [{lo},{hi}])")))
}

fn q_monomial(e: i64, t: i64, n: i64) -> JSeries {
    JSeries::monomial(Var::Q, e, HalfLaurent::monomial(t, qint(1)), n)
}

fn wdvv_holds(lat: &KLattice, phi: &PhiTable, n: i64, dmax: i64) -> Result<(bool, usize)> {
    let ring = FracRing::new(n);
    let e = EOperator::new(lat, &ring, phi);
    let mut entries = 0;
    for d in 1..=dmax {
        for g2 in [lat.f(), lat.beta(1)] {
            let rep = wdvv_check(&e, d, &lat.b(), &g2)?;
            entries += rep.entries;
            if !rep.holds() {
                return Ok((false, entries));
            }
        }
    }
    Ok((true, entries))
}

fn wdvv(lim: &Limits) -> Result<(bool, String)> {
    let n = lim.wdvv_q;
    let lat = KLattice::new();
    let phi = PhiTable::seeded(n);
    let (holds, entries) = wdvv_holds(&lat, &phi, n, lim.wdvv_d)?;
    let keys: Vec<(i64, i64)> = phi.seeds().map(|(k, _)| *k).collect();
    let results: Vec<((i64, i64), Result<bool>)> = std::thread::scope(|s| {
        let handles: Vec<_> = keys
            .iter()
            .map(|&key| {
                let (lat, phi) = (&lat, &phi);
                s.spawn(move || {
                    let mutated = phi.mutated(key, &q_monomial(1, 0, n));
                    (key, wdvv_holds(lat, &mutated, n, lim.wdvv_d).map(|(ok, _)| !ok))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut silent = Vec::new();
    for (key, broke) in results {
        if !broke? {
            silent.push(format!("({},{})", key.0, key.1));
        }
    }
    let positive = format!(
        "residuals on F_1..F_{} for (B,F), (B,B+F) at q-order {n}: {} ({entries} entries)",
        lim.wdvv_d,
        if holds { "zero" } else { "NONZERO" }
    );
    let negative = if silent.is_empty() {
        format!("all {} seed mutations break WDVV", keys.len())
    } else {
        format!(
            "mutations of {} of {} seeds break WDVV; seeds {} are never read on F_<={} so their mutations cannot",
            keys.len() - silent.len(),
            keys.len(),
            silent.join(", "),
            lim.wdvv_d
        )
    };
    Ok((holds && silent.is_empty(), format!("{positive}; {negative}")))
}

fn resolution(lim: &Limits) -> Result<(bool, String)> {
    let lat = KLattice::new();
    let eb = EbOperator::new(&lat);
    let vac = FockState::vacuum();
    let vac_ok = eb.value(0, &vac, &vac) == HalfLaurent::one();
    // y/(1+y)² on the t-window with y = −t²
    let t_end = 2 * lim.window.1 + 2;
    let want = TruncSeries::from_terms(
        Var::T,
        oracles::y_over_one_plus_y_squared(lim.window.1 + 1)
            .into_iter()
            .map(|(n, c)| (2 * n, c * ipow_q(-1, n))),
        t_end,
    );
    let window_ok = eb_window(&eb.value(0, &vac, &vac), t_end) == want;
    let phi = PhiTable::seeded(3);
    let mut lead_ok = true;
    for m in [1, 2] {
        // (−y)^{−m/2} − (−y)^{m/2} with (−y)^{1/2} = t
        let printed = HalfLaurent::from_terms([(-m, qint(1)), (m, qint(-1))]);
        lead_ok &= phi.get(m, 0)?.coeff(0)? == printed && c_coeff(m) == printed && expected_leading(m) == printed;
    }
    let prod = resolution_product(lim.trace_d as usize + 1);
    let trace_ok = (0..=lim.trace_d).all(|d| eb.trace_on(d) == prod[d as usize]);
    Ok(verdict(&[
        ("<1|E_B 1> = y/(1+y)^2 on the window", vac_ok && window_ok),
        ("leading coefficients of phi_{1,0}, phi_{2,0}", lead_ok),
        (&format!("traces on F_d, d <= {}, match the 2-20-2 product", lim.trace_d), trace_ok),
    ]))
}

fn kkv(lim: &Limits) -> Result<(bool, String)> {
    let (nu, nq) = (lim.u_order, lim.gw_q);
    let gw = gw_disconnected(Chi10Method::Product, nu, nq, 1)?;
    let col = gw.qt_column(0)?;
    let want = oracles::kkv(nu, nq)?;
    let mut col_ok = col.trunc() >= nu;
    for e in -2..nu {
        col_ok &= col.coeff(e)?.agrees_below(&want.coeff(e)?, nq);
    }
    let g0 = col.coeff(-2)?;
    let yz: Vec<Q> = (-1..3).map(|h| g0.coeff(h)).collect::<Result<_>>()?;
    let yz_ok = yz == [1, 24, 324, 3200].map(qint);
    let real = gw.series.valuation() == Some(-2);
    Ok(verdict(&[
        (&format!("q~^-1 column = KKV formula to u^{nu}, q^{nq}"), col_ok),
        ("genus 0: 1, 24, 324, 3200", yz_ok),
        ("leading u^-2", real),
    ]))
}

fn multiple_cover(lim: &Limits) -> Result<(bool, String)> {
    let sigma_prim: BTreeMap<i64, Q> = [(1, qint(1))].into();
    let mut sigma_ok = true;
    for m in 1..=6 {
        sigma_ok &= conjecture_c2(m, 1, 1, &[2], &sigma_prim)? == qint(oracles::divisor_sum(m));
    }
    let prim: BTreeMap<i64, Q> = [(2, qint(1)), (5, qint(8728))].into();
    let direct = conjecture_c2(2, 2, 2, &[2, 2], &prim)? == qint(8760);
    let fx = evaluate(&Fixtures::default_set()).map_err(|e| Error::Missing(e.to_string()))?;
    let fixtures_ok = fx.iter().all(|c| c.holds());
    let m_max = lim.cover_m;
    // h_max = 1 needs primitive entries up to m²·0 + 1 and N_h for h ≤ 1
    let gw = gw_disconnected(Chi10Method::Product, 4, 3, 3)?;
    let tab = PrimitiveTable::from_connected(&connect(&gw)?)?;
    let mut b_ok = true;
    for m in 1..=m_max {
        // genus 1 sits at u⁰
        let ratio = qfrac(oracles::sublattices(m), m);
        b_ok &= conjecture_b(m, 1, &tab)?.coeff(0)? == tab.get(1)?.coeff(0)?.scale(&ratio);
    }
    Ok(verdict(&[
        ("sum of divisors for m <= 6", sigma_ok),
        ("8728 + 2^5 = 8760", direct),
        ("8760 = 6312 + 1800 + 648 from fixtures", fixtures_ok),
        (&format!("genus 1 rule vs sublattice count for m <= {m_max}"), b_ok),
    ]))
}

fn motivic(lim: &Limits) -> Result<(bool, String)> {
    let (q_end, hi) = (3, 2 * lim.window.1.min(6));
    let fam = inverse_chi10(q_end, 0, 0, hi)?;
    let psi = fam.get(-1)?;
    let ky = kawai_yoshioka(hi / 2 + 1, q_end)?;
    let at = ky.at_w(-1);
    let mut w_ok = true;
    for n in -1..q_end {
        let row = at.coeff(n)?;
        for a in 0..=hi / 2 {
            // y = −t²
            let want = -psi.coeff(n)?.coeff(2 * a)? * ipow_q(-1, a);
            w_ok &= row.coeff(a)? == want;
        }
    }
    let hd = lim.ky_hd;
    let big = kawai_yoshioka(2 * hd + 2, hd + 1)?;
    let mut sym = true;
    for h in 0..=hd {
        for d in 0..=hd {
            sym &= big.lowest(h, d)? == big.lowest(d, h)?;
        }
    }
    let w_sum = WPoly::from_terms(Var::W, [(-1, qint(1)), (1, qint(1))], EXACT);
    let lowest_ok = big.lowest(1, 0)? == w_sum;
    Ok(verdict(&[
        (&format!("w = -1 gives -psi_-1 below q^{q_end}, y^{}", hi / 2), w_ok),
        (&format!("lowest coefficients symmetric for h, d <= {hd}"), sym),
        ("(h,d) = (1,0) gives w + 1/w", lowest_ok),
    ]))
}

fn extended_wdvv(_lim: &Limits) -> Result<(bool, String)> {
    let lat = KLattice::new();
    let printed = PhiTable::seeded(3);
    let before = reduced_wdvv(&lat, &printed, 3, 3)?;
    let seeded = PhiTable::seeded(2);
    let mut base = seeded.clone();
    base.remove((2, -1));
    base.remove((2, -2));
    let solved = phi_solve(&lat, &base, &[(2, -1)], 2)?.table.get(2, -1)?;
    let sign = solved.agrees_with(&seeded.get(2, -1)?.neg_series());
    let mut fixed = printed.clone();
    fixed.insert((2, -1), printed.get(2, -1)?.neg_series());
    let after = reduced_wdvv(&lat, &fixed, 3, 3)?;
    Ok((
        after.holds() && sign,
        format!(
            "printed phi_(2,-1): {} of {} evaluable entries fail; solved value = -printed: {sign}; with it: {} failures",
            before.failures,
            before.entries - before.skipped,
            after.failures
        ),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quick_cheap_criteria_pass() {
        let lim = Limits::for_level(Level::Quick);
        for id in [1, 5, 9, 11, 12] {
            let c = CRITERIA.iter().find(|c| c.id == id).unwrap();
            let o = c.run(&lim);
            assert!(o.passed, "{}", o.line());
        }
    }

    #[test]
    fn outcomes_come_back_in_order() {
        let lim = Limits::for_level(Level::Quick);
        let mut seen = Vec::new();
        let out = run(&lim, &[12, 1, 5], 3, |o| seen.push(o.id));
        assert_eq!(out.iter().map(|o| o.id).collect::<Vec<_>>(), [1, 5, 12]);
        seen.sort();
        assert_eq!(seen, [1, 5, 12]);
    }

    #[test]
    fn levels_differ_where_stated() {
        let q = Limits::for_level(Level::Quick);
        let f = Limits::for_level(Level::Full);
        assert_eq!((q.chi_box, q.window, q.trace_d), (4, (-8, 8), 2));
        assert_eq!((f.chi_box, f.window, f.trace_d), (6, (-12, 12), 2));
        assert!(f.extended && !q.extended);
        assert_eq!(all_ids(&f).len(), 13);
    }
}
