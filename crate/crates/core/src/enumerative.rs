//! Curve-counting generating series for K3 × E: the Gromov–Witten partition
//! function read off from χ₁₀ after y = −exp(iu), connected/disconnected
//! conversion, the multiple-cover rules and the refined Kawai–Yoshioka product.
//!
//! A [`GwSeries`] is a u-series (outer) of q̃-series of q-series. The
//! coefficient of u^{2g−2} q^{h−1} q̃^{d−1} is N_{g,h,d}.

use crate::error::{Error, Result};
use crate::forms::{eta_power, substitute_u_real};
use crate::igusa::{chi10, to_box, Chi10Method};
use crate::scalar::{divisors, ipow_q, qint, Q};
use crate::series::{QSeries, TruncSeries, Var, EXACT};
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use num_traits::{One, Zero};

/// q̃-series (outer) of q-series.
pub type Bivariate = TruncSeries<QSeries>;

/// u-series (outer) of q̃-series; the shape of N_h(u, q̃).
pub type UqtSeries = TruncSeries<QSeries>;

#[derive(Clone, Debug, PartialEq)]
pub struct GwSeries {
    pub series: TruncSeries<Bivariate>,
    pub connected: bool,
}

impl GwSeries {
    /// N_{g,h,d}: the coefficient of u^{2g−2} q^{h−1} q̃^{d−1}.
    pub fn coeff(&self, g: i64, h: i64, d: i64) -> Result<Q> {
        self.series.coeff(2 * g - 2)?.coeff(d - 1)?.coeff(h - 1)
    }

    /// The q̃^{d−1} column as a u-series of q-series.
    pub fn qt_column(&self, d: i64) -> Result<TruncSeries<QSeries>> {
        let mut terms = Vec::new();
        for (e, c) in self.series.terms() {
            terms.push((e, c.coeff(d - 1)?));
        }
        Ok(TruncSeries::from_terms(Var::U, terms, self.series.trunc()))
    }
}

/// −1/χ₁₀ under y = −exp(iu), known for u-exponents below `nu`, q^{h−1} with
/// h − 1 < nq and q̃^{d−1} with d − 1 < nqt.
pub fn gw_disconnected(method: Chi10Method, nu: i64, nq: i64, nqt: i64) -> Result<GwSeries> {
    if nu < -1 || nq < 0 || nqt < 0 {
        return Err(Error::Invalid(alloc::format!("bounds ({nu}, {nq}, {nqt})")));
    }
    let (nq_chi, nqt_chi) = (nq + 1, nqt + 1);
    let chi = to_box(&chi10(method, nq_chi, nqt_chi)?, nq_chi, nqt_chi)?;
    let u_order = nu + 4;
    // rows d = 1..=nqt_chi, each divided by q and substituted
    let mut rows: Vec<TruncSeries<QSeries>> = Vec::new();
    for d in 1..=nqt_chi {
        let row = chi.coeff(d)?;
        if !row.at(0).is_zero() {
            return Err(Error::Invalid(alloc::format!("χ₁₀ row q̃^{d} is not divisible by q")));
        }
        rows.push(substitute_u_real(&row, u_order)?);
    }
    // χ₁₀ = u² q q̃ W; W has a unit leading coefficient
    let mut w_terms = Vec::new();
    for j in 0..u_order {
        let col: Vec<QSeries> = rows.iter().map(|r| r.at(j).shift(-1)).collect();
        if j < 2 {
            if col.iter().any(|c| !c.is_zero_series()) {
                return Err(Error::NotInvertible);
            }
            continue;
        }
        w_terms.push((j - 2, Bivariate::from_dense(Var::Qt, 0, col, nqt_chi)));
    }
    let w = TruncSeries::from_terms(Var::U, w_terms, u_order - 2);
    let inv = w.invert_unit()?;
    let series = inv.neg_series().shift(-2).map(|b: &Bivariate| b.shift(-1).map(|s: &QSeries| s.shift(-1)));
    Ok(GwSeries { series, connected: false })
}

fn qt_product(e: i64, trunc: i64) -> Bivariate {
    eta_power(Var::Qt, e, trunc).map(|c| QSeries::constant(Var::Q, c.clone(), EXACT))
}

fn times_qt_product(v: &GwSeries, e: i64) -> GwSeries {
    let series = v.series.map(|b: &Bivariate| {
        let p = qt_product(e, b.trunc().saturating_add(2).min(EXACT - 1));
        b * &p
    });
    GwSeries { series, connected: v.connected }
}

/// Multiplies by ∏(1 − q̃ⁿ)²⁴.
pub fn connect(v: &GwSeries) -> Result<GwSeries> {
    if v.connected {
        return Err(Error::Invalid("series is already connected".into()));
    }
    let mut out = times_qt_product(v, 24);
    out.connected = true;
    Ok(out)
}

/// Divides by ∏(1 − q̃ⁿ)²⁴.
pub fn disconnect(v: &GwSeries) -> Result<GwSeries> {
    if !v.connected {
        return Err(Error::Invalid("series is already disconnected".into()));
    }
    let mut out = times_qt_product(v, -24);
    out.connected = false;
    Ok(out)
}

/// Connected primitive series N_h(u, q̃) for h = 0, 1, …
#[derive(Clone, Debug, PartialEq)]
pub struct PrimitiveTable {
    pub series: BTreeMap<i64, UqtSeries>,
}

impl PrimitiveTable {
    pub fn from_connected(v: &GwSeries) -> Result<Self> {
        if !v.connected {
            return Err(Error::Invalid("primitive table needs a connected series".into()));
        }
        let nq = v.series.terms().map(|(_, b)| b.terms().map(|(_, s)| s.trunc()).min().unwrap_or(EXACT)).min().unwrap_or(0);
        let mut series = BTreeMap::new();
        for h in 0..=nq.min(EXACT - 1) {
            let mut u_terms = Vec::new();
            for (e, b) in v.series.terms() {
                let mut qt_terms = Vec::new();
                for (d, s) in b.terms() {
                    qt_terms.push((d, s.coeff(h - 1)?));
                }
                u_terms.push((e, QSeries::from_terms(Var::Qt, qt_terms, b.trunc())));
            }
            series.insert(h, TruncSeries::from_terms(Var::U, u_terms, v.series.trunc()));
        }
        Ok(PrimitiveTable { series })
    }

    pub fn get(&self, h: i64) -> Result<&UqtSeries> {
        if h < 0 {
            return Err(Error::Invalid(alloc::format!("primitive class with h = {h}")));
        }
        self.series.get(&h).ok_or(Error::Missing(alloc::format!("N_{h}")))
    }
}

/// Target h of the divisor k in the class mβ_h: (m/k)²(h − 1) + 1.
pub fn divisor_target(m: i64, k: i64, h: i64) -> i64 {
    let r = m / k;
    r * r * (h - 1) + 1
}

fn divisor_terms(m: i64, h: i64) -> Result<Vec<(i64, i64)>> {
    if m < 1 {
        return Err(Error::Invalid(alloc::format!("multiplicity {m}")));
    }
    // for h = 0 only k = m survives
    Ok(divisors(m as u64).into_iter().map(|k| k as i64).filter(|&k| h != 0 || k == m).map(|k| (k, divisor_target(m, k, h))).collect())
}

/// N_{mβ_h}(u, q̃) = Σ_{k|m} (1/k) N_{(m/k)²(h−1)+1}(ku, q̃).
pub fn conjecture_b(m: i64, h: i64, tab: &PrimitiveTable) -> Result<UqtSeries> {
    let mut acc: Option<UqtSeries> = None;
    for (k, target) in divisor_terms(m, h)? {
        let term = tab.get(target)?.scale_var(k).scale(&(Q::one() / qint(k)));
        acc = Some(match acc {
            None => term,
            Some(a) => a.try_add(&term)?,
        });
    }
    acc.ok_or(Error::Missing("no divisor terms".into()))
}

/// Σ_{k|m} k^{2g−3+Σδᵢ} · primitive[(m/k)²(h−1)+1].
pub fn conjecture_c2(m: i64, g: i64, h: i64, deltas: &[i64], primitive: &BTreeMap<i64, Q>) -> Result<Q> {
    let exp = 2 * g - 3 + deltas.iter().sum::<i64>();
    let mut acc = Q::zero();
    for (k, target) in divisor_terms(m, h)? {
        let p = primitive.get(&target).ok_or(Error::Missing(alloc::format!("primitive invariant for h = {target}")))?;
        acc += ipow_q(k, exp) * p;
    }
    Ok(acc)
}

/// Exact Laurent polynomial in w.
pub type WPoly = TruncSeries<Q>;

/// Expansion region of the prefactor 1/((wy − 1)(w⁻¹ − y⁻¹)).
pub const KY_REGION: &str = "y·Σ_{a,b≥0}(wy)^a(y/w)^b, |y| < 1";

/// The refined product of the q̃⁻¹ coefficient, with the 1/q normalisation:
/// q-series (outer) of y-series of Laurent polynomials in w.
#[derive(Clone, Debug, PartialEq)]
pub struct KySeries {
    pub series: TruncSeries<TruncSeries<WPoly>>,
    pub region: &'static str,
}

impl KySeries {
    /// Coefficient of y^a q^b.
    pub fn coeff(&self, a: i64, b: i64) -> Result<WPoly> {
        self.series.coeff(b)?.coeff(a)
    }

    /// Coeff_{y^{1−h+d} q^{h−1}}: the lowest y-coefficient of 𝖹 at q^{h−1}q̃^{d−1}.
    pub fn lowest(&self, h: i64, d: i64) -> Result<WPoly> {
        self.coeff(1 - h + d, h - 1)
    }

    /// Substitutes w = `w`.
    pub fn at_w(&self, w: i64) -> TruncSeries<QSeries> {
        self.series.map(|ys: &TruncSeries<WPoly>| {
            ys.map(|p: &WPoly| p.terms().fold(Q::zero(), |acc, (e, c)| acc + c * ipow_q(w, e))).with_var(Var::Y)
        })
    }
}

fn wmono(e: i64) -> WPoly {
    WPoly::monomial(Var::W, e, Q::one(), EXACT)
}

fn ymono(a: i64, c: WPoly) -> TruncSeries<WPoly> {
    TruncSeries::monomial(Var::Y, a, c, EXACT)
}

/// (1/q)·y/((1 − wy)(1 − y/w)) · ∏ 1/((1 − w⁻¹y⁻¹qⁿ)(1 − w⁻¹yqⁿ)(1 − qⁿ)²⁰(1 − wy⁻¹qⁿ)(1 − wyqⁿ)),
/// known for y-exponents below `ny` and q-exponents below `nq`.
pub fn kawai_yoshioka(ny: i64, nq: i64) -> Result<KySeries> {
    if nq < -1 {
        return Err(Error::Invalid(alloc::format!("q bound {nq}")));
    }
    let n_prod = nq + 1;
    let one = TruncSeries::<WPoly>::one_in(Var::Y, EXACT);
    let mut prod: TruncSeries<TruncSeries<WPoly>> = TruncSeries::constant(Var::Q, one.clone(), n_prod.max(0));
    for n in 1..n_prod.max(1) {
        for (a, b, mult) in [(-1i64, -1i64, 1u32), (1, -1, 1), (0, 0, 20), (-1, 1, 1), (1, 1, 1)] {
            // 1/(1 − y^a w^b qⁿ) = Σ_k y^{ak} w^{bk} q^{nk}
            let geom = TruncSeries::from_terms(
                Var::Q,
                (0..).map(|k| k * n).take_while(|e| *e < n_prod).map(|e| (e, ymono(a * e / n, wmono(b * e / n)))),
                n_prod,
            );
            for _ in 0..mult {
                prod = &prod * &geom;
            }
        }
    }
    // each qⁿ coefficient is a Laurent polynomial with y-exponents ≥ −n
    let pre_trunc = ny + n_prod + 1;
    let pre = TruncSeries::from_terms(
        Var::Y,
        (0..(pre_trunc - 1).max(0)).map(|s| {
            let c = WPoly::from_terms(Var::W, (0..=s).map(|a| (2 * a - s, Q::one())), EXACT);
            (1 + s, c)
        }),
        pre_trunc,
    );
    let series = prod.map(|ys: &TruncSeries<WPoly>| (ys * &pre).truncate(ny)).shift(-1);
    Ok(KySeries { series, region: KY_REGION })
}
