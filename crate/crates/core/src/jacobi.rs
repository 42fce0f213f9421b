//! q-series with Laurent-polynomial coefficients in t, and their windowed
//! counterparts whose coefficients are one-sided t-series.
//!
//! A windowed coefficient is a `TruncSeries<Q>` in t: zero below its
//! valuation, unknown from its truncation on. This is the expansion in
//! positive powers of p, i.e. the region |q| < |p| < 1. A window [a, b] of
//! p-exponents is certified when every coefficient is known through t^{2b+1}.

use crate::error::{Error, Result};
use crate::laurent::HalfLaurent;
use crate::scalar::Q;
use crate::series::{Coeff, TruncSeries, Var};
use alloc::vec::Vec;

/// q-series over finite Laurent polynomials in t.
pub type JSeries = TruncSeries<HalfLaurent>;
/// One-sided t-series; the coefficient ring of windowed objects.
pub type WindowPoly = TruncSeries<Q>;
/// q-series over windowed coefficients.
pub type WSeries = TruncSeries<WindowPoly>;

/// A Jacobi-type series with optional (weight, index) metadata.
///
/// `index2` is twice the index, so index 1/2 is stored as 1. The value
/// represented is `i^i_power · series`; F is stored as K = iF with
/// `i_power = 3`.
#[derive(Clone, PartialEq, Debug)]
pub struct JacobiSeries {
    pub series: JSeries,
    pub weight: Option<i64>,
    pub index2: Option<i64>,
    pub i_power: u8,
}

impl JacobiSeries {
    pub fn new(series: JSeries) -> Self {
        JacobiSeries { series, weight: None, index2: None, i_power: 0 }
    }

    pub fn with_meta(series: JSeries, weight: i64, index2: i64) -> Self {
        JacobiSeries { series, weight: Some(weight), index2: Some(index2), i_power: 0 }
    }

    /// Integer index, if the metadata carries one.
    pub fn int_index(&self) -> Option<i64> {
        self.index2.filter(|m| m % 2 == 0).map(|m| m / 2)
    }

    /// Weak-Jacobi support bound r² ≤ 4nm + m² on every known coefficient.
    pub fn support_ok(&self) -> bool {
        let Some(m2) = self.index2 else { return true };
        self.series.terms().all(|(n, c)| {
            c.terms().iter().all(|(e, _)| e * e <= 8 * n * m2 + m2 * m2)
        })
    }
}

/// Constant-in-t embedding of a rational q-series.
pub fn from_q(s: &TruncSeries<Q>) -> JSeries {
    s.map(|c| HalfLaurent::constant(c.clone()))
}

/// ∂_z = p d/dp applied to every coefficient.
pub fn dz(s: &JSeries) -> JSeries {
    s.map(|c| c.derivative_z())
}

/// t-coefficient of every q-coefficient, as a rational q-series.
pub fn t_slice(s: &JSeries, e: i64) -> TruncSeries<Q> {
    s.map(|c| c.coeff(e))
}

pub fn constant_term_in_t(s: &JSeries) -> TruncSeries<Q> {
    t_slice(s, 0)
}

/// Exact lift of a finite series to windowed coefficients.
pub fn lift(s: &JSeries) -> WSeries {
    s.map(|c| c.to_window())
}

/// Windowed inverse of a q-series whose leading coefficient is a Laurent
/// polynomial. The leading coefficient is inverted as a series in positive
/// powers of t with `t_rel` known terms; `q_rel` q-coefficients are produced.
pub fn window_inverse(s: &JSeries, q_rel: usize, t_rel: usize) -> Result<WSeries> {
    let w = lift(s);
    window_inverse_w(&w, q_rel, t_rel)
}

pub fn window_inverse_w(w: &WSeries, q_rel: usize, t_rel: usize) -> Result<WSeries> {
    let v = w.valuation().ok_or(Error::NotInvertible)?;
    let lead = w.coeff(v)?;
    let lead_inv = lead.invert_rel(t_rel)?;
    w.invert_with(lead_inv, q_rel)
}

/// Lowest truncation among the coefficients at q-exponents below `q_end`.
/// Coefficients are certified through t^{result − 1}.
pub fn certified_t(w: &WSeries, q_end: i64) -> Result<i64> {
    if w.trunc() < q_end {
        return Err(Error::Unknown { exp: q_end - 1, trunc: w.trunc() });
    }
    let lo = w.val_bound().min(q_end);
    let mut best = i64::MAX;
    for e in lo..q_end {
        best = best.min(w.coeff(e)?.trunc());
    }
    Ok(best)
}

/// Checks that the p-window [lo, hi] is certified for q-exponents below `q_end`.
pub fn certify(w: &WSeries, q_end: i64, lo: i64, hi: i64) -> Result<()> {
    let c = certified_t(w, q_end)?;
    if c < 2 * hi + 2 {
        return Err(Error::Window { lo, hi, certified: c });
    }
    Ok(())
}

/// q-exponent paired with the sparse t-expansion of its coefficient.
pub type WindowRows = Vec<(i64, Vec<(i64, Q)>)>;

/// Restricts every coefficient to the t-exponents of the p-window [lo, hi].
/// Reading outside the certified region is an error.
pub fn restrict(w: &WSeries, q_end: i64, lo: i64, hi: i64) -> Result<WindowRows> {
    certify(w, q_end, lo, hi)?;
    let mut out = Vec::new();
    for e in w.val_bound().min(q_end)..q_end {
        let c = w.coeff(e)?;
        let entries: Vec<(i64, Q)> = (2 * lo..=2 * hi + 1)
            .filter_map(|k| c.coeff(k).ok().filter(|x| !Coeff::is_zero_elem(x)).map(|x| (k, x)))
            .collect();
        out.push((e, entries));
    }
    Ok(out)
}

/// Equality on a p-window for q-exponents below `q_end`.
pub fn agree_on_window(a: &WSeries, b: &WSeries, q_end: i64, lo: i64, hi: i64) -> Result<bool> {
    let nonzero = |v: Vec<(i64, Vec<(i64, Q)>)>| v.into_iter().filter(|(_, c)| !c.is_empty()).collect::<Vec<_>>();
    Ok(nonzero(restrict(a, q_end, lo, hi)?) == nonzero(restrict(b, q_end, lo, hi)?))
}

/// Trims a windowed series to finite Laurent coefficients.
///
/// Every coefficient must vanish on the top `margin` p-slots of the window
/// (t-exponents from 2(hi − margin + 1) through 2hi + 1) and be known there.
/// Returns the finite part below that margin.
pub fn trim_to_finite(w: &WSeries, q_end: i64, lo: i64, hi: i64, margin: i64) -> Result<JSeries> {
    certify(w, q_end, lo, hi)?;
    let cut = 2 * (hi - margin + 1);
    let mut coeffs = Vec::new();
    let start = w.val_bound().min(q_end);
    for e in start..q_end {
        let c = w.coeff(e)?;
        for k in cut..=2 * hi + 1 {
            if !c.coeff(k)?.is_zero_elem() {
                return Err(Error::Margin(alloc::format!("q^{e} t^{k}")));
            }
        }
        if c.val_bound() < 2 * lo {
            return Err(Error::Margin(alloc::format!("q^{e} below window at t^{}", c.val_bound())));
        }
        coeffs.push(HalfLaurent::from_terms(
            c.terms().filter(|(k, _)| *k < cut).map(|(k, x)| (k, x.clone())),
        ));
    }
    Ok(TruncSeries::from_dense(Var::Q, start, coeffs, q_end))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qint;
    use crate::series::EXACT;

    #[test]
    fn inverse_of_t_minus_inv_squared() {
        // 1/(t − t⁻¹)² = t²/(1 − t²)² = Σ k p^k
        let k2 = HalfLaurent::t_minus_inv().pow(2);
        let s = JSeries::constant(Var::Q, k2, EXACT);
        let inv = window_inverse(&s, 1, 30).unwrap();
        let c = inv.coeff(0).unwrap();
        for k in 1..10 {
            assert_eq!(c.coeff(2 * k).unwrap(), qint(k));
            assert_eq!(c.coeff(2 * k + 1).unwrap(), qint(0));
        }
        assert!(c.coeff(c.trunc()).is_err());
        certify(&inv, 1, -3, 10).unwrap();
        assert!(certify(&inv, 1, -3, 40).is_err());
    }

    #[test]
    fn trim_detects_margin() {
        let k2 = HalfLaurent::t_minus_inv().pow(2);
        let s = JSeries::constant(Var::Q, k2.clone(), 1);
        let w = lift(&s);
        let back = trim_to_finite(&w, 1, -3, 3, 2).unwrap();
        assert_eq!(back.coeff(0).unwrap(), k2);
        let inv = window_inverse(&s, 1, 30).unwrap();
        assert!(trim_to_finite(&inv, 1, -3, 10, 3).is_err());
    }
}
