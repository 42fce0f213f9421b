//! The Igusa cusp form χ₁₀ by three constructions, the windowed expansion
//! of 1/χ₁₀ in the region 0 < |q| < |p| < 1, the coefficients ψ_d, the
//! polar parts φ_d and the finite parts H_d.
//!
//! A Siegel series is a q̃-series (outer) of q-series (inner) of Laurent
//! polynomials in t. A box (nq, nqt) holds all monomials q^h q̃^d with
//! h ≤ nq and d ≤ nqt.

use crate::error::{Error, Result};
use crate::forms::{delta_inverse, hecke_v, z_function_and_c, Blocks, CoefficientTable};
use crate::jacobi::{
    agree_on_window, certify, from_q, lift, trim_to_finite, window_inverse, window_inverse_w, JSeries, JacobiSeries,
    WSeries, WindowPoly,
};
use crate::laurent::HalfLaurent;
use crate::scalar::{binom_int, qbig, qfrac, qint};
use crate::series::{TruncSeries, Var, EXACT};
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

pub type Siegel = TruncSeries<JSeries>;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Chi10Method {
    Product,
    Hecke,
    Lift,
}

/// Cuts a Siegel series down to the box, failing if any part of the box is unknown.
pub fn to_box(s: &Siegel, nq: i64, nqt: i64) -> Result<Siegel> {
    if s.trunc() <= nqt {
        return Err(Error::Unknown { exp: nqt, trunc: s.trunc() });
    }
    let mut rows = Vec::new();
    for d in 0..=nqt {
        let row = s.coeff(d)?;
        if row.trunc() <= nq {
            return Err(Error::Unknown { exp: nq, trunc: row.trunc() });
        }
        rows.push(row.truncate(nq + 1).with_var(Var::Q));
    }
    Ok(Siegel::from_dense(Var::Qt, 0, rows, nqt + 1))
}

/// Dense grid view: grid[d][h] is the coefficient of q^h q̃^d.
fn to_grid(s: &Siegel, nq: i64, nqt: i64) -> Result<Vec<Vec<HalfLaurent>>> {
    let b = to_box(s, nq, nqt)?;
    Ok((0..=nqt).map(|d| (0..=nq).map(|h| b.at(d).at(h)).collect()).collect())
}

fn from_grid(grid: Vec<Vec<HalfLaurent>>, nq: i64, nqt: i64) -> Siegel {
    let rows = grid.into_iter().map(|row| JSeries::from_dense(Var::Q, 0, row, nq + 1)).collect();
    Siegel::from_dense(Var::Qt, 0, rows, nqt + 1)
}

/// Exchanges the roles of q and q̃ on a square box.
pub fn swap_q_qt(s: &Siegel, n: i64) -> Result<Siegel> {
    let g = to_grid(s, n, n)?;
    let t: Vec<Vec<HalfLaurent>> = (0..=n as usize).map(|h| (0..=n as usize).map(|d| g[d][h].clone()).collect()).collect();
    Ok(from_grid(t, n, n))
}

/// c-table large enough for the product on the box.
pub fn c_table_for(nq: i64, nqt: i64) -> Result<CoefficientTable> {
    let n = (nq.max(1) - 1) * (nqt.max(1) - 1) + 2;
    Ok(z_function_and_c(n)?.1)
}

/// pq q̃ ∏ (1 − p^k q^h q̃^d)^{c(4hd − k²)} over h, d ≥ 0 with h > 0 or d > 0,
/// or h = d = 0 and k < 0.
pub fn chi10_product(nq: i64, nqt: i64) -> Result<Siegel> {
    let table = c_table_for(nq, nqt)?;
    chi10_product_with(&table, nq, nqt)
}

pub fn chi10_product_with(table: &CoefficientTable, nq: i64, nqt: i64) -> Result<Siegel> {
    // the prefactor q q̃ takes one power of each, so factors matter up to (nq − 1, nqt − 1)
    let (hq, hd) = ((nq - 1) as usize, (nqt - 1) as usize);
    let mut grid = vec![vec![HalfLaurent::zero(); hq + 1]; hd + 1];
    // p(1 − p⁻¹)^{c(−1)}
    let cm1 = table.c(-1)?.to_i64().ok_or(Error::Invalid("c(-1)".into()))?;
    let base = HalfLaurent::p_pow(1, qint(1)).mul(&HalfLaurent::from_terms([(0, qint(1)), (-2, qint(-1))]).pow(cm1 as u32));
    if nq >= 1 && nqt >= 1 {
        grid[0][0] = base;
    }
    for d in 0..=hd {
        for h in 0..=hq {
            if h == 0 && d == 0 {
                continue;
            }
            let m = 4 * (h * d) as i64;
            let kmax = (m + 1).isqrt() + 1;
            for k in -kmax..=kmax {
                if m - k * k < -1 {
                    continue;
                }
                let c = table.c(m - k * k)?;
                if c.is_zero() {
                    continue;
                }
                apply_factor(&mut grid, d, h, k, &c);
            }
        }
    }
    // shift by q q̃
    let mut shifted = vec![vec![HalfLaurent::zero(); nq as usize + 1]; nqt as usize + 1];
    for d in 0..=hd {
        for h in 0..=hq {
            shifted[d + 1][h + 1] = grid[d][h].clone();
        }
    }
    Ok(from_grid(shifted, nq, nqt))
}

/// grid ← grid · (1 − p^k q^h q̃^d)^c, in place.
fn apply_factor(grid: &mut [Vec<HalfLaurent>], d: usize, h: usize, k: i64, c: &BigInt) {
    let (nd, nh) = (grid.len(), grid[0].len());
    let mut jmax = usize::MAX;
    if let Some(j) = (nd - 1).checked_div(d) {
        jmax = jmax.min(j);
    }
    if let Some(j) = (nh - 1).checked_div(h) {
        jmax = jmax.min(j);
    }
    let c = c.to_i64().expect("c(m) fits in i64");
    let coeffs: Vec<HalfLaurent> = (0..=jmax)
        .map(|j| {
            let b = binom_int(c, j as u64);
            let sign = if j % 2 == 0 { qbig(b) } else { -qbig(b) };
            HalfLaurent::p_pow(k * j as i64, sign)
        })
        .collect();
    for dd in (0..nd).rev() {
        for hh in (0..nh).rev() {
            let mut acc = grid[dd][hh].clone();
            for (j, cj) in coeffs.iter().enumerate().skip(1) {
                if j * d > dd || j * h > hh {
                    break;
                }
                let src = &grid[dd - j * d][hh - j * h];
                if !src.is_zero() {
                    acc = acc.add(&src.mul(cj));
                }
            }
            grid[dd][hh] = acc;
        }
    }
}

/// −q̃F²Δ·exp(−Σ_{l≥1} q̃^l (Z|_{0,1}V_l)). With F² = −K² the prefactor is q̃K²Δ.
pub fn chi10_exp_hecke(nq: i64, nqt: i64) -> Result<Siegel> {
    let zn = (nq - 1).max(0) * (nqt - 1).max(1) + 1;
    let (z, _) = z_function_and_c(zn.max(2))?;
    let mut rows = Vec::new();
    for l in 1..nqt {
        let v = hecke_v(&z, l, nq)?;
        rows.push(v.series.neg_series());
    }
    let exponent = Siegel::from_dense(Var::Qt, 1, rows, nqt);
    let e = exponent.exp_series()?;
    let b = Blocks::new(nq + 1);
    let pref = &b.k2() * &from_q(&b.delta);
    let pref = Siegel::monomial(Var::Qt, 1, pref, EXACT);
    to_box(&(&pref * &e), nq, nqt)
}

/// −Σ_{ℓ≥1} q̃^ℓ (F²Δ|_{10,1}V_ℓ) = Σ_ℓ q̃^ℓ (K²Δ|_{10,1}V_ℓ).
pub fn chi10_additive_lift(nq: i64, nqt: i64) -> Result<Siegel> {
    let b = Blocks::new(nq * nqt.max(1) + 1);
    let phi = JacobiSeries::with_meta(&b.k2() * &from_q(&b.delta), 10, 2);
    let mut rows = vec![JSeries::zero(Var::Q, nq + 1)];
    for l in 1..=nqt {
        rows.push(hecke_v(&phi, l, nq + 1)?.series);
    }
    to_box(&Siegel::from_dense(Var::Qt, 0, rows, nqt + 1), nq, nqt)
}

pub fn chi10(method: Chi10Method, nq: i64, nqt: i64) -> Result<Siegel> {
    match method {
        Chi10Method::Product => chi10_product(nq, nqt),
        Chi10Method::Hecke => chi10_exp_hecke(nq, nqt),
        Chi10Method::Lift => chi10_additive_lift(nq, nqt),
    }
}

/// ψ_d for d = −1..=dmax as windowed q-series, known below q^{q_end} on the
/// p-window [lo, hi].
#[derive(Clone, Debug)]
pub struct PsiFamily {
    pub psi: BTreeMap<i64, WSeries>,
    pub q_end: i64,
    pub lo: i64,
    pub hi: i64,
    /// t-precision used for the inversion of the leading coefficient.
    pub t_rel: usize,
}

impl PsiFamily {
    pub fn get(&self, d: i64) -> Result<&WSeries> {
        self.psi.get(&d).ok_or(Error::Missing(alloc::format!("psi_{d}")))
    }
}

/// Windowed inverse of χ₁₀. The leading coefficient K²Δ starts with
/// (t − t⁻¹)², inverted in positive powers of t; the precision is doubled
/// until every ψ_d is certified on the window.
pub fn inverse_chi10(q_end: i64, dmax: i64, lo: i64, hi: i64) -> Result<PsiFamily> {
    let nq = q_end + 2;
    let nqt = dmax + 2;
    let chi = chi10_product(nq, nqt)?;
    let mut t_rel = (2 * (hi - lo) + 4 * q_end + 8).max(16) as usize;
    for _ in 0..6 {
        let fam = inverse_from(&chi, q_end, dmax, lo, hi, t_rel)?;
        let ok = fam.psi.values().all(|w| certify(w, q_end, lo, hi).is_ok());
        if ok {
            return Ok(fam);
        }
        t_rel *= 2;
    }
    Err(Error::Window { lo, hi, certified: -1 })
}

fn inverse_from(chi: &Siegel, q_end: i64, dmax: i64, lo: i64, hi: i64, t_rel: usize) -> Result<PsiFamily> {
    // χ₁₀/q̃ as a q̃-series of windowed q-series
    // row q̃⁰ of the box is O(q^{nq+1}) rather than an exact zero, so start at q̃¹
    let rows: Vec<WSeries> = (1..chi.trunc()).map(|d| chi.coeff(d).map(|r| lift(&r))).collect::<Result<_>>()?;
    let w = TruncSeries::from_dense(Var::Qt, 0, rows, chi.trunc() - 1);
    let lead = w.coeff(0)?;
    let lead_inv = window_inverse_w(&lead, (q_end + 1) as usize, t_rel)?;
    let inv = w.invert_with(lead_inv, (dmax + 2) as usize)?.shift(-1);
    let mut psi = BTreeMap::new();
    for d in -1..=dmax {
        psi.insert(d, inv.coeff(d)?);
    }
    Ok(PsiFamily { psi, q_end, lo, hi, t_rel })
}

/// χ₁₀ · (1/χ₁₀) = 1 on the window for every q̃^d, d ≤ dmax, and q below q_end.
pub fn check_inverse(fam: &PsiFamily, dmax: i64) -> Result<bool> {
    let chi = chi10_product(fam.q_end + 2, dmax + 3)?;
    let w: TruncSeries<WSeries> = chi.map(lift);
    let inv = TruncSeries::from_terms(Var::Qt, fam.psi.iter().map(|(d, s)| (*d, s.clone())), dmax + 1);
    let prod = &w * &inv;
    for d in 0..=dmax.min(prod.trunc() - 1) {
        let got = prod.coeff(d)?;
        let want = if d == 0 { one_w(fam.q_end) } else { WSeries::zero(Var::Q, fam.q_end) };
        if !agree_on_window(&got, &want, fam.q_end - 1, fam.lo, fam.hi)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn one_w(n: i64) -> WSeries {
    WSeries::constant(Var::Q, WindowPoly::one_in(Var::T, EXACT), n)
}

/// Windowed closed forms built from finite pieces and the windowed 1/K².
#[derive(Clone, Debug)]
pub struct ClosedForms {
    pub blocks: Blocks,
    pub inv_k2: WSeries,
    pub inv_delta: WSeries,
    pub wp: WSeries,
}

impl ClosedForms {
    pub fn new(q_end: i64, t_rel: usize) -> Result<Self> {
        let blocks = Blocks::new(q_end + 3);
        let inv_k2 = window_inverse(&blocks.k2(), (q_end + 2) as usize, t_rel)?;
        let inv_delta = lift(&from_q(&delta_inverse(q_end + 1)));
        let wp = &(&lift(&blocks.g) * &inv_k2) + &lift(&blocks.e2_12());
        Ok(ClosedForms { blocks, inv_k2, inv_delta, wp })
    }

    fn c(&self, x: &crate::series::QSeries) -> WSeries {
        lift(&from_q(x))
    }

    /// ψ_d as printed, for d = −1..=2.
    pub fn psi(&self, d: i64) -> Result<WSeries> {
        let b = &self.blocks;
        let k2 = lift(&b.k2());
        let wp = &self.wp;
        let s = |x: &WSeries, r: crate::scalar::Q| x.map(|c| c.scale(&r));
        Ok(match d {
            -1 => &self.inv_k2 * &self.inv_delta,
            0 => s(&(wp * &self.inv_delta), qint(24)),
            1 => {
                let inner = &s(&(wp * wp), qint(324)) + &s(&self.c(&b.e4), qfrac(3, 4));
                &(&inner * &k2) * &self.inv_delta
            }
            2 => {
                let wp2 = wp * wp;
                let inner = &(&s(&(&wp2 * wp), qint(3200)) + &s(&(&self.c(&b.e4) * wp), qfrac(64, 3)))
                    + &s(&self.c(&b.e6), qfrac(10, 27));
                &(&inner * &(&k2 * &k2)) * &self.inv_delta
            }
            _ => return Err(Error::Invalid(alloc::format!("no closed form for psi_{d}"))),
        })
    }

    /// φ_d = a(d)G^{d+1}/(F²Δ) = −a(d)G^{d+1}/(K²Δ).
    pub fn polar_part(&self, d: i64) -> Result<WSeries> {
        if d < -1 {
            return Err(Error::Invalid(alloc::format!("polar part index {d}")));
        }
        let a = crate::forms::a_table(d.max(0));
        let gp = lift(&self.blocks.g.pow((d + 1) as u32));
        let r = &(&gp * &self.inv_k2) * &self.inv_delta;
        Ok(r.map(|c| c.scale(&-qbig(a[&d].clone()))))
    }
}

/// ψ_d, φ_d and H_{d+1} = −ψ_d − φ_d for one d.
#[derive(Clone, Debug)]
pub struct Split {
    pub d: i64,
    pub psi: WSeries,
    pub phi: WSeries,
    /// The finite part, trimmed to Laurent polynomials.
    pub h: JSeries,
}

/// Splits −ψ_d into its polar part and the finite part H_{d+1}, demanding
/// that −ψ_d − φ_d vanishes on the top `margin` slots of the window.
pub fn split(fam: &PsiFamily, forms: &ClosedForms, d: i64, margin: i64) -> Result<Split> {
    let psi = fam.get(d)?.clone();
    let phi = forms.polar_part(d)?;
    let diff = (&psi + &phi).neg_series();
    let h = trim_to_finite(&diff, fam.q_end, fam.lo, fam.hi, margin)?;
    Ok(Split { d, psi, phi, h })
}

/// H_d in the generating-series indexing Σ H_d q̃^{d−1}: H_d = −ψ_{d−1} − φ_{d−1}.
pub fn hilb_h(d: i64, q_end: i64, lo: i64, hi: i64, margin: i64) -> Result<JSeries> {
    if d < 0 {
        return Err(Error::Invalid(alloc::format!("H_{d}")));
    }
    let fam = inverse_chi10(q_end, d - 1, lo, hi)?;
    let forms = ClosedForms::new(q_end, fam.t_rel)?;
    Ok(split(&fam, &forms, d - 1, margin)?.h)
}

/// Number of consecutive vanishing p-slots at the top of the window, for
/// every q-coefficient below `q_end` (the minimum over q).
pub fn margin_width(w: &WSeries, q_end: i64, lo: i64, hi: i64) -> Result<i64> {
    certify(w, q_end, lo, hi)?;
    let mut width = hi - lo + 1;
    for e in w.val_bound().min(q_end)..q_end {
        let c = w.coeff(e)?;
        let mut k = hi;
        while k >= lo && c.coeff(2 * k)?.is_zero() && c.coeff(2 * k + 1)?.is_zero() {
            k -= 1;
        }
        width = width.min(hi - k);
    }
    Ok(width)
}

/// −2E₂/Δ + 24G/(F²Δ) = −24℘/Δ on the window, with ℘ from its (p, q) expansion.
pub fn correction_identity(q_end: i64, lo: i64, hi: i64) -> Result<bool> {
    let t_rel = (4 * hi + 8 * q_end + 16) as usize;
    let cf = ClosedForms::new(q_end, t_rel)?;
    let b = &cf.blocks;
    let e2 = lift(&from_q(&b.e2));
    let lhs = &(&e2 * &cf.inv_delta).map(|c| c.scale(&qint(-2)))
        + &(&(&lift(&b.g) * &cf.inv_k2) * &cf.inv_delta).map(|c| c.scale(&qint(-24)));
    let wp = crate::forms::weierstrass_p_window(q_end + 2, 2 * hi + 2 * q_end + 4);
    let rhs = (&wp * &cf.inv_delta).map(|c| c.scale(&qint(-24)));
    agree_on_window(&lhs, &rhs, q_end, lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_constructions_agree_small() {
        let a = chi10_product(3, 3).unwrap();
        let b = chi10_exp_hecke(3, 3).unwrap();
        let c = chi10_additive_lift(3, 3).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(swap_q_qt(&a, 3).unwrap(), a);
    }

    #[test]
    fn chi10_first_row_is_minus_f2_delta() {
        let a = chi10_product(4, 2).unwrap();
        let b = Blocks::new(5);
        let want = &b.k2() * &from_q(&b.delta);
        assert_eq!(a.at(1), want.truncate(5));
        assert!(a.at(0).is_zero_series());
        assert_eq!(a.at(1).valuation(), Some(1));
    }

    #[test]
    fn psi_minus_one_and_zero() {
        let fam = inverse_chi10(3, 1, -4, 4).unwrap();
        let cf = ClosedForms::new(3, fam.t_rel).unwrap();
        for d in -1..=1 {
            let want = cf.psi(d).unwrap();
            assert!(agree_on_window(fam.get(d).unwrap(), &want, 3, -4, 4).unwrap(), "psi_{d}");
        }
        assert!(check_inverse(&fam, 1).unwrap());
    }

    #[test]
    fn h1_is_minus_two_e2_over_delta() {
        let h1 = hilb_h(1, 3, -5, 5, 3).unwrap();
        let want = from_q(&(&crate::forms::eisenstein(2, 5).unwrap() * &delta_inverse(3)).scale_int(-2));
        assert!(h1.agrees_with(&want));
        assert_eq!(h1.trunc(), 3);
    }

    #[test]
    fn h0_vanishes() {
        let h0 = hilb_h(0, 3, -5, 5, 3).unwrap();
        assert!(h0.is_zero_series());
    }

    #[test]
    fn correction_identity_holds() {
        assert!(correction_identity(3, -5, 5).unwrap());
    }

    #[test]
    fn polar_generating_series() {
        // Σ_d φ_d q̃^d = (1/F²Δ)(1/q̃)∏(1 − (q̃G)^n)^{−24}: coefficientwise a(d) = χ(S^[d+1])
        let g = crate::forms::gottsche_product(6);
        let a = crate::forms::a_table(4);
        for d in -1..=4 {
            assert_eq!(g.at(d + 1), qbig(a[&d].clone()));
        }
    }
}
