//! Truncated Laurent series in one formal variable over a pluggable
//! coefficient ring.
//!
//! A series stores its valuation `val`, a dense coefficient vector and an
//! exclusive truncation order `trunc`. Coefficients below `val` are zero,
//! coefficients at or above `trunc` are unknown and reading them is an error.
//! `trunc == EXACT` marks a series with no unknown coefficients (a finite
//! Laurent polynomial).
//!
//! Invariants kept by every constructor:
//! - the stored vector has no leading or trailing zeros;
//! - a zero series has an empty vector and `val == trunc`;
//! - `val + len <= trunc`.

use crate::error::{Error, Result};
use crate::scalar::{qint, Q, QI};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;
use core::ops::{Add, Mul, Neg, Sub};
use num_traits::{One, Zero};

pub const EXACT: i64 = i64::MAX;

/// `n + v` keeping `EXACT` fixed.
pub fn add_prec(n: i64, v: i64) -> i64 {
    if n == EXACT {
        EXACT
    } else {
        n.saturating_add(v)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Var {
    /// Constants produced by `Coeff::zero()`/`one()`; adopts the other operand's tag.
    Free,
    Q,
    /// q̃
    Qt,
    U,
    /// t with t² = p, used for windowed p-expansions.
    T,
    Y,
    W,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::Free => "free",
            Var::Q => "q",
            Var::Qt => "qt",
            Var::U => "u",
            Var::T => "t",
            Var::Y => "y",
            Var::W => "w",
        }
    }

    pub fn from_name(s: &str) -> Option<Var> {
        Some(match s {
            "free" => Var::Free,
            "q" => Var::Q,
            "qt" => Var::Qt,
            "u" => Var::U,
            "t" => Var::T,
            "y" => Var::Y,
            "w" => Var::W,
            _ => return None,
        })
    }

    fn join(self, other: Var) -> Result<Var> {
        match (self, other) {
            (Var::Free, v) | (v, Var::Free) => Ok(v),
            (a, b) if a == b => Ok(a),
            (a, b) => Err(Error::VarMismatch(a, b)),
        }
    }
}

/// Commutative coefficient ring for [`TruncSeries`].
pub trait Coeff: Clone + PartialEq + Debug {
    fn zero_elem() -> Self;
    fn one_elem() -> Self;
    /// True only for an exact zero.
    fn is_zero_elem(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn negate(&self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn scale(&self, s: &Q) -> Self;
    fn try_inv(&self) -> Option<Self>;

    fn minus(&self, o: &Self) -> Self {
        self.plus(&o.negate())
    }
    fn plus_assign(&mut self, o: &Self) {
        *self = self.plus(o);
    }
    fn plus_mul(&mut self, a: &Self, b: &Self) {
        self.plus_assign(&a.times(b));
    }
}

impl Coeff for Q {
    fn zero_elem() -> Self {
        Zero::zero()
    }
    fn one_elem() -> Self {
        One::one()
    }
    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn negate(&self) -> Self {
        -self.clone()
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn scale(&self, s: &Q) -> Self {
        self * s
    }
    fn try_inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn plus_assign(&mut self, o: &Self) {
        *self += o;
    }
    fn plus_mul(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
}

impl Coeff for QI {
    fn zero_elem() -> Self {
        QI::default()
    }
    fn one_elem() -> Self {
        QI::real(One::one())
    }
    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }
    fn plus(&self, o: &Self) -> Self {
        QI::new(&self.re + &o.re, &self.im + &o.im)
    }
    fn negate(&self) -> Self {
        QI::new(-self.re.clone(), -self.im.clone())
    }
    fn times(&self, o: &Self) -> Self {
        QI::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
    fn scale(&self, s: &Q) -> Self {
        QI::new(&self.re * s, &self.im * s)
    }
    fn try_inv(&self) -> Option<Self> {
        self.inv()
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct TruncSeries<C> {
    var: Var,
    val: i64,
    coeffs: Vec<C>,
    trunc: i64,
}

impl<C: Coeff> TruncSeries<C> {
    /// Builds a series from a dense block starting at exponent `start`.
    /// Entries at or beyond `trunc` are dropped.
    pub fn from_dense(var: Var, start: i64, mut coeffs: Vec<C>, trunc: i64) -> Self {
        if trunc != EXACT && start < trunc {
            let keep = (trunc - start) as usize;
            coeffs.truncate(keep);
        } else if trunc != EXACT {
            coeffs.clear();
        }
        let mut s = TruncSeries { var, val: start, coeffs, trunc };
        s.normalize();
        s
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, C)>>(var: Var, terms: I, trunc: i64) -> Self {
        let terms: Vec<(i64, C)> = terms.into_iter().filter(|(e, c)| *e < trunc && !c.is_zero_elem()).collect();
        if terms.is_empty() {
            return Self::zero(var, trunc);
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut v = vec![C::zero_elem(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            v[(e - lo) as usize].plus_assign(&c);
        }
        Self::from_dense(var, lo, v, trunc)
    }

    pub fn zero(var: Var, trunc: i64) -> Self {
        TruncSeries { var, val: trunc, coeffs: Vec::new(), trunc }
    }

    pub fn exact_zero(var: Var) -> Self {
        Self::zero(var, EXACT)
    }

    pub fn monomial(var: Var, exp: i64, c: C, trunc: i64) -> Self {
        Self::from_dense(var, exp, vec![c], trunc)
    }

    pub fn constant(var: Var, c: C, trunc: i64) -> Self {
        Self::monomial(var, 0, c, trunc)
    }

    pub fn one_in(var: Var, trunc: i64) -> Self {
        Self::constant(var, C::one_elem(), trunc)
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().take_while(|c| c.is_zero_elem()).count();
        if lead == self.coeffs.len() {
            self.coeffs.clear();
            self.val = self.trunc;
            return;
        }
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.val += lead as i64;
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero_elem()) {
            self.coeffs.pop();
        }
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn with_var(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    /// Exclusive truncation order.
    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    pub fn is_exact(&self) -> bool {
        self.trunc == EXACT
    }

    /// Exponent of the first nonzero coefficient, `None` for the zero series.
    pub fn valuation(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.val)
        }
    }

    /// Lower bound for all nonzero exponents (the truncation order for zero).
    pub fn val_bound(&self) -> i64 {
        self.val
    }

    /// One past the highest stored exponent.
    pub fn end(&self) -> i64 {
        self.val.saturating_add(self.coeffs.len() as i64)
    }

    pub fn is_zero_series(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, e: i64) -> Result<C> {
        if e >= self.trunc {
            return Err(Error::Unknown { exp: e, trunc: self.trunc });
        }
        Ok(self.coeff_or_zero(e))
    }

    /// Reads a coefficient; panics on an unknown exponent.
    pub fn at(&self, e: i64) -> C {
        match self.coeff(e) {
            Ok(c) => c,
            Err(err) => panic!("{err}"),
        }
    }

    fn coeff_or_zero(&self, e: i64) -> C {
        if e < self.val || e >= self.end() {
            C::zero_elem()
        } else {
            self.coeffs[(e - self.val) as usize].clone()
        }
    }

    pub fn coeff_ref(&self, e: i64) -> Option<&C> {
        if e < self.val || e >= self.end() {
            None
        } else {
            Some(&self.coeffs[(e - self.val) as usize])
        }
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> {
        let v = self.val;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero_elem())
            .map(move |(i, c)| (v + i as i64, c))
    }

    pub fn truncate(&self, n: i64) -> Self {
        if n >= self.trunc {
            return self.clone();
        }
        Self::from_dense(self.var, self.val, self.coeffs.clone(), n)
    }

    /// Forget everything at or beyond `n` and also mark it unknown, even for exact input.
    pub fn with_trunc(&self, n: i64) -> Self {
        self.truncate(n)
    }

    pub fn map<D: Coeff, F: FnMut(&C) -> D>(&self, mut f: F) -> TruncSeries<D> {
        TruncSeries::from_dense(self.var, self.val, self.coeffs.iter().map(&mut f).collect(), self.trunc)
    }

    pub fn map_with_exp<D: Coeff, F: FnMut(i64, &C) -> D>(&self, mut f: F) -> TruncSeries<D> {
        let v = self.val;
        TruncSeries::from_dense(
            self.var,
            self.val,
            self.coeffs.iter().enumerate().map(|(i, c)| f(v + i as i64, c)).collect(),
            self.trunc,
        )
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        let var = self.var.join(o.var)?;
        let trunc = self.trunc.min(o.trunc);
        if self.is_zero_series() {
            return Ok(o.truncate(trunc).with_var(var));
        }
        if o.is_zero_series() {
            return Ok(self.truncate(trunc).with_var(var));
        }
        let lo = self.val.min(o.val);
        let hi = self.end().max(o.end()).min(trunc);
        if hi <= lo {
            return Ok(Self::zero(var, trunc));
        }
        let mut v = Vec::with_capacity((hi - lo) as usize);
        for e in lo..hi {
            match (self.coeff_ref(e), o.coeff_ref(e)) {
                (Some(a), Some(b)) => v.push(a.plus(b)),
                (Some(a), None) => v.push(a.clone()),
                (None, Some(b)) => v.push(b.clone()),
                (None, None) => v.push(C::zero_elem()),
            }
        }
        Ok(Self::from_dense(var, lo, v, trunc))
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        self.try_add(&o.neg_series())
    }

    pub fn neg_series(&self) -> Self {
        TruncSeries {
            var: self.var,
            val: self.val,
            coeffs: self.coeffs.iter().map(|c| c.negate()).collect(),
            trunc: self.trunc,
        }
    }

    /// Cauchy product. The result is known below `min(N₁ + v₂, N₂ + v₁)`.
    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        let var = self.var.join(o.var)?;
        if self.is_zero_elem() || o.is_zero_elem() {
            return Ok(Self::exact_zero(var));
        }
        let trunc = add_prec(self.trunc, o.val).min(add_prec(o.trunc, self.val));
        if self.is_zero_series() || o.is_zero_series() {
            return Ok(Self::zero(var, trunc));
        }
        let v = self.val + o.val;
        let full = self.coeffs.len() + o.coeffs.len() - 1;
        let len = if trunc == EXACT { full } else { full.min((trunc - v).max(0) as usize) };
        let mut out = vec![C::zero_elem(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len || a.is_zero_elem() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if b.is_zero_elem() {
                    continue;
                }
                out[i + j].plus_mul(a, b);
            }
        }
        Ok(Self::from_dense(var, v, out, trunc))
    }

    pub fn scale(&self, s: &Q) -> Self {
        self.map(|c| c.scale(s))
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self.scale(&qint(n))
    }

    pub fn mul_coeff(&self, c: &C) -> Self {
        self.map(|x| x.times(c))
    }

    /// Multiplies by var^k.
    pub fn shift(&self, k: i64) -> Self {
        TruncSeries {
            var: self.var,
            val: add_prec(self.val, k),
            coeffs: self.coeffs.clone(),
            trunc: add_prec(self.trunc, k),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one_in(self.var, EXACT);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Inverse of a series whose leading coefficient is a unit.
    /// The inverse has valuation −v and the same relative precision.
    pub fn invert_unit(&self) -> Result<Self> {
        if self.is_zero_series() {
            return Err(Error::NotInvertible);
        }
        if self.trunc == EXACT {
            if self.coeffs.len() == 1 {
                let inv = self.coeffs[0].try_inv().ok_or(Error::NotInvertible)?;
                return Ok(Self::monomial(self.var, -self.val, inv, EXACT));
            }
            return Err(Error::NeedsPrecision);
        }
        self.invert_rel((self.trunc - self.val) as usize)
    }

    /// Inverse with at most `rel` known coefficients (relative precision).
    pub fn invert_rel(&self, rel: usize) -> Result<Self> {
        if self.is_zero_series() {
            return Err(Error::NotInvertible);
        }
        let lead_inv = self.coeffs[0].try_inv().ok_or(Error::NotInvertible)?;
        self.invert_with(lead_inv, rel)
    }

    /// Inverse given an inverse of the leading coefficient. This is how
    /// nested series are inverted when the leading coefficient needs its own
    /// precision (e.g. an exact Laurent polynomial expanded in one direction).
    pub fn invert_with(&self, lead_inv: C, rel: usize) -> Result<Self> {
        if self.is_zero_series() {
            return Err(Error::NotInvertible);
        }
        let rel = if self.trunc == EXACT { rel } else { rel.min((self.trunc - self.val) as usize) };
        let mut b: Vec<C> = Vec::with_capacity(rel);
        for n in 0..rel {
            if n == 0 {
                b.push(lead_inv.clone());
                continue;
            }
            let mut s = C::zero_elem();
            for k in 1..=n.min(self.coeffs.len() - 1) {
                s.plus_mul(&self.coeffs[k], &b[n - k]);
            }
            b.push(s.times(&lead_inv).negate());
        }
        Ok(Self::from_dense(self.var, -self.val, b, -self.val + rel as i64))
    }

    /// Exact quotient `self / o` when `o` has a unit leading coefficient.
    pub fn try_div(&self, o: &Self) -> Result<Self> {
        self.try_mul(&o.invert_unit()?)
    }

    /// `var · d/dvar`: coefficient at e multiplied by e.
    pub fn derivative(&self) -> Self {
        self.map_with_exp(|e, c| c.scale(&qint(e)))
    }

    /// exp of a series with positive valuation, to its own truncation.
    pub fn exp_series(&self) -> Result<Self> {
        if self.is_zero_series() {
            return Ok(Self::one_in(self.var, self.trunc));
        }
        if self.val < 1 {
            return Err(Error::BadExpInput);
        }
        if self.trunc == EXACT {
            return Err(Error::NeedsPrecision);
        }
        self.exp_to(self.trunc)
    }

    /// exp truncated at `n` (exclusive); `n` may not exceed the input truncation.
    pub fn exp_to(&self, n: i64) -> Result<Self> {
        let n = n.min(self.trunc);
        if !self.is_zero_series() && self.val < 1 {
            return Err(Error::BadExpInput);
        }
        if n == EXACT {
            return Err(Error::NeedsPrecision);
        }
        let len = n.max(0) as usize;
        let mut b: Vec<C> = Vec::with_capacity(len);
        for k in 0..len {
            if k == 0 {
                b.push(C::one_elem());
                continue;
            }
            let mut s = C::zero_elem();
            for j in 1..=k {
                if let Some(a) = self.coeff_ref(j as i64) {
                    s.plus_mul(&a.scale(&qint(j as i64)), &b[k - j]);
                }
            }
            b.push(s.scale(&(<Q as One>::one() / qint(k as i64))));
        }
        Ok(Self::from_dense(self.var, 0, b, n))
    }

    /// Coefficient at var^n multiplied by k^n.
    pub fn scale_var(&self, k: i64) -> Self {
        self.map_with_exp(|e, c| c.scale(&crate::scalar::ipow_q(k, e)))
    }

    /// Agreement on every exponent known in both series.
    pub fn agrees_with(&self, o: &Self) -> bool {
        let n = self.trunc.min(o.trunc);
        let lo = self.val.min(o.val);
        let hi = self.end().max(o.end()).min(n);
        (lo..hi).all(|e| self.coeff_or_zero(e) == o.coeff_or_zero(e))
    }

    /// Agreement on every exponent known in both, with a custom coefficient test.
    pub fn agrees_by<F: Fn(&C, &C) -> bool>(&self, o: &Self, f: F) -> bool {
        let n = self.trunc.min(o.trunc);
        let lo = self.val.min(o.val);
        let hi = self.end().max(o.end()).min(n);
        (lo..hi).all(|e| f(&self.coeff_or_zero(e), &o.coeff_or_zero(e)))
    }

    /// Agreement below `n`; false if either side is not known that far.
    pub fn agrees_below(&self, o: &Self, n: i64) -> bool {
        if self.trunc < n || o.trunc < n {
            return false;
        }
        self.truncate(n).agrees_with(&o.truncate(n))
    }

    pub fn dense(&self) -> (i64, &[C]) {
        (self.val, &self.coeffs)
    }
}

impl<C: Coeff> Coeff for TruncSeries<C> {
    fn zero_elem() -> Self {
        TruncSeries::exact_zero(Var::Free)
    }
    fn one_elem() -> Self {
        TruncSeries::one_in(Var::Free, EXACT)
    }
    fn is_zero_elem(&self) -> bool {
        self.coeffs.is_empty() && self.trunc == EXACT
    }
    fn plus(&self, o: &Self) -> Self {
        self.try_add(o).expect("series add")
    }
    fn negate(&self) -> Self {
        self.neg_series()
    }
    fn times(&self, o: &Self) -> Self {
        self.try_mul(o).expect("series mul")
    }
    fn scale(&self, s: &Q) -> Self {
        TruncSeries::scale(self, s)
    }
    fn try_inv(&self) -> Option<Self> {
        self.invert_unit().ok()
    }
}

impl<C: Coeff> Add for &TruncSeries<C> {
    type Output = TruncSeries<C>;
    fn add(self, o: Self) -> TruncSeries<C> {
        self.try_add(o).expect("series add")
    }
}

impl<C: Coeff> Sub for &TruncSeries<C> {
    type Output = TruncSeries<C>;
    fn sub(self, o: Self) -> TruncSeries<C> {
        self.try_sub(o).expect("series sub")
    }
}

impl<C: Coeff> Mul for &TruncSeries<C> {
    type Output = TruncSeries<C>;
    fn mul(self, o: Self) -> TruncSeries<C> {
        self.try_mul(o).expect("series mul")
    }
}

impl<C: Coeff> Neg for &TruncSeries<C> {
    type Output = TruncSeries<C>;
    fn neg(self) -> TruncSeries<C> {
        self.neg_series()
    }
}

/// Rational series in one variable.
pub type QSeries = TruncSeries<Q>;

impl<C: Coeff> TruncSeries<TruncSeries<C>> {
    /// Agreement of nested series where inner coefficients are compared on
    /// their common known range.
    pub fn agrees_nested(&self, o: &Self) -> bool {
        self.agrees_by(o, |a, b| a.agrees_with(b))
    }
}

impl QSeries {
    pub fn from_ints(var: Var, start: i64, c: &[i64], trunc: i64) -> Self {
        Self::from_dense(var, start, c.iter().map(|&x| qint(x)).collect(), trunc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qfrac;
    use proptest::prelude::*;

    fn s(start: i64, c: &[i64], n: i64) -> QSeries {
        QSeries::from_ints(Var::Q, start, c, n)
    }

    #[test]
    fn cancellation() {
        let a = s(-1, &[1, 1], 6);
        let b = s(-1, &[-1], 6);
        assert_eq!(&a + &b, s(0, &[1], 6));
        let z = &a - &a;
        assert!(z.is_zero_series());
        assert_eq!(z.trunc(), 6);
    }

    #[test]
    fn product_and_truncation() {
        let a = s(0, &[1, 1], 3);
        let b = s(0, &[1, -1], 3);
        assert_eq!(&a * &b, s(0, &[1, 0, -1], 3));
        // N = min(N1 + v2, N2 + v1)
        let c = s(2, &[1], 10);
        let d = s(-1, &[1, 5], 4);
        assert_eq!((&c * &d).trunc(), 6);
        assert!((&c * &d).coeff(6).is_err());
    }

    #[test]
    fn unknown_read_is_error() {
        let a = s(0, &[1, 2], 2);
        assert!(a.coeff(1).is_ok());
        assert_eq!(a.coeff(2), Err(Error::Unknown { exp: 2, trunc: 2 }));
        assert_eq!(a.coeff(-5).unwrap(), Q::zero());
    }

    #[test]
    fn var_mismatch() {
        let a = s(0, &[1], 3);
        let b = a.clone().with_var(Var::Qt);
        assert_eq!(a.try_add(&b), Err(Error::VarMismatch(Var::Q, Var::Qt)));
    }

    #[test]
    fn inverses() {
        let one = s(0, &[1], 8);
        assert_eq!(one.invert_unit().unwrap(), one);
        let a = s(0, &[1, -2, 1], 8); // (1-q)^2
        let inv = a.invert_unit().unwrap();
        for k in 0..8 {
            assert_eq!(inv.at(k), qint(k + 1));
        }
        assert!(s(0, &[0, 1], 4).shift(-1).invert_unit().is_ok());
        let ex = QSeries::from_ints(Var::Q, 0, &[1, 1], EXACT);
        assert_eq!(ex.invert_unit(), Err(Error::NeedsPrecision));
    }

    #[test]
    fn exp_of_q() {
        let q1 = s(1, &[1], 4);
        let e = q1.exp_series().unwrap();
        assert_eq!(e, QSeries::from_dense(Var::Q, 0, vec![qint(1), qint(1), qfrac(1, 2), qfrac(1, 6)], 4));
        assert_eq!(QSeries::zero(Var::Q, 5).exp_series().unwrap(), s(0, &[1], 5));
        assert_eq!(s(0, &[1, 1], 4).exp_series(), Err(Error::BadExpInput));
    }

    #[test]
    fn exp_of_log_oracle() {
        // log(1+q) = Σ (-1)^{k+1} q^k / k, written out independently
        let terms: Vec<Q> = (0..6).map(|k| if k == 0 { Q::zero() } else { qfrac(if k % 2 == 1 { 1 } else { -1 }, k) }).collect();
        let lg = QSeries::from_dense(Var::Q, 0, terms, 6);
        assert_eq!(lg.exp_series().unwrap(), s(0, &[1, 1], 6));
    }

    #[test]
    fn derivative_basics() {
        assert_eq!(s(3, &[1], 9).derivative(), s(3, &[3], 9));
        assert!(s(0, &[7], 9).derivative().is_zero_series());
    }

    #[test]
    fn scale_var_examples() {
        assert_eq!(s(2, &[1], 5).with_var(Var::U).scale_var(2), s(2, &[4], 5).with_var(Var::U));
        let m = s(-2, &[1], 5).with_var(Var::U).scale_var(3);
        assert_eq!(m.at(-2), qfrac(1, 9));
    }

    fn arb_series(n: i64) -> impl Strategy<Value = QSeries> {
        (-2i64..3, proptest::collection::vec(-5i64..6, 1..6)).prop_map(move |(v, c)| QSeries::from_ints(Var::Q, v, &c, n))
    }

    fn arb_unit(n: i64) -> impl Strategy<Value = QSeries> {
        (-2i64..3, 1i64..4, proptest::collection::vec(-5i64..6, 0..6)).prop_map(move |(v, lead, rest)| {
            let mut c = vec![lead];
            c.extend(rest);
            QSeries::from_ints(Var::Q, v, &c, n)
        })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_series(7), b in arb_series(9), c in arb_series(8)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            // cancellation in b + c can only sharpen the left side
            let l = &a * &(&b + &c);
            let r = &(&a * &b) + &(&a * &c);
            prop_assert!(l.trunc() >= r.trunc());
            prop_assert!(l.agrees_with(&r));
            prop_assert_eq!(&a * &b, &b * &a);
        }

        #[test]
        fn inverse_two_sided(a in arb_unit(8)) {
            let inv = a.invert_unit().unwrap();
            let p = &a * &inv;
            let q = &inv * &a;
            prop_assert!(p.agrees_with(&s(0, &[1], p.trunc())));
            prop_assert_eq!(p.trunc(), 8 - a.valuation().unwrap());
            prop_assert_eq!(p, q);
        }

        #[test]
        fn derivation_rule(a in arb_series(7), b in arb_series(6)) {
            let lhs = (&a * &b).derivative();
            let rhs = &(&a.derivative() * &b) + &(&a * &b.derivative());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn truncation_safety(a in arb_unit(12), b in arb_series(12)) {
            // the same pipeline at lower precision agrees with the restriction of the higher run
            let hi = &a.invert_unit().unwrap() * &b;
            let lo = &a.truncate(8).invert_unit().unwrap() * &b.truncate(8);
            prop_assert!(lo.trunc() <= hi.trunc());
            prop_assert!(hi.truncate(lo.trunc()) == lo);
        }
    }
}
