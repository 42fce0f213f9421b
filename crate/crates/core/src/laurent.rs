//! Finite Laurent polynomials in t, where t² = p = −y.
//!
//! Exponents count powers of t, so p^{1/2} is t¹ and every half-integer
//! p-power is exact. Terms are kept sorted by exponent with no zero entries.

use crate::error::{Error, Result};
use crate::scalar::{factorial, qbig, qfrac, qint, q_to_string, Q, QI};
use crate::series::{Coeff, TruncSeries, Var, EXACT};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use num_traits::{One, Signed, Zero};

#[derive(Clone, PartialEq, Eq, Debug, Default, Hash)]
pub struct HalfLaurent {
    terms: Vec<(i64, Q)>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Parity {
    Zero,
    /// Integer p-powers only.
    Even,
    /// Half-integer p-powers only.
    Odd,
    Mixed,
}

impl core::ops::Mul for Parity {
    type Output = Parity;

    /// Parity of a product.
    fn mul(self, o: Parity) -> Parity {
        use Parity::*;
        match (self, o) {
            (Zero, _) | (_, Zero) => Zero,
            (Mixed, _) | (_, Mixed) => Mixed,
            (a, b) if a == b => Even,
            _ => Odd,
        }
    }
}

impl HalfLaurent {
    pub fn zero() -> Self {
        HalfLaurent { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(qint(1))
    }

    pub fn constant(c: Q) -> Self {
        Self::monomial(0, c)
    }

    /// c·t^e
    pub fn monomial(e: i64, c: Q) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            HalfLaurent { terms: vec![(e, c)] }
        }
    }

    /// c·p^k
    pub fn p_pow(k: i64, c: Q) -> Self {
        Self::monomial(2 * k, c)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Q)>>(it: I) -> Self {
        let mut v: Vec<(i64, Q)> = it.into_iter().collect();
        v.sort_by_key(|t| t.0);
        let mut out: Vec<(i64, Q)> = Vec::with_capacity(v.len());
        for (e, c) in v {
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 += c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        HalfLaurent { terms: out }
    }

    /// t − t⁻¹, the leading factor of K.
    pub fn t_minus_inv() -> Self {
        Self::from_terms([(1, qint(1)), (-1, qint(-1))])
    }

    pub fn terms(&self) -> &[(i64, Q)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: i64) -> Q {
        match self.terms.binary_search_by_key(&e, |t| t.0) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => Q::zero(),
        }
    }

    /// Lowest and highest t-exponent.
    pub fn support(&self) -> Option<(i64, i64)> {
        Some((self.terms.first()?.0, self.terms.last()?.0))
    }

    pub fn parity(&self) -> Parity {
        if self.terms.is_empty() {
            return Parity::Zero;
        }
        let odd = self.terms.iter().filter(|t| t.0 % 2 != 0).count();
        if odd == 0 {
            Parity::Even
        } else if odd == self.terms.len() {
            Parity::Odd
        } else {
            Parity::Mixed
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let (a, b) = (&self.terms, &o.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push(b[j].clone());
                j += 1;
            } else {
                let c = &a[i].1 + &b[j].1;
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        HalfLaurent { terms: out }
    }

    pub fn neg(&self) -> Self {
        HalfLaurent { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if self.terms.len() == 1 {
            let (e, c) = &self.terms[0];
            return o.mul_monomial(*e, c);
        }
        if o.terms.len() == 1 {
            let (e, c) = &o.terms[0];
            return self.mul_monomial(*e, c);
        }
        let lo = self.terms[0].0 + o.terms[0].0;
        let hi = self.terms.last().unwrap().0 + o.terms.last().unwrap().0;
        let mut acc: Vec<Option<Q>> = vec![None; (hi - lo + 1) as usize];
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let slot = &mut acc[(ea + eb - lo) as usize];
                let p = ca * cb;
                match slot {
                    Some(s) => *s += p,
                    None => *slot = Some(p),
                }
            }
        }
        let terms = acc
            .into_iter()
            .enumerate()
            .filter_map(|(i, c)| c.filter(|c| !c.is_zero()).map(|c| (lo + i as i64, c)))
            .collect();
        HalfLaurent { terms }
    }

    pub fn mul_monomial(&self, e: i64, c: &Q) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        HalfLaurent { terms: self.terms.iter().map(|(f, d)| (f + e, d * c)).collect() }
    }

    pub fn scale(&self, s: &Q) -> Self {
        self.mul_monomial(0, s)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut r = Self::one();
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }

    /// ∂_z = p d/dp: the entry at t^e is multiplied by e/2.
    pub fn derivative_z(&self) -> Self {
        self.map_exp(|e, c| c * qfrac(e, 2))
    }

    /// y d/dy. Since y = −p, this equals p d/dp.
    pub fn y_d_dy(&self) -> Self {
        self.derivative_z()
    }

    /// Replaces t^e by t^{k e}; used by the Hecke operator.
    pub fn stretch(&self, k: i64) -> Self {
        HalfLaurent { terms: self.terms.iter().map(|(e, c)| (e * k, c.clone())).collect() }
    }

    /// Coefficients with respect to y = −p. Only valid for integer p-powers.
    pub fn y_coeff(&self, k: i64) -> Q {
        let c = self.coeff(2 * k);
        if k % 2 == 0 {
            c
        } else {
            -c
        }
    }

    /// Builds a polynomial from y-coefficients.
    pub fn from_y_terms<I: IntoIterator<Item = (i64, Q)>>(it: I) -> Self {
        Self::from_terms(it.into_iter().map(|(k, c)| (2 * k, if k % 2 == 0 { c } else { -c })))
    }

    fn map_exp<F: Fn(i64, &Q) -> Q>(&self, f: F) -> Self {
        HalfLaurent {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, f(*e, c)))
                .filter(|t| !t.1.is_zero())
                .collect(),
        }
    }

    /// Exact conversion into a t-series (known everywhere).
    pub fn to_window(&self) -> TruncSeries<Q> {
        TruncSeries::from_terms(Var::T, self.terms.iter().cloned(), EXACT)
    }

    /// Reads back a finite t-series; fails if the input is not exact.
    pub fn from_window(w: &TruncSeries<Q>) -> Result<Self> {
        if !w.is_exact() {
            return Err(Error::Unknown { exp: w.trunc(), trunc: w.trunc() });
        }
        Ok(Self::from_terms(w.terms().map(|(e, c)| (e, c.clone()))))
    }

    /// Substitutes t^e ↦ exp(i e u / 2), expanded below u^`u_order`.
    pub fn substitute_u(&self, u_order: i64) -> TruncSeries<QI> {
        let n = u_order.max(0) as usize;
        let mut out = vec![QI::default(); n];
        for (e, c) in &self.terms {
            // (i e / 2)^k / k!
            let half = qfrac(*e, 2);
            let mut pw = qint(1);
            for (k, slot) in out.iter_mut().enumerate() {
                let val = &pw * c / qbig(factorial(k as u64));
                let term = QI::i_pow(k as i64);
                slot.re += &term.re * &val;
                slot.im += &term.im * &val;
                pw *= &half;
            }
        }
        TruncSeries::from_dense(Var::U, 0, out, u_order)
    }

    /// Same as [`substitute_u`](Self::substitute_u) but insists on a real result.
    pub fn substitute_u_real(&self, u_order: i64) -> Result<TruncSeries<Q>> {
        real_part(&self.substitute_u(u_order))
    }
}

/// Real part of a Gaussian series; errors on any nonzero imaginary coefficient.
pub fn real_part(s: &TruncSeries<QI>) -> Result<TruncSeries<Q>> {
    if s.terms().any(|(_, c)| !c.im.is_zero()) {
        return Err(Error::ImaginaryResidue);
    }
    Ok(s.map(|c| c.re.clone()))
}

impl Coeff for HalfLaurent {
    fn zero_elem() -> Self {
        HalfLaurent::zero()
    }
    fn one_elem() -> Self {
        HalfLaurent::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn negate(&self) -> Self {
        self.neg()
    }
    fn times(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn scale(&self, s: &Q) -> Self {
        HalfLaurent::scale(self, s)
    }
    fn try_inv(&self) -> Option<Self> {
        match self.terms.as_slice() {
            [(e, c)] => Some(HalfLaurent::monomial(-e, c.recip())),
            _ => None,
        }
    }
    fn plus_assign(&mut self, o: &Self) {
        if o.is_zero() {
            return;
        }
        *self = self.add(o);
    }
}

impl fmt::Display for HalfLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let mut s: String = q_to_string(&c.abs());
            if !first {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
            if *e != 0 && c.abs().is_one() {
                s.clear();
            }
            match *e {
                0 => write!(f, "{s}")?,
                1 => write!(f, "{s}t")?,
                _ => write!(f, "{s}t^{e}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn hl(v: &[(i64, i64)]) -> HalfLaurent {
        HalfLaurent::from_terms(v.iter().map(|&(e, c)| (e, qint(c))))
    }

    #[test]
    fn derivative_z_examples() {
        let k = HalfLaurent::t_minus_inv();
        let want = HalfLaurent::from_terms([(1, qfrac(1, 2)), (-1, qfrac(1, 2))]);
        assert_eq!(k.derivative_z(), want);
        let p = HalfLaurent::p_pow(1, qint(1));
        assert_eq!(p.derivative_z(), p);
    }

    #[test]
    fn parity_of_products() {
        let k = HalfLaurent::t_minus_inv();
        assert_eq!(k.parity(), Parity::Odd);
        assert_eq!(k.mul(&k).parity(), Parity::Even);
        assert_eq!(k.parity() * k.parity(), Parity::Even);
        assert_eq!(hl(&[(0, 1), (1, 1)]).parity(), Parity::Mixed);
    }

    #[test]
    fn y_coefficients_flip_sign() {
        let x = HalfLaurent::from_y_terms([(1, qint(3)), (2, qint(5))]);
        assert_eq!(x.coeff(2), qint(-3));
        assert_eq!(x.coeff(4), qint(5));
        assert_eq!(x.y_coeff(1), qint(3));
    }

    #[test]
    fn substitute_cosine() {
        // p − 2 + p⁻¹ = 2cos u − 2
        let x = hl(&[(2, 1), (0, -2), (-2, 1)]);
        let s = x.substitute_u_real(8).unwrap();
        let mut want = Vec::new();
        for k in 1..4i64 {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            want.push((2 * k, qint(2 * sign) / qbig(factorial(2 * k as u64))));
        }
        assert_eq!(s, TruncSeries::from_terms(Var::U, want, 8));
        assert_eq!(HalfLaurent::one().substitute_u_real(4).unwrap(), TruncSeries::one_in(Var::U, 4));
        assert!(HalfLaurent::t_minus_inv().substitute_u_real(4).is_err());
    }

    fn arb_even() -> impl Strategy<Value = HalfLaurent> {
        prop::collection::vec((-3i64..=3, -4i64..=4), 0..5)
            .prop_map(|v| HalfLaurent::from_terms(v.into_iter().map(|(k, c)| (2 * k, qint(c)))))
    }

    proptest! {
        #[test]
        fn substitution_is_a_ring_map(a in arb_even(), b in arb_even()) {
            let n = 7;
            let ab = a.mul(&b).substitute_u(n);
            let prod = &a.substitute_u(n) * &b.substitute_u(n);
            prop_assert!(ab.agrees_with(&prod) && prod.trunc() >= n);
            let sum = a.add(&b).substitute_u(n);
            prop_assert!(sum.agrees_with(&(&a.substitute_u(n) + &b.substitute_u(n))));
            // symmetrised inputs are real
            let sym = a.add(&a.stretch(-1));
            prop_assert!(sym.substitute_u_real(n).is_ok());
        }

        #[test]
        fn mul_commutes_and_distributes(a in arb_even(), b in arb_even(), c in arb_even()) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert_eq!(a.derivative_z().is_zero(), a.sub(&HalfLaurent::constant(a.coeff(0))).is_zero());
        }
    }
}
