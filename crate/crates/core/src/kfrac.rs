//! Exact values of the form N/(K^j Δ) with N a finite q-series of Laurent
//! polynomials. Every Fock matrix element lives in this set: the vacuum value
//! is −1/(K²Δ), φ-multiplication keeps the shape, and D_q raises j by one.

use crate::error::{Error, Result};
use crate::forms::Blocks;
use crate::jacobi::{from_q, lift, window_inverse, JSeries, WSeries};
use crate::laurent::HalfLaurent;
use crate::scalar::{qint, Q};
use crate::series::Var;
use alloc::vec::Vec;
use core::cell::RefCell;

/// N/(K^j Δ).
#[derive(Clone, PartialEq, Debug)]
pub struct KFrac {
    pub num: JSeries,
    pub j: u32,
}

impl KFrac {
    pub fn new(num: JSeries, j: u32) -> Self {
        KFrac { num, j }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero_series()
    }

    pub fn scale(&self, s: &Q) -> Self {
        KFrac { num: self.num.scale(s), j: self.j }
    }

    pub fn neg(&self) -> Self {
        KFrac { num: self.num.neg_series(), j: self.j }
    }

    /// Multiplication by a finite series.
    pub fn mul_fin(&self, f: &JSeries) -> Self {
        KFrac { num: &self.num * f, j: self.j }
    }

    /// q-exponent below which the value N/(K^jΔ) is known.
    pub fn known_below(&self) -> i64 {
        self.num.trunc().saturating_sub(1)
    }
}

/// Shared blocks and cached powers of K at a fixed q-truncation.
#[derive(Debug)]
pub struct FracRing {
    pub blocks: Blocks,
    /// q d/dq K.
    dk: JSeries,
    e2: JSeries,
    kpow: RefCell<Vec<JSeries>>,
}

impl FracRing {
    pub fn new(n: i64) -> Self {
        let blocks = Blocks::new(n);
        let dk = blocks.k.derivative();
        let e2 = from_q(&blocks.e2);
        let kpow = RefCell::new(alloc::vec![JSeries::one_in(Var::Q, n)]);
        FracRing { blocks, dk, e2, kpow }
    }

    pub fn n(&self) -> i64 {
        self.blocks.n
    }

    pub fn k_pow(&self, e: u32) -> JSeries {
        let mut p = self.kpow.borrow_mut();
        while p.len() <= e as usize {
            let next = &p[p.len() - 1] * &self.blocks.k;
            p.push(next);
        }
        p[e as usize].clone()
    }

    pub fn zero(&self) -> KFrac {
        KFrac::new(JSeries::zero(Var::Q, self.n()), 0)
    }

    /// f as f·KΔ/(KΔ); useful to embed finite series.
    pub fn from_finite(&self, f: &JSeries) -> KFrac {
        KFrac::new(f * &from_q(&self.blocks.delta), 0)
    }

    /// 1/(F²Δ) = −1/(K²Δ).
    pub fn vacuum(&self) -> KFrac {
        KFrac::new(JSeries::constant(Var::Q, HalfLaurent::constant(qint(-1)), self.n()), 2)
    }

    pub fn raise(&self, a: &KFrac, j: u32) -> KFrac {
        if a.j >= j {
            return a.clone();
        }
        KFrac::new(&a.num * &self.k_pow(j - a.j), j)
    }

    pub fn add(&self, a: &KFrac, b: &KFrac) -> KFrac {
        if a.is_zero() && a.num.trunc() >= b.num.trunc() {
            return b.clone();
        }
        if b.is_zero() && b.num.trunc() >= a.num.trunc() {
            return a.clone();
        }
        let j = a.j.max(b.j);
        KFrac::new(&self.raise(a, j).num + &self.raise(b, j).num, j)
    }

    pub fn sub(&self, a: &KFrac, b: &KFrac) -> KFrac {
        self.add(a, &b.neg())
    }

    /// D_q = q d/dq: ((DN − E₂N)K − jN·DK)/(K^{j+1}Δ).
    pub fn dq(&self, a: &KFrac) -> KFrac {
        let dn = &a.num.derivative() - &(&a.num * &self.e2);
        let mut num = &dn * &self.blocks.k;
        if a.j > 0 {
            num = &num - &(&a.num * &self.dk).scale_int(a.j as i64);
        }
        KFrac::new(num, a.j + 1)
    }

    /// y d/dy = ∂_z: (∂N·K − jN·∂K)/(K^{j+1}Δ).
    pub fn dz(&self, a: &KFrac) -> KFrac {
        let dn = crate::jacobi::dz(&a.num);
        if a.j == 0 {
            return KFrac::new(dn, 0);
        }
        let num = &(&dn * &self.blocks.k) - &(&a.num * &self.blocks.a).scale_int(a.j as i64);
        KFrac::new(num, a.j + 1)
    }

    /// Equality by cross-multiplication, below the common known q-order.
    pub fn equal(&self, a: &KFrac, b: &KFrac) -> bool {
        let j = a.j.max(b.j);
        let (x, y) = (self.raise(a, j).num, self.raise(b, j).num);
        x.agrees_with(&y)
    }

    /// Equality that also demands knowledge below q^{q_end}.
    pub fn equal_below(&self, a: &KFrac, b: &KFrac, q_end: i64) -> Result<bool> {
        for s in [a, b] {
            if s.known_below() < q_end {
                return Err(Error::Unknown { exp: q_end, trunc: s.known_below() });
            }
        }
        Ok(self.equal(a, b))
    }

    /// Windowed expansion, using a windowed 1/K and 1/Δ.
    pub fn to_window(&self, a: &KFrac, inv_k: &WSeries, inv_delta: &WSeries) -> WSeries {
        let mut w = &lift(&a.num) * inv_delta;
        for _ in 0..a.j {
            w = &w * inv_k;
        }
        w
    }

    /// Windowed 1/K and 1/Δ for `to_window`, with `t_rel` known t-terms at q⁰.
    pub fn window_inverses(&self, t_rel: usize) -> Result<(WSeries, WSeries)> {
        let n = self.n();
        let inv_k = window_inverse(&self.blocks.k, n as usize, t_rel)?;
        let inv_d = lift(&from_q(&crate::forms::delta_inverse(n)));
        Ok((inv_k, inv_d))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dq_matches_product_rule() {
        // D(1/(K²Δ)) = −2DK/(K³Δ) − E₂/(K²Δ)
        let r = FracRing::new(6);
        let v = r.vacuum().neg();
        let d = r.dq(&v);
        let want_num = &r.dk.scale_int(-2) - &(&r.e2 * &r.blocks.k);
        assert!(r.equal(&d, &KFrac::new(want_num, 3)));
    }

    #[test]
    fn dz_of_k_squared() {
        let r = FracRing::new(5);
        let a = KFrac::new(r.k_pow(2), 0);
        let want = KFrac::new((&r.blocks.k * &r.blocks.a).scale_int(2), 0);
        assert!(r.equal(&r.dz(&a), &want));
        // ∂_z(1/K) = −A/K²
        let inv = KFrac::new(JSeries::one_in(Var::Q, 5), 1);
        let want = KFrac::new(r.blocks.a.neg_series(), 2);
        assert!(r.equal(&r.dz(&inv), &want));
    }

    #[test]
    fn raise_keeps_value() {
        let r = FracRing::new(4);
        let a = KFrac::new(r.blocks.g.clone(), 1);
        assert!(r.equal(&a, &r.raise(&a, 4)));
        assert!(!r.equal(&a, &KFrac::new(r.blocks.g.clone(), 2)));
    }
}
