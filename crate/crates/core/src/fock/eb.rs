//! The operators ℰ_B^(r) for the class B alone.
//!
//! The commutator with 𝔭_m(γ) is the scalar ⟨γ,B⟩c_m with
//! c_m = (−y)^{−m/2} − (−y)^{m/2} = t^{−m} − t^m, so every matrix element is
//! P(t)·y/(1+y)² for a Laurent polynomial P. Values are stored as P.

use super::lattice::KLattice;
use super::state::{basis, inner_states, FockState};
use crate::laurent::HalfLaurent;
use crate::scalar::{qint, Q};
use crate::series::{TruncSeries, Var};
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cell::RefCell;
use num_traits::Zero;

/// c_m = t^{−m} − t^m.
pub fn c_coeff(m: i64) -> HalfLaurent {
    HalfLaurent::from_terms([(-m, qint(1)), (m, qint(-1))])
}

pub struct EbOperator<'a> {
    pub lat: &'a KLattice,
    memo: RefCell<BTreeMap<(i64, FockState, FockState), HalfLaurent>>,
}

impl<'a> EbOperator<'a> {
    pub fn new(lat: &'a KLattice) -> Self {
        EbOperator { lat, memo: RefCell::new(BTreeMap::new()) }
    }

    fn pair_b(&self, c: usize) -> Q {
        self.lat.pair_vec_basis(&self.lat.b(), c)
    }

    /// ⟨w|ℰ_B^(r) v⟩ divided by y/(1+y)².
    pub fn value(&self, r: i64, w: &FockState, v: &FockState) -> HalfLaurent {
        if w.energy() != v.energy() - r {
            return HalfLaurent::zero();
        }
        let key = (r, w.clone(), v.clone());
        if let Some(x) = self.memo.borrow().get(&key) {
            return x.clone();
        }
        let out = self.compute(r, w, v);
        self.memo.borrow_mut().insert(key, out.clone());
        out
    }

    fn compute(&self, r: i64, w: &FockState, v: &FockState) -> HalfLaurent {
        if w.is_vacuum() && v.is_vacuum() {
            return if r == 0 { HalfLaurent::one() } else { HalfLaurent::zero() };
        }
        if !w.is_vacuum() {
            // (−1)^m ⟨w'|𝔭_m(α)ℰ_B^(r) v⟩
            let part = w.parts()[0];
            let (m, a) = (part.m as i64, part.c as usize);
            let w1 = w.without(0);
            let mut acc = HalfLaurent::zero();
            for (j, pj) in v.parts().iter().enumerate() {
                if pj.m as i64 == m {
                    let pr = self.lat.pair_basis(a, pj.c as usize);
                    if !pr.is_zero() {
                        acc = acc.add(&self.value(r, &w1, &v.without(j)).scale(&(pr * qint(-m))));
                    }
                }
            }
            let pb = self.pair_b(a);
            if !pb.is_zero() {
                acc = acc.add(&self.value(r + m, &w1, v).mul(&c_coeff(m)).scale(&pb));
            }
            return if m % 2 == 1 { acc.neg() } else { acc };
        }
        // ⟨1|ℰ_B^(r)𝔭_{−m}(α)v'⟩ = −⟨α,B⟩c_{−m}⟨1|ℰ_B^(r−m)v'⟩
        let part = v.parts()[0];
        let (m, a) = (part.m as i64, part.c as usize);
        let pb = self.pair_b(a);
        if pb.is_zero() {
            return HalfLaurent::zero();
        }
        self.value(r - m, w, &v.without(0)).mul(&c_coeff(-m)).scale(&-pb)
    }

    /// Tr ℰ_B^(0) on ℱ_d, divided by y/(1+y)².
    pub fn trace_on(&self, d: i64) -> HalfLaurent {
        let mut acc = HalfLaurent::zero();
        for mu in basis(d) {
            let dual = mu.dual(self.lat);
            let g = inner_states(self.lat, &dual, &mu);
            let x = self.value(0, &dual, &mu);
            if !x.is_zero() {
                acc = acc.add(&x.scale(&(Q::from_integer(1.into()) / g)));
            }
        }
        acc
    }
}

/// Coefficients of ∏_{m≥1} 1/((1 − t^{−2}q^m)²(1 − q^m)^{20}(1 − t²q^m)²) below q^n.
pub fn resolution_product(n: usize) -> Vec<HalfLaurent> {
    let mut s = alloc::vec![HalfLaurent::zero(); n];
    if n == 0 {
        return s;
    }
    s[0] = HalfLaurent::one();
    let factors = [(-2i64, 2usize), (0, 20), (2, 2)];
    for m in 1..n {
        for (e, mult) in factors {
            for _ in 0..mult {
                // multiply by 1/(1 − t^e q^m), in place from low to high
                for i in m..n {
                    let prev = s[i - m].mul_monomial(e, &qint(1));
                    s[i] = s[i].add(&prev);
                }
            }
        }
    }
    s
}

/// y/(1+y)² = −Σ_{n≥1} n t^{2n}, known below t^{t_end}.
pub fn base_value_window(t_end: i64) -> TruncSeries<Q> {
    TruncSeries::from_terms(Var::T, (1..).map(|n| (2 * n, qint(-n))).take_while(|(e, _)| *e < t_end), t_end)
}

/// P·y/(1+y)² expanded in positive t, known below t^{t_end}.
pub fn to_window(p: &HalfLaurent, t_end: i64) -> TruncSeries<Q> {
    let shift = p.support().map(|(lo, _)| lo.min(0)).unwrap_or(0);
    &p.to_window() * &base_value_window(t_end - shift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::phi::{expected_leading, PhiTable};

    #[test]
    fn vacuum_value() {
        let lat = KLattice::new();
        let e = EbOperator::new(&lat);
        let v = FockState::vacuum();
        assert_eq!(e.value(0, &v, &v), HalfLaurent::one());
        assert!(e.value(1, &v, &v).is_zero());
        // y/(1+y)² from its y-expansion Σ (−1)^{n−1} n yⁿ
        let w = to_window(&HalfLaurent::one(), 21);
        let want = TruncSeries::from_terms(
            Var::T,
            (1..=10).map(|n: i64| {
                let y = HalfLaurent::from_y_terms([(n, qint(if n % 2 == 1 { n } else { -n }))]);
                (2 * n, y.coeff(2 * n))
            }),
            21,
        );
        assert_eq!(w, want);
    }

    #[test]
    fn commutator_matches_phi_leading_terms() {
        let t = PhiTable::seeded(3);
        for m in [1, 2] {
            assert_eq!(t.get(m, 0).unwrap().at(0), c_coeff(m));
            assert_eq!(expected_leading(m), c_coeff(m));
        }
    }

    #[test]
    fn trace_matches_product() {
        let lat = KLattice::new();
        let e = EbOperator::new(&lat);
        let prod = resolution_product(3);
        for (d, want) in prod.iter().enumerate().take(3) {
            assert_eq!(&e.trace_on(d as i64), want, "d={d}");
        }
    }

    #[test]
    fn product_first_terms() {
        let p = resolution_product(2);
        assert_eq!(p[1], HalfLaurent::from_terms([(-2, qint(2)), (0, qint(20)), (2, qint(2))]));
    }
}
