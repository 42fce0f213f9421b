//! The φ_{m,ℓ} table with its two symmetries applied on read.

use crate::error::{Error, Result};
use crate::forms::Blocks;
use crate::jacobi::{from_q, JSeries};
use crate::laurent::HalfLaurent;
use crate::scalar::{qfrac, qint, Q};
use crate::series::Var;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;

#[derive(Clone, Debug)]
pub struct PhiTable {
    seeds: BTreeMap<(i64, i64), JSeries>,
    n: i64,
}

impl PhiTable {
    pub fn empty(n: i64) -> Self {
        PhiTable { seeds: BTreeMap::new(), n }
    }

    /// The three m = 1 initial conditions and the five printed m = 2 values,
    /// rewritten over the finite blocks K, A = ∂K, G and ∂G.
    pub fn seeded(n: i64) -> Self {
        let b = Blocks::new(n);
        let mut t = PhiTable::empty(n);
        for (key, v) in seed_values(&b) {
            t.insert(key, v);
        }
        t
    }

    /// Only the m = 1 initial conditions.
    pub fn initial(n: i64) -> Self {
        let b = Blocks::new(n);
        let mut t = PhiTable::empty(n);
        for (key, v) in seed_values(&b).into_iter().filter(|(k, _)| k.0 == 1) {
            t.insert(key, v);
        }
        t
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn insert(&mut self, key: (i64, i64), v: JSeries) {
        self.seeds.insert(key, v);
    }

    pub fn remove(&mut self, key: (i64, i64)) -> Option<JSeries> {
        self.seeds.remove(&key)
    }

    pub fn seeds(&self) -> impl Iterator<Item = (&(i64, i64), &JSeries)> {
        self.seeds.iter()
    }

    /// φ_{m,ℓ} through φ_{m,ℓ} = −φ_{−m,−ℓ} and φ_{m,ℓ} = (m/ℓ)φ_{ℓ,m}.
    pub fn get(&self, m: i64, l: i64) -> Result<JSeries> {
        self.candidates(m, l).into_iter().next().ok_or(Error::UnknownPhi(m, l))
    }

    /// The seed a read of (m, ℓ) goes through, as a bit over the seed order.
    pub fn dependency(&self, m: i64, l: i64) -> u64 {
        let mut keys = alloc::vec![(m, l), (-m, -l)];
        if l != 0 && m != 0 {
            keys.extend([(l, m), (-l, -m)]);
        }
        keys.into_iter()
            .find_map(|k| self.seeds.keys().position(|s| *s == k))
            .map(|i| 1u64 << i.min(63))
            .unwrap_or(0)
    }

    /// Bit of a seed key in `dependency` masks.
    pub fn seed_bit(&self, key: (i64, i64)) -> u64 {
        self.seeds.keys().position(|s| *s == key).map(|i| 1u64 << i.min(63)).unwrap_or(0)
    }

    /// Every value reachable for the key; more than one means several seeds meet.
    fn candidates(&self, m: i64, l: i64) -> Vec<JSeries> {
        let mut out = Vec::new();
        if let Some(v) = self.seeds.get(&(m, l)) {
            out.push(v.clone());
        }
        if let Some(v) = self.seeds.get(&(-m, -l)) {
            out.push(v.neg_series());
        }
        if l != 0 && m != 0 {
            let r = qfrac(m, l);
            if let Some(v) = self.seeds.get(&(l, m)) {
                out.push(v.scale(&r));
            }
            if let Some(v) = self.seeds.get(&(-l, -m)) {
                out.push(v.scale(&-r));
            }
        }
        if m == 0 && l != 0 {
            // ℓφ_{0,ℓ} = 0·φ_{ℓ,0}
            out.push(JSeries::exact_zero(Var::Q));
        }
        out
    }

    /// Checks that all closure paths to the same key agree, on every key with |m|, |ℓ| ≤ bound.
    pub fn closure_consistent(&self, bound: i64) -> bool {
        for m in -bound..=bound {
            for l in -bound..=bound {
                if m == 0 && l == 0 {
                    continue;
                }
                let c = self.candidates(m, l);
                if c.windows(2).any(|w| !w[0].agrees_with(&w[1])) {
                    return false;
                }
            }
        }
        true
    }

    /// Adds δ to one seed; used as a negative control.
    pub fn mutated(&self, key: (i64, i64), delta: &JSeries) -> Self {
        let mut t = self.clone();
        let v = &t.seeds[&key] + delta;
        t.seeds.insert(key, v);
        t
    }

    /// Truncates every entry to q-exponents below n.
    pub fn truncated(&self, n: i64) -> Self {
        PhiTable { seeds: self.seeds.iter().map(|(k, v)| (*k, v.truncate(n))).collect(), n: n.min(self.n) }
    }
}

fn seed_values(b: &Blocks) -> Vec<((i64, i64), JSeries)> {
    let n = b.n;
    let one = JSeries::one_in(Var::Q, n);
    let (k, a, g, dg) = (&b.k, &b.a, &b.g, &b.dg);
    let k2 = b.k2();
    let e2 = b.e2_12();
    let e2sq = from_q(&(&b.e2 * &b.e2));
    let e4 = from_q(&b.e4);
    // J₁ = A/K, ℘ = G/K² + E₂/12; the printed values are polynomial once expanded
    let a2 = a * a;
    let a3 = &a2 * a;
    let kdg = k * dg;
    let inner_m1 = &(&(&a3 - &(a * g)) - (&(&e2 * &(a * &k2)).scale_int(3))) - &kdg.scale(&qfrac(1, 4));
    let inner_m2 = &(&(&a3 - &(a * g)) - (&(&e2 * &(a * &k2)).scale_int(3))) - &kdg.scale(&qfrac(1, 2));
    let p22 = {
        let t1 = (g * g).scale_int(3);
        let t2 = (&a2 * g).scale_int(-2);
        let t3 = (a * &kdg).scale_int(2);
        let t4 = (&(&e2 * g) * &k2).scale_int(6);
        let t5 = &(&e2sq - &e4).scale(&qfrac(1, 48)) * &(&k2 * &k2);
        &(&(&(&(&t1 + &t2) + &t3) + &t4) + &t5) - &one
    };
    alloc::vec![
        ((1, 1), g - &one),
        ((1, 0), k.neg_series()),
        ((1, -1), k2.derivative().scale(&qfrac(1, 2))),
        ((2, 2), p22),
        ((2, 1), kdg.clone()),
        ((2, 0), (a * k).scale_int(-2)),
        ((2, -1), inner_m1.scale(&qfrac(-4, 3))),
        ((2, -2), (a * &inner_m2).scale_int(2)),
    ]
}

/// Leading q⁰ coefficient expected for φ_{m,0}: (−y)^{−m/2} − (−y)^{m/2} = t^{−m} − t^m.
pub fn expected_leading(m: i64) -> HalfLaurent {
    HalfLaurent::from_terms([(-m, qint(1)), (m, qint(-1))])
}

/// Scalar used by the ℓ-dependent prefactor (ℓ/m)^{k(γ)}.
pub fn ratio_pow(l: i64, m: i64, k: i64) -> Q {
    match k {
        0 => qint(1),
        1 => qfrac(l, m),
        -1 => qfrac(m, l),
        _ => unreachable!("k(γ) ∈ {{−1, 0, 1}}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::weierstrass_p_window;
    use crate::jacobi::{agree_on_window, lift, window_inverse, WSeries, WindowPoly};

    /// ∂_z on windowed coefficients.
    fn dz_w(w: &WSeries) -> WSeries {
        w.map(|c: &WindowPoly| c.map_with_exp(|e, x| x * qfrac(e, 2)))
    }

    #[test]
    fn seeds_match_printed_formulas() {
        // evaluate the printed expressions with J₁ = A·(1/K) and ℘ from its (p, q) expansion
        let n = 5;
        let (lo, hi) = (-6, 6);
        let b = Blocks::new(n + 1);
        let t = PhiTable::seeded(n + 1);
        let t_rel = 80usize;
        let inv_k = window_inverse(&b.k, n as usize + 1, t_rel).unwrap();
        let j1 = &lift(&b.a) * &inv_k;
        let wp = weierstrass_p_window(n + 1, 60);
        let dwp = dz_w(&wp);
        let e2 = lift(&from_q(&b.e2));
        let e4 = lift(&from_q(&b.e4));
        let k = lift(&b.k);
        let k3 = &(&k * &k) * &k;
        let k4 = &k3 * &k;
        let s = |w: &WSeries, r: Q| w.map(|c| c.scale(&r));
        let one = lift(&JSeries::one_in(Var::Q, n + 1));
        let j2 = &j1 * &j1;
        let j3 = &j2 * &j1;
        let printed_22 = {
            let x = &(&(&(&(&j2 * &wp) - &s(&(&j2 * &e2), qfrac(1, 12))) + &s(&(&wp * &wp), qfrac(3, 2)))
                + &(&j1 * &dwp))
                - &s(&e4, qfrac(1, 96));
            &s(&(&k4 * &x), qint(2)) - &one
        };
        let printed_21 = s(&(&k3 * &(&(&(&j1 * &wp) - &s(&(&j1 * &e2), qfrac(1, 12))) + &s(&dwp, qfrac(1, 2)))), qint(2));
        let printed_20 = s(&(&j1 * &(&k * &k)), qint(-2));
        let printed_2m1 = s(
            &(&k3 * &(&(&(&j3 - &s(&(&j1 * &wp), qfrac(3, 2))) - &s(&(&j1 * &e2), qfrac(1, 8))) - &s(&dwp, qfrac(1, 4)))),
            qfrac(-4, 3),
        );
        let printed_2m2 = s(
            &(&(&j1 * &k4) * &(&(&(&j3 - &s(&(&j1 * &wp), qint(2))) - &s(&(&j1 * &e2), qfrac(1, 12))) - &s(&dwp, qfrac(1, 2)))),
            qint(2),
        );
        for (key, printed) in [((2, 2), printed_22), ((2, 1), printed_21), ((2, 0), printed_20), ((2, -1), printed_2m1), ((2, -2), printed_2m2)] {
            let seed = lift(&t.get(key.0, key.1).unwrap());
            assert!(agree_on_window(&seed, &printed, n - 1, lo, hi).unwrap(), "{key:?}");
        }
    }

    #[test]
    fn symmetries_and_unknowns() {
        let t = PhiTable::seeded(4);
        assert!(t.closure_consistent(3));
        let a = t.get(1, 2).unwrap();
        assert_eq!(a, t.get(2, 1).unwrap().scale(&qfrac(1, 2)));
        assert_eq!(t.get(-2, -1).unwrap(), t.get(2, 1).unwrap().neg_series());
        assert_eq!(t.get(3, 1), Err(Error::UnknownPhi(3, 1)));
        assert_eq!(t.get(1, 3), Err(Error::UnknownPhi(1, 3)));
        // seeds satisfy ℓφ_{m,ℓ} = mφ_{ℓ,m} where both are seeded
        assert_eq!(t.get(-1, 1).unwrap(), t.get(1, -1).unwrap().neg_series());
    }

    #[test]
    fn leading_terms() {
        let t = PhiTable::seeded(4);
        for m in [1, 2] {
            assert_eq!(t.get(m, 0).unwrap().at(0), expected_leading(m));
            assert_eq!(t.get(-m, 0).unwrap().at(0), expected_leading(-m));
            for l in [-2, -1, 1, 2] {
                assert!(t.get(m, l).unwrap().at(0).is_zero(), "({m},{l})");
            }
        }
    }
}
