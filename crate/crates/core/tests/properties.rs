//! Cross-module invariants on randomized and exhaustive inputs.

use k3e_core::enumerative::{conjecture_c2, divisor_target, gw_disconnected, kawai_yoshioka, WPoly};
use k3e_core::fock::lattice::KLattice;
use k3e_core::fock::phi::PhiTable;
use k3e_core::fock::recursion::EOperator;
use k3e_core::fock::state::basis;
use k3e_core::igusa::Chi10Method;
use k3e_core::kfrac::FracRing;
use k3e_core::scalar::{ipow_q, qfrac, qint, Q};
use proptest::prelude::*;
use std::collections::BTreeMap;
use std::sync::OnceLock;

#[test]
fn e_is_self_adjoint_and_has_bidegree_zero() {
    let lat = KLattice::new();
    let ring = FracRing::new(4);
    let phi = PhiTable::seeded(4);
    let e = EOperator::new(&lat, &ring, &phi);
    for d in 1..=2 {
        let states = basis(d);
        let mut nonzero = 0;
        for a in &states {
            for b in &states {
                let x = e.value(0, a, b).unwrap();
                let y = e.value(0, b, a).unwrap();
                assert!(ring.equal(&x, &y), "{a:?} {b:?}");
                if !x.is_zero() {
                    nonzero += 1;
                    assert_eq!(a.k_degree(&lat) + b.k_degree(&lat), 0);
                }
            }
        }
        assert!(nonzero > 0);
    }
    // states of different energy never pair
    let v = basis(2)[0].clone();
    let w = basis(1)[0].clone();
    assert!(e.value(0, &w, &v).unwrap().is_zero());
}

#[test]
fn gw_truncation_safety() {
    let small = gw_disconnected(Chi10Method::Product, 2, 2, 2).unwrap();
    let big = gw_disconnected(Chi10Method::Product, 4, 3, 3).unwrap();
    for g in 0..=1 {
        for h in 0..3 {
            for d in 0..3 {
                assert_eq!(small.coeff(g, h, d).unwrap(), big.coeff(g, h, d).unwrap());
            }
        }
    }
}

fn ky() -> &'static k3e_core::enumerative::KySeries {
    static KY: OnceLock<k3e_core::enumerative::KySeries> = OnceLock::new();
    KY.get_or_init(|| kawai_yoshioka(7, 4).unwrap())
}

fn palindromic(p: &WPoly) -> bool {
    p.terms().all(|(e, c)| p.at(-e) == *c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn phi_symmetries(m in -2i64..=2, l in -2i64..=2) {
        prop_assume!(m != 0 || l != 0);
        let t = PhiTable::seeded(3);
        let a = t.get(m, l).unwrap();
        prop_assert_eq!(a.clone(), t.get(-m, -l).unwrap().neg_series());
        if m != 0 && l != 0 {
            prop_assert_eq!(a.scale(&qint(l)), t.get(l, m).unwrap().scale(&qint(m)));
        }
    }

    #[test]
    fn ky_is_symmetric_in_w(a in -4i64..7, n in -1i64..4) {
        prop_assert!(palindromic(&ky().coeff(a, n).unwrap()));
    }

    #[test]
    fn ky_truncation_safety(a in -3i64..4, n in -1i64..2) {
        let small = kawai_yoshioka(4, 2).unwrap();
        prop_assert_eq!(small.coeff(a, n).unwrap(), ky().coeff(a, n).unwrap());
    }

    #[test]
    fn c2_prime_multiplicity(
        p in prop::sample::select(vec![2i64, 3, 5, 7]),
        g in 0i64..4,
        h in 2i64..5,
        deltas in prop::collection::vec(0i64..3, 0..3),
        x in -50i64..50,
        y in -50i64..50,
    ) {
        let prim: BTreeMap<i64, Q> = [(divisor_target(p, 1, h), qint(x)), (h, qint(y))].into();
        let e = 2 * g - 3 + deltas.iter().sum::<i64>();
        let want = qint(x) + ipow_q(p, e) * qint(y);
        prop_assert_eq!(conjecture_c2(p, g, h, &deltas, &prim).unwrap(), want);
        prop_assert_eq!(conjecture_c2(1, g, h, &deltas, &prim).unwrap(), qint(y));
    }

    #[test]
    fn c2_is_linear(m in 1i64..7, a in -9i64..9, b in -9i64..9) {
        let keys: Vec<i64> = (1..=m).filter(|k| m % k == 0).map(|k| divisor_target(m, k, 2)).collect();
        let p1: BTreeMap<i64, Q> = keys.iter().map(|k| (*k, qint(*k))).collect();
        let p2: BTreeMap<i64, Q> = keys.iter().map(|k| (*k, qfrac(1, *k + 1))).collect();
        let mix: BTreeMap<i64, Q> = keys.iter().map(|k| (*k, qint(a) * &p1[k] + qint(b) * &p2[k])).collect();
        let lhs = conjecture_c2(m, 2, 2, &[2, 2], &mix).unwrap();
        let rhs = qint(a) * conjecture_c2(m, 2, 2, &[2, 2], &p1).unwrap() + qint(b) * conjecture_c2(m, 2, 2, &[2, 2], &p2).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
