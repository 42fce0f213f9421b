//! The three closed-form matrix elements of ℰ^(0) used as checks.

use super::lattice::{ClassVec, KLattice};
use super::recursion::EOperator;
use super::state::{create, FockVector};
use crate::error::{Error, Result};
use crate::jacobi::JSeries;
use crate::kfrac::{FracRing, KFrac};
use crate::scalar::{factorial, qbig, Q};
use crate::series::Var;
use alloc::vec::Vec;
use num_traits::One;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Example {
    /// ⟨𝔭₋₁(F)^d 1|ℰ^(0) 𝔭₋₁(F)^d 1⟩ = F^{2d−2}/Δ.
    Fiber,
    /// ⟨𝔭₋₁(B+F)^d 1|ℰ^(0) 𝔭₋₁(B+F)^d 1⟩ = D_q^{2d}(F^{2d−2}/Δ).
    Section,
    /// ⟨C(F)⟩_q = G^{d−1}/Δ with C(F) = 𝔭₋₁(F)𝔭₋₁(𝗉)^{d−1} against 𝔭₋₁(F)𝔭₋₁(𝟙)^{d−1}, over (d−1)!.
    PointChain,
}

impl Example {
    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "i" => Some(Example::Fiber),
            "ii" => Some(Example::Section),
            "iii" => Some(Example::PointChain),
            _ => None,
        }
    }
}

fn power(lat: &KLattice, parts: &[(usize, ClassVec)]) -> FockVector {
    let ops: Vec<(i64, ClassVec)> = parts.iter().flat_map(|(n, c)| core::iter::repeat_n((1, c.clone()), *n)).collect();
    create(lat, &ops)
}

/// The matrix element computed by the recursion.
pub fn example_value(e: &EOperator, which: Example, d: usize) -> Result<KFrac> {
    if d == 0 {
        return Err(Error::Invalid("examples need d ≥ 1".into()));
    }
    let lat = e.lat;
    match which {
        Example::Fiber => {
            let v = power(lat, &[(d, lat.f())]);
            e.value_vec(0, &v, &v)
        }
        Example::Section => {
            let v = power(lat, &[(d, lat.beta(1))]);
            e.value_vec(0, &v, &v)
        }
        Example::PointChain => {
            let bra = power(lat, &[(1, lat.f()), (d - 1, lat.point())]);
            let ket = power(lat, &[(1, lat.f()), (d - 1, lat.unit())]);
            let x = e.value_vec(0, &bra, &ket)?;
            Ok(x.scale(&(Q::one() / qbig(factorial(d as u64 - 1)))))
        }
    }
}

/// F^{2d−2}/Δ = (−K²)^{d−1}/Δ.
fn fiber_form(ring: &FracRing, d: u32) -> KFrac {
    let s = if d % 2 == 1 { 1 } else { -1 };
    KFrac::new(ring.k_pow(2 * d).scale_int(s), 2)
}

/// The closed form the example should equal.
pub fn example_closed_form(ring: &FracRing, which: Example, d: usize) -> KFrac {
    let d32 = d as u32;
    match which {
        Example::Fiber => fiber_form(ring, d32),
        Example::Section => {
            let mut x = fiber_form(ring, d32);
            for _ in 0..2 * d {
                x = ring.dq(&x);
            }
            x
        }
        Example::PointChain => {
            let mut g = JSeries::one_in(Var::Q, ring.n());
            for _ in 1..d {
                g = &g * &ring.blocks.g;
            }
            KFrac::new(&g * &ring.k_pow(2 * (d32 - 1)), 2 * (d32 - 1))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::phi::PhiTable;

    #[test]
    fn examples_hold_for_small_d() {
        let lat = KLattice::new();
        let ring = FracRing::new(5);
        let phi = PhiTable::seeded(5);
        let e = EOperator::new(&lat, &ring, &phi);
        for which in [Example::Fiber, Example::Section, Example::PointChain] {
            for d in 1..=3 {
                let x = example_value(&e, which, d).unwrap();
                assert!(ring.equal(&x, &example_closed_form(&ring, which, d)), "{which:?} d={d}");
            }
        }
        assert!(example_value(&e, Example::Fiber, 0).is_err());
    }

    #[test]
    fn first_fiber_value_is_vacuum_like() {
        // d = 1: F⁰/Δ = 1/Δ, i.e. K²/(K²Δ)
        let ring = FracRing::new(4);
        let x = example_closed_form(&ring, Example::Fiber, 1);
        assert!(ring.equal(&x, &KFrac::new(ring.k_pow(2), 2)));
        assert_eq!(Example::from_name("iii"), Some(Example::PointChain));
        assert_eq!(Example::from_name("iv"), None);
    }
}
