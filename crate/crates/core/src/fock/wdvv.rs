//! The two commutator forms of the WDVV equations for ℰ^(0):
//!
//! 𝔭₀(γ)[ℰ, L₀(γ′)] = 𝔭₀(γ′)[ℰ, L₀(γ)],
//! 𝔭₀(γ)[ℰ, ∂] = y d/dy [ℰ, L₀(γ)].
//!
//! L₀(γ) and ∂ are q-independent, so the commutators are assembled from
//! matrix elements of ℰ and the rational matrices of L₀ and ∂.

use super::lattice::{ClassVec, KLattice};
use super::recursion::EOperator;
use super::state::{basis, l0_apply, lehn_apply_with, FockState, FockVector};
use crate::error::Result;
use crate::kfrac::KFrac;
use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    /// 1 for the L₀–L₀ equation, 2 for the ∂ equation.
    pub equation: u8,
    pub bra: FockState,
    pub ket: FockState,
    /// Lowest q-exponent of the nonzero residual.
    pub q_order: i64,
}

#[derive(Clone, Debug, Default)]
pub struct WdvvReport {
    pub d: i64,
    pub entries: usize,
    pub failures: Vec<Residual>,
}

impl WdvvReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Precomputed images of basis states under L₀(γ), L₀(γ′) and ∂.
struct Images {
    lg: Vec<FockVector>,
    lg2: Vec<FockVector>,
    lehn: Vec<FockVector>,
}

fn images(lat: &KLattice, states: &[FockState], g: &ClassVec, g2: &ClassVec) -> Images {
    let diag = lat.small_diagonal();
    let mut im = Images { lg: Vec::new(), lg2: Vec::new(), lehn: Vec::new() };
    for s in states {
        let v = FockVector::state(s.clone());
        im.lg.push(l0_apply(lat, g, &v));
        im.lg2.push(l0_apply(lat, g2, &v));
        im.lehn.push(lehn_apply_with(lat, &diag, &v));
    }
    im
}

fn lowest_q(x: &KFrac) -> i64 {
    // 1/(K^jΔ) starts at q^{-1}
    x.num.valuation().unwrap_or(x.num.trunc()) - 1
}

/// ⟨μ|[ℰ, X]ν⟩ = ⟨μ|ℰ Xν⟩ − ⟨Xμ|ℰν⟩, using that X is self-adjoint.
fn commutator(e: &EOperator, mu: &FockState, xmu: &FockVector, nu: &FockState, xnu: &FockVector) -> Result<KFrac> {
    let a = e.value_vec(0, &FockVector::state(mu.clone()), xnu)?;
    let b = e.value_vec(0, xmu, &FockVector::state(nu.clone()))?;
    Ok(e.ring.sub(&a, &b))
}

/// Checks both equations on every matrix entry of ℱ_d that can be nonzero.
pub fn wdvv_check(e: &EOperator, d: i64, g: &ClassVec, g2: &ClassVec) -> Result<WdvvReport> {
    let lat = e.lat;
    let ring = e.ring;
    let states = basis(d);
    let im = images(lat, &states, g, g2);
    let mut report = WdvvReport { d, ..Default::default() };
    for (i, mu) in states.iter().enumerate() {
        let km = mu.k_degree(lat);
        for (j, nu) in states.iter().enumerate() {
            // L₀(γ) and ∂ raise k by one
            if km + nu.k_degree(lat) != -1 {
                continue;
            }
            report.entries += 1;
            let xg = commutator(e, mu, &im.lg[i], nu, &im.lg[j])?;
            let xg2 = commutator(e, mu, &im.lg2[i], nu, &im.lg2[j])?;
            let r1 = ring.sub(&e.p0_value(g, &xg2), &e.p0_value(g2, &xg));
            if !r1.is_zero() {
                report.failures.push(Residual { equation: 1, bra: mu.clone(), ket: nu.clone(), q_order: lowest_q(&r1) });
            }
            let xd = commutator(e, mu, &im.lehn[i], nu, &im.lehn[j])?;
            let r2 = ring.sub(&e.p0_value(g, &xd), &ring.dz(&xg));
            if !r2.is_zero() {
                report.failures.push(Residual { equation: 2, bra: mu.clone(), ket: nu.clone(), q_order: lowest_q(&r2) });
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::phi::PhiTable;
    use crate::jacobi::JSeries;
    use crate::kfrac::FracRing;
    use crate::laurent::HalfLaurent;
    use crate::scalar::qint;
    use crate::series::Var;

    #[test]
    fn wdvv_on_one_point() {
        let lat = KLattice::new();
        let ring = FracRing::new(4);
        let phi = PhiTable::seeded(4);
        let e = EOperator::new(&lat, &ring, &phi);
        for g2 in [lat.f(), lat.beta(1)] {
            let rep = wdvv_check(&e, 1, &lat.b(), &g2).unwrap();
            assert!(rep.entries > 0);
            assert!(rep.holds(), "{:?}", rep.failures);
        }
        let same = wdvv_check(&e, 1, &lat.b(), &lat.b()).unwrap();
        assert!(same.failures.iter().all(|r| r.equation == 2));
    }

    #[test]
    fn wdvv_on_two_points() {
        let lat = KLattice::new();
        let ring = FracRing::new(4);
        let phi = PhiTable::seeded(4);
        let e = EOperator::new(&lat, &ring, &phi);
        for g2 in [lat.f(), lat.beta(1)] {
            let rep = wdvv_check(&e, 2, &lat.b(), &g2).unwrap();
            assert!(rep.holds(), "{} of {}: {:?}", rep.failures.len(), rep.entries, &rep.failures[..rep.failures.len().min(4)]);
        }
    }

    #[test]
    fn mutation_breaks_wdvv() {
        let lat = KLattice::new();
        let ring = FracRing::new(4);
        let q = JSeries::from_dense(Var::Q, 1, alloc::vec![HalfLaurent::constant(qint(1))], 4);
        let phi = PhiTable::seeded(4).mutated((1, 1), &q);
        let e = EOperator::new(&lat, &ring, &phi);
        // on ℱ₁ the shift only adds a multiple of the pairing, which commutes with L₀
        assert!(wdvv_check(&e, 1, &lat.b(), &lat.f()).unwrap().holds());
        let rep = wdvv_check(&e, 2, &lat.b(), &lat.f()).unwrap();
        assert!(!rep.holds());
        assert!(rep.failures.iter().all(|r| r.q_order >= 0));
    }
}
