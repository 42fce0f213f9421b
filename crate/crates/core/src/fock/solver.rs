//! Order-by-order determination of unknown φ_{m,ℓ} from the WDVV equations.
//!
//! The q⁰ terms are fixed by the expected expansions φ_{m,0} = c_m + O(q)
//! and φ_{m,ℓ} = O(q). At order n ≥ 1, with all lower orders known, the q^n
//! coefficient of every residual numerator is affine in the unknown q^n
//! coefficients, since products of two unknowns start at q^{2n}. The affine
//! map is read off by exact finite differences and solved over ℚ.

use super::lattice::{ClassVec, KLattice, POINT, UNIT};
use super::phi::{expected_leading, PhiTable};
use super::recursion::EOperator;
use super::state::{basis, l0_apply, lehn_apply_with, FockState, FockVector};
use crate::error::{Error, Result};
use crate::jacobi::JSeries;
use crate::kfrac::{FracRing, KFrac};
use crate::laurent::HalfLaurent;
use crate::scalar::{qint, Q};
use crate::series::Var;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use num_traits::{One, Zero};

/// Classes spanning the residual entries: 𝟙, B, B + 2F, e₂ ± f₂, 𝗉.
/// The remaining middle classes pair with B and F like e₂ ± f₂ do.
pub const REDUCED_CLASSES: [usize; 6] = [UNIT, 1, 2, 3, 4, POINT];

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub table: PhiTable,
    /// Number of unknowns and the rank reached, per q-order.
    pub orders: Vec<(usize, usize)>,
}

/// Reduced basis of ℱ_d.
pub fn reduced_basis(d: i64) -> Vec<FockState> {
    basis(d).into_iter().filter(|s| s.parts().iter().all(|p| REDUCED_CLASSES.contains(&(p.c as usize)))).collect()
}

struct Setup {
    states: Vec<FockState>,
    gammas: Vec<ClassVec>,
    /// images[s][g] = L₀(γ_g)s, with ∂s last
    images: Vec<Vec<FockVector>>,
    /// Pairs (μ, ν) with k(μ) + k(ν) = −1.
    entries: Vec<(usize, usize)>,
}

/// Denominator exponent every row is normalised to.
const J_FIX: u32 = 64;

impl Setup {
    fn new(lat: &KLattice, d: i64) -> Self {
        let states = reduced_basis(d);
        let gammas = alloc::vec![lat.b(), lat.f(), lat.basis(3)];
        let diag = lat.small_diagonal();
        let images = states
            .iter()
            .map(|s| {
                let v = FockVector::state(s.clone());
                let mut row: Vec<FockVector> = gammas.iter().map(|g| l0_apply(lat, g, &v)).collect();
                row.push(lehn_apply_with(lat, &diag, &v));
                row
            })
            .collect();
        let mut entries = Vec::new();
        for (i, mu) in states.iter().enumerate() {
            for (j, nu) in states.iter().enumerate() {
                if mu.k_degree(lat) + nu.k_degree(lat) == -1 {
                    entries.push((i, j));
                }
            }
        }
        Setup { states, gammas, images, entries }
    }

    /// The residuals of one entry: the L₀–L₀ equation per pair of classes and
    /// the ∂ equation per class, with the seeds they depend on.
    fn entry(&self, e: &EOperator, idx: usize) -> Result<(Vec<KFrac>, u64)> {
        let ring = e.ring;
        let (i, j) = self.entries[idx];
        let (mu, nu) = (FockVector::state(self.states[i].clone()), FockVector::state(self.states[j].clone()));
        let ng = self.gammas.len();
        let mut deps = 0;
        let mut x = Vec::with_capacity(ng + 1);
        for g in 0..=ng {
            let (a, da) = e.value_vec_dep(0, &mu, &self.images[j][g])?;
            let (b, db) = e.value_vec_dep(0, &self.images[i][g], &nu)?;
            deps |= da | db;
            x.push(ring.sub(&a, &b));
        }
        let mut out = Vec::new();
        for a in 0..ng {
            for b in a + 1..ng {
                out.push(ring.sub(&e.p0_value(&self.gammas[a], &x[b]), &e.p0_value(&self.gammas[b], &x[a])));
            }
            out.push(ring.sub(&e.p0_value(&self.gammas[a], &x[ng]), &ring.dz(&x[a])));
        }
        Ok((out, deps))
    }
}

/// q^n coefficient of the value times q, scaled by (t − t⁻¹)^{J_FIX}; valid
/// when all lower coefficients vanish.
fn leading_row(v: &KFrac, n: i64, pows: &[HalfLaurent]) -> Result<HalfLaurent> {
    if v.j > J_FIX {
        return Err(Error::Invalid(alloc::format!("denominator K^{} exceeds K^{J_FIX}", v.j)));
    }
    Ok(v.num.coeff(n)?.mul(&pows[(J_FIX - v.j) as usize]))
}

/// Smallest ℱ_d on which the recursion reads φ_{m,ℓ}.
pub fn reach(key: (i64, i64)) -> i64 {
    let (m, l) = key;
    if m * l >= 0 {
        m.abs().max(l.abs())
    } else {
        m.abs() + l.abs()
    }
}

/// Exponents allowed at q^n for index (|m| + |ℓ|)/2: same parity as |m| + |ℓ| and
/// e² ≤ 8n(|m| + |ℓ|) + (|m| + |ℓ|)².
pub fn t_slots(key: (i64, i64), n: i64) -> Vec<i64> {
    let s = key.0.abs() + key.1.abs();
    let bound = (8 * n * s + s * s).isqrt();
    (-bound..=bound).filter(|e| (e - s).rem_euclid(2) == 0).collect()
}

/// Incremental row reduction for Σ a_i x_i + b = 0.
struct Elim {
    n: usize,
    rows: Vec<(usize, Vec<Q>)>,
}

impl Elim {
    fn push(&mut self, mut r: Vec<Q>) -> core::result::Result<(), ()> {
        for (p, row) in &self.rows {
            if !r[*p].is_zero() {
                let f = r[*p].clone();
                for (x, y) in r.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        match (0..self.n).find(|i| !r[*i].is_zero()) {
            None if r[self.n].is_zero() => Ok(()),
            None => Err(()),
            Some(p) => {
                let inv = Q::one() / &r[p];
                for x in r.iter_mut() {
                    *x *= &inv;
                }
                self.rows.push((p, r));
                Ok(())
            }
        }
    }

    fn solve(mut self) -> Vec<Q> {
        let mut x = alloc::vec![Q::zero(); self.n];
        while let Some((p, row)) = self.rows.pop() {
            let mut v = -row[self.n].clone();
            for i in 0..self.n {
                if i != p && !row[i].is_zero() {
                    v -= &row[i] * &x[i];
                }
            }
            x[p] = v;
        }
        x
    }
}

/// Solves the given keys from q⁰ up to q^{q_order−1}, each group on the
/// smallest reduced ℱ_d reaching it.
pub fn phi_solve(lat: &KLattice, base: &PhiTable, keys: &[(i64, i64)], q_order: i64) -> Result<SolveReport> {
    let mut table = base.truncated(q_order);
    let mut orders = Vec::new();
    let mut groups: BTreeMap<i64, Vec<(i64, i64)>> = BTreeMap::new();
    for k in keys {
        groups.entry(reach(*k)).or_default().push(*k);
    }
    for (d, group) in groups {
        let rep = solve_group(lat, &table, &group, d, q_order)?;
        table = rep.table;
        orders.extend(rep.orders);
    }
    Ok(SolveReport { table, orders })
}

/// Solves `keys` on the reduced ℱ_d.
pub fn solve_group(lat: &KLattice, base: &PhiTable, keys: &[(i64, i64)], d: i64, q_order: i64) -> Result<SolveReport> {
    let setup = Setup::new(lat, d);
    let ring = FracRing::new(q_order);
    let tmt = HalfLaurent::t_minus_inv();
    let mut pows = alloc::vec![HalfLaurent::one()];
    for i in 0..J_FIX as usize {
        let next = pows[i].mul(&tmt);
        pows.push(next);
    }
    let mut known: BTreeMap<(i64, i64), Vec<HalfLaurent>> = keys
        .iter()
        .map(|k| (*k, alloc::vec![if k.1 == 0 { expected_leading(k.0) } else { HalfLaurent::zero() }]))
        .collect();
    let table_with = |known: &BTreeMap<(i64, i64), Vec<HalfLaurent>>, trunc: i64| {
        let mut t = base.truncated(q_order);
        for (k, c) in known {
            t.insert(*k, JSeries::from_dense(Var::Q, 0, c.clone(), trunc));
        }
        t
    };
    let mut excluded = alloc::vec![false; setup.entries.len()];
    let mut orders = Vec::new();
    for n in 0..q_order {
        if n > 0 {
            for c in known.values_mut() {
                c.push(HalfLaurent::zero());
            }
        }
        let t_base = table_with(&known, n + 1);
        let e_base = EOperator::new(lat, &ring, &t_base);
        let mut base_rows: Vec<Option<(Vec<HalfLaurent>, u64)>> = Vec::with_capacity(setup.entries.len());
        for (idx, ex) in excluded.iter_mut().enumerate() {
            if *ex {
                base_rows.push(None);
                continue;
            }
            match setup.entry(&e_base, idx) {
                Ok((vals, deps)) => {
                    let rows = vals.iter().map(|v| leading_row(v, n, &pows)).collect::<Result<Vec<_>>>()?;
                    base_rows.push(Some((rows, deps)));
                }
                Err(Error::UnknownPhi(..)) => {
                    *ex = true;
                    base_rows.push(None);
                }
                Err(err) => return Err(err),
            }
        }
        if n == 0 {
            // the expected q⁰ terms must already satisfy every equation
            if base_rows.iter().flatten().any(|(r, _)| r.iter().any(|x| !x.is_zero())) {
                return Err(Error::Inconsistent(0));
            }
            continue;
        }
        let unknowns: Vec<((i64, i64), i64)> = keys.iter().flat_map(|k| t_slots(*k, n).into_iter().map(move |e| (*k, e))).collect();
        // columns: changes of each affected row under a unit probe
        let mut cols: Vec<BTreeMap<usize, Vec<HalfLaurent>>> = Vec::with_capacity(unknowns.len());
        for (k, e) in &unknowns {
            let mut probe = known.clone();
            probe.get_mut(k).unwrap()[n as usize] = HalfLaurent::monomial(*e, qint(1));
            let t = table_with(&probe, n + 1);
            let bit = t.seed_bit(*k);
            let ep = EOperator::new(lat, &ring, &t);
            ep.inherit(&e_base, bit);
            let mut col = BTreeMap::new();
            for (idx, br) in base_rows.iter().enumerate() {
                let Some((rows, deps)) = br else { continue };
                if deps & bit == 0 {
                    continue;
                }
                match ep.value_entry(&setup, idx) {
                    Ok(vals) => {
                        let diff = vals
                            .iter()
                            .zip(rows)
                            .map(|(v, b)| Ok(leading_row(v, n, &pows)?.sub(b)))
                            .collect::<Result<Vec<_>>>()?;
                        col.insert(idx, diff);
                    }
                    Err(Error::UnknownPhi(..)) => excluded[idx] = true,
                    Err(err) => return Err(err),
                }
            }
            cols.push(col);
        }
        let mut el = Elim { n: unknowns.len(), rows: Vec::new() };
        for (idx, br) in base_rows.iter().enumerate() {
            let Some((rows, _)) = br else { continue };
            if excluded[idx] {
                continue;
            }
            for (ri, b) in rows.iter().enumerate() {
                let zero = HalfLaurent::zero();
                let entry = |c: &BTreeMap<usize, Vec<HalfLaurent>>| c.get(&idx).map(|v| v[ri].clone()).unwrap_or_else(|| zero.clone());
                let cs: Vec<HalfLaurent> = cols.iter().map(entry).collect();
                let mut exps: Vec<i64> = b.terms().iter().map(|t| t.0).collect();
                for c in &cs {
                    exps.extend(c.terms().iter().map(|t| t.0));
                }
                exps.sort_unstable();
                exps.dedup();
                for ex in exps {
                    let mut r: Vec<Q> = cs.iter().map(|c| c.coeff(ex)).collect();
                    r.push(b.coeff(ex));
                    el.push(r).map_err(|_| Error::Inconsistent(n))?;
                }
            }
        }
        let rank = el.rows.len();
        orders.push((unknowns.len(), rank));
        if rank < unknowns.len() {
            return Err(Error::Underdetermined(n, unknowns.len() - rank));
        }
        let x = el.solve();
        for ((k, e), v) in unknowns.iter().zip(x) {
            if !v.is_zero() {
                let slot = known.get_mut(k).unwrap();
                slot[n as usize] = slot[n as usize].add(&HalfLaurent::monomial(*e, v));
            }
        }
    }
    Ok(SolveReport { table: table_with(&known, q_order), orders })
}

/// WDVV on the reduced ℱ_d, over the entries the table can evaluate.
#[derive(Clone, Debug, Default)]
pub struct ReducedWdvv {
    pub d: i64,
    pub entries: usize,
    /// Entries that read an unknown φ.
    pub skipped: usize,
    /// Entries with a nonzero residual.
    pub failures: usize,
    /// Union of the seed bits read by the evaluated entries.
    pub deps: u64,
}

impl ReducedWdvv {
    pub fn holds(&self) -> bool {
        self.failures == 0
    }
}

pub fn reduced_wdvv(lat: &KLattice, phi: &PhiTable, d: i64, q_order: i64) -> Result<ReducedWdvv> {
    let setup = Setup::new(lat, d);
    let ring = FracRing::new(q_order);
    let e = EOperator::new(lat, &ring, phi);
    let mut rep = ReducedWdvv { d, ..Default::default() };
    for idx in 0..setup.entries.len() {
        rep.entries += 1;
        match setup.entry(&e, idx) {
            Ok((vals, deps)) => {
                rep.deps |= deps;
                if vals.iter().any(|v| !v.is_zero()) {
                    rep.failures += 1;
                }
            }
            Err(Error::UnknownPhi(..)) => rep.skipped += 1,
            Err(err) => return Err(err),
        }
    }
    Ok(rep)
}

impl EOperator<'_> {
    fn value_entry(&self, setup: &Setup, idx: usize) -> Result<Vec<KFrac>> {
        Ok(setup.entry(self, idx)?.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slots_respect_parity() {
        assert_eq!(t_slots((1, 0), 0), [-1, 1]);
        assert_eq!(t_slots((1, 1), 0), [-2, 0, 2]);
        assert!(t_slots((2, 2), 2).iter().all(|e| e % 2 == 0));
    }

    #[test]
    fn elimination_solves_small_system() {
        // x + y − 3 = 0, x − y − 1 = 0
        let mut el = Elim { n: 2, rows: Vec::new() };
        el.push(alloc::vec![qint(1), qint(1), qint(-3)]).unwrap();
        el.push(alloc::vec![qint(1), qint(-1), qint(-1)]).unwrap();
        assert!(el.push(alloc::vec![qint(2), qint(0), qint(0)]).is_err());
        assert_eq!(el.solve(), [qint(2), qint(1)]);
    }

    #[test]
    fn solver_reproduces_m2_seeds() {
        let lat = KLattice::new();
        let q_order = 3;
        let keys = [(2, 2), (2, 1), (2, 0), (2, -1), (2, -2)];
        let rep = phi_solve(&lat, &PhiTable::initial(q_order), &keys[..3], q_order).unwrap();
        let seeded = PhiTable::seeded(q_order);
        for k in &keys[..3] {
            assert!(rep.table.get(k.0, k.1).unwrap().agrees_with(&seeded.get(k.0, k.1).unwrap()), "{k:?}");
        }
    }

    #[test]
    fn m2_minus_one_is_fixed_on_three_points() {
        // the printed φ_{2,−1} is not a solution; its negative is
        let lat = KLattice::new();
        let q_order = 2;
        let seeded = PhiTable::seeded(q_order);
        let mut base = seeded.clone();
        base.remove((2, -1));
        base.remove((2, -2));
        let rep = phi_solve(&lat, &base, &[(2, -1)], q_order).unwrap();
        let solved = rep.table.get(2, -1).unwrap();
        assert!(solved.agrees_with(&seeded.get(2, -1).unwrap().neg_series()));
        assert!(!solved.agrees_with(&seeded.get(2, -1).unwrap()));
    }

    #[test]
    fn printed_minus_one_fails_on_three_points() {
        let lat = KLattice::new();
        let q = 2;
        let seeded = PhiTable::seeded(q);
        let printed = reduced_wdvv(&lat, &seeded, 3, q).unwrap();
        assert!(!printed.holds());
        assert!(printed.skipped > 0 && printed.skipped < printed.entries);
        let mut fixed = seeded.clone();
        fixed.insert((2, -1), seeded.get(2, -1).unwrap().neg_series());
        assert!(reduced_wdvv(&lat, &fixed, 3, q).unwrap().holds());
        // ℱ₂ never reads the two negative-ℓ seeds
        let two = reduced_wdvv(&lat, &seeded, 2, q).unwrap();
        assert!(two.holds());
        assert_eq!(two.deps & (seeded.seed_bit((2, -1)) | seeded.seed_bit((2, -2))), 0);
    }

    #[test]
    #[ignore = "about a minute; four-point system"]
    fn m2_minus_two_is_not_fixed_by_reduced_classes() {
        let lat = KLattice::new();
        let q_order = 2;
        let seeded = PhiTable::seeded(q_order);
        let mut base = seeded.clone();
        base.insert((2, -1), seeded.get(2, -1).unwrap().neg_series());
        base.remove((2, -2));
        assert!(matches!(phi_solve(&lat, &base, &[(2, -2)], q_order), Err(Error::Underdetermined(1, _))));
    }
}
