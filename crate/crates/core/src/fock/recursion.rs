//! The operators ℰ^(r) by their commutation recursion.
//!
//! ℰ^(r) is not q-linear: the ℓ = 0 terms apply 𝔭₀(γ), which acts on
//! coefficients as ⟨γ,B⟩ + ⟨γ,F⟩(D_q + 1). A matrix element is therefore
//! an operator f ↦ ⟨w|ℰ^(r)(f·v)⟩ = Σ_k a_k D_q^k f, and the recursion
//! composes such operators with multiplication by φ_{m,ℓ}.

use super::lattice::{ClassVec, KLattice};
use super::phi::{ratio_pow, PhiTable};
use super::state::{FockState, FockVector};
use crate::error::Result;
use crate::jacobi::JSeries;
use crate::scalar::binom;
use crate::kfrac::{FracRing, KFrac};
use crate::scalar::{qbig, qint, Q};
use alloc::collections::BTreeMap;
use alloc::rc::Rc;
use alloc::vec::Vec;
use core::cell::RefCell;
use num_traits::Zero;

/// Σ_k a_k D_q^k.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct DiffOp(pub Vec<KFrac>);

impl DiffOp {
    pub fn zero() -> Self {
        DiffOp(Vec::new())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|a| a.is_zero())
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    /// Value on f = 1.
    pub fn at_one(&self, ring: &FracRing) -> KFrac {
        self.0.first().cloned().unwrap_or_else(|| ring.zero())
    }

    fn add_assign(&mut self, ring: &FracRing, o: &DiffOp) {
        if self.0.len() < o.0.len() {
            self.0.resize(o.0.len(), ring.zero());
        }
        for (a, b) in self.0.iter_mut().zip(&o.0) {
            *a = ring.add(a, b);
        }
    }

    fn scale(&self, s: &Q) -> DiffOp {
        DiffOp(self.0.iter().map(|a| a.scale(s)).collect())
    }

    /// M ∘ (multiplication by φ): b_j = Σ_{k≥j} a_k C(k,j) D^{k−j}φ.
    fn after_mult(&self, ring: &FracRing, phi: &JSeries) -> DiffOp {
        let n = self.0.len();
        let mut dphi = Vec::with_capacity(n);
        let mut cur = phi.clone();
        for _ in 0..n {
            dphi.push(cur.clone());
            cur = cur.derivative();
        }
        let mut out = Vec::with_capacity(n);
        for j in 0..n {
            let mut acc = ring.zero();
            for k in j..n {
                let c = qbig(binom(k as u64, j as u64));
                acc = ring.add(&acc, &self.0[k].mul_fin(&dphi[k - j]).scale(&c));
            }
            out.push(acc);
        }
        DiffOp(out)
    }
}

/// Selection of the creation operator commuted first.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Peel {
    First,
    Last,
}

type Memo = BTreeMap<(i64, FockState, FockState), (Rc<DiffOp>, u64)>;

/// Evaluator for ⟨w|ℰ^(r)(f·v)⟩ over a fixed φ-table.
pub struct EOperator<'a> {
    pub lat: &'a KLattice,
    pub ring: &'a FracRing,
    pub phi: &'a PhiTable,
    pub peel: Peel,
    pub memo_on: bool,
    memo: RefCell<Memo>,
    dcoef: Vec<(Q, Q)>,
}

impl<'a> EOperator<'a> {
    pub fn new(lat: &'a KLattice, ring: &'a FracRing, phi: &'a PhiTable) -> Self {
        let (b, f) = (lat.b(), lat.f());
        let dcoef = (0..super::lattice::RANK).map(|i| (lat.pair_vec_basis(&b, i), lat.pair_vec_basis(&f, i))).collect();
        EOperator { lat, ring, phi, peel: Peel::First, memo_on: true, memo: RefCell::new(BTreeMap::new()), dcoef }
    }

    pub fn with_peel(mut self, peel: Peel) -> Self {
        self.peel = peel;
        self
    }

    pub fn without_memo(mut self) -> Self {
        self.memo_on = false;
        self
    }

    pub fn memo_len(&self) -> usize {
        self.memo.borrow().len()
    }

    fn pick(&self, s: &FockState) -> usize {
        match self.peel {
            Peel::First => 0,
            Peel::Last => s.parts().len() - 1,
        }
    }

    fn phi(&self, m: i64, l: i64, deps: &mut u64) -> Result<JSeries> {
        *deps |= self.phi.dependency(m, l);
        self.phi.get(m, l)
    }

    /// Copies memo entries of `other` that do not depend on any seed in `drop`.
    pub fn inherit(&self, other: &EOperator, drop: u64) {
        let mut mine = self.memo.borrow_mut();
        for (k, v) in other.memo.borrow().iter() {
            if v.1 & drop == 0 {
                mine.insert(k.clone(), v.clone());
            }
        }
    }

    /// 𝔭₀(w_c) ∘ M, with 𝔭₀ = ⟨γ,B⟩ + ⟨γ,F⟩(D_q + 1).
    fn p0_after(&self, c: usize, op: &DiffOp) -> DiffOp {
        let (cb, cf) = &self.dcoef[c];
        p0_after_coeffs(self.ring, cb, cf, op)
    }

    /// The operator f ↦ ⟨w|ℰ^(r)(f·v)⟩.
    pub fn op(&self, r: i64, w: &FockState, v: &FockState) -> Result<Rc<DiffOp>> {
        Ok(self.op_dep(r, w, v)?.0)
    }

    /// The operator together with the seeds it was built from.
    pub fn op_dep(&self, r: i64, w: &FockState, v: &FockState) -> Result<(Rc<DiffOp>, u64)> {
        if w.energy() != v.energy() - r || w.k_degree(self.lat) + v.k_degree(self.lat) != 0 {
            return Ok((Rc::new(DiffOp::zero()), 0));
        }
        let key = (r, w.clone(), v.clone());
        if self.memo_on {
            if let Some(x) = self.memo.borrow().get(&key) {
                return Ok(x.clone());
            }
        }
        let mut deps = 0;
        let out = (Rc::new(self.compute(r, w, v, &mut deps)?), deps);
        if self.memo_on {
            self.memo.borrow_mut().insert(key, out.clone());
        }
        Ok(out)
    }

    fn sub(&self, r: i64, w: &FockState, v: &FockState, deps: &mut u64) -> Result<Rc<DiffOp>> {
        let (op, d) = self.op_dep(r, w, v)?;
        *deps |= d;
        Ok(op)
    }

    fn compute(&self, r: i64, w: &FockState, v: &FockState, deps: &mut u64) -> Result<DiffOp> {
        let ring = self.ring;
        let lat = self.lat;
        let mut acc = DiffOp::zero();
        if w.is_vacuum() && v.is_vacuum() {
            if r == 0 {
                acc.0.push(ring.vacuum());
            }
            return Ok(acc);
        }
        if !w.is_vacuum() {
            // ⟨𝔭_{−m}(α)w'| = (−1)^m ⟨w'|𝔭_m(α)
            let i = self.pick(w);
            let part = w.parts()[i];
            let (m, a) = (part.m as i64, part.c as usize);
            let k = lat.k_of(a);
            let w1 = w.without(i);
            // ℰ^(r)𝔭_m(α) on v
            for (j, pj) in v.parts().iter().enumerate() {
                if pj.m as i64 != m {
                    continue;
                }
                let pr = lat.pair_basis(a, pj.c as usize);
                if pr.is_zero() {
                    continue;
                }
                let sub = self.sub(r, &w1, &v.without(j), deps)?;
                acc.add_assign(ring, &sub.scale(&(pr * qint(-m))));
            }
            // ℓ > 0: ℰ^(r+m−ℓ)𝔭_ℓ(α) φ_{m,ℓ}
            for (j, pj) in v.parts().iter().enumerate() {
                let l = pj.m as i64;
                let pr = lat.pair_basis(a, pj.c as usize);
                if pr.is_zero() {
                    continue;
                }
                let sub = self.sub(r + m - l, &w1, &v.without(j), deps)?;
                if sub.is_zero() {
                    continue;
                }
                let phi = self.phi(m, l, deps)?;
                let c = ratio_pow(l, m, k) * pr * qint(-l);
                acc.add_assign(ring, &sub.after_mult(ring, &phi).scale(&c));
            }
            // ℓ < 0: 𝔭_ℓ(α)ℰ^(r+m−ℓ) φ_{m,ℓ}, with 𝔭_ℓ moved onto the bra
            for (j, pj) in w1.parts().iter().enumerate() {
                let n = pj.m as i64;
                let l = -n;
                let pr = lat.pair_basis(a, pj.c as usize);
                if pr.is_zero() {
                    continue;
                }
                let sub = self.sub(r + m - l, &w1.without(j), v, deps)?;
                if sub.is_zero() {
                    continue;
                }
                let phi = self.phi(m, l, deps)?;
                let sign = if n % 2 == 1 { qint(-1) } else { qint(1) };
                let c = ratio_pow(l, m, k) * sign * pr * qint(-n);
                acc.add_assign(ring, &sub.after_mult(ring, &phi).scale(&c));
            }
            // ℓ = 0, present only for middle classes
            if k == 0 && self.has_p0(a) {
                let sub = self.sub(r + m, &w1, v, deps)?;
                if !sub.is_zero() {
                    let phi = self.phi(m, 0, deps)?;
                    acc.add_assign(ring, &self.p0_after(a, &sub.after_mult(ring, &phi)));
                }
            }
            if m % 2 == 1 {
                acc = acc.scale(&qint(-1));
            }
            return Ok(acc);
        }
        // ⟨1|ℰ^(r)𝔭_{−m}(α)v'⟩ = −⟨1|[𝔭_{−m}(α), ℰ^(r)]v'⟩
        let i = self.pick(v);
        let part = v.parts()[i];
        let (m, a) = (part.m as i64, part.c as usize);
        let k = lat.k_of(a);
        let v1 = v.without(i);
        for (j, pj) in v1.parts().iter().enumerate() {
            let l = pj.m as i64;
            let pr = lat.pair_basis(a, pj.c as usize);
            if pr.is_zero() {
                continue;
            }
            let sub = self.sub(r - m - l, w, &v1.without(j), deps)?;
            if sub.is_zero() {
                continue;
            }
            let phi = self.phi(-m, l, deps)?;
            let c = ratio_pow(l, -m, k) * pr * qint(-l);
            acc.add_assign(ring, &sub.after_mult(ring, &phi).scale(&c));
        }
        if k == 0 && self.has_p0(a) {
            let sub = self.sub(r - m, w, &v1, deps)?;
            if !sub.is_zero() {
                let phi = self.phi(-m, 0, deps)?;
                acc.add_assign(ring, &self.p0_after(a, &sub.after_mult(ring, &phi)));
            }
        }
        Ok(acc.scale(&qint(-1)))
    }

    fn has_p0(&self, c: usize) -> bool {
        let (cb, cf) = &self.dcoef[c];
        !cb.is_zero() || !cf.is_zero()
    }

    /// ⟨w|ℰ^(r) v⟩ for basis states.
    pub fn value(&self, r: i64, w: &FockState, v: &FockState) -> Result<KFrac> {
        Ok(self.op(r, w, v)?.at_one(self.ring))
    }

    /// ⟨μ|ℰ^(r) ν⟩ for vectors, with the seeds it depends on.
    pub fn value_vec_dep(&self, r: i64, mu: &FockVector, nu: &FockVector) -> Result<(KFrac, u64)> {
        let mut acc = self.ring.zero();
        let mut deps = 0;
        for (a, ca) in mu.terms() {
            for (b, cb) in nu.terms() {
                let x = self.sub(r, a, b, &mut deps)?.at_one(self.ring);
                if !x.is_zero() {
                    acc = self.ring.add(&acc, &x.scale(&(ca * cb)));
                }
            }
        }
        Ok((acc, deps))
    }

    /// ⟨μ|ℰ^(r) ν⟩ for vectors, bilinearly.
    pub fn value_vec(&self, r: i64, mu: &FockVector, nu: &FockVector) -> Result<KFrac> {
        let mut acc = self.ring.zero();
        for (a, ca) in mu.terms() {
            for (b, cb) in nu.terms() {
                let x = self.value(r, a, b)?;
                if !x.is_zero() {
                    acc = self.ring.add(&acc, &x.scale(&(ca * cb)));
                }
            }
        }
        Ok(acc)
    }

    /// 𝔭₀(γ) applied to a value.
    pub fn p0_value(&self, g: &ClassVec, x: &KFrac) -> KFrac {
        let cb = self.lat.pair(g, &self.lat.b());
        let cf = self.lat.pair(g, &self.lat.f());
        p0_after_coeffs(self.ring, &cb, &cf, &DiffOp(alloc::vec![x.clone()])).at_one(self.ring)
    }
}

fn p0_after_coeffs(ring: &FracRing, cb: &Q, cf: &Q, op: &DiffOp) -> DiffOp {
    if cf.is_zero() {
        return op.scale(cb);
    }
    let base = cb + cf;
    let n = op.0.len();
    let mut out: Vec<KFrac> = Vec::with_capacity(n + 1);
    for kk in 0..=n {
        let mut t = ring.zero();
        if kk < n {
            t = ring.add(&op.0[kk].scale(&base), &ring.dq(&op.0[kk]).scale(cf));
        }
        if kk > 0 {
            t = ring.add(&t, &op.0[kk - 1].scale(cf));
        }
        out.push(t);
    }
    DiffOp(out)
}

/// Full matrix of ℰ^(r): ℱ_d → ℱ_{d−r}, rows indexed by bra states of energy d − r.
pub fn e_matrix(e: &EOperator, d: i64, r: i64) -> Result<Vec<Vec<KFrac>>> {
    let rows = super::state::basis(d - r);
    let cols = super::state::basis(d);
    let mut out = Vec::with_capacity(rows.len());
    for w in &rows {
        let mut row = Vec::with_capacity(cols.len());
        for v in &cols {
            row.push(e.value(r, w, v)?);
        }
        out.push(row);
    }
    Ok(out)
}

/// Tr ℰ^(0) on ℱ_d, using the monomial pairing: Σ_μ ⟨μ^∨|ℰμ⟩/⟨μ^∨|μ⟩.
pub fn trace_on(e: &EOperator, d: i64) -> Result<KFrac> {
    let mut acc = e.ring.zero();
    for mu in super::state::basis(d) {
        let dual = mu.dual(e.lat);
        let g = super::state::inner_states(e.lat, &dual, &mu);
        let x = e.value(0, &dual, &mu)?;
        if !x.is_zero() {
            acc = e.ring.add(&acc, &x.scale(&(Q::from_integer(1.into()) / g)));
        }
    }
    Ok(acc)
}
