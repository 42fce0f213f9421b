//! Nakajima basis states, vectors with rational coefficients, and the
//! operators 𝔭_m, L₀(γ), Lehn's ∂ and the pairing.

use super::lattice::{ClassVec, KLattice, RANK};
use crate::scalar::{qint, Q};
use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use num_traits::{One, Zero};

/// One creation operator 𝔭_{−m}(w_c).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Part {
    pub m: u8,
    pub c: u8,
}

/// ∏ 𝔭_{−mᵢ}(w_{cᵢ}) 1_S with the parts kept sorted.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct FockState(Vec<Part>);

impl FockState {
    pub fn vacuum() -> Self {
        FockState(Vec::new())
    }

    pub fn new(mut parts: Vec<Part>) -> Self {
        parts.sort();
        FockState(parts)
    }

    pub fn parts(&self) -> &[Part] {
        &self.0
    }

    pub fn is_vacuum(&self) -> bool {
        self.0.is_empty()
    }

    pub fn energy(&self) -> i64 {
        self.0.iter().map(|p| p.m as i64).sum()
    }

    pub fn k_degree(&self, lat: &KLattice) -> i64 {
        self.0.iter().map(|p| lat.k_of(p.c as usize)).sum()
    }

    pub fn with(&self, p: Part) -> Self {
        let mut v = self.0.clone();
        let at = v.partition_point(|x| *x < p);
        v.insert(at, p);
        FockState(v)
    }

    pub fn without(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v.remove(i);
        FockState(v)
    }

    /// The state pairing nontrivially with this one: every class replaced by its partner.
    pub fn dual(&self, lat: &KLattice) -> Self {
        FockState::new(self.0.iter().map(|p| Part { m: p.m, c: lat.partner(p.c as usize) as u8 }).collect())
    }
}

/// All basis states of energy d.
pub fn basis(d: i64) -> Vec<FockState> {
    let mut out = Vec::new();
    fn rec(rem: i64, min: Part, cur: &mut Vec<Part>, out: &mut Vec<FockState>) {
        if rem == 0 {
            out.push(FockState(cur.clone()));
            return;
        }
        for m in min.m as i64..=rem {
            let c0 = if m == min.m as i64 { min.c } else { 0 };
            for c in c0..RANK as u8 {
                let p = Part { m: m as u8, c };
                cur.push(p);
                rec(rem - m, p, cur, out);
                cur.pop();
            }
        }
    }
    rec(d, Part { m: 1, c: 0 }, &mut Vec::new(), &mut out);
    out
}

/// Finite combination of basis states.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct FockVector(pub BTreeMap<FockState, Q>);

impl FockVector {
    pub fn zero() -> Self {
        FockVector(BTreeMap::new())
    }

    pub fn state(s: FockState) -> Self {
        let mut m = BTreeMap::new();
        m.insert(s, Q::one());
        FockVector(m)
    }

    pub fn vacuum() -> Self {
        Self::state(FockState::vacuum())
    }

    pub fn add_term(&mut self, s: FockState, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.0.entry(s) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (s, c) in &o.0 {
            r.add_term(s.clone(), c.clone());
        }
        r
    }

    pub fn scale(&self, s: &Q) -> Self {
        let mut r = FockVector::zero();
        for (k, c) in &self.0 {
            r.add_term(k.clone(), c * s);
        }
        r
    }

    pub fn coeff(&self, s: &FockState) -> Q {
        self.0.get(s).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FockState, &Q)> {
        self.0.iter()
    }
}

/// Acts with 𝔭_m(α). Creation prepends a part per basis component of α;
/// annihilation contracts each matching part with factor −m⟨α, β⟩.
pub fn nakajima_apply(lat: &KLattice, m: i64, a: &ClassVec, v: &FockVector) -> FockVector {
    let mut out = FockVector::zero();
    if m < 0 {
        for (s, c) in v.terms() {
            for (i, ai) in a.iter().enumerate() {
                if !ai.is_zero() {
                    out.add_term(s.with(Part { m: (-m) as u8, c: i as u8 }), c * ai);
                }
            }
        }
    } else if m > 0 {
        for (s, c) in v.terms() {
            for (i, p) in s.parts().iter().enumerate() {
                if p.m as i64 != m {
                    continue;
                }
                let pr = lat.pair_vec_basis(a, p.c as usize);
                if !pr.is_zero() {
                    out.add_term(s.without(i), c * pr * qint(-m));
                }
            }
        }
    }
    out
}

/// 𝔭_m applied to a single basis class.
fn nak_basis(lat: &KLattice, m: i64, c: usize, v: &FockVector) -> FockVector {
    nakajima_apply(lat, m, &lat.basis(c), v)
}

/// ⟨μ|ν⟩ with the adjoint of 𝔭_{−m}(α) equal to (−1)^m 𝔭_m(α).
pub fn inner_product(lat: &KLattice, mu: &FockVector, nu: &FockVector) -> Q {
    let mut s = Q::zero();
    for (a, ca) in mu.terms() {
        for (b, cb) in nu.terms() {
            let x = inner_states(lat, a, b);
            if !x.is_zero() {
                s += x * ca * cb;
            }
        }
    }
    s
}

pub fn inner_states(lat: &KLattice, a: &FockState, b: &FockState) -> Q {
    if a.energy() != b.energy() || a.k_degree(lat) + b.k_degree(lat) != 0 {
        return Q::zero();
    }
    let mut v = FockVector::state(b.clone());
    let mut sign = Q::one();
    // peel the bra from the left: ⟨𝔭_{−m}(α)w'| = (−1)^m ⟨w'|𝔭_m(α)
    for p in a.parts().iter().rev() {
        if p.m % 2 == 1 {
            sign = -sign;
        }
        v = nak_basis(lat, p.m as i64, p.c as usize, &v);
        if v.is_zero() {
            return Q::zero();
        }
    }
    sign * v.coeff(&FockState::vacuum())
}

/// L₀(γ) = −Σ_{k≥1} Σ_x 𝔭_{−k}(γ_x ∪ γ) 𝔭_k(γ_x^∨).
pub fn l0_apply(lat: &KLattice, g: &ClassVec, v: &FockVector) -> FockVector {
    let mut out = FockVector::zero();
    let kmax = v.terms().map(|(s, _)| s.energy()).max().unwrap_or(0);
    for k in 1..=kmax {
        for x in 0..RANK {
            let ann = nakajima_apply(lat, k, &lat.dual(x), v);
            if ann.is_zero() {
                continue;
            }
            let cre = nakajima_apply(lat, -k, &lat.cup(&lat.basis(x), g), &ann);
            out = out.add(&cre.scale(&qint(-1)));
        }
    }
    out
}

/// Lehn's ∂ = −½ Σ_{i,j≥1} (𝔭_{−i}𝔭_{−j}𝔭_{i+j} + 𝔭_i𝔭_j𝔭_{−(i+j)}) τ₃*(1).
pub fn lehn_apply(lat: &KLattice, v: &FockVector) -> FockVector {
    lehn_apply_with(lat, &lat.small_diagonal(), v)
}

pub fn lehn_apply_with(lat: &KLattice, diag: &[(ClassVec, ClassVec, ClassVec)], v: &FockVector) -> FockVector {
    let mut out = FockVector::zero();
    let d = v.terms().map(|(s, _)| s.energy()).max().unwrap_or(0);
    for i in 1..d {
        for j in 1..=d - i {
            for (c1, c2, c3) in diag {
                // split: 𝔭_{−i}(c1)𝔭_{−j}(c2)𝔭_{i+j}(c3)
                let a = nakajima_apply(lat, i + j, c3, v);
                if !a.is_zero() {
                    let b = nakajima_apply(lat, -j, c2, &a);
                    out = out.add(&nakajima_apply(lat, -i, c1, &b));
                }
                // join: 𝔭_i(c1)𝔭_j(c2)𝔭_{−(i+j)}(c3)
                let a = nakajima_apply(lat, j, c2, &nakajima_apply(lat, -(i + j), c3, v));
                if !a.is_zero() {
                    out = out.add(&nakajima_apply(lat, i, c1, &a));
                }
            }
        }
    }
    out.scale(&crate::scalar::qfrac(-1, 2))
}

/// Builds ∏ 𝔭_{−mᵢ}(αᵢ) 1_S from class vectors, rightmost first.
pub fn create(lat: &KLattice, ops: &[(i64, ClassVec)]) -> FockVector {
    let mut v = FockVector::vacuum();
    for (m, a) in ops.iter().rev() {
        v = nakajima_apply(lat, -m, a, &v);
    }
    v
}
