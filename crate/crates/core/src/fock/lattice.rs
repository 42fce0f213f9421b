//! The K3 lattice H*(S) = ⟨𝟙⟩ ⊕ U³ ⊕ E₈(−1)² ⊕ ⟨𝗉⟩.
//!
//! Classes are stored in an orthogonal working basis so that every basis
//! class pairs with exactly one partner: 𝟙 with 𝗉, and each middle class
//! with itself. The middle part is B = e₁ − f₁, B + 2F = e₁ + f₁, e ± f in
//! the other two hyperbolic planes, and a rational Gram–Schmidt basis of
//! the two E₈(−1) copies.

use crate::scalar::{qint, Q};
use alloc::vec;
use alloc::vec::Vec;
use num_traits::{One, Zero};

pub const RANK: usize = 24;
pub const UNIT: usize = 0;
pub const POINT: usize = 23;

/// A class as coordinates in the working basis.
pub type ClassVec = Vec<Q>;

const E8_EDGES: [(usize, usize); 7] = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)];

#[derive(Clone, Debug)]
pub struct KLattice {
    /// Gram matrix in the integral basis (𝟙, e₁, f₁, e₂, f₂, e₃, f₃, E₈, E₈, 𝗉).
    pub gram_std: Vec<Vec<i64>>,
    /// Working basis vectors in integral coordinates.
    pub work: Vec<Vec<Q>>,
    /// ⟨w_i, w_partner(i)⟩.
    norm: Vec<Q>,
}

impl Default for KLattice {
    fn default() -> Self {
        Self::new()
    }
}

impl KLattice {
    pub fn new() -> Self {
        let mut g = vec![vec![0i64; RANK]; RANK];
        g[UNIT][POINT] = 1;
        g[POINT][UNIT] = 1;
        for u in 0..3 {
            let (e, f) = (1 + 2 * u, 2 + 2 * u);
            g[e][f] = 1;
            g[f][e] = 1;
        }
        for copy in 0..2 {
            let o = 7 + 8 * copy;
            for i in 0..8 {
                g[o + i][o + i] = -2;
            }
            for (a, b) in E8_EDGES {
                g[o + a][o + b] = 1;
                g[o + b][o + a] = 1;
            }
        }
        let unit = |i: usize| {
            let mut v = vec![Q::zero(); RANK];
            v[i] = Q::one();
            v
        };
        let comb = |a: usize, sa: i64, b: usize, sb: i64| {
            let mut v = vec![Q::zero(); RANK];
            v[a] = qint(sa);
            v[b] = qint(sb);
            v
        };
        let mut work = vec![unit(UNIT), comb(1, 1, 2, -1), comb(1, 1, 2, 1)];
        for u in 1..3 {
            let (e, f) = (1 + 2 * u, 2 + 2 * u);
            work.push(comb(e, 1, f, 1));
            work.push(comb(e, 1, f, -1));
        }
        let pair_std = |a: &[Q], b: &[Q]| -> Q {
            let mut s = Q::zero();
            for i in 0..RANK {
                if a[i].is_zero() {
                    continue;
                }
                for j in 0..RANK {
                    if g[i][j] != 0 && !b[j].is_zero() {
                        s += &a[i] * &b[j] * qint(g[i][j]);
                    }
                }
            }
            s
        };
        for copy in 0..2 {
            let o = 7 + 8 * copy;
            let start = work.len();
            for i in 0..8 {
                let mut v = unit(o + i);
                for w in &work[start..] {
                    let c = pair_std(&v, w) / pair_std(w, w);
                    for (vk, wk) in v.iter_mut().zip(w) {
                        *vk -= &c * wk;
                    }
                }
                work.push(v);
            }
        }
        work.push(unit(POINT));
        let mut lat = KLattice { gram_std: g, work, norm: Vec::new() };
        lat.norm = (0..RANK).map(|i| lat.pair_std(&lat.work[i], &lat.work[lat.partner(i)])).collect();
        lat
    }

    pub fn pair_std(&self, a: &[Q], b: &[Q]) -> Q {
        let mut s = Q::zero();
        for (ai, row) in a.iter().zip(&self.gram_std) {
            if ai.is_zero() {
                continue;
            }
            for (bj, &g) in b.iter().zip(row) {
                if g != 0 && !bj.is_zero() {
                    s += ai * bj * qint(g);
                }
            }
        }
        s
    }

    /// The unique basis class pairing nontrivially with class i.
    pub fn partner(&self, i: usize) -> usize {
        match i {
            UNIT => POINT,
            POINT => UNIT,
            m => m,
        }
    }

    /// ⟨w_i, w_j⟩ in the working basis.
    pub fn pair_basis(&self, i: usize, j: usize) -> Q {
        if self.partner(i) == j {
            self.norm[i].clone()
        } else {
            Q::zero()
        }
    }

    /// ⟨α, w_j⟩ for a class vector α.
    pub fn pair_vec_basis(&self, a: &ClassVec, j: usize) -> Q {
        &a[self.partner(j)] * &self.norm[j]
    }

    pub fn pair(&self, a: &ClassVec, b: &ClassVec) -> Q {
        (0..RANK).filter(|i| !a[*i].is_zero()).map(|i| &a[i] * &b[self.partner(i)] * &self.norm[i]).sum()
    }

    /// Shifted degree: −1 for 𝟙, 0 for middle classes, +1 for 𝗉.
    pub fn k_of(&self, i: usize) -> i64 {
        match i {
            UNIT => -1,
            POINT => 1,
            _ => 0,
        }
    }

    /// Converts integral coordinates to working coordinates.
    pub fn from_std(&self, v: &[Q]) -> ClassVec {
        (0..RANK).map(|i| self.pair_std(v, &self.work[self.partner(i)]) / &self.norm[i]).collect()
    }

    pub fn basis(&self, i: usize) -> ClassVec {
        let mut v = vec![Q::zero(); RANK];
        v[i] = Q::one();
        v
    }

    pub fn unit(&self) -> ClassVec {
        self.basis(UNIT)
    }

    pub fn point(&self) -> ClassVec {
        self.basis(POINT)
    }

    /// Section class B = e₁ − f₁.
    pub fn b(&self) -> ClassVec {
        self.basis(1)
    }

    /// Fiber class F = f₁ = ((B + 2F) − B)/2.
    pub fn f(&self) -> ClassVec {
        let mut v = vec![Q::zero(); RANK];
        v[1] = -crate::scalar::qfrac(1, 2);
        v[2] = crate::scalar::qfrac(1, 2);
        v
    }

    /// B + hF.
    pub fn beta(&self, h: i64) -> ClassVec {
        add(&self.b(), &scale(&self.f(), &qint(h)))
    }

    /// Named middle classes used on the command line.
    pub fn named(&self, name: &str) -> Option<ClassVec> {
        Some(match name {
            "B" => self.b(),
            "F" => self.f(),
            "W" | "B+F" => self.beta(1),
            "1" => self.unit(),
            "p" => self.point(),
            _ => return None,
        })
    }

    /// Cup product of two basis classes as a class vector.
    pub fn cup_basis(&self, i: usize, j: usize) -> ClassVec {
        let mut v = vec![Q::zero(); RANK];
        if i == UNIT {
            v[j] = Q::one();
        } else if j == UNIT {
            v[i] = Q::one();
        } else if i != POINT && j != POINT && i == j {
            v[POINT] = self.norm[i].clone();
        }
        v
    }

    pub fn cup(&self, a: &ClassVec, b: &ClassVec) -> ClassVec {
        let mut out = vec![Q::zero(); RANK];
        for i in (0..RANK).filter(|i| !a[*i].is_zero()) {
            for j in (0..RANK).filter(|j| !b[*j].is_zero()) {
                let c = self.cup_basis(i, j);
                let s = &a[i] * &b[j];
                for k in 0..RANK {
                    if !c[k].is_zero() {
                        out[k] += &c[k] * &s;
                    }
                }
            }
        }
        out
    }

    /// Dual basis class w_i^∨ with ⟨w_j, w_i^∨⟩ = δ_ij.
    pub fn dual(&self, i: usize) -> ClassVec {
        let mut v = vec![Q::zero(); RANK];
        v[self.partner(i)] = Q::one() / &self.norm[i];
        v
    }

    /// Terms (γ_x ∪ γ_y, γ_x^∨, γ_y^∨) of the small-diagonal class τ₃*(1),
    /// skipping vanishing cups.
    pub fn small_diagonal(&self) -> Vec<(ClassVec, ClassVec, ClassVec)> {
        let mut out = Vec::new();
        for x in 0..RANK {
            for y in 0..RANK {
                let c = self.cup_basis(x, y);
                if c.iter().all(|z| z.is_zero()) {
                    continue;
                }
                out.push((c, self.dual(x), self.dual(y)));
            }
        }
        out
    }

    /// Sum of positive and negative norms on the middle part.
    pub fn signature(&self) -> (usize, usize) {
        let mid = 1..POINT;
        let pos = mid.clone().filter(|i| self.norm[*i] > Q::zero()).count();
        (pos, mid.count() - pos)
    }

    /// Determinant of the middle Gram block, by rational elimination.
    pub fn middle_det(&self) -> Q {
        let n = RANK - 2;
        let mut m: Vec<Vec<Q>> = (1..=n).map(|i| (1..=n).map(|j| qint(self.gram_std[i][j])).collect()).collect();
        let mut det = Q::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|r| !m[*r][c].is_zero()) else { return Q::zero() };
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            det *= &m[c][c];
            for r in c + 1..n {
                if m[r][c].is_zero() {
                    continue;
                }
                let f = &m[r][c] / &m[c][c];
                let (top, bottom) = m.split_at_mut(r);
                for (x, y) in bottom[0][c..n].iter_mut().zip(&top[c][c..n]) {
                    *x -= &f * y;
                }
            }
        }
        det
    }
}

pub fn add(a: &ClassVec, b: &ClassVec) -> ClassVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &ClassVec, s: &Q) -> ClassVec {
    a.iter().map(|x| x * s).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_shape() {
        let l = KLattice::new();
        for i in 0..RANK {
            for j in 0..RANK {
                assert_eq!(l.gram_std[i][j], l.gram_std[j][i]);
            }
        }
        for i in 1..POINT {
            assert_eq!(l.gram_std[i][i] % 2, 0);
        }
        assert_eq!(crate::scalar::q_abs(&l.middle_det()), Q::one());
        assert_eq!(l.signature(), (3, 19));
        // the working basis is orthogonal
        for i in 0..RANK {
            for j in 0..RANK {
                let p = l.pair_std(&l.work[i], &l.work[j]);
                assert_eq!(p.is_zero(), l.partner(i) != j, "{i} {j}");
            }
        }
    }

    #[test]
    fn section_and_fiber() {
        let l = KLattice::new();
        let (b, f) = (l.b(), l.f());
        assert_eq!(l.pair(&b, &b), qint(-2));
        assert_eq!(l.pair(&b, &f), qint(1));
        assert_eq!(l.pair(&f, &f), qint(0));
        for h in 0..5 {
            assert_eq!(l.pair(&l.beta(1), &l.beta(h)), qint(h - 1));
        }
        assert_eq!(l.pair(&l.unit(), &l.point()), qint(1));
        // F from integral coordinates
        let mut fstd = vec![Q::zero(); RANK];
        fstd[2] = Q::one();
        assert_eq!(l.from_std(&fstd), f);
    }

    #[test]
    fn cup_and_pairing() {
        let l = KLattice::new();
        let (b, f) = (l.b(), l.f());
        let c = l.cup(&b, &f);
        assert_eq!(c, scale(&l.point(), &qint(1)));
        assert_eq!(l.cup(&l.unit(), &b), b);
        for i in 0..RANK {
            for j in 0..RANK {
                assert_eq!(l.pair(&l.basis(i), &l.dual(j)), if i == j { Q::one() } else { Q::zero() });
            }
        }
    }
}
