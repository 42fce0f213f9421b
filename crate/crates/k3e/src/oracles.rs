//! Independent reference computations the verification suites compare against.
//! None of them shares code paths with the quantities they check.

use k3e_core::error::Result;
use k3e_core::forms::{delta_inverse, eisenstein};
use k3e_core::scalar::{bernoulli, factorial, q_abs, qbig, qint, Q};
use k3e_core::series::{QSeries, TruncSeries, Var};

/// (1/(u²Δ))·exp(Σ_{k≥1} u^{2k}|B_{2k}|/(k(2k)!)·E_{2k}) for u-exponents below `nu`.
pub fn kkv(nu: i64, nq: i64) -> Result<TruncSeries<QSeries>> {
    let mut terms = Vec::new();
    let mut k = 1;
    while 2 * k < nu + 2 {
        let c = q_abs(&bernoulli(2 * k as usize)) / (qint(k) * qbig(factorial(2 * k as u64)));
        terms.push((2 * k, eisenstein(2 * k, nq + 1)?.scale(&c)));
        k += 1;
    }
    let e = TruncSeries::from_terms(Var::U, terms, nu + 2).exp_series()?;
    let inv_d = delta_inverse(nq);
    Ok(e.map(|c: &QSeries| c * &inv_d).shift(-2))
}

/// Index-m sublattices of ℤ², enumerated as Hermite normal forms [[a, b], [0, d]], 0 ≤ b < d.
pub fn sublattices(m: i64) -> i64 {
    let mut n = 0;
    for a in 1..=m {
        for d in 1..=m {
            for _b in 0..d {
                if a * d == m {
                    n += 1;
                }
            }
        }
    }
    n
}

/// Σ_{k|m} k by trial division.
pub fn divisor_sum(m: i64) -> i64 {
    (1..=m).filter(|k| m % k == 0).sum()
}

/// Tangent lines to a smooth plane curve of degree `d` through a general point: d(d − 1).
pub fn tangents_from_point(d: i64) -> i64 {
    d * (d - 1)
}

/// Bitangents of a smooth plane curve of degree `d`: d(d − 2)(d − 3)(d + 3)/2.
pub fn bitangents(d: i64) -> i64 {
    d * (d - 2) * (d - 3) * (d + 3) / 2
}

/// y/(1 + y)² = Σ_{n≥1} (−1)^{n−1} n yⁿ, as (exponent, coefficient) pairs for n < `n_end`.
pub fn y_over_one_plus_y_squared(n_end: i64) -> Vec<(i64, Q)> {
    (1..n_end).map(|n| (n, qint(if n % 2 == 1 { n } else { -n }))).collect()
}
