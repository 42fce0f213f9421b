//! Exact scalars: arbitrary precision rationals and Gaussian rationals,
//! plus the small number-theoretic helpers the forms need.

use alloc::vec::Vec;
use core::fmt;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Rational scalar. `BigRational` keeps lowest terms with a positive denominator.
pub type Q = BigRational;

pub fn qint(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qfrac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qbig(n: BigInt) -> Q {
    Q::from_integer(n)
}

/// `num/den` with the denominator omitted when it is 1.
pub fn q_to_string(x: &Q) -> alloc::string::String {
    use alloc::string::ToString;
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        let mut s = x.numer().to_string();
        s.push('/');
        s.push_str(&x.denom().to_string());
        s
    }
}

pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Q::new(n, d))
        }
        None => Some(Q::from_integer(s.parse().ok()?)),
    }
}

/// Gaussian rational `re + i·im`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct QI {
    pub re: Q,
    pub im: Q,
}

impl QI {
    pub fn new(re: Q, im: Q) -> Self {
        QI { re, im }
    }
    pub fn real(re: Q) -> Self {
        QI { re, im: Q::zero() }
    }
    pub fn i() -> Self {
        QI { re: Q::zero(), im: Q::one() }
    }
    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
    pub fn conj(&self) -> Self {
        QI { re: self.re.clone(), im: -self.im.clone() }
    }
    pub fn norm(&self) -> Q {
        &self.re * &self.re + &self.im * &self.im
    }
    pub fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(QI { re: &self.re / &n, im: -(&self.im / &n) })
    }
    /// `i^k` for any integer k.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => QI::real(Q::one()),
            1 => QI::i(),
            2 => QI::real(-Q::one()),
            _ => QI { re: Q::zero(), im: -Q::one() },
        }
    }
}

impl fmt::Display for QI {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i", q_to_string(&self.re), q_to_string(&self.im))
    }
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Generalised binomial coefficient `binom(a, k)` for integer `a` (possibly negative).
pub fn binom_int(a: i64, k: u64) -> BigInt {
    let mut num = BigInt::one();
    for j in 0..k as i64 {
        num *= BigInt::from(a - j);
    }
    num / factorial(k)
}

pub fn binom(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    binom_int(n as i64, k)
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// σ_k(n) = Σ_{d|n} d^k for k ≥ 0.
pub fn sigma(k: u32, n: u64) -> BigInt {
    divisors(n).into_iter().map(|d| BigInt::from(d).pow(k)).sum()
}

pub fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    a.gcd(&b).gcd(&c)
}

/// Bernoulli numbers B_0..=B_n with B_1 = −1/2.
pub fn bernoulli_table(n: usize) -> Vec<Q> {
    let mut b: Vec<Q> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        if m == 0 {
            b.push(Q::one());
            continue;
        }
        let mut s = Q::zero();
        for (k, bk) in b.iter().enumerate() {
            s += qbig(binom(m as u64 + 1, k as u64)) * bk;
        }
        b.push(-s / qint(m as i64 + 1));
    }
    b
}

pub fn bernoulli(n: usize) -> Q {
    bernoulli_table(n).pop().unwrap_or_else(Q::one)
}

pub fn q_abs(x: &Q) -> Q {
    x.abs()
}

pub fn pow_q(x: &Q, e: u32) -> Q {
    let mut r = Q::one();
    for _ in 0..e {
        r *= x;
    }
    r
}

/// a^e for integer a and integer e, rational when e < 0.
pub fn ipow_q(a: i64, e: i64) -> Q {
    let base = qint(a);
    if e >= 0 {
        pow_q(&base, e as u32)
    } else {
        Q::one() / pow_q(&base, (-e) as u32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_values() {
        let b = bernoulli_table(8);
        assert_eq!(b[1], qfrac(-1, 2));
        assert_eq!(b[2], qfrac(1, 6));
        assert_eq!(b[4], qfrac(-1, 30));
        assert_eq!(b[6], qfrac(1, 42));
        assert_eq!(b[8], qfrac(-1, 30));
        assert!(b[3].is_zero() && b[5].is_zero());
    }

    #[test]
    fn negative_binomials() {
        // (1-x)^{-2} = Σ (k+1) x^k
        for k in 0..6u64 {
            let c = binom_int(-2, k) * if k % 2 == 0 { 1 } else { -1 };
            assert_eq!(c, BigInt::from(k + 1));
        }
    }

    #[test]
    fn parse_roundtrip() {
        for x in [qfrac(-3, 7), qint(12), qfrac(5, 1), Q::zero()] {
            assert_eq!(parse_q(&q_to_string(&x)).unwrap(), x);
        }
        assert!(parse_q("1/0").is_none());
    }

    #[test]
    fn gaussian_inverse() {
        let z = QI::new(qint(3), qint(4));
        let w = z.inv().unwrap();
        assert_eq!(w, QI::new(qfrac(3, 25), qfrac(-4, 25)));
        assert_eq!(QI::i_pow(-1), QI::new(Q::zero(), qint(-1)));
    }
}
