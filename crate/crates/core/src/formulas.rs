//! Exact counting formulas over arbitrary-precision integers.
//!
//! Notation: `psi(n, k)` counts simple maps from a fixed `k`-dimensional
//! subspace `W` of `F_q^n` into `F_q^n`; `sigma(n, k, l)` counts `k`-dimensional
//! subspaces meeting `W` in dimension `l`; `tau(k, l)` counts simple maps
//! `W_1 -> V` with image `W_2`, where `dim W_1 = dim W_2 = k` and
//! `dim(W_1 ∩ W_2) = l`; `mu(k, l)` is `tau(k, l)` divided by
//! `prod_{i=1}^{k-1} (q^k - q^i)`.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

fn check_q(q: u64) -> Result<()> {
    if q < 2 {
        return Err(Error::InvalidArgument(format!("q must be at least 2, got {q}")));
    }
    Ok(())
}

fn qpow(q: u64, e: u64) -> BigUint {
    num_traits::pow(BigUint::from(q), e as usize)
}

/// `prod_{i=from}^{to-1} (q^n - q^i)`; empty products are 1.
pub fn falling_product(q: u64, n: u64, from: u64, to: u64) -> BigUint {
    let qn = qpow(q, n);
    (from..to).fold(BigUint::one(), |acc, i| acc * (&qn - qpow(q, i)))
}

/// Gaussian binomial `[n, k]_q`; zero when `k > n`.
pub fn gauss_binom(n: u64, k: u64, q: u64) -> Result<BigUint> {
    check_q(q)?;
    if k > n {
        return Ok(BigUint::zero());
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= qpow(q, n - i) - 1u32;
        den *= qpow(q, k - i) - 1u32;
    }
    let (quot, rem) = num.div_rem(&den);
    assert!(rem.is_zero(), "Gaussian binomial division must be exact");
    Ok(quot)
}

/// `prod_{i=1}^{k} (q^n - q^i)`
pub fn psi(n: u64, k: u64, q: u64) -> Result<BigUint> {
    check_q(q)?;
    if k >= n {
        return Err(Error::InvalidArgument(format!("psi needs k < n, got n={n}, k={k}")));
    }
    Ok(falling_product(q, n, 1, k + 1))
}

/// `[k, l]_q [n-k, k-l]_q q^{(k-l)^2}`; zero when `k - l > n - k`.
pub fn sigma_formula(n: u64, k: u64, l: u64, q: u64) -> Result<BigUint> {
    check_q(q)?;
    if l > k || k > n {
        return Err(Error::InvalidArgument(format!("sigma needs l <= k <= n, got n={n}, k={k}, l={l}")));
    }
    Ok(gauss_binom(k, l, q)? * gauss_binom(n - k, k - l, q)? * qpow(q, (k - l) * (k - l)))
}

/// `|GL_k(F_q)| = prod_{i=0}^{k-1} (q^k - q^i)`
pub fn gl_order(k: u64, q: u64) -> Result<BigUint> {
    check_q(q)?;
    Ok(falling_product(q, k, 0, k))
}

fn check_kl(k: u64, l: u64) -> Result<()> {
    if l > k {
        return Err(Error::InvalidArgument(format!("need l <= k, got k={k}, l={l}")));
    }
    Ok(())
}

/// 1 when `k = l = 0`, otherwise `q^k - q^l`.
pub fn mu(k: u64, l: u64, q: u64) -> Result<BigUint> {
    check_q(q)?;
    check_kl(k, l)?;
    if k == 0 {
        return Ok(BigUint::one());
    }
    Ok(qpow(q, k) - qpow(q, l))
}

/// `mu(k, l) * prod_{i=1}^{k-1} (q^k - q^i)`
pub fn tau_closed(k: u64, l: u64, q: u64) -> Result<BigUint> {
    Ok(mu(k, l, q)? * falling_product(q, k, 1, k.max(1)))
}

/// Memoized evaluation of the `tau` recurrence for one `q`:
///
/// `tau(k, l) = sum_{m=0}^{l} sigma(k, l, m) tau(l, m) prod_{i=l}^{k-1} (q^k - q^i)`
///
/// for `0 < l < k`, with `tau(0, 0) = 1`, `tau(k, k) = 0` and
/// `tau(k, 0) = |GL_k|` for `k >= 1`. At `l = k` the recurrence only says
/// `tau = tau`, so the base case is used there.
#[derive(Debug)]
pub struct TauTable {
    q: u64,
    memo: HashMap<(u64, u64), BigUint>,
}

impl TauTable {
    pub fn new(q: u64) -> Result<Self> {
        check_q(q)?;
        Ok(TauTable { q, memo: HashMap::new() })
    }

    pub fn tau(&mut self, k: u64, l: u64) -> Result<BigUint> {
        check_kl(k, l)?;
        if let Some(v) = self.memo.get(&(k, l)) {
            return Ok(v.clone());
        }
        let q = self.q;
        let v = if k == 0 {
            BigUint::one()
        } else if l == k {
            BigUint::zero()
        } else if l == 0 {
            gl_order(k, q)?
        } else {
            let ext = falling_product(q, k, l, k);
            let mut sum = BigUint::zero();
            for m in 0..=l {
                let inner = self.tau(l, m)?;
                if inner.is_zero() {
                    continue;
                }
                sum += sigma_formula(k, l, m, q)? * inner;
            }
            sum * ext
        };
        self.memo.insert((k, l), v.clone());
        Ok(v)
    }
}

pub fn tau_recurrence(k: u64, l: u64, q: u64) -> Result<BigUint> {
    TauTable::new(q)?.tau(k, l)
}

/// `sum_{l=0}^{k} sigma(n, k, l) tau(k, l)`
pub fn psi_from_sum(n: u64, k: u64, q: u64) -> Result<BigUint> {
    check_q(q)?;
    if k >= n {
        return Err(Error::InvalidArgument(format!("psi needs k < n, got n={n}, k={k}")));
    }
    let mut sum = BigUint::zero();
    for l in 0..=k {
        sum += sigma_formula(n, k, l, q)? * tau_closed(k, l, q)?;
    }
    Ok(sum)
}

/// `tau(n, k) == psi(n, k) * prod_{i=k}^{n-1} (q^n - q^i)`
pub fn tau_psi_relation(n: u64, k: u64, q: u64) -> Result<bool> {
    Ok(tau_closed(n, k, q)? == psi(n, k, q)? * falling_product(q, n, k, n))
}

/// `prod_{i=1}^{k} (1 - q^{i-n})` as a reduced fraction.
pub fn delta(n: u64, k: u64, q: u64) -> Result<BigRational> {
    check_q(q)?;
    if k >= n {
        return Err(Error::InvalidArgument(format!("delta needs k < n, got n={n}, k={k}")));
    }
    let mut acc = BigRational::one();
    for i in 1..=k {
        let d = qpow(q, n - i);
        acc *= BigRational::new((&d - 1u32).into(), d.into());
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn ratio(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn gauss_binom_examples() {
        assert_eq!(gauss_binom(7, 0, 3).unwrap(), big(1));
        assert_eq!(gauss_binom(2, 1, 2).unwrap(), big(3));
        assert_eq!(gauss_binom(4, 2, 2).unwrap(), big(35));
        assert_eq!(gauss_binom(2, 3, 2).unwrap(), big(0));
        assert!(gauss_binom(4, 2, 1).is_err());
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi(5, 0, 2).unwrap(), big(1));
        assert_eq!(psi(3, 2, 2).unwrap(), big(24));
        assert_eq!(psi(3, 1, 3).unwrap(), big(24));
        assert!(psi(3, 3, 2).is_err());
    }

    #[test]
    fn sigma_examples() {
        for k in 0..5 {
            assert_eq!(sigma_formula(8, k, k, 3).unwrap(), big(1));
        }
        assert_eq!(sigma_formula(4, 2, 1, 2).unwrap(), big(18));
        assert_eq!(sigma_formula(2, 1, 0, 2).unwrap(), big(2));
        // more than n - k new directions are impossible
        assert_eq!(sigma_formula(3, 2, 0, 2).unwrap(), big(0));
        assert!(sigma_formula(2, 1, 2, 2).is_err());
    }

    #[test]
    fn gl_order_examples() {
        assert_eq!(gl_order(0, 2).unwrap(), big(1));
        assert_eq!(gl_order(1, 2).unwrap(), big(1));
        assert_eq!(gl_order(2, 2).unwrap(), big(6));
        assert_eq!(gl_order(2, 3).unwrap(), big(48));
    }

    #[test]
    fn tau_recurrence_examples() {
        assert_eq!(tau_recurrence(0, 0, 2).unwrap(), big(1));
        assert_eq!(tau_recurrence(2, 2, 2).unwrap(), big(0));
        assert_eq!(tau_recurrence(1, 1, 5).unwrap(), big(0));
        assert_eq!(tau_recurrence(2, 1, 2).unwrap(), big(4));
        assert!(tau_recurrence(1, 2, 2).is_err());
    }

    #[test]
    fn mu_examples() {
        assert_eq!(mu(0, 0, 2).unwrap(), big(1));
        assert_eq!(mu(2, 1, 2).unwrap(), big(2));
        for k in 1..6 {
            assert_eq!(mu(k, k, 3).unwrap(), big(0));
        }
    }

    #[test]
    fn tau_closed_examples() {
        assert_eq!(tau_closed(1, 0, 3).unwrap(), big(2));
        assert_eq!(tau_closed(2, 1, 2).unwrap(), big(4));
        assert_eq!(tau_closed(3, 3, 7).unwrap(), big(0));
        assert_eq!(tau_closed(0, 0, 2).unwrap(), big(1));
    }

    #[test]
    fn psi_from_sum_examples() {
        assert_eq!(psi_from_sum(4, 0, 2).unwrap(), big(1));
        assert_eq!(psi_from_sum(3, 2, 2).unwrap(), big(24));
        assert_eq!(psi_from_sum(3, 2, 3).unwrap(), big(432));
    }

    #[test]
    fn tau_psi_relation_examples() {
        assert!(tau_psi_relation(2, 1, 2).unwrap());
        assert!(tau_psi_relation(4, 2, 2).unwrap());
        assert!(tau_psi_relation(3, 1, 5).unwrap());
        // both sides are 4 at q=2, n=2, k=1
        assert_eq!(tau_closed(2, 1, 2).unwrap(), big(4));
    }

    #[test]
    fn delta_examples() {
        assert_eq!(delta(3, 0, 2).unwrap(), ratio(1, 1));
        assert_eq!(delta(2, 1, 2).unwrap(), ratio(1, 2));
        assert_eq!(delta(3, 2, 2).unwrap(), ratio(3, 8));
        assert!(delta(2, 2, 2).is_err());
    }

    #[test]
    fn wide_values_stay_exact() {
        let v = psi(30, 29, 2).unwrap();
        assert!(v.bits() > 64);
        assert_eq!(v, psi_from_sum(30, 29, 2).unwrap());
    }

    #[test]
    fn identities_small_grid() {
        for q in [2u64, 3, 5] {
            let mut table = TauTable::new(q).unwrap();
            for k in 0..=12 {
                for l in 0..=k {
                    assert_eq!(table.tau(k, l).unwrap(), tau_closed(k, l, q).unwrap(), "q={q} k={k} l={l}");
                }
                assert_eq!(tau_closed(k, 0, q).unwrap(), gl_order(k, q).unwrap());
            }
            for n in 1..=8 {
                for k in 0..=n {
                    let s: BigUint = (0..=k).map(|l| sigma_formula(n, k, l, q).unwrap()).sum();
                    assert_eq!(s, gauss_binom(n, k, q).unwrap());
                }
                for k in 0..n {
                    let d = delta(n, k, q).unwrap();
                    let scaled = d * BigRational::from_integer(qpow(q, n * k).into());
                    assert_eq!(scaled, BigRational::from_integer(psi(n, k, q).unwrap().into()));
                }
            }
        }
    }
}
