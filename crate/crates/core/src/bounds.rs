//! Closed-form region bounds and the combinatorial identities behind them.

use num::{BigInt, One, Zero};

use crate::error::{Error, Result};
use crate::network::BiasMode;

/// `C(n, k)`, zero whenever an argument is negative or `k > n`.
pub fn binom(n: i64, k: i64) -> BigInt {
    if n < 0 || k < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `e_0, ..., e_upto` of the given values.
pub fn elementary_symmetric(values: &[BigInt], upto: usize) -> Vec<BigInt> {
    let mut e = vec![BigInt::zero(); upto + 1];
    e[0] = BigInt::one();
    for v in values {
        for j in (1..=upto).rev() {
            let add = &e[j - 1] * v;
            e[j] += add;
        }
    }
    e
}

fn shifted(ranks: &[usize]) -> Vec<BigInt> {
    ranks.iter().map(|&k| BigInt::from(k) - 1).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShallowQuery {
    pub n: usize,
    pub ranks: Vec<usize>,
    pub bias_mode: BiasMode,
}

impl ShallowQuery {
    pub fn new(n: usize, ranks: &[usize], bias_mode: BiasMode) -> Self {
        ShallowQuery { n, ranks: ranks.to_vec(), bias_mode }
    }
}

/// Maximum number of regions of one layer.
pub fn shallow_formula(q: &ShallowQuery) -> BigInt {
    let n = q.n;
    match q.bias_mode {
        BiasMode::Bias => elementary_symmetric(&shifted(&q.ranks), n).into_iter().sum(),
        BiasMode::NoBias => {
            let m_prime = q.ranks.iter().filter(|&&k| k > 1).count() as i64;
            if m_prime == 0 {
                return BigInt::one();
            }
            let e = elementary_symmetric(&shifted(&q.ranks), n.saturating_sub(1));
            let tail: BigInt = if n == 0 { BigInt::zero() } else { e.into_iter().sum() };
            binom(m_prime - 1, n as i64 - 1) + tail
        }
    }
}

pub fn trivial_bound(ranks: &[usize]) -> BigInt {
    ranks.iter().map(|&k| BigInt::from(k)).product()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeepQuery {
    pub n0: usize,
    pub ranks: Vec<Vec<usize>>,
    pub bias_mode: BiasMode,
}

impl DeepQuery {
    pub fn uniform(n0: usize, widths: &[usize], k: usize, bias_mode: BiasMode) -> Self {
        DeepQuery { n0, ranks: widths.iter().map(|&w| vec![k; w]).collect(), bias_mode }
    }

    pub fn widths(&self) -> Vec<usize> {
        self.ranks.iter().map(Vec::len).collect()
    }
}

/// Product over layers of the shallow bound with input dimension
/// `e_l = min(n_0, ..., n_{l-1})`.
pub fn deep_upper(q: &DeepQuery) -> BigInt {
    let mut e = q.n0;
    let mut acc = BigInt::one();
    for layer in &q.ranks {
        acc *= shallow_formula(&ShallowQuery::new(e, layer, q.bias_mode));
        e = e.min(layer.len());
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeepLower {
    pub n: usize,
    pub value: BigInt,
}

/// The deep lower bound for one admissible choice of `n`, or `None`.
pub fn deep_lower_at(n: usize, n0: usize, widths: &[usize], k: usize, bias_mode: BiasMode) -> Option<BigInt> {
    let (last, hidden) = widths.split_last()?;
    if n == 0 || n > n0 || k == 0 {
        return None;
    }
    let (eff, folds): (usize, Vec<usize>) = match bias_mode {
        BiasMode::Bias => (n, hidden.to_vec()),
        BiasMode::NoBias => {
            if n < 2 {
                return None;
            }
            (n - 1, hidden.iter().map(|&w| w.saturating_sub(1)).collect())
        }
    };
    let km1 = BigInt::from(k - 1);
    let mut acc = BigInt::one();
    for w in folds {
        if w == 0 || w % eff != 0 || (w / eff) % 2 != 0 {
            return None;
        }
        let base = BigInt::from(w / eff) * &km1 + 1;
        acc *= num::pow(base, eff);
    }
    let tail: BigInt = (0..=eff).map(|j| binom(*last as i64, j as i64) * num::pow(km1.clone(), j)).sum();
    Some(acc * tail)
}

/// Deep lower bound maximized over admissible `n`.
pub fn deep_lower(n0: usize, widths: &[usize], k: usize, bias_mode: BiasMode) -> Result<DeepLower> {
    let mut best: Option<DeepLower> = None;
    for n in 1..=n0 {
        if let Some(value) = deep_lower_at(n, n0, widths, k, bias_mode) {
            if best.as_ref().is_none_or(|b| value > b.value) {
                best = Some(DeepLower { n, value });
            }
        }
    }
    best.ok_or_else(|| {
        Error::Precondition(format!(
            "no admissible n for n0={n0}, widths={widths:?}: every hidden width must be an even multiple of n"
        ))
    })
}

/// Left side of `sum_j (-1)^{n-j} C(m-1-j, n-j) C(m-r, j-r)`, which is always 1.
pub fn identity_inclusion_exclusion(m: usize, n: usize, r: usize) -> Result<BigInt> {
    if !(r <= n && n < m) {
        return Err(Error::Precondition(format!("need 0 <= r <= n < m, got r={r}, n={n}, m={m}")));
    }
    let (m, n, r) = (m as i64, n as i64, r as i64);
    Ok((0..=n)
        .map(|j| {
            let t = binom(m - 1 - j, n - j) * binom(m - r, j - r);
            if (n - j) % 2 == 0 {
                t
            } else {
                -t
            }
        })
        .sum())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub lhs: BigInt,
    pub rhs: BigInt,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Alternating sum of products of the ranks versus the shifted symmetric sum.
pub fn identity_reformulation(n: usize, ranks: &[usize]) -> Result<IdentityCheck> {
    let m = ranks.len();
    if m < n + 1 || ranks.iter().any(|&k| k < 2) {
        return Err(Error::Precondition(format!("need m >= n+1 and ranks >= 2, got n={n}, ranks={ranks:?}")));
    }
    let plain: Vec<BigInt> = ranks.iter().map(|&k| BigInt::from(k)).collect();
    let e = elementary_symmetric(&plain, n);
    let lhs = (0..=n)
        .map(|j| {
            let t = binom((m - 1 - j) as i64, (n - j) as i64) * &e[j];
            if (n - j).is_multiple_of(2) {
                t
            } else {
                -t
            }
        })
        .sum();
    let rhs = elementary_symmetric(&shifted(ranks), n).into_iter().sum();
    Ok(IdentityCheck { lhs, rhs })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PriorBounds {
    pub lower: BigInt,
    pub upper: BigInt,
}

/// Earlier bounds for `m` units of rank `k`: `k^min(n,m)` and
/// `sum_{j<=n} C(m k (k-1) / 2, j)`.
pub fn prior_bounds(n: usize, m: usize, k: usize) -> PriorBounds {
    let lower = num::pow(BigInt::from(k), n.min(m));
    let pairs = (m * k * k.saturating_sub(1) / 2) as i64;
    let upper = (0..=n as i64).map(|j| binom(pairs, j)).sum();
    PriorBounds { lower, upper }
}
