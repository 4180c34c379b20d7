//! Multi-indices, monomial enumeration and pair partitions.
//!
//! The ordering on multi-indices compares the *last* coordinate first and
//! recurses on the truncation. This is not the usual first-coordinate
//! lexicographic order; every Gram matrix in this crate is indexed by it,
//! and the triangularity statements in `homobasis` are relative to it.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{binom, factorial};

/// Exponent vector `(a_0, ..., a_d)` of a monomial `x_0^{a_0} ... x_d^{a_d}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    /// Number of variables `d + 1`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Total degree `|alpha|`.
    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    /// `alpha! = prod_i alpha_i!`.
    pub fn factorial(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::one(), |acc, &e| acc * factorial(e as u64))
    }

    /// Drops the last coordinate.
    pub fn truncated(&self) -> MultiIndex {
        MultiIndex(self.0[..self.0.len() - 1].to_vec())
    }

    /// Last coordinate.
    pub fn last(&self) -> u32 {
        *self.0.last().expect("empty multi-index")
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    /// The underlying multiset: variable `i` repeated `alpha_i` times.
    pub fn variable_multiset(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.degree() as usize);
        for (i, &e) in self.0.iter().enumerate() {
            out.extend(std::iter::repeat_n(i, e as usize));
        }
        out
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MultiIndex {
    /// Last coordinate is most significant; ties recurse on the truncation.
    /// Indices of different length compare by length first so that the order
    /// stays total.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for MultiIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let body = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::parse(format!("multi-index {s:?} must be parenthesized")))?;
        let exps = body
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::parse(format!("bad exponent in {s:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MultiIndex(exps))
    }
}

/// All multi-indices of length `d + 1` and degree `k`, ascending.
/// There are `binom(k + d, d)` of them.
pub fn enumerate_monomials(d: usize, k: u32) -> Vec<MultiIndex> {
    fn rec(d: usize, k: u32, out: &mut Vec<MultiIndex>, suffix: &mut Vec<u32>) {
        if d == 0 {
            let mut exps = vec![k];
            exps.extend(suffix.iter().rev());
            out.push(MultiIndex(exps));
            return;
        }
        for last in 0..=k {
            suffix.push(last);
            rec(d - 1, k - last, out, suffix);
            suffix.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, k, &mut out, &mut Vec::new());
    out
}

/// A partition of `{0, ..., 2k-1}` into `k` unordered pairs, stored with
/// each pair as `(min, max)` and pairs sorted by their first element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairPartition {
    pairs: Vec<(usize, usize)>,
}

impl PairPartition {
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn num_pairs(&self) -> usize {
        self.pairs.len()
    }
}

impl fmt::Display for PairPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, b) in &self.pairs {
            write!(f, "{{{a},{b}}}")?;
        }
        Ok(())
    }
}

/// Enforced upper bound for pair-partition enumeration; (2*9-1)!! is already
/// past 34 million partitions.
pub const MAX_PAIR_PARTITION_K: usize = 8;

/// Iterator over all pair partitions of `{0, ..., 2k-1}`, in the order given
/// by repeatedly matching the smallest free element with each candidate
/// partner in turn. Yields `(2k-1)!!` partitions, each exactly once.
pub fn pair_partitions(k: usize) -> Result<PairPartitions> {
    if k > MAX_PAIR_PARTITION_K {
        return Err(Error::size_limit(format!(
            "pair partitions of 2k = {} elements (max k = {MAX_PAIR_PARTITION_K})",
            2 * k
        )));
    }
    Ok(PairPartitions {
        k,
        used: 0,
        stack: Vec::with_capacity(k),
        started: false,
        exhausted: false,
    })
}

pub struct PairPartitions {
    k: usize,
    used: u32,
    stack: Vec<(usize, usize)>,
    started: bool,
    exhausted: bool,
}

impl PairPartitions {
    fn lowest_free(&self) -> usize {
        (0..2 * self.k)
            .find(|i| self.used & (1 << i) == 0)
            .expect("no free element in a partial matching")
    }

    fn free_at_or_after(&self, from: usize) -> Option<usize> {
        (from..2 * self.k).find(|i| self.used & (1 << i) == 0)
    }

    fn push(&mut self, a: usize, b: usize) {
        self.used |= (1 << a) | (1 << b);
        self.stack.push((a, b));
    }

    /// Depth-first search for the next complete matching. With `resume` set,
    /// the current matching was already yielded and the top choice must be
    /// advanced first.
    fn find_next(&mut self, mut resume: bool) -> bool {
        loop {
            if resume {
                let Some((first, partner)) = self.stack.pop() else {
                    return false;
                };
                self.used &= !((1 << first) | (1 << partner));
                if let Some(next) = self.free_at_or_after(partner + 1) {
                    self.push(first, next);
                    resume = false;
                }
            } else if self.stack.len() == self.k {
                return true;
            } else {
                let first = self.lowest_free();
                let partner = self
                    .free_at_or_after(first + 1)
                    .expect("odd number of free elements");
                self.push(first, partner);
            }
        }
    }
}

impl Iterator for PairPartitions {
    type Item = PairPartition;

    fn next(&mut self) -> Option<PairPartition> {
        if self.exhausted {
            return None;
        }
        let resume = self.started;
        self.started = true;
        if self.find_next(resume) {
            Some(PairPartition {
                pairs: self.stack.clone(),
            })
        } else {
            self.exhausted = true;
            None
        }
    }
}

/// Both sides of the factorial-power identity
/// `prod_{j=0}^{k} (k-j)!^binom(j+d-1, d-1) = prod_{i=1}^{k} i^binom(k-i+d, d)`,
/// which holds for `d >= 1`. Equality of the returned pair is the test.
pub fn factorial_power_witness(d: i64, k: i64) -> (BigInt, BigInt) {
    let mut lhs = BigInt::one();
    for j in 0..=k {
        let e = binom(j + d - 1, d - 1);
        lhs *= big_pow(&factorial((k - j) as u64), &e);
    }
    let mut rhs = BigInt::one();
    for i in 1..=k {
        let e = binom(k - i + d, d);
        rhs *= big_pow(&BigInt::from(i), &e);
    }
    (lhs, rhs)
}

/// Both sides of the even-index binomial sum
/// `sum_{i even, 1 <= i <= 2k+d+1} binom(k-i+d, d-1)`, whose closed form is
/// `0` for even `d` and `binom(k+d, d)` for odd `d`. The sum runs over the
/// full printed range with the generalized binomial; terms with negative
/// upper argument contribute.
pub fn even_binomial_sum_witness(d: i64, k: i64) -> (BigInt, BigInt) {
    let mut lhs = BigInt::zero();
    let mut i = 2;
    while i <= 2 * k + d + 1 {
        lhs += binom(k - i + d, d - 1);
        i += 2;
    }
    let rhs = if d % 2 == 0 {
        BigInt::zero()
    } else {
        binom(k + d, d)
    };
    (lhs, rhs)
}

fn big_pow(base: &BigInt, exp: &BigInt) -> BigInt {
    let e = u64::try_from(exp).expect("negative or huge exponent in integer power");
    num_traits::pow::Pow::pow(base, e)
}
