//! Arbitrary-precision scalars, factored integers and combinatorial scalar
//! functions (generalized binomial, factorial, double factorial).
//!
//! The binomial here is the generalized one: `binom(z, k)` is defined for any
//! integer `z` as `z(z-1)...(z-k+1)/k!` and vanishes only for `k < 0`. Several
//! downstream formulas depend on the nonzero values at negative `z`; do not
//! replace it with a "0 outside Pascal's triangle" convention.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Exact rational scalar. Always stored reduced with positive denominator.
pub type Scalar = num_rational::BigRational;

/// Shorthand for an integer scalar.
pub fn scalar(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

/// Shorthand for the rational `n/d`.
pub fn scalar_ratio(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p/q` or `p` (arbitrary precision, optional sign).
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|e| Error::parse(format!("bad rational {s:?}: {e}")))?;
    let den = BigInt::from_str(den).map_err(|e| Error::parse(format!("bad rational {s:?}: {e}")))?;
    if den.is_zero() {
        return Err(Error::parse(format!("bad rational {s:?}: zero denominator")));
    }
    Ok(Scalar::new(num, den))
}

/// Renders a scalar as `p/q`, or plain `p` for integers.
pub fn scalar_to_string(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// `n!` as a big integer.
pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= i;
    }
    acc
}

/// Double factorial `n!! = n(n-2)(n-4)...`, defined for `n >= -1` with the
/// empty products `(-1)!! = 0!! = 1`.
pub fn double_factorial(n: i64) -> Result<BigInt> {
    if n < -1 {
        return Err(Error::domain(format!(
            "double factorial undefined for n = {n} < -1"
        )));
    }
    let mut acc = BigInt::one();
    let mut t = n;
    while t >= 2 {
        acc *= t;
        t -= 2;
    }
    Ok(acc)
}

/// Generalized binomial coefficient `binom(z, k) = z(z-1)...(z-k+1)/k!`.
///
/// Total: defined for every integer `z`, zero exactly when `k < 0` or the
/// falling product hits zero (`0 <= z < k`). Satisfies
/// `binom(-z, k) = (-1)^k binom(z+k-1, k)`.
pub fn binom(z: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    for t in 0..k {
        num *= z - t;
        if num.is_zero() {
            return num;
        }
    }
    num / factorial(k as u64)
}

/// Trial-division bound. Every quantity this library factors is a product of
/// factorials, binomials and small table entries, so all prime factors are
/// tiny; the bound exists to fail loudly instead of looping on adversarial
/// input.
const TRIAL_LIMIT: u64 = 1_000_000;

fn factor_magnitude(mut n: BigUint) -> Result<BTreeMap<BigUint, i64>> {
    debug_assert!(!n.is_zero());
    let mut factors: BTreeMap<BigUint, i64> = BTreeMap::new();
    let one = BigUint::one();
    let mut p: u64 = 2;
    while n > one {
        if p > TRIAL_LIMIT {
            // All factors <= TRIAL_LIMIT are stripped, so a residual below
            // TRIAL_LIMIT^2 must be prime.
            if n < BigUint::from(TRIAL_LIMIT) * BigUint::from(TRIAL_LIMIT) {
                *factors.entry(n).or_default() += 1;
                return Ok(factors);
            }
            return Err(Error::Factorization(n));
        }
        if BigUint::from(p) * BigUint::from(p) > n {
            *factors.entry(n).or_default() += 1;
            return Ok(factors);
        }
        let mut e = 0i64;
        while (&n % p).is_zero() {
            n /= p;
            e += 1;
        }
        if e > 0 {
            *factors.entry(BigUint::from(p)).or_default() += e;
        }
        p = if p == 2 { 3 } else { p + 2 };
    }
    Ok(factors)
}

fn is_prime_u64_range(p: &BigUint) -> bool {
    match factor_magnitude(p.clone()) {
        Ok(f) => f.len() == 1 && f.values().all(|e| *e == 1) && *p >= BigUint::from(2u32),
        Err(_) => false,
    }
}

/// A nonzero rational in factored form: a sign together with a map from
/// primes to (signed) exponents. Negative exponents are denominator primes.
///
/// This is the carrier for quantities like `2^1106 * 3^92` whose prime
/// support, not decimal expansion, is the object of interest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredInteger {
    negative: bool,
    factors: BTreeMap<BigUint, i64>,
}

impl FactoredInteger {
    pub fn one() -> Self {
        FactoredInteger {
            negative: false,
            factors: BTreeMap::new(),
        }
    }

    pub fn minus_one() -> Self {
        FactoredInteger {
            negative: true,
            factors: BTreeMap::new(),
        }
    }

    /// `p^e` for a prime `p`.
    pub fn prime_power(p: u64, e: i64) -> Result<Self> {
        let p = BigUint::from(p);
        if !is_prime_u64_range(&p) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        let mut factors = BTreeMap::new();
        if e != 0 {
            factors.insert(p, e);
        }
        Ok(FactoredInteger {
            negative: false,
            factors,
        })
    }

    pub fn from_bigint(n: &BigInt) -> Result<Self> {
        if n.is_zero() {
            return Err(Error::domain("cannot factor zero".to_string()));
        }
        Ok(FactoredInteger {
            negative: n.is_negative(),
            factors: factor_magnitude(n.magnitude().clone())?,
        })
    }

    pub fn from_int(n: i64) -> Result<Self> {
        Self::from_bigint(&BigInt::from(n))
    }

    pub fn from_rational(r: &Scalar) -> Result<Self> {
        if r.is_zero() {
            return Err(Error::domain("cannot factor zero".to_string()));
        }
        let num = Self::from_bigint(r.numer())?;
        let den = Self::from_bigint(r.denom())?;
        Ok(num / den)
    }

    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn is_one(&self) -> bool {
        !self.negative && self.factors.is_empty()
    }

    /// True when every prime appears with a nonnegative exponent.
    pub fn is_integer(&self) -> bool {
        self.factors.values().all(|e| *e >= 0)
    }

    pub fn factors(&self) -> &BTreeMap<BigUint, i64> {
        &self.factors
    }

    pub fn exponent_of(&self, p: &BigUint) -> i64 {
        self.factors.get(p).copied().unwrap_or(0)
    }

    pub fn abs(&self) -> Self {
        FactoredInteger {
            negative: false,
            factors: self.factors.clone(),
        }
    }

    pub fn pow(&self, e: i64) -> Self {
        if e == 0 {
            return Self::one();
        }
        FactoredInteger {
            negative: self.negative && e % 2 != 0,
            factors: self
                .factors
                .iter()
                .map(|(p, x)| (p.clone(), x * e))
                .collect(),
        }
    }

    /// Exact square root. Requires positive sign and all exponents even.
    pub fn sqrt(&self) -> Result<Self> {
        if self.negative {
            return Err(Error::domain("square root of a negative value".to_string()));
        }
        if let Some((p, e)) = self.factors.iter().find(|(_, e)| *e % 2 != 0) {
            return Err(Error::domain(format!(
                "not a square: prime {p} has odd exponent {e}"
            )));
        }
        Ok(FactoredInteger {
            negative: false,
            factors: self
                .factors
                .iter()
                .map(|(p, e)| (p.clone(), e / 2))
                .collect(),
        })
    }

    /// Expands to an exact rational.
    pub fn value(&self) -> Scalar {
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for (p, e) in &self.factors {
            let pw = num_traits::pow::Pow::pow(p, e.unsigned_abs());
            if *e > 0 {
                num *= pw;
            } else {
                den *= pw;
            }
        }
        let mut num = BigInt::from(num);
        if self.negative {
            num = -num;
        }
        Scalar::new(num, BigInt::from(den))
    }

    /// Expands to a big integer; errors if any exponent is negative.
    pub fn to_bigint(&self) -> Result<BigInt> {
        if !self.is_integer() {
            return Err(Error::domain(format!("{self} is not an integer")));
        }
        let v = self.value();
        Ok(v.numer().clone())
    }

    /// Primes appearing with a positive exponent.
    pub fn prime_support(&self) -> BTreeSet<BigUint> {
        self.factors
            .iter()
            .filter(|(_, e)| **e > 0)
            .map(|(p, _)| p.clone())
            .collect()
    }

    /// For integers: true if `self` divides `other` in the integers.
    pub fn divides(&self, other: &Self) -> bool {
        self.factors
            .iter()
            .all(|(p, e)| *e <= other.exponent_of(p))
    }

    /// The square-free part: product of primes with odd exponent.
    pub fn squarefree_part(&self) -> Self {
        FactoredInteger {
            negative: self.negative,
            factors: self
                .factors
                .iter()
                .filter(|(_, e)| *e % 2 != 0)
                .map(|(p, _)| (p.clone(), 1))
                .collect(),
        }
    }

    fn mul_impl(mut self, rhs: &Self) -> Self {
        self.negative ^= rhs.negative;
        for (p, e) in &rhs.factors {
            let slot = self.factors.entry(p.clone()).or_default();
            *slot += e;
            if *slot == 0 {
                self.factors.remove(p);
            }
        }
        self
    }
}

impl std::ops::Mul<&FactoredInteger> for FactoredInteger {
    type Output = FactoredInteger;
    fn mul(self, rhs: &FactoredInteger) -> FactoredInteger {
        self.mul_impl(rhs)
    }
}

impl std::ops::Mul for FactoredInteger {
    type Output = FactoredInteger;
    fn mul(self, rhs: FactoredInteger) -> FactoredInteger {
        self.mul_impl(&rhs)
    }
}

impl std::ops::Div<&FactoredInteger> for FactoredInteger {
    type Output = FactoredInteger;
    fn div(self, rhs: &FactoredInteger) -> FactoredInteger {
        self.mul_impl(&rhs.pow(-1))
    }
}

impl std::ops::Div for FactoredInteger {
    type Output = FactoredInteger;
    fn div(self, rhs: FactoredInteger) -> FactoredInteger {
        self / &rhs
    }
}

impl fmt::Display for FactoredInteger {
    /// Canonical text form: `[-]p1^e1 * p2^e2 * ...` with primes ascending,
    /// `^1` omitted, and `1` for the empty product.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            write!(f, "-")?;
        }
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (p, e) in &self.factors {
            if !first {
                write!(f, " * ")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for FactoredInteger {
    type Err = Error;

    /// Accepts the canonical factored form (`2^277 * 3^46`, `-2^3 * 7`) and
    /// plain decimal integers, which are factored on the spot.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest.trim()),
            None => (false, s),
        };
        if body.is_empty() {
            return Err(Error::parse("empty factored integer".to_string()));
        }
        if body == "1" {
            return Ok(FactoredInteger {
                negative,
                factors: BTreeMap::new(),
            });
        }
        if !body.contains('*') && !body.contains('^') {
            let n = BigInt::from_str(body)
                .map_err(|e| Error::parse(format!("bad integer {body:?}: {e}")))?;
            let mut out = Self::from_bigint(&n)?;
            out.negative ^= negative;
            return Ok(out);
        }
        let mut factors: BTreeMap<BigUint, i64> = BTreeMap::new();
        for token in body.split('*') {
            let token = token.trim();
            let (p, e) = match token.split_once('^') {
                Some((p, e)) => {
                    let e = i64::from_str(e.trim())
                        .map_err(|err| Error::parse(format!("bad exponent in {token:?}: {err}")))?;
                    (p.trim(), e)
                }
                None => (token, 1),
            };
            let p = BigUint::from_str(p)
                .map_err(|err| Error::parse(format!("bad prime in {token:?}: {err}")))?;
            if !is_prime_u64_range(&p) {
                return Err(Error::parse(format!("{p} is not prime")));
            }
            let slot = factors.entry(p.clone()).or_default();
            *slot += e;
            if *slot == 0 {
                factors.remove(&p);
            }
        }
        Ok(FactoredInteger { negative, factors })
    }
}

impl Serialize for FactoredInteger {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FactoredInteger {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binom_basics() {
        assert_eq!(binom(5, 2), BigInt::from(10));
        for z in [-7i64, -1, 0, 3, 12] {
            assert_eq!(binom(z, -1), BigInt::zero());
        }
        assert_eq!(binom(-1, 22), BigInt::one());
        // required by the theta(22, 3) computation
        assert_eq!(binom(-2, 22), BigInt::from(23));
        assert_eq!(binom(0, 0), BigInt::one());
        assert_eq!(binom(3, 5), BigInt::zero());
    }

    #[test]
    fn binom_negation_identity() {
        // binom(-z, k) = (-1)^k binom(z+k-1, k)
        for z in 1i64..=12 {
            for k in 0i64..=12 {
                let lhs = binom(-z, k);
                let sign = if k % 2 == 0 { 1 } else { -1 };
                assert_eq!(lhs, binom(z + k - 1, k) * sign, "z={z} k={k}");
            }
        }
    }

    #[test]
    fn binom_difference_identity() {
        // binom(n+1, k) - binom(n, k) = binom(n, k-1)
        for n in -5i64..=30 {
            for k in -2i64..=30 {
                assert_eq!(
                    binom(n + 1, k) - binom(n, k),
                    binom(n, k - 1),
                    "n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn double_factorial_values() {
        assert_eq!(double_factorial(-1).unwrap(), BigInt::one());
        assert_eq!(double_factorial(0).unwrap(), BigInt::one());
        assert_eq!(double_factorial(5).unwrap(), BigInt::from(15));
        // (2n)!! = 2^n n!
        assert_eq!(double_factorial(6).unwrap(), BigInt::from(48));
        assert_eq!(
            double_factorial(6).unwrap(),
            BigInt::from(8) * factorial(3)
        );
        assert!(double_factorial(-2).is_err());
    }

    #[test]
    fn double_factorial_splits_factorial() {
        for n in 0i64..=30 {
            assert_eq!(
                double_factorial(n - 1).unwrap() * double_factorial(n).unwrap(),
                factorial(n as u64),
                "n={n}"
            );
        }
    }

    #[test]
    fn factored_sqrt() {
        let x = "2^46 * 5^2".parse::<FactoredInteger>().unwrap();
        assert_eq!(x.sqrt().unwrap().to_string(), "2^23 * 5");
        assert!("2^3".parse::<FactoredInteger>().unwrap().sqrt().is_err());
        assert!("-2^2".parse::<FactoredInteger>().unwrap().sqrt().is_err());
    }

    #[test]
    fn factored_complement_quotient() {
        let disc = "2^1106 * 3^92".parse::<FactoredInteger>().unwrap();
        let torsion = "2^277 * 3^46".parse::<FactoredInteger>().unwrap();
        let q = disc / &torsion.pow(2);
        assert_eq!(q.to_string(), "2^552");
    }

    #[test]
    fn factored_prime_support() {
        let x = FactoredInteger::from_int(12).unwrap();
        let support: Vec<u64> = x
            .prime_support()
            .iter()
            .map(|p| p.try_into().unwrap())
            .collect();
        assert_eq!(support, vec![2, 3]);
        // denominators do not count as support
        let y = FactoredInteger::from_rational(&scalar_ratio(4, 3)).unwrap();
        let support: Vec<u64> = y
            .prime_support()
            .iter()
            .map(|p| p.try_into().unwrap())
            .collect();
        assert_eq!(support, vec![2]);
    }

    #[test]
    fn factored_display_and_parse() {
        for s in ["1", "-1", "2^23 * 5", "3 * 5 * 7", "2^-1 * 3", "-2 * 3^4"] {
            let x: FactoredInteger = s.parse().unwrap();
            assert_eq!(x.to_string(), s);
        }
        assert_eq!(
            "105".parse::<FactoredInteger>().unwrap().to_string(),
            "3 * 5 * 7"
        );
        assert!("4 * 3".parse::<FactoredInteger>().is_err());
        assert!("0".parse::<FactoredInteger>().is_err());
    }

    #[test]
    fn squarefree_part() {
        let x = "2^3 * 3^2 * 5".parse::<FactoredInteger>().unwrap();
        assert_eq!(x.squarefree_part().to_string(), "2 * 5");
    }

    #[test]
    fn scalar_string_roundtrip() {
        assert_eq!(scalar_to_string(&scalar_ratio(-8, 6)), "-4/3");
        assert_eq!(scalar_to_string(&scalar(7)), "7");
        assert_eq!(parse_scalar("-4/3").unwrap(), scalar_ratio(-4, 3));
        assert_eq!(parse_scalar(" 7 ").unwrap(), scalar(7));
        assert!(parse_scalar("1/0").is_err());
    }

    fn small_factored() -> impl Strategy<Value = FactoredInteger> {
        let primes = [2u64, 3, 5, 7, 11, 13, 9973];
        (
            any::<bool>(),
            proptest::collection::vec((0usize..primes.len(), 1i64..=7), 0..4),
        )
            .prop_map(move |(neg, picks)| {
                let mut x = if neg {
                    FactoredInteger::minus_one()
                } else {
                    FactoredInteger::one()
                };
                for (i, e) in picks {
                    x = x * &FactoredInteger::prime_power(primes[i], e).unwrap();
                }
                x
            })
    }

    proptest! {
        #[test]
        fn expand_refactor_roundtrip(x in small_factored()) {
            let v = x.value();
            prop_assume!(v.numer().magnitude().bits() < 64);
            let back = FactoredInteger::from_rational(&v).unwrap();
            prop_assert_eq!(back, x);
        }

        #[test]
        fn arithmetic_matches_bigint(a in 1u64..u32::MAX as u64, b in 1u64..u32::MAX as u64) {
            let fa = FactoredInteger::from_bigint(&BigInt::from(a)).unwrap();
            let fb = FactoredInteger::from_bigint(&BigInt::from(b)).unwrap();
            let prod = fa.clone() * &fb;
            prop_assert_eq!(prod.value(), Scalar::from_integer(BigInt::from(a) * BigInt::from(b)));
            let quot = fa.clone() / &fb;
            prop_assert_eq!(quot.value(), Scalar::new(BigInt::from(a), BigInt::from(b)));
            let sq = fa.pow(2).sqrt().unwrap();
            prop_assert_eq!(sq, fa);
        }
    }
}
