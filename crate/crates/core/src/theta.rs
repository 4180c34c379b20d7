//! The combinatorial factor `theta(d, k)` in the determinant of the induced
//! Gram matrix, `det(Gram_k) = det(G)^binom(d+k, d+1) * theta(d, k)`, and a
//! brute-force verification driver for that identity.
//!
//! All binomials in the factor are the *generalized* ones of `exactnum`:
//! for indices past `k + d` the upper argument goes negative and still
//! contributes. With the naive "zero outside Pascal's triangle" convention,
//! `theta(d, 2)` would lose its odd factor `d + 3` entirely and
//! `theta(22, 3)` would come out short by `3^69`. Every special case below
//! pins this down.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{binom, FactoredInteger, Scalar};
use crate::symform::{induced_gram, GramMatrix};

/// Basis-size cap for the brute-force verifier.
pub const MAX_VERIFY_BASIS: usize = 200;

/// The determinant factor for rank `d + 1` and power `k`, in factored form.
///
/// For even `d` it is
/// `prod_{i=1}^{k} i^(binom(k-i+d, d) d) * prod_{odd i <= 2k+d-1} i^binom(k-i+d, d)`,
/// for odd `d`
/// `prod_{i=1}^{k} i^(binom(k-i+d, d) d) * prod_{i <= k+(d-1)/2} i^(binom(k-i+d, d) - binom(k-2i+d, d))`.
pub fn theta(d: u32, k: u32) -> Result<FactoredInteger> {
    let (d, k) = (d as i64, k as i64);
    let mut exps: BTreeMap<u64, BigInt> = BTreeMap::new();
    let push = |exps: &mut BTreeMap<u64, BigInt>, base: i64, e: BigInt| -> Result<()> {
        if base == 1 || e.is_zero() {
            return Ok(());
        }
        let f = FactoredInteger::from_int(base)?;
        for (p, m) in f.factors() {
            let p = u64::try_from(p).expect("small prime");
            *exps.entry(p).or_default() += *m * &e;
        }
        Ok(())
    };

    for i in 1..=k {
        push(&mut exps, i, binom(k - i + d, d) * d)?;
    }
    if d % 2 == 0 {
        let mut i = 1;
        while i <= 2 * k + d - 1 {
            push(&mut exps, i, binom(k - i + d, d))?;
            i += 2;
        }
    } else {
        for i in 1..=k + (d - 1) / 2 {
            push(&mut exps, i, binom(k - i + d, d) - binom(k - 2 * i + d, d))?;
        }
    }

    let mut out = FactoredInteger::one();
    for (p, e) in exps {
        if e.is_zero() {
            continue;
        }
        let e = i64::try_from(&e).map_err(|_| {
            Error::size_limit(format!("theta exponent {e} for prime {p} exceeds 64 bits"))
        })?;
        out = out * &FactoredInteger::prime_power(p, e)?;
    }
    debug_assert!(!out.is_negative() && out.is_integer());
    Ok(out)
}

/// The exponent of `det(G)` in the closed form: `binom(d + k, d + 1)`.
pub fn det_g_exponent(d: u32, k: u32) -> BigInt {
    binom(d as i64 + k as i64, d as i64 + 1)
}

/// The factor together with its indices and the determinant exponent.
#[derive(Clone, Debug)]
pub struct ThetaResult {
    pub d: u32,
    pub k: u32,
    pub value: FactoredInteger,
    pub det_g_exponent: BigInt,
}

pub fn theta_result(d: u32, k: u32) -> Result<ThetaResult> {
    Ok(ThetaResult {
        d,
        k,
        value: theta(d, k)?,
        det_g_exponent: det_g_exponent(d, k),
    })
}

/// Closed form `det(G)^binom(d+k, d+1) * theta(d, k)` as an exact rational.
pub fn det_closed_form(det_g: &Scalar, d: u32, k: u32) -> Result<Scalar> {
    let e = i32::try_from(&det_g_exponent(d, k))
        .map_err(|_| Error::size_limit("determinant exponent exceeds 32 bits".to_string()))?;
    Ok(det_g.pow(e) * theta(d, k)?.value())
}

/// Closed form in factored arithmetic, for discriminant-scale values.
pub fn det_closed_form_factored(
    det_g: &FactoredInteger,
    d: u32,
    k: u32,
) -> Result<FactoredInteger> {
    let e = i64::try_from(&det_g_exponent(d, k))
        .map_err(|_| Error::size_limit("determinant exponent exceeds 64 bits".to_string()))?;
    Ok(det_g.pow(e) * &theta(d, k)?)
}

/// Outcome of one brute-force check of the determinant identity: the
/// left side is a fully materialized induced Gram matrix pushed through
/// fraction-free elimination, the right side is the closed form.
#[derive(Clone, Debug)]
pub struct MainTheoremReport {
    pub d: u32,
    pub k: u32,
    pub basis_size: usize,
    pub lhs: Scalar,
    pub rhs: Scalar,
    pub equal: bool,
}

pub fn verify_main_theorem(g: &GramMatrix, k: u32) -> Result<MainTheoremReport> {
    let d = (g.size() - 1) as u32;
    let expected = binom(k as i64 + d as i64, d as i64);
    if expected > BigInt::from(MAX_VERIFY_BASIS) {
        return Err(Error::size_limit(format!(
            "verification basis of {expected} monomials (max {MAX_VERIFY_BASIS})"
        )));
    }
    let form = induced_gram(g, k)?;
    let lhs = form.gram.det()?;
    let rhs = det_closed_form(&g.det()?, d, k)?;
    let equal = lhs == rhs;
    Ok(MainTheoremReport {
        d,
        k,
        basis_size: form.basis.len(),
        lhs,
        rhs,
        equal,
    })
}

/// The monomial-Gram determinant at the identity form, reconstructed through
/// the rank recursion: `D(d, k) = prod_{j<=k} D(d-1, j) * R(d, k)` with
/// `R(d, k) = prod_{j=0}^{k} [(k-j)! (2j+d)!! (2k+d-1)!! / (j+k+d)!]^binom(j+d-1, d-1)`.
/// Used as a cross-check of the two parity branches of [`theta`].
pub fn theta_by_rank_recursion(d: u32, k: u32) -> Result<Scalar> {
    use crate::exactnum::{double_factorial, factorial};
    if d == 0 {
        return Ok(Scalar::from_integer(double_factorial(2 * k as i64 - 1)?));
    }
    let (di, ki) = (d as i64, k as i64);
    let mut acc = Scalar::one();
    for j in 0..=k {
        acc *= theta_by_rank_recursion(d - 1, j)?;
    }
    for j in 0..=ki {
        let base = Scalar::new(
            factorial((ki - j) as u64)
                * double_factorial(2 * j + di)?
                * double_factorial(2 * ki + di - 1)?,
            factorial((j + ki + di) as u64),
        );
        let e = i32::try_from(&binom(j + di - 1, di - 1))
            .map_err(|_| Error::size_limit("rank-recursion exponent".to_string()))?;
        acc *= base.pow(e);
    }
    Ok(acc)
}
