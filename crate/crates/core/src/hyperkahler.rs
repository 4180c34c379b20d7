//! Discriminant reports for the degree-two cohomology lattices of the known
//! hyperkaehler deformation classes.
//!
//! For a manifold of complex dimension `2k` with second Betti number `b2`
//! and degree-two discriminant `d2`, the symmetric power of the degree-two
//! lattice has discriminant `d2^binom(b2-1+k, b2) * theta(b2-1, k)`, times
//! `cX^rank` when the Fujiki-constant scaling of the form is included. The
//! quotient of the middle cohomology by the symmetric power has torsion
//! supported on an explicitly bounded set of primes.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{binom, FactoredInteger, Scalar};
use crate::lattices::complement_discriminant;
use crate::theta::theta;

/// Known deformation classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ManifoldKind {
    /// Hilbert scheme of `k >= 2` points on a K3 surface.
    K3Hilb,
    /// Generalized Kummer variety of dimension `2k`, `k >= 2`.
    Kummer,
    /// The six-dimensional O'Grady manifold.
    OG6,
    /// The ten-dimensional O'Grady manifold.
    OG10,
}

/// Table row for one deformation class: half the complex dimension, the
/// rank and discriminant of the degree-two lattice, and the Fujiki constant.
#[derive(Clone, Debug)]
pub struct ManifoldData {
    pub kind: ManifoldKind,
    pub name: String,
    pub k: u32,
    pub b2: u32,
    pub d2: FactoredInteger,
    pub c_x: Scalar,
}

/// Looks up a deformation class. `K3_Hilb` and `Kummer` require `k >= 2`;
/// `OG6` and `OG10` have fixed dimension (`k` may be omitted or must match).
pub fn registry(name: &str, k: Option<u32>) -> Result<ManifoldData> {
    match name {
        "K3_Hilb" => {
            let k = k.ok_or_else(|| Error::domain("K3_Hilb requires k".to_string()))?;
            if k < 2 {
                return Err(Error::domain(format!("K3_Hilb requires k >= 2, got {k}")));
            }
            Ok(ManifoldData {
                kind: ManifoldKind::K3Hilb,
                name: format!("K3_Hilb({k})"),
                k,
                b2: 23,
                d2: FactoredInteger::from_int(2 * (k as i64 - 1))?,
                c_x: Scalar::one(),
            })
        }
        "Kummer" => {
            let k = k.ok_or_else(|| Error::domain("Kummer requires k".to_string()))?;
            if k < 2 {
                return Err(Error::domain(format!("Kummer requires k >= 2, got {k}")));
            }
            Ok(ManifoldData {
                kind: ManifoldKind::Kummer,
                name: format!("Kummer({k})"),
                k,
                b2: 7,
                d2: FactoredInteger::from_int(2 * (k as i64 + 1))?,
                c_x: Scalar::from_integer(BigInt::from(k + 1)),
            })
        }
        "OG6" => {
            if k.is_some_and(|k| k != 3) {
                return Err(Error::domain("OG6 has fixed k = 3".to_string()));
            }
            Ok(ManifoldData {
                kind: ManifoldKind::OG6,
                name: "OG6".to_string(),
                k: 3,
                b2: 8,
                d2: FactoredInteger::from_int(4)?,
                c_x: Scalar::from_integer(BigInt::from(4)),
            })
        }
        "OG10" => {
            if k.is_some_and(|k| k != 5) {
                return Err(Error::domain("OG10 has fixed k = 5".to_string()));
            }
            Ok(ManifoldData {
                kind: ManifoldKind::OG10,
                name: "OG10".to_string(),
                k: 5,
                b2: 24,
                d2: FactoredInteger::from_int(3)?,
                c_x: Scalar::one(),
            })
        }
        other => Err(Error::domain(format!(
            "unknown manifold {other:?} (expected K3_Hilb, Kummer, OG6 or OG10)"
        ))),
    }
}

/// Rank of the `k`-th symmetric power of the degree-two lattice:
/// `binom(b2 - 1 + k, k)`.
pub fn sym_rank(m: &ManifoldData) -> BigInt {
    binom(m.b2 as i64 - 1 + m.k as i64, m.k as i64)
}

/// Discriminant of the symmetric power of the degree-two lattice:
/// `d2^binom(b2-1+k, b2) * theta(b2-1, k)`. With `include_cx` the form is
/// scaled by the Fujiki constant, multiplying the determinant of the
/// rank-`N` form by `cX^N`; this is the discriminant of the actual embedded
/// lattice inside the middle cohomology.
pub fn sym_discriminant(m: &ManifoldData, include_cx: bool) -> Result<FactoredInteger> {
    let d = m.b2 - 1;
    let det_exp = i64::try_from(&binom(d as i64 + m.k as i64, m.b2 as i64))
        .map_err(|_| Error::size_limit("discriminant exponent exceeds 64 bits".to_string()))?;
    let mut out = m.d2.pow(det_exp) * &theta(d, m.k)?;
    if include_cx {
        if !m.c_x.denom().is_one() {
            return Err(Error::domain(
                "non-integral Fujiki constant; scale the discriminant separately".to_string(),
            ));
        }
        if !m.c_x.is_one() {
            let rank = i64::try_from(&sym_rank(m))
                .map_err(|_| Error::size_limit("rank exceeds 64 bits".to_string()))?;
            out = out * &FactoredInteger::from_bigint(m.c_x.numer())?.pow(rank);
        }
    }
    Ok(out)
}

/// Primes dividing some element of the torsion-bounding set:
/// `{cX^b2 d2} U {1..k}` together with the odd integers in
/// `[k+b2, 2k+b2-2]` for odd `b2`, or the integers in
/// `[(k+b2)/2, k+b2/2-1]` for even `b2`.
pub fn prime_set(m: &ManifoldData) -> Result<BTreeSet<u64>> {
    let mut primes: BTreeSet<u64> = BTreeSet::new();
    let absorb = |f: &FactoredInteger, primes: &mut BTreeSet<u64>| {
        for p in f.prime_support() {
            primes.insert(u64::try_from(&p).expect("table primes are small"));
        }
    };
    // cX^b2 * d2: b2 >= 1, so the support is that of cX together with d2
    absorb(&m.d2, &mut primes);
    absorb(&FactoredInteger::from_rational(&m.c_x)?, &mut primes);
    let k = m.k as i64;
    let b2 = m.b2 as i64;
    let mut range: Vec<i64> = (2..=k).collect();
    if b2 % 2 == 1 {
        range.extend((k + b2..=2 * k + b2 - 2).filter(|i| i % 2 == 1));
    } else {
        // integer points of the real interval [(k+b2)/2, k+b2/2-1]
        let lo = (k + b2 + 1) / 2;
        let hi = k + b2 / 2 - 1;
        range.extend(lo..=hi);
    }
    for i in range {
        absorb(&FactoredInteger::from_int(i)?, &mut primes);
    }
    Ok(primes)
}

/// Full report for one deformation class, optionally refined by a known
/// torsion order for the quotient of the middle cohomology.
#[derive(Clone, Debug, Serialize)]
pub struct HKReport {
    pub manifold: String,
    pub k: u32,
    pub b2: u32,
    pub rank: String,
    pub includes_cx: bool,
    pub discriminant: FactoredInteger,
    pub square_root: Option<FactoredInteger>,
    pub prime_set: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub torsion: Option<FactoredInteger>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complement_discriminant: Option<FactoredInteger>,
}

/// Builds the report. With a torsion order `n` given, both the orthogonal
/// complement and the primitive overlattice of the embedded symmetric power
/// have discriminant `disc / n^2`; the division must be exact.
pub fn report(
    m: &ManifoldData,
    include_cx: bool,
    torsion: Option<&FactoredInteger>,
) -> Result<HKReport> {
    let discriminant = sym_discriminant(m, include_cx)?;
    let complement = torsion
        .map(|t| complement_discriminant(&discriminant, t))
        .transpose()?;
    Ok(HKReport {
        manifold: m.name.clone(),
        k: m.k,
        b2: m.b2,
        rank: sym_rank(m).to_string(),
        includes_cx: include_cx,
        square_root: discriminant.sqrt().ok(),
        discriminant,
        prime_set: prime_set(m)?.into_iter().collect(),
        torsion: torsion.cloned(),
        complement_discriminant: complement,
    })
}
