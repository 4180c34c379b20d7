//! The induced symmetric bilinear form on symmetric powers.
//!
//! Given the Gram matrix `G` of a form on a rank-`d+1` module, the bracket of
//! two degree-`k` monomials is a sum over pair partitions of the combined
//! multiset of `2k` base vectors: the hafnian of the `2k x 2k` matrix of
//! pairwise `G`-values. Materializing the bracket over the ordered monomial
//! basis gives the Gram matrix of the induced form on the symmetric power.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinat::{enumerate_monomials, MultiIndex};
use crate::error::{Error, Result};
use crate::exactnum::{parse_scalar, scalar_to_string, Scalar};
use crate::homobasis::MultiPoly;
use crate::linalg::ExactMatrix;

/// Hafnians are limited to matrices of this dimension (degree-8 brackets).
pub const MAX_HAFNIAN_DIM: usize = 16;

/// Induced Gram matrices are limited to this many basis monomials.
pub const MAX_INDUCED_BASIS: usize = 5000;

/// Square symmetric matrix of exact rationals: the Gram matrix of a
/// symmetric bilinear form in a fixed basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramMatrix {
    m: ExactMatrix,
}

impl GramMatrix {
    pub fn new(m: ExactMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::shape(format!(
                "Gram matrix must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        if !m.is_symmetric() {
            return Err(Error::shape("Gram matrix must be symmetric".to_string()));
        }
        Ok(GramMatrix { m })
    }

    pub fn identity(n: usize) -> Self {
        GramMatrix {
            m: ExactMatrix::identity(n),
        }
    }

    pub fn diagonal(diag: Vec<Scalar>) -> Self {
        let mut m = ExactMatrix::zero(diag.len(), diag.len());
        for (i, v) in diag.into_iter().enumerate() {
            m.set(i, i, v);
        }
        GramMatrix { m }
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(ExactMatrix::from_int_rows(rows)?)
    }

    pub fn size(&self) -> usize {
        self.m.rows()
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        self.m.get(i, j)
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.m
    }

    pub fn det(&self) -> Result<Scalar> {
        self.m.det_exact()
    }

    pub fn to_file(&self) -> GramMatrixFile {
        GramMatrixFile {
            size: self.size(),
            rows: (0..self.size())
                .map(|i| self.m.row(i).iter().map(scalar_to_string).collect())
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: GramMatrixFile = serde_json::from_str(s)?;
        (&file).try_into()
    }

    pub fn from_json_file(path: &std::path::Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// JSON form of a [`GramMatrix`]:
/// `{"size": n, "rows": [["p/q", ...], ...]}`. Symmetry is validated on load.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GramMatrixFile {
    pub size: usize,
    pub rows: Vec<Vec<String>>,
}

impl TryFrom<&GramMatrixFile> for GramMatrix {
    type Error = Error;

    fn try_from(f: &GramMatrixFile) -> Result<GramMatrix> {
        if f.size == 0 {
            return Err(Error::shape("Gram matrix size must be >= 1".to_string()));
        }
        if f.rows.len() != f.size || f.rows.iter().any(|r| r.len() != f.size) {
            return Err(Error::shape(format!("expected {0}x{0} rows", f.size)));
        }
        let rows = f
            .rows
            .iter()
            .map(|r| r.iter().map(|s| parse_scalar(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        GramMatrix::new(ExactMatrix::from_rows(rows)?)
    }
}

/// Hafnian of a symmetric even-dimensional matrix: the sum over all perfect
/// matchings of the products of matched entries. The empty matrix has
/// hafnian 1. Computed by recursion on the lowest unmatched index, memoized
/// by the subset of unmatched indices, over an integer lift.
pub fn hafnian(m: &ExactMatrix) -> Result<Scalar> {
    if !m.is_square() || !m.is_symmetric() {
        return Err(Error::shape(
            "hafnian needs a symmetric square matrix".to_string(),
        ));
    }
    let n = m.rows();
    if n % 2 != 0 {
        return Err(Error::shape(format!("hafnian of odd dimension {n}")));
    }
    if n > MAX_HAFNIAN_DIM {
        return Err(Error::size_limit(format!(
            "hafnian of dimension {n} (max {MAX_HAFNIAN_DIM})"
        )));
    }
    if n == 0 {
        return Ok(Scalar::one());
    }
    // lift to integers; the hafnian is homogeneous of degree n/2 in the entries
    let mut den = BigInt::one();
    for i in 0..n {
        for j in 0..i {
            den = den.lcm(m.get(i, j).denom());
        }
    }
    let lifted: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| m.get(i, j).numer() * (&den / m.get(i, j).denom()))
                .collect()
        })
        .collect();
    let mut memo: HashMap<u32, BigInt> = HashMap::new();
    let full = (1u32 << n) - 1;
    let value = hafnian_int(&lifted, full, &mut memo);
    Ok(Scalar::new(
        value,
        num_traits::pow::Pow::pow(&den, (n / 2) as u64),
    ))
}

fn hafnian_int(m: &[Vec<BigInt>], mask: u32, memo: &mut HashMap<u32, BigInt>) -> BigInt {
    if mask == 0 {
        return BigInt::one();
    }
    if let Some(v) = memo.get(&mask) {
        return v.clone();
    }
    let i = mask.trailing_zeros() as usize;
    let rest = mask & !(1 << i);
    let mut acc = BigInt::zero();
    let mut jmask = rest;
    while jmask != 0 {
        let j = jmask.trailing_zeros() as usize;
        jmask &= jmask - 1;
        if !m[i][j].is_zero() {
            acc += &m[i][j] * hafnian_int(m, rest & !(1 << j), memo);
        }
    }
    memo.insert(mask, acc.clone());
    acc
}

/// Bracket of two monomials given as the combined list of their `2k` base
/// vector indices: the hafnian of the matrix `M[a][b] = G[idx_a][idx_b]`.
/// Depends only on the multiset of indices and is multilinear in the factors.
pub fn bracket_monomials(g: &GramMatrix, indices: &[usize]) -> Result<Scalar> {
    if indices.len() % 2 != 0 {
        return Err(Error::shape(format!(
            "bracket of an odd number ({}) of base vectors",
            indices.len()
        )));
    }
    if let Some(&bad) = indices.iter().find(|&&i| i >= g.size()) {
        return Err(Error::shape(format!(
            "base vector index {bad} out of range for rank {}",
            g.size()
        )));
    }
    let n = indices.len();
    let mut m = ExactMatrix::zero(n, n);
    for a in 0..n {
        for b in 0..n {
            m.set(a, b, g.get(indices[a], indices[b]).clone());
        }
    }
    hafnian(&m)
}

/// The induced form on the degree-`k` symmetric power: the base Gram matrix,
/// the ordered monomial basis, and the materialized induced Gram matrix.
#[derive(Clone, Debug)]
pub struct SymPowerForm {
    pub base: GramMatrix,
    pub k: u32,
    pub basis: Vec<MultiIndex>,
    pub gram: GramMatrix,
}

/// Materializes the induced Gram matrix over the ordered degree-`k` monomial
/// basis. Entries are deduplicated by the sorted multiset of base indices
/// (the bracket depends only on the multiset) and the distinct brackets are
/// computed in parallel.
pub fn induced_gram(base: &GramMatrix, k: u32) -> Result<SymPowerForm> {
    let d = base.size() - 1;
    if 2 * k as usize > MAX_HAFNIAN_DIM {
        return Err(Error::size_limit(format!(
            "degree-{k} brackets need hafnians of dimension {} (max {MAX_HAFNIAN_DIM})",
            2 * k
        )));
    }
    let basis = enumerate_monomials(d, k);
    let n = basis.len();
    if n > MAX_INDUCED_BASIS {
        return Err(Error::size_limit(format!(
            "induced basis of {n} monomials (max {MAX_INDUCED_BASIS})"
        )));
    }
    let multisets: Vec<Vec<usize>> = basis.iter().map(MultiIndex::variable_multiset).collect();

    let mut keys: BTreeSet<Vec<usize>> = BTreeSet::new();
    for i in 0..n {
        for j in i..n {
            keys.insert(merge_sorted(&multisets[i], &multisets[j]));
        }
    }
    let keys: Vec<Vec<usize>> = keys.into_iter().collect();
    let values: Vec<Scalar> = keys
        .par_iter()
        .map(|key| bracket_monomials(base, key))
        .collect::<Result<Vec<_>>>()?;
    let table: BTreeMap<&[usize], &Scalar> = keys
        .iter()
        .map(Vec::as_slice)
        .zip(values.iter())
        .collect();

    let mut m = ExactMatrix::zero(n, n);
    for i in 0..n {
        for j in i..n {
            let key = merge_sorted(&multisets[i], &multisets[j]);
            let v = (*table.get(key.as_slice()).expect("precomputed")).clone();
            m.set(i, j, v.clone());
            m.set(j, i, v);
        }
    }
    Ok(SymPowerForm {
        base: base.clone(),
        k,
        basis,
        gram: GramMatrix { m },
    })
}

fn merge_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    out.extend_from_slice(a);
    out.extend_from_slice(b);
    out.sort_unstable();
    out
}

/// Bilinear extension of the monomial bracket to polynomials. Term pairs of
/// odd combined degree contribute zero; in particular polynomials of degrees
/// with different parity are orthogonal.
pub fn bracket_poly(g: &GramMatrix, f: &MultiPoly, h: &MultiPoly) -> Result<Scalar> {
    if f.vars() != g.size() || h.vars() != g.size() {
        return Err(Error::shape(format!(
            "polynomials in {}/{} variables against a rank-{} form",
            f.vars(),
            h.vars(),
            g.size()
        )));
    }
    let mut cache: BTreeMap<Vec<usize>, Scalar> = BTreeMap::new();
    let mut acc = Scalar::zero();
    for (ea, ca) in f.terms() {
        for (eb, cb) in h.terms() {
            if (ea.degree() + eb.degree()) % 2 != 0 {
                continue;
            }
            if (ea.degree() + eb.degree()) as usize > MAX_HAFNIAN_DIM {
                return Err(Error::size_limit(format!(
                    "bracket of combined degree {} (max {MAX_HAFNIAN_DIM})",
                    ea.degree() + eb.degree()
                )));
            }
            let key = merge_sorted(&ea.variable_multiset(), &eb.variable_multiset());
            let v = match cache.get(&key) {
                Some(v) => v.clone(),
                None => {
                    let v = bracket_monomials(g, &key)?;
                    cache.insert(key, v.clone());
                    v
                }
            };
            if !v.is_zero() {
                acc += ca * cb * v;
            }
        }
    }
    Ok(acc)
}
