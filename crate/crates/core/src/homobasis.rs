//! Homogeneous multivariate polynomials, the Gaussian moment bracket, and
//! the recursively built orthogonal basis indexed by multi-indices.
//!
//! On monomials the bracket is `<x^a, x^b> = prod_i (a_i + b_i - 1)!!` when
//! every `a_i + b_i` is even and `0` otherwise (unit-mass Gaussian; the
//! normalization constant is absorbed so that `<1,1> = 1`). The basis element
//! for a multi-index `alpha` has leading monomial `x^alpha` with coefficient
//! one, and the elements of fixed degree are pairwise orthogonal: they are
//! exactly the Gram-Schmidt output on the ordered monomial basis.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::combinat::{enumerate_monomials, MultiIndex};
use crate::error::{Error, Result};
use crate::exactnum::{double_factorial, factorial, parse_scalar, scalar_to_string, Scalar};
use crate::linalg::ExactMatrix;
use crate::orthopoly::monic_poly;
use crate::theta::theta;
use crate::FactoredInteger;

/// Basis sizes above this are refused by the Gram/transition drivers.
pub const MAX_BASIS_SIZE: usize = 200;

/// Sparse multivariate polynomial: map from exponent vectors to nonzero
/// rational coefficients. All keys have length `vars`; every polynomial this
/// crate produces is homogeneous.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    vars: usize,
    terms: BTreeMap<MultiIndex, Scalar>,
}

impl MultiPoly {
    pub fn zero(vars: usize) -> Self {
        MultiPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(exp: MultiIndex, coef: Scalar) -> Self {
        let vars = exp.len();
        let mut terms = BTreeMap::new();
        if !coef.is_zero() {
            terms.insert(exp, coef);
        }
        MultiPoly { vars, terms }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: &MultiIndex) -> Scalar {
        self.terms.get(exp).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Degree of a nonzero homogeneous polynomial.
    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().next().map(MultiIndex::degree)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(MultiIndex::degree);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    /// Largest monomial present, in the last-coordinate-first order.
    pub fn leading_term(&self) -> Option<(&MultiIndex, &Scalar)> {
        self.terms.last_key_value()
    }

    fn insert_add(&mut self, exp: MultiIndex, coef: Scalar) {
        if coef.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coef;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.vars, rhs.vars, "variable count mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_add(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &MultiPoly) -> MultiPoly {
        self.add(&rhs.scale(&-Scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.vars);
        }
        MultiPoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn mul(&self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.vars, rhs.vars, "variable count mismatch");
        let mut out = MultiPoly::zero(self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let exps: Vec<u32> = ea
                    .exponents()
                    .iter()
                    .zip(eb.exponents())
                    .map(|(x, y)| x + y)
                    .collect();
                out.insert_add(MultiIndex::new(exps), ca * cb);
            }
        }
        out
    }

    /// Reinterprets in `new_vars >= vars` variables by appending zero
    /// exponents (inclusion of the first `vars` coordinates).
    pub fn extend_vars(&self, new_vars: usize) -> MultiPoly {
        assert!(new_vars >= self.vars);
        MultiPoly {
            vars: new_vars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut exps = e.exponents().to_vec();
                    exps.resize(new_vars, 0);
                    (MultiIndex::new(exps), c.clone())
                })
                .collect(),
        }
    }
}

impl fmt::Display for MultiPoly {
    /// Terms in descending monomial order, e.g. `x1^2 - 1/3*x0^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exp, c) in self.terms.iter().rev() {
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_constant = exp.degree() == 0;
            if !mag.is_one() || is_constant {
                write!(f, "{}", scalar_to_string(&mag))?;
                if !is_constant {
                    write!(f, "*")?;
                }
            }
            let mut emitted = false;
            for (i, &e) in exp.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if emitted {
                    write!(f, "*")?;
                }
                emitted = true;
                if e == 1 {
                    write!(f, "x{i}")?;
                } else {
                    write!(f, "x{i}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// JSON form of a [`MultiPoly`]: `{"vars": n, "terms": [{"exp": [...],
/// "coef": "p/q"}, ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MultiPolyFile {
    pub vars: usize,
    pub terms: Vec<MultiPolyTermFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MultiPolyTermFile {
    pub exp: Vec<u32>,
    pub coef: String,
}

impl From<&MultiPoly> for MultiPolyFile {
    fn from(p: &MultiPoly) -> Self {
        MultiPolyFile {
            vars: p.vars,
            terms: p
                .terms
                .iter()
                .map(|(e, c)| MultiPolyTermFile {
                    exp: e.exponents().to_vec(),
                    coef: scalar_to_string(c),
                })
                .collect(),
        }
    }
}

impl TryFrom<&MultiPolyFile> for MultiPoly {
    type Error = Error;

    fn try_from(f: &MultiPolyFile) -> Result<MultiPoly> {
        let mut out = MultiPoly::zero(f.vars);
        for t in &f.terms {
            if t.exp.len() != f.vars {
                return Err(Error::shape(format!(
                    "term exponent length {} does not match vars {}",
                    t.exp.len(),
                    f.vars
                )));
            }
            out.insert_add(MultiIndex::new(t.exp.clone()), parse_scalar(&t.coef)?);
        }
        if !out.is_homogeneous() {
            return Err(Error::domain("polynomial is not homogeneous".to_string()));
        }
        Ok(out)
    }
}

/// Gaussian bracket of two monomials: `prod_i (a_i + b_i - 1)!!` when all
/// coordinate sums are even, else zero.
pub fn monomial_moment_bracket(a: &MultiIndex, b: &MultiIndex) -> Result<Scalar> {
    if a.len() != b.len() {
        return Err(Error::shape(format!(
            "monomials in {} and {} variables",
            a.len(),
            b.len()
        )));
    }
    let mut acc = Scalar::one();
    for (&x, &y) in a.exponents().iter().zip(b.exponents()) {
        let s = (x + y) as i64;
        if s % 2 != 0 {
            return Ok(Scalar::zero());
        }
        acc *= Scalar::from_integer(double_factorial(s - 1)?);
    }
    Ok(acc)
}

/// Gaussian moment bracket `<f, g>`, extended bilinearly from monomials.
/// Coincides with the pair-partition bracket at the identity Gram matrix.
pub fn moment_bracket(f: &MultiPoly, g: &MultiPoly) -> Result<Scalar> {
    if f.vars() != g.vars() {
        return Err(Error::shape(format!(
            "polynomials in {} and {} variables",
            f.vars(),
            g.vars()
        )));
    }
    let mut acc = Scalar::zero();
    for (ea, ca) in f.terms() {
        for (eb, cb) in g.terms() {
            let b = monomial_moment_bracket(ea, eb)?;
            if !b.is_zero() {
                acc += ca * cb * b;
            }
        }
    }
    Ok(acc)
}

/// An orthogonal basis element: the polynomial, its index and its squared
/// norm under the moment bracket.
#[derive(Clone, Debug)]
pub struct HBasisElement {
    pub alpha: MultiIndex,
    pub poly: MultiPoly,
    pub norm: Scalar,
}

/// Builds the orthogonal basis element for `alpha`.
///
/// Recursively: the element for `(a_0)` is `x_0^{a_0}`; for longer indices it
/// is `p(x_d / r) r^{a_d}` times the element for the truncated index, where
/// `p` is the monic family member with parameter `2|alpha| + d` and
/// `r^2 = x_0^2 + ... + x_{d-1}^2`. Parity ensures only even powers of `r^2`
/// appear, so the result is a polynomial.
pub fn basis_element(alpha: &MultiIndex) -> Result<HBasisElement> {
    if alpha.is_empty() {
        return Err(Error::domain("empty multi-index".to_string()));
    }
    if alpha.len() == 1 {
        let a = alpha.get(0);
        return Ok(HBasisElement {
            alpha: alpha.clone(),
            poly: MultiPoly::monomial(alpha.clone(), Scalar::one()),
            norm: Scalar::from_integer(double_factorial(2 * a as i64 - 1)?),
        });
    }

    let d = alpha.len() - 1;
    let a_d = alpha.last();
    let inner = basis_element(&alpha.truncated())?;
    let m = 2 * alpha.degree() as i64 + d as i64;
    let p = monic_poly(a_d, m)?;

    // expand p(x_d / r) * r^{a_d} = sum_j c_j x_d^j (x_0^2+...+x_{d-1}^2)^{(a_d-j)/2}
    let mut radial_factor = MultiPoly::zero(d + 1);
    for (j, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let half = (a_d as usize - j) / 2; // a_d - j is even for nonzero c
        for mu in enumerate_monomials(d - 1, half as u32) {
            let multinomial = Scalar::new(factorial(half as u64), mu.factorial());
            let mut exps: Vec<u32> = mu.exponents().iter().map(|&e| 2 * e).collect();
            exps.push(j as u32);
            radial_factor =
                radial_factor.add(&MultiPoly::monomial(MultiIndex::new(exps), c * multinomial));
        }
    }

    let poly = radial_factor.mul(&inner.poly.extend_vars(d + 1));
    Ok(HBasisElement {
        alpha: alpha.clone(),
        poly,
        norm: norm_factor(alpha)? * inner.norm,
    })
}

/// The single recursion factor in the squared-norm formula:
/// `a_d! (2|alpha'| + d)!! (2|alpha| + d - 1)!! / (|alpha'| + |alpha| + d)!`.
fn norm_factor(alpha: &MultiIndex) -> Result<Scalar> {
    let d = (alpha.len() - 1) as i64;
    let t = alpha.degree() as i64;
    let s = t - alpha.last() as i64;
    let num = factorial(alpha.last() as u64)
        * double_factorial(2 * s + d)?
        * double_factorial(2 * t + d - 1)?;
    Ok(Scalar::new(num, factorial((s + t + d) as u64)))
}

/// Squared norm of the basis element for `alpha`, by the recursion alone
/// (no polynomial expansion).
pub fn element_norm(alpha: &MultiIndex) -> Result<Scalar> {
    if alpha.is_empty() {
        return Err(Error::domain("empty multi-index".to_string()));
    }
    if alpha.len() == 1 {
        return Ok(Scalar::from_integer(double_factorial(
            2 * alpha.get(0) as i64 - 1,
        )?));
    }
    Ok(norm_factor(alpha)? * element_norm(&alpha.truncated())?)
}

/// The ordered degree-`k` monomial basis, refused above [`MAX_BASIS_SIZE`].
pub fn checked_basis(d: usize, k: u32) -> Result<Vec<MultiIndex>> {
    let basis = enumerate_monomials(d, k);
    if basis.len() > MAX_BASIS_SIZE {
        return Err(Error::size_limit(format!(
            "basis of {} monomials (max {MAX_BASIS_SIZE})",
            basis.len()
        )));
    }
    Ok(basis)
}

/// Diagonal report for the orthogonal basis in degree `k` over `d+1`
/// variables: all squared norms, a full pairwise-orthogonality check, and
/// the monomial Gram determinant as the product of the norms, which must
/// equal the closed-form combinatorial factor.
#[derive(Clone, Debug)]
pub struct OrthogonalGramReport {
    pub d: usize,
    pub k: u32,
    pub norms: Vec<(MultiIndex, Scalar)>,
    pub pairwise_orthogonal: bool,
    pub determinant: Scalar,
    pub theta: FactoredInteger,
    pub matches_theta: bool,
}

pub fn orthogonal_gram(d: usize, k: u32) -> Result<OrthogonalGramReport> {
    let basis = checked_basis(d, k)?;
    let elements: Vec<HBasisElement> = basis
        .iter()
        .map(basis_element)
        .collect::<Result<Vec<_>>>()?;

    let mut pairwise_orthogonal = true;
    for i in 0..elements.len() {
        for j in 0..i {
            let b = moment_bracket(&elements[i].poly, &elements[j].poly)?;
            if !b.is_zero() {
                pairwise_orthogonal = false;
            }
        }
    }

    let mut determinant = Scalar::one();
    let mut norms = Vec::with_capacity(elements.len());
    for e in elements {
        determinant *= &e.norm;
        norms.push((e.alpha, e.norm));
    }
    let theta = theta(d as u32, k)?;
    let matches_theta = determinant == theta.value();
    Ok(OrthogonalGramReport {
        d,
        k,
        norms,
        pairwise_orthogonal,
        determinant,
        theta,
        matches_theta,
    })
}

/// The inverse transition matrix from the orthogonal basis back to the
/// monomials: entry `(alpha, beta)` is `<x^alpha, h_beta> / <h_beta, h_beta>`,
/// so that `x^alpha = sum_beta T[alpha][beta] h_beta`. In the multi-index
/// order it is unit lower triangular.
#[derive(Clone, Debug)]
pub struct TransitionReport {
    pub d: usize,
    pub k: u32,
    pub basis: Vec<MultiIndex>,
    pub matrix: ExactMatrix,
    pub unit_diagonal: bool,
    pub lower_triangular: bool,
    pub reconstruction_ok: bool,
}

pub fn transition(d: usize, k: u32) -> Result<TransitionReport> {
    let basis = checked_basis(d, k)?;
    let elements: Vec<HBasisElement> = basis
        .iter()
        .map(basis_element)
        .collect::<Result<Vec<_>>>()?;

    let n = basis.len();
    let mut matrix = ExactMatrix::zero(n, n);
    for (row, alpha) in basis.iter().enumerate() {
        let xa = MultiPoly::monomial(alpha.clone(), Scalar::one());
        for (col, e) in elements.iter().enumerate() {
            let v = moment_bracket(&xa, &e.poly)? / &e.norm;
            matrix.set(row, col, v);
        }
    }

    let unit_diagonal = (0..n).all(|i| matrix.get(i, i).is_one());
    let lower_triangular = (0..n).all(|i| (i + 1..n).all(|j| matrix.get(i, j).is_zero()));

    // exact reconstruction: x^alpha = sum_beta T[alpha][beta] h_beta
    let mut reconstruction_ok = true;
    for (row, alpha) in basis.iter().enumerate() {
        let mut sum = MultiPoly::zero(d + 1);
        for (col, e) in elements.iter().enumerate() {
            sum = sum.add(&e.poly.scale(matrix.get(row, col)));
        }
        if sum != MultiPoly::monomial(alpha.clone(), Scalar::one()) {
            reconstruction_ok = false;
        }
    }

    Ok(TransitionReport {
        d,
        k,
        basis,
        matrix,
        unit_diagonal,
        lower_triangular,
        reconstruction_ok,
    })
}
