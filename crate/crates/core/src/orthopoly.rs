//! A family of monic univariate orthogonal polynomials with an integer
//! parameter `m`, their three-term recurrence, and the rational-valued
//! normalized moment functional they are orthogonal against.
//!
//! The functional is normalized so that `L(1) = 1`; this makes every moment
//! of `x^j` (for `j <= m-1`) an exact rational, with odd moments zero and
//! `L(x^j) = (j-1)!! / prod_{l=1}^{j/2} (m - 2l)` for even `j`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::{double_factorial, factorial, scalar, Scalar};

/// Dense univariate polynomial; `coeffs[j]` is the coefficient of `x^j`.
/// No trailing zero coefficients are stored; the zero polynomial is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly {
    coeffs: Vec<Scalar>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UniPoly {
            coeffs: vec![Scalar::one()],
        }
    }

    pub fn x() -> Self {
        UniPoly {
            coeffs: vec![Scalar::zero(), Scalar::one()],
        }
    }

    pub fn from_coeffs(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, j: usize) -> Scalar {
        self.coeffs.get(j).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn add(&self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|j| self.coeff(j) + rhs.coeff(j)).collect())
    }

    pub fn sub(&self, rhs: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UniPoly::from_coeffs((0..n).map(|j| self.coeff(j) - rhs.coeff(j)).collect())
    }

    pub fn scale(&self, c: &Scalar) -> UniPoly {
        if c.is_zero() {
            return UniPoly::zero();
        }
        UniPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, rhs: &UniPoly) -> UniPoly {
        if self.is_zero() || rhs.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        UniPoly::from_coeffs(out)
    }

    /// Multiplication by `x`.
    pub fn mul_x(&self) -> UniPoly {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Scalar::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        UniPoly { coeffs }
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, a)| a * scalar(j as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for a in self.coeffs.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }
}

impl fmt::Display for UniPoly {
    /// Terms in descending degree, e.g. `x^2 - 1/3` or `3/2*x^4 + x`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for j in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[j];
            if c.is_zero() {
                continue;
            }
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
            let unit = mag.is_one();
            if !unit || j == 0 {
                write!(f, "{}", crate::exactnum::scalar_to_string(&mag))?;
            }
            if j > 0 {
                if !unit {
                    write!(f, "*")?;
                }
                if j == 1 {
                    write!(f, "x")?;
                } else {
                    write!(f, "x^{j}")?;
                }
            }
        }
        Ok(())
    }
}

fn check_parameter_domain(n: u32, m: i64) -> Result<()> {
    if 2 * n as i64 > m + 1 {
        return Err(Error::domain(format!(
            "polynomial index n = {n} out of range for parameter m = {m} (need 2n <= m+1)"
        )));
    }
    Ok(())
}

/// The monic degree-`n` member of the family with parameter `m`,
/// defined for `0 <= 2n <= m + 1`. Only terms with `n - j` even appear;
/// the coefficient of `x^j` is
/// `(-1)^((n-j)/2) n! (m-2n)!! / (j! (m-n-j)!! (n-j)!!)`.
pub fn monic_poly(n: u32, m: i64) -> Result<UniPoly> {
    check_parameter_domain(n, m)?;
    let n = n as i64;
    let lead = factorial(n as u64) * double_factorial(m - 2 * n)?;
    let mut coeffs = vec![Scalar::zero(); n as usize + 1];
    let mut j = n;
    while j >= 0 {
        let den = factorial(j as u64) * double_factorial(m - n - j)? * double_factorial(n - j)?;
        let mut c = Scalar::new(lead.clone(), den);
        if (n - j) % 4 == 2 {
            c = -c;
        }
        coeffs[j as usize] = c;
        j -= 2;
    }
    Ok(UniPoly::from_coeffs(coeffs))
}

/// Recurrence coefficient `d_n^m = n(m-n+1) / ((m-2n)(m-2n+2))`,
/// defined for `1 <= n`, `2n <= m - 1`.
pub fn recurrence_coeff(n: u32, m: i64) -> Result<Scalar> {
    let n = n as i64;
    if n < 1 || 2 * n > m - 1 {
        return Err(Error::domain(format!(
            "recurrence coefficient needs 1 <= n and 2n <= m-1, got n = {n}, m = {m}"
        )));
    }
    Ok(Scalar::new(
        BigInt::from(n * (m - n + 1)),
        BigInt::from((m - 2 * n) * (m - 2 * n + 2)),
    ))
}

/// Normalized moment functional for parameter `m >= 1`: rational-valued on
/// polynomials of degree at most `m - 1`, with `L(1) = 1`.
#[derive(Clone, Debug)]
pub struct MomentFunctional {
    m: i64,
    moments: Vec<Scalar>, // moments[j] = L(x^j), j <= m-1
}

impl MomentFunctional {
    pub fn new(m: i64) -> Result<Self> {
        if m < 1 {
            return Err(Error::domain(format!(
                "moment functional needs m >= 1, got {m}"
            )));
        }
        let mut moments = Vec::with_capacity(m as usize);
        for j in 0..m {
            if j % 2 == 1 {
                moments.push(Scalar::zero());
            } else {
                let mut den = BigInt::one();
                for l in 1..=j / 2 {
                    den *= m - 2 * l;
                }
                moments.push(Scalar::new(double_factorial(j - 1)?, den));
            }
        }
        Ok(MomentFunctional { m, moments })
    }

    pub fn parameter(&self) -> i64 {
        self.m
    }

    /// `L(x^j)` for `0 <= j <= m-1`.
    pub fn moment(&self, j: usize) -> Result<&Scalar> {
        self.moments
            .get(j)
            .ok_or_else(|| Error::domain(format!("moment x^{j} out of range for m = {}", self.m)))
    }

    /// Applies the functional to a polynomial of degree at most `m-1`.
    pub fn apply(&self, f: &UniPoly) -> Result<Scalar> {
        if f.degree().is_some_and(|d| d as i64 > self.m - 1) {
            return Err(Error::domain(format!(
                "degree {} exceeds the functional's bound m-1 = {}",
                f.degree().unwrap(),
                self.m - 1
            )));
        }
        let mut acc = Scalar::zero();
        for (j, c) in f.coeffs().iter().enumerate() {
            if !c.is_zero() {
                acc += c * &self.moments[j];
            }
        }
        Ok(acc)
    }
}

/// `L(x^j)` for parameter `m`.
pub fn moment(j: usize, m: i64) -> Result<Scalar> {
    MomentFunctional::new(m)?.moment(j).cloned()
}

/// Applies the parameter-`m` functional to `f`.
pub fn functional(f: &UniPoly, m: i64) -> Result<Scalar> {
    MomentFunctional::new(m)?.apply(f)
}

/// `L(p_n^2) = prod_{l=1}^{n} d_l^m`, the squared norm of the degree-`n`
/// member under the normalized functional. Needs `2n <= m - 1`.
pub fn squared_norm(n: u32, m: i64) -> Result<Scalar> {
    if 2 * n as i64 > m - 1 {
        return Err(Error::domain(format!(
            "squared norm needs 2n <= m-1, got n = {n}, m = {m}"
        )));
    }
    let mut acc = Scalar::one();
    for l in 1..=n {
        acc *= recurrence_coeff(l, m)?;
    }
    Ok(acc)
}
