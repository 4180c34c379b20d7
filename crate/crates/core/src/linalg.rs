//! Dense exact matrices: fraction-free determinants, Smith normal form,
//! integer kernels and saturation of row lattices.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactnum::Scalar;

/// Determinants above this size are refused; the largest matrix any of the
/// verification drivers produces is 56x56, so 600 leaves generous headroom
/// without inviting infeasible runs.
pub const MAX_DET_SIZE: usize = 600;

/// Dense matrix of exact rationals, row major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl ExactMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::shape("ragged rows".to_string()));
        }
        Ok(ExactMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&x| crate::exactnum::scalar(x)).collect())
                .collect(),
        )
    }

    pub fn from_bigint_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        let r = rows.len();
        debug_assert!(rows.iter().all(|row| row.len() == cols));
        ExactMatrix {
            rows: r,
            cols,
            data: rows
                .into_iter()
                .flatten()
                .map(Scalar::from_integer)
                .collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, rhs: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = Scalar::zero();
                for t in 0..self.cols {
                    let a = self.get(i, t);
                    let b = rhs.get(t, j);
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn has_integer_entries(&self) -> bool {
        self.data.iter().all(|x| x.denom().is_one())
    }

    pub fn to_integer_rows(&self) -> Result<Vec<Vec<BigInt>>> {
        if !self.has_integer_entries() {
            return Err(Error::domain("matrix has non-integer entries".to_string()));
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.numer().clone()).collect())
            .collect())
    }

    /// Exact determinant by fraction-free Bareiss elimination on a
    /// common-denominator integer lift.
    pub fn det_exact(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::shape(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        if self.rows > MAX_DET_SIZE {
            return Err(Error::size_limit(format!(
                "determinant of size {} (max {MAX_DET_SIZE})",
                self.rows
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Scalar::one());
        }
        // Scale each row to integers; det scales by the product of the lcms.
        let mut scale = BigInt::one();
        let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let lcm = self
                .row(i)
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            m.push(
                self.row(i)
                    .iter()
                    .map(|x| x.numer() * (&lcm / x.denom()))
                    .collect(),
            );
            scale *= lcm;
        }
        let det = bareiss_det(&mut m);
        Ok(Scalar::new(det, scale))
    }

    /// Inverse by Gauss-Jordan elimination over the rationals.
    pub fn inverse(&self) -> Result<ExactMatrix> {
        if !self.is_square() {
            return Err(Error::shape("inverse of a non-square matrix".to_string()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a.get(r, col).is_zero())
                .ok_or_else(|| Error::Degenerate("singular matrix".to_string()))?;
            if pivot != col {
                for j in 0..n {
                    let x = a.get(pivot, j).clone();
                    a.set(pivot, j, a.get(col, j).clone());
                    a.set(col, j, x);
                    let y = inv.get(pivot, j).clone();
                    inv.set(pivot, j, inv.get(col, j).clone());
                    inv.set(col, j, y);
                }
            }
            let p = a.get(col, col).clone();
            for j in 0..n {
                a.set(col, j, a.get(col, j) / &p);
                inv.set(col, j, inv.get(col, j) / &p);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for j in 0..n {
                    let av = a.get(r, j) - a.get(col, j) * &f;
                    a.set(r, j, av);
                    let iv = inv.get(r, j) - inv.get(col, j) * &f;
                    inv.set(r, j, iv);
                }
            }
        }
        Ok(inv)
    }

    /// Smith normal form of an integer matrix: the invariant factors
    /// `d_1 | d_2 | ...` (all positive) and the rank.
    pub fn smith_normal_form(&self) -> Result<SmithNormalForm> {
        let m = self.to_integer_rows()?;
        Ok(snf_with_right_transform(m, self.cols, false).0)
    }

    /// Basis of the integer null space `{x : M x = 0}`, one vector per row,
    /// in Hermite normal form. The basis spans *all* integer solutions.
    pub fn integer_kernel(&self) -> Result<ExactMatrix> {
        let m = self.to_integer_rows()?;
        let n = self.cols;
        let (snf, v) = snf_with_right_transform(m, n, true);
        let v = v.expect("right transform requested");
        // columns of V past the rank solve M x = 0
        let mut kernel_rows: Vec<Vec<BigInt>> = Vec::new();
        for j in snf.rank..n {
            kernel_rows.push((0..n).map(|i| v[i][j].clone()).collect());
        }
        let hnf = row_hermite_normal_form(kernel_rows, n);
        Ok(ExactMatrix::from_bigint_rows(hnf, n))
    }

    /// Saturation of the row lattice: a basis of `(rowspace tensor Q) cap Z^n`,
    /// in Hermite normal form. The kernel of an integer matrix is saturated,
    /// so the saturation is the kernel of the kernel.
    pub fn saturate_rows(&self) -> Result<ExactMatrix> {
        self.integer_kernel()?.integer_kernel()
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(self.smith_normal_form()?.rank)
    }
}

impl std::fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", crate::exactnum::scalar_to_string(self.get(i, j)))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithNormalForm {
    /// Nonzero invariant factors, each positive and dividing the next.
    pub factors: Vec<BigInt>,
    pub rank: usize,
}

impl SmithNormalForm {
    /// Product of the invariant factors (1 for rank zero).
    pub fn factor_product(&self) -> BigInt {
        self.factors.iter().product()
    }
}

fn bareiss_det(m: &mut [Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut sign = 1i8;
    let mut prev = BigInt::one();
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev; // exact by the Bareiss identity
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = std::mem::take(&mut m[n - 1][n - 1]);
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Elementary-operations Smith reduction. Optionally accumulates the right
/// transform `V` (as a dense column-op product) so that kernels can be read
/// off the trailing columns.
fn snf_with_right_transform(
    mut a: Vec<Vec<BigInt>>,
    cols: usize,
    want_v: bool,
) -> (SmithNormalForm, Option<Vec<Vec<BigInt>>>) {
    let rows = a.len();
    let mut v: Option<Vec<Vec<BigInt>>> = want_v.then(|| {
        (0..cols)
            .map(|i| {
                (0..cols)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect()
    });

    fn swap_cols(a: &mut [Vec<BigInt>], v: &mut Option<Vec<Vec<BigInt>>>, x: usize, y: usize) {
        for row in a.iter_mut() {
            row.swap(x, y);
        }
        if let Some(v) = v {
            for row in v.iter_mut() {
                row.swap(x, y);
            }
        }
    }
    // col_y -= q * col_x
    fn add_col(
        a: &mut [Vec<BigInt>],
        v: &mut Option<Vec<Vec<BigInt>>>,
        x: usize,
        y: usize,
        q: &BigInt,
    ) {
        for row in a.iter_mut() {
            let delta = &row[x] * q;
            row[y] -= delta;
        }
        if let Some(v) = v {
            for row in v.iter_mut() {
                let delta = &row[x] * q;
                row[y] -= delta;
            }
        }
    }
    fn negate_col(a: &mut [Vec<BigInt>], v: &mut Option<Vec<Vec<BigInt>>>, x: usize) {
        for row in a.iter_mut() {
            let val = std::mem::take(&mut row[x]);
            row[x] = -val;
        }
        if let Some(v) = v {
            for row in v.iter_mut() {
                let val = std::mem::take(&mut row[x]);
                row[x] = -val;
            }
        }
    }

    let mut t = 0;
    let bound = rows.min(cols);
    while t < bound {
        // pivot: minimal nonzero absolute value in the trailing submatrix
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero()
                    && pivot
                        .map(|(pi, pj)| a[i][j].abs() < a[pi][pj].abs())
                        .unwrap_or(true)
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        if pj != t {
            swap_cols(&mut a, &mut v, t, pj);
        }

        let mut dirty = false;
        // clear column t below the pivot (row operations, untracked)
        for i in t + 1..rows {
            if !a[i][t].is_zero() {
                let q = a[i][t].div_floor(&a[t][t]);
                if !q.is_zero() {
                    for j in t..cols {
                        let delta = &a[t][j] * &q;
                        a[i][j] -= delta;
                    }
                }
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
        }
        // clear row t right of the pivot (column operations, tracked)
        for j in t + 1..cols {
            if !a[t][j].is_zero() {
                let q = a[t][j].div_floor(&a[t][t]);
                if !q.is_zero() {
                    add_col(&mut a, &mut v, t, j, &q);
                }
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
        }
        if dirty {
            continue; // residues are smaller than the pivot; re-pick
        }
        // pivot divides what it eliminated; now enforce divisibility into the
        // remaining submatrix
        let mut fixed = true;
        'scan: for i in t + 1..rows {
            for j in t + 1..cols {
                if !(&a[i][j] % &a[t][t]).is_zero() {
                    // fold row i into row t so the offending entry enters row t
                    for col in t..cols {
                        let add = a[i][col].clone();
                        a[t][col] += add;
                    }
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if !fixed {
            continue;
        }
        if a[t][t].is_negative() {
            negate_col(&mut a, &mut v, t);
        }
        t += 1;
    }

    let mut factors = Vec::new();
    for (i, row) in a.iter().enumerate().take(bound) {
        if row[i].is_zero() {
            break;
        }
        factors.push(row[i].clone());
    }
    let rank = factors.len();
    (SmithNormalForm { factors, rank }, v)
}

/// Row-style Hermite normal form: positive pivots, entries above each pivot
/// reduced into `[0, pivot)`, zero rows dropped. Canonical for a given row
/// lattice, which makes kernel and saturation bases deterministic.
fn row_hermite_normal_form(mut rows: Vec<Vec<BigInt>>, cols: usize) -> Vec<Vec<BigInt>> {
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in r..rows.len() {
                if !rows[i][c].is_zero()
                    && best
                        .map(|b| rows[i][c].abs() < rows[b][c].abs())
                        .unwrap_or(true)
                {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            rows.swap(r, b);
            let mut again = false;
            for i in r + 1..rows.len() {
                if !rows[i][c].is_zero() {
                    let q = rows[i][c].div_floor(&rows[r][c]);
                    for j in 0..cols {
                        let delta = &rows[r][j] * &q;
                        rows[i][j] -= delta;
                    }
                    if !rows[i][c].is_zero() {
                        again = true;
                    }
                }
            }
            if !again {
                break;
            }
        }
        if rows[r][c].is_zero() {
            continue;
        }
        if rows[r][c].is_negative() {
            for j in 0..cols {
                let val = std::mem::take(&mut rows[r][j]);
                rows[r][j] = -val;
            }
        }
        for i in 0..r {
            let q = rows[i][c].div_floor(&rows[r][c]);
            if !q.is_zero() {
                for j in 0..cols {
                    let delta = &rows[r][j] * &q;
                    rows[i][j] -= delta;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}
