//! Exact integer and rational linear algebra.
//!
//! Everything here works over `BigInt` / `BigRational`; there is no floating
//! point anywhere in the crate.

use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("ragged rows: row {row} has length {found}, expected {expected}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("system is consistent but has infinitely many solutions")]
    Underdetermined,
    #[error("vector is not primitive (gcd of entries is {0})")]
    NotPrimitive(BigInt),
    #[error("quotient by a vector needs ambient dimension at least 2")]
    DimensionTooSmall,
}

pub fn int(x: i64) -> BigInt {
    BigInt::from(x)
}

pub fn ivec(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn rat(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows. An empty row list gives a 0x`cols` matrix
    /// only through [`IntMatrix::zeros`]; here it yields 0x0.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(LinalgError::Ragged {
                    row: i,
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend(r);
        }
        Ok(IntMatrix {
            rows: nrows,
            cols,
            data,
        })
    }

    /// Matrix whose columns are the given vectors (all of length `dim`).
    pub fn from_columns(dim: usize, cols: &[Vec<BigInt>]) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(dim, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != dim {
                return Err(LinalgError::DimensionMismatch {
                    expected: dim,
                    found: c.len(),
                });
            }
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self, LinalgError> {
        Self::from_rows(rows.iter().map(|r| ivec(r)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>, LinalgError> {
        if self.cols != v.len() {
            return Err(LinalgError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for j in 0..self.cols {
            let t = self.get(src, j) * k;
            self.data[dst * self.cols + j] += t;
        }
    }

    fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        for i in 0..self.rows {
            let t = self.get(i, src) * k;
            self.data[i * self.cols + dst] += t;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let idx = r * self.cols + j;
            self.data[idx] = -std::mem::take(&mut self.data[idx]);
        }
    }

    /// Replaces rows (p, q) by (x*p + y*q, s*p + t*q).
    fn combine_rows(&mut self, p: usize, q: usize, x: &BigInt, y: &BigInt, s: &BigInt, t: &BigInt) {
        for j in 0..self.cols {
            let a = self.get(p, j).clone();
            let b = self.get(q, j).clone();
            self.set(p, j, x * &a + y * &b);
            self.set(q, j, s * &a + t * &b);
        }
    }

    fn combine_cols(&mut self, p: usize, q: usize, x: &BigInt, y: &BigInt, s: &BigInt, t: &BigInt) {
        for i in 0..self.rows {
            let a = self.get(i, p).clone();
            let b = self.get(i, q).clone();
            self.set(i, p, x * &a + y * &b);
            self.set(i, q, s * &a + t * &b);
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        self.get(i, j)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", r.join(", "))?;
        }
        Ok(())
    }
}

/// Vector of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalVector(pub Vec<BigRational>);

impl RationalVector {
    pub fn is_integral(&self) -> bool {
        self.0.iter().all(BigRational::is_integer)
    }

    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.0
            .iter()
            .map(|x| x.is_integer().then(|| x.to_integer()))
            .collect()
    }
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn gcd_all<'a>(xs: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    xs.into_iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &IntMatrix) -> Result<BigInt, LinalgError> {
    if m.rows != m.cols {
        return Err(LinalgError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    match n {
        0 => return Ok(BigInt::one()),
        1 => return Ok(m.get(0, 0).clone()),
        2 => return Ok(m.get(0, 0) * m.get(1, 1) - m.get(0, 1) * m.get(1, 0)),
        _ => {}
    }
    let mut a = m.to_rows();
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                None => return Ok(BigInt::zero()),
                Some(i) => {
                    a.swap(i, k);
                    negate = !negate;
                }
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    Ok(if negate { -d } else { d })
}

/// Row-style Hermite normal form: returns `(H, U)` with `U` unimodular and
/// `U * M = H`. `H` is in row echelon form with positive pivots and the
/// entries above each pivot reduced into `[0, pivot)`.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let mut h = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut pr = 0;
    for col in 0..m.cols {
        if pr == m.rows {
            break;
        }
        for i in pr + 1..m.rows {
            if h.get(i, col).is_zero() {
                continue;
            }
            let a = h.get(pr, col).clone();
            let b = h.get(i, col).clone();
            let e = a.extended_gcd(&b);
            let s = -(&b / &e.gcd);
            let t = &a / &e.gcd;
            h.combine_rows(pr, i, &e.x, &e.y, &s, &t);
            u.combine_rows(pr, i, &e.x, &e.y, &s, &t);
        }
        if h.get(pr, col).is_zero() {
            continue;
        }
        if h.get(pr, col).is_negative() {
            h.negate_row(pr);
            u.negate_row(pr);
        }
        let p = h.get(pr, col).clone();
        for i in 0..pr {
            let q = h.get(i, col).div_floor(&p);
            if !q.is_zero() {
                let k = -q;
                h.add_row_multiple(i, pr, &k);
                u.add_row_multiple(i, pr, &k);
            }
        }
        pr += 1;
    }
    (h, u)
}

/// Smith normal form: returns `(S, U, V)` with `U * M * V = S`, `U` and `V`
/// unimodular, `S` diagonal with nonnegative entries, each dividing the next.
pub fn snf(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let mut s = m.clone();
    let mut u = IntMatrix::identity(m.rows);
    let mut v = IntMatrix::identity(m.cols);
    let r = m.rows.min(m.cols);
    let mut t = 0;
    while t < r {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..m.rows {
            for j in t..m.cols {
                let x = s.get(i, j);
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < s.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        s.swap_rows(t, bi);
        u.swap_rows(t, bi);
        s.swap_cols(t, bj);
        v.swap_cols(t, bj);

        loop {
            let mut changed = false;
            for i in t + 1..m.rows {
                if s.get(i, t).is_zero() {
                    continue;
                }
                let a = s.get(t, t).clone();
                let b = s.get(i, t).clone();
                if (&b % &a).is_zero() {
                    let q = -(&b / &a);
                    s.add_row_multiple(i, t, &q);
                    u.add_row_multiple(i, t, &q);
                    continue;
                }
                // the pivot strictly shrinks to gcd(a, b), so the loop terminates
                let e = a.extended_gcd(&b);
                let ss = -(&b / &e.gcd);
                let tt = &a / &e.gcd;
                s.combine_rows(t, i, &e.x, &e.y, &ss, &tt);
                u.combine_rows(t, i, &e.x, &e.y, &ss, &tt);
                changed = true;
            }
            for j in t + 1..m.cols {
                if s.get(t, j).is_zero() {
                    continue;
                }
                let a = s.get(t, t).clone();
                let b = s.get(t, j).clone();
                if (&b % &a).is_zero() {
                    let q = -(&b / &a);
                    s.add_col_multiple(j, t, &q);
                    v.add_col_multiple(j, t, &q);
                    continue;
                }
                let e = a.extended_gcd(&b);
                let ss = -(&b / &e.gcd);
                let tt = &a / &e.gcd;
                s.combine_cols(t, j, &e.x, &e.y, &ss, &tt);
                v.combine_cols(t, j, &e.x, &e.y, &ss, &tt);
                changed = true;
            }
            if changed {
                continue;
            }
            // divisibility: fold an offending row into the pivot row and redo
            let p = s.get(t, t).clone();
            let bad =
                (t + 1..m.rows).find(|&i| (t + 1..m.cols).any(|j| !(s.get(i, j) % &p).is_zero()));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    s.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if s.get(t, t).is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    (s, u, v)
}

/// Nonzero diagonal entries of the Smith normal form.
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let (s, _, _) = snf(m);
    (0..s.rows.min(s.cols))
        .map(|i| s.get(i, i).clone())
        .filter(|x| !x.is_zero())
        .collect()
}

/// Reduced row echelon form over Q. Returns the reduced rows and pivot columns.
pub fn rref(mut a: Vec<Vec<BigRational>>) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let t = &a[r][j] * &f;
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(m: &IntMatrix) -> usize {
    rank_of_rows(&m.to_rows())
}

pub fn rank_of_rows(rows: &[Vec<BigInt>]) -> usize {
    let q: Vec<Vec<BigRational>> = rows.iter().map(|r| r.iter().map(rat).collect()).collect();
    rref(q).1.len()
}

/// Solves `A x = b` for square `A`. `Ok(None)` means the system is
/// inconsistent; a singular consistent system is an error.
pub fn solve_rational(a: &IntMatrix, b: &[BigInt]) -> Result<Option<RationalVector>, LinalgError> {
    if a.rows != a.cols {
        return Err(LinalgError::NotSquare {
            rows: a.rows,
            cols: a.cols,
        });
    }
    if b.len() != a.rows {
        return Err(LinalgError::DimensionMismatch {
            expected: a.rows,
            found: b.len(),
        });
    }
    let n = a.rows;
    let aug: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            a.row(i)
                .iter()
                .chain(std::iter::once(&b[i]))
                .map(rat)
                .collect()
        })
        .collect();
    let (red, pivots) = rref(aug);
    if pivots.last() == Some(&n) {
        return Ok(None);
    }
    if pivots.len() < n {
        return Err(LinalgError::Underdetermined);
    }
    Ok(Some(RationalVector(
        red.into_iter().map(|r| r[n].clone()).collect(),
    )))
}

/// Inverse of a unimodular matrix, or `None` when `det` is not a unit.
pub fn unimodular_inverse(m: &IntMatrix) -> Result<Option<IntMatrix>, LinalgError> {
    if m.rows != m.cols {
        return Err(LinalgError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    let aug: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut r: Vec<BigRational> = m.row(i).iter().map(rat).collect();
            r.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            r
        })
        .collect();
    let (red, pivots) = rref(aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return Ok(None);
    }
    let mut inv = IntMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let x = &red[i][n + j];
            if !x.is_integer() {
                return Ok(None);
            }
            inv.set(i, j, x.to_integer());
        }
    }
    Ok(Some(inv))
}

/// Rows of an integer matrix `Q` with `Q v = 0` and `Q` surjective onto
/// `Z^(d-1)`, i.e. the lattice quotient `Z^d -> Z^d / Zv`.
pub fn quotient_projection(v: &[BigInt]) -> Result<IntMatrix, LinalgError> {
    let d = v.len();
    if d < 2 {
        return Err(LinalgError::DimensionTooSmall);
    }
    let g = gcd_all(v);
    if !g.is_one() {
        return Err(LinalgError::NotPrimitive(g));
    }
    let col = IntMatrix::from_columns(d, &[v.to_vec()])?;
    let (_, u) = hnf(&col);
    IntMatrix::from_rows((1..d).map(|i| u.row(i).to_vec()).collect())
}

/// A basis of the integer kernel `{x in Z^n : M x = 0}`, as rows.
/// The returned lattice is saturated.
pub fn kernel_basis(m: &IntMatrix) -> IntMatrix {
    let (h, u) = hnf(&m.transpose());
    let rows: Vec<Vec<BigInt>> = (0..h.rows)
        .filter(|&i| h.row(i).iter().all(Zero::is_zero))
        .map(|i| u.row(i).to_vec())
        .collect();
    if rows.is_empty() {
        return IntMatrix::zeros(0, m.cols);
    }
    IntMatrix::from_rows(rows).expect("rows of equal length")
}

/// Finds `mu >= 0` with `sum mu_j g_j = target`, or `None` if no such
/// combination exists. Exact phase-one simplex with Bland's rule.
pub fn nonnegative_combination(
    generators: &[Vec<BigInt>],
    target: &[BigInt],
) -> Option<Vec<BigRational>> {
    let m = generators.len();
    let n = target.len();
    debug_assert!(generators.iter().all(|g| g.len() == n));
    // Tableau columns: m structural, n artificial, rhs.
    let width = m + n + 1;
    let mut tab: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    for r in 0..n {
        let flip = target[r].is_negative();
        let sgn = |x: &BigInt| if flip { rat(&-x) } else { rat(x) };
        let mut row: Vec<BigRational> = generators.iter().map(|g| sgn(&g[r])).collect();
        row.extend((0..n).map(|k| {
            if k == r {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        }));
        row.push(sgn(&target[r]));
        tab.push(row);
    }
    let mut basis: Vec<usize> = (m..m + n).collect();
    // reduced costs of the phase-one objective (sum of artificials)
    let mut cost = vec![BigRational::zero(); width];
    for row in &tab {
        for j in 0..m {
            cost[j] -= &row[j];
        }
        cost[width - 1] -= &row[width - 1];
    }
    loop {
        let Some(enter) = (0..m + n).find(|&j| cost[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for (r, row) in tab.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[width - 1] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((lr, lratio)) => {
                        ratio < *lratio || (ratio == *lratio && basis[r] < basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((pr, _)) = leave else {
            // unbounded cannot happen for a phase-one objective bounded below by 0
            unreachable!("phase-one objective is bounded")
        };
        let inv = tab[pr][enter].recip();
        for x in tab[pr].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = tab[pr].clone();
        for (r, row) in tab.iter_mut().enumerate() {
            if r != pr && !row[enter].is_zero() {
                let f = row[enter].clone();
                for j in 0..width {
                    row[j] -= &pivot_row[j] * &f;
                }
            }
        }
        if !cost[enter].is_zero() {
            let f = cost[enter].clone();
            for j in 0..width {
                cost[j] -= &pivot_row[j] * &f;
            }
        }
        basis[pr] = enter;
    }
    if !cost[width - 1].is_zero() {
        return None;
    }
    let mut mu = vec![BigRational::zero(); m];
    for (r, &b) in basis.iter().enumerate() {
        if b < m {
            mu[b] = tab[r][width - 1].clone();
        }
    }
    Some(mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(rows).unwrap()
    }

    #[test]
    fn det_examples() {
        let a = m(&[
            &[-1, -1, -1, 3],
            &[1, 0, 0, 0],
            &[0, 1, 0, 0],
            &[0, 0, 0, 1],
        ]);
        assert_eq!(det(&a).unwrap(), int(-1));
        assert_eq!(det(&m(&[&[2, 4], &[1, 3]])).unwrap(), int(2));
        assert_eq!(
            det(&m(&[&[1, 2, 3], &[2, 4, 6], &[0, 0, 1]])).unwrap(),
            int(0)
        );
        assert_eq!(
            det(&m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]])).unwrap(),
            int(-1)
        );
        assert!(matches!(
            det(&m(&[&[1, 2]])),
            Err(LinalgError::NotSquare { .. })
        ));
    }

    #[test]
    fn hnf_example() {
        let a = m(&[&[2, 4], &[1, 3]]);
        let (h, u) = hnf(&a);
        // 3 above the pivot 2 reduces to 1
        assert_eq!(h, m(&[&[1, 1], &[0, 2]]));
        assert_eq!(u.mul(&a).unwrap(), h);
        assert!(det(&u).unwrap().abs().is_one());
        let (h, u) = hnf(&m(&[&[2, 0], &[0, 3]]));
        assert_eq!((h, u), (m(&[&[2, 0], &[0, 3]]), IntMatrix::identity(2)));
        assert_eq!(hnf(&m(&[&[0, 1], &[1, 0]])).0, IntMatrix::identity(2));
    }

    #[test]
    fn snf_example() {
        let (s, u, v) = snf(&m(&[&[2, 0], &[0, 3]]));
        assert_eq!(s, m(&[&[1, 0], &[0, 6]]));
        assert_eq!(u.mul(&m(&[&[2, 0], &[0, 3]])).unwrap().mul(&v).unwrap(), s);
    }

    #[test]
    fn solve_examples() {
        let x = solve_rational(&m(&[&[1, 1], &[1, -1]]), &ivec(&[2, 0]))
            .unwrap()
            .unwrap();
        assert_eq!(x.to_integers().unwrap(), ivec(&[1, 1]));
        assert_eq!(
            solve_rational(&m(&[&[1, 1], &[1, 1]]), &ivec(&[1, 2])).unwrap(),
            None
        );
        assert_eq!(
            solve_rational(&m(&[&[1, 1], &[1, 1]]), &ivec(&[1, 1])),
            Err(LinalgError::Underdetermined)
        );
        let half = solve_rational(&m(&[&[2]]), &ivec(&[1])).unwrap().unwrap();
        assert!(!half.is_integral());
    }

    #[test]
    fn quotient_examples() {
        let q = quotient_projection(&ivec(&[1, 0])).unwrap();
        assert_eq!(q, m(&[&[0, 1]]));
        let q = quotient_projection(&ivec(&[1, 1])).unwrap();
        assert_eq!(q.mul_vec(&ivec(&[1, 1])).unwrap(), ivec(&[0]));
        assert_eq!(invariant_factors(&q), vec![int(1)]);
        assert_eq!(
            quotient_projection(&ivec(&[2, 4])),
            Err(LinalgError::NotPrimitive(int(2)))
        );
        assert_eq!(
            quotient_projection(&ivec(&[1])),
            Err(LinalgError::DimensionTooSmall)
        );
    }

    #[test]
    fn kernel_of_square_relations() {
        // columns e1, e2, -e1, -e2
        let a = m(&[&[1, 0, -1, 0], &[0, 1, 0, -1]]);
        let k = kernel_basis(&a);
        assert_eq!(k.rows(), 2);
        for i in 0..k.rows() {
            assert!(a.mul_vec(k.row(i)).unwrap().iter().all(Zero::is_zero));
        }
        assert_eq!(invariant_factors(&k), vec![int(1), int(1)]);
    }

    #[test]
    fn lp_feasibility() {
        let g = vec![ivec(&[1, 0]), ivec(&[0, 1])];
        assert!(nonnegative_combination(&g, &ivec(&[2, 3])).is_some());
        assert!(nonnegative_combination(&g, &ivec(&[-1, 3])).is_none());
        let g = vec![ivec(&[1, 1]), ivec(&[1, -1])];
        let mu = nonnegative_combination(&g, &ivec(&[1, 0])).unwrap();
        assert_eq!(mu, vec![BigRational::new(int(1), int(2)); 2]);
        assert!(nonnegative_combination(&[], &ivec(&[0, 0])).is_some());
        assert!(nonnegative_combination(&[], &ivec(&[1, 0])).is_none());
    }

    fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = IntMatrix> {
        proptest::collection::vec(-6i64..=6, rows * cols)
            .prop_map(move |xs| IntMatrix::from_rows(xs.chunks(cols).map(ivec).collect()).unwrap())
    }

    proptest! {
        #[test]
        fn hnf_is_unimodular_transform(a in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| small_matrix(r, c))) {
            let (h, u) = hnf(&a);
            prop_assert_eq!(u.mul(&a).unwrap(), h.clone());
            prop_assert!(det(&u).unwrap().abs().is_one());
            // echelon shape with positive, dominating pivots
            let mut last: Option<usize> = None;
            for i in 0..h.rows() {
                match (0..h.cols()).find(|&j| !h.get(i, j).is_zero()) {
                    None => {
                        prop_assert!((i..h.rows()).all(|k| h.row(k).iter().all(Zero::is_zero)));
                        break;
                    }
                    Some(j) => {
                        prop_assert!(last.is_none_or(|l| j > l));
                        prop_assert!(h.get(i, j).is_positive());
                        for k in 0..i {
                            prop_assert!(!h.get(k, j).is_negative() && h.get(k, j) < h.get(i, j));
                        }
                        last = Some(j);
                    }
                }
            }
        }

        #[test]
        fn snf_diagonal_divisibility(a in (1usize..5, 1usize..5).prop_flat_map(|(r, c)| small_matrix(r, c))) {
            let (s, u, v) = snf(&a);
            prop_assert_eq!(u.mul(&a).unwrap().mul(&v).unwrap(), s.clone());
            prop_assert!(det(&u).unwrap().abs().is_one());
            prop_assert!(det(&v).unwrap().abs().is_one());
            for i in 0..s.rows() {
                for j in 0..s.cols() {
                    if i != j { prop_assert!(s.get(i, j).is_zero()); }
                }
            }
            let diag: Vec<BigInt> = (0..s.rows().min(s.cols())).map(|i| s.get(i, i).clone()).collect();
            for w in diag.windows(2) {
                prop_assert!(!w[0].is_negative());
                if w[0].is_zero() { prop_assert!(w[1].is_zero()); }
                else { prop_assert!((&w[1] % &w[0]).is_zero()); }
            }
            prop_assert_eq!(diag.iter().filter(|x| !x.is_zero()).count(), rank(&a));
        }

        #[test]
        fn det_matches_rational_elimination(a in (1usize..5).prop_flat_map(|n| small_matrix(n, n))) {
            let d = det(&a).unwrap();
            prop_assert_eq!(d.is_zero(), rank(&a) < a.rows());
            prop_assert_eq!(det(&a.transpose()).unwrap(), d);
        }

        #[test]
        fn kernel_annihilates(a in (1usize..4, 1usize..6).prop_flat_map(|(r, c)| small_matrix(r, c))) {
            let k = kernel_basis(&a);
            prop_assert_eq!(k.rows(), a.cols() - rank(&a));
            for i in 0..k.rows() {
                prop_assert!(a.mul_vec(k.row(i)).unwrap().iter().all(Zero::is_zero));
            }
            if k.rows() > 0 {
                prop_assert!(invariant_factors(&k).iter().all(One::is_one));
            }
        }
    }
}
