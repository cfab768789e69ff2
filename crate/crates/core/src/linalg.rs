//! Dense arbitrary-precision integer matrices: Hermite normal form,
//! fraction-free determinants, Gram matrices and exact integral LLL.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("basis is not of full row rank or Gram is not positive definite (row {0})")]
    RankDeficient(usize),
    #[error("Gram entry ({row},{col}) = {value} is not divisible by {scale}")]
    NotDivisible {
        row: usize,
        col: usize,
        value: BigInt,
        scale: BigInt,
    },
}

/// Row-major dense matrix over the integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

/// Integer vector; lattice vectors and lifted codewords.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct IntVector(Vec<BigInt>);

impl IntVector {
    pub fn new(entries: Vec<BigInt>) -> Self {
        IntVector(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        IntVector(vec![BigInt::zero(); dim])
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        IntVector(entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    /// The `i`-th standard basis vector scaled by `scale`.
    pub fn unit(dim: usize, i: usize, scale: impl Into<BigInt>) -> Self {
        let mut v = Self::zeros(dim);
        v.0[i] = scale.into();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn entries_mut(&mut self) -> &mut [BigInt] {
        &mut self.0
    }

    pub fn into_entries(self) -> Vec<BigInt> {
        self.0
    }

    pub fn dot(&self, other: &IntVector) -> BigInt {
        dot(&self.0, &other.0)
    }

    pub fn norm(&self) -> BigInt {
        self.dot(self)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

impl fmt::Debug for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter().map(|x| x.to_string())).finish()
    }
}

impl From<Vec<BigInt>> for IntVector {
    fn from(v: Vec<BigInt>) -> Self {
        IntVector(v)
    }
}

pub(crate) fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
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
        Self::from_fn(n, n, |i, j| if i == j { BigInt::one() } else { BigInt::zero() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    /// Builds a matrix from equal-length rows.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != cols) {
            return Err(LinalgError::Shape(format!(
                "row {bad} has length {} but row 0 has length {cols}",
                rows[bad].len()
            )));
        }
        let data = rows.iter().flatten().cloned().map(Into::into).collect();
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix from vectors of equal dimension.
    pub fn from_vectors(vectors: &[IntVector]) -> Result<Self, LinalgError> {
        let rows: Vec<Vec<BigInt>> = vectors.iter().map(|v| v.0.clone()).collect();
        Self::from_rows(&rows)
    }

    /// Panics on ragged input; intended for literal tables.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let owned: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        Self::from_rows(&owned).expect("ragged literal matrix")
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

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [BigInt] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vector(&self, i: usize) -> IntVector {
        IntVector(self.row(i).to_vec())
    }

    pub fn row_vectors(&self) -> Vec<IntVector> {
        (0..self.rows).map(|i| self.row_vector(i)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Entries as machine integers, if they all fit.
    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(ToPrimitive::to_i64).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn matmul(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for (l, a) in self.row(i).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(l, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `self · selfᵀ`, the matrix of row inner products.
    pub fn row_gram(&self) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows, self.rows);
        for i in 0..self.rows {
            for j in 0..=i {
                let v = dot(self.row(i), self.row(j));
                out.set(j, i, v.clone());
                out.set(i, j, v);
            }
        }
        out
    }

    pub fn scaled(&self, factor: &BigInt) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * factor).collect(),
        }
    }

    pub fn neg(&self) -> IntMatrix {
        self.scaled(&BigInt::from(-1))
    }

    pub fn add(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(LinalgError::Shape("addition of differently shaped matrices".into()));
        }
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if self.cols != other.cols {
            return Err(LinalgError::Shape(format!(
                "vstack of {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &IntMatrix) -> Result<IntMatrix, LinalgError> {
        if self.rows != other.rows {
            return Err(LinalgError::Shape(format!(
                "hstack of {} and {} rows",
                self.rows, other.rows
            )));
        }
        Ok(Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        }))
    }

    /// Entries reduced into `[0, modulus)`.
    pub fn reduce_mod(&self, modulus: &BigInt) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.mod_floor(modulus)).collect(),
        }
    }

    pub fn is_zero_mod(&self, modulus: &BigInt) -> bool {
        self.data.iter().all(|x| x.mod_floor(modulus).is_zero())
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    /// Scalar multiple of the identity, if `self` is one.
    pub fn scalar_identity_value(&self) -> Option<BigInt> {
        if !self.is_square() || self.rows == 0 {
            return None;
        }
        let c = self.get(0, 0).clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let expect_zero = i != j;
                let x = self.get(i, j);
                if (expect_zero && !x.is_zero()) || (!expect_zero && *x != c) {
                    return None;
                }
            }
        }
        Some(c)
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        self.matmul(rhs).expect("matrix dimensions must agree")
    }
}

fn axpy_row(target: &mut [BigInt], q: &BigInt, source: &[BigInt]) {
    // target -= q * source
    for (t, s) in target.iter_mut().zip(source) {
        if !s.is_zero() {
            *t -= q * s;
        }
    }
}

/// Row-style Hermite normal form of the row lattice of `m`.
///
/// Returns the nonzero rows of the echelon form (pivots positive, entries
/// above each pivot reduced into `[0, pivot)`) together with the rank.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, usize) {
    let mut a = m.to_rows();
    let cols = m.cols();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        // Euclid on column c across rows r.. by repeatedly pivoting on the
        // smallest nonzero entry.
        loop {
            let pivot = (r..a.len())
                .filter(|&i| !a[i][c].is_zero())
                .min_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()));
            let Some(p) = pivot else { break };
            a.swap(r, p);
            let mut done = true;
            for i in r + 1..a.len() {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                let (head, tail) = a.split_at_mut(i);
                axpy_row(&mut tail[0], &q, &head[r]);
                if !a[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            for x in a[r].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..r {
            let q = a[i][c].div_floor(&a[r][c]);
            if !q.is_zero() {
                let (head, tail) = a.split_at_mut(r);
                axpy_row(&mut head[i], &q, &tail[0]);
            }
        }
        r += 1;
    }
    a.truncate(r);
    let h = if r == 0 {
        IntMatrix::zeros(0, cols)
    } else {
        IntMatrix::from_rows(&a).expect("rows share a length")
    };
    (h, r)
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det(m: &IntMatrix) -> Result<BigInt, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut a = m.to_rows();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    Ok(sign * &a[n - 1][n - 1])
}

/// Gram matrix `B·Bᵀ / scale`, failing if any entry is not divisible.
pub fn gram(b: &IntMatrix, scale: &BigInt) -> Result<IntMatrix, LinalgError> {
    let raw = b.row_gram();
    for i in 0..raw.rows() {
        for j in 0..raw.cols() {
            if !raw.get(i, j).is_multiple_of(scale) {
                return Err(LinalgError::NotDivisible {
                    row: i,
                    col: j,
                    value: raw.get(i, j).clone(),
                    scale: scale.clone(),
                });
            }
        }
    }
    Ok(IntMatrix {
        rows: raw.rows,
        cols: raw.cols,
        data: raw.data.into_iter().map(|x| x / scale).collect(),
    })
}

/// Exact LLL reduction (δ = 3/4) of a basis given by its rows.
///
/// Returns `(B', U)` with `B' = U·B` and `U` unimodular.
pub fn lll_reduce(b: &IntMatrix) -> Result<(IntMatrix, IntMatrix), LinalgError> {
    let (_, u) = lll_gram(&b.row_gram())?;
    let reduced = u.matmul(b)?;
    Ok((reduced, u))
}

/// Integral LLL on a positive definite Gram matrix.
///
/// Works entirely with the integers `d_i` (Gram determinants of leading
/// sub-bases) and `λ_ij = d_j μ_ij`, so no rationals are ever formed.
/// Returns `(U·G·Uᵀ, U)`.
pub fn lll_gram(g: &IntMatrix) -> Result<(IntMatrix, IntMatrix), LinalgError> {
    if !g.is_square() {
        return Err(LinalgError::NotSquare {
            rows: g.rows(),
            cols: g.cols(),
        });
    }
    let n = g.rows();
    let mut reducer = IntegralLll::new(g.clone());
    if n > 0 {
        reducer.run()?;
    }
    Ok((reducer.gram, reducer.transform))
}

/// State of the integral LLL; indices are 1-based internally, slot 0 of
/// `d` holds `d_0 = 1`.
struct IntegralLll {
    n: usize,
    gram: IntMatrix,
    transform: IntMatrix,
    d: Vec<BigInt>,
    lambda: Vec<Vec<BigInt>>,
}

impl IntegralLll {
    fn new(gram: IntMatrix) -> Self {
        let n = gram.rows();
        IntegralLll {
            n,
            transform: IntMatrix::identity(n),
            gram,
            d: vec![BigInt::zero(); n + 1],
            lambda: vec![vec![BigInt::zero(); n + 1]; n + 1],
        }
    }

    fn g(&self, i: usize, j: usize) -> &BigInt {
        self.gram.get(i - 1, j - 1)
    }

    fn run(&mut self) -> Result<(), LinalgError> {
        let n = self.n;
        self.d[0] = BigInt::one();
        self.d[1] = self.g(1, 1).clone();
        if !self.d[1].is_positive() {
            return Err(LinalgError::RankDeficient(0));
        }
        let mut k = 2;
        let mut k_max = 1;
        while k <= n {
            if k > k_max {
                k_max = k;
                self.orthogonalize(k)?;
            }
            loop {
                self.size_reduce(k, k - 1);
                let lam = &self.lambda[k][k - 1];
                let lhs = BigInt::from(4) * &self.d[k] * &self.d[k - 2];
                let rhs = BigInt::from(3) * &self.d[k - 1] * &self.d[k - 1] - BigInt::from(4) * lam * lam;
                if lhs < rhs {
                    self.swap(k, k_max);
                    k = (k - 1).max(2);
                } else {
                    break;
                }
            }
            for l in (1..k - 1).rev() {
                self.size_reduce(k, l);
            }
            k += 1;
        }
        Ok(())
    }

    fn orthogonalize(&mut self, k: usize) -> Result<(), LinalgError> {
        for j in 1..=k {
            let mut u = self.g(k, j).clone();
            for i in 1..j {
                u = (&self.d[i] * &u - &self.lambda[k][i] * &self.lambda[j][i]) / &self.d[i - 1];
            }
            if j < k {
                self.lambda[k][j] = u;
            } else {
                if !u.is_positive() {
                    return Err(LinalgError::RankDeficient(k - 1));
                }
                self.d[k] = u;
            }
        }
        Ok(())
    }

    /// b_k ← b_k − q·b_l with q the nearest integer to λ_kl / d_l.
    fn size_reduce(&mut self, k: usize, l: usize) {
        let two_lambda: BigInt = &self.lambda[k][l] * 2u32;
        if two_lambda.abs() <= self.d[l] {
            return;
        }
        let q = round_div(&self.lambda[k][l], &self.d[l]);
        let (rk, rl) = (k - 1, l - 1);
        // Gram: row then column update.
        let row_l = self.gram.row(rl).to_vec();
        axpy_row(self.gram.row_mut(rk), &q, &row_l);
        for i in 0..self.n {
            let v = self.gram.get(i, rk) - &q * self.gram.get(i, rl);
            self.gram.set(i, rk, v);
        }
        let t_l = self.transform.row(rl).to_vec();
        axpy_row(self.transform.row_mut(rk), &q, &t_l);

        self.lambda[k][l] = &self.lambda[k][l] - &q * &self.d[l];
        for i in 1..l {
            let v = &self.lambda[k][i] - &q * &self.lambda[l][i];
            self.lambda[k][i] = v;
        }
    }

    fn swap(&mut self, k: usize, k_max: usize) {
        let (rk, rk1) = (k - 1, k - 2);
        swap_rows(&mut self.gram, rk, rk1);
        let n = self.n;
        for i in 0..n {
            let a = self.gram.get(i, rk).clone();
            let b = self.gram.get(i, rk1).clone();
            self.gram.set(i, rk, b);
            self.gram.set(i, rk1, a);
        }
        swap_rows(&mut self.transform, rk, rk1);
        for j in 1..k - 1 {
            let tmp = std::mem::take(&mut self.lambda[k][j]);
            self.lambda[k][j] = std::mem::replace(&mut self.lambda[k - 1][j], tmp);
        }
        let lam = self.lambda[k][k - 1].clone();
        let b = (&self.d[k - 2] * &self.d[k] + &lam * &lam) / &self.d[k - 1];
        for i in k + 1..=k_max {
            let t = self.lambda[i][k].clone();
            self.lambda[i][k] = (&self.d[k] * &self.lambda[i][k - 1] - &lam * &t) / &self.d[k - 1];
            self.lambda[i][k - 1] = (&b * &t + &lam * &self.lambda[i][k]) / &self.d[k];
        }
        self.d[k - 1] = b;
    }
}

fn swap_rows(m: &mut IntMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    let cols = m.cols;
    for j in 0..cols {
        m.data.swap(a * cols + j, b * cols + j);
    }
}

/// Nearest integer to `num / den` (den > 0), ties rounded up.
fn round_div(num: &BigInt, den: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (num * &two + den).div_floor(&(den * &two))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows)
    }

    /// Exact rational Gram–Schmidt check of the LLL conditions.
    fn is_lll_reduced(g: &IntMatrix) -> bool {
        let n = g.rows();
        let q = |x: &BigInt| BigRational::from_integer(x.clone());
        let mut mu = vec![vec![BigRational::zero(); n]; n];
        let mut bstar = vec![BigRational::zero(); n];
        for i in 0..n {
            for j in 0..i {
                let mut v = q(g.get(i, j));
                for k in 0..j {
                    v -= &mu[j][k] * &mu[i][k] * &bstar[k];
                }
                mu[i][j] = v / &bstar[j];
            }
            let mut v = q(g.get(i, i));
            for k in 0..i {
                v -= &mu[i][k] * &mu[i][k] * &bstar[k];
            }
            bstar[i] = v;
        }
        let half = BigRational::new(1.into(), 2.into());
        let delta = BigRational::new(3.into(), 4.into());
        for i in 0..n {
            for j in 0..i {
                if mu[i][j].abs() > half {
                    return false;
                }
            }
            if i > 0 && bstar[i] < (&delta - &mu[i][i - 1] * &mu[i][i - 1]) * &bstar[i - 1] {
                return false;
            }
        }
        true
    }

    #[test]
    fn hnf_of_diagonal_is_itself() {
        let a = m(&[&[2, 0], &[0, 2]]);
        assert_eq!(hnf(&a), (a.clone(), 2));
    }

    #[test]
    fn hnf_absorbs_sublattice() {
        let id = IntMatrix::identity(24);
        let stacked = id.vstack(&id.scaled(&4.into())).unwrap();
        assert_eq!(hnf(&stacked), (id, 24));
    }

    #[test]
    fn hnf_reduces_above_pivots() {
        let (h, r) = hnf(&m(&[&[3, 5], &[0, 2], &[6, 0]]));
        assert_eq!(r, 2);
        // lattice {(x,y)}: contains (3,5),(0,2),(6,0) -> (3,1),(0,2)
        assert_eq!(h, m(&[&[3, 1], &[0, 2]]));
        assert_eq!(hnf(&h), (h.clone(), 2));
    }

    #[test]
    fn hnf_rank_deficient() {
        let (h, r) = hnf(&m(&[&[1, 2, 3], &[2, 4, 6]]));
        assert_eq!(r, 1);
        assert_eq!(h, m(&[&[1, 2, 3]]));
    }

    #[test]
    fn det_small_cases() {
        assert_eq!(det(&IntMatrix::identity(4)).unwrap(), BigInt::one());
        assert_eq!(det(&m(&[&[0, 1], &[1, 0]])).unwrap(), BigInt::from(-1));
        assert_eq!(det(&m(&[&[1, 2], &[2, 4]])).unwrap(), BigInt::zero());
        assert_eq!(det(&m(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]])).unwrap(), BigInt::from(4));
        assert!(matches!(det(&m(&[&[1, 2, 3]])), Err(LinalgError::NotSquare { .. })));
    }

    #[test]
    fn gram_divides_by_scale() {
        let b = IntMatrix::identity(4).scaled(&2.into());
        assert_eq!(gram(&b, &4.into()).unwrap(), IntMatrix::identity(4));
        assert!(matches!(
            gram(&IntMatrix::identity(2), &4.into()),
            Err(LinalgError::NotDivisible { .. })
        ));
    }

    #[test]
    fn lll_on_identity_is_trivial() {
        let (b, u) = lll_reduce(&IntMatrix::identity(4)).unwrap();
        assert_eq!(b, IntMatrix::identity(4));
        assert_eq!(u, IntMatrix::identity(4));
    }

    #[test]
    fn lll_recovers_scrambled_identity() {
        let scramble = m(&[
            &[1, 3, -2, 5],
            &[0, 1, 4, -7],
            &[0, 0, 1, 9],
            &[0, 0, 0, 1],
        ]);
        let mixed = &m(&[&[1, 0, 0, 0], &[2, 1, 0, 0], &[-3, 5, 1, 0], &[4, -1, 6, 1]]) * &scramble;
        let (b, u) = lll_reduce(&mixed).unwrap();
        assert_eq!(b, &u * &mixed);
        assert_eq!(det(&u).unwrap().abs(), BigInt::one());
        assert_eq!(b.row_gram(), IntMatrix::identity(4));
    }

    #[test]
    fn lll_rejects_dependent_rows() {
        assert!(matches!(
            lll_reduce(&m(&[&[1, 2], &[2, 4]])),
            Err(LinalgError::RankDeficient(_))
        ));
    }

    #[test]
    fn lll_output_satisfies_conditions() {
        let b = m(&[
            &[1, 0, 0, 0, 12345],
            &[0, 1, 0, 0, 23456],
            &[0, 0, 1, 0, 34567],
            &[0, 0, 0, 1, 45678],
            &[0, 0, 0, 0, 99991],
        ]);
        let (r, u) = lll_reduce(&b).unwrap();
        assert!(is_lll_reduced(&r.row_gram()));
        assert_eq!(det(&u).unwrap().abs(), BigInt::one());
        assert_eq!(hnf(&r), hnf(&b));
    }
}
