//! Exact linear algebra over the integers and rationals.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arithmetic of a commutative ring, passed explicitly so that the same
/// division-free algorithm can run over integers, polynomials, or quotient
/// rings of polynomials.
pub trait RingOps<T> {
    fn zero(&self) -> T;
    fn one(&self) -> T;
    fn add(&self, a: &T, b: &T) -> T;
    fn mul(&self, a: &T, b: &T) -> T;
    fn neg(&self, a: &T) -> T;

    fn sub(&self, a: &T, b: &T) -> T {
        self.add(a, &self.neg(b))
    }
}

/// The ring of integers.
#[derive(Debug, Clone, Copy, Default)]
pub struct Integers;

impl RingOps<BigInt> for Integers {
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
}

/// Determinant by Laplace expansion along the first row. Exponential in
/// the order; meant for small matrices and as a reference.
pub fn det_cofactor<T: Clone, R: RingOps<T>>(m: &[Vec<T>], ring: &R) -> T {
    let n = m.len();
    if n == 0 {
        return ring.one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = ring.zero();
    for j in 0..n {
        let minor: Vec<Vec<T>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = ring.mul(&m[0][j], &det_cofactor(&minor, ring));
        acc = if j % 2 == 0 { ring.add(&acc, &term) } else { ring.sub(&acc, &term) };
    }
    acc
}

/// Dense integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = ExactMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, got: row.len() });
            }
            data.extend(row);
        }
        Ok(ExactMatrix { rows: nrows, cols, data })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect())
    }

    /// Builds a matrix from rows given as sparse `(key, value)` lists; the
    /// columns are the union of all keys in ascending order.
    pub fn from_sparse_rows<K: Ord + Clone>(rows: &[Vec<(K, BigInt)>]) -> Self {
        let mut keys: BTreeMap<K, usize> = BTreeMap::new();
        for row in rows {
            for (k, _) in row {
                keys.entry(k.clone()).or_insert(0);
            }
        }
        for (i, slot) in keys.values_mut().enumerate() {
            *slot = i;
        }
        let mut m = ExactMatrix::zeros(rows.len(), keys.len());
        for (i, row) in rows.iter().enumerate() {
            for (k, v) in row {
                let j = keys[k];
                let cur = m.get(i, j).clone();
                m.set(i, j, cur + v);
            }
        }
        m
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

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Rows of `self` followed by rows of `other`.
    pub fn stack(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.rows > 0 && other.rows > 0 && self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: other.cols });
        }
        let cols = if self.rows > 0 { self.cols } else { other.cols };
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(ExactMatrix { rows: self.rows + other.rows, cols, data })
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

    /// Rank over the rationals, by fraction-free elimination.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
                continue;
            };
            a.swap_rows(p, r);
            let pivot = a.get(r, c).clone();
            for i in r + 1..a.rows {
                let lead = a.get(i, c).clone();
                for j in c + 1..a.cols {
                    let v = &pivot * a.get(i, j) - &lead * a.get(r, j);
                    debug_assert!((&v % &prev).is_zero());
                    a.set(i, j, v / &prev);
                }
                a.set(i, c, BigInt::zero());
            }
            prev = pivot;
            r += 1;
        }
        r
    }

    /// Nonzero invariant factors `d_1 | d_2 | ...` of the Smith normal form,
    /// all positive.
    pub fn smith_normal_form(&self) -> Vec<BigInt> {
        let mut a = self.clone();
        let mut out = Vec::new();
        let limit = a.rows.min(a.cols);
        for t in 0..limit {
            // smallest nonzero entry of the remaining block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..a.rows {
                for j in t..a.cols {
                    let v = a.get(i, j);
                    if !v.is_zero() && best.is_none_or(|(bi, bj)| v.abs() < a.get(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            a.swap_rows(t, pi);
            a.swap_cols(t, pj);
            loop {
                let mut changed = false;
                // clear column t
                for i in t + 1..a.rows {
                    if a.get(i, t).is_zero() {
                        continue;
                    }
                    let q = a.get(i, t).div_floor(a.get(t, t));
                    for j in t..a.cols {
                        let v = a.get(i, j) - &q * a.get(t, j);
                        a.set(i, j, v);
                    }
                    if !a.get(i, t).is_zero() {
                        a.swap_rows(t, i);
                        changed = true;
                    }
                }
                // clear row t
                for j in t + 1..a.cols {
                    if a.get(t, j).is_zero() {
                        continue;
                    }
                    let q = a.get(t, j).div_floor(a.get(t, t));
                    for i in t..a.rows {
                        let v = a.get(i, j) - &q * a.get(i, t);
                        a.set(i, j, v);
                    }
                    if !a.get(t, j).is_zero() {
                        a.swap_cols(t, j);
                        changed = true;
                    }
                }
                if changed {
                    continue;
                }
                // the pivot must divide the whole remaining block
                let pivot = a.get(t, t).clone();
                let bad = (t + 1..a.rows).find(|&i| {
                    (t + 1..a.cols).any(|j| !(a.get(i, j) % &pivot).is_zero())
                });
                match bad {
                    Some(i) => {
                        for j in t..a.cols {
                            let v = a.get(t, j) + a.get(i, j);
                            a.set(t, j, v);
                        }
                    }
                    None => break,
                }
            }
            out.push(a.get(t, t).abs());
        }
        out
    }

    /// Multiplies two matrices.
    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let mut out = ExactMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(BigInt::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Decides whether `target` is a rational combination of `vectors`. When it
/// is, returns coefficients `c` with `Σ c_i vectors_i = target`.
pub fn in_span(vectors: &[Vec<BigInt>], target: &[BigInt]) -> Result<Option<Vec<BigRational>>> {
    let dim = target.len();
    for v in vectors {
        if v.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: v.len() });
        }
    }
    let k = vectors.len();
    // augmented system: rows are coordinates, columns the vectors then target
    let mut a: Vec<Vec<BigRational>> = (0..dim)
        .map(|i| {
            vectors
                .iter()
                .map(|v| BigRational::from_integer(v[i].clone()))
                .chain(std::iter::once(BigRational::from_integer(target[i].clone())))
                .collect()
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..dim).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let inv = a[r][c].recip();
        for v in a[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..dim {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                let pivot_row = a[r].clone();
                for (x, p) in a[i].iter_mut().zip(&pivot_row).skip(c).take(k + 1 - c) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if (r..dim).any(|i| !a[i][k].is_zero()) {
        return Ok(None);
    }
    let mut coeffs = vec![BigRational::zero(); k];
    for (row, &c) in pivots.iter().enumerate() {
        coeffs[c] = a[row][k].clone();
    }
    Ok(Some(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> ExactMatrix {
        ExactMatrix::from_i64(rows).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(ExactMatrix::identity(3).rank(), 3);
        assert_eq!(m(&[vec![1, 2], vec![2, 4]]).rank(), 1);
        assert_eq!(m(&[vec![0, 0, 1], vec![0, 0, 2], vec![1, 0, 0]]).rank(), 2);
        assert_eq!(ExactMatrix::zeros(0, 4).rank(), 0);
        assert_eq!(m(&[vec![2, 4, 6], vec![1, 2, 4], vec![3, 6, 10]]).rank(), 2);
    }

    #[test]
    fn smith_examples() {
        let one = BigInt::one();
        assert_eq!(ExactMatrix::identity(3).smith_normal_form(), vec![one.clone(); 3]);
        assert_eq!(m(&[vec![2, 0], vec![0, 4]]).smith_normal_form(), ints(&[2, 4]));
        assert_eq!(m(&[vec![4, 0], vec![0, 6]]).smith_normal_form(), ints(&[2, 12]));
        // span of xy - yx inside Z.xy + Z.yx
        assert_eq!(m(&[vec![1, -1]]).smith_normal_form(), ints(&[1]));
        assert_eq!(m(&[vec![0, 0], vec![0, 0]]).smith_normal_form(), Vec::<BigInt>::new());
    }

    #[test]
    fn in_span_examples() {
        let vs = vec![ints(&[1, 0]), ints(&[1, 1])];
        let c = in_span(&vs, &ints(&[1, 1])).unwrap().unwrap();
        assert_eq!(c, vec![BigRational::zero(), BigRational::one()]);
        assert!(in_span(&[ints(&[1, 0])], &ints(&[0, 1])).unwrap().is_none());
        assert!(in_span(&[ints(&[1, 0, 0])], &ints(&[0, 1])).is_err());
        let c = in_span(&[ints(&[2, 4])], &ints(&[1, 2])).unwrap().unwrap();
        assert_eq!(c, vec![BigRational::new(1.into(), 2.into())]);
        assert_eq!(in_span(&[], &ints(&[0, 0])).unwrap(), Some(vec![]));
    }

    #[test]
    fn cofactor_determinant() {
        let a = m(&[vec![2, 1, 0], vec![1, 3, 1], vec![0, 1, 4]]);
        assert_eq!(det_cofactor(&a.to_rows(), &Integers), BigInt::from(18));
        assert_eq!(det_cofactor::<BigInt, _>(&[], &Integers), BigInt::one());
    }

    #[test]
    fn sparse_rows() {
        let rows = vec![vec![("b", BigInt::from(2))], vec![("a", BigInt::from(1)), ("b", BigInt::from(3))]];
        let mat = ExactMatrix::from_sparse_rows(&rows);
        assert_eq!(mat, m(&[vec![0, 2], vec![1, 3]]));
    }
}
