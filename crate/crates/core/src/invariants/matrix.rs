//! Square matrices of polynomials, generic matrices, and characteristic
//! coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactla::RingOps;
use crate::freering::{FreePoly, Letter, Word, LETTER_NAMES};

use super::poly::{CommPoly, Monomial, Polynomials, TruncatedPolynomials, Var};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MatrixPoly {
    n: usize,
    entries: Vec<CommPoly>,
}

impl MatrixPoly {
    pub fn zero(n: usize) -> Self {
        MatrixPoly { n, entries: vec![CommPoly::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        MatrixPoly::scalar(n, CommPoly::one())
    }

    pub fn scalar(n: usize, c: CommPoly) -> Self {
        let mut m = MatrixPoly::zero(n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn from_entries(n: usize, entries: Vec<CommPoly>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, got: entries.len() });
        }
        Ok(MatrixPoly { n, entries })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &CommPoly {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CommPoly) {
        self.entries[i * self.n + j] = v;
    }

    pub fn entries(&self) -> &[CommPoly] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<CommPoly>> {
        (0..self.n).map(|i| self.entries[i * self.n..(i + 1) * self.n].to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(CommPoly::is_zero)
    }

    pub fn trace(&self) -> CommPoly {
        let mut t = CommPoly::zero();
        for i in 0..self.n {
            t = &t + self.get(i, i);
        }
        t
    }

    pub fn add(&self, other: &MatrixPoly) -> MatrixPoly {
        MatrixPoly {
            n: self.n,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &MatrixPoly) -> MatrixPoly {
        MatrixPoly {
            n: self.n,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &CommPoly) -> MatrixPoly {
        MatrixPoly { n: self.n, entries: self.entries.iter().map(|e| e * c).collect() }
    }

    pub fn scale_int(&self, c: &BigInt) -> MatrixPoly {
        MatrixPoly { n: self.n, entries: self.entries.iter().map(|e| e.scale(c)).collect() }
    }

    pub fn mul(&self, other: &MatrixPoly) -> MatrixPoly {
        let n = self.n;
        let mut out = MatrixPoly::zero(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = CommPoly::zero();
                for k in 0..n {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// Entries as sparse rows keyed by (position, monomial), for rank work.
    pub fn flatten(&self) -> Vec<((usize, Monomial), BigInt)> {
        let mut out = Vec::new();
        for (pos, e) in self.entries.iter().enumerate() {
            for (m, c) in e.terms() {
                out.push(((pos, m.clone()), c.clone()));
            }
        }
        out
    }
}

impl fmt::Display for MatrixPoly {
    /// JSON-style nested array of polynomial strings.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = self
            .rows()
            .iter()
            .map(|r| r.iter().map(CommPoly::to_string).collect())
            .collect();
        write!(f, "{}", serde_json::to_string(&rows).map_err(|_| fmt::Error)?)
    }
}

/// The matrix whose `(i, j)` entry is the variable `x[s][i][j]`.
pub fn generic_matrix(letter: Letter, n: usize) -> Result<MatrixPoly> {
    if letter as usize >= LETTER_NAMES.len() {
        return Err(Error::UnknownLetter(letter as usize));
    }
    let mut m = MatrixPoly::zero(n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, CommPoly::var(Var::X { letter, row: i as u8, col: j as u8 }));
        }
    }
    Ok(m)
}

/// Image of a word under `x_s -> generic_matrix(s)`; the empty word maps
/// to the identity.
pub fn jn_word(w: &Word, n: usize) -> MatrixPoly {
    let mut acc = MatrixPoly::identity(n);
    for &l in w.letters() {
        acc = acc.mul(&generic_matrix(l, n).expect("letters are in range"));
    }
    acc
}

/// Image of a noncommutative polynomial under `x_s -> generic_matrix(s)`.
pub fn jn_eval(f: &FreePoly, n: usize) -> MatrixPoly {
    let mut acc = MatrixPoly::zero(n);
    for (w, c) in f.terms() {
        acc = acc.add(&jn_word(w, n).scale_int(c));
    }
    acc
}

/// Coefficients `c_0 = 1, c_1, ..., c_n` of `det(t I - A)` by the
/// division-free Berkowitz recursion over leading principal submatrices.
pub fn berkowitz<T: Clone, R: RingOps<T>>(a: &[Vec<T>], ring: &R) -> Vec<T> {
    let n = a.len();
    let mut c = vec![ring.one()];
    for k in 1..=n {
        let last = k - 1;
        // q = (1, -a_kk, -R C, -R M C, ..., -R M^(k-2) C)
        let mut q = Vec::with_capacity(k + 1);
        q.push(ring.one());
        q.push(ring.neg(&a[last][last]));
        let mut v: Vec<T> = (0..last).map(|i| a[i][last].clone()).collect();
        for _ in 0..last {
            let mut rv = ring.zero();
            for (j, vj) in v.iter().enumerate() {
                rv = ring.add(&rv, &ring.mul(&a[last][j], vj));
            }
            q.push(ring.neg(&rv));
            v = (0..last)
                .map(|i| {
                    let mut s = ring.zero();
                    for (j, vj) in v.iter().enumerate() {
                        s = ring.add(&s, &ring.mul(&a[i][j], vj));
                    }
                    s
                })
                .collect();
        }
        // new coefficients: lower triangular Toeplitz(q) times old ones
        let next: Vec<T> = (0..=k)
            .map(|i| {
                let mut s = ring.zero();
                for (j, cj) in c.iter().enumerate() {
                    if j <= i {
                        s = ring.add(&s, &ring.mul(&q[i - j], cj));
                    }
                }
                s
            })
            .collect();
        c = next;
    }
    c
}

fn alternate<T: Clone, R: RingOps<T>>(c: Vec<T>, ring: &R) -> Vec<T> {
    c.into_iter()
        .enumerate()
        .map(|(i, v)| if i % 2 == 1 { ring.neg(&v) } else { v })
        .collect()
}

/// `[e_0, e_1, ..., e_n]` with `det(t I - b) = Σ (-1)^i e_i(b) t^(n-i)`.
pub fn charpoly_coeffs(b: &MatrixPoly) -> Vec<CommPoly> {
    alternate(berkowitz(&b.rows(), &Polynomials), &Polynomials)
}

/// Same as [`charpoly_coeffs`] for an integer matrix.
pub fn charpoly_coeffs_int(b: &[Vec<BigInt>]) -> Vec<BigInt> {
    alternate(berkowitz(b, &crate::exactla::Integers), &crate::exactla::Integers)
}

/// The coefficient of `t_0^(n-|α|) Π t_k^(α_k)` in
/// `det(t_0 I + Σ t_k mats_k)`. Zero when `|α| > n`.
///
/// Computed as the `Π t_k^(α_k)` coefficient of `e_|α|(Σ t_k mats_k)`,
/// with every `t_k` truncated above `α_k`.
pub fn multidet_coeff(mats: &[MatrixPoly], alpha: &[u32], n: usize) -> Result<CommPoly> {
    if mats.len() != alpha.len() {
        return Err(Error::DimensionMismatch { expected: mats.len(), got: alpha.len() });
    }
    if let Some(m) = mats.iter().find(|m| m.order() != n) {
        return Err(Error::DimensionMismatch { expected: n, got: m.order() });
    }
    let weight: u32 = alpha.iter().sum();
    if weight as usize > n {
        return Ok(CommPoly::zero());
    }
    if weight == 0 {
        return Ok(CommPoly::one());
    }
    let mut pencil = MatrixPoly::zero(n);
    let mut bounds = Vec::new();
    let mut aux = Vec::new();
    for (k, (m, &e)) in mats.iter().zip(alpha).enumerate() {
        if e == 0 {
            continue;
        }
        let t = Var::Aux(k as u16 + 1);
        bounds.push((k as u16 + 1, e));
        aux.push((t, e));
        pencil = pencil.add(&m.scale(&CommPoly::var(t)));
    }
    let ring = TruncatedPolynomials { bounds };
    let coeffs = alternate(berkowitz(&pencil.rows(), &ring), &ring);
    Ok(coeffs[weight as usize].aux_coefficient(&Monomial::from_pairs(aux)))
}

/// Reference value of [`multidet_coeff`] by multilinearity of the
/// determinant in columns: sum over all ways of taking each column from
/// the identity or from one of the matrices, with the prescribed counts.
pub fn multidet_coeff_by_columns(mats: &[MatrixPoly], alpha: &[u32], n: usize) -> CommPoly {
    let weight: u32 = alpha.iter().sum();
    if weight as usize > n {
        return CommPoly::zero();
    }
    let mut counts: Vec<u32> = std::iter::once(n as u32 - weight).chain(alpha.iter().copied()).collect();
    let mut choice = vec![0usize; n];
    let mut total = CommPoly::zero();
    fn rec(
        col: usize,
        n: usize,
        counts: &mut [u32],
        choice: &mut [usize],
        mats: &[MatrixPoly],
        total: &mut CommPoly,
    ) {
        if col == n {
            let rows: Vec<Vec<CommPoly>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| match choice[j] {
                            0 if i == j => CommPoly::one(),
                            0 => CommPoly::zero(),
                            k => mats[k - 1].get(i, j).clone(),
                        })
                        .collect()
                })
                .collect();
            *total = &*total + &crate::exactla::det_cofactor(&rows, &Polynomials);
            return;
        }
        for k in 0..counts.len() {
            if counts[k] == 0 {
                continue;
            }
            counts[k] -= 1;
            choice[col] = k;
            rec(col + 1, n, counts, choice, mats, total);
            counts[k] += 1;
        }
    }
    rec(0, n, &mut counts, &mut choice, mats, &mut total);
    total
}

/// Entry-wise integer value of a matrix of polynomials.
pub fn eval_matrix(m: &MatrixPoly, value: &dyn Fn(Var) -> BigInt) -> Vec<Vec<BigInt>> {
    m.rows().iter().map(|r| r.iter().map(|p| p.eval(value)).collect()).collect()
}

pub fn int_matrix_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut s = BigInt::zero();
                    for (k, row) in b.iter().enumerate() {
                        s += &a[i][k] * &row[j];
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn int_identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{det_cofactor, Integers};

    fn x(letter: u8, row: u8, col: u8) -> CommPoly {
        CommPoly::var(Var::X { letter, row, col })
    }

    #[test]
    fn generic_matrices() {
        let m1 = generic_matrix(0, 1).unwrap();
        assert_eq!(m1.get(0, 0), &x(0, 0, 0));
        let m2 = generic_matrix(0, 2).unwrap();
        assert_eq!(m2.get(1, 0), &x(0, 1, 0));
        let y2 = generic_matrix(1, 2).unwrap();
        for e in m2.entries() {
            assert!(!y2.entries().contains(e));
        }
        assert!(generic_matrix(30, 2).is_err());
    }

    #[test]
    fn jn_examples() {
        let f = FreePoly::parse("x").unwrap();
        assert_eq!(jn_eval(&f, 2), generic_matrix(0, 2).unwrap());
        assert_eq!(jn_eval(&FreePoly::one(), 3), MatrixPoly::identity(3));
        let comm = jn_eval(&FreePoly::parse("x*y - y*x").unwrap(), 2);
        let (a, b) = (generic_matrix(0, 2).unwrap(), generic_matrix(1, 2).unwrap());
        // entry (0,0) of [A,B] is a01 b10 - b01 a10
        let expect = &(&x(0, 0, 1) * &x(1, 1, 0)) - &(&x(1, 0, 1) * &x(0, 1, 0));
        assert_eq!(comm.get(0, 0), &expect);
        assert_eq!(comm, a.mul(&b).sub(&b.mul(&a)));
        assert_eq!(comm.trace(), CommPoly::zero());
    }

    #[test]
    fn charpoly_examples() {
        for n in 1..=4usize {
            let e = charpoly_coeffs(&MatrixPoly::identity(n));
            for (i, c) in e.iter().enumerate() {
                let binom = num_integer::binomial(n as u64, i as u64);
                assert_eq!(c, &CommPoly::constant(BigInt::from(binom)));
            }
        }
        let z = generic_matrix(0, 2).unwrap();
        let e = charpoly_coeffs(&z);
        assert_eq!(e[1], &x(0, 0, 0) + &x(0, 1, 1));
        assert_eq!(e[2], &(&x(0, 0, 0) * &x(0, 1, 1)) - &(&x(0, 0, 1) * &x(0, 1, 0)));
        for n in 1..=3 {
            let z = generic_matrix(1, n).unwrap();
            let e = charpoly_coeffs(&z);
            assert_eq!(e[1], z.trace());
            assert_eq!(e[n], det_cofactor(&z.rows(), &Polynomials));
        }
    }

    #[test]
    fn charpoly_of_integer_matrix() {
        let a: Vec<Vec<BigInt>> = [[2, 1, 0], [1, 3, 1], [0, 1, 4]]
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        let e = charpoly_coeffs_int(&a);
        assert_eq!(e, vec![1.into(), 9.into(), 24.into(), 18.into()]);
        assert_eq!(e[3], det_cofactor(&a, &Integers));
    }

    #[test]
    fn multidet_examples() {
        let n = 2;
        let a = generic_matrix(0, n).unwrap();
        let b = generic_matrix(1, n).unwrap();
        let e = charpoly_coeffs(&a);
        for i in 0..=2u32 {
            assert_eq!(multidet_coeff(std::slice::from_ref(&a), &[i], n).unwrap(), e[i as usize]);
        }
        assert_eq!(multidet_coeff(std::slice::from_ref(&a), &[3], n).unwrap(), CommPoly::zero());
        assert_eq!(multidet_coeff(&[a.clone(), b.clone()], &[0, 0], n).unwrap(), CommPoly::one());
        // polarization of the 2x2 determinant: tr(a)tr(b) - tr(ab)
        let mixed = multidet_coeff(&[a.clone(), b.clone()], &[1, 1], n).unwrap();
        let expect = &(&a.trace() * &b.trace()) - &a.mul(&b).trace();
        assert_eq!(mixed, expect);
        assert_eq!(mixed, multidet_coeff_by_columns(&[a, b], &[1, 1], n));
    }

    #[test]
    fn multidet_agrees_with_column_expansion() {
        let n = 3;
        let mats: Vec<MatrixPoly> = ["x", "y", "xy"]
            .iter()
            .map(|s| jn_eval(&FreePoly::parse(s).unwrap(), n))
            .collect();
        for alpha in [[1, 1, 1], [2, 1, 0], [0, 0, 2], [1, 0, 1], [3, 0, 0]] {
            assert_eq!(
                multidet_coeff(&mats, &alpha, n).unwrap(),
                multidet_coeff_by_columns(&mats, &alpha, n),
                "{alpha:?}"
            );
        }
    }
}
