//! Sparse commutative polynomials over the integers.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::exactla::RingOps;
use crate::freering::{letter_name, Letter};

/// A polynomial variable: an auxiliary parameter `t[k]`, or the `(row,
/// col)` entry of the generic matrix of a letter. Auxiliary parameters sort
/// first, entries by (letter, row, col). Rows and columns are 0-based here
/// and printed 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Aux(u16),
    X { letter: Letter, row: u8, col: u8 },
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Aux(k) => write!(f, "t[{k}]"),
            Var::X { letter, row, col } => {
                write!(f, "x[{}][{}][{}]", letter_name(*letter), row + 1, col + 1)
            }
        }
    }
}

/// Product of variables with positive exponents, sorted by variable.
/// Ordered graded reverse lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(vec![(v, 1)])
    }

    pub fn from_pairs(mut pairs: Vec<(Var, u32)>) -> Self {
        pairs.retain(|(_, e)| *e > 0);
        pairs.sort_by_key(|(v, _)| *v);
        let mut out: Vec<(Var, u32)> = Vec::with_capacity(pairs.len());
        for (v, e) in pairs {
            match out.last_mut() {
                Some((w, f)) if *w == v => *f += e,
                _ => out.push((v, e)),
            }
        }
        Monomial(out)
    }

    pub fn vars(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0
            .binary_search_by(|(w, _)| w.cmp(&v))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Splits into the auxiliary part and the matrix-entry part.
    pub fn split_aux(&self) -> (Monomial, Monomial) {
        let cut = self.0.iter().position(|(v, _)| !matches!(v, Var::Aux(_))).unwrap_or(self.0.len());
        (Monomial(self.0[..cut].to_vec()), Monomial(self.0[cut..].to_vec()))
    }

    /// Exponent of each letter summed over its matrix entries.
    pub fn letter_degrees(&self, letters: usize) -> Vec<u32> {
        let mut d = vec![0u32; letters];
        for (v, e) in &self.0 {
            if let Var::X { letter, .. } = v {
                if (*letter as usize) < letters {
                    d[*letter as usize] += e;
                }
            }
        }
        d
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let by_degree = self.degree().cmp(&other.degree());
        if by_degree != Ordering::Equal {
            return by_degree;
        }
        // reverse lexicographic: the last variable where the exponents
        // differ decides, and a smaller exponent there is the larger monomial
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (a.len(), b.len());
        while i > 0 && j > 0 {
            let (va, ea) = a[i - 1];
            let (vb, eb) = b[j - 1];
            match va.cmp(&vb) {
                Ordering::Equal => {
                    if ea != eb {
                        return eb.cmp(&ea);
                    }
                    i -= 1;
                    j -= 1;
                }
                Ordering::Greater => return Ordering::Less,
                Ordering::Less => return Ordering::Greater,
            }
        }
        match (i > 0, j > 0) {
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => Ordering::Equal,
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, e)| if *e == 1 { v.to_string() } else { format!("{v}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CommPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl CommPoly {
    pub fn zero() -> Self {
        CommPoly::default()
    }

    pub fn one() -> Self {
        CommPoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        CommPoly::monomial(Monomial::one(), c)
    }

    pub fn var(v: Var) -> Self {
        CommPoly::monomial(Monomial::var(v), BigInt::one())
    }

    pub fn monomial(m: Monomial, c: BigInt) -> Self {
        let mut p = CommPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    #[allow(clippy::len_without_is_empty)] // `is_zero` plays that role
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn scale(&self, c: &BigInt) -> CommPoly {
        if c.is_zero() {
            return CommPoly::zero();
        }
        CommPoly { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> CommPoly {
        let mut acc = CommPoly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Product that discards every term whose exponent of some auxiliary
    /// parameter exceeds its bound; parameters without a bound are
    /// unrestricted. This is multiplication in the quotient by `t_k^(b_k+1)`.
    pub fn mul_truncated(&self, other: &CommPoly, bounds: &[(u16, u32)]) -> CommPoly {
        let mut out = CommPoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let m = a.mul(b);
                if within_bounds(&m, bounds) {
                    out.add_term(m, ca * cb);
                }
            }
        }
        out
    }

    /// Terms whose auxiliary part is exactly `aux`, with that part removed.
    pub fn aux_coefficient(&self, aux: &Monomial) -> CommPoly {
        let mut out = CommPoly::zero();
        for (m, c) in &self.terms {
            let (a, rest) = m.split_aux();
            if &a == aux {
                out.add_term(rest, c.clone());
            }
        }
        out
    }

    /// Evaluates at integer values of all variables.
    pub fn eval(&self, value: &dyn Fn(Var) -> BigInt) -> BigInt {
        let mut total = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.vars() {
                t *= num_traits::pow(value(*v), *e as usize);
            }
            total += t;
        }
        total
    }

    /// True when all terms have the same letter degrees, which are returned.
    pub fn letter_homogeneous(&self, letters: usize) -> Option<Vec<u32>> {
        let mut it = self.terms.keys().map(|m| m.letter_degrees(letters));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn sparse_row(&self) -> Vec<(Monomial, BigInt)> {
        self.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect()
    }
}

fn within_bounds(m: &Monomial, bounds: &[(u16, u32)]) -> bool {
    m.vars().iter().all(|(v, e)| match v {
        Var::Aux(k) => bounds.iter().find(|(b, _)| b == k).is_none_or(|(_, max)| e <= max),
        Var::X { .. } => true,
    })
}

impl fmt::Display for CommPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let abs = c.abs();
            if m.vars().is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl Add for &CommPoly {
    type Output = CommPoly;
    fn add(self, rhs: &CommPoly) -> CommPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &CommPoly {
    type Output = CommPoly;
    fn sub(self, rhs: &CommPoly) -> CommPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl Neg for &CommPoly {
    type Output = CommPoly;
    fn neg(self) -> CommPoly {
        CommPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Mul for &CommPoly {
    type Output = CommPoly;
    fn mul(self, rhs: &CommPoly) -> CommPoly {
        let mut out = CommPoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a.mul(b), ca * cb);
            }
        }
        out
    }
}

/// Polynomial ring arithmetic.
#[derive(Debug, Clone, Copy, Default)]
pub struct Polynomials;

impl RingOps<CommPoly> for Polynomials {
    fn zero(&self) -> CommPoly {
        CommPoly::zero()
    }
    fn one(&self) -> CommPoly {
        CommPoly::one()
    }
    fn add(&self, a: &CommPoly, b: &CommPoly) -> CommPoly {
        a + b
    }
    fn mul(&self, a: &CommPoly, b: &CommPoly) -> CommPoly {
        a * b
    }
    fn neg(&self, a: &CommPoly) -> CommPoly {
        -a
    }
    fn sub(&self, a: &CommPoly, b: &CommPoly) -> CommPoly {
        a - b
    }
}

/// Polynomials modulo `t_k^(b_k+1)` for the listed auxiliary parameters.
#[derive(Debug, Clone, Default)]
pub struct TruncatedPolynomials {
    pub bounds: Vec<(u16, u32)>,
}

impl RingOps<CommPoly> for TruncatedPolynomials {
    fn zero(&self) -> CommPoly {
        CommPoly::zero()
    }
    fn one(&self) -> CommPoly {
        CommPoly::one()
    }
    fn add(&self, a: &CommPoly, b: &CommPoly) -> CommPoly {
        a + b
    }
    fn mul(&self, a: &CommPoly, b: &CommPoly) -> CommPoly {
        a.mul_truncated(b, &self.bounds)
    }
    fn neg(&self, a: &CommPoly) -> CommPoly {
        -a
    }
    fn sub(&self, a: &CommPoly, b: &CommPoly) -> CommPoly {
        a - b
    }
}
