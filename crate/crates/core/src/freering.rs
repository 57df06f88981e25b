//! Words over a finite ordered alphabet, their cyclic classes, and
//! noncommutative integer polynomials.
//!
//! Letters are small indices. Index `i` prints as the `i`-th character of
//! [`LETTER_NAMES`], so a session alphabet of size `k` is `x, y, z, ...`
//! truncated to `k` letters, ordered by index.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::text::Cursor;

/// Display names of the letters, in alphabet order.
pub const LETTER_NAMES: &[u8; 26] = b"xyzwvutsrqponmlkjihgfedcba";

pub type Letter = u8;

pub fn letter_name(letter: Letter) -> char {
    LETTER_NAMES[letter as usize] as char
}

pub fn letter_index(name: char) -> Option<Letter> {
    LETTER_NAMES
        .iter()
        .position(|&c| c as char == name)
        .map(|i| i as Letter)
}

/// Exponent vector indexed by letter.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Multidegree(pub Vec<u32>);

impl Multidegree {
    pub fn zero(letters: usize) -> Self {
        Multidegree(vec![0; letters])
    }

    pub fn letters(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&d| d == 0)
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &Multidegree) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn checked_sub(&self, other: &Multidegree) -> Option<Multidegree> {
        if !other.le(self) {
            return None;
        }
        Some(Multidegree(
            self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect(),
        ))
    }

    pub fn scaled(&self, k: u32) -> Multidegree {
        Multidegree(self.0.iter().map(|d| d * k).collect())
    }

    /// All multidegrees `e` with `e <= self` componentwise, in lexicographic order.
    pub fn below(&self) -> Vec<Multidegree> {
        let mut out = vec![Vec::with_capacity(self.0.len())];
        for &bound in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=bound).map(move |v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(Multidegree).collect()
    }

    /// All multidegrees over `letters` letters with the given total degree,
    /// in lexicographic order.
    pub fn with_total(letters: usize, total: u32) -> Vec<Multidegree> {
        fn rec(letters: usize, remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<Multidegree>) {
            if prefix.len() + 1 == letters {
                prefix.push(remaining);
                out.push(Multidegree(prefix.clone()));
                prefix.pop();
                return;
            }
            for v in 0..=remaining {
                prefix.push(v);
                rec(letters, remaining - v, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if letters == 0 {
            if total == 0 {
                out.push(Multidegree(Vec::new()));
            }
            return out;
        }
        rec(letters, total, &mut Vec::new(), &mut out);
        out
    }
}

impl Add for &Multidegree {
    type Output = Multidegree;
    fn add(self, rhs: &Multidegree) -> Multidegree {
        let n = self.0.len().max(rhs.0.len());
        Multidegree(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&0) + rhs.0.get(i).unwrap_or(&0))
                .collect(),
        )
    }
}

impl fmt::Display for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{d}")?;
        }
        write!(f, ")")
    }
}

/// Element of the free monoid. Ordered by length, then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn pow(&self, k: usize) -> Word {
        Word(self.0.repeat(k))
    }

    /// Number of occurrences of each letter, over an alphabet of `letters` letters.
    pub fn multidegree(&self, letters: usize) -> Multidegree {
        let mut d = vec![0u32; letters];
        for &l in &self.0 {
            d[l as usize] += 1;
        }
        Multidegree(d)
    }

    pub fn max_letter(&self) -> Option<Letter> {
        self.0.iter().copied().max()
    }

    pub fn rotate(&self, k: usize) -> Word {
        let mut v = self.0.clone();
        if !v.is_empty() {
            let k = k % v.len();
            v.rotate_left(k);
        }
        Word(v)
    }

    pub fn parse(s: &str) -> Result<Word> {
        let mut out = Vec::new();
        for (pos, c) in s.char_indices() {
            if c.is_whitespace() {
                continue;
            }
            out.push(letter_index(c).ok_or_else(|| Error::parse(pos, format!("`{c}` is not a letter")))?);
        }
        Ok(Word(out))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for &l in &self.0 {
            write!(f, "{}", letter_name(l))?;
        }
        Ok(())
    }
}

/// Start index of the lexicographically least rotation (two-pointer scan).
fn least_rotation(s: &[Letter]) -> usize {
    let n = s.len();
    let (mut i, mut j, mut k) = (0usize, 1usize, 0usize);
    while i < n && j < n && k < n {
        let a = s[(i + k) % n];
        let b = s[(j + k) % n];
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i += k + 1;
        } else {
            j += k + 1;
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

/// Lexicographically least rotation of a nonempty word.
pub fn cyclic_normal_form(w: &Word) -> Result<Word> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(w.rotate(least_rotation(&w.0)))
}

/// Writes `w = u^k` with `u` primitive and `k` maximal.
pub fn primitive_decompose(w: &Word) -> Result<(Word, usize)> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    let s = &w.0;
    let n = s.len();
    // border (failure) function
    let mut fail = vec![0usize; n + 1];
    let mut k = 0usize;
    for i in 1..n {
        while k > 0 && s[i] != s[k] {
            k = fail[k];
        }
        if s[i] == s[k] {
            k += 1;
        }
        fail[i + 1] = k;
    }
    let period = n - fail[n];
    if n.is_multiple_of(period) {
        Ok((Word(s[..period].to_vec()), n / period))
    } else {
        Ok((w.clone(), 1))
    }
}

pub fn is_primitive(w: &Word) -> bool {
    matches!(primitive_decompose(w), Ok((_, 1)))
}

/// Cyclic class of a nonempty word, stored by its least rotation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Necklace(Word);

impl Necklace {
    pub fn of(w: &Word) -> Result<Necklace> {
        cyclic_normal_form(w).map(Necklace)
    }

    pub fn representative(&self) -> &Word {
        &self.0
    }
}

impl fmt::Display for Necklace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// All nonempty words over `letters` letters with length at most
/// `max_total`, in graded lexicographic order.
pub fn enumerate_words(letters: usize, max_total: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut layer = vec![Word::empty()];
    for _ in 0..max_total {
        let next: Vec<Word> = layer
            .iter()
            .flat_map(|w| {
                (0..letters as Letter).map(move |l| {
                    let mut v = w.0.clone();
                    v.push(l);
                    Word(v)
                })
            })
            .collect();
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// All nonempty words whose multidegree is componentwise at most `bound`.
pub fn enumerate_words_within(bound: &Multidegree) -> Vec<Word> {
    let letters = bound.letters();
    enumerate_words(letters, bound.total() as usize)
        .into_iter()
        .filter(|w| w.multidegree(letters).le(bound))
        .collect()
}

/// Necklaces of nonempty words of length at most `max_total`, ordered by
/// their representatives.
pub fn enumerate_necklaces(letters: usize, max_total: usize) -> Vec<Necklace> {
    let mut out: Vec<Necklace> = enumerate_words(letters, max_total)
        .iter()
        .filter_map(|w| Necklace::of(w).ok())
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Noncommutative polynomial with integer coefficients. The empty word
/// carries the constant term.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FreePoly {
    terms: BTreeMap<Word, BigInt>,
}

impl FreePoly {
    pub fn zero() -> Self {
        FreePoly::default()
    }

    pub fn one() -> Self {
        FreePoly::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        FreePoly::monomial(Word::empty(), c)
    }

    pub fn letter(l: Letter) -> Self {
        FreePoly::word(Word::letter(l))
    }

    pub fn word(w: Word) -> Self {
        FreePoly::monomial(w, BigInt::one())
    }

    pub fn monomial(w: Word, c: BigInt) -> Self {
        let mut p = FreePoly::zero();
        p.add_term(w, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, BigInt)>) -> Self {
        let mut p = FreePoly::zero();
        for (w, c) in terms {
            p.add_term(w, c);
        }
        p
    }

    pub fn add_term(&mut self, w: Word, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
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

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigInt)> {
        self.terms.iter()
    }

    #[allow(clippy::len_without_is_empty)] // `is_zero` plays that role
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> BigInt {
        self.terms.get(&Word::empty()).cloned().unwrap_or_default()
    }

    pub fn coefficient(&self, w: &Word) -> BigInt {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// Largest word length, or `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Word::len).max()
    }

    pub fn max_letter(&self) -> Option<Letter> {
        self.terms.keys().filter_map(Word::max_letter).max()
    }

    /// Componentwise maximum of the multidegrees of the terms.
    pub fn multidegree_hull(&self, letters: usize) -> Multidegree {
        let mut d = vec![0u32; letters];
        for w in self.terms.keys() {
            for (slot, v) in d.iter_mut().zip(w.multidegree(letters).0) {
                *slot = (*slot).max(v);
            }
        }
        Multidegree(d)
    }

    pub fn scale(&self, c: &BigInt) -> FreePoly {
        if c.is_zero() {
            return FreePoly::zero();
        }
        FreePoly {
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: usize) -> FreePoly {
        let mut acc = FreePoly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn parse(s: &str) -> Result<FreePoly> {
        let mut cur = Cursor::new(s);
        let p = parse_free_poly(&mut cur)?;
        cur.expect_end()?;
        Ok(p)
    }
}

pub(crate) fn parse_free_poly(cur: &mut Cursor<'_>) -> Result<FreePoly> {
    let mut out = FreePoly::zero();
    let mut first = true;
    loop {
        let negative = if cur.eat('-') {
            true
        } else if cur.eat('+') || first {
            false
        } else {
            break;
        };
        first = false;
        let (w, c) = parse_free_term(cur)?;
        out.add_term(w, if negative { -c } else { c });
    }
    Ok(out)
}

fn parse_free_term(cur: &mut Cursor<'_>) -> Result<(Word, BigInt)> {
    let mut coeff = BigInt::one();
    if cur.peek_digit() {
        coeff = cur.integer()?;
        if !cur.eat('*') && !next_is_letter(cur) {
            return Ok((Word::empty(), coeff));
        }
    }
    let mut letters = Vec::new();
    loop {
        let l = match cur.peek().and_then(letter_index) {
            Some(l) => l,
            None => return Err(cur.error("expected a letter")),
        };
        cur.bump();
        let times = if cur.eat('^') { cur.small()? } else { 1 };
        letters.extend(std::iter::repeat_n(l, times as usize));
        // `*` or plain juxtaposition both multiply
        if !cur.eat('*') && !next_is_letter(cur) {
            break;
        }
    }
    Ok((Word(letters), coeff))
}

fn next_is_letter(cur: &mut Cursor<'_>) -> bool {
    cur.peek().and_then(letter_index).is_some()
}

impl fmt::Display for FreePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            let abs = c.abs();
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if w.is_empty() {
                write!(f, "{abs}")?;
                continue;
            }
            if !abs.is_one() {
                write!(f, "{abs}*")?;
            }
            let parts: Vec<String> = w.0.iter().map(|&l| letter_name(l).to_string()).collect();
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl Add for &FreePoly {
    type Output = FreePoly;
    fn add(self, rhs: &FreePoly) -> FreePoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Sub for &FreePoly {
    type Output = FreePoly;
    fn sub(self, rhs: &FreePoly) -> FreePoly {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }
}

impl Neg for &FreePoly {
    type Output = FreePoly;
    fn neg(self) -> FreePoly {
        FreePoly {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }
}

impl Mul for &FreePoly {
    type Output = FreePoly;
    fn mul(self, rhs: &FreePoly) -> FreePoly {
        let mut out = FreePoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a.concat(b), ca * cb);
            }
        }
        out
    }
}

impl Add for FreePoly {
    type Output = FreePoly;
    fn add(self, rhs: FreePoly) -> FreePoly {
        &self + &rhs
    }
}

impl Sub for FreePoly {
    type Output = FreePoly;
    fn sub(self, rhs: FreePoly) -> FreePoly {
        &self - &rhs
    }
}

impl Mul for FreePoly {
    type Output = FreePoly;
    fn mul(self, rhs: FreePoly) -> FreePoly {
        &self * &rhs
    }
}
