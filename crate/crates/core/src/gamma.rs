//! Divided powers of the free ring without unit, with the τ product.
//!
//! A [`DpMonomial`] is a finitely supported exponent map `α` on nonempty
//! words, standing for `Π μ^(α_μ)`. In the truncated ring at level `n` it
//! stands for `1^(n-|α|) Π μ^(α_μ)`; the exponent of `1` is never stored.
//! The same monomial therefore lives in the limit ring and in every level
//! `n >= |α|`.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::freering::{
    cyclic_normal_form, enumerate_words_within, letter_index, FreePoly, Multidegree, Word,
};
use crate::text::Cursor;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DpMonomial {
    factors: Vec<(Word, u32)>,
}

impl DpMonomial {
    /// The empty product.
    pub fn one() -> Self {
        DpMonomial::default()
    }

    /// `w^(k)`; `k = 0` gives the empty product.
    pub fn power(w: Word, k: u32) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(if k == 0 {
            DpMonomial::one()
        } else {
            DpMonomial { factors: vec![(w, k)] }
        })
    }

    /// Builds the monomial with the given exponent map. Zero exponents are
    /// dropped.
    pub fn from_exponents(exponents: BTreeMap<Word, u32>) -> Result<Self> {
        if exponents.keys().any(Word::is_empty) {
            return Err(Error::EmptyWord);
        }
        Ok(DpMonomial {
            factors: exponents.into_iter().filter(|(_, e)| *e > 0).collect(),
        })
    }

    pub fn factors(&self) -> &[(Word, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn exponent(&self, w: &Word) -> u32 {
        self.factors
            .binary_search_by(|(u, _)| u.cmp(w))
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    /// `|α|`, the number of divided-power slots used.
    pub fn weight(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    pub fn total_degree(&self) -> usize {
        self.factors.iter().map(|(w, e)| w.len() * *e as usize).sum()
    }

    pub fn multidegree(&self, letters: usize) -> Multidegree {
        let mut d = Multidegree::zero(letters);
        for (w, e) in &self.factors {
            d = &d + &w.multidegree(letters).scaled(*e);
        }
        d
    }

    fn to_map(&self) -> BTreeMap<Word, u32> {
        self.factors.iter().cloned().collect()
    }

    fn from_map(map: BTreeMap<Word, u32>) -> Self {
        DpMonomial { factors: map.into_iter().collect() }
    }
}

impl Ord for DpMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.weight().cmp(&other.weight()))
            .then_with(|| self.factors.cmp(&other.factors))
    }
}

impl PartialOrd for DpMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DpMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (w, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{w}^({e})")?;
        }
        Ok(())
    }
}

/// Multiplies `w^(e)` into an exponent map, accumulating the binomial
/// coefficient `C(a+e, e)` when `w` is already present with exponent `a`.
fn dp_mul_into(acc: &mut BTreeMap<Word, u32>, coeff: &mut BigInt, w: &Word, e: u32) {
    if e == 0 {
        return;
    }
    match acc.entry(w.clone()) {
        Entry::Vacant(slot) => {
            slot.insert(e);
        }
        Entry::Occupied(mut slot) => {
            let a = *slot.get();
            *coeff *= binomial(a + e, e);
            *slot.get_mut() = a + e;
        }
    }
}

pub(crate) fn binomial(n: u32, k: u32) -> BigInt {
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// The divided-power product of two monomials: the exponent maps add and
/// every shared word contributes `C(α_μ+β_μ, α_μ)`.
pub fn dp_product(u: &DpMonomial, v: &DpMonomial) -> (DpMonomial, BigInt) {
    let mut acc = u.to_map();
    let mut coeff = BigInt::one();
    for (w, e) in &v.factors {
        dp_mul_into(&mut acc, &mut coeff, w, *e);
    }
    (DpMonomial::from_map(acc), coeff)
}

/// Calls `visit` with every nonnegative integer matrix (row-major) whose
/// row sums and column sums are bounded by `rows` and `cols`. With `exact`
/// the sums must match the margins exactly.
pub fn for_each_margin_matrix(rows: &[u32], cols: &[u32], exact: bool, mut visit: impl FnMut(&[u32])) {
    fn rec(
        i: usize,
        ncols: usize,
        exact: bool,
        row_left: &mut [u32],
        col_left: &mut [u32],
        cells: &mut Vec<u32>,
        visit: &mut dyn FnMut(&[u32]),
    ) {
        if i == row_left.len() * ncols {
            if exact && (row_left.iter().any(|&r| r > 0) || col_left.iter().any(|&c| c > 0)) {
                return;
            }
            visit(cells);
            return;
        }
        let (r, c) = (i / ncols, i % ncols);
        let (lo, hi) = if exact && c + 1 == ncols {
            if row_left[r] > col_left[c] {
                return;
            }
            (row_left[r], row_left[r])
        } else {
            (0, row_left[r].min(col_left[c]))
        };
        for v in lo..=hi {
            row_left[r] -= v;
            col_left[c] -= v;
            cells.push(v);
            rec(i + 1, ncols, exact, row_left, col_left, cells, visit);
            cells.pop();
            row_left[r] += v;
            col_left[c] += v;
        }
    }
    let mut row_left = rows.to_vec();
    let mut col_left = cols.to_vec();
    if cols.is_empty() {
        if !exact || rows.iter().all(|&r| r == 0) {
            visit(&[]);
        }
        return;
    }
    rec(0, cols.len(), exact, &mut row_left, &mut col_left, &mut Vec::new(), &mut visit);
}

/// The τ product in the limit ring.
pub fn tau(u: &DpMonomial, v: &DpMonomial) -> GammaElement {
    let rows: Vec<u32> = u.factors.iter().map(|(_, e)| *e).collect();
    let cols: Vec<u32> = v.factors.iter().map(|(_, e)| *e).collect();
    let mut out = GammaElement::zero(Level::Limit);
    for_each_margin_matrix(&rows, &cols, false, |g| {
        let mut acc = BTreeMap::new();
        let mut coeff = BigInt::one();
        let width = cols.len();
        for (i, (mu, a)) in u.factors.iter().enumerate() {
            let used: u32 = g[i * width..(i + 1) * width].iter().sum();
            dp_mul_into(&mut acc, &mut coeff, mu, a - used);
        }
        for (j, (nu, b)) in v.factors.iter().enumerate() {
            let used: u32 = (0..rows.len()).map(|i| g[i * width + j]).sum();
            dp_mul_into(&mut acc, &mut coeff, nu, b - used);
        }
        for (i, (mu, _)) in u.factors.iter().enumerate() {
            for (j, (nu, _)) in v.factors.iter().enumerate() {
                dp_mul_into(&mut acc, &mut coeff, &mu.concat(nu), g[i * width + j]);
            }
        }
        out.add_term(DpMonomial::from_map(acc), coeff);
    });
    out
}

fn check_admitted(m: &DpMonomial, n: u32) -> Result<()> {
    if m.weight() > n {
        return Err(Error::InvalidLevel(format!(
            "monomial [{m}] has weight {} above level {n}",
            m.weight()
        )));
    }
    Ok(())
}

/// The τ product at level `n`, computed in the limit ring and truncated.
pub fn tau_n(u: &DpMonomial, v: &DpMonomial, n: u32) -> Result<GammaElement> {
    check_admitted(u, n)?;
    check_admitted(v, n)?;
    Ok(tau(u, v).sigma_unchecked(n))
}

/// The product at level `n` computed from the degree-`n` divided powers of
/// a unital algebra, with the unit slots `n-|α|` and `n-|β|` as explicit
/// margins. Agrees with [`tau_n`]; kept as an independent route for checks.
pub fn tau_n_direct(u: &DpMonomial, v: &DpMonomial, n: u32) -> Result<GammaElement> {
    check_admitted(u, n)?;
    check_admitted(v, n)?;
    let mut rows = vec![n - u.weight()];
    rows.extend(u.factors.iter().map(|(_, e)| *e));
    let mut cols = vec![n - v.weight()];
    cols.extend(v.factors.iter().map(|(_, e)| *e));
    let width = cols.len();
    let mut out = GammaElement::zero(Level::Trunc(n));
    for_each_margin_matrix(&rows, &cols, true, |g| {
        let mut acc = BTreeMap::new();
        let mut coeff = BigInt::one();
        for i in 0..rows.len() {
            for j in 0..width {
                let e = g[i * width + j];
                let word = match (i, j) {
                    // 1*1 = 1 fills the unit slot of the product
                    (0, 0) => continue,
                    (0, j) => v.factors[j - 1].0.clone(),
                    (i, 0) => u.factors[i - 1].0.clone(),
                    (i, j) => u.factors[i - 1].0.concat(&v.factors[j - 1].0),
                };
                dp_mul_into(&mut acc, &mut coeff, &word, e);
            }
        }
        out.add_term(DpMonomial::from_map(acc), coeff);
    });
    Ok(out)
}

/// Ambient ring of a [`GammaElement`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Limit,
    Trunc(u32),
}

impl Level {
    pub fn admits(&self, m: &DpMonomial) -> bool {
        match self {
            Level::Limit => true,
            Level::Trunc(n) => m.weight() <= *n,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Limit => write!(f, "lim"),
            Level::Trunc(n) => write!(f, "n={n}"),
        }
    }
}

/// Integer combination of divided-power monomials in the limit ring or in
/// a truncation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GammaElement {
    level: Level,
    terms: BTreeMap<DpMonomial, BigInt>,
}

impl GammaElement {
    pub fn zero(level: Level) -> Self {
        GammaElement { level, terms: BTreeMap::new() }
    }

    pub fn one(level: Level) -> Self {
        GammaElement::monomial(level, DpMonomial::one(), BigInt::one())
    }

    /// `c * m`. At a finite level a monomial of weight above the level is
    /// zero there and is dropped.
    pub fn monomial(level: Level, m: DpMonomial, c: BigInt) -> Self {
        let mut g = GammaElement::zero(level);
        g.add_term(m, c);
        g
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DpMonomial, &BigInt)> {
        self.terms.iter()
    }

    #[allow(clippy::len_without_is_empty)] // `is_zero` plays that role
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &DpMonomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: DpMonomial, c: BigInt) {
        if c.is_zero() || !self.level.admits(&m) {
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

    pub fn scale(&self, c: &BigInt) -> GammaElement {
        let mut out = GammaElement::zero(self.level);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    fn same_level(&self, other: &GammaElement) -> Result<()> {
        if self.level != other.level {
            return Err(Error::ContextMismatch(self.level.to_string(), other.level.to_string()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &GammaElement) -> Result<GammaElement> {
        self.same_level(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    /// The divided-power (commutative) product, truncated at finite levels.
    pub fn dp_mul(&self, other: &GammaElement) -> Result<GammaElement> {
        self.same_level(other)?;
        let mut out = GammaElement::zero(self.level);
        for (u, cu) in &self.terms {
            for (v, cv) in &other.terms {
                let (m, c) = dp_product(u, v);
                out.add_term(m, c * cu * cv);
            }
        }
        Ok(out)
    }

    /// The τ product, truncated at finite levels.
    pub fn tau(&self, other: &GammaElement) -> Result<GammaElement> {
        self.same_level(other)?;
        let mut out = GammaElement::zero(self.level);
        for (u, cu) in &self.terms {
            for (v, cv) in &other.terms {
                let cc = cu * cv;
                for (m, c) in tau(u, v).terms {
                    out.add_term(m, c * &cc);
                }
            }
        }
        Ok(out)
    }

    fn sigma_unchecked(&self, n: u32) -> GammaElement {
        let mut out = GammaElement::zero(Level::Trunc(n));
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    /// Projection to level `n`: drops every term of weight above `n`.
    /// Accepts limit elements and elements of any level `>= n`.
    pub fn sigma(&self, n: u32) -> Result<GammaElement> {
        match self.level {
            Level::Trunc(m) if m < n => Err(Error::InvalidLevel(format!(
                "cannot project level {m} to level {n}"
            ))),
            _ => Ok(self.sigma_unchecked(n)),
        }
    }

    /// The map from level `n` to level `n-1`: terms of weight exactly `n`
    /// would need the unit to the power `-1` and vanish.
    pub fn rho(&self) -> Result<GammaElement> {
        match self.level {
            Level::Trunc(n) if n >= 1 => Ok(self.sigma_unchecked(n - 1)),
            other => Err(Error::InvalidLevel(format!("no restriction map out of level {other}"))),
        }
    }

    /// Multidegrees of all terms (deduplicated, ascending).
    pub fn multidegrees(&self, letters: usize) -> Vec<Multidegree> {
        let mut out: Vec<Multidegree> = self.terms.keys().map(|m| m.multidegree(letters)).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn parse(s: &str) -> Result<GammaElement> {
        let mut cur = Cursor::new(s);
        let mut out: Option<GammaElement> = None;
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
            let mut coeff = BigInt::one();
            if cur.peek_digit() {
                coeff = cur.integer()?;
                cur.eat('*');
            }
            let start = cur.pos();
            let term = parse_bracket(&mut cur)?;
            let term = term.scale(&if negative { -coeff } else { coeff });
            out = Some(match out {
                None => term,
                Some(acc) => acc.try_add(&term).map_err(|_| {
                    Error::parse(start, format!("level {} differs from earlier terms", term.level))
                })?,
            });
        }
        cur.expect_end()?;
        out.ok_or_else(|| Error::parse(0, "expected a bracketed term"))
    }
}

fn parse_bracket(cur: &mut Cursor<'_>) -> Result<GammaElement> {
    cur.expect('[')?;
    let mut factors = Vec::new();
    loop {
        match cur.peek() {
            Some('|') => break,
            Some(c) if letter_index(c).is_some() => {
                let start = cur.pos();
                let mut letters = Vec::new();
                while let Some(l) = cur.peek_raw().and_then(letter_index) {
                    cur.bump_raw();
                    letters.push(l);
                }
                let mut e = 1;
                if cur.eat('^') {
                    cur.expect('(')?;
                    e = cur.small()?;
                    cur.expect(')')?;
                }
                factors.push((start, Word::new(letters), e));
            }
            Some(c) => return Err(cur.error(format!("unexpected `{c}` inside bracket"))),
            None => return Err(cur.error("unterminated bracket")),
        }
    }
    cur.expect('|')?;
    let level_pos = cur.pos();
    let level = if cur.eat_str("lim") {
        Level::Limit
    } else if cur.eat('n') {
        cur.expect('=')?;
        Level::Trunc(cur.small()?)
    } else {
        return Err(cur.error("expected `lim` or `n=<level>`"));
    };
    cur.expect(']')?;
    let mut g = GammaElement::one(Level::Limit);
    for (_, w, e) in factors {
        let m = DpMonomial::power(w, e).expect("letters are nonempty");
        g = g.dp_mul(&GammaElement::monomial(Level::Limit, m, BigInt::one()))?;
    }
    if let Level::Trunc(n) = level {
        if let Some((m, _)) = g.terms().find(|(m, _)| m.weight() > n) {
            return Err(Error::parse(
                level_pos,
                format!("weight {} exceeds level {n}", m.weight()),
            ));
        }
    }
    g.sigma(match level {
        Level::Limit => return Ok(g),
        Level::Trunc(n) => n,
    })
}

impl fmt::Display for GammaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
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
            if !abs.is_one() {
                write!(f, "{abs}*")?;
            }
            write!(f, "[{m}|{}]", self.level)?;
        }
        Ok(())
    }
}

impl Add for &GammaElement {
    type Output = GammaElement;
    /// Panics if the levels differ; see [`GammaElement::try_add`].
    fn add(self, rhs: &GammaElement) -> GammaElement {
        self.try_add(rhs).expect("adding elements of different levels")
    }
}

impl Sub for &GammaElement {
    type Output = GammaElement;
    fn sub(self, rhs: &GammaElement) -> GammaElement {
        self + &(-rhs)
    }
}

impl Neg for &GammaElement {
    type Output = GammaElement;
    fn neg(self) -> GammaElement {
        self.scale(&BigInt::from(-1))
    }
}

/// `f^(k)` expanded over the words of `f`: for `f = Σ c_w w` this is
/// `Σ_{|ξ|=k} Π c_w^(ξ_w) Π w^(ξ_w)` in the limit ring.
pub fn dp_expand(f: &FreePoly, k: u32) -> Result<GammaElement> {
    if !f.constant_term().is_zero() {
        return Err(Error::ConstantTerm);
    }
    let terms: Vec<(&Word, &BigInt)> = f.terms().collect();
    let mut out = GammaElement::zero(Level::Limit);
    let mut exps = vec![0u32; terms.len()];
    fn rec(
        i: usize,
        left: u32,
        terms: &[(&Word, &BigInt)],
        exps: &mut Vec<u32>,
        out: &mut GammaElement,
    ) {
        if i == terms.len() {
            if left > 0 {
                return;
            }
            let mut map = BTreeMap::new();
            let mut coeff = BigInt::one();
            for ((w, c), &e) in terms.iter().zip(exps.iter()) {
                if e > 0 {
                    map.insert((*w).clone(), e);
                    coeff *= num_traits::pow((*c).clone(), e as usize);
                }
            }
            out.add_term(DpMonomial::from_map(map), coeff);
            return;
        }
        for e in 0..=left {
            exps[i] = e;
            rec(i + 1, left - e, terms, exps, out);
        }
        exps[i] = 0;
    }
    rec(0, k, &terms, &mut exps, &mut out);
    Ok(out)
}

/// All monomials `Π w^(ξ_w)` with `|ξ| = k` and support in `words`. Their
/// span is the span of `f^(k)` over all `f` in the span of `words`.
pub fn dp_expand_polarized(words: &[Word], k: u32) -> Vec<DpMonomial> {
    let f = FreePoly::from_terms(words.iter().map(|w| (w.clone(), BigInt::one())));
    let mut out: Vec<DpMonomial> = match dp_expand(&f, k) {
        Ok(g) => g.terms.into_keys().collect(),
        Err(_) => Vec::new(),
    };
    out.sort();
    out
}

/// The standard basis monomials of multidegree `d`, restricted to those
/// admitted at `level`, in ascending order.
pub fn basis_in_multidegree(d: &Multidegree, level: Level) -> Vec<DpMonomial> {
    let letters = d.letters();
    let words = enumerate_words_within(d);
    let degrees: Vec<Multidegree> = words.iter().map(|w| w.multidegree(letters)).collect();
    let mut out = Vec::new();
    fn rec(
        i: usize,
        left: &Multidegree,
        words: &[Word],
        degrees: &[Multidegree],
        chosen: &mut Vec<(Word, u32)>,
        level: Level,
        out: &mut Vec<DpMonomial>,
    ) {
        if left.is_zero() {
            let m = DpMonomial { factors: chosen.clone() };
            if level.admits(&m) {
                out.push(m);
            }
            return;
        }
        if i == words.len() {
            return;
        }
        rec(i + 1, left, words, degrees, chosen, level, out);
        let mut e = 1;
        let mut rest = left.clone();
        while let Some(r) = rest.checked_sub(&degrees[i]) {
            chosen.push((words[i].clone(), e));
            rec(i + 1, &r, words, degrees, chosen, level, out);
            chosen.pop();
            rest = r;
            e += 1;
        }
    }
    rec(0, d, &words, &degrees, &mut Vec::new(), level, &mut out);
    out.sort();
    out
}

/// Standard basis monomials of every multidegree with total degree at most
/// `max_total`, including the empty product.
pub fn basis_up_to_degree(letters: usize, max_total: u32, level: Level) -> Vec<DpMonomial> {
    let mut out = Vec::new();
    for t in 0..=max_total {
        for d in Multidegree::with_total(letters, t) {
            out.extend(basis_in_multidegree(&d, level));
        }
    }
    out.sort();
    out
}

/// Representative of the class of `m` used for abelianized coefficients:
/// a single divided power `μ^(i)` is replaced by the power of the least
/// rotation of `μ`. Products of several factors are left unchanged.
pub fn abelianized_form(m: &DpMonomial) -> DpMonomial {
    match m.factors.as_slice() {
        [(w, e)] => DpMonomial {
            factors: vec![(cyclic_normal_form(w).expect("nonempty"), *e)],
        },
        _ => m.clone(),
    }
}

/// Element of (abelianized divided powers) ⊗ (free ring), kept as a map
/// from (left monomial, right word) to integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NormedTensor {
    terms: BTreeMap<(DpMonomial, Word), BigInt>,
}

impl NormedTensor {
    pub fn zero() -> Self {
        NormedTensor::default()
    }

    pub fn add_term(&mut self, left: DpMonomial, right: Word, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let key = (abelianized_form(&left), right);
        match self.terms.entry(key) {
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

    /// Adds `g ⊗ p`.
    pub fn add_product(&mut self, g: &GammaElement, p: &FreePoly, sign: &BigInt) {
        for (m, cm) in g.terms() {
            for (w, cw) in p.terms() {
                self.add_term(m.clone(), w.clone(), cm * cw * sign);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(DpMonomial, Word), &BigInt)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for NormedTensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, ((m, w), c)) in self.terms.iter().enumerate() {
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
            let mut parts = Vec::new();
            if !abs.is_one() {
                parts.push(abs.to_string());
            }
            if !m.is_one() {
                parts.push(format!("[{m}]"));
            }
            if !w.is_empty() {
                parts.extend(w.letters().iter().map(|&l| crate::freering::letter_name(l).to_string()));
            }
            if parts.is_empty() {
                parts.push("1".into());
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// The formal Cayley-Hamilton element `f^n + Σ_{i=1..n} (-1)^i f^(i) ⊗ f^(n-i)`.
pub fn chi_formal(f: &FreePoly, n: u32) -> Result<NormedTensor> {
    if !f.constant_term().is_zero() {
        return Err(Error::ConstantTerm);
    }
    if f.is_zero() {
        return Err(Error::ConstantPolynomial);
    }
    let mut out = NormedTensor::zero();
    out.add_product(&GammaElement::one(Level::Limit), &f.pow(n as usize), &BigInt::one());
    for i in 1..=n {
        let sign = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        out.add_product(&dp_expand(f, i)?, &f.pow((n - i) as usize), &sign);
    }
    Ok(out)
}
