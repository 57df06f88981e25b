//! Symmetric polynomials in finitely many variables, in the monomial and
//! elementary bases, and the substitution of elementary symmetric functions
//! by divided powers.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::freering::FreePoly;
use crate::gamma::{dp_expand, GammaElement, Level};
use crate::text::Cursor;

/// Weakly decreasing sequence of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Sorts the parts decreasingly and drops zeros.
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn conjugate(&self) -> Partition {
        let largest = self.0.first().copied().unwrap_or(0);
        Partition(
            (1..=largest)
                .map(|k| self.0.iter().filter(|&&p| p >= k).count() as u32)
                .collect(),
        )
    }

    /// Partitions of `weight` with at most `max_len` parts, each at most
    /// `max_part`, in decreasing lexicographic order.
    pub fn all(weight: u32, max_len: usize, max_part: u32) -> Vec<Partition> {
        fn rec(left: u32, max_part: u32, max_len: usize, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if left == 0 {
                out.push(Partition(prefix.clone()));
                return;
            }
            if prefix.len() == max_len {
                return;
            }
            for p in (1..=left.min(max_part)).rev() {
                prefix.push(p);
                rec(left - p, p, max_len, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        rec(weight, max_part, max_len, &mut Vec::new(), &mut out);
        out
    }
}

impl Ord for Partition {
    /// By weight, then lexicographically by parts.
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    Monomial,
    Elementary,
}

/// Symmetric polynomial in `nvars` variables. In the elementary basis the
/// key `λ` stands for `e_{λ_1} e_{λ_2} ...`; in the monomial basis for `m_λ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymPoly {
    basis: Basis,
    nvars: usize,
    terms: BTreeMap<Partition, BigInt>,
}

impl SymPoly {
    pub fn zero(basis: Basis, nvars: usize) -> Self {
        SymPoly { basis, nvars, terms: BTreeMap::new() }
    }

    /// A single basis element. Terms that vanish in `nvars` variables are
    /// dropped.
    pub fn basis_element(basis: Basis, lambda: Partition, nvars: usize) -> Self {
        let mut s = SymPoly::zero(basis, nvars);
        s.add_term(lambda, BigInt::one());
        s
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Partition, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, lambda: &Partition) -> BigInt {
        self.terms.get(lambda).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn vanishes(&self, lambda: &Partition) -> bool {
        match self.basis {
            Basis::Elementary => lambda.parts().first().is_some_and(|&p| p as usize > self.nvars),
            Basis::Monomial => lambda.len() > self.nvars,
        }
    }

    pub fn add_term(&mut self, lambda: Partition, c: BigInt) {
        if c.is_zero() || self.vanishes(&lambda) {
            return;
        }
        let slot = self.terms.entry(lambda.clone()).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&lambda);
        }
    }

    /// Parses `e[2,1]` or `m[3,1,1]`, optionally followed by `@nvars`. The
    /// variable count defaults to the weight.
    pub fn parse(s: &str) -> Result<SymPoly> {
        let mut cur = Cursor::new(s);
        let basis = match cur.bump() {
            Some('e') => Basis::Elementary,
            Some('m') => Basis::Monomial,
            _ => return Err(Error::parse(0, "expected `e[...]` or `m[...]`")),
        };
        cur.expect('[')?;
        let mut parts = Vec::new();
        if !cur.eat(']') {
            loop {
                parts.push(cur.small()?);
                if cur.eat(']') {
                    break;
                }
                cur.expect(',')?;
            }
        }
        let lambda = Partition::new(parts);
        let nvars = if cur.eat('@') {
            cur.small()? as usize
        } else {
            lambda.weight() as usize
        };
        cur.expect_end()?;
        if basis == Basis::Monomial && lambda.len() > nvars {
            return Err(Error::TooManyParts { parts: lambda.len(), nvars });
        }
        Ok(SymPoly::basis_element(basis, lambda, nvars))
    }
}

impl fmt::Display for SymPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let tag = match self.basis {
            Basis::Elementary => "e",
            Basis::Monomial => "m",
        };
        for (i, (lambda, c)) in self.terms.iter().enumerate() {
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
            if lambda.is_empty() {
                write!(f, "{abs}")?;
                continue;
            }
            if !abs.is_one() {
                write!(f, "{abs}*")?;
            }
            write!(f, "{tag}{lambda}")?;
        }
        Ok(())
    }
}

/// Number of 0/1 matrices with row sums `rows` and column sums `cols`.
fn zero_one_matrices(rows: &[u32], cols: &[u32]) -> BigInt {
    fn rec(
        i: usize,
        rows: &[u32],
        cols: Vec<u32>,
        memo: &mut HashMap<(usize, Vec<u32>), BigInt>,
    ) -> BigInt {
        if i == rows.len() {
            return if cols.iter().all(|&c| c == 0) { BigInt::one() } else { BigInt::zero() };
        }
        let mut key_cols = cols.clone();
        key_cols.sort_unstable();
        if let Some(v) = memo.get(&(i, key_cols.clone())) {
            return v.clone();
        }
        let open: Vec<usize> = (0..cols.len()).filter(|&j| cols[j] > 0).collect();
        let mut total = BigInt::zero();
        let mut chosen = Vec::new();
        choose(&open, rows[i] as usize, 0, &mut chosen, &mut |subset| {
            let mut next = cols.clone();
            for &j in subset {
                next[j] -= 1;
            }
            total += rec(i + 1, rows, next, memo);
        });
        memo.insert((i, key_cols), total.clone());
        total
    }
    fn choose(items: &[usize], k: usize, start: usize, chosen: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if chosen.len() == k {
            f(chosen);
            return;
        }
        for idx in start..items.len() {
            if items.len() - idx < k - chosen.len() {
                break;
            }
            chosen.push(items[idx]);
            choose(items, k, idx + 1, chosen, f);
            chosen.pop();
        }
    }
    if rows.iter().sum::<u32>() != cols.iter().sum::<u32>() {
        return BigInt::zero();
    }
    rec(0, rows, cols.to_vec(), &mut HashMap::new())
}

/// `e_λ` in the monomial basis of `nvars` variables.
pub fn e_to_m(lambda: &Partition, nvars: usize) -> SymPoly {
    let mut out = SymPoly::zero(Basis::Monomial, nvars);
    if lambda.parts().first().is_some_and(|&p| p as usize > nvars) {
        return out;
    }
    for nu in Partition::all(lambda.weight(), nvars, lambda.len() as u32) {
        out.add_term(nu.clone(), zero_one_matrices(lambda.parts(), nu.parts()));
    }
    out
}

/// `m_α` in the elementary basis of `nvars` variables, by repeatedly
/// removing the lexicographically largest monomial `x^μ` with `e_{μ'}`.
pub fn m_to_e(alpha: &Partition, nvars: usize) -> Result<SymPoly> {
    if alpha.len() > nvars {
        return Err(Error::TooManyParts { parts: alpha.len(), nvars });
    }
    let mut rest = SymPoly::basis_element(Basis::Monomial, alpha.clone(), nvars);
    let mut out = SymPoly::zero(Basis::Elementary, nvars);
    // `rest` stays homogeneous, so its last key is the lex-largest
    while let Some((mu, c)) = rest.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
        let lead = mu.conjugate();
        for (nu, d) in e_to_m(&lead, nvars).terms {
            rest.add_term(nu, -(&c * d));
        }
        out.add_term(lead, c);
    }
    Ok(out)
}

/// Dense polynomial in `nvars` commuting variables keyed by exponent vector.
pub(crate) type ExplicitPoly = BTreeMap<Vec<u32>, BigInt>;

pub(crate) fn explicit_add(p: &mut ExplicitPoly, key: Vec<u32>, c: BigInt) {
    if c.is_zero() {
        return;
    }
    let slot = p.entry(key.clone()).or_insert_with(BigInt::zero);
    *slot += c;
    if slot.is_zero() {
        p.remove(&key);
    }
}

/// `e_k(x_1^n, ..., x_nvars^n)` written out term by term.
pub(crate) fn explicit_e_powered(k: u32, n: u32, nvars: usize) -> ExplicitPoly {
    let mut out = ExplicitPoly::new();
    let k = k as usize;
    if k > nvars {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let mut key = vec![0u32; nvars];
        for &i in &idx {
            key[i] = n;
        }
        explicit_add(&mut out, key, BigInt::one());
        // next k-subset in lexicographic order
        let mut pos = k;
        while pos > 0 && idx[pos - 1] == nvars - k + pos - 1 {
            pos -= 1;
        }
        if pos == 0 {
            break;
        }
        idx[pos - 1] += 1;
        for j in pos..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

/// Reads a symmetric explicit polynomial in the monomial basis.
pub(crate) fn explicit_to_m(p: &ExplicitPoly, nvars: usize) -> SymPoly {
    let mut out = SymPoly::zero(Basis::Monomial, nvars);
    for (key, c) in p {
        let sorted = Partition::new(key.clone());
        let mut padded = sorted.parts().to_vec();
        padded.resize(nvars, 0);
        if &padded == key {
            out.add_term(sorted, c.clone());
        }
    }
    out
}

/// `e_i ∘ p_n` in the elementary basis of `nvars` variables, computed by
/// substituting `x_j -> x_j^n` into `e_i` and converting back.
pub fn plethysm_e_p(i: u32, n: u32, nvars: usize) -> Result<SymPoly> {
    let needed = (n * i) as usize;
    if nvars < needed {
        return Err(Error::InsufficientVariables { needed, nvars });
    }
    let explicit = explicit_e_powered(i, n, nvars);
    let mut out = SymPoly::zero(Basis::Elementary, nvars);
    for (alpha, c) in explicit_to_m(&explicit, nvars).terms {
        for (lambda, d) in m_to_e(&alpha, nvars)?.terms {
            out.add_term(lambda, &c * d);
        }
    }
    Ok(out)
}

/// Coefficient of `e_n^(|α|/n)` in `m_α` over `n` variables; zero when `n`
/// does not divide `|α|` or `α` has more than `n` parts.
pub fn c_alpha(alpha: &Partition, n: u32) -> BigInt {
    if n == 0 || !alpha.weight().is_multiple_of(n) || alpha.len() > n as usize {
        return BigInt::zero();
    }
    let target = Partition(vec![n; (alpha.weight() / n) as usize]);
    m_to_e(alpha, n as usize)
        .map(|s| s.coefficient(&target))
        .unwrap_or_default()
}

/// Sends `e_j` to `a^(j)` and products to τ-products.
pub fn rho_a_substitute(sym: &SymPoly, a: &FreePoly) -> Result<GammaElement> {
    if sym.basis != Basis::Elementary {
        return Err(Error::ContextMismatch("monomial basis".into(), "elementary basis".into()));
    }
    let mut cache: BTreeMap<u32, GammaElement> = BTreeMap::new();
    let mut out = GammaElement::zero(Level::Limit);
    for (lambda, c) in &sym.terms {
        let mut prod = GammaElement::one(Level::Limit);
        for &j in lambda.parts() {
            if let std::collections::btree_map::Entry::Vacant(e) = cache.entry(j) {
                e.insert(dp_expand(a, j)?);
            }
            prod = prod.tau(&cache[&j])?;
        }
        out = &out + &prod.scale(c);
    }
    Ok(out)
}

/// `(a^n)^(i)` as `Σ_{α} c_α a^(α_1) τ a^(α_2) τ ...` over partitions `α` of
/// `n·i` with at most `n` parts.
pub fn power_dp_closed_form(a: &FreePoly, n: u32, i: u32) -> Result<GammaElement> {
    let mut sym = SymPoly::zero(Basis::Elementary, (n * i).max(1) as usize);
    for alpha in Partition::all(n * i, n as usize, n * i) {
        sym.add_term(alpha.clone(), c_alpha(&alpha, n));
    }
    rho_a_substitute(&sym, a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::tau;
    use crate::freering::Word;
    use crate::gamma::DpMonomial;

    fn part(p: &[u32]) -> Partition {
        Partition::new(p.to_vec())
    }

    fn e_poly(terms: &[(&[u32], i64)], nvars: usize) -> SymPoly {
        let mut s = SymPoly::zero(Basis::Elementary, nvars);
        for (p, c) in terms {
            s.add_term(part(p), BigInt::from(*c));
        }
        s
    }

    fn explicit_mul(a: &ExplicitPoly, b: &ExplicitPoly) -> ExplicitPoly {
        let mut out = ExplicitPoly::new();
        for (ka, ca) in a {
            for (kb, cb) in b {
                let key = ka.iter().zip(kb).map(|(x, y)| x + y).collect();
                explicit_add(&mut out, key, ca * cb);
            }
        }
        out
    }

    /// Expands an elementary-basis polynomial into explicit monomials.
    fn explicit_from_e(s: &SymPoly) -> ExplicitPoly {
        let mut out = ExplicitPoly::new();
        for (lambda, c) in s.terms() {
            let mut prod = ExplicitPoly::new();
            prod.insert(vec![0; s.nvars()], BigInt::one());
            for &k in lambda.parts() {
                prod = explicit_mul(&prod, &explicit_e_powered(k, 1, s.nvars()));
            }
            for (key, v) in prod {
                explicit_add(&mut out, key, v * c);
            }
        }
        out
    }

    #[test]
    fn m_to_e_examples() {
        assert_eq!(m_to_e(&part(&[1, 1]), 2).unwrap(), e_poly(&[(&[2], 1)], 2));
        assert_eq!(m_to_e(&part(&[2]), 2).unwrap(), e_poly(&[(&[1, 1], 1), (&[2], -2)], 2));
        assert_eq!(m_to_e(&part(&[1]), 3).unwrap(), e_poly(&[(&[1], 1)], 3));
        assert_eq!(
            m_to_e(&part(&[1, 1, 1]), 2),
            Err(Error::TooManyParts { parts: 3, nvars: 2 })
        );
    }

    #[test]
    fn m_to_e_round_trips_through_explicit_expansion() {
        for nvars in 1..=6usize {
            for w in 0..=6u32 {
                for alpha in Partition::all(w, nvars, w) {
                    let e = m_to_e(&alpha, nvars).unwrap();
                    let back = explicit_to_m(&explicit_from_e(&e), nvars);
                    assert_eq!(back, SymPoly::basis_element(Basis::Monomial, alpha.clone(), nvars), "{alpha} in {nvars}");
                }
            }
        }
    }

    #[test]
    fn e_to_m_matches_explicit_expansion() {
        for nvars in 1..=5usize {
            for w in 0..=5u32 {
                for lambda in Partition::all(w, w as usize, nvars as u32) {
                    let s = SymPoly::basis_element(Basis::Elementary, lambda.clone(), nvars);
                    assert_eq!(e_to_m(&lambda, nvars), explicit_to_m(&explicit_from_e(&s), nvars));
                }
            }
        }
    }

    #[test]
    fn plethysm_examples() {
        assert_eq!(plethysm_e_p(1, 2, 2).unwrap(), e_poly(&[(&[1, 1], 1), (&[2], -2)], 2));
        assert_eq!(plethysm_e_p(1, 1, 1).unwrap(), e_poly(&[(&[1], 1)], 1));
        let e22 = plethysm_e_p(2, 2, 4).unwrap();
        // brute force: e_2(x_1^2, ..., x_4^2) expanded directly
        assert_eq!(explicit_from_e(&e22), explicit_e_powered(2, 2, 4));
        assert_eq!(
            plethysm_e_p(2, 2, 3),
            Err(Error::InsufficientVariables { needed: 4, nvars: 3 })
        );
    }

    #[test]
    fn plethysm_is_stable_in_the_variable_count() {
        for (i, n) in [(1, 2), (2, 2), (1, 3), (2, 3)] {
            let small = plethysm_e_p(i, n, (n * i) as usize).unwrap();
            let large = plethysm_e_p(i, n, (n * i) as usize + 2).unwrap();
            let s: Vec<_> = small.terms().collect();
            let l: Vec<_> = large.terms().collect();
            assert_eq!(s, l);
        }
    }

    #[test]
    fn c_alpha_examples() {
        assert_eq!(c_alpha(&part(&[2]), 2), BigInt::from(-2));
        assert_eq!(c_alpha(&part(&[1, 1]), 2), BigInt::from(1));
        assert_eq!(c_alpha(&part(&[1]), 2), BigInt::zero());
    }

    #[test]
    fn rho_a_examples() {
        let x = FreePoly::parse("x").unwrap();
        let x2 = GammaElement::parse("[x^(2)|lim]").unwrap();
        assert_eq!(rho_a_substitute(&e_poly(&[(&[2], 1)], 2), &x).unwrap(), x2);
        let x1 = DpMonomial::power(Word::parse("x").unwrap(), 1).unwrap();
        assert_eq!(rho_a_substitute(&e_poly(&[(&[1, 1], 1)], 2), &x).unwrap(), tau(&x1, &x1));
        assert_eq!(
            rho_a_substitute(&e_poly(&[(&[1, 1], 1), (&[2], -2)], 2), &x).unwrap(),
            dp_expand(&FreePoly::parse("x^2").unwrap(), 1).unwrap()
        );
        let m = SymPoly::basis_element(Basis::Monomial, part(&[1]), 1);
        assert!(rho_a_substitute(&m, &x).is_err());
    }

    #[test]
    fn power_closed_form_matches_direct_expansion() {
        for a in ["x", "xy", "x + y"] {
            let a = FreePoly::parse(a).unwrap();
            for n in 2..=3 {
                for i in 1..=2 {
                    let direct = dp_expand(&a.pow(n as usize), i).unwrap();
                    assert_eq!(power_dp_closed_form(&a, n, i).unwrap(), direct, "{a} n={n} i={i}");
                }
            }
        }
    }

    #[test]
    fn parse_and_print() {
        let s = SymPoly::parse("m[2]").unwrap();
        assert_eq!(s.nvars(), 2);
        assert_eq!(m_to_e(&part(&[2]), 2).unwrap().to_string(), "e[1,1] - 2*e[2]");
        assert_eq!(SymPoly::parse("e[2,1]@5").unwrap().nvars(), 5);
        assert!(SymPoly::parse("m[1,1,1]@2").is_err());
        assert!(SymPoly::parse("q[1]").is_err());
        assert_eq!(part(&[3, 1]).conjugate(), part(&[2, 1, 1]));
    }
}
