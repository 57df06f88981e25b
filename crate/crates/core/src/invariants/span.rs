//! Evaluation of divided powers on generic matrices and spanning sets of
//! invariants and covariants.

use std::collections::HashMap;

use num_bigint::BigInt;
use rand::Rng;

use crate::error::{Error, Result};
use crate::freering::{enumerate_necklaces, enumerate_words_within, Multidegree, Word};
use crate::gamma::{DpMonomial, GammaElement, Level};

use super::matrix::{
    charpoly_coeffs, int_identity, int_matrix_mul, jn_word, multidet_coeff, MatrixPoly,
};
use super::poly::{CommPoly, Var};

/// Evaluates divided powers at level `n` on generic `n×n` matrices, caching
/// word images and per-monomial values. One evaluator per job; it is not
/// shared between threads.
pub struct PiEvaluator {
    n: usize,
    words: HashMap<Word, MatrixPoly>,
    monomials: HashMap<DpMonomial, CommPoly>,
    char_coeffs: HashMap<Word, Vec<CommPoly>>,
}

impl PiEvaluator {
    pub fn new(n: usize) -> Self {
        PiEvaluator {
            n,
            words: HashMap::new(),
            monomials: HashMap::new(),
            char_coeffs: HashMap::new(),
        }
    }

    pub fn level(&self) -> usize {
        self.n
    }

    pub fn word(&mut self, w: &Word) -> MatrixPoly {
        if let Some(m) = self.words.get(w) {
            return m.clone();
        }
        let m = jn_word(w, self.n);
        self.words.insert(w.clone(), m.clone());
        m
    }

    /// `e_i` of the image of `w`, for `0 <= i <= n`.
    pub fn e(&mut self, w: &Word, i: usize) -> CommPoly {
        if !self.char_coeffs.contains_key(w) {
            let m = self.word(w);
            self.char_coeffs.insert(w.clone(), charpoly_coeffs(&m));
        }
        self.char_coeffs[w].get(i).cloned().unwrap_or_default()
    }

    /// Value of `1^(n-|α|) Π μ^(α_μ)`.
    pub fn monomial(&mut self, m: &DpMonomial) -> CommPoly {
        if let Some(v) = self.monomials.get(m) {
            return v.clone();
        }
        let v = match m.factors() {
            [] => CommPoly::one(),
            [(w, e)] => self.e(w, *e as usize),
            factors => {
                let mats: Vec<MatrixPoly> = factors.iter().map(|(w, _)| self.word(w)).collect();
                let alpha: Vec<u32> = factors.iter().map(|(_, e)| *e).collect();
                multidet_coeff(&mats, &alpha, self.n).expect("orders match")
            }
        };
        self.monomials.insert(m.clone(), v.clone());
        v
    }

    /// Value of an element of level `n`.
    pub fn eval(&mut self, g: &GammaElement) -> Result<CommPoly> {
        if g.level() != Level::Trunc(self.n as u32) {
            return Err(Error::ContextMismatch(
                g.level().to_string(),
                Level::Trunc(self.n as u32).to_string(),
            ));
        }
        let mut acc = CommPoly::zero();
        for (m, c) in g.terms() {
            acc = &acc + &self.monomial(m).scale(c);
        }
        Ok(acc)
    }
}

/// The evaluation of a level-`n` element on generic matrices.
pub fn pi_n_eval(g: &GammaElement, n: usize) -> Result<CommPoly> {
    PiEvaluator::new(n).eval(g)
}

/// Products `Π e_(i_k)(w_k)` over necklace representatives `w_k` and
/// `1 <= i_k <= n` whose multidegrees add up to `d`. For `d = 0` this is
/// `[1]`. Listed in a fixed order.
pub fn invariant_span(n: usize, d: &Multidegree) -> Vec<CommPoly> {
    invariant_span_with(&mut PiEvaluator::new(n), d)
}

pub fn invariant_span_with(eval: &mut PiEvaluator, d: &Multidegree) -> Vec<CommPoly> {
    let n = eval.level();
    let letters = d.letters();
    let mut items: Vec<(Word, usize, Multidegree)> = Vec::new();
    for neck in enumerate_necklaces(letters, d.total() as usize) {
        let w = neck.representative().clone();
        let m = w.multidegree(letters);
        for i in 1..=n {
            let md = m.scaled(i as u32);
            if md.le(d) {
                items.push((w.clone(), i, md));
            }
        }
    }
    let mut out = Vec::new();
    fn rec(
        k: usize,
        left: &Multidegree,
        items: &[(Word, usize, Multidegree)],
        chosen: &mut Vec<(usize, u32)>,
        eval: &mut PiEvaluator,
        out: &mut Vec<CommPoly>,
    ) {
        if left.is_zero() {
            let mut p = CommPoly::one();
            for &(idx, mult) in chosen.iter() {
                let (w, i, _) = &items[idx];
                p = &p * &eval.e(w, *i).pow(mult);
            }
            out.push(p);
            return;
        }
        if k == items.len() {
            return;
        }
        rec(k + 1, left, items, chosen, eval, out);
        let mut rest = left.clone();
        let mut mult = 1;
        while let Some(r) = rest.checked_sub(&items[k].2) {
            chosen.push((k, mult));
            rec(k + 1, &r, items, chosen, eval, out);
            chosen.pop();
            rest = r;
            mult += 1;
        }
    }
    rec(0, d, &items, &mut Vec::new(), eval, &mut out);
    out
}

/// Spanning set of the covariants of multidegree `d`: invariants of
/// multidegree `d - m(w)` times the image of `w`, over all words `w`
/// including the empty one.
pub fn covariant_span(n: usize, d: &Multidegree) -> Vec<MatrixPoly> {
    let mut eval = PiEvaluator::new(n);
    let mut words = vec![Word::empty()];
    words.extend(enumerate_words_within(d));
    let mut out = Vec::new();
    for w in words {
        let rest = d.checked_sub(&w.multidegree(d.letters())).expect("word within bound");
        let image = eval.word(&w);
        for inv in invariant_span_with(&mut eval, &rest) {
            out.push(image.scale(&inv));
        }
    }
    out
}

/// A random unimodular integer matrix and its inverse, as a product of
/// elementary matrices.
pub fn random_unimodular(n: usize, rng: &mut impl Rng) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let mut g = int_identity(n);
    let mut g_inv = int_identity(n);
    if n < 2 {
        return (g, g_inv);
    }
    for _ in 0..3 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c: i64 = rng.gen_range(-2..=2);
        // E = I + c e_ij, E^-1 = I - c e_ij
        let mut e = int_identity(n);
        e[i][j] = BigInt::from(c);
        let mut e_inv = int_identity(n);
        e_inv[i][j] = BigInt::from(-c);
        g = int_matrix_mul(&g, &e);
        g_inv = int_matrix_mul(&e_inv, &g_inv);
    }
    (g, g_inv)
}

/// Checks that every polynomial keeps its value when the generic matrices,
/// specialized at random integers, are simultaneously conjugated by a
/// random unimodular matrix.
pub fn conjugation_invariant(polys: &[CommPoly], n: usize, letters: usize, rng: &mut impl Rng) -> bool {
    let values: Vec<Vec<Vec<BigInt>>> = (0..letters)
        .map(|_| {
            (0..n)
                .map(|_| (0..n).map(|_| BigInt::from(rng.gen_range(-5i64..=5))).collect())
                .collect()
        })
        .collect();
    let (g, g_inv) = random_unimodular(n, rng);
    let conjugated: Vec<Vec<Vec<BigInt>>> = values
        .iter()
        .map(|x| int_matrix_mul(&int_matrix_mul(&g, x), &g_inv))
        .collect();
    let lookup = |table: &Vec<Vec<Vec<BigInt>>>, v: Var| match v {
        Var::X { letter, row, col } => table[letter as usize][row as usize][col as usize].clone(),
        Var::Aux(_) => BigInt::from(0),
    };
    polys.iter().all(|p| p.eval(&|v| lookup(&values, v)) == p.eval(&|v| lookup(&conjugated, v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::ExactMatrix;
    use crate::gamma::tau_n;
    use crate::invariants::matrix::{generic_matrix, jn_eval};
    use crate::freering::FreePoly;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn g(s: &str) -> GammaElement {
        GammaElement::parse(s).unwrap()
    }

    fn rank_of(polys: &[CommPoly]) -> usize {
        let rows: Vec<_> = polys.iter().map(CommPoly::sparse_row).collect();
        ExactMatrix::from_sparse_rows(&rows).rank()
    }

    #[test]
    fn pi_examples() {
        let z = generic_matrix(0, 2).unwrap();
        assert_eq!(pi_n_eval(&g("[x^(1)|n=2]"), 2).unwrap(), z.trace());
        let xy = jn_eval(&FreePoly::parse("xy").unwrap(), 2);
        assert_eq!(pi_n_eval(&g("[xy^(1)|n=2]"), 2).unwrap(), xy.trace());
        let e = charpoly_coeffs(&z);
        assert_eq!(pi_n_eval(&g("[x^(2)|n=2]"), 2).unwrap(), e[2]);
        let x1 = g("[x^(1)|n=2]");
        let lhs = pi_n_eval(&x1.tau(&x1).unwrap(), 2).unwrap();
        let rhs = pi_n_eval(&g("[xx^(1)|n=2] + 2*[x^(2)|n=2]"), 2).unwrap();
        assert_eq!(lhs, &z.trace() * &z.trace());
        assert_eq!(lhs, rhs);
        assert!(pi_n_eval(&x1, 3).is_err());
    }

    #[test]
    fn pi_is_multiplicative_on_small_cases() {
        let x = DpMonomial::power(Word::parse("x").unwrap(), 1).unwrap();
        let y = DpMonomial::power(Word::parse("y").unwrap(), 1).unwrap();
        let mut ev = PiEvaluator::new(2);
        let prod = tau_n(&x, &y, 2).unwrap();
        let lhs = ev.eval(&prod).unwrap();
        let rhs = &ev.monomial(&x) * &ev.monomial(&y);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn invariant_span_examples() {
        let d = Multidegree(vec![2, 1]);
        let one = invariant_span(1, &d);
        assert_eq!(rank_of(&one), 1);
        let d20 = Multidegree(vec![2, 0]);
        let two = invariant_span(2, &d20);
        assert_eq!(two.len(), 3);
        assert_eq!(rank_of(&two), 2);
        assert_eq!(invariant_span(2, &Multidegree(vec![0, 0])), vec![CommPoly::one()]);
    }

    #[test]
    fn invariants_are_homogeneous_and_conjugation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=3 {
            let d = Multidegree(vec![2, 1]);
            let span = invariant_span(n, &d);
            for p in &span {
                assert_eq!(p.letter_homogeneous(2), Some(vec![2, 1]));
            }
            assert!(conjugation_invariant(&span, n, 2, &mut rng));
        }
        // a non-invariant is caught
        let entry = generic_matrix(0, 2).unwrap().get(0, 1).clone();
        assert!(!(0..5).all(|_| conjugation_invariant(std::slice::from_ref(&entry), 2, 1, &mut rng)));
    }

    #[test]
    fn covariant_span_contains_words() {
        let d = Multidegree(vec![1, 1]);
        let span = covariant_span(2, &d);
        let xy = jn_eval(&FreePoly::parse("xy").unwrap(), 2);
        assert!(span.contains(&xy));
        let x = generic_matrix(0, 2).unwrap();
        let ty = generic_matrix(1, 2).unwrap().trace();
        assert!(span.contains(&x.scale(&ty)));
    }
}
