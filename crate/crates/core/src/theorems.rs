//! Degree-by-degree verification of the identities relating divided powers
//! of the free ring to matrix invariants.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::Result;
use crate::exactla::ExactMatrix;
use crate::freering::{enumerate_words_within, FreePoly, Multidegree, Word};
use crate::gamma::{
    basis_in_multidegree, chi_formal, dp_expand, dp_expand_polarized, dp_product, tau, DpMonomial,
    GammaElement, Level,
};
use crate::invariants::{conjugation_invariant, invariant_span_with, CommPoly, MatrixPoly, PiEvaluator};
use crate::symfunc::{plethysm_e_p, power_dp_closed_form, rho_a_substitute};

/// Standard basis of one multidegree together with the commutator
/// relations that land in it.
#[derive(Debug, Clone)]
pub struct AbelianizedPiece {
    pub level: Level,
    pub multidegree: Multidegree,
    pub basis: Vec<DpMonomial>,
    /// Each relation as an element, in the same order as the matrix rows.
    pub relations: Vec<GammaElement>,
    /// Relation coefficients over `basis`, one row per relation.
    pub matrix: ExactMatrix,
}

impl AbelianizedPiece {
    /// Rank of the quotient by the relations, over the rationals.
    pub fn quotient_rank(&self) -> usize {
        self.basis.len() - self.matrix.rank()
    }
}

fn dense_row(g: &GammaElement, index: &HashMap<DpMonomial, usize>, width: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::zero(); width];
    for (m, c) in g.terms() {
        let i = *index.get(m).unwrap_or_else(|| panic!("term [{m}] outside the graded piece"));
        row[i] += c;
    }
    row
}

/// The multidegree-`d` piece of the divided powers at `level`, with all
/// relations `a τ (u τ v - v τ u)` for standard basis elements `a, u, v`
/// whose multidegrees add up to `d`. Left multiples suffice: a right
/// multiple `[u,v] τ b` differs from `b τ [u,v]` by the commutator
/// `[[u,v], b]`, which is again a left multiple of a commutator.
pub fn abelianized_piece(level: Level, d: &Multidegree) -> AbelianizedPiece {
    let basis = basis_in_multidegree(d, level);
    let index: HashMap<DpMonomial, usize> = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let mut parts: Vec<(Multidegree, DpMonomial)> = Vec::new();
    for e in d.below() {
        if e.is_zero() {
            continue;
        }
        for u in basis_in_multidegree(&e, level) {
            parts.push((e.clone(), u));
        }
    }
    let mut cofactor_cache: HashMap<Multidegree, Vec<GammaElement>> = HashMap::new();
    let mut relations = Vec::new();
    let mut rows = Vec::new();
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            let (e, u) = &parts[i];
            let (f, v) = &parts[j];
            let Some(rest) = d.checked_sub(&(e + f)) else { continue };
            let uv = GammaElement::monomial(level, u.clone(), BigInt::one());
            let vu = GammaElement::monomial(level, v.clone(), BigInt::one());
            let comm = &uv.tau(&vu).expect("same level") - &vu.tau(&uv).expect("same level");
            if comm.is_zero() {
                continue;
            }
            let cofactors = cofactor_cache.entry(rest.clone()).or_insert_with(|| {
                basis_in_multidegree(&rest, level)
                    .into_iter()
                    .map(|a| GammaElement::monomial(level, a, BigInt::one()))
                    .collect()
            });
            for a in cofactors.iter() {
                let rel = a.tau(&comm).expect("same level");
                if rel.is_zero() {
                    continue;
                }
                rows.push(dense_row(&rel, &index, basis.len()));
                relations.push(rel);
            }
        }
    }
    let matrix = if rows.is_empty() {
        ExactMatrix::zeros(0, basis.len())
    } else {
        ExactMatrix::from_rows(rows).expect("rows share the basis width")
    };
    AbelianizedPiece { level, multidegree: d.clone(), basis, relations, matrix }
}

/// Outcome of comparing one graded piece of the abelianized divided powers
/// with the invariants of the same multidegree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedPieceReport {
    pub n: u32,
    pub multidegree: Multidegree,
    /// Rank of the abelianized piece.
    pub lhs_rank: usize,
    /// Rank of the span of invariants.
    pub rhs_rank: usize,
    /// Rank of the kernel of evaluation on the standard basis.
    pub kernel_rank: usize,
    pub relation_rank: usize,
    /// Evaluation kills every relation.
    pub relations_vanish: bool,
    /// Evaluated basis and invariant span have the same span.
    pub spans_agree: bool,
    pub conjugation_invariant: bool,
    /// Invariant factors above 1 of the relation matrix, when requested.
    pub torsion: Option<Vec<BigInt>>,
    pub pass: bool,
}

fn poly_rank(polys: &[CommPoly]) -> usize {
    let rows: Vec<_> = polys.iter().map(CommPoly::sparse_row).collect();
    ExactMatrix::from_sparse_rows(&rows).rank()
}

/// Compares the multidegree-`d` piece of the abelianized divided powers at
/// level `n` with the invariants of `n×n` matrices of multidegree `d`.
///
/// Passes when the relation span is exactly the kernel of evaluation on
/// generic matrices, the evaluated basis spans the same space as the
/// invariant generators, and the two ranks agree. With `strict_z` the
/// relation matrix must also have trivial torsion over the integers.
pub fn verify_graded_isomorphism(
    n: u32,
    d: &Multidegree,
    strict_z: bool,
    eval: &mut PiEvaluator,
    rng: &mut impl Rng,
) -> GradedPieceReport {
    let piece = abelianized_piece(Level::Trunc(n), d);
    let relation_rank = piece.matrix.rank();
    let images: Vec<CommPoly> = piece.basis.iter().map(|m| eval.monomial(m)).collect();
    let relations_vanish = piece.relations.iter().all(|r| eval.eval(r).expect("level n").is_zero());
    let invariants = invariant_span_with(eval, d);
    let image_rank = poly_rank(&images);
    let rhs_rank = poly_rank(&invariants);
    let joint: Vec<CommPoly> = images.iter().chain(&invariants).cloned().collect();
    let joint_rank = poly_rank(&joint);
    let spans_agree = joint_rank == image_rank && joint_rank == rhs_rank;
    let conj = conjugation_invariant(&images, n as usize, d.letters(), rng);
    let torsion = strict_z.then(|| {
        piece
            .matrix
            .smith_normal_form()
            .into_iter()
            .filter(|f| !f.is_one())
            .collect::<Vec<_>>()
    });
    let lhs_rank = piece.basis.len() - relation_rank;
    let kernel_rank = piece.basis.len() - image_rank;
    let pass = lhs_rank == rhs_rank
        && kernel_rank == relation_rank
        && relations_vanish
        && spans_agree
        && conj
        && torsion.as_ref().is_none_or(|t| t.is_empty());
    GradedPieceReport {
        n,
        multidegree: d.clone(),
        lhs_rank,
        rhs_rank,
        kernel_rank,
        relation_rank,
        relations_vanish,
        spans_agree,
        conjugation_invariant: conj,
        torsion,
        pass,
    }
}

/// Ranks describing the kernel of the projection to level `n` on one
/// multidegree of the abelianized limit ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KernelReport {
    pub n: u32,
    pub multidegree: Multidegree,
    /// Rank of the kernel of the projection, modulo commutators.
    pub kernel_rank: usize,
    /// Rank of the ideal generated by divided powers `f^(k)`, `k > n`,
    /// modulo commutators.
    pub ideal_rank: usize,
    pub relation_rank: usize,
    pub pass: bool,
}

/// Checks that, modulo commutators, the kernel of the projection from the
/// limit ring to level `n` is generated in multidegree `d` by the elements
/// `f^(k)` with `k > n`. Over the rationals the span of all `f^(k)` equals
/// the span of the monomials `Π w^(ξ_w)` with `|ξ| = k`, so those serve as
/// generators; words longer than `|d|` cannot contribute.
pub fn verify_truncation_kernel(n: u32, d: &Multidegree) -> KernelReport {
    let piece = abelianized_piece(Level::Limit, d);
    let index: HashMap<DpMonomial, usize> =
        piece.basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let width = piece.basis.len();
    let relation_rank = piece.matrix.rank();

    let unit_rows: Vec<Vec<BigInt>> = piece
        .basis
        .iter()
        .enumerate()
        .filter(|(_, m)| m.weight() > n)
        .map(|(i, _)| {
            let mut row = vec![BigInt::zero(); width];
            row[i] = BigInt::one();
            row
        })
        .collect();

    let words = enumerate_words_within(d);
    let mut ideal_rows = Vec::new();
    for k in n + 1..=d.total() {
        for g in dp_expand_polarized(&words, k) {
            let Some(rest) = d.checked_sub(&g.multidegree(d.letters())) else { continue };
            let gen = GammaElement::monomial(Level::Limit, g, BigInt::one());
            for a in basis_in_multidegree(&rest, Level::Limit) {
                let a = GammaElement::monomial(Level::Limit, a, BigInt::one());
                let prod = a.tau(&gen).expect("limit ring");
                if !prod.is_zero() {
                    ideal_rows.push(dense_row(&prod, &index, width));
                }
            }
        }
    }
    let rank_with_relations = |rows: Vec<Vec<BigInt>>| -> usize {
        if rows.is_empty() {
            return 0;
        }
        let extra = ExactMatrix::from_rows(rows).expect("uniform width");
        piece.matrix.stack(&extra).expect("uniform width").rank() - relation_rank
    };
    let kernel_rank = rank_with_relations(unit_rows);
    let ideal_rank = rank_with_relations(ideal_rows);
    KernelReport {
        n,
        multidegree: d.clone(),
        kernel_rank,
        ideal_rank,
        relation_rank,
        pass: kernel_rank == ideal_rank,
    }
}

/// τ-polynomial in single divided powers `w^(i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    One,
    Gen(Word, u32),
    Tau(Box<Expr>, Box<Expr>),
    Sum(Vec<(BigInt, Expr)>),
}

impl Expr {
    /// Value in the limit ring.
    pub fn eval(&self) -> GammaElement {
        match self {
            Expr::One => GammaElement::one(Level::Limit),
            Expr::Gen(w, i) => GammaElement::monomial(
                Level::Limit,
                DpMonomial::power(w.clone(), *i).expect("nonempty word"),
                BigInt::one(),
            ),
            Expr::Tau(a, b) => a.eval().tau(&b.eval()).expect("limit ring"),
            Expr::Sum(terms) => {
                let mut acc = GammaElement::zero(Level::Limit);
                for (c, e) in terms {
                    acc = &acc + &e.eval().scale(c);
                }
                acc
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::One => write!(f, "1"),
            Expr::Gen(w, i) => write!(f, "{w}^({i})"),
            Expr::Tau(a, b) => {
                let wrap = |e: &Expr| match e {
                    Expr::Sum(_) => format!("({e})"),
                    _ => e.to_string(),
                };
                write!(f, "{} τ {}", wrap(a), wrap(b))
            }
            Expr::Sum(terms) => {
                for (i, (c, e)) in terms.iter().enumerate() {
                    let neg = c < &BigInt::zero();
                    let abs = if neg { -c } else { c.clone() };
                    match (i, neg) {
                        (0, true) => write!(f, "-")?,
                        (0, false) => {}
                        (_, true) => write!(f, " - ")?,
                        (_, false) => write!(f, " + ")?,
                    }
                    if abs.is_one() {
                        write!(f, "{e}")?;
                    } else {
                        write!(f, "{abs}*{e}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

/// Rewrites `a_1^(α_1) ... a_k^(α_k)` as a τ-polynomial in single divided
/// powers. The τ product of the first factor with the rest equals the
/// monomial plus terms of smaller weight, which are rewritten in turn.
pub fn reduce_to_single_generators(g: &DpMonomial) -> Expr {
    match g.factors() {
        [] => Expr::One,
        [(w, e)] => Expr::Gen(w.clone(), *e),
        [(w, e), rest @ ..] => {
            let head = DpMonomial::power(w.clone(), *e).expect("nonempty word");
            let tail = DpMonomial::from_exponents(rest.iter().cloned().collect()).expect("nonempty words");
            let mut terms = vec![(
                BigInt::one(),
                Expr::Tau(
                    Box::new(Expr::Gen(w.clone(), *e)),
                    Box::new(reduce_to_single_generators(&tail)),
                ),
            )];
            // the γ = 0 term of head τ tail is g itself, with coefficient 1
            debug_assert_eq!(dp_product(&head, &tail), (g.clone(), BigInt::one()));
            for (m, c) in tau(&head, &tail).terms() {
                if m != g {
                    terms.push((-c, reduce_to_single_generators(m)));
                }
            }
            Expr::Sum(terms)
        }
    }
}

/// Checks `(a^n)^(i) = ρ_a(e_i ∘ p_n)` and the closed form in the
/// coefficients `c_α`. Returns (identities checked, identities holding).
pub fn verify_plethysm(a: &FreePoly, n: u32, i: u32) -> Result<(usize, usize)> {
    let direct = dp_expand(&a.pow(n as usize), i)?;
    let nvars = (n * i).max(1) as usize;
    let substituted = rho_a_substitute(&plethysm_e_p(i, n, nvars)?, a)?;
    let closed = power_dp_closed_form(a, n, i)?;
    let passed = usize::from(direct == substituted) + usize::from(direct == closed);
    Ok((2, passed))
}

/// The image of the formal Cayley-Hamilton element of `f` on generic
/// `n×n` matrices: coefficients evaluated through `eval`, words through
/// the matrix map.
pub fn cayley_hamilton_residue(f: &FreePoly, n: u32, eval: &mut PiEvaluator) -> Result<MatrixPoly> {
    let chi = chi_formal(f, n)?;
    let size = n as usize;
    let mut acc = MatrixPoly::zero(size);
    for ((m, w), c) in chi.terms() {
        let coeff = eval.monomial(m).scale(c);
        if coeff.is_zero() {
            continue;
        }
        acc = acc.add(&eval.word(w).scale(&coeff));
    }
    Ok(acc)
}

pub fn verify_cayley_hamilton(f: &FreePoly, n: u32) -> Result<bool> {
    Ok(cayley_hamilton_residue(f, n, &mut PiEvaluator::new(n as usize))?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn md(v: &[u32]) -> Multidegree {
        Multidegree(v.to_vec())
    }

    fn mono(s: &str) -> DpMonomial {
        let g = GammaElement::parse(s).unwrap();
        let m = g.terms().next().unwrap().0.clone();
        m
    }

    fn check(n: u32, d: &[u32]) -> GradedPieceReport {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        verify_graded_isomorphism(n, &md(d), true, &mut PiEvaluator::new(n as usize), &mut rng)
    }

    #[test]
    fn abelianized_piece_examples() {
        let p = abelianized_piece(Level::Trunc(1), &md(&[1, 1]));
        assert_eq!(p.basis.len(), 2);
        assert_eq!(p.quotient_rank(), 1);
        let q = abelianized_piece(Level::Trunc(2), &md(&[1, 0]));
        assert_eq!(q.basis.len(), 1);
        assert_eq!(q.quotient_rank(), 1);
        let z = abelianized_piece(Level::Trunc(2), &md(&[0, 0]));
        assert_eq!(z.quotient_rank(), 1);
    }

    #[test]
    fn graded_isomorphism_small_pieces() {
        for d in [[1, 0], [2, 0], [1, 1], [2, 1]] {
            let r = check(1, &d);
            assert!(r.pass, "{r:?}");
            assert_eq!(r.lhs_rank, 1);
        }
        let r = check(2, &[2, 0]);
        assert!(r.pass, "{r:?}");
        assert_eq!((r.lhs_rank, r.rhs_rank), (2, 2));
        let r = check(2, &[1, 1]);
        assert!(r.pass, "{r:?}");
        assert_eq!((r.lhs_rank, r.rhs_rank), (2, 2));
        assert_eq!(r.torsion, Some(vec![]));
    }

    #[test]
    fn relations_evaluate_to_zero() {
        let p = abelianized_piece(Level::Trunc(2), &md(&[2, 1]));
        let mut ev = PiEvaluator::new(2);
        assert!(!p.relations.is_empty());
        for r in &p.relations {
            assert!(ev.eval(r).unwrap().is_zero());
        }
    }

    #[test]
    fn truncation_kernel_examples() {
        for (n, d) in [(1, 2), (2, 3), (1, 3), (2, 4)] {
            let r = verify_truncation_kernel(n, &md(&[d]));
            assert!(r.pass, "{r:?}");
        }
        let r = verify_truncation_kernel(1, &md(&[2]));
        assert_eq!(r.kernel_rank, 1);
        let low = verify_truncation_kernel(3, &md(&[2]));
        assert_eq!((low.kernel_rank, low.ideal_rank), (0, 0));
    }

    #[test]
    fn reduction_examples() {
        let xy = mono("[x^(1) y^(1)|lim]");
        let e = reduce_to_single_generators(&xy);
        assert_eq!(e.to_string(), "x^(1) τ y^(1) - xy^(1)");
        assert_eq!(e.eval(), GammaElement::monomial(Level::Limit, xy, BigInt::one()));
        let x2 = mono("[x^(2)|lim]");
        assert_eq!(reduce_to_single_generators(&x2), Expr::Gen(Word::parse("x").unwrap(), 2));
        let mixed = mono("[x^(1) xx^(1)|lim]");
        let e = reduce_to_single_generators(&mixed);
        assert_eq!(e.eval(), GammaElement::monomial(Level::Limit, mixed, BigInt::one()));
    }

    #[test]
    fn plethysm_examples() {
        for a in ["x", "x + y", "xy"] {
            let a = FreePoly::parse(a).unwrap();
            assert_eq!(verify_plethysm(&a, 2, 1).unwrap(), (2, 2));
        }
        let x = FreePoly::parse("x").unwrap();
        for k in 1..=3 {
            assert_eq!(verify_plethysm(&x, 1, k).unwrap(), (2, 2));
        }
    }

    #[test]
    fn cayley_hamilton_examples() {
        for (f, n) in [("x", 1), ("x", 2), ("xy", 2), ("x + y", 2)] {
            assert!(verify_cayley_hamilton(&FreePoly::parse(f).unwrap(), n).unwrap(), "{f} at {n}");
        }
        // dropping the top coefficient breaks the identity
        let f = FreePoly::parse("x").unwrap();
        let mut ev = PiEvaluator::new(2);
        let res = cayley_hamilton_residue(&f, 2, &mut ev).unwrap();
        let det = ev.e(&Word::parse("x").unwrap(), 2);
        assert!(!res.sub(&MatrixPoly::scalar(2, det)).is_zero());
    }
}
