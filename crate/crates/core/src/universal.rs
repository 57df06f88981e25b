//! The universal commutative ring through which every representation of a
//! finitely presented ring in `n×n` matrices factors, given extensionally
//! as the polynomial ring in generic matrix entries modulo an ideal.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::exactla::{in_span, ExactMatrix};
use crate::freering::{letter_index, letter_name, FreePoly, Letter};
use crate::invariants::{generic_matrix, jn_eval, CommPoly, MatrixPoly, Monomial, Var};

/// Generators and relations of a ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub generators: Vec<Letter>,
    pub relations: Vec<FreePoly>,
}

#[derive(Deserialize)]
struct PresentationFile {
    generators: Vec<String>,
    relations: Vec<String>,
}

impl Presentation {
    pub fn new(generators: Vec<Letter>, relations: Vec<FreePoly>) -> Result<Self> {
        let p = Presentation { generators, relations };
        for r in &p.relations {
            p.check_declared(r)?;
        }
        Ok(p)
    }

    /// Reads `{"generators": ["x"], "relations": ["x^2"]}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: PresentationFile = serde_json::from_str(text).map_err(|e| {
            Error::parse(0, format!("invalid presentation file: {e}"))
        })?;
        let mut generators = Vec::new();
        for g in &file.generators {
            let mut chars = g.chars();
            let letter = match (chars.next(), chars.next()) {
                (Some(c), None) => letter_index(c),
                _ => None,
            };
            generators.push(letter.ok_or_else(|| Error::UnknownLetterName(g.clone()))?);
        }
        let relations = file
            .relations
            .iter()
            .map(|r| FreePoly::parse(r))
            .collect::<Result<Vec<_>>>()?;
        Presentation::new(generators, relations)
    }

    fn check_declared(&self, f: &FreePoly) -> Result<()> {
        for (w, _) in f.terms() {
            for &l in w.letters() {
                if !self.generators.contains(&l) {
                    return Err(Error::UndeclaredGenerator(letter_name(l).to_string()));
                }
            }
        }
        Ok(())
    }

    /// The polynomial variables of the generic matrices of the generators.
    pub fn variables(&self, n: usize) -> Vec<Var> {
        let mut out = Vec::new();
        for &letter in &self.generators {
            for row in 0..n as u8 {
                for col in 0..n as u8 {
                    out.push(Var::X { letter, row, col });
                }
            }
        }
        out.sort();
        out
    }
}

/// Ideal generators and generator images of the universal ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalRing {
    pub n: usize,
    pub ideal: Vec<CommPoly>,
    pub images: Vec<(Letter, MatrixPoly)>,
}

/// The ideal is generated by the entries of the images of the relations;
/// the generator images are the generic matrices, read modulo the ideal.
pub fn build_an(p: &Presentation, n: usize) -> Result<UniversalRing> {
    let mut ideal: Vec<CommPoly> = Vec::new();
    for r in &p.relations {
        p.check_declared(r)?;
        for e in jn_eval(r, n).entries() {
            if !e.is_zero() && !ideal.contains(e) {
                ideal.push(e.clone());
            }
        }
    }
    let images = p
        .generators
        .iter()
        .map(|&g| Ok((g, generic_matrix(g, n)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(UniversalRing { n, ideal, images })
}

/// Representative of the image of `f`; it is meaningful modulo the ideal.
pub fn jnr_image(p: &Presentation, n: usize, f: &FreePoly) -> Result<MatrixPoly> {
    p.check_declared(f)?;
    Ok(jn_eval(f, n))
}

/// All monomials in `vars` of degree at most `max_degree`.
fn monomials_up_to(vars: &[Var], max_degree: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::one()];
    let mut layer = vec![(Monomial::one(), 0usize)];
    for _ in 0..max_degree {
        let mut next = Vec::new();
        for (m, start) in &layer {
            for (k, v) in vars.iter().enumerate().skip(*start) {
                next.push((m.mul(&Monomial::var(*v)), k));
            }
        }
        out.extend(next.iter().map(|(m, _)| m.clone()));
        layer = next;
    }
    out
}

impl UniversalRing {
    /// Products `monomial * generator` of total degree at most `max_degree`.
    pub fn ideal_piece(&self, vars: &[Var], max_degree: u32) -> Vec<CommPoly> {
        let mut out = Vec::new();
        for g in &self.ideal {
            let deg = g.terms().map(|(m, _)| m.degree()).max().unwrap_or(0);
            if deg > max_degree {
                continue;
            }
            for m in monomials_up_to(vars, max_degree - deg) {
                out.push(&CommPoly::monomial(m, BigInt::one()) * g);
            }
        }
        out
    }

    /// Rank over the rationals of [`ideal_piece`](Self::ideal_piece).
    pub fn ideal_piece_rank(&self, vars: &[Var], max_degree: u32) -> usize {
        let rows: Vec<_> = self.ideal_piece(vars, max_degree).iter().map(CommPoly::sparse_row).collect();
        ExactMatrix::from_sparse_rows(&rows).rank()
    }

    /// Certifies `target` as a rational combination of the products
    /// `monomial * generator` of degree at most `max_degree`. `None` means
    /// no certificate exists within that bound.
    pub fn membership(&self, vars: &[Var], target: &CommPoly, max_degree: u32) -> Result<Option<Vec<BigRational>>> {
        let piece = self.ideal_piece(vars, max_degree);
        let mut columns: Vec<Monomial> = piece
            .iter()
            .chain(std::iter::once(target))
            .flat_map(|p| p.terms().map(|(m, _)| m.clone()).collect::<Vec<_>>())
            .collect();
        columns.sort();
        columns.dedup();
        let dense = |p: &CommPoly| columns.iter().map(|m| p.coefficient(m)).collect::<Vec<_>>();
        let vectors: Vec<Vec<BigInt>> = piece.iter().map(dense).collect();
        in_span(&vectors, &dense(target))
    }
}

/// True when every term of every polynomial has total degree `deg` for one
/// common `deg` per polynomial.
pub fn all_homogeneous(polys: &[CommPoly]) -> bool {
    polys.iter().all(|p| {
        let mut degs = p.terms().map(|(m, _)| m.degree());
        match degs.next() {
            Some(first) => degs.all(|d| d == first),
            None => true,
        }
    })
}

/// Convenience: the coefficient vector is a genuine certificate.
pub fn certificate_holds(piece: &[CommPoly], coeffs: &[BigRational], target: &CommPoly) -> bool {
    // clear denominators: Σ c_i p_i = target  <=>  Σ (L c_i) p_i = L target
    let lcm = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
    let mut acc = CommPoly::zero();
    for (p, c) in piece.iter().zip(coeffs) {
        let scaled = (c * BigRational::from_integer(lcm.clone())).to_integer();
        acc = &acc + &p.scale(&scaled);
    }
    acc == target.scale(&lcm)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x11() -> CommPoly {
        CommPoly::var(Var::X { letter: 0, row: 0, col: 0 })
    }

    fn pres(json: &str) -> Presentation {
        Presentation::from_json(json).unwrap()
    }

    #[test]
    fn square_zero_at_level_one() {
        let p = pres(r#"{"generators": ["x"], "relations": ["x^2"]}"#);
        let u = build_an(&p, 1).unwrap();
        assert_eq!(u.ideal, vec![x11().pow(2)]);
        assert_eq!(u.images[0].1, generic_matrix(0, 1).unwrap());
        let vars = p.variables(1);
        let cube = jnr_image(&p, 1, &FreePoly::parse("x^3").unwrap()).unwrap();
        assert_eq!(cube.get(0, 0), &x11().pow(3));
        let cert = u.membership(&vars, cube.get(0, 0), 3).unwrap().unwrap();
        assert!(certificate_holds(&u.ideal_piece(&vars, 3), &cert, cube.get(0, 0)));
        assert!(u.membership(&vars, &x11(), 3).unwrap().is_none());
    }

    #[test]
    fn free_ring_has_empty_ideal() {
        let p = pres(r#"{"generators": ["x", "y"], "relations": []}"#);
        let u = build_an(&p, 2).unwrap();
        assert!(u.ideal.is_empty());
        let f = FreePoly::parse("x*y - 2*y").unwrap();
        assert_eq!(jnr_image(&p, 2, &f).unwrap(), jn_eval(&f, 2));
    }

    #[test]
    fn involution_at_level_two() {
        let p = pres(r#"{"generators": ["x"], "relations": ["x^2 - 1"]}"#);
        let u = build_an(&p, 2).unwrap();
        let z = generic_matrix(0, 2).unwrap();
        let expect = z.mul(&z).sub(&MatrixPoly::identity(2));
        assert_eq!(u.ideal.len(), 4);
        for e in expect.entries() {
            assert!(u.ideal.contains(e));
        }
        let r = jnr_image(&p, 2, &FreePoly::parse("x^2 - 1").unwrap()).unwrap();
        assert!(r.entries().iter().all(|e| u.ideal.contains(e)));
    }

    #[test]
    fn errors() {
        assert_eq!(
            Presentation::from_json(r#"{"generators": ["x"], "relations": ["x*y"]}"#),
            Err(Error::UndeclaredGenerator("y".into()))
        );
        assert!(Presentation::from_json("{not json").is_err());
        assert!(Presentation::from_json(r#"{"generators": ["xy"], "relations": []}"#).is_err());
        let p = pres(r#"{"generators": ["x"], "relations": []}"#);
        assert!(jnr_image(&p, 1, &FreePoly::parse("y").unwrap()).is_err());
    }

    #[test]
    fn redundant_relations_leave_ideal_pieces_unchanged() {
        let base = pres(r#"{"generators": ["x", "y"], "relations": ["x*y - y*x"]}"#);
        let more = pres(r#"{"generators": ["x", "y"], "relations": ["x*y - y*x", "x*x*y - x*y*x"]}"#);
        for n in 1..=2 {
            let vars = base.variables(n);
            let a = build_an(&base, n).unwrap();
            let b = build_an(&more, n).unwrap();
            assert!(all_homogeneous(&a.ideal) && all_homogeneous(&b.ideal));
            for d in 0..=4 {
                if n == 2 && d > 3 {
                    continue;
                }
                assert_eq!(a.ideal_piece_rank(&vars, d), b.ideal_piece_rank(&vars, d), "n={n} d={d}");
            }
        }
    }
}
