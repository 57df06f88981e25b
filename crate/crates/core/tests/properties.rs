use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

use divpow::exactla::{det_cofactor, ExactMatrix, Integers};
use divpow::freering::{cyclic_normal_form, primitive_decompose, FreePoly, Word};
use divpow::gamma::{basis_up_to_degree, tau, DpMonomial, GammaElement, Level};
use divpow::invariants::PiEvaluator;
use divpow::symfunc::{e_to_m, m_to_e, Partition};
use divpow::theorems::reduce_to_single_generators;

fn word(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0u8..3, 1..=max_len).prop_map(Word::new)
}

fn free_poly() -> impl Strategy<Value = FreePoly> {
    prop::collection::vec((word(3), -3i64..=3), 0..4)
        .prop_map(|terms| FreePoly::from_terms(terms.into_iter().map(|(w, c)| (w, BigInt::from(c)))))
}

fn dp_monomial(max_factors: usize) -> impl Strategy<Value = DpMonomial> {
    prop::collection::vec((prop::collection::vec(0u8..2, 1..=2).prop_map(Word::new), 1u32..=2), 0..=max_factors)
        .prop_map(|pairs| {
            let mut map = BTreeMap::new();
            for (w, e) in pairs {
                *map.entry(w).or_insert(0) += e;
            }
            DpMonomial::from_exponents(map).unwrap()
        })
}

fn limit(m: &DpMonomial) -> GammaElement {
    GammaElement::monomial(Level::Limit, m.clone(), BigInt::from(1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rotations_share_a_normal_form(u in word(4), v in word(4)) {
        prop_assert_eq!(cyclic_normal_form(&u.concat(&v)).unwrap(), cyclic_normal_form(&v.concat(&u)).unwrap());
    }

    #[test]
    fn powers_decompose_to_their_primitive_root(u in word(4), k in 1usize..4) {
        let (root, e) = primitive_decompose(&u).unwrap();
        let (root_k, ek) = primitive_decompose(&u.pow(k)).unwrap();
        prop_assert_eq!(root_k, root);
        prop_assert_eq!(ek, e * k);
    }

    #[test]
    fn free_products_associate(a in free_poly(), b in free_poly(), c in free_poly()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn products_associate_and_respect_degree(u in dp_monomial(2), v in dp_monomial(2), w in dp_monomial(1)) {
        let left = tau(&u, &v).tau(&limit(&w)).unwrap();
        let right = limit(&u).tau(&tau(&v, &w)).unwrap();
        prop_assert_eq!(&left, &right);
        let d = &u.multidegree(2) + &v.multidegree(2);
        prop_assert!(tau(&u, &v).multidegrees(2).iter().all(|m| *m == d));
    }

    #[test]
    fn change_of_basis_round_trips(weight in 1u32..6) {
        for alpha in Partition::all(weight, weight as usize, weight) {
            let nvars = weight as usize;
            let e = m_to_e(&alpha, nvars).unwrap();
            let mut back = BTreeMap::new();
            for (lambda, c) in e.terms() {
                for (mu, d) in e_to_m(lambda, nvars).terms() {
                    *back.entry(mu.clone()).or_insert_with(|| BigInt::from(0)) += c * d;
                }
            }
            back.retain(|_, c| *c != BigInt::from(0));
            prop_assert_eq!(back, BTreeMap::from([(alpha.clone(), BigInt::from(1))]));
        }
    }

    #[test]
    fn rank_ignores_row_order_and_scaling(
        rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 4), 1..5),
        shift in 0usize..5,
        scale in 1i64..4,
    ) {
        let base = ExactMatrix::from_i64(&rows).unwrap();
        let mut moved = rows.clone();
        let len = moved.len();
        moved.rotate_left(shift % len);
        moved[0] = moved[0].iter().map(|x| x * scale).collect();
        prop_assert_eq!(ExactMatrix::from_i64(&moved).unwrap().rank(), base.rank());
    }

    #[test]
    fn invariant_factors_multiply_to_determinant(rows in prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 3)) {
        let m = ExactMatrix::from_i64(&rows).unwrap();
        let big: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let det = det_cofactor(&big, &Integers);
        let factors = m.smith_normal_form();
        if det == BigInt::from(0) {
            prop_assert!(factors.len() < 3);
        } else {
            prop_assert_eq!(factors.iter().product::<BigInt>(), det.abs());
        }
    }

    #[test]
    fn evaluation_is_invariant_under_rotation(u in word(2), v in word(2), i in 1u32..=2) {
        let mut ev = PiEvaluator::new(2);
        let a = DpMonomial::power(u.concat(&v), i).unwrap();
        let b = DpMonomial::power(v.concat(&u), i).unwrap();
        prop_assert_eq!(ev.monomial(&a), ev.monomial(&b));
    }
}

#[test]
fn basis_reduces_to_single_generators() {
    for m in basis_up_to_degree(2, 4, Level::Limit) {
        let e = reduce_to_single_generators(&m);
        assert_eq!(e.eval(), limit(&m), "{m}");
    }
}
