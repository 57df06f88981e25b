//! Polynomial invariants of tuples of generic matrices.

pub mod matrix;
pub mod poly;
pub mod span;

pub use matrix::{
    charpoly_coeffs, charpoly_coeffs_int, generic_matrix, jn_eval, jn_word, multidet_coeff,
    multidet_coeff_by_columns, MatrixPoly,
};
pub use poly::{CommPoly, Monomial, Var};
pub use span::{
    conjugation_invariant, covariant_span, invariant_span, invariant_span_with, pi_n_eval,
    random_unimodular, PiEvaluator,
};
