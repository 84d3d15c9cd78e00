//! Exact scalar and matrix arithmetic: rationals, word-sized prime fields,
//! dense matrices with rank and kernel, univariate polynomials and the Smith
//! form of polynomial matrices.

mod field;
mod matrix;
mod poly;

pub use field::{
    format_rational, is_prime, parse_rational, Field, PrimeField, Rational, RationalField,
    DEFAULT_PRIME, MIN_PRIME,
};
pub use matrix::{nullspace, rank, reduce_in, reduce_mod_p, row_reduce, FpMatrix, Matrix, QMatrix};
pub use poly::{Poly, PolyMatrix};
