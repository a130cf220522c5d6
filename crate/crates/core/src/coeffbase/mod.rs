//! Base coefficients: prime-power finite fields, p-adic numbers at finite
//! precision, rationals and univariate polynomials over finite fields.

mod arith;
mod fq;
mod fqpoly;
mod linalg;
mod padic;
mod rational;

pub use arith::{factor, is_prime, max_rel_precision};
pub use fq::{FieldEmbedding, FqElem, FqField};
pub use fqpoly::FqPoly;
pub use linalg::{nullspace, rank, solve_affine};
pub use padic::{teichmuller, PadicNum};
pub use rational::RationalNum;

/// Builds `F_{p^k}` with its deterministic modulus.
pub fn fq_make(p: u64, k: u32) -> crate::Result<FqField> {
    FqField::new(p, k)
}

/// Expands a rational number in `Q_p` to absolute precision `prec`.
pub fn padic_from_rational(x: &RationalNum, p: u64, prec: i64) -> crate::Result<PadicNum> {
    PadicNum::from_rational(x, p, prec)
}
