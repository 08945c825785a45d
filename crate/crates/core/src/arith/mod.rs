//! Exact arithmetic foundations: certified primes, p-adic valuations,
//! finite fields, rational matrices, and inequality feasibility.

pub mod feasibility;
pub mod ff;
pub mod matrix;
pub mod primes;
pub mod valuation;

pub use feasibility::{nonneg_cone_nontrivial, strict_cone_feasible};
pub use ff::{
    mat_adjugate, mat_det, mat_mul, reduce_mod_p, rref, ExtField, FFElem, FieldCtx,
    FiniteFieldCtx, PrimeField, RatCtx,
};
pub use matrix::RationalMatrix;
pub use primes::{factor_with_limits, is_prime_certified, Factorization, PrimeInt};
pub use valuation::{ord_int, ord_p, ord_p_tuple, Valuation};
