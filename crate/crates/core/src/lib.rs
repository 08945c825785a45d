//! Exact reduction theory for dynamical systems on projective space over ℚ.
//!
//! A degree-d endomorphism of P^n is given by a presentation: a tuple of
//! n + 1 homogeneous degree-d forms with no common zero. This crate
//! computes, in exact arithmetic throughout:
//!
//! - the resultant of a presentation (Sylvester for n = 1, Macaulay
//!   quotient with a perturbation fallback for n ≥ 2) and its p-adic
//!   valuation,
//! - the normalized valuation `ord_R` that is invariant under scaling,
//!   and its transformation under PGL_{n+1}(ℚ) conjugation,
//! - reductions of presentations mod p and GIT semistability of the
//!   reduced point, with destabilizing one-parameter subgroups as
//!   checkable certificates,
//! - minimality of presentations at a prime: either a semistability
//!   certificate for the reduction, or a conjugating matrix that strictly
//!   lowers `ord_R`, found by searching a bounded family of lattice
//!   representatives,
//! - the global minimal resultant divisor over ℚ, minimal models reached
//!   prime by prime, and a potential-good-reduction classification.
//!
//! All search routines are bounded and report exactly what they did:
//! certificates are re-verified independently before being returned, and
//! anything outside the configured budget is refused with an error rather
//! than guessed.

pub mod arith;
pub mod corpus;
pub mod error;
pub mod minimality;
pub mod oracles;
pub mod poly;
pub mod presentation;
pub mod resultant;
pub mod semistability;
pub mod suites;

pub use error::{Error, Result};
pub use minimality::{
    certify_or_search_minimal, globalize_over_q, minimal_resultant_divisor,
    minimize_to_fixpoint, potential_good_reduction_status, GlobalModel,
    MinimalityCertificate, MinimalityStatus, MinimizationOutcome,
    PotentialGoodReduction, ResultantDivisor, SearchOptions,
};
pub use presentation::{Presentation, ReducedPoint};
pub use resultant::{resultant, valuation_report, ResultantValuation};
pub use semistability::{
    is_semistable, is_semistable_presentation, verify_witness, OnePSWitness,
    SemistabilityOptions, SemistabilityVerdict,
};
