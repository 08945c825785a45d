//! p-adic valuations of rational numbers, with a total order including +∞.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::primes::PrimeInt;
use crate::error::{Error, Result};

/// Order of vanishing at a prime: a finite integer, or `Infinite` for 0.
///
/// `Infinite` compares above every finite value, so minima over coefficient
/// tuples stay total even when entries vanish.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn is_finite(self) -> bool {
        matches!(self, Valuation::Finite(_))
    }

    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    /// Sum, with `∞ + x = ∞`.
    pub fn plus(self, other: Valuation) -> Valuation {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }

    /// Difference `self − other`. The subtrahend must be finite; the
    /// valuation identities in this crate never subtract an infinite value.
    pub fn minus(self, other: Valuation) -> Valuation {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a - b),
            (Valuation::Infinite, Valuation::Finite(_)) => Valuation::Infinite,
            _ => panic!("cannot subtract an infinite valuation"),
        }
    }

    /// Scalar multiple `k · self` with `k > 0`.
    pub fn times(self, k: i64) -> Valuation {
        debug_assert!(k > 0);
        match self {
            Valuation::Finite(v) => Valuation::Finite(v * k),
            Valuation::Infinite => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

/// ord_p of an integer (`Infinite` for 0).
pub fn ord_int(x: &BigInt, p: &BigUint) -> Valuation {
    if x.is_zero() {
        return Valuation::Infinite;
    }
    let mut m = x.magnitude().clone();
    let mut v = 0i64;
    loop {
        let (q, r) = m.div_rem(p);
        if r.is_zero() {
            m = q;
            v += 1;
        } else {
            return Valuation::Finite(v);
        }
    }
}

/// ord_p of a rational number: ord of the numerator minus ord of the
/// denominator. Total on all of ℚ, with `ord_p(0) = ∞`.
pub fn ord_p(x: &BigRational, p: &PrimeInt) -> Valuation {
    match ord_int(x.numer(), p.value()) {
        Valuation::Infinite => Valuation::Infinite,
        Valuation::Finite(n) => {
            // BigRational keeps numerator and denominator coprime, so at
            // most one of the two orders is nonzero.
            let d = ord_int(x.denom(), p.value())
                .finite()
                .expect("denominator is nonzero");
            Valuation::Finite(n - d)
        }
    }
}

/// Minimum of `ord_p` over a nonempty sequence of rationals.
pub fn ord_p_tuple(xs: &[BigRational], p: &PrimeInt) -> Result<Valuation> {
    if xs.is_empty() {
        return Err(Error::EmptyInput("ord_p_tuple needs at least one value"));
    }
    Ok(xs
        .iter()
        .map(|x| ord_p(x, p))
        .min()
        .expect("nonempty iterator has a minimum"))
}
