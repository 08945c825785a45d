//! Certified primes and integer factorization with explicit limits.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Witness bases that make Miller-Rabin deterministic for all inputs below
/// [`mr_certification_bound`].
const MR_BASES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Largest modulus (exclusive) for which the fixed base set above is a
/// complete primality certificate: 3,317,044,064,679,887,385,961,981.
pub fn mr_certification_bound() -> &'static BigUint {
    static BOUND: OnceLock<BigUint> = OnceLock::new();
    BOUND.get_or_init(|| {
        "3317044064679887385961981"
            .parse()
            .expect("bound literal parses")
    })
}

/// A positive prime integer, certified at construction.
///
/// Construction runs a deterministic Miller-Rabin test, so every `PrimeInt`
/// handled anywhere in the crate is genuinely prime. Values too large to
/// certify deterministically are rejected rather than accepted on faith.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimeInt {
    value: BigUint,
}

impl PrimeInt {
    pub fn new(value: BigUint) -> Result<Self> {
        if is_prime_certified(&value)? {
            Ok(PrimeInt { value })
        } else {
            Err(Error::NotPrime(value.to_string()))
        }
    }

    pub fn from_u64(value: u64) -> Result<Self> {
        Self::new(BigUint::from(value))
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.value.to_u64()
    }
}

impl fmt::Display for PrimeInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Deterministic primality for `n` below the certification bound.
/// Errors (rather than guessing) above it.
pub fn is_prime_certified(n: &BigUint) -> Result<bool> {
    if n >= mr_certification_bound() {
        return Err(Error::PrimalityUncertified(n.to_string()));
    }
    let two = BigUint::from(2u32);
    if n < &two {
        return Ok(false);
    }
    if n.is_even() {
        return Ok(n == &two);
    }
    // n − 1 = 2^s · d with d odd.
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'bases: for &b in MR_BASES.iter() {
        let base = BigUint::from(b);
        if &base % n == BigUint::zero() {
            continue; // base is a multiple of n, so n equals a small prime
        }
        let mut x = base.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return Ok(false);
    }
    Ok(true)
}

/// Outcome of [`factor_with_limits`]: certified prime factors with
/// multiplicities, plus whatever part of the input could not be factored
/// within the limits. The invariant `n = cofactor · Π p^e` always holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub factors: BTreeMap<BigUint, u32>,
    /// Composite (or uncertifiably large) part left unfactored; `None` when
    /// the factorization is complete.
    pub cofactor: Option<BigUint>,
}

/// Factors `n` by trial division up to `trial_limit`, then certifies the
/// remaining cofactor prime if it is small enough for deterministic
/// Miller-Rabin. A cofactor that is composite, or too large to certify, is
/// reported as such instead of being guessed at.
pub fn factor_with_limits(n: &BigUint, trial_limit: u64) -> Factorization {
    let mut factors = BTreeMap::new();
    let mut rest = n.clone();
    if rest.is_zero() {
        return Factorization {
            factors,
            cofactor: Some(rest),
        };
    }
    let mut d = 2u64;
    while d <= trial_limit {
        let big_d = BigUint::from(d);
        if &big_d * &big_d > rest {
            break;
        }
        let mut mult = 0u32;
        loop {
            let (q, r) = rest.div_rem(&big_d);
            if r.is_zero() {
                rest = q;
                mult += 1;
            } else {
                break;
            }
        }
        if mult > 0 {
            factors.insert(big_d, mult);
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest.is_one() {
        return Factorization {
            factors,
            cofactor: None,
        };
    }
    match is_prime_certified(&rest) {
        Ok(true) => {
            *factors.entry(rest).or_insert(0) += 1;
            Factorization {
                factors,
                cofactor: None,
            }
        }
        _ => Factorization {
            factors,
            cofactor: Some(rest),
        },
    }
}
