//! Brute-force oracles for cross-checking the main algorithms on small
//! inputs. These deliberately share as little code as possible with the
//! implementations they check: instability on P^1 is decided by scanning
//! every invertible matrix over F_p instead of flag representatives and
//! cone feasibility, and minimal valuations are recomputed with a full
//! resultant per candidate instead of the conjugation identity.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::arith::matrix::RationalMatrix;
use crate::arith::primes::PrimeInt;
use crate::error::{Error, Result};
use crate::presentation::{Presentation, ReducedPoint};
use crate::resultant::valuation_report;

/// Weight gap of a support monomial under the one-parameter subgroup
/// diag(t, t^{-1}) acting on presentations of P^1: the coefficient of
/// x^{e_0} y^{e_1} in form i scales by t to this power.
fn p1_weight_gap(form: usize, exps: &[u32]) -> i64 {
    let wx = exps[0] as i64 - if form == 0 { 1 } else { 0 };
    let wy = exps[1] as i64 - if form == 1 { 1 } else { 0 };
    wx - wy
}

/// Decides instability of a reduced point on P^1 by scanning every
/// invertible 2x2 matrix over F_p: the point is unstable exactly when
/// some conjugate has every surviving coefficient strictly heavier in x
/// than in y, since diag(t^a, t^{-a}) with a >= 1 scales such a
/// coefficient by t^{a·gap} and the sign of the gap is all that matters.
pub fn p1_unstable_by_full_scan(point: &ReducedPoint) -> Result<bool> {
    if point.n() != 1 {
        return Err(Error::Construction(
            "full matrix scan oracle only covers P^1".into(),
        ));
    }
    let p = point.prime();
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                for d in 0..p {
                    let det = (a * d % p + p - b * c % p) % p;
                    if det == 0 {
                        continue;
                    }
                    let conj = point.conjugate(&[vec![a, b], vec![c, d]])?;
                    if conj
                        .support()
                        .iter()
                        .all(|(form, exps)| p1_weight_gap(*form, exps) >= 1)
                    {
                        return Ok(true);
                    }
                }
            }
        }
    }
    Ok(false)
}

/// Smallest ord_R at p over the identity and every candidate
/// (swap)^ε · [[p^α, β], [0, 1]] with α ≤ bound, recomputing a full
/// valuation report for every single conjugate.
pub fn p1_min_ord_by_full_reports(
    f: &Presentation,
    p: &PrimeInt,
    bound: u32,
) -> Result<i64> {
    if f.n() != 1 {
        return Err(Error::Construction(
            "full report oracle only covers P^1".into(),
        ));
    }
    let pv = p
        .to_u64()
        .ok_or_else(|| Error::SizeLimit("oracle prime does not fit in a machine word".into()))?;
    let ord_of = |g: &Presentation| -> Result<i64> {
        valuation_report(g, p)?.ord_r.finite().ok_or(Error::NotAMorphism)
    };
    let mut best = ord_of(f)?;
    for swap in [false, true] {
        for alpha in 1..=bound {
            let p_alpha = (pv as u128)
                .checked_pow(alpha)
                .ok_or_else(|| Error::SizeLimit("oracle candidate modulus overflow".into()))?;
            for beta in 0..p_alpha {
                let scale_row = vec![
                    BigRational::from(BigInt::from(p_alpha)),
                    BigRational::from(BigInt::from(beta)),
                ];
                let unit_row = vec![
                    BigRational::from(BigInt::from(0)),
                    BigRational::from(BigInt::from(1)),
                ];
                let rows = if swap {
                    vec![unit_row, scale_row]
                } else {
                    vec![scale_row, unit_row]
                };
                let gamma = RationalMatrix::from_rows(rows);
                best = best.min(ord_of(&f.conjugate(&gamma)?)?);
            }
        }
    }
    Ok(best)
}
