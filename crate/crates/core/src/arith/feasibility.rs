//! Exact feasibility of small homogeneous linear inequality systems.
//!
//! Destabilizing one-parameter subgroups are integer vectors r with
//! Σ r_i = 0 whose pairings against a finite set of weight vectors are all
//! positive (or all nonnegative for the boundary case). After eliminating
//! the sum constraint these are cone-feasibility questions in at most
//! three variables, solved here by Fourier-Motzkin elimination over ℚ.
//! Everything is exact; the returned witness is an integer vector checked
//! against the original system before it leaves this module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

const MAX_VARIABLES: usize = 4;

/// One homogeneous constraint Σ coeffs[j]·x_j {>, ≥} 0.
#[derive(Clone, Debug)]
struct Constraint {
    coeffs: Vec<BigRational>,
    strict: bool,
}

/// Find a rational point satisfying every constraint, or `None`.
/// Constraints must all have `nvars` coefficients.
fn fourier_motzkin(constraints: &[Constraint], nvars: usize) -> Option<Vec<BigRational>> {
    if nvars == 0 {
        // Every constraint reads 0 {>, ≥} 0.
        if constraints.iter().any(|c| c.strict) {
            return None;
        }
        return Some(vec![]);
    }
    let k = nvars - 1;
    let mut lowers: Vec<&Constraint> = vec![];
    let mut uppers: Vec<&Constraint> = vec![];
    let mut rest: Vec<Constraint> = vec![];
    for c in constraints {
        if c.coeffs[k].is_positive() {
            lowers.push(c);
        } else if c.coeffs[k].is_negative() {
            uppers.push(c);
        } else {
            rest.push(Constraint {
                coeffs: c.coeffs[..k].to_vec(),
                strict: c.strict,
            });
        }
    }
    for lo in &lowers {
        for up in &uppers {
            let a = &lo.coeffs[k];
            let b = &up.coeffs[k];
            // a > 0, b < 0: (-b)·lo + a·up cancels x_k.
            let coeffs: Vec<BigRational> = (0..k)
                .map(|j| &lo.coeffs[j] * (-b) + &up.coeffs[j] * a)
                .collect();
            rest.push(Constraint {
                coeffs,
                strict: lo.strict || up.strict,
            });
        }
    }
    let partial = fourier_motzkin(&rest, k)?;
    // Back-substitute: bound x_k by the binding lower and upper limits.
    let eval_bound = |c: &Constraint| -> BigRational {
        let rest_val: BigRational = c.coeffs[..k]
            .iter()
            .zip(&partial)
            .map(|(cf, v)| cf * v)
            .fold(BigRational::zero(), |a, b| a + b);
        -rest_val / &c.coeffs[k]
    };
    let mut lo_bound: Option<(BigRational, bool)> = None;
    for c in &lowers {
        let v = eval_bound(c);
        lo_bound = Some(match lo_bound {
            None => (v, c.strict),
            Some((cur, cur_strict)) => {
                if v > cur {
                    (v, c.strict)
                } else if v == cur {
                    (cur, cur_strict || c.strict)
                } else {
                    (cur, cur_strict)
                }
            }
        });
    }
    let mut hi_bound: Option<(BigRational, bool)> = None;
    for c in &uppers {
        let v = eval_bound(c);
        hi_bound = Some(match hi_bound {
            None => (v, c.strict),
            Some((cur, cur_strict)) => {
                if v < cur {
                    (v, c.strict)
                } else if v == cur {
                    (cur, cur_strict || c.strict)
                } else {
                    (cur, cur_strict)
                }
            }
        });
    }
    let one = BigRational::from(BigInt::from(1));
    let two = BigRational::from(BigInt::from(2));
    let value = match (lo_bound, hi_bound) {
        (None, None) => BigRational::zero(),
        (Some((lo, strict)), None) => {
            if strict {
                lo + &one
            } else {
                lo
            }
        }
        (None, Some((hi, strict))) => {
            if strict {
                hi - &one
            } else {
                hi
            }
        }
        (Some((lo, lo_strict)), Some((hi, hi_strict))) => {
            debug_assert!(
                lo < hi || (lo == hi && !lo_strict && !hi_strict),
                "eliminated system admits no value, contradicting feasibility"
            );
            if lo == hi {
                lo
            } else {
                (lo + hi) / &two
            }
        }
    };
    let mut out = partial;
    out.push(value);
    Some(out)
}

fn check_shape(rows: &[Vec<i64>]) -> Result<usize> {
    let first = rows.first().ok_or(Error::EmptyInput("weight rows"))?;
    let m = first.len();
    if rows.iter().any(|r| r.len() != m) {
        return Err(Error::Construction("weight rows of unequal length".into()));
    }
    if m < 2 {
        return Err(Error::Construction(
            "weight rows need at least two coordinates".into(),
        ));
    }
    if m > MAX_VARIABLES {
        return Err(Error::Budget(format!(
            "inequality elimination supports at most {MAX_VARIABLES} coordinates, got {m}"
        )));
    }
    Ok(m)
}

/// Substitute x_{m-1} = -(x_0 + ... + x_{m-2}) into homogeneous rows.
fn reduced_constraints(rows: &[Vec<i64>], m: usize, strict: bool) -> Vec<Constraint> {
    rows.iter()
        .map(|w| Constraint {
            coeffs: (0..m - 1)
                .map(|j| BigRational::from(BigInt::from(w[j] - w[m - 1])))
                .collect(),
            strict,
        })
        .collect()
}

/// Search for an integer vector r with Σ r_i = 0 and `w · r ≥ 1` for every
/// input row w. Returns a gcd-reduced witness, re-verified against the
/// rows before return.
pub fn strict_cone_feasible(rows: &[Vec<i64>]) -> Result<Option<Vec<i64>>> {
    let m = check_shape(rows)?;
    let constraints = reduced_constraints(rows, m, true);
    let Some(point) = fourier_motzkin(&constraints, m - 1) else {
        return Ok(None);
    };
    let r = integerize(&point, m)?;
    for w in rows {
        let dot: i64 = w.iter().zip(&r).map(|(a, b)| a * b).sum();
        if dot < 1 {
            return Err(Error::Invariant(format!(
                "feasibility witness {r:?} fails row {w:?}"
            )));
        }
    }
    Ok(Some(r))
}

/// Decide whether some nonzero integer r with Σ r_i = 0 satisfies
/// `w · r ≥ 0` for every row. Distinguishes boundary points of the
/// feasible cone from its interior: runs one strict probe per signed
/// coordinate direction.
pub fn nonneg_cone_nontrivial(rows: &[Vec<i64>]) -> Result<bool> {
    let m = check_shape(rows)?;
    let base = reduced_constraints(rows, m, false);
    for j in 0..m - 1 {
        for sign in [1i64, -1] {
            let mut constraints = base.clone();
            let mut coeffs = vec![BigRational::zero(); m - 1];
            coeffs[j] = BigRational::from(BigInt::from(sign));
            constraints.push(Constraint {
                coeffs,
                strict: true,
            });
            if fourier_motzkin(&constraints, m - 1).is_some() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Scale a rational point to integers, append the balancing coordinate,
/// and reduce by the gcd.
fn integerize(point: &[BigRational], m: usize) -> Result<Vec<i64>> {
    let lcm = point
        .iter()
        .fold(BigInt::from(1), |acc, x| acc.lcm(x.denom()));
    let mut r: Vec<BigInt> = point
        .iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect();
    let last: BigInt = -r.iter().fold(BigInt::zero(), |a, b| a + b);
    r.push(last);
    debug_assert_eq!(r.len(), m);
    let g = r
        .iter()
        .fold(BigInt::zero(), |acc, x| acc.gcd(&x.abs()));
    if g > BigInt::from(1) {
        for x in &mut r {
            *x /= &g;
        }
    }
    r.into_iter()
        .map(|x| {
            x.to_i64().ok_or_else(|| {
                Error::SizeLimit("feasibility witness exceeds i64 range".into())
            })
        })
        .collect()
}
