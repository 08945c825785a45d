//! GIT semistability of reduced presentations, with checkable witnesses.
//!
//! A reduced point is unstable exactly when some one-parameter subgroup
//! drives it to zero: there is a change of basis g over F_p and an
//! integer vector r with Σ r_i = 0 such that every nonzero coordinate of
//! the conjugated point has positive weight. The weight of the
//! coefficient of monomial e in the i-th form under diag(t^{r_0}, ...,
//! t^{r_n}) is ⟨e, r⟩ - r_i, so instability is a finite search: for each
//! coset representative g of the full flag variety, collect the weight
//! vectors e - δ_i over the support of the conjugated point and ask for
//! an integer point in the open cone they cut out. A conjugating matrix
//! can be reduced to a flag representative because upper-triangular
//! factors only mix coordinates whose weights already compare favorably
//! in a dominant order.
//!
//! Witnesses are re-verified from scratch before being returned, and
//! verdicts never come from the search alone when an extension-field
//! cross-check is requested.

use rayon::prelude::*;

use crate::arith::feasibility::{nonneg_cone_nontrivial, strict_cone_feasible};
use crate::arith::ff::{mat_det, rref, ExtField, FieldCtx, FiniteFieldCtx, PrimeField};
use crate::arith::primes::PrimeInt;
use crate::error::{Error, Result};
use crate::poly::conjugate_tuple;
use crate::presentation::{Presentation, ReducedPoint};

/// Scope bounds for the semistability search. Anything outside them is
/// refused with a budget error, never guessed.
#[derive(Clone, Debug)]
pub struct SemistabilityOptions {
    /// Largest projective dimension n the flag enumeration will accept.
    pub max_dimension: usize,
    /// Largest prime the flag enumeration will accept.
    pub max_prime: u64,
    /// 1 checks over F_p only; 2 or 3 additionally re-runs the
    /// enumeration over F_{p^k} and requires the verdicts to agree.
    /// Witnesses are always reported over F_p.
    pub enumeration_degree: usize,
    /// When true and the point is semistable, also decide whether some
    /// nontrivial one-parameter subgroup has all weights ≥ 0, which
    /// separates strictly semistable points from stable ones.
    pub classify_boundary: bool,
}

impl Default for SemistabilityOptions {
    fn default() -> SemistabilityOptions {
        SemistabilityOptions {
            max_dimension: 2,
            max_prime: 7,
            enumeration_degree: 1,
            classify_boundary: false,
        }
    }
}

/// A destabilizing one-parameter subgroup: conjugate by `flag`, then act
/// by diag(t^{r_0}, ..., t^{r_n}). Valid exactly when every support
/// coordinate of the conjugated point pairs to at least 1 against r.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OnePSWitness {
    pub prime: u64,
    pub flag: Vec<Vec<u64>>,
    pub r: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemistabilityVerdict {
    pub semistable: bool,
    pub witness: Option<OnePSWitness>,
    /// Populated only when `classify_boundary` was set and the point is
    /// semistable: true means not stable.
    pub strictly_semistable: Option<bool>,
}

/// Weight vector of the coefficient of `exponents` in form `form_index`
/// under a diagonal one-parameter subgroup: e - δ_i.
pub fn coordinate_weights(form_index: usize, exponents: &[u32]) -> Vec<i64> {
    exponents
        .iter()
        .enumerate()
        .map(|(j, &e)| e as i64 - (j == form_index) as i64)
        .collect()
}

/// One support coordinate of a conjugated point together with its weight
/// vector, as displayed in reports and used by witness verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightFunctional {
    pub form_index: usize,
    pub exponents: Vec<u32>,
    pub weights: Vec<i64>,
}

/// Canonical representatives of complete flags in F^{n+1} over a finite
/// field, as row-major matrices whose j-th column spans the j-th step of
/// the flag modulo the earlier ones. Each flag appears exactly once; the
/// list is sorted lexicographically row-major so searches are
/// deterministic.
fn flag_representatives<C: FiniteFieldCtx>(ctx: &C, n: usize) -> Vec<Vec<Vec<C::El>>> {
    let dim = n + 1;
    let mut out: Vec<Vec<Vec<C::El>>> = Vec::new();
    let mut columns: Vec<Vec<C::El>> = Vec::new();
    extend_flag(ctx, dim, &mut columns, &[], &mut out);
    out.sort();
    out
}

fn extend_flag<C: FiniteFieldCtx>(
    ctx: &C,
    dim: usize,
    columns: &mut Vec<Vec<C::El>>,
    span_rows: &[Vec<C::El>],
    out: &mut Vec<Vec<Vec<C::El>>>,
) {
    if columns.len() == dim {
        let rows = (0..dim)
            .map(|i| (0..dim).map(|j| columns[j][i].clone()).collect())
            .collect();
        out.push(rows);
        return;
    }
    // Pivot positions of the current span; each line of the quotient has
    // exactly one representative supported on the complementary
    // positions with leading coefficient 1.
    let pivots: Vec<usize> = span_rows
        .iter()
        .map(|r| r.iter().position(|x| !ctx.is_zero(x)).expect("nonzero row"))
        .collect();
    let free: Vec<usize> = (0..dim).filter(|i| !pivots.contains(i)).collect();
    let elements = ctx.elements();
    let base = elements.len() as u64;
    for (lead_pos, &lead) in free.iter().enumerate() {
        let tail = &free[lead_pos + 1..];
        let combos = base
            .checked_pow(tail.len() as u32)
            .expect("extension bound keeps tail assignments countable");
        for code in 0..combos {
            let mut v = vec![ctx.zero(); dim];
            v[lead] = ctx.one();
            let mut c = code;
            for &pos in tail {
                v[pos] = elements[(c % base) as usize].clone();
                c /= base;
            }
            let mut next_span = span_rows.to_vec();
            next_span.push(v.clone());
            let next_span = rref(ctx, next_span);
            columns.push(v);
            extend_flag(ctx, dim, columns, &next_span, out);
            columns.pop();
        }
    }
}

/// Weight rows over the support of a coordinate tuple.
fn support_weight_rows<C: FieldCtx>(
    ctx: &C,
    n: usize,
    d: u32,
    coords: &[Vec<C::El>],
) -> Vec<Vec<i64>> {
    let table = crate::poly::monomial_table(n, d);
    let mut rows = Vec::new();
    for (i, form) in coords.iter().enumerate() {
        for (j, c) in form.iter().enumerate() {
            if !ctx.is_zero(c) {
                rows.push(coordinate_weights(i, table.exponents(j)));
            }
        }
    }
    rows
}

/// Search every flag for a destabilizing r; the first flag in lex order
/// with a feasible system wins.
fn search_flags<C>(
    ctx: &C,
    n: usize,
    d: u32,
    coords: &[Vec<C::El>],
    flags: &[Vec<Vec<C::El>>],
) -> Result<Option<(Vec<Vec<C::El>>, Vec<i64>)>>
where
    C: FiniteFieldCtx + Sync,
    C::El: Send + Sync,
{
    let hit = flags
        .par_iter()
        .find_map_first(|flag| {
            let attempt = (|| -> Result<Option<(Vec<Vec<C::El>>, Vec<i64>)>> {
                let conj = conjugate_tuple(ctx, n, d, coords, flag)?;
                let rows = support_weight_rows(ctx, n, d, &conj);
                Ok(strict_cone_feasible(&rows)?.map(|r| (flag.clone(), r)))
            })();
            match attempt {
                Ok(None) => None,
                Ok(Some(found)) => Some(Ok(found)),
                Err(e) => Some(Err(e)),
            }
        });
    hit.transpose()
}

fn check_budget(x: &ReducedPoint, opts: &SemistabilityOptions) -> Result<()> {
    if x.n() > opts.max_dimension {
        return Err(Error::Budget(format!(
            "semistability enumeration supports n ≤ {}, got n = {}",
            opts.max_dimension,
            x.n()
        )));
    }
    if x.prime() > opts.max_prime {
        return Err(Error::Budget(format!(
            "semistability enumeration supports p ≤ {}, got p = {}",
            opts.max_prime,
            x.prime()
        )));
    }
    Ok(())
}

/// Decide semistability of a reduced point by exhaustive flag search.
pub fn is_semistable(x: &ReducedPoint, opts: &SemistabilityOptions) -> Result<SemistabilityVerdict> {
    check_budget(x, opts)?;
    let ctx = PrimeField { p: x.prime() };
    let flags = flag_representatives(&ctx, x.n());
    let hit = search_flags(&ctx, x.n(), x.degree(), x.coords(), &flags)?;
    let witness = hit.map(|(flag, r)| OnePSWitness {
        prime: x.prime(),
        flag,
        r,
    });
    if let Some(w) = &witness {
        verify_witness(x, w)?;
    }
    if opts.enumeration_degree > 1 {
        let over_ext = semistable_over_extension(x, opts.enumeration_degree)?;
        if over_ext != witness.is_none() {
            return Err(Error::Invariant(format!(
                "semistability verdicts disagree between F_{p} and F_{p}^{k}",
                p = x.prime(),
                k = opts.enumeration_degree
            )));
        }
    }
    let strictly_semistable = if witness.is_none() && opts.classify_boundary {
        Some(boundary_is_nontrivial(&ctx, x, &flags)?)
    } else {
        None
    };
    Ok(SemistabilityVerdict {
        semistable: witness.is_none(),
        witness,
        strictly_semistable,
    })
}

/// Reduce a presentation at p and decide semistability of the reduction.
pub fn is_semistable_presentation(
    f: &Presentation,
    p: &PrimeInt,
    opts: &SemistabilityOptions,
) -> Result<SemistabilityVerdict> {
    is_semistable(&f.reduce_at(p)?, opts)
}

fn boundary_is_nontrivial(
    ctx: &PrimeField,
    x: &ReducedPoint,
    flags: &[Vec<Vec<u64>>],
) -> Result<bool> {
    for flag in flags {
        let conj = conjugate_tuple(ctx, x.n(), x.degree(), x.coords(), flag)?;
        let rows = support_weight_rows(ctx, x.n(), x.degree(), &conj);
        if nonneg_cone_nontrivial(&rows)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Support of the conjugated point with weight vectors, for reporting.
pub fn witness_support_weights(
    x: &ReducedPoint,
    witness: &OnePSWitness,
) -> Result<Vec<WeightFunctional>> {
    let conj = x.conjugate(&witness.flag)?;
    Ok(conj
        .support()
        .into_iter()
        .map(|(i, e)| {
            let weights = coordinate_weights(i, &e);
            WeightFunctional {
                form_index: i,
                exponents: e,
                weights,
            }
        })
        .collect())
}

/// Re-check a witness from its stored data alone: the flag must be
/// invertible mod p, r must be a nonzero zero-sum vector, and every
/// support coordinate of the conjugated point must pair to at least 1.
pub fn verify_witness(x: &ReducedPoint, witness: &OnePSWitness) -> Result<()> {
    if witness.prime != x.prime() {
        return Err(Error::Invariant("witness prime mismatch".into()));
    }
    if witness.r.len() != x.n() + 1 {
        return Err(Error::Invariant("witness r has wrong length".into()));
    }
    if witness.r.iter().sum::<i64>() != 0 {
        return Err(Error::Invariant("witness r does not sum to zero".into()));
    }
    if witness.r.iter().all(|&v| v == 0) {
        return Err(Error::Invariant("witness r is zero".into()));
    }
    let ctx = PrimeField { p: x.prime() };
    if ctx.is_zero(&mat_det(&ctx, &witness.flag)) {
        return Err(Error::Invariant("witness flag is singular".into()));
    }
    let support = witness_support_weights(x, witness)?;
    if support.is_empty() {
        return Err(Error::Invariant("conjugated point has empty support".into()));
    }
    for item in &support {
        let dot: i64 = item
            .weights
            .iter()
            .zip(&witness.r)
            .map(|(w, r)| w * r)
            .sum();
        if dot < 1 {
            return Err(Error::Invariant(format!(
                "witness fails on form {} monomial {:?}: weight {dot} < 1",
                item.form_index, item.exponents
            )));
        }
    }
    Ok(())
}

const EXT_VECTOR_BOUND: u64 = 1 << 17;

/// Diagnostic: run the same enumeration over F_{p^k}, k ≤ 3. Returns the
/// bare verdict; destabilizers over the extension are not reported as
/// witnesses.
pub fn semistable_over_extension(x: &ReducedPoint, k: usize) -> Result<bool> {
    if k <= 1 {
        let ctx = PrimeField { p: x.prime() };
        let flags = flag_representatives(&ctx, x.n());
        let hit = search_flags(&ctx, x.n(), x.degree(), x.coords(), &flags)?;
        return Ok(hit.is_none());
    }
    let ext = ExtField::new(x.prime(), k)?;
    let q = ext.order();
    let vectors = q
        .checked_pow(x.n() as u32 + 1)
        .ok_or_else(|| Error::SizeLimit("extension vector count overflows".into()))?;
    if vectors > EXT_VECTOR_BOUND {
        return Err(Error::Budget(format!(
            "flag enumeration over F_{}^{k} needs {vectors} vectors, above the bound {EXT_VECTOR_BOUND}",
            x.prime()
        )));
    }
    let coords: Vec<Vec<Vec<u64>>> = x
        .coords()
        .iter()
        .map(|f| f.iter().map(|&c| ext.lift_residue(c)).collect())
        .collect();
    let flags = flag_representatives(&ext, x.n());
    let hit = search_flags(&ext, x.n(), x.degree(), &coords, &flags)?;
    Ok(hit.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(n: usize, d: u32, p: u64, coords: &[&[u64]]) -> ReducedPoint {
        ReducedPoint::new(n, d, p, coords.iter().map(|f| f.to_vec()).collect()).unwrap()
    }

    fn flag_count<C: FiniteFieldCtx>(ctx: &C, n: usize) -> usize {
        flag_representatives(ctx, n).len()
    }

    #[test]
    fn flag_enumeration_counts() {
        // Complete flags in F_p^2 are lines: p + 1 of them.
        assert_eq!(flag_count(&PrimeField { p: 2 }, 1), 3);
        assert_eq!(flag_count(&PrimeField { p: 3 }, 1), 4);
        assert_eq!(flag_count(&PrimeField { p: 5 }, 1), 6);
        // Flags in F_2^3: 7 lines × 3 planes through each.
        assert_eq!(flag_count(&PrimeField { p: 2 }, 2), 21);
        assert_eq!(flag_count(&PrimeField { p: 3 }, 2), 52);
    }

    #[test]
    fn flags_are_sorted_distinct_and_invertible() {
        let ctx = PrimeField { p: 3 };
        let flags = flag_representatives(&ctx, 2);
        for w in flags.windows(2) {
            assert!(w[0] < w[1]);
        }
        for flag in &flags {
            assert!(!ctx.is_zero(&mat_det(&ctx, flag)));
        }
    }

    #[test]
    fn first_flag_over_f2_is_the_swap() {
        let flags = flag_representatives(&PrimeField { p: 2 }, 1);
        assert_eq!(flags[0], vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(flags[1], vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(flags[2], vec![vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn degenerate_pair_is_unstable_with_expected_witness() {
        // (0, y²) over F_2: conjugating by the swap makes the support a
        // single coordinate of weight (1, 0), destabilized by r = (1, -1).
        let x = point(1, 2, 2, &[&[0, 0, 0], &[0, 0, 1]]);
        let verdict = is_semistable(&x, &SemistabilityOptions::default()).unwrap();
        assert!(!verdict.semistable);
        let w = verdict.witness.unwrap();
        assert_eq!(w.flag, vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(w.r, vec![1, -1]);
        verify_witness(&x, &w).unwrap();
    }

    #[test]
    fn common_factor_pair_is_unstable() {
        let x = point(1, 2, 3, &[&[1, 0, 0], &[0, 1, 0]]);
        let verdict = is_semistable(&x, &SemistabilityOptions::default()).unwrap();
        assert!(!verdict.semistable);
        let w = verdict.witness.unwrap();
        assert_eq!(w.flag, vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(w.r, vec![-1, 1]);
        verify_witness(&x, &w).unwrap();
    }

    #[test]
    fn power_map_reduction_is_stable() {
        let x = point(1, 2, 2, &[&[1, 0, 0], &[0, 0, 1]]);
        let opts = SemistabilityOptions {
            classify_boundary: true,
            ..SemistabilityOptions::default()
        };
        let verdict = is_semistable(&x, &opts).unwrap();
        assert!(verdict.semistable);
        assert!(verdict.witness.is_none());
        assert_eq!(verdict.strictly_semistable, Some(false));
    }

    #[test]
    fn balanced_degenerate_point_is_strictly_semistable() {
        // (x²y, xy²): every weight pairs to 0 against r = (1, -1), so the
        // point sits on the semistable boundary without being unstable.
        let x = point(1, 3, 2, &[&[0, 1, 0, 0], &[0, 0, 1, 0]]);
        let opts = SemistabilityOptions {
            classify_boundary: true,
            ..SemistabilityOptions::default()
        };
        let verdict = is_semistable(&x, &opts).unwrap();
        assert!(verdict.semistable);
        assert_eq!(verdict.strictly_semistable, Some(true));
    }

    #[test]
    fn semistable_bad_reduction_example() {
        // (3x² + y², xy) reduces mod 3 to (y², xy), which no flag
        // destabilizes even though the reduced map is degenerate.
        let x = point(1, 2, 3, &[&[0, 0, 1], &[0, 1, 0]]);
        let verdict = is_semistable(&x, &SemistabilityOptions::default()).unwrap();
        assert!(verdict.semistable);
    }

    #[test]
    fn diagonal_plane_map_is_semistable() {
        let x = point(
            2,
            2,
            2,
            &[
                &[1, 0, 0, 0, 0, 0],
                &[0, 0, 0, 1, 0, 0],
                &[0, 0, 0, 0, 0, 1],
            ],
        );
        let verdict = is_semistable(&x, &SemistabilityOptions::default()).unwrap();
        assert!(verdict.semistable);
    }

    #[test]
    fn plane_map_missing_a_form_is_unstable() {
        let x = point(
            2,
            2,
            2,
            &[
                &[1, 0, 0, 0, 0, 0],
                &[0, 0, 0, 1, 0, 0],
                &[0, 0, 0, 0, 0, 0],
            ],
        );
        let verdict = is_semistable(&x, &SemistabilityOptions::default()).unwrap();
        assert!(!verdict.semistable);
        verify_witness(&x, &verdict.witness.unwrap()).unwrap();
    }

    #[test]
    fn budget_refusals() {
        let x = point(1, 2, 11, &[&[1, 0, 0], &[0, 0, 1]]);
        assert!(matches!(
            is_semistable(&x, &SemistabilityOptions::default()),
            Err(Error::Budget(_))
        ));
        let opts = SemistabilityOptions {
            max_prime: 13,
            ..SemistabilityOptions::default()
        };
        assert!(is_semistable(&x, &opts).unwrap().semistable);
    }

    #[test]
    fn tampered_witnesses_are_rejected() {
        let x = point(1, 2, 2, &[&[0, 0, 0], &[0, 0, 1]]);
        let verdict = is_semistable(&x, &SemistabilityOptions::default()).unwrap();
        let w = verdict.witness.unwrap();
        let flipped = OnePSWitness {
            r: w.r.iter().map(|v| -v).collect(),
            ..w.clone()
        };
        assert!(matches!(
            verify_witness(&x, &flipped),
            Err(Error::Invariant(_))
        ));
        let unbalanced = OnePSWitness {
            r: vec![1, 0],
            ..w.clone()
        };
        assert!(matches!(
            verify_witness(&x, &unbalanced),
            Err(Error::Invariant(_))
        ));
        let singular = OnePSWitness {
            flag: vec![vec![1, 1], vec![1, 1]],
            ..w
        };
        assert!(matches!(
            verify_witness(&x, &singular),
            Err(Error::Invariant(_))
        ));
    }

    #[test]
    fn extension_field_verdicts_agree() {
        let unstable = point(1, 2, 2, &[&[0, 0, 0], &[0, 0, 1]]);
        assert!(!semistable_over_extension(&unstable, 2).unwrap());
        let stable = point(1, 3, 2, &[&[1, 0, 0, 0], &[0, 0, 0, 1]]);
        assert!(semistable_over_extension(&stable, 2).unwrap());
        assert!(semistable_over_extension(&stable, 3).unwrap());
        let opts = SemistabilityOptions {
            enumeration_degree: 2,
            ..SemistabilityOptions::default()
        };
        assert!(is_semistable(&stable, &opts).unwrap().semistable);
        assert!(!is_semistable(&unstable, &opts).unwrap().semistable);
    }

    #[test]
    fn presentation_reduction_round_trip() {
        use num_bigint::BigInt;
        use num_rational::BigRational;
        let rat = |x: i64| BigRational::from(BigInt::from(x));
        let f = Presentation::new(
            1,
            2,
            vec![
                vec![rat(3), rat(0), rat(1)],
                vec![rat(0), rat(1), rat(0)],
            ],
        )
        .unwrap();
        let p3 = PrimeInt::from_u64(3).unwrap();
        let verdict =
            is_semistable_presentation(&f, &p3, &SemistabilityOptions::default()).unwrap();
        assert!(verdict.semistable);
    }
}
