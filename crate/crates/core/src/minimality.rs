//! Minimality of presentations at a prime, minimal models, and the
//! global minimal resultant divisor.
//!
//! The normalized valuation ord_R is nonnegative and invariant under
//! scaling and p-unimodular conjugation, so lowering it means conjugating
//! by matrices that are genuinely new modulo units: integer matrices with
//! p-power determinant, taken up to a right unimodular factor. Those are
//! enumerated in column Hermite form, upper triangular with p-power
//! diagonal and reduced off-diagonals; for P^1 the family is written as
//! optional swap times [[p^α, β], [0, 1]].
//!
//! A presentation is certified minimal in two ways that need no search:
//! ord_R = 0 is the floor, and a semistable reduction pins the valuation
//! from below. Otherwise the bounded family is searched exhaustively; the
//! outcome records exactly what was searched, and every claimed
//! improvement is re-verified with a fresh resultant computation before
//! it is reported.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::arith::matrix::RationalMatrix;
use crate::arith::primes::{factor_with_limits, PrimeInt};
use crate::arith::valuation::{ord_p, Valuation};
use crate::error::{Error, Result};
use crate::presentation::Presentation;
use crate::resultant::{
    conjugation_exponent, resultant, scaling_exponent, valuation_report,
};
use crate::semistability::{is_semistable, SemistabilityOptions, SemistabilityVerdict};

/// How a conjugating candidate was generated, for reporting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CandidateDescription {
    /// P^1 family: (swap)^ε · [[p^α, β], [0, 1]].
    ScaleTranslate { swap: bool, alpha: u32, beta: u64 },
    /// Column Hermite form with diagonal p^{a_0}, ..., p^{a_n}.
    HermiteLattice { diagonal_exponents: Vec<u32> },
}

#[derive(Clone, Debug)]
pub struct ConjugationCandidate {
    pub description: CandidateDescription,
    pub gamma: RationalMatrix,
    /// ord_p of det(gamma), known exactly from the construction.
    pub det_ord: i64,
}

/// Scope of the minimality search.
#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub semistability: SemistabilityOptions,
    /// Largest diagonal exponent in the candidate family.
    pub search_bound: u32,
    /// Hard cap on enumerated candidates; the effective bound shrinks
    /// until the family fits, and the certificate records what was
    /// actually searched.
    pub max_candidates: u64,
    /// Trial division limit when factoring resultants.
    pub trial_division_limit: u64,
}

impl Default for SearchOptions {
    fn default() -> SearchOptions {
        SearchOptions {
            semistability: SemistabilityOptions::default(),
            search_bound: 3,
            max_candidates: 100_000,
            trial_division_limit: 100_000,
        }
    }
}

#[derive(Clone, Debug)]
pub enum MinimalityStatus {
    /// ord_R = 0: nothing can be lower.
    MinimalValuationZero,
    /// The reduction mod p is semistable, which pins ord_R at its
    /// current value for every conjugate.
    MinimalSemistableReduction,
    /// A strictly better model was found (and re-verified).
    Improved {
        candidate: CandidateDescription,
        gamma: RationalMatrix,
        new_ord: i64,
    },
    /// No improvement inside the family with the recorded bound; bound 0
    /// means the family at this prime was too large to enumerate at all.
    SearchExhausted { bound: u32 },
}

#[derive(Clone, Debug)]
pub struct MinimalityCertificate {
    pub prime: PrimeInt,
    pub initial_ord: i64,
    /// None when the semistability check was refused for budget reasons.
    pub reduction_semistable: Option<bool>,
    pub status: MinimalityStatus,
}

impl MinimalityCertificate {
    /// The valuation this certificate leaves the presentation at.
    pub fn resulting_ord(&self) -> i64 {
        match &self.status {
            MinimalityStatus::Improved { new_ord, .. } => *new_ord,
            _ => self.initial_ord,
        }
    }

    /// True when minimality is proved, not merely unimproved.
    pub fn is_certified_minimal(&self) -> bool {
        matches!(
            self.status,
            MinimalityStatus::MinimalValuationZero | MinimalityStatus::MinimalSemistableReduction
        )
    }
}

fn pow_u128(base: u64, exp: u32) -> Option<u128> {
    (base as u128).checked_pow(exp)
}

/// P^1 candidates at p with diagonal exponent up to `bound`, trimmed to
/// the largest effective bound whose family fits in `max`. Identity and
/// plain swap are excluded: they are p-unimodular and cannot change
/// ord_R. Returns the candidates and the effective bound.
pub fn dimension_one_candidates(
    p: &PrimeInt,
    bound: u32,
    max: u64,
) -> Result<(Vec<ConjugationCandidate>, u32)> {
    let p_u64 = match p.to_u64() {
        Some(v) => v,
        None => return Ok((vec![], 0)),
    };
    let mut effective = 0u32;
    let mut total: u128 = 0;
    for alpha in 1..=bound {
        let Some(count) = pow_u128(p_u64, alpha) else { break };
        let next = total + 2 * count;
        if next > max as u128 {
            break;
        }
        total = next;
        effective = alpha;
    }
    let mut out = Vec::with_capacity(total as usize);
    for swap in [false, true] {
        for alpha in 1..=effective {
            let p_alpha = pow_u128(p_u64, alpha).expect("checked above");
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
                out.push(ConjugationCandidate {
                    description: CandidateDescription::ScaleTranslate {
                        swap,
                        alpha,
                        beta: beta as u64,
                    },
                    gamma: RationalMatrix::from_rows(rows),
                    det_ord: alpha as i64,
                });
            }
        }
    }
    Ok((out, effective))
}

/// Candidates in column Hermite form for any n: upper triangular with
/// diagonal p^{a_i}, min a_i = 0, not all zero, and row i reduced mod
/// p^{a_i} to the right of the diagonal. Trimmed like the P^1 family.
pub fn hermite_candidates(
    p: &PrimeInt,
    n: usize,
    bound: u32,
    max: u64,
) -> Result<(Vec<ConjugationCandidate>, u32)> {
    let p_u64 = match p.to_u64() {
        Some(v) => v,
        None => return Ok((vec![], 0)),
    };
    let dim = n + 1;
    let count_for = |b: u32| -> Option<u128> {
        let mut total: u128 = 0;
        let mut exps = vec![0u32; dim];
        loop {
            let min = *exps.iter().min().expect("nonempty");
            let all_zero = exps.iter().all(|&a| a == 0);
            if min == 0 && !all_zero {
                let mut combos: u128 = 1;
                for (i, &a) in exps.iter().enumerate() {
                    let free = (dim - 1 - i) as u32;
                    combos = combos.checked_mul(pow_u128(p_u64, a * free)?)?;
                    if combos > max as u128 {
                        return Some(max as u128 + 1);
                    }
                }
                total = total.checked_add(combos)?;
                if total > max as u128 {
                    return Some(max as u128 + 1);
                }
            }
            let mut i = 0;
            loop {
                if i == dim {
                    return Some(total);
                }
                exps[i] += 1;
                if exps[i] <= b {
                    break;
                }
                exps[i] = 0;
                i += 1;
            }
        }
    };
    let mut effective = 0u32;
    for b in (1..=bound).rev() {
        match count_for(b) {
            Some(total) if total <= max as u128 => {
                effective = b;
                break;
            }
            _ => {}
        }
    }
    if effective == 0 {
        return Ok((vec![], 0));
    }
    let mut out = Vec::new();
    let mut exps = vec![0u32; dim];
    loop {
        let min = *exps.iter().min().expect("nonempty");
        let all_zero = exps.iter().all(|&a| a == 0);
        if min == 0 && !all_zero {
            emit_hermite_matrices(p_u64, &exps, &mut out);
        }
        let mut i = 0;
        loop {
            if i == dim {
                return Ok((out, effective));
            }
            exps[i] += 1;
            if exps[i] <= effective {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
}

fn emit_hermite_matrices(p: u64, exps: &[u32], out: &mut Vec<ConjugationCandidate>) {
    let dim = exps.len();
    let moduli: Vec<u128> = exps
        .iter()
        .map(|&a| pow_u128(p, a).expect("bounded exponent"))
        .collect();
    // Off-diagonal slots in row-major order; entry in row i runs mod p^{a_i}.
    let slots: Vec<(usize, usize)> = (0..dim)
        .flat_map(|i| (i + 1..dim).map(move |j| (i, j)))
        .collect();
    let mut values = vec![0u128; slots.len()];
    let det_ord: i64 = exps.iter().map(|&a| a as i64).sum();
    loop {
        let rows: Vec<Vec<BigRational>> = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        let v: u128 = if i == j {
                            moduli[i]
                        } else if j > i {
                            let slot = slots
                                .iter()
                                .position(|&s| s == (i, j))
                                .expect("slot exists");
                            values[slot]
                        } else {
                            0
                        };
                        BigRational::from(BigInt::from(v))
                    })
                    .collect()
            })
            .collect();
        out.push(ConjugationCandidate {
            description: CandidateDescription::HermiteLattice {
                diagonal_exponents: exps.to_vec(),
            },
            gamma: RationalMatrix::from_rows(rows),
            det_ord,
        });
        let mut s = 0;
        loop {
            if s == slots.len() {
                return;
            }
            values[s] += 1;
            if values[s] < moduli[slots[s].0] {
                break;
            }
            values[s] = 0;
            s += 1;
        }
    }
}

fn candidate_family(
    p: &PrimeInt,
    n: usize,
    opts: &SearchOptions,
) -> Result<(Vec<ConjugationCandidate>, u32)> {
    if n == 1 {
        dimension_one_candidates(p, opts.search_bound, opts.max_candidates)
    } else {
        hermite_candidates(p, n, opts.search_bound, opts.max_candidates)
    }
}

fn require_dynamical_degree(f: &Presentation) -> Result<()> {
    if f.degree() < 2 {
        return Err(Error::Construction(
            "minimality analysis requires degree at least 2".into(),
        ));
    }
    Ok(())
}

/// Outcome of one bounded search for a strictly better conjugate.
#[derive(Clone, Debug)]
pub struct ImprovementSearch {
    pub initial_ord: i64,
    pub effective_bound: u32,
    pub candidates_searched: usize,
    /// Best strict improvement with its new valuation, re-verified by a
    /// full resultant recomputation before being reported; ties broken
    /// toward the earliest candidate in enumeration order.
    pub improvement: Option<(ConjugationCandidate, i64)>,
}

/// Search the bounded candidate family at p for a conjugate with
/// strictly smaller ord_R, regardless of any minimality certificate.
/// The valuation of each candidate is predicted from the conjugation
/// identity (no resultant per candidate); only the winner is checked
/// against a fresh resultant computation.
pub fn search_improvement(
    f: &Presentation,
    p: &PrimeInt,
    opts: &SearchOptions,
) -> Result<ImprovementSearch> {
    require_dynamical_degree(f)?;
    let report = valuation_report(f, p)?;
    let Valuation::Finite(initial_ord) = report.ord_r else {
        return Err(Error::NotAMorphism);
    };
    let (candidates, effective_bound) = candidate_family(p, f.n(), opts)?;
    let conj_exp = conjugation_exponent(f.n(), f.degree())? as i64;
    let scale_exp = scaling_exponent(f.n(), f.degree())? as i64;
    let ord_rho = report
        .ord_resultant
        .finite()
        .expect("nonzero resultant has finite order");
    let evaluated: Result<Vec<(i64, usize)>> = candidates
        .par_iter()
        .enumerate()
        .map(|(idx, cand)| {
            let conj = f.conjugate(&cand.gamma)?;
            let min_ord = conj.min_coeff_ord(p);
            let new_ord = ord_rho + conj_exp * cand.det_ord - scale_exp * min_ord;
            Ok((new_ord, idx))
        })
        .collect();
    let best = evaluated?.into_iter().min();
    let mut improvement = None;
    if let Some((new_ord, idx)) = best {
        if new_ord < initial_ord {
            let cand = &candidates[idx];
            let improved = f.conjugate(&cand.gamma)?;
            let verify = valuation_report(&improved, p)?;
            if verify.ord_r != Valuation::Finite(new_ord) {
                return Err(Error::Invariant(format!(
                    "predicted valuation {new_ord} disagrees with recomputation {}",
                    verify.ord_r
                )));
            }
            improvement = Some((cand.clone(), new_ord));
        }
    }
    Ok(ImprovementSearch {
        initial_ord,
        effective_bound,
        candidates_searched: candidates.len(),
        improvement,
    })
}

/// Certify minimality at p, or find a strictly better conjugate inside
/// the bounded candidate family.
pub fn certify_or_search_minimal(
    f: &Presentation,
    p: &PrimeInt,
    opts: &SearchOptions,
) -> Result<MinimalityCertificate> {
    require_dynamical_degree(f)?;
    let report = valuation_report(f, p)?;
    let Valuation::Finite(initial_ord) = report.ord_r else {
        return Err(Error::NotAMorphism);
    };
    if initial_ord == 0 {
        return Ok(MinimalityCertificate {
            prime: p.clone(),
            initial_ord,
            reduction_semistable: None,
            status: MinimalityStatus::MinimalValuationZero,
        });
    }
    let reduction_semistable = match is_semistable_at(f, p, &opts.semistability) {
        Ok(v) => Some(v.semistable),
        Err(e) if e.is_budget() => None,
        Err(e) => return Err(e),
    };
    if reduction_semistable == Some(true) {
        return Ok(MinimalityCertificate {
            prime: p.clone(),
            initial_ord,
            reduction_semistable,
            status: MinimalityStatus::MinimalSemistableReduction,
        });
    }
    let search = search_improvement(f, p, opts)?;
    let status = match search.improvement {
        Some((cand, new_ord)) => MinimalityStatus::Improved {
            candidate: cand.description,
            gamma: cand.gamma,
            new_ord,
        },
        None => MinimalityStatus::SearchExhausted {
            bound: search.effective_bound,
        },
    };
    Ok(MinimalityCertificate {
        prime: p.clone(),
        initial_ord,
        reduction_semistable,
        status,
    })
}

fn is_semistable_at(
    f: &Presentation,
    p: &PrimeInt,
    opts: &SemistabilityOptions,
) -> Result<SemistabilityVerdict> {
    is_semistable(&f.reduce_at(p)?, opts)
}

/// One applied improvement during minimization.
#[derive(Clone, Debug)]
pub struct MinimalityStep {
    pub description: CandidateDescription,
    pub gamma: RationalMatrix,
    pub ord_before: i64,
    pub ord_after: i64,
}

#[derive(Clone, Debug)]
pub struct MinimizationOutcome {
    pub model: Presentation,
    pub certificate: MinimalityCertificate,
    pub steps: Vec<MinimalityStep>,
    /// Product of all applied conjugations, identity when no step ran.
    pub combined_gamma: RationalMatrix,
}

/// Repeatedly certify-or-improve at p until no candidate lowers ord_R.
/// Terminates because ord_R is a nonnegative integer that strictly
/// decreases with every applied step. The model is re-primitivized after
/// each step, which never changes ord_R.
pub fn minimize_to_fixpoint(
    f: &Presentation,
    p: &PrimeInt,
    opts: &SearchOptions,
) -> Result<MinimizationOutcome> {
    let mut current = f.primitive_integral_model().0;
    let mut steps = Vec::new();
    let mut combined = RationalMatrix::identity(f.n() + 1);
    loop {
        let cert = certify_or_search_minimal(&current, p, opts)?;
        match &cert.status {
            MinimalityStatus::Improved {
                candidate,
                gamma,
                new_ord,
            } => {
                steps.push(MinimalityStep {
                    description: candidate.clone(),
                    gamma: gamma.clone(),
                    ord_before: cert.initial_ord,
                    ord_after: *new_ord,
                });
                combined = combined.mul(gamma);
                current = current.conjugate(gamma)?.primitive_integral_model().0;
            }
            _ => {
                return Ok(MinimizationOutcome {
                    model: current,
                    certificate: cert,
                    steps,
                    combined_gamma: combined,
                });
            }
        }
    }
}

/// Per-prime outcome inside a divisor or global model computation.
#[derive(Clone, Debug)]
pub struct DivisorEntry {
    pub initial_ord: i64,
    pub minimal_ord: i64,
    pub certified: bool,
    pub certificate: MinimalityCertificate,
    pub model: Presentation,
}

/// The minimal resultant divisor of a presentation over ℚ: for each
/// prime dividing the resultant of the primitive integral model, the
/// valuation reached by per-prime minimization.
#[derive(Clone, Debug)]
pub struct ResultantDivisor {
    pub primitive_model: Presentation,
    pub resultant: BigInt,
    pub entries: BTreeMap<BigUint, DivisorEntry>,
    /// Part of the resultant that could not be factored within the trial
    /// division limit and could not be certified prime. Its prime
    /// divisors are not analyzed.
    pub unfactored_cofactor: Option<BigUint>,
}

impl ResultantDivisor {
    /// Primes with positive minimal valuation, with those valuations.
    pub fn support(&self) -> BTreeMap<BigUint, i64> {
        self.entries
            .iter()
            .filter(|(_, e)| e.minimal_ord > 0)
            .map(|(p, e)| (p.clone(), e.minimal_ord))
            .collect()
    }
}

pub fn minimal_resultant_divisor(f: &Presentation, opts: &SearchOptions) -> Result<ResultantDivisor> {
    require_dynamical_degree(f)?;
    let model = f.primitive_integral_model().0;
    let rho = resultant(&model)?;
    if rho.is_zero() {
        return Err(Error::NotAMorphism);
    }
    if !rho.denom().is_one() {
        return Err(Error::Invariant(
            "integral model produced a non-integral resultant".into(),
        ));
    }
    let rho_int = rho.numer().clone();
    let factorization = factor_with_limits(rho_int.magnitude(), opts.trial_division_limit);
    let mut entries = BTreeMap::new();
    for (prime_value, &exponent) in &factorization.factors {
        let prime = PrimeInt::new(prime_value.clone())?;
        let outcome = minimize_to_fixpoint(&model, &prime, opts)?;
        let initial_ord = exponent as i64;
        debug_assert_eq!(
            outcome
                .steps
                .first()
                .map_or(outcome.certificate.initial_ord, |s| s.ord_before),
            initial_ord,
            "primitive model valuation equals the resultant exponent"
        );
        entries.insert(
            prime_value.clone(),
            DivisorEntry {
                initial_ord,
                minimal_ord: outcome.certificate.resulting_ord(),
                certified: outcome.certificate.is_certified_minimal(),
                certificate: outcome.certificate,
                model: outcome.model,
            },
        );
    }
    Ok(ResultantDivisor {
        primitive_model: model,
        resultant: rho_int,
        entries,
        unfactored_cofactor: factorization.cofactor,
    })
}

/// Record of one cross-prime invariance check during globalization: a
/// step applied at `step_prime` must leave ord_R unchanged at `other`.
#[derive(Clone, Debug)]
pub struct CrossPrimeCheck {
    pub step_prime: BigUint,
    pub other: BigUint,
    pub before: Valuation,
    pub after: Valuation,
    pub unchanged: bool,
}

#[derive(Clone, Debug)]
pub struct GlobalModel {
    pub model: Presentation,
    pub per_prime: BTreeMap<BigUint, DivisorEntry>,
    pub cross_checks: Vec<CrossPrimeCheck>,
    pub unfactored_cofactor: Option<BigUint>,
}

/// Minimize at every bad prime in ascending order on a single model.
/// Candidate matrices have p-power determinant and stay invertible mod
/// every other prime, so steps at one prime cannot disturb the others;
/// each step's invariance is nevertheless checked and recorded.
pub fn globalize_over_q(f: &Presentation, opts: &SearchOptions) -> Result<GlobalModel> {
    require_dynamical_degree(f)?;
    let divisor = minimal_resultant_divisor(f, opts)?;
    let primes: Vec<BigUint> = divisor.entries.keys().cloned().collect();
    let prime_ints: Vec<PrimeInt> = primes
        .iter()
        .map(|v| PrimeInt::new(v.clone()))
        .collect::<Result<_>>()?;
    let mut model = divisor.primitive_model.clone();
    let mut cross_checks = Vec::new();
    let mut per_prime = BTreeMap::new();
    for (i, prime) in prime_ints.iter().enumerate() {
        let before: Vec<Valuation> = prime_ints
            .iter()
            .map(|q| Ok(valuation_report(&model, q)?.ord_r))
            .collect::<Result<_>>()?;
        let outcome = minimize_to_fixpoint(&model, prime, opts)?;
        model = outcome.model.clone();
        if !outcome.steps.is_empty() {
            for (j, q) in prime_ints.iter().enumerate() {
                if j == i {
                    continue;
                }
                let after = valuation_report(&model, q)?.ord_r;
                let unchanged = after == before[j];
                cross_checks.push(CrossPrimeCheck {
                    step_prime: primes[i].clone(),
                    other: primes[j].clone(),
                    before: before[j],
                    after,
                    unchanged,
                });
                if !unchanged {
                    return Err(Error::Invariant(format!(
                        "minimizing at {} changed the valuation at {}",
                        primes[i], primes[j]
                    )));
                }
            }
        }
        let initial = divisor.entries[&primes[i]].initial_ord;
        per_prime.insert(
            primes[i].clone(),
            DivisorEntry {
                initial_ord: initial,
                minimal_ord: outcome.certificate.resulting_ord(),
                certified: outcome.certificate.is_certified_minimal(),
                certificate: outcome.certificate,
                model: outcome.model,
            },
        );
    }
    Ok(GlobalModel {
        model,
        per_prime,
        cross_checks,
        unfactored_cofactor: divisor.unfactored_cofactor,
    })
}

/// Classification of a presentation's behavior at p after minimization.
#[derive(Clone, Debug)]
pub enum PotentialGoodReduction {
    /// The minimal model has ord_R = 0: good reduction at p.
    Good { model: Presentation },
    /// The minimal model still has positive valuation and its reduction
    /// is semistable, which rules out good reduction for every
    /// conjugate, even after field extension.
    NotEvenPotential {
        model: Presentation,
        ord: i64,
        verdict: SemistabilityVerdict,
    },
    /// Neither certificate applies within budget.
    Unknown { reason: String },
}

pub fn potential_good_reduction_status(
    f: &Presentation,
    p: &PrimeInt,
    opts: &SearchOptions,
) -> Result<PotentialGoodReduction> {
    let outcome = minimize_to_fixpoint(f, p, opts)?;
    let ord = outcome.certificate.resulting_ord();
    if ord == 0 {
        return Ok(PotentialGoodReduction::Good {
            model: outcome.model,
        });
    }
    match is_semistable_at(&outcome.model, p, &opts.semistability) {
        Ok(verdict) if verdict.semistable => Ok(PotentialGoodReduction::NotEvenPotential {
            model: outcome.model,
            ord,
            verdict,
        }),
        Ok(_) => Ok(PotentialGoodReduction::Unknown {
            reason: format!(
                "minimal model at {p} keeps valuation {ord} but its reduction is unstable"
            ),
        }),
        Err(e) if e.is_budget() => Ok(PotentialGoodReduction::Unknown {
            reason: format!("semistability check refused: {e}"),
        }),
        Err(e) => Err(e),
    }
}

/// ord_R of f at p as a plain integer; errors for non-morphisms.
pub fn normalized_valuation(f: &Presentation, p: &PrimeInt) -> Result<i64> {
    valuation_report(f, p)?
        .ord_r
        .finite()
        .ok_or(Error::NotAMorphism)
}

/// Convenience wrapper over ord_p for matrices built from candidates.
pub fn det_valuation(gamma: &RationalMatrix, p: &PrimeInt) -> Valuation {
    ord_p(&gamma.det(), p)
}
