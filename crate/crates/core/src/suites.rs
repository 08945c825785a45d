//! Verification suites shared by the acceptance test target and the CLI
//! verify command. Each suite drives a fixed seeded corpus through one
//! family of exact checks and reports every violation it finds; a suite
//! passes only with zero violations.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use rand_chacha::ChaCha8Rng;

use crate::arith::primes::PrimeInt;
use crate::arith::valuation::{ord_p, Valuation};
use crate::corpus::{
    corpus_rng, exhaustive_reduced_points, lift_reduced, lift_to_morphism, plant_at_prime,
    random_invertible, random_morphism, random_p_unimodular, random_presentation,
};
use crate::error::{Error, Result};
use crate::minimality::{
    globalize_over_q, minimize_to_fixpoint, potential_good_reduction_status, search_improvement,
    MinimalityStatus, PotentialGoodReduction, SearchOptions,
};
use crate::oracles::{p1_min_ord_by_full_reports, p1_unstable_by_full_scan};
use crate::presentation::Presentation;
use crate::resultant::{
    check_conjugation_valuation, macaulay_resultant, matrix_ord, resultant, resultant_form_degree,
    scaling_exponent, sylvester_resultant, valuation_report,
};
use crate::semistability::{
    is_semistable, is_semistable_presentation, verify_witness, SemistabilityOptions,
};

pub const DEFAULT_SUITE_SEED: u64 = 20260816;

const MAX_RECORDED_FAILURES: usize = 64;

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
    suppressed: usize,
}

impl SuiteReport {
    fn new(name: &'static str) -> SuiteReport {
        SuiteReport {
            name,
            cases: 0,
            failures: Vec::new(),
            suppressed: 0,
        }
    }

    fn case(&mut self) {
        self.cases += 1;
    }

    fn fail(&mut self, msg: String) {
        if self.failures.len() < MAX_RECORDED_FAILURES {
            self.failures.push(msg);
        } else {
            self.suppressed += 1;
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.suppressed == 0
    }

    pub fn violation_count(&self) -> usize {
        self.failures.len() + self.suppressed
    }

    pub fn summary(&self) -> String {
        if self.passed() {
            format!("PASS {} ({} cases)", self.name, self.cases)
        } else {
            format!(
                "FAIL {} ({} cases, {} violations; first: {})",
                self.name,
                self.cases,
                self.violation_count(),
                self.failures.first().map(String::as_str).unwrap_or("?")
            )
        }
    }
}

fn prime(v: u64) -> Result<PrimeInt> {
    PrimeInt::from_u64(v)
}

fn rat(x: i64) -> BigRational {
    BigRational::from(num_bigint::BigInt::from(x))
}

fn rat_pow(c: &BigRational, k: u64) -> BigRational {
    let mut out = BigRational::one();
    for _ in 0..k {
        out *= c;
    }
    out
}

fn dense(n: usize, d: u32, forms: &[&[i64]]) -> Result<Presentation> {
    Presentation::new(
        n,
        d,
        forms
            .iter()
            .map(|f| f.iter().map(|&x| rat(x)).collect())
            .collect(),
    )
}

fn power_map(n: usize, d: u32) -> Result<Presentation> {
    let forms: Vec<Vec<(BigRational, Vec<u32>)>> = (0..=n)
        .map(|i| {
            let mut exps = vec![0u32; n + 1];
            exps[i] = d;
            vec![(BigRational::one(), exps)]
        })
        .collect();
    Presentation::from_sparse(n, d, &forms)
}

fn scale_single_form(f: &Presentation, idx: usize, c: &BigRational) -> Result<Presentation> {
    let coeffs: Vec<Vec<BigRational>> = f
        .forms()
        .iter()
        .enumerate()
        .map(|(i, form)| {
            form.iter()
                .map(|x| if i == idx { x * c } else { x.clone() })
                .collect()
        })
        .collect();
    Presentation::new(f.n(), f.degree(), coeffs)
}

fn nonzero_rational(rng: &mut ChaCha8Rng) -> BigRational {
    use rand::Rng;
    let num = loop {
        let v: i64 = rng.gen_range(-9..=9);
        if v != 0 {
            break v;
        }
    };
    let den: i64 = rng.gen_range(1..=9);
    rat(num) / rat(den)
}

/// Sylvester and Macaulay agree on P^1; power maps have resultant one;
/// the resultant is homogeneous of degree d^n in each form and of total
/// degree (n+1)d^n under common scaling.
pub fn resultant_engine_suite(seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("resultant engine agreement and homogeneity");
    let mut rng = corpus_rng(seed ^ 0xA1);
    for d in [2u32, 3] {
        for _ in 0..200 {
            let f = random_presentation(&mut rng, 1, d, 9)?;
            report.case();
            let s = sylvester_resultant(&f)?;
            let m = macaulay_resultant(&f)?;
            if s != m {
                report.fail(format!("Sylvester {s} and Macaulay {m} disagree on {f}"));
            }
        }
    }
    for (n, d) in [(1usize, 2u32), (1, 3), (2, 2)] {
        report.case();
        let rho = resultant(&power_map(n, d)?)?;
        if rho != BigRational::one() {
            report.fail(format!("power map (n, d) = ({n}, {d}) has resultant {rho}"));
        }
    }
    for i in 0..100usize {
        let (n, d) = [(1usize, 2u32), (1, 3), (2, 2)][i % 3];
        let f = random_morphism(&mut rng, n, d, 5, 500)?;
        let c = nonzero_rational(&mut rng);
        let rho = resultant(&f)?;
        report.case();
        let form_idx = i % (n + 1);
        let one_scaled = resultant(&scale_single_form(&f, form_idx, &c)?)?;
        if one_scaled != rat_pow(&c, resultant_form_degree(n, d)?) * &rho {
            report.fail(format!(
                "scaling form {form_idx} of {f} by {c} broke per-form homogeneity"
            ));
        }
        let all_scaled = resultant(&f.scale(&c)?)?;
        if all_scaled != rat_pow(&c, scaling_exponent(n, d)?) * &rho {
            report.fail(format!("scaling {f} by {c} broke total homogeneity"));
        }
    }
    Ok(report)
}

/// ord_R is exactly invariant under scaling by powers of p.
pub fn scaling_invariance_suite(seed: u64) -> Result<SuiteReport> {
    use rand::Rng;
    let mut report = SuiteReport::new("normalized valuation invariance under p-power scaling");
    let mut rng = corpus_rng(seed ^ 0xA2);
    for i in 0..100usize {
        let (n, d) = [(1usize, 2u32), (1, 3), (2, 2)][i % 3];
        let p = prime([2u64, 3, 5][(i / 3) % 3])?;
        let f = random_morphism(&mut rng, n, d, 9, 500)?;
        let k: i64 = {
            let magnitude = rng.gen_range(1..=3);
            if rng.gen() {
                magnitude
            } else {
                -magnitude
            }
        };
        let p_rat = BigRational::from(num_bigint::BigInt::from(p.value().clone()));
        let scale = if k > 0 {
            rat_pow(&p_rat, k as u64)
        } else {
            BigRational::one() / rat_pow(&p_rat, (-k) as u64)
        };
        report.case();
        let before = valuation_report(&f, &p)?.ord_r;
        let after = valuation_report(&f.scale(&scale)?, &p)?.ord_r;
        if before != after {
            report.fail(format!(
                "scaling {f} by {p}^{k} moved ord_R from {before} to {after}"
            ));
        }
    }
    Ok(report)
}

/// The conjugation identity holds exactly, both as valuations and as the
/// underlying scalar identity, and the min-ord inequality holds under
/// the entrywise reading of ord_p(Γ).
pub fn conjugation_identity_suite(seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("conjugation valuation identity and min-ord inequality");
    let mut rng = corpus_rng(seed ^ 0xA3);
    for i in 0..100usize {
        let (n, d) = [(1usize, 2u32), (1, 3), (2, 2)][i % 3];
        let p = prime([2u64, 3, 5][(i / 3) % 3])?;
        let f = random_morphism(&mut rng, n, d, 9, 500)?;
        let gamma = random_invertible(&mut rng, n + 1, 5);
        report.case();
        let check = check_conjugation_valuation(&f, &gamma, &p)?;
        if !check.holds || !check.holds_exactly {
            report.fail(format!(
                "conjugation identity failed at {p} for {f}: lhs {} rhs {}",
                check.lhs_ord, check.rhs_ord
            ));
        }
        let Valuation::Finite(gamma_ord) = matrix_ord(&gamma, &p) else {
            report.fail("zero conjugating matrix generated".into());
            continue;
        };
        let conj = f.conjugate(&gamma)?;
        let lhs = conj.min_coeff_ord(&p);
        let rhs = f.min_coeff_ord(&p) + (n as i64 + d as i64) * gamma_ord;
        if lhs < rhs {
            report.fail(format!(
                "min-ord inequality failed at {p} for {f}: {lhs} < {rhs}"
            ));
        }
    }
    Ok(report)
}

/// ord_p of the resultant and the minimal coefficient order are both
/// exactly invariant under p-unimodular conjugation.
pub fn unimodular_invariance_suite(seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("invariance under p-unimodular conjugation");
    let mut rng = corpus_rng(seed ^ 0xA4);
    for i in 0..100usize {
        let (n, d) = [(1usize, 2u32), (1, 3), (2, 2)][i % 3];
        let p = prime([2u64, 3, 5][(i / 3) % 3])?;
        let f = random_morphism(&mut rng, n, d, 9, 500)?;
        let u = random_p_unimodular(&mut rng, n + 1, &p, 5);
        report.case();
        let before = valuation_report(&f, &p)?;
        let after = valuation_report(&f.conjugate(&u)?, &p)?;
        if before.ord_resultant != after.ord_resultant {
            report.fail(format!(
                "resultant order at {p} moved from {} to {} for {f}",
                before.ord_resultant, after.ord_resultant
            ));
        }
        if before.min_coeff_ord != after.min_coeff_ord {
            report.fail(format!(
                "min coefficient order at {p} moved from {} to {} for {f}",
                before.min_coeff_ord, after.min_coeff_ord
            ));
        }
    }
    Ok(report)
}

/// Exhaustively over n = 1, d = 2, p in {2, 3}: every reduced point that
/// is a morphism over F_p is semistable; every semistability verdict
/// agrees with the full matrix-scan oracle; every unstable verdict
/// carries a witness that re-verifies independently.
pub fn hom_semistable_suite() -> Result<SuiteReport> {
    let mut report = SuiteReport::new("morphisms mod p are semistable, verdicts match the oracle");
    let opts = SemistabilityOptions::default();
    for pv in [2u64, 3] {
        let p = prime(pv)?;
        for point in exhaustive_reduced_points(1, 2, pv)? {
            report.case();
            let verdict = is_semistable(&point, &opts)?;
            let unstable = p1_unstable_by_full_scan(&point)?;
            if verdict.semistable != !unstable {
                report.fail(format!(
                    "flag search and full scan disagree at {point}: semistable={} unstable={}",
                    verdict.semistable, unstable
                ));
            }
            let lift = lift_reduced(&point)?;
            let morphism_mod_p =
                valuation_report(&lift, &p)?.ord_resultant == Valuation::Finite(0);
            if morphism_mod_p && !verdict.semistable {
                report.fail(format!("morphism {point} judged unstable"));
            }
            match &verdict.witness {
                Some(w) => {
                    if verdict.semistable {
                        report.fail(format!("semistable verdict carries a witness at {point}"));
                    }
                    if let Err(e) = verify_witness(&point, w) {
                        report.fail(format!("witness at {point} failed re-verification: {e}"));
                    }
                }
                None => {
                    if !verdict.semistable {
                        report.fail(format!("unstable verdict without witness at {point}"));
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Lifts of semistable degenerate reduced points: presentations over ℚ
/// with positive resultant order at p whose reduction is semistable.
fn boundary_lifts(
    rng: &mut ChaCha8Rng,
    d: u32,
    pv: u64,
    max: usize,
) -> Result<Vec<Presentation>> {
    let p = prime(pv)?;
    let opts = SemistabilityOptions::default();
    let mut out = Vec::new();
    for point in exhaustive_reduced_points(1, d, pv)? {
        if out.len() >= max {
            break;
        }
        let lift0 = lift_reduced(&point)?;
        let degenerate_mod_p = match ord_p(&resultant(&lift0)?, &p) {
            Valuation::Infinite => true,
            Valuation::Finite(k) => k >= 1,
        };
        if !degenerate_mod_p {
            continue;
        }
        if !is_semistable(&point, &opts)?.semistable {
            continue;
        }
        if let Ok(lift) = lift_to_morphism(rng, &point, 200) {
            out.push(lift);
        }
    }
    Ok(out)
}

/// On a corpus of morphisms whose reduction at p is semistable,
/// including members with positive resultant order, the exhaustive
/// candidate search at bound 3 finds no strict improvement, and an
/// independent full-report oracle confirms the valuation.
pub fn semistable_minimality_suite(seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("semistable reduction admits no valuation improvement");
    let mut rng = corpus_rng(seed ^ 0xA6);
    let sopts = SemistabilityOptions::default();
    let mopts = SearchOptions::default();
    let mut corpus: Vec<(Presentation, PrimeInt)> = Vec::new();
    corpus.push((dense(1, 2, &[&[3, 0, 1], &[0, 1, 0]])?, prime(3)?));
    for pv in [2u64, 3] {
        let lifts = boundary_lifts(&mut rng, 3, pv, 3)?;
        if lifts.is_empty() {
            report.fail(format!(
                "boundary scan found no semistable degenerate point at d = 3 over F_{pv}"
            ));
        }
        let p = prime(pv)?;
        for lift in lifts {
            corpus.push((lift, p.clone()));
        }
    }
    let combos = [(2u32, 2u64), (2, 3), (2, 5), (3, 2), (3, 3), (3, 5)];
    let mut combo_idx = 0usize;
    let mut attempts = 0u32;
    while corpus.len() < 50 {
        attempts += 1;
        if attempts > 5000 {
            report.fail("could not assemble 50 semistable corpus members".into());
            break;
        }
        let (d, pv) = combos[combo_idx % combos.len()];
        combo_idx += 1;
        let p = prime(pv)?;
        let f = random_morphism(&mut rng, 1, d, 9, 500)?
            .primitive_integral_model()
            .0;
        if !is_semistable_presentation(&f, &p, &sopts)?.semistable {
            continue;
        }
        corpus.push((f, p));
    }
    let mut has_positive_ord = false;
    for (f, p) in &corpus {
        report.case();
        let search = search_improvement(f, p, &mopts)?;
        if search.effective_bound < 3 {
            report.fail(format!("search bound shrank to {}", search.effective_bound));
        }
        if let Some((cand, new_ord)) = &search.improvement {
            report.fail(format!(
                "semistable case {f} at {p} improved from {} to {new_ord} via {:?}",
                search.initial_ord, cand.description
            ));
        }
        if search.initial_ord > 0 {
            has_positive_ord = true;
        }
        let oracle = p1_min_ord_by_full_reports(f, p, 2)?;
        if oracle != search.initial_ord {
            report.fail(format!(
                "full-report oracle found {oracle} at {p} for {f}, expected {}",
                search.initial_ord
            ));
        }
    }
    if !has_positive_ord {
        report.fail("no corpus member with positive resultant order".into());
    }
    if report.cases < 50 {
        report.fail(format!("corpus has only {} members", report.cases));
    }
    Ok(report)
}

fn random_good_at(
    rng: &mut ChaCha8Rng,
    d: u32,
    p: &PrimeInt,
    coeff_bound: i64,
) -> Result<Presentation> {
    for _ in 0..500 {
        let f = random_morphism(rng, 1, d, coeff_bound, 500)?
            .primitive_integral_model()
            .0;
        if valuation_report(&f, p)?.ord_r == Valuation::Finite(0) {
            return Ok(f);
        }
    }
    Err(Error::Construction(
        "no good-reduction morphism found within the try budget".into(),
    ))
}

fn plant_nontrivially(
    rng: &mut ChaCha8Rng,
    d: u32,
    p: &PrimeInt,
    coeff_bound: i64,
) -> Result<Presentation> {
    for _ in 0..100 {
        let base = random_good_at(rng, d, p, coeff_bound)?;
        let planted = plant_at_prime(rng, &base, p, 1, true)?;
        match valuation_report(&planted, p)?.ord_r {
            Valuation::Finite(v) if v > 0 => return Ok(planted),
            _ => continue,
        }
    }
    Err(Error::Construction(
        "planting never raised the valuation".into(),
    ))
}

/// Planted non-minimal presentations (good-reduction maps conjugated by
/// diag(p, 1) and disguised unimodularly) are judged not semistable, and
/// minimization recovers valuation zero through verified improvements.
pub fn contrapositive_suite(seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("planted non-minimal models are unstable and recoverable");
    let mut rng = corpus_rng(seed ^ 0xA7);
    let sopts = SemistabilityOptions::default();
    let mopts = SearchOptions::default();
    for round in 0..5 {
        for (d, pv) in [(2u32, 2u64), (2, 3), (2, 5), (3, 2), (3, 3), (3, 5)] {
            let p = prime(pv)?;
            let planted = plant_nontrivially(&mut rng, d, &p, 5)?;
            report.case();
            let verdict = is_semistable_presentation(&planted, &p, &sopts)?;
            if verdict.semistable {
                report.fail(format!(
                    "planted case {planted} at {p} (round {round}) judged semistable"
                ));
            }
            let outcome = minimize_to_fixpoint(&planted, &p, &mopts)?;
            if outcome.steps.is_empty() {
                report.fail(format!("no improvement step found for {planted} at {p}"));
            }
            if !matches!(
                outcome.certificate.status,
                MinimalityStatus::MinimalValuationZero
            ) {
                report.fail(format!(
                    "minimization of {planted} at {p} stopped at {}",
                    outcome.certificate.resulting_ord()
                ));
            }
            let fresh = valuation_report(&outcome.model, &p)?.ord_r;
            if fresh != Valuation::Finite(0) {
                report.fail(format!(
                    "recovered model of {planted} at {p} re-verifies to {fresh}"
                ));
            }
        }
    }
    Ok(report)
}

/// Maps planted bad at two primes globalize to a single presentation
/// that is certified minimal with valuation zero at both, with all
/// cross-prime invariance checks passing.
pub fn globalization_suite(seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("two-prime planted models globalize to a joint minimum");
    let mut rng = corpus_rng(seed ^ 0xA8);
    let opts = SearchOptions {
        max_candidates: 30_000,
        ..SearchOptions::default()
    };
    for _round in 0..7 {
        for (pv, qv) in [(2u64, 3u64), (2, 5), (3, 5)] {
            let p = prime(pv)?;
            let q = prime(qv)?;
            let mut planted = None;
            for _ in 0..500 {
                let base = random_morphism(&mut rng, 1, 2, 3, 500)?
                    .primitive_integral_model()
                    .0;
                if valuation_report(&base, &p)?.ord_r != Valuation::Finite(0)
                    || valuation_report(&base, &q)?.ord_r != Valuation::Finite(0)
                {
                    continue;
                }
                let once = plant_at_prime(&mut rng, &base, &p, 1, true)?;
                let twice = plant_at_prime(&mut rng, &once, &q, 1, true)?;
                let ord_p_val = valuation_report(&twice, &p)?.ord_r;
                let ord_q_val = valuation_report(&twice, &q)?.ord_r;
                if let (Valuation::Finite(a), Valuation::Finite(b)) = (ord_p_val, ord_q_val) {
                    if a > 0 && b > 0 {
                        planted = Some(twice);
                        break;
                    }
                }
            }
            let Some(planted) = planted else {
                return Err(Error::Construction(
                    "two-prime planting never raised both valuations".into(),
                ));
            };
            report.case();
            let global = globalize_over_q(&planted, &opts)?;
            for prime_value in [pv, qv] {
                let key = BigUint::from(prime_value);
                match global.per_prime.get(&key) {
                    Some(entry) if entry.minimal_ord == 0 && entry.certified => {}
                    Some(entry) => report.fail(format!(
                        "entry at {prime_value} reached {} (certified: {})",
                        entry.minimal_ord, entry.certified
                    )),
                    None => report.fail(format!("no entry at planted prime {prime_value}")),
                }
                let fresh = valuation_report(&global.model, &prime(prime_value)?)?.ord_r;
                if fresh != Valuation::Finite(0) {
                    report.fail(format!(
                        "global model re-verifies to {fresh} at {prime_value}"
                    ));
                }
            }
            if !global.cross_checks.iter().all(|c| c.unchanged) {
                report.fail("a cross-prime invariance check failed".into());
            }
        }
    }
    Ok(report)
}

/// Every GOOD classification re-verifies to valuation zero; every
/// NOT_EVEN_POTENTIAL classification re-verifies to a semistable
/// reduction with positive valuation.
pub fn classifier_suite(seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("potential-good-reduction classifications re-verify");
    let mut rng = corpus_rng(seed ^ 0xA9);
    let sopts = SemistabilityOptions::default();
    let mopts = SearchOptions::default();
    for (d, pv) in [(2u32, 2u64), (2, 3), (2, 5), (3, 2), (3, 3), (3, 5)] {
        let p = prime(pv)?;
        let planted = plant_nontrivially(&mut rng, d, &p, 5)?;
        report.case();
        match potential_good_reduction_status(&planted, &p, &mopts)? {
            PotentialGoodReduction::Good { model } => {
                let fresh = valuation_report(&model, &p)?.ord_r;
                if fresh != Valuation::Finite(0) {
                    report.fail(format!("GOOD model re-verifies to {fresh} at {p}"));
                }
            }
            other => report.fail(format!(
                "planted recoverable case at {p} classified {other:?}"
            )),
        }
    }
    let mut blocked: Vec<(Presentation, PrimeInt)> =
        vec![(dense(1, 2, &[&[3, 0, 1], &[0, 1, 0]])?, prime(3)?)];
    for pv in [2u64, 3] {
        let p = prime(pv)?;
        for lift in boundary_lifts(&mut rng, 3, pv, 2)? {
            blocked.push((lift, p.clone()));
        }
    }
    for (f, p) in &blocked {
        report.case();
        match potential_good_reduction_status(f, p, &mopts)? {
            PotentialGoodReduction::NotEvenPotential { model, ord, verdict } => {
                if ord <= 0 {
                    report.fail(format!("blocked classification with ord {ord} at {p}"));
                }
                if !verdict.semistable {
                    report.fail(format!("blocked classification not semistable at {p}"));
                }
                let fresh_ord = valuation_report(&model, p)?.ord_r;
                if fresh_ord != Valuation::Finite(ord) {
                    report.fail(format!(
                        "blocked model re-verifies to {fresh_ord} at {p}, reported {ord}"
                    ));
                }
                if !is_semistable_presentation(&model, p, &sopts)?.semistable {
                    report.fail(format!("blocked model not semistable on re-check at {p}"));
                }
            }
            other => report.fail(format!(
                "semistable bad-reduction case {f} at {p} classified {other:?}"
            )),
        }
    }
    report.case();
    match potential_good_reduction_status(
        &dense(1, 2, &[&[1, 0, 2], &[0, 1, 0]])?,
        &prime(2)?,
        &mopts,
    )? {
        PotentialGoodReduction::Unknown { .. } => {}
        other => report.fail(format!(
            "parity-blocked case without certificates classified {other:?}"
        )),
    }
    Ok(report)
}

/// All library-side suites in criterion order.
pub fn all_library_suites(seed: u64) -> Result<Vec<SuiteReport>> {
    Ok(vec![
        resultant_engine_suite(seed)?,
        scaling_invariance_suite(seed)?,
        conjugation_identity_suite(seed)?,
        unimodular_invariance_suite(seed)?,
        hom_semistable_suite()?,
        semistable_minimality_suite(seed)?,
        contrapositive_suite(seed)?,
        globalization_suite(seed)?,
        classifier_suite(seed)?,
    ])
}
