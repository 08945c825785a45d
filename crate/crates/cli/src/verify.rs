//! Verification suites runnable from the command line. Each suite
//! regenerates a pseudorandom corpus from the seed and runs exact
//! checks; corpus size, degrees, primes, and the search bound come from
//! `--count` and `--params`. The first failing input is kept so it can
//! be printed verbatim.

use minres_core::arith::{ord_p, PrimeInt, Valuation};
use minres_core::corpus::{
    corpus_rng, exhaustive_reduced_points, lift_reduced, plant_at_prime, random_invertible,
    random_morphism, random_p_unimodular,
};
use minres_core::minimality::{normalized_valuation, search_improvement};
use minres_core::resultant::{check_conjugation_valuation, resultant};
use minres_core::{
    globalize_over_q, is_semistable, valuation_report, verify_witness, Error, Presentation,
    Result, SearchOptions, SemistabilityOptions,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::document::MorphismDocument;
use crate::params::Params;

pub struct SuiteOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
    pub first_counterexample: Option<MorphismDocument>,
}

impl SuiteOutcome {
    fn new(name: &'static str) -> SuiteOutcome {
        SuiteOutcome {
            name,
            cases: 0,
            failures: Vec::new(),
            first_counterexample: None,
        }
    }

    fn fail(&mut self, message: String, witness: Option<&Presentation>) {
        if self.failures.len() < 64 {
            self.failures.push(message);
        }
        if self.first_counterexample.is_none() {
            if let Some(f) = witness {
                self.first_counterexample =
                    Some(MorphismDocument::from_presentation(f, None));
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_value(&self) -> Value {
        json!({
            "suite": self.name,
            "cases": self.cases,
            "failures": self.failures,
            "passed": self.passed(),
            "first_counterexample": self
                .first_counterexample
                .as_ref()
                .map(|d| serde_json::to_value(d).expect("documents serialize")),
        })
    }
}

pub fn run_suite(
    suite: &str,
    seed: u64,
    count: Option<usize>,
    params: &Params,
) -> Result<SuiteOutcome> {
    match suite {
        "invariance" => invariance_suite(seed, count.unwrap_or(100), params),
        "containment" => containment_suite(params),
        "minimality" => minimality_suite(seed, count.unwrap_or(50), params),
        "globalize" => globalize_suite(seed, count.unwrap_or(6), params),
        other => Err(Error::Construction(format!(
            "unknown suite {other:?}, expected invariance, containment, minimality, or globalize"
        ))),
    }
}

fn rat_pow(base: &BigRational, k: i32) -> BigRational {
    let mut out = BigRational::one();
    for _ in 0..k.unsigned_abs() {
        out *= base;
    }
    if k < 0 {
        out = out.recip();
    }
    out
}

fn primes_from(params: &Params, default: &[u64]) -> Result<Vec<PrimeInt>> {
    params
        .u64_list("p", default)?
        .into_iter()
        .map(PrimeInt::from_u64)
        .collect()
}

/// Options wide enough for the primes the user asked about; flag
/// enumeration over F_p stays linear in p for n = 1.
fn widened_semistability(n: usize, primes: &[PrimeInt]) -> SemistabilityOptions {
    let mut opts = SemistabilityOptions::default();
    opts.max_dimension = opts.max_dimension.max(n);
    for p in primes {
        if let Some(v) = p.to_u64() {
            opts.max_prime = opts.max_prime.max(v);
        }
    }
    opts
}

/// Scaling, conjugation-identity, and p-unimodular invariance checks on
/// one random morphism per case.
fn invariance_suite(seed: u64, count: usize, params: &Params) -> Result<SuiteOutcome> {
    params.reject_unknown(&["n", "d", "p"])?;
    let n = params.usize_single("n", 1)?;
    let ds = params.u32_list("d", &[2, 3])?;
    let ps = primes_from(params, &[2, 3, 5])?;
    let mut report = SuiteOutcome::new("invariance");
    let mut rng = corpus_rng(seed);
    for i in 0..count {
        let d = ds[i % ds.len()];
        let p = &ps[(i / ds.len()) % ps.len()];
        let f = random_morphism(&mut rng, n, d, 9, 400)?;
        report.cases += 1;

        let base = valuation_report(&f, p)?;
        let k = loop {
            let k = rng.gen_range(-3i32..=3);
            if k != 0 {
                break k;
            }
        };
        let p_rat = BigRational::from(BigInt::from(p.value().clone()));
        let scaled = f.scale(&rat_pow(&p_rat, k))?;
        let scaled_report = valuation_report(&scaled, p)?;
        if scaled_report.ord_r != base.ord_r {
            report.fail(
                format!(
                    "case {i}: ord_R changed under scaling by p^{k} at p={p}: {} vs {}",
                    base.ord_r, scaled_report.ord_r
                ),
                Some(&f),
            );
        }

        let gamma = random_invertible(&mut rng, n + 1, 5);
        let check = check_conjugation_valuation(&f, &gamma, p)?;
        if !(check.holds && check.holds_exactly) {
            report.fail(
                format!(
                    "case {i}: conjugation identity failed at p={p}: lhs {}, rhs {}",
                    check.lhs_ord, check.rhs_ord
                ),
                Some(&f),
            );
        }

        let u = random_p_unimodular(&mut rng, n + 1, p, 5);
        let conj = f.conjugate(&u)?;
        let conj_report = valuation_report(&conj, p)?;
        if conj_report.ord_resultant != base.ord_resultant
            || conj_report.min_coeff_ord != base.min_coeff_ord
        {
            report.fail(
                format!("case {i}: p-unimodular conjugation moved a valuation at p={p}"),
                Some(&f),
            );
        }
    }
    Ok(report)
}

/// Exhaustive check over reduced points: every morphism mod p is
/// semistable, and every unstable verdict carries a witness that
/// re-verifies.
fn containment_suite(params: &Params) -> Result<SuiteOutcome> {
    params.reject_unknown(&["n", "d", "p"])?;
    let n = params.usize_single("n", 1)?;
    let ds = params.u32_list("d", &[2])?;
    let ps = primes_from(params, &[2, 3])?;
    let opts = widened_semistability(n, &ps);
    let mut report = SuiteOutcome::new("containment");
    for p in &ps {
        let Some(p_small) = p.to_u64() else {
            return Err(Error::SizeLimit(format!("{p} is too large to scan")));
        };
        for d in &ds {
            for point in exhaustive_reduced_points(n, *d, p_small)? {
                report.cases += 1;
                let verdict = is_semistable(&point, &opts)?;
                let lift = lift_reduced(&point)?;
                let is_morphism_mod_p =
                    ord_p(&resultant(&lift)?, p) == Valuation::Finite(0);
                if is_morphism_mod_p && !verdict.semistable {
                    report.fail(
                        format!("morphism mod {p} judged unstable: {:?}", point.coords()),
                        Some(&lift),
                    );
                }
                if !verdict.semistable {
                    match &verdict.witness {
                        Some(witness) => {
                            if let Err(e) = verify_witness(&point, witness) {
                                report.fail(
                                    format!("witness failed re-verification at {p}: {e}"),
                                    Some(&lift),
                                );
                            }
                        }
                        None => report.fail(
                            format!("unstable verdict without witness at {p}"),
                            Some(&lift),
                        ),
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Semistable presentations admit no improvement inside the bounded
/// candidate family.
fn minimality_suite(seed: u64, count: usize, params: &Params) -> Result<SuiteOutcome> {
    params.reject_unknown(&["n", "d", "p", "B"])?;
    let n = params.usize_single("n", 1)?;
    let ds = params.u32_list("d", &[2, 3])?;
    let ps = primes_from(params, &[2, 3, 5])?;
    let bound = params.u32_single("B", 3)?;
    let mut opts = SearchOptions::default();
    opts.search_bound = bound;
    opts.semistability = widened_semistability(n, &ps);
    let mut report = SuiteOutcome::new("minimality");
    let mut rng = corpus_rng(seed);
    let mut attempts = 0usize;
    while report.cases < count {
        attempts += 1;
        if attempts > count.saturating_mul(400) {
            return Err(Error::Construction(
                "could not assemble enough semistable members".into(),
            ));
        }
        let d = ds[report.cases % ds.len()];
        let p = &ps[(report.cases / ds.len()) % ps.len()];
        let f = random_morphism(&mut rng, n, d, 9, 400)?;
        let verdict = is_semistable(&f.reduce_at(p)?, &opts.semistability)?;
        if !verdict.semistable {
            continue;
        }
        report.cases += 1;
        let search = search_improvement(&f, p, &opts)?;
        if let Some((candidate, new_ord)) = &search.improvement {
            report.fail(
                format!(
                    "case {}: semistable member improved from {} to {} by {:?} at p={p}",
                    report.cases, search.initial_ord, new_ord, candidate.description
                ),
                Some(&f),
            );
        }
    }
    Ok(report)
}

fn random_good_at(
    rng: &mut ChaCha8Rng,
    n: usize,
    d: u32,
    primes: &[&PrimeInt],
) -> Result<Presentation> {
    for _ in 0..2000 {
        let f = random_morphism(rng, n, d, 9, 400)?;
        let mut good = true;
        for p in primes {
            if normalized_valuation(&f, p)? != 0 {
                good = false;
                break;
            }
        }
        if good {
            return Ok(f);
        }
    }
    Err(Error::Construction(
        "no random morphism with good reduction at the requested primes".into(),
    ))
}

/// Plant bad reduction at two primes, then check the global pass
/// restores the local minimum at both with all cross-prime checks
/// unchanged.
fn globalize_suite(seed: u64, count: usize, params: &Params) -> Result<SuiteOutcome> {
    params.reject_unknown(&["n", "d", "p", "B"])?;
    let n = params.usize_single("n", 1)?;
    let ds = params.u32_list("d", &[2])?;
    let ps = primes_from(params, &[2, 3, 5])?;
    if ps.len() < 2 {
        return Err(Error::Construction(
            "globalize needs at least two primes".into(),
        ));
    }
    let mut pairs = Vec::new();
    for i in 0..ps.len() {
        for j in i + 1..ps.len() {
            pairs.push((&ps[i], &ps[j]));
        }
    }
    let mut opts = SearchOptions::default();
    opts.search_bound = params.u32_single("B", 3)?;
    opts.max_candidates = 30_000;
    let mut report = SuiteOutcome::new("globalize");
    let mut rng = corpus_rng(seed);
    for i in 0..count {
        let d = ds[i % ds.len()];
        let (p, q) = pairs[i % pairs.len()];
        let mut planted = None;
        for _ in 0..500 {
            let base = random_good_at(&mut rng, n, d, &[p, q])?;
            let once = plant_at_prime(&mut rng, &base, p, 1, true)?;
            let twice = plant_at_prime(&mut rng, &once, q, 1, true)?;
            if normalized_valuation(&twice, p)? > 0 && normalized_valuation(&twice, q)? > 0 {
                planted = Some(twice);
                break;
            }
        }
        let Some(planted) = planted else {
            return Err(Error::Construction(
                "two-prime planting never raised both valuations".into(),
            ));
        };
        report.cases += 1;
        let global = globalize_over_q(&planted, &opts)?;
        for target in [p, q] {
            match global.per_prime.get(target.value()) {
                Some(entry) if entry.minimal_ord == 0 && entry.certified => {}
                Some(entry) => report.fail(
                    format!(
                        "case {i}: entry at {target} ended at ord {} (certified: {})",
                        entry.minimal_ord, entry.certified
                    ),
                    Some(&planted),
                ),
                None => report.fail(
                    format!("case {i}: no divisor entry at planted prime {target}"),
                    Some(&planted),
                ),
            }
            let achieved = normalized_valuation(&global.model, target)?;
            if achieved != 0 {
                report.fail(
                    format!("case {i}: final model has ord {achieved} at {target}"),
                    Some(&planted),
                );
            }
        }
        if let Some(check) = global.cross_checks.iter().find(|c| !c.unchanged) {
            report.fail(
                format!(
                    "case {i}: step at {} moved the valuation at {}",
                    check.step_prime, check.other
                ),
                Some(&planted),
            );
        }
    }
    Ok(report)
}
