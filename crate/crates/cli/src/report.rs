//! Report documents. Every command prints exactly one JSON object on
//! standard output: a command echo, a status, and a result tree in
//! which every exact quantity is carried as a string ("inf" for an
//! infinite valuation). Key order is sorted, so output is byte
//! deterministic for fixed input.

use std::collections::BTreeMap;

use minres_core::arith::{RationalMatrix, Valuation};
use minres_core::minimality::{
    CandidateDescription, CrossPrimeCheck, DivisorEntry, MinimalityStep,
};
use minres_core::resultant::ConjugationValuationCheck;
use minres_core::{
    GlobalModel, MinimalityCertificate, MinimalityStatus, MinimizationOutcome,
    PotentialGoodReduction, Presentation, ResultantDivisor, ResultantValuation,
    SemistabilityVerdict,
};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};

use crate::document::{matrix_strings, MorphismDocument};

#[derive(Serialize)]
pub struct Report {
    pub format: u32,
    pub command: CommandEcho,
    pub status: &'static str,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
}

#[derive(Serialize)]
pub struct CommandEcho {
    pub name: &'static str,
    pub args: BTreeMap<&'static str, String>,
}

impl Report {
    pub fn print(&self) {
        let text = serde_json::to_string_pretty(self).expect("reports serialize");
        println!("{text}");
    }
}

pub fn valuation_str(v: &Valuation) -> String {
    v.to_string()
}

pub fn document_value(f: &Presentation, label: Option<String>) -> Value {
    serde_json::to_value(MorphismDocument::from_presentation(f, label))
        .expect("documents serialize")
}

pub fn matrix_value(m: &RationalMatrix) -> Value {
    json!(matrix_strings(m))
}

pub fn valuation_report_value(r: &ResultantValuation) -> Value {
    json!({
        "p": r.prime.to_string(),
        "resultant": crate::document::rational_string(&r.resultant),
        "ord_resultant": valuation_str(&r.ord_resultant),
        "min_coeff_ord": r.min_coeff_ord,
        "ord_r": valuation_str(&r.ord_r),
    })
}

pub fn conjugation_check_value(c: &ConjugationValuationCheck) -> Value {
    json!({
        "p": c.prime.to_string(),
        "exponent": c.exponent,
        "det_ord": valuation_str(&c.det_ord),
        "lhs_ord": valuation_str(&c.lhs_ord),
        "rhs_ord": valuation_str(&c.rhs_ord),
        "holds": c.holds,
        "holds_exactly": c.holds_exactly,
    })
}

pub fn verdict_value(v: &SemistabilityVerdict) -> Value {
    let witness = v.witness.as_ref().map(|w| {
        json!({
            "p": w.prime,
            "flag": w.flag,
            "r": w.r,
        })
    });
    json!({
        "semistable": v.semistable,
        "strictly_semistable": v.strictly_semistable,
        "witness": witness,
    })
}

fn candidate_value(c: &CandidateDescription) -> Value {
    match c {
        CandidateDescription::ScaleTranslate { swap, alpha, beta } => json!({
            "kind": "scale-translate",
            "swap": swap,
            "alpha": alpha,
            "beta": beta.to_string(),
        }),
        CandidateDescription::HermiteLattice { diagonal_exponents } => json!({
            "kind": "hermite-lattice",
            "diagonal_exponents": diagonal_exponents,
        }),
    }
}

fn status_value(s: &MinimalityStatus) -> Value {
    match s {
        MinimalityStatus::MinimalValuationZero => json!({ "kind": "minimal-valuation-zero" }),
        MinimalityStatus::MinimalSemistableReduction => {
            json!({ "kind": "minimal-semistable-reduction" })
        }
        MinimalityStatus::Improved {
            candidate,
            gamma,
            new_ord,
        } => json!({
            "kind": "improved",
            "candidate": candidate_value(candidate),
            "gamma": matrix_value(gamma),
            "new_ord": new_ord,
        }),
        MinimalityStatus::SearchExhausted { bound } => json!({
            "kind": "search-exhausted",
            "searched_bound": bound,
        }),
    }
}

pub fn certificate_value(c: &MinimalityCertificate) -> Value {
    json!({
        "p": c.prime.to_string(),
        "initial_ord": c.initial_ord,
        "reduction_semistable": c.reduction_semistable,
        "status": status_value(&c.status),
        "certified_minimal": c.is_certified_minimal(),
    })
}

fn step_value(s: &MinimalityStep) -> Value {
    json!({
        "candidate": candidate_value(&s.description),
        "gamma": matrix_value(&s.gamma),
        "ord_before": s.ord_before,
        "ord_after": s.ord_after,
    })
}

pub fn minimization_value(out: &MinimizationOutcome) -> Value {
    let initial_ord = out
        .steps
        .first()
        .map(|s| s.ord_before)
        .unwrap_or(out.certificate.initial_ord);
    json!({
        "p": out.certificate.prime.to_string(),
        "initial_ord": initial_ord,
        "final_ord": out.certificate.resulting_ord(),
        "certified_minimal": out.certificate.is_certified_minimal(),
        "certificate": certificate_value(&out.certificate),
        "steps": out.steps.iter().map(step_value).collect::<Vec<_>>(),
        "combined_gamma": matrix_value(&out.combined_gamma),
        "document": document_value(&out.model, None),
    })
}

fn divisor_entry_value(p: &BigUint, e: &DivisorEntry) -> Value {
    json!({
        "p": p.to_string(),
        "initial_ord": e.initial_ord,
        "minimal_ord": e.minimal_ord,
        "certified": e.certified,
    })
}

pub fn divisor_value(d: &ResultantDivisor) -> Value {
    json!({
        "resultant": d.resultant.to_string(),
        "entries": d
            .entries
            .iter()
            .map(|(p, e)| divisor_entry_value(p, e))
            .collect::<Vec<_>>(),
        "unfactored_cofactor": d.unfactored_cofactor.as_ref().map(|c| c.to_string()),
        "document": document_value(&d.primitive_model, None),
    })
}

fn cross_check_value(c: &CrossPrimeCheck) -> Value {
    json!({
        "step_prime": c.step_prime.to_string(),
        "other": c.other.to_string(),
        "before": valuation_str(&c.before),
        "after": valuation_str(&c.after),
        "unchanged": c.unchanged,
    })
}

pub fn global_model_value(g: &GlobalModel) -> Value {
    json!({
        "document": document_value(&g.model, None),
        "per_prime": g
            .per_prime
            .iter()
            .map(|(p, e)| divisor_entry_value(p, e))
            .collect::<Vec<_>>(),
        "cross_checks": g.cross_checks.iter().map(cross_check_value).collect::<Vec<_>>(),
        "unfactored_cofactor": g.unfactored_cofactor.as_ref().map(|c| c.to_string()),
    })
}

pub fn classification_value(c: &PotentialGoodReduction) -> Value {
    match c {
        PotentialGoodReduction::Good { model } => json!({
            "classification": "good",
            "document": document_value(model, None),
        }),
        PotentialGoodReduction::NotEvenPotential {
            model,
            ord,
            verdict,
        } => json!({
            "classification": "not-even-potential",
            "minimal_ord": ord,
            "verdict": verdict_value(verdict),
            "document": document_value(model, None),
        }),
        PotentialGoodReduction::Unknown { reason } => json!({
            "classification": "unknown",
            "reason": reason,
        }),
    }
}
