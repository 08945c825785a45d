//! Corpus generation: reproducible document families. `random` draws
//! morphisms, `conjugated-good` plants non-minimal models by
//! conjugating good-reduction maps with diag(p^k, 1, ..., 1), and
//! `boundary-scan` enumerates all reduced points at small (d, p) with
//! a semistability verdict tag on each lift.

use minres_core::arith::{ord_p, PrimeInt, Valuation};
use minres_core::corpus::{corpus_rng, exhaustive_reduced_points, lift_reduced, plant_at_prime, random_morphism};
use minres_core::minimality::normalized_valuation;
use minres_core::resultant::resultant;
use minres_core::{is_semistable, Error, Result, SemistabilityOptions};
use serde::Serialize;

use crate::document::MorphismDocument;
use crate::params::Params;

#[derive(Serialize)]
pub struct CorpusFile {
    pub format: u32,
    pub kind: String,
    pub seed: u64,
    pub count: usize,
    pub documents: Vec<MorphismDocument>,
}

pub fn generate(
    kind: &str,
    seed: u64,
    count: Option<usize>,
    params: &Params,
) -> Result<CorpusFile> {
    let documents = match kind {
        "random" => random_corpus(seed, count.unwrap_or(20), params)?,
        "conjugated-good" => conjugated_good_corpus(seed, count.unwrap_or(10), params)?,
        "boundary-scan" => boundary_scan_corpus(params)?,
        other => {
            return Err(Error::Construction(format!(
                "unknown corpus kind {other:?}, expected random, conjugated-good, or boundary-scan"
            )))
        }
    };
    Ok(CorpusFile {
        format: crate::document::DOCUMENT_FORMAT,
        kind: kind.to_string(),
        seed,
        count: documents.len(),
        documents,
    })
}

fn random_corpus(seed: u64, count: usize, params: &Params) -> Result<Vec<MorphismDocument>> {
    params.reject_unknown(&["n", "d"])?;
    let n = params.usize_single("n", 1)?;
    let ds = params.u32_list("d", &[2])?;
    let mut rng = corpus_rng(seed);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let f = random_morphism(&mut rng, n, ds[i % ds.len()], 9, 400)?;
        out.push(MorphismDocument::from_presentation(
            &f,
            Some(format!("random-{i}")),
        ));
    }
    Ok(out)
}

fn conjugated_good_corpus(
    seed: u64,
    count: usize,
    params: &Params,
) -> Result<Vec<MorphismDocument>> {
    params.reject_unknown(&["n", "d", "p", "k"])?;
    let n = params.usize_single("n", 1)?;
    let d = params.u32_single("d", 2)?;
    let p = PrimeInt::from_u64(params.u64_single("p", 2)?)?;
    let k = params.u32_single("k", 1)?;
    if k == 0 {
        return Err(Error::Construction("k must be positive".into()));
    }
    let mut rng = corpus_rng(seed);
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let mut planted = None;
        for _ in 0..2000 {
            let f = random_morphism(&mut rng, n, d, 9, 400)?;
            if normalized_valuation(&f, &p)? != 0 {
                continue;
            }
            let g = plant_at_prime(&mut rng, &f, &p, k, false)?;
            // degree-sensitive cancellation can leave the plant trivial
            if normalized_valuation(&g, &p)? > 0 {
                planted = Some(g);
                break;
            }
        }
        let Some(g) = planted else {
            return Err(Error::Construction(
                "planting never produced a positive valuation".into(),
            ));
        };
        out.push(MorphismDocument::from_presentation(
            &g,
            Some(format!("conjugated-good-{i} p={p} k={k}")),
        ));
    }
    Ok(out)
}

fn boundary_scan_corpus(params: &Params) -> Result<Vec<MorphismDocument>> {
    params.reject_unknown(&["n", "d", "p"])?;
    let n = params.usize_single("n", 1)?;
    if n != 1 {
        return Err(Error::Construction(
            "boundary scans enumerate points on the projective line only".into(),
        ));
    }
    let d = params.u32_single("d", 2)?;
    let p = PrimeInt::from_u64(params.u64_single("p", 2)?)?;
    let p_small = p.to_u64().expect("constructed from u64");
    let mut opts = SemistabilityOptions {
        classify_boundary: true,
        ..SemistabilityOptions::default()
    };
    opts.max_prime = opts.max_prime.max(p_small);
    let mut out = Vec::new();
    for point in exhaustive_reduced_points(n, d, p_small)? {
        let verdict = is_semistable(&point, &opts)?;
        let lift = lift_reduced(&point)?;
        let degenerate = ord_p(&resultant(&lift)?, &p) != Valuation::Finite(0);
        let tag = if !verdict.semistable {
            "unstable"
        } else if verdict.strictly_semistable == Some(true) {
            "strictly-semistable"
        } else {
            "semistable"
        };
        let label = if degenerate {
            format!("p={p} {tag} degenerate")
        } else {
            format!("p={p} {tag}")
        };
        out.push(MorphismDocument::from_presentation(&lift, Some(label)));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params;

    #[test]
    fn corpora_are_deterministic_per_seed() {
        let p = params::parse(Some("n=1,d=2..3")).expect("parses");
        let a = generate("random", 3, Some(4), &p).expect("generates");
        let b = generate("random", 3, Some(4), &p).expect("generates");
        assert_eq!(a.documents, b.documents);
        assert_eq!(a.count, 4);
        let c = generate("random", 4, Some(4), &p).expect("generates");
        assert_ne!(a.documents, c.documents);
    }

    #[test]
    fn planted_documents_carry_positive_valuation() {
        let p = params::parse(Some("p=2,k=1")).expect("parses");
        let corpus = generate("conjugated-good", 5, Some(2), &p).expect("generates");
        let prime = PrimeInt::from_u64(2).expect("prime");
        for doc in &corpus.documents {
            let f = doc.to_presentation().expect("valid");
            assert!(normalized_valuation(&f, &prime).expect("morphism") > 0);
        }
    }

    #[test]
    fn boundary_scan_tags_are_self_consistent() {
        let p = params::parse(Some("d=2,p=2")).expect("parses");
        let corpus = generate("boundary-scan", 0, None, &p).expect("generates");
        assert_eq!(corpus.count, 63);
        let prime = PrimeInt::from_u64(2).expect("prime");
        let opts = SemistabilityOptions::default();
        let mut unstable = 0;
        for doc in &corpus.documents {
            let f = doc.to_presentation().expect("valid");
            let point = f.reduce_at(&prime).expect("reduces");
            let verdict = is_semistable(&point, &opts).expect("in budget");
            let label = doc.label.as_deref().expect("labeled");
            assert_eq!(!verdict.semistable, label.contains("unstable"), "{label}");
            if !verdict.semistable {
                unstable += 1;
            }
        }
        assert!(unstable > 0);
    }
}
