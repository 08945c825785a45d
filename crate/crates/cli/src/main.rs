//! minres: exact reduction theory for endomorphisms of projective
//! space over Q. Commands read a morphism document (a file path or `-`
//! for standard input) and print one JSON report; exit code 0 means
//! success, 1 a domain or parse error, 2 a refused budget.

mod corpus_cmd;
mod document;
mod params;
mod report;
mod verify;

use std::collections::BTreeMap;
use std::io::Read;

use clap::{Parser, Subcommand};
use minres_core::arith::PrimeInt;
use minres_core::minimality::minimize_to_fixpoint;
use minres_core::resultant::resultant;
use minres_core::{
    globalize_over_q, is_semistable_presentation, minimal_resultant_divisor,
    potential_good_reduction_status, valuation_report, Error, Presentation, Result,
    SearchOptions,
};
use num_bigint::BigUint;
use serde_json::{json, Value};

use document::MorphismDocument;
use report::{CommandEcho, Report};

#[derive(Parser)]
#[command(
    name = "minres",
    version,
    about = "Exact resultant valuations, semistability, and minimal models on P^n over Q"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Resultant of the presentation, exactly.
    Resultant {
        /// Morphism document path, `-` for standard input.
        input: String,
    },
    /// Valuations at p: resultant order, min coefficient order, ord_R.
    Valuation {
        input: String,
        /// A prime.
        #[arg(long)]
        p: String,
    },
    /// Conjugate by an invertible matrix and print the new document.
    Conjugate {
        input: String,
        /// JSON matrix of rational strings, e.g. [["1","0"],["0","2"]].
        #[arg(long)]
        gamma: String,
        /// Also check the conjugation valuation identity at this prime.
        #[arg(long)]
        p: Option<String>,
    },
    /// Semistability of the reduction mod p, with a witness if unstable.
    Semistable {
        input: String,
        #[arg(long)]
        p: String,
    },
    /// Minimize ord_R at p by bounded conjugation search, to a fixpoint.
    Minimize {
        input: String,
        #[arg(long)]
        p: String,
        /// Search bound for conjugation candidates.
        #[arg(long, default_value_t = 3)]
        bound: u32,
    },
    /// Minimal resultant divisor: minimize at every bad prime.
    Divisor {
        input: String,
        #[arg(long, default_value_t = 3)]
        bound: u32,
    },
    /// One presentation minimal at all bad primes simultaneously.
    Globalize {
        input: String,
        #[arg(long, default_value_t = 3)]
        bound: u32,
    },
    /// Potential-good-reduction classification at p.
    Pgr {
        input: String,
        #[arg(long)]
        p: String,
    },
    /// Run a property suite on a seeded corpus; exits 0 only on zero failures.
    Verify {
        /// One of: invariance, containment, minimality, globalize.
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 20260816)]
        seed: u64,
        /// Corpus size; each suite has its own default.
        #[arg(long)]
        count: Option<usize>,
        /// Comma list like n=1,d=2..3,p=2,3,5,B=3.
        #[arg(long)]
        params: Option<String>,
    },
    /// Write a corpus of morphism documents to a file.
    Corpus {
        /// One of: random, conjugated-good, boundary-scan.
        #[arg(long)]
        kind: String,
        #[arg(long, default_value_t = 20260816)]
        seed: u64,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        params: Option<String>,
        /// Output path.
        #[arg(long)]
        out: String,
    },
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    if let Ok(workers) = std::env::var("WORKERS") {
        match workers.trim().parse::<usize>() {
            Ok(n) if n >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("WORKERS must be a positive integer, got {workers:?}");
                return 1;
            }
        }
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap reserves exit code 2 for usage errors; here 2 means a
            // refused budget, so usage problems map to 1
            let is_help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if is_help { 0 } else { 1 };
        }
    };
    let (echo, outcome) = dispatch(&cli.command);
    let (status, exit_code, error, result) = match outcome {
        Ok(value) => ("ok", 0, None, Some(value)),
        Err(Failure::Error(e)) if e.is_budget() => ("budget-error", 2, Some(e.to_string()), None),
        Err(Failure::Error(e)) => ("domain-error", 1, Some(e.to_string()), None),
        Err(Failure::SuiteFailed(value)) => ("failed", 1, None, Some(value)),
    };
    Report {
        format: document::DOCUMENT_FORMAT,
        command: echo,
        status,
        exit_code,
        error,
        result,
    }
    .print();
    exit_code
}

enum Failure {
    Error(Error),
    /// The suite ran to completion but found violations.
    SuiteFailed(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        Failure::Error(e)
    }
}

type CmdResult = std::result::Result<Value, Failure>;

fn dispatch(cmd: &Cmd) -> (CommandEcho, CmdResult) {
    let mut args = BTreeMap::new();
    match cmd {
        Cmd::Resultant { input } => {
            args.insert("input", input.clone());
            (echo("resultant", args), cmd_resultant(input))
        }
        Cmd::Valuation { input, p } => {
            args.insert("input", input.clone());
            args.insert("p", p.clone());
            (echo("valuation", args), cmd_valuation(input, p))
        }
        Cmd::Conjugate { input, gamma, p } => {
            args.insert("input", input.clone());
            args.insert("gamma", gamma.clone());
            if let Some(p) = p {
                args.insert("p", p.clone());
            }
            (
                echo("conjugate", args),
                cmd_conjugate(input, gamma, p.as_deref()),
            )
        }
        Cmd::Semistable { input, p } => {
            args.insert("input", input.clone());
            args.insert("p", p.clone());
            (echo("semistable", args), cmd_semistable(input, p))
        }
        Cmd::Minimize { input, p, bound } => {
            args.insert("input", input.clone());
            args.insert("p", p.clone());
            args.insert("bound", bound.to_string());
            (echo("minimize", args), cmd_minimize(input, p, *bound))
        }
        Cmd::Divisor { input, bound } => {
            args.insert("input", input.clone());
            args.insert("bound", bound.to_string());
            (echo("divisor", args), cmd_divisor(input, *bound))
        }
        Cmd::Globalize { input, bound } => {
            args.insert("input", input.clone());
            args.insert("bound", bound.to_string());
            (echo("globalize", args), cmd_globalize(input, *bound))
        }
        Cmd::Pgr { input, p } => {
            args.insert("input", input.clone());
            args.insert("p", p.clone());
            (echo("pgr", args), cmd_pgr(input, p))
        }
        Cmd::Verify {
            suite,
            seed,
            count,
            params,
        } => {
            args.insert("suite", suite.clone());
            args.insert("seed", seed.to_string());
            if let Some(count) = count {
                args.insert("count", count.to_string());
            }
            if let Some(params) = params {
                args.insert("params", params.clone());
            }
            (
                echo("verify", args),
                cmd_verify(suite, *seed, *count, params.as_deref()),
            )
        }
        Cmd::Corpus {
            kind,
            seed,
            count,
            params,
            out,
        } => {
            args.insert("kind", kind.clone());
            args.insert("seed", seed.to_string());
            if let Some(count) = count {
                args.insert("count", count.to_string());
            }
            if let Some(params) = params {
                args.insert("params", params.clone());
            }
            args.insert("out", out.clone());
            (
                echo("corpus", args),
                cmd_corpus(kind, *seed, *count, params.as_deref(), out),
            )
        }
    }
}

fn echo(name: &'static str, args: BTreeMap<&'static str, String>) -> CommandEcho {
    CommandEcho { name, args }
}

fn read_input(path: &str) -> Result<Presentation> {
    let text = if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Error::Construction(format!("cannot read standard input: {e}")))?;
        text
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Error::Construction(format!("cannot read {path}: {e}")))?
    };
    MorphismDocument::parse(&text)?.to_presentation()
}

fn parse_prime(text: &str) -> Result<PrimeInt> {
    let value = text
        .trim()
        .parse::<BigUint>()
        .map_err(|_| Error::Construction(format!("p must be a nonnegative integer, got {text:?}")))?;
    PrimeInt::new(value)
}

fn search_options(bound: u32) -> SearchOptions {
    SearchOptions {
        search_bound: bound,
        ..SearchOptions::default()
    }
}

fn cmd_resultant(input: &str) -> CmdResult {
    let f = read_input(input)?;
    let r = resultant(&f)?;
    Ok(json!({
        "n": f.n(),
        "d": f.degree(),
        "resultant": document::rational_string(&r),
    }))
}

fn cmd_valuation(input: &str, p: &str) -> CmdResult {
    let f = read_input(input)?;
    let p = parse_prime(p)?;
    let report = valuation_report(&f, &p)?;
    Ok(report::valuation_report_value(&report))
}

fn cmd_conjugate(input: &str, gamma: &str, p: Option<&str>) -> CmdResult {
    let f = read_input(input)?;
    let gamma = document::parse_matrix(gamma)?;
    if num_traits::Zero::is_zero(&gamma.det()) {
        return Err(Error::SingularMatrix.into());
    }
    let conjugated = f.conjugate(&gamma)?;
    let check = match p {
        Some(p) => {
            let p = parse_prime(p)?;
            Some(report::conjugation_check_value(
                &minres_core::resultant::check_conjugation_valuation(&f, &gamma, &p)?,
            ))
        }
        None => None,
    };
    Ok(json!({
        "det": document::rational_string(&gamma.det()),
        "check": check,
        "document": report::document_value(&conjugated, None),
    }))
}

fn cmd_semistable(input: &str, p: &str) -> CmdResult {
    let f = read_input(input)?;
    let p = parse_prime(p)?;
    let verdict = is_semistable_presentation(&f, &p, &Default::default())?;
    Ok(json!({
        "p": p.to_string(),
        "verdict": report::verdict_value(&verdict),
    }))
}

fn cmd_minimize(input: &str, p: &str, bound: u32) -> CmdResult {
    let f = read_input(input)?;
    let p = parse_prime(p)?;
    let outcome = minimize_to_fixpoint(&f, &p, &search_options(bound))?;
    Ok(report::minimization_value(&outcome))
}

fn cmd_divisor(input: &str, bound: u32) -> CmdResult {
    let f = read_input(input)?;
    let divisor = minimal_resultant_divisor(&f, &search_options(bound))?;
    Ok(report::divisor_value(&divisor))
}

fn cmd_globalize(input: &str, bound: u32) -> CmdResult {
    let f = read_input(input)?;
    let global = globalize_over_q(&f, &search_options(bound))?;
    Ok(report::global_model_value(&global))
}

fn cmd_pgr(input: &str, p: &str) -> CmdResult {
    let f = read_input(input)?;
    let p = parse_prime(p)?;
    let classification = potential_good_reduction_status(&f, &p, &SearchOptions::default())?;
    Ok(report::classification_value(&classification))
}

fn cmd_verify(suite: &str, seed: u64, count: Option<usize>, params: Option<&str>) -> CmdResult {
    let params = params::parse(params)?;
    let outcome = verify::run_suite(suite, seed, count, &params)?;
    let value = outcome.to_value();
    if outcome.passed() {
        Ok(value)
    } else {
        Err(Failure::SuiteFailed(value))
    }
}

fn cmd_corpus(
    kind: &str,
    seed: u64,
    count: Option<usize>,
    params: Option<&str>,
    out: &str,
) -> CmdResult {
    let params = params::parse(params)?;
    let corpus = corpus_cmd::generate(kind, seed, count, &params)?;
    let text = serde_json::to_string_pretty(&corpus).expect("corpora serialize");
    std::fs::write(out, text.as_bytes())
        .map_err(|e| Error::Construction(format!("cannot write {out}: {e}")))?;
    Ok(json!({
        "kind": corpus.kind,
        "seed": corpus.seed,
        "written": corpus.count,
        "out": out,
    }))
}
