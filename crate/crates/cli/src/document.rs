//! Wire format for presentations: JSON documents with exact rational
//! coefficients as strings and sparse monomial listings (an omitted
//! monomial is zero). Parsing and printing round-trip exactly.

use minres_core::arith::RationalMatrix;
use minres_core::{Error, Presentation, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub const DOCUMENT_FORMAT: u32 = 1;

/// A tuple of n + 1 degree-d forms. Each form lists
/// `[coefficient, exponents]` pairs; coefficients are decimal integer
/// strings, optionally `"num/den"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismDocument {
    pub format: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub n: usize,
    pub d: u32,
    pub forms: Vec<Vec<(String, Vec<u32>)>>,
}

impl MorphismDocument {
    pub fn from_presentation(f: &Presentation, label: Option<String>) -> MorphismDocument {
        let forms = f
            .to_sparse()
            .into_iter()
            .map(|form| {
                form.into_iter()
                    .map(|(c, e)| (rational_string(&c), e))
                    .collect()
            })
            .collect();
        MorphismDocument {
            format: DOCUMENT_FORMAT,
            label,
            n: f.n(),
            d: f.degree(),
            forms,
        }
    }

    pub fn to_presentation(&self) -> Result<Presentation> {
        if self.format != DOCUMENT_FORMAT {
            return Err(Error::Construction(format!(
                "unsupported document format {}, this build reads format {}",
                self.format, DOCUMENT_FORMAT
            )));
        }
        let mut sparse = Vec::with_capacity(self.forms.len());
        for form in &self.forms {
            let mut terms = Vec::with_capacity(form.len());
            for (coeff, exps) in form {
                terms.push((parse_rational(coeff)?, exps.clone()));
            }
            sparse.push(terms);
        }
        Presentation::from_sparse(self.n, self.d, &sparse)
    }

    pub fn parse(text: &str) -> Result<MorphismDocument> {
        serde_json::from_str(text)
            .map_err(|e| Error::Construction(format!("malformed morphism document: {e}")))
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let int = |t: &str| -> Result<BigInt> {
        t.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Construction(format!("not an integer: {t:?}")))
    };
    match s.split_once('/') {
        None => Ok(BigRational::from(int(s)?)),
        Some((num, den)) => {
            let den = int(den)?;
            if den.is_zero() {
                return Err(Error::Construction(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(int(num)?, den))
        }
    }
}

pub fn rational_string(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parse `--gamma`: a JSON array of rows of rational strings, square
/// and of size n + 1 for the presentation it will act on.
pub fn parse_matrix(s: &str) -> Result<RationalMatrix> {
    let rows: Vec<Vec<String>> = serde_json::from_str(s).map_err(|e| {
        Error::Construction(format!(
            "gamma must be a JSON array of rows of rational strings: {e}"
        ))
    })?;
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows.len()) {
        return Err(Error::Construction(
            "gamma must be a nonempty square matrix".into(),
        ));
    }
    let mut parsed = Vec::with_capacity(rows.len());
    for row in &rows {
        let mut out = Vec::with_capacity(row.len());
        for entry in row {
            out.push(parse_rational(entry)?);
        }
        parsed.push(out);
    }
    Ok(RationalMatrix::from_rows(parsed))
}

pub fn matrix_strings(m: &RationalMatrix) -> Vec<Vec<String>> {
    m.rows()
        .iter()
        .map(|row| row.iter().map(rational_string).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(text: &str) -> MorphismDocument {
        MorphismDocument::parse(text).expect("parses")
    }

    #[test]
    fn document_round_trips_through_presentation() {
        let d = doc(
            r#"{"format":1,"n":1,"d":2,"forms":[[["2",[2,0]],["-1/3",[0,2]]],[["1",[1,1]]]]}"#,
        );
        let f = d.to_presentation().expect("valid");
        let back = MorphismDocument::from_presentation(&f, None);
        assert_eq!(back, d);
        let reprinted = serde_json::to_string(&back).expect("serializes");
        assert_eq!(doc(&reprinted), d);
    }

    #[test]
    fn bad_documents_are_rejected() {
        assert!(MorphismDocument::parse("{").is_err());
        // wrong exponent degree
        let d = doc(r#"{"format":1,"n":1,"d":2,"forms":[[["1",[3,0]]],[["1",[1,1]]]]}"#);
        assert!(d.to_presentation().is_err());
        // unknown format
        let d = doc(r#"{"format":2,"n":1,"d":2,"forms":[[["1",[2,0]]],[["1",[1,1]]]]}"#);
        assert!(d.to_presentation().is_err());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn matrices_parse_from_rational_strings() {
        let m = parse_matrix(r#"[["1","1/2"],["0","-3"]]"#).expect("parses");
        assert_eq!(m.nrows(), 2);
        assert_eq!(matrix_strings(&m)[0][1], "1/2");
        assert!(parse_matrix(r#"[["1","0"]]"#).is_err());
        assert!(parse_matrix("nonsense").is_err());
    }
}
