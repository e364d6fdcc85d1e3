//! JSON interchange format for polynomials:
//! `{"n": 2, "terms": [{"alpha": [1,0], "beta": [0,0], "re": "1/1", "im": "0/1"}]}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polynomial::{Monomial, Multiindex, Polynomial};
use crate::scalar::{format_ratio, parse_ratio, ExactScalar};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDoc {
    pub alpha: Vec<u32>,
    pub beta: Vec<u32>,
    pub re: String,
    pub im: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialDoc {
    pub n: usize,
    pub terms: Vec<TermDoc>,
}

impl From<&Polynomial> for PolynomialDoc {
    fn from(p: &Polynomial) -> Self {
        PolynomialDoc {
            n: p.n(),
            terms: p
                .terms()
                .map(|(m, c)| TermDoc {
                    alpha: m.alpha.entries().to_vec(),
                    beta: m.beta.entries().to_vec(),
                    re: format_ratio(&c.re),
                    im: format_ratio(&c.im),
                })
                .collect(),
        }
    }
}

impl TryFrom<&PolynomialDoc> for Polynomial {
    type Error = Error;

    fn try_from(doc: &PolynomialDoc) -> Result<Polynomial> {
        let mut terms = Vec::with_capacity(doc.terms.len());
        for (i, t) in doc.terms.iter().enumerate() {
            let bad = |what: String| Error::Parse(format!("term {i}: {what}"));
            if t.alpha.len() != doc.n || t.beta.len() != doc.n {
                return Err(bad(format!(
                    "alpha/beta must have length n = {} (got {} and {})",
                    doc.n,
                    t.alpha.len(),
                    t.beta.len()
                )));
            }
            let re = parse_ratio(&t.re).map_err(|e| bad(e.to_string()))?;
            let im = parse_ratio(&t.im).map_err(|e| bad(e.to_string()))?;
            terms.push((
                Monomial::new(Multiindex::new(t.alpha.clone()), Multiindex::new(t.beta.clone())),
                ExactScalar::new(re, im),
            ));
        }
        Polynomial::from_terms(doc.n, terms)
    }
}

pub fn polynomial_to_json(p: &Polynomial) -> serde_json::Value {
    serde_json::to_value(PolynomialDoc::from(p)).expect("polynomial serializes")
}

pub fn polynomial_from_json(value: &serde_json::Value) -> Result<Polynomial> {
    let doc: PolynomialDoc = serde_json::from_value(value.clone())
        .map_err(|e| Error::Parse(format!("malformed polynomial JSON: {e}")))?;
    Polynomial::try_from(&doc)
}

pub fn parse_polynomial(text: &str) -> Result<Polynomial> {
    let doc: PolynomialDoc = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("malformed polynomial JSON: {e}")))?;
    Polynomial::try_from(&doc)
}
