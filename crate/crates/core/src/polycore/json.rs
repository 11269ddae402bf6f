//! Interchange format.
//!
//! A polynomial serializes as
//! `{"vars":["x","y"],"domain":"rational","terms":[{"exp":[2,0],"coef":"3/1"}]}`
//! with terms in descending graded-lexicographic order. A matrix is an
//! array of rows, each an array of polynomials sharing one variable list.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::coef::{Coef, Domain};
use super::matrix::PolyMatrix;
use super::poly::{MultiPoly, Vars};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyJson {
    vars: Vec<String>,
    domain: Domain,
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermJson {
    exp: Vec<u32>,
    coef: String,
}

impl From<&MultiPoly> for PolyJson {
    fn from(p: &MultiPoly) -> Self {
        PolyJson {
            vars: p.vars().names().to_vec(),
            domain: p.domain(),
            terms: p
                .terms()
                .rev()
                .map(|(m, c)| TermJson { exp: m.exps().to_vec(), coef: c.to_interchange() })
                .collect(),
        }
    }
}

impl TryFrom<PolyJson> for MultiPoly {
    type Error = Error;

    fn try_from(j: PolyJson) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for v in &j.vars {
            if !seen.insert(v.as_str()) {
                return Err(Error::Parse(format!("duplicate variable `{v}`")));
            }
        }
        let vars = Vars::new(&j.vars);
        let terms = j
            .terms
            .into_iter()
            .map(|t| Ok((t.exp, Coef::parse(j.domain, &t.coef)?)))
            .collect::<Result<Vec<_>>>()?;
        MultiPoly::from_terms(&vars, j.domain, terms)
    }
}

impl Serialize for MultiPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolyJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultiPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = PolyJson::deserialize(d)?;
        MultiPoly::try_from(j).map_err(D::Error::custom)
    }
}

impl Serialize for PolyMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolyMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<MultiPoly>> = Vec::deserialize(d)?;
        PolyMatrix::from_rows(rows).map_err(D::Error::custom)
    }
}

pub fn poly_from_json(s: &str) -> Result<MultiPoly> {
    Ok(serde_json::from_str(s)?)
}

pub fn poly_to_json(p: &MultiPoly) -> String {
    serde_json::to_string(p).expect("polynomial serialization is infallible")
}

pub fn matrix_from_json(s: &str) -> Result<PolyMatrix> {
    Ok(serde_json::from_str(s)?)
}

pub fn matrix_to_json(m: &PolyMatrix) -> String {
    serde_json::to_string(m).expect("matrix serialization is infallible")
}
