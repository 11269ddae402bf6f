//! Determinant constructions that map class members to new polynomials or
//! polynomial matrices.
//!
//! Polynomial-valued transforms treat the first variable as the main one;
//! any further variables are carried along as symbolic parameters.

mod multivariate;
mod univariate;

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polycore::{MultiPoly, PolyMatrix};

pub use multivariate::{
    bivariate_det_transform, block_det_3var, coeff_hankel, q7_arrangement, q7_matrix, q7_product,
    toeplitz_slice_matrix, toeplitz_slice_minor,
};
pub use univariate::{
    derivative_hankel, hankel_band_transform, pair_transform, q1_transform, tk_transform, toeplitz_minor_matrix,
};

#[derive(Clone, Debug, PartialEq)]
pub struct TransformOutput {
    /// `raw` with the leading coefficient in the main variable made positive.
    pub result: MultiPoly,
    pub normalization_sign: i8,
    pub raw: MultiPoly,
}

pub(crate) fn normalized(raw: MultiPoly) -> TransformOutput {
    let (sign, result) = raw.sign_normalized(0);
    TransformOutput { result, normalization_sign: sign, raw }
}

/// Determinant of the `n × n` matrix with entries `entry(r, c)`.
pub(crate) fn det_of(n: usize, entry: impl FnMut(usize, usize) -> MultiPoly) -> Result<MultiPoly> {
    let m = PolyMatrix::from_fn(n, n, entry)?;
    if n == 2 {
        let e = m.entries();
        return Ok(&(&e[0] * &e[3]) - &(&e[1] * &e[2]));
    }
    m.det_with_cap(usize::MAX)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TransformId {
    #[serde(rename = "q1")]
    Q1,
    #[serde(rename = "tk")]
    Tk,
    #[serde(rename = "q2a")]
    Q2a,
    #[serde(rename = "q2b")]
    Q2b,
    #[serde(rename = "q2c")]
    Q2c,
    #[serde(rename = "q2d")]
    Q2d,
    #[serde(rename = "q3")]
    Q3,
    #[serde(rename = "q4")]
    Q4,
    #[serde(rename = "q4a")]
    Q4a,
    #[serde(rename = "q5minor")]
    Q5Minor,
    #[serde(rename = "q7")]
    Q7,
}

impl TransformId {
    pub const ALL: [TransformId; 11] = [
        TransformId::Q1,
        TransformId::Tk,
        TransformId::Q2a,
        TransformId::Q2b,
        TransformId::Q2c,
        TransformId::Q2d,
        TransformId::Q3,
        TransformId::Q4,
        TransformId::Q4a,
        TransformId::Q5Minor,
        TransformId::Q7,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TransformId::Q1 => "q1",
            TransformId::Tk => "tk",
            TransformId::Q2a => "q2a",
            TransformId::Q2b => "q2b",
            TransformId::Q2c => "q2c",
            TransformId::Q2d => "q2d",
            TransformId::Q3 => "q3",
            TransformId::Q4 => "q4",
            TransformId::Q4a => "q4a",
            TransformId::Q5Minor => "q5minor",
            TransformId::Q7 => "q7",
        }
    }
}

impl fmt::Display for TransformId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TransformId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TransformId::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown transform `{s}`")))
    }
}

/// Parameters shared by the addressable transforms; each reads the ones
/// it needs.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformParams {
    pub k: usize,
    pub d: usize,
    pub i: usize,
    pub scaled: bool,
    pub size: Option<usize>,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub factors: Vec<(BigRational, BigRational)>,
}

impl Default for TransformParams {
    fn default() -> Self {
        TransformParams { k: 1, d: 1, i: 0, scaled: false, size: None, rows: vec![], cols: vec![], factors: vec![] }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Transformed {
    Poly(TransformOutput),
    Matrix(PolyMatrix),
}

/// Runs a transform by identifier. `g` is the second input of `q2b`; `f`
/// is ignored by `q7` when explicit factors are given.
pub fn apply(id: TransformId, f: Option<&MultiPoly>, g: Option<&MultiPoly>, p: &TransformParams) -> Result<Transformed> {
    Ok(match id {
        TransformId::Q1 => Transformed::Poly(q1_transform(need(f, "input")?)?),
        TransformId::Tk => Transformed::Poly(tk_transform(need(f, "input")?, p.k)?),
        TransformId::Q2a => Transformed::Poly(hankel_band_transform(need(f, "input")?, p.d)?),
        TransformId::Q2b => Transformed::Poly(pair_transform(need(f, "input")?, need(g, "second input")?)?),
        TransformId::Q2c => Transformed::Poly(bivariate_det_transform(need(f, "input")?, p.d)?),
        TransformId::Q2d => {
            let f = need(f, "input")?;
            let n = f.degree_in(0).unwrap_or(0) as usize;
            Transformed::Matrix(toeplitz_minor_matrix(f, p.d, p.size.unwrap_or(n + p.d + 2))?)
        }
        TransformId::Q3 => Transformed::Poly(block_det_3var(need(f, "input")?, p.k)?),
        TransformId::Q4 => Transformed::Poly(coeff_hankel(need(f, "input")?, p.d, p.i)?),
        TransformId::Q4a => Transformed::Poly(derivative_hankel(need(f, "input")?, p.d, p.scaled)?),
        TransformId::Q5Minor => {
            let f = need(f, "input")?;
            let size = p.size.unwrap_or(6);
            if p.rows.is_empty() && p.cols.is_empty() {
                Transformed::Matrix(toeplitz_slice_matrix(f, size)?)
            } else {
                Transformed::Poly(normalized(toeplitz_slice_minor(f, &p.rows, &p.cols, size)?))
            }
        }
        TransformId::Q7 => {
            if !p.factors.is_empty() {
                let m = q7_matrix(&p.factors)?;
                match p.size {
                    Some(s) if s < m.rows() => {
                        let d = p.factors.len();
                        let idx: Vec<usize> = (0..s).collect();
                        let cols: Vec<usize> = (d + 1 - s..=d).collect();
                        Transformed::Matrix(m.submatrix(&idx, &cols)?)
                    }
                    _ => Transformed::Matrix(m),
                }
            } else {
                let f = need(f, "input or factors")?;
                let d = p.size.map(|s| s.saturating_sub(1)).unwrap_or(f.degree_in(1).unwrap_or(0) as usize);
                Transformed::Matrix(q7_arrangement(f, d)?)
            }
        }
    })
}

fn need<'a>(x: Option<&'a MultiPoly>, what: &str) -> Result<&'a MultiPoly> {
    x.ok_or_else(|| Error::InvalidArgument(format!("missing {what}")))
}

#[cfg(test)]
mod tests;
