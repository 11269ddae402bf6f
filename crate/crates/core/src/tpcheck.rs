//! Minor enumeration and the matrix classes built on it: totally positive,
//! totally stable and totally upper.

use std::collections::HashMap;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::classes::{is_real_rooted, is_stable, ClassVerdict, Status};
use crate::error::{Error, Result};
use crate::polycore::matrix::{det_integer, integer_row_scaled};
use crate::polycore::{Coef, MultiPoly, PolyMatrix, Vars};

pub const DEFAULT_ORDER_CAP: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MinorVerdict {
    /// Non-constant value, not yet classified.
    Unclassified,
    Positive,
    Zero,
    Negative,
    Member,
    NonMember,
    Undetermined,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinorReport {
    pub order: usize,
    pub row_set: Vec<usize>,
    pub col_set: Vec<usize>,
    pub value: MultiPoly,
    pub verdict: MinorVerdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixClassVerdict {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failing_minor: Option<MinorReport>,
    pub minors_checked: usize,
    pub order_cap: usize,
    /// Minors that vanished identically and were accepted.
    pub zero_minors: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TpMode {
    Strict,
    Weak,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosureMode {
    Stable,
    Upper,
}

/// Advances `idx` to the next strictly increasing selection from `0..n`.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

enum Values {
    /// Rows cleared of denominators; a minor is the integer minor over the
    /// product of the chosen row scales.
    Integer { m: Vec<Vec<BigInt>>, scales: Vec<BigInt> },
    /// With rational coefficients, `cleared` holds each row times the lcm of
    /// its denominators, and those lcms.
    General {
        toeplitz: bool,
        cleared: Option<(PolyMatrix, Vec<BigInt>)>,
        cache: HashMap<(Vec<usize>, Vec<usize>), MultiPoly>,
    },
}

fn clear_row_denominators(m: &PolyMatrix) -> Option<(PolyMatrix, Vec<BigInt>)> {
    let mut scales = Vec::with_capacity(m.rows());
    for r in 0..m.rows() {
        let mut l = BigInt::one();
        for e in m.row(r) {
            for (_, c) in e.terms() {
                l = l.lcm(c.as_rational()?.denom());
            }
        }
        scales.push(l);
    }
    let cleared = PolyMatrix::from_fn(m.rows(), m.cols(), |r, c| {
        m.get(r, c).scale(&Coef::Rational(BigRational::from_integer(scales[r].clone())))
    })
    .ok()?;
    Some((cleared, scales))
}

struct Evaluator {
    values: Values,
    upper: bool,
    lower: bool,
}

impl Evaluator {
    fn new(m: &PolyMatrix) -> Self {
        let values = match m.rational_entries() {
            Some(q) => {
                let ints = integer_row_scaled(&q);
                let scales = q
                    .iter()
                    .zip(&ints)
                    .map(|(qr, ir)| {
                        qr.iter()
                            .zip(ir)
                            .find(|(a, _)| !a.is_zero())
                            .map(|(a, b)| (BigRational::from_integer(b.clone()) / a).to_integer())
                            .unwrap_or_else(BigInt::one)
                    })
                    .collect();
                Values::Integer { m: ints, scales }
            }
            None => Values::General {
                toeplitz: m.is_toeplitz(),
                cleared: clear_row_denominators(m),
                cache: HashMap::new(),
            },
        };
        let below = |r: usize, c: usize| m.get(r, c).is_zero();
        let upper = (0..m.rows()).all(|r| (0..m.cols().min(r)).all(|c| below(r, c)));
        let lower = (0..m.rows()).all(|r| (r + 1..m.cols()).all(|c| below(r, c)));
        Evaluator { values, upper, lower }
    }

    /// A minor of a triangular matrix vanishes unless its index sets are
    /// ordered componentwise the right way.
    fn structurally_zero(&self, m: &PolyMatrix, rows: &[usize], cols: &[usize]) -> bool {
        (self.upper && rows.iter().zip(cols).any(|(r, c)| r > c))
            || (self.lower && rows.iter().zip(cols).any(|(r, c)| r < c))
            || rows.iter().any(|&r| cols.iter().all(|&c| m.get(r, c).is_zero()))
            || cols.iter().any(|&c| rows.iter().all(|&r| m.get(r, c).is_zero()))
    }

    /// Sign of a constant minor. Row scales are positive, so the integer
    /// determinant already has the right sign.
    fn minor_sign(&mut self, m: &PolyMatrix, rows: &[usize], cols: &[usize]) -> Result<i8> {
        if self.structurally_zero(m, rows, cols) {
            return Ok(0);
        }
        if let Values::Integer { m: ints, .. } = &self.values {
            let sub: Vec<Vec<BigInt>> =
                rows.iter().map(|&r| cols.iter().map(|&c| ints[r][c].clone()).collect()).collect();
            return Ok(match det_integer(&sub).sign() {
                Sign::Plus => 1,
                Sign::Minus => -1,
                Sign::NoSign => 0,
            });
        }
        Ok(self.minor(m, rows, cols)?.constant_value().map_or(0, |c| c.signum()))
    }

    fn minor(&mut self, m: &PolyMatrix, rows: &[usize], cols: &[usize]) -> Result<MultiPoly> {
        if self.structurally_zero(m, rows, cols) {
            return Ok(MultiPoly::zero(m.vars(), m.domain()));
        }
        match &mut self.values {
            Values::Integer { m: ints, scales } => {
                let sub: Vec<Vec<BigInt>> =
                    rows.iter().map(|&r| cols.iter().map(|&c| ints[r][c].clone()).collect()).collect();
                let den: BigInt = rows.iter().map(|&r| &scales[r]).product();
                let v = BigRational::new(det_integer(&sub), den);
                Ok(MultiPoly::constant(m.vars(), Coef::Rational(v)))
            }
            Values::General { toeplitz, cleared, cache } => {
                let det = |rows: &[usize], cols: &[usize]| -> Result<MultiPoly> {
                    match &*cleared {
                        Some((c, scales)) => {
                            let den: BigInt = rows.iter().map(|&r| &scales[r]).product();
                            let v = c.submatrix(rows, cols)?.det_with_cap(usize::MAX)?;
                            Ok(if den.is_one() { v } else { v.scale(&Coef::Rational(BigRational::new(BigInt::one(), den))) })
                        }
                        None => m.submatrix(rows, cols)?.det_with_cap(usize::MAX),
                    }
                };
                if !*toeplitz {
                    return det(rows, cols);
                }
                // entries depend on c - r only, so a common shift keeps the minor
                let t = rows[0].min(cols[0]);
                let key = (rows.iter().map(|r| r - t).collect(), cols.iter().map(|c| c - t).collect());
                if let Some(v) = cache.get(&key) {
                    return Ok(v.clone());
                }
                let v = det(rows, cols)?;
                cache.insert(key, v.clone());
                Ok(v)
            }
        }
    }
}

/// Lazy stream of minors, order by order, each order lexicographic in
/// `(row_set, col_set)`.
pub struct Minors<'a> {
    m: &'a PolyMatrix,
    rows: Vec<usize>,
    cols: Vec<usize>,
    last_order: usize,
    /// Skip minors whose index sets both avoid 0; on a Toeplitz matrix
    /// each equals an earlier minor shifted toward the corner.
    canonical_only: bool,
    done: bool,
    eval: Evaluator,
}

impl Iterator for Minors<'_> {
    type Item = Result<MinorReport>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let (rows, cols) = (self.rows.clone(), self.cols.clone());
        self.advance();
        Some(self.eval.minor(self.m, &rows, &cols).map(|value| {
            let verdict = match value.constant_value() {
                Some(c) => match c.signum() {
                    1 => MinorVerdict::Positive,
                    -1 => MinorVerdict::Negative,
                    _ => MinorVerdict::Zero,
                },
                None => MinorVerdict::Unclassified,
            };
            MinorReport { order: rows.len(), row_set: rows, col_set: cols, value, verdict }
        }))
    }
}

impl Minors<'_> {
    /// Index sets and sign of the next constant minor, skipping the exact
    /// value.
    fn next_sign(&mut self) -> Option<Result<(Vec<usize>, Vec<usize>, i8)>> {
        if self.done {
            return None;
        }
        let (rows, cols) = (self.rows.clone(), self.cols.clone());
        self.advance();
        Some(self.eval.minor_sign(self.m, &rows, &cols).map(|s| (rows, cols, s)))
    }

    fn report(&mut self, rows: Vec<usize>, cols: Vec<usize>, verdict: MinorVerdict) -> Result<MinorReport> {
        let value = self.eval.minor(self.m, &rows, &cols)?;
        Ok(MinorReport { order: rows.len(), row_set: rows, col_set: cols, value, verdict })
    }

    fn advance(&mut self) {
        let more_cols = next_combination(&mut self.cols, self.m.cols());
        if more_cols && !(self.canonical_only && self.rows[0] > 0 && self.cols[0] > 0) {
            return;
        }
        if next_combination(&mut self.rows, self.m.rows()) {
            self.cols = (0..self.cols.len()).collect();
        } else if self.rows.len() < self.last_order {
            let k = self.rows.len() + 1;
            self.rows = (0..k).collect();
            self.cols = (0..k).collect();
        } else {
            self.done = true;
        }
    }
}

pub fn enumerate_minors(m: &PolyMatrix, order: usize) -> Result<Minors<'_>> {
    if order == 0 || order > m.rows().min(m.cols()) {
        return Err(Error::Dimension(format!("order {order} for a {}x{} matrix", m.rows(), m.cols())));
    }
    Ok(minor_range(m, order, order, false))
}

fn minor_range(m: &PolyMatrix, first: usize, last: usize, canonical_only: bool) -> Minors<'_> {
    Minors {
        m,
        rows: (0..first).collect(),
        cols: (0..first).collect(),
        last_order: last,
        canonical_only,
        done: first > last,
        eval: Evaluator::new(m),
    }
}

/// All minors from order 1 up to `order_cap`.
pub fn minors_up_to(m: &PolyMatrix, order_cap: usize) -> Minors<'_> {
    minor_range(m, 1, effective_cap(m, order_cap), false)
}

/// One representative per distinct minor in the Toeplitz case, always the
/// earliest in enumeration order; every minor otherwise.
fn distinct_minors_up_to(m: &PolyMatrix, order_cap: usize) -> Minors<'_> {
    minor_range(m, 1, effective_cap(m, order_cap), m.is_toeplitz())
}

fn effective_cap(m: &PolyMatrix, order_cap: usize) -> usize {
    order_cap.min(m.rows().min(m.cols()))
}

fn verdict(status: Status, failing: Option<MinorReport>, checked: usize, cap: usize, zeros: usize) -> MatrixClassVerdict {
    MatrixClassVerdict { status, failing_minor: failing, minors_checked: checked, order_cap: cap, zero_minors: zeros, reason: None }
}

/// Total positivity of a constant matrix. Strict mode reports the first
/// negative minor when there is one and otherwise the first zero minor.
pub fn is_totally_positive(m: &PolyMatrix, order_cap: usize, mode: TpMode) -> Result<MatrixClassVerdict> {
    if !m.is_constant() {
        return Err(Error::InvalidArgument("total positivity needs constant entries".into()));
    }
    let cap = effective_cap(m, order_cap);
    let (mut checked, mut zeros) = (0, 0);
    let mut first_zero = None;
    let mut minors = distinct_minors_up_to(m, cap);
    while let Some(next) = minors.next_sign() {
        let (rows, cols, sign) = next?;
        checked += 1;
        match sign {
            -1 => {
                let rep = minors.report(rows, cols, MinorVerdict::Negative)?;
                return Ok(verdict(Status::NonMember, Some(rep), checked, cap, zeros));
            }
            0 => {
                zeros += 1;
                if first_zero.is_none() {
                    first_zero = Some((rows, cols));
                }
            }
            _ => {}
        }
    }
    Ok(match (mode, first_zero) {
        (TpMode::Strict, Some((rows, cols))) => {
            let rep = minors.report(rows, cols, MinorVerdict::Zero)?;
            verdict(Status::NonMember, Some(rep), checked, cap, zeros)
        }
        _ => verdict(Status::Member, None, checked, cap, zeros),
    })
}

fn classify_minors(
    m: &PolyMatrix,
    order_cap: usize,
    class: impl Fn(&MultiPoly) -> Result<ClassVerdict>,
) -> Result<MatrixClassVerdict> {
    let cap = effective_cap(m, order_cap);
    if m.vars().len() > 1 {
        let mut v = verdict(Status::Undetermined, None, 0, cap, 0);
        v.reason = Some(format!("entries have {} variables, expected one", m.vars().len()));
        return Ok(v);
    }
    let (mut checked, mut zeros) = (0, 0);
    let mut pending: Option<MinorReport> = None;
    for rep in distinct_minors_up_to(m, cap) {
        let mut rep = rep?;
        checked += 1;
        if rep.value.is_zero() {
            zeros += 1;
            continue;
        }
        let value = if rep.value.arity() == 0 { rep.value.with_vars(&Vars::new(&["x"]))? } else { rep.value.clone() };
        match class(&value)?.status {
            Status::NonMember => {
                rep.verdict = MinorVerdict::NonMember;
                return Ok(verdict(Status::NonMember, Some(rep), checked, cap, zeros));
            }
            Status::Undetermined => {
                if pending.is_none() {
                    rep.verdict = MinorVerdict::Undetermined;
                    pending = Some(rep);
                }
            }
            _ => {}
        }
    }
    Ok(match pending {
        Some(rep) => {
            let mut v = verdict(Status::Undetermined, Some(rep), checked, cap, zeros);
            v.reason = Some("a minor could not be classified".into());
            v
        }
        None => verdict(Status::Member, None, checked, cap, zeros),
    })
}

/// Every minor up to `order_cap` is identically zero or stable.
pub fn is_totally_stable(m: &PolyMatrix, order_cap: usize) -> Result<MatrixClassVerdict> {
    classify_minors(m, order_cap, |f| is_stable(f, 0.0))
}

/// Every minor up to `order_cap` is identically zero or real-rooted.
pub fn is_totally_upper(m: &PolyMatrix, order_cap: usize) -> Result<MatrixClassVerdict> {
    classify_minors(m, order_cap, is_real_rooted)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub a: MatrixClassVerdict,
    pub b: MatrixClassVerdict,
    pub product: MatrixClassVerdict,
    /// `None` when `a` or `b` is not itself a member.
    pub closure_held: Option<bool>,
}

pub fn product_closure_experiment(a: &PolyMatrix, b: &PolyMatrix, order_cap: usize, mode: ClosureMode) -> Result<ClosureReport> {
    let ab = a.checked_mul(b)?;
    let check = |m: &PolyMatrix| match mode {
        ClosureMode::Stable => is_totally_stable(m, order_cap),
        ClosureMode::Upper => is_totally_upper(m, order_cap),
    };
    let (va, vb, vp) = (check(a)?, check(b)?, check(&ab)?);
    let closure_held = (va.status.is_member() && vb.status.is_member() && vp.status != Status::Undetermined)
        .then(|| vp.status.is_member());
    Ok(ClosureReport { a: va, b: vb, product: vp, closure_held })
}
