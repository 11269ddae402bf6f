//! Sparse multivariate polynomials.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::coef::{Coef, Domain};
use crate::error::{Error, Result};

/// Ordered variable names shared by every polynomial of a computation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        Vars(names.iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>().into())
    }

    pub fn empty() -> Self {
        Vars(Vec::new().into())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.0
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn without(&self, idx: usize) -> Vars {
        let names: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != idx)
            .map(|(_, v)| v.clone())
            .collect();
        Vars(names.into())
    }

    pub fn same(&self, other: &Vars) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

/// Exponent vector ordered graded-lexicographically: total degree first,
/// ties broken by the stored variable order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn one(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly {
    vars: Vars,
    domain: Domain,
    terms: BTreeMap<Monomial, Coef>,
}

impl MultiPoly {
    pub fn zero(vars: &Vars, domain: Domain) -> Self {
        MultiPoly { vars: vars.clone(), domain, terms: BTreeMap::new() }
    }

    pub fn one(vars: &Vars, domain: Domain) -> Self {
        Self::constant(vars, Coef::one(domain))
    }

    pub fn constant(vars: &Vars, c: Coef) -> Self {
        let domain = c.domain();
        let mut p = Self::zero(vars, domain);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn var(vars: &Vars, name: &str, domain: Domain) -> Result<Self> {
        let idx = vars.index_of(name)?;
        let mut exps = vec![0; vars.len()];
        exps[idx] = 1;
        let mut p = Self::zero(vars, domain);
        p.terms.insert(Monomial(exps), Coef::one(domain));
        Ok(p)
    }

    /// Builds a polynomial from raw terms; duplicate exponents are summed and
    /// zero coefficients dropped.
    pub fn from_terms<I>(vars: &Vars, domain: Domain, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, Coef)>,
    {
        let mut p = Self::zero(vars, domain);
        for (exps, c) in terms {
            if exps.len() != vars.len() {
                return Err(Error::ArityMismatch { expected: vars.len(), got: exps.len() });
            }
            if c.domain() != domain {
                return Err(Error::DomainMismatch);
            }
            p.add_term(Monomial(exps), c);
        }
        Ok(p)
    }

    /// `Σ coeffs[i] · var^i` over `vars`.
    pub fn from_coeffs(vars: &Vars, var_idx: usize, coeffs: &[Coef], domain: Domain) -> Self {
        let mut p = Self::zero(vars, domain);
        for (i, c) in coeffs.iter().enumerate() {
            let mut exps = vec![0; vars.len()];
            exps[var_idx] = i as u32;
            p.add_term(Monomial(exps), c.clone());
        }
        p
    }

    /// Univariate rational polynomial `Σ coeffs[i] x^i` in a single variable.
    pub fn univariate(var: &str, coeffs: &[i64]) -> Self {
        let vars = Vars::new(&[var]);
        let cs: Vec<Coef> = coeffs.iter().map(|&c| Coef::from_i64(Domain::Rational, c)).collect();
        Self::from_coeffs(&vars, 0, &cs, Domain::Rational)
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Coef)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Coef {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(|| Coef::zero(self.domain))
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    /// Value of a constant polynomial.
    pub fn constant_value(&self) -> Option<Coef> {
        if self.is_constant() {
            Some(self.coeff(&vec![0; self.arity()]))
        } else {
            None
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, var_idx: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var_idx]).max()
    }

    /// Greatest term under graded-lexicographic order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Coef)> {
        self.terms.iter().next_back()
    }

    /// Sign of the coefficient attached to the highest power of `var_idx`
    /// (ties broken by the graded-lexicographic leading term). Zero gives 0.
    pub fn leading_sign_in(&self, var_idx: usize) -> i8 {
        let Some(top) = self.degree_in(var_idx) else { return 0 };
        self.terms
            .iter()
            .rev()
            .find(|(m, _)| m.0[var_idx] == top)
            .map(|(_, c)| c.signum())
            .unwrap_or(0)
    }

    pub fn all_coefficients_positive(&self) -> bool {
        self.terms.values().all(|c| c.signum() > 0)
    }

    pub fn all_coefficients_same_sign(&self) -> bool {
        let mut signs = self.terms.values().map(Coef::signum);
        match signs.next() {
            None => true,
            Some(s) => signs.all(|t| t == s),
        }
    }

    fn add_term(&mut self, m: Monomial, c: Coef) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                let sum = &*e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn check_compatible(&self, other: &MultiPoly) -> Result<()> {
        if !self.vars.same(&other.vars) {
            return Err(Error::VarMismatch {
                left: self.vars.names().to_vec(),
                right: other.vars.names().to_vec(),
            });
        }
        if self.domain != other.domain {
            return Err(Error::DomainMismatch);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_compatible(other)?;
        let mut out = MultiPoly::zero(&self.vars, self.domain);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Coef) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.vars, self.domain);
        if c.is_zero() {
            return out;
        }
        for (m, v) in &self.terms {
            out.terms.insert(m.clone(), v * c);
        }
        out
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(&self.vars, self.domain);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Coefficient-wise product of two univariate polynomials.
    pub fn hadamard(&self, other: &MultiPoly) -> Result<MultiPoly> {
        if self.arity() != 1 || other.arity() != 1 {
            return Err(Error::ArityMismatch { expected: 1, got: self.arity().max(other.arity()) });
        }
        self.check_compatible(other)?;
        let mut out = MultiPoly::zero(&self.vars, self.domain);
        for (m, c) in &self.terms {
            if let Some(d) = other.terms.get(m) {
                out.add_term(m.clone(), c * d);
            }
        }
        Ok(out)
    }

    /// Iterated partial derivative of the given order.
    pub fn derivative(&self, var: &str, order: u32) -> Result<MultiPoly> {
        let idx = self.vars.index_of(var)?;
        Ok(self.derivative_at(idx, order))
    }

    pub fn derivative_at(&self, idx: usize, order: u32) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.vars, self.domain);
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e < order {
                continue;
            }
            let falling: i64 = (0..order).map(|k| (e - k) as i64).product();
            let mut exps = m.0.clone();
            exps[idx] = e - order;
            out.add_term(Monomial(exps), c * &Coef::from_i64(self.domain, falling));
        }
        out
    }

    /// Splits `self = Σ parts[i] · var^i`; parts live over the remaining
    /// variables.
    pub fn slice(&self, var: &str) -> Result<CoefficientSlice> {
        let idx = self.vars.index_of(var)?;
        Ok(self.slice_at(idx))
    }

    pub fn slice_at(&self, idx: usize) -> CoefficientSlice {
        let rest = self.vars.without(idx);
        let top = self.degree_in(idx).unwrap_or(0) as usize;
        let mut parts = vec![MultiPoly::zero(&rest, self.domain); top + 1];
        for (m, c) in &self.terms {
            let e = m.0[idx] as usize;
            let mut exps = m.0.clone();
            exps.remove(idx);
            parts[e].terms.insert(Monomial(exps), c.clone());
        }
        CoefficientSlice { base: self.clone(), var_index: idx, parts }
    }

    /// Re-expresses the polynomial over `target`, which must contain every
    /// variable that actually occurs.
    pub fn with_vars(&self, target: &Vars) -> Result<MultiPoly> {
        if self.vars.same(target) {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.arity());
        for (i, name) in self.vars.names().iter().enumerate() {
            match target.index_of(name) {
                Ok(j) => map.push(Some(j)),
                Err(e) => {
                    if self.degree_in(i).unwrap_or(0) > 0 {
                        return Err(e);
                    }
                    map.push(None);
                }
            }
        }
        let mut out = MultiPoly::zero(target, self.domain);
        for (m, c) in &self.terms {
            let mut exps = vec![0; target.len()];
            for (i, slot) in map.iter().enumerate() {
                if let Some(j) = slot {
                    exps[*j] = m.0[i];
                }
            }
            out.add_term(Monomial(exps), c.clone());
        }
        Ok(out)
    }

    /// Substitutes a constant for `var`, removing it from the variable list.
    pub fn substitute(&self, var: &str, value: &Coef) -> Result<MultiPoly> {
        let idx = self.vars.index_of(var)?;
        if value.domain() != self.domain {
            return Err(Error::DomainMismatch);
        }
        let rest = self.vars.without(idx);
        let mut out = MultiPoly::zero(&rest, self.domain);
        for (m, c) in &self.terms {
            let mut exps = m.0.clone();
            let e = exps.remove(idx);
            out.add_term(Monomial(exps), c * &value.pow(e));
        }
        Ok(out)
    }

    /// Replaces `var` by the polynomial `value` (which lives over the same
    /// variables).
    pub fn compose(&self, var: &str, value: &MultiPoly) -> Result<MultiPoly> {
        self.check_compatible(value)?;
        let idx = self.vars.index_of(var)?;
        let slice = self.slice_at(idx);
        let mut acc = MultiPoly::zero(&self.vars, self.domain);
        for part in slice.parts.iter().rev() {
            acc = &(&acc * value) + &part.with_vars(&self.vars)?;
        }
        Ok(acc)
    }

    pub fn convert(&self, domain: Domain) -> Result<MultiPoly> {
        let mut out = MultiPoly::zero(&self.vars, domain);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.convert(domain)?);
        }
        Ok(out)
    }

    /// Coefficient sequence `a_0..a_n` of an arity-1 (or constant) polynomial.
    pub fn univariate_coeffs(&self) -> Result<Vec<Coef>> {
        match self.arity() {
            0 => Ok(vec![self.constant_value().unwrap_or_else(|| Coef::zero(self.domain))]),
            1 => {
                let n = self.degree_in(0).unwrap_or(0) as usize;
                let mut out = vec![Coef::zero(self.domain); n + 1];
                for (m, c) in &self.terms {
                    out[m.0[0] as usize] = c.clone();
                }
                Ok(out)
            }
            a => Err(Error::ArityMismatch { expected: 1, got: a }),
        }
    }

    /// Exact rational coefficients of an arity-1 polynomial.
    pub fn rational_coeffs(&self) -> Result<Vec<BigRational>> {
        if self.domain != Domain::Rational {
            return Err(Error::DomainMismatch);
        }
        Ok(self
            .univariate_coeffs()?
            .into_iter()
            .map(|c| c.as_rational().cloned().unwrap_or_else(BigRational::zero))
            .collect())
    }

    /// Complex evaluation: Horner in the single variable for arity 1,
    /// term-wise with cached powers otherwise.
    pub fn evaluate(&self, point: &[Complex64]) -> Result<Complex64> {
        if point.len() != self.arity() {
            return Err(Error::ArityMismatch { expected: self.arity(), got: point.len() });
        }
        if self.arity() == 1 {
            let cs = self.univariate_coeffs()?;
            let z = point[0];
            return Ok(cs.iter().rev().fold(Complex64::zero(), |acc, c| acc * z + c.to_f64()));
        }
        let mut acc = Complex64::zero();
        for (m, c) in &self.terms {
            let mut t = Complex64::new(c.to_f64(), 0.0);
            for (z, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= z.powu(e);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// `Σ |c| · Π |z_j|^{e_j}`, the natural scale for residual tests.
    pub fn evaluation_scale(&self, point: &[Complex64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                m.0.iter()
                    .zip(point)
                    .fold(c.to_f64().abs(), |acc, (&e, z)| acc * z.norm().powi(e as i32))
            })
            .sum()
    }

    /// Exact evaluation at a rational point.
    pub fn evaluate_rational(&self, point: &[BigRational]) -> Result<BigRational> {
        if self.domain != Domain::Rational {
            return Err(Error::DomainMismatch);
        }
        if point.len() != self.arity() {
            return Err(Error::ArityMismatch { expected: self.arity(), got: point.len() });
        }
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.as_rational().cloned().unwrap_or_else(BigRational::zero);
            for (z, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(z.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Exact division by a polynomial known to divide `self`.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Result<MultiPoly> {
        self.check_compatible(divisor)?;
        let Some((lm, lc)) = divisor.leading_term() else {
            return Err(Error::ZeroPolynomial);
        };
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(&self.vars, self.domain);
        while let Some((rm, rc)) = rem.leading_term() {
            if !lm.divides(rm) {
                return Err(Error::NotDivisible);
            }
            let m = rm.div(&lm);
            let c = rc / &lc;
            for (dm, dc) in &divisor.terms {
                rem.add_term(dm.mul(&m), -&(dc * &c));
            }
            quot.add_term(m, c);
        }
        Ok(quot)
    }

    /// Sign making the leading coefficient in `var_idx` positive, and the
    /// normalized polynomial.
    pub fn sign_normalized(&self, var_idx: usize) -> (i8, MultiPoly) {
        if self.leading_sign_in(var_idx) < 0 {
            (-1, -self)
        } else {
            (1, self.clone())
        }
    }

    /// Positive rational multiple with integer coefficients whose gcd is 1.
    pub fn primitive_part(&self) -> MultiPoly {
        if self.domain != Domain::Rational || self.is_zero() {
            return self.clone();
        }
        let mut lcm = BigInt::one();
        for c in self.terms.values() {
            if let Coef::Rational(r) = c {
                lcm = num_integer::Integer::lcm(&lcm, r.denom());
            }
        }
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            if let Coef::Rational(r) = c {
                let v = r.numer() * (&lcm / r.denom());
                g = num_integer::Integer::gcd(&g, &v);
            }
        }
        let factor = BigRational::new(lcm, g);
        self.scale(&Coef::Rational(factor))
    }

    /// Parses an expression such as `x^2 - 3/2*x*y + (y+1)^3` over `vars`.
    pub fn parse(expr: &str, vars: &Vars) -> Result<MultiPoly> {
        let mut parser = Parser { src: expr.as_bytes(), pos: 0, vars };
        let p = parser.expr()?;
        parser.skip_ws();
        if parser.pos != parser.src.len() {
            return Err(Error::Parse(format!("unexpected input at byte {} of `{expr}`", parser.pos)));
        }
        Ok(p)
    }
}

/// `f = Σ parts[i] · v^i` for a chosen variable `v`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientSlice {
    pub base: MultiPoly,
    pub var_index: usize,
    pub parts: Vec<MultiPoly>,
}

impl CoefficientSlice {
    pub fn sliced_var(&self) -> &str {
        &self.base.vars.names()[self.var_index]
    }

    /// `parts[i]`, or zero outside the stored range.
    pub fn part(&self, i: i64) -> MultiPoly {
        if i < 0 || i as usize >= self.parts.len() {
            MultiPoly::zero(&self.remaining_vars(), self.base.domain)
        } else {
            self.parts[i as usize].clone()
        }
    }

    pub fn remaining_vars(&self) -> Vars {
        self.base.vars.without(self.var_index)
    }

    pub fn recompose(&self) -> MultiPoly {
        recompose(&self.parts, &self.base.vars, self.var_index, self.base.domain)
    }
}

/// `Σ parts[i] · vars[var_index]^i`, where each part lives over `vars`
/// without `var_index`.
pub fn recompose(parts: &[MultiPoly], vars: &Vars, var_index: usize, domain: Domain) -> MultiPoly {
    let mut out = MultiPoly::zero(vars, domain);
    for (i, part) in parts.iter().enumerate() {
        for (m, c) in &part.terms {
            let mut exps = m.0.clone();
            exps.insert(var_index, i as u32);
            out.add_term(Monomial(exps), c.clone());
        }
    }
    out
}

macro_rules! poly_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                self.$checked(rhs).expect("incompatible polynomial operands")
            }
        }
        impl $trait<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

poly_binop!(Add, add, checked_add);
poly_binop!(Sub, sub, checked_sub);
poly_binop!(Mul, mul, checked_mul);

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            domain: self.domain,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.signum() < 0;
            if n == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            let mag = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || m.degree() == 0 {
                factors.push(mag.to_string());
            }
            for (name, &e) in self.vars.names().iter().zip(&m.0) {
                match e {
                    0 => {}
                    1 => factors.push(name.clone()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a Vars,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at byte {}", self.pos))
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        while let Some(op) = self.peek() {
            match op {
                b'+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                b'-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.unary()?;
        while let Some(op) = self.peek() {
            match op {
                b'*' => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                b'/' => {
                    self.pos += 1;
                    let d = self.unary()?;
                    let c = d
                        .constant_value()
                        .filter(|c| !c.is_zero())
                        .ok_or_else(|| self.err("division by a non-constant or zero"))?;
                    acc = acc.scale(&(&Coef::one(Domain::Rational) / &c));
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MultiPoly> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<MultiPoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.integer()?;
            let e = u32::try_from(e).map_err(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("0");
        s.parse::<BigInt>().map_err(|_| self.err("bad number"))
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let p = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(p)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(MultiPoly::constant(self.vars, Coef::Rational(BigRational::from_integer(n))))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
                MultiPoly::var(self.vars, name, Domain::Rational)
            }
            _ => Err(self.err("unexpected token")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(names: &[&str]) -> Vars {
        Vars::new(names)
    }

    fn p(expr: &str, v: &Vars) -> MultiPoly {
        MultiPoly::parse(expr, v).unwrap()
    }

    #[test]
    fn add_examples() {
        let v = vars(&["x"]);
        assert_eq!(&p("x+1", &v) + &p("x-1", &v), p("2*x", &v));
        let zero = MultiPoly::zero(&v, Domain::Rational);
        assert_eq!(&p("x^3+2", &v) + &zero, p("x^3+2", &v));
        let v2 = vars(&["x", "y"]);
        let s = &p("x^2", &v2) + &p("2*x*y", &v2);
        assert_eq!(s.num_terms(), 2);
        assert_eq!(s, p("x^2+2*x*y", &v2));
    }

    #[test]
    fn mismatched_operands_are_rejected() {
        let a = p("x+1", &vars(&["x"]));
        let b = p("y+1", &vars(&["y"]));
        assert!(matches!(a.checked_add(&b), Err(Error::VarMismatch { .. })));
        let c = a.convert(Domain::Float).unwrap();
        assert!(matches!(a.checked_mul(&c), Err(Error::DomainMismatch)));
    }

    #[test]
    fn mul_examples() {
        let v = vars(&["x", "a", "b"]);
        assert_eq!(&p("x+a", &v) * &p("x+b", &v), p("x^2 + (a+b)*x + a*b", &v));
        let v2 = vars(&["x", "y"]);
        let prod = &p("x+y+1", &v2) * &p("x+2*y+1", &v2);
        assert_eq!(prod, p("x^2 + 3*x*y + 2*y^2 + 2*x + 3*y + 1", &v2));
        let one = MultiPoly::one(&v2, Domain::Rational);
        assert_eq!(&prod * &one, prod);
    }

    #[test]
    fn mul_matches_pointwise_evaluation() {
        let v = vars(&["x", "y"]);
        let a = p("x+y+1", &v);
        let b = p("x+2*y+1", &v);
        let prod = &a * &b;
        let pts = [(3, 7), (-2, 5), (11, -4), (0, 9), (-6, -1)];
        for (s, t) in pts {
            let pt = [BigRational::from_integer(s.into()), BigRational::from_integer(t.into())];
            let lhs = prod.evaluate_rational(&pt).unwrap();
            let rhs = a.evaluate_rational(&pt).unwrap() * b.evaluate_rational(&pt).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn hadamard_examples() {
        let f = MultiPoly::univariate("x", &[1, 3, 3, 1]);
        assert_eq!(f.hadamard(&f).unwrap(), MultiPoly::univariate("x", &[1, 9, 9, 1]));
        let ones = MultiPoly::univariate("x", &[1, 1, 1, 1]);
        assert_eq!(f.hadamard(&ones).unwrap(), f);
        let zero = MultiPoly::zero(f.vars(), Domain::Rational);
        assert!(f.hadamard(&zero).unwrap().is_zero());
        let biv = p("x*y", &vars(&["x", "y"]));
        assert!(biv.hadamard(&biv).is_err());
    }

    #[test]
    fn derivative_examples() {
        let v = vars(&["x"]);
        let f = p("(x+1)^2", &v);
        assert_eq!(f.derivative("x", 1).unwrap(), p("2*x+2", &v));
        assert_eq!(f.derivative("x", 2).unwrap(), p("2", &v));
        assert_eq!(f.derivative("x", 0).unwrap(), f);
        assert!(matches!(f.derivative("y", 1), Err(Error::UnknownVariable(_))));
    }

    #[test]
    fn slice_examples() {
        let v = vars(&["x", "y"]);
        let s = p("(x+y)^2", &v).slice("y").unwrap();
        let vx = vars(&["x"]);
        assert_eq!(s.parts, vec![p("x^2", &vx), p("2*x", &vx), p("1", &vx)]);
        let s = p("x^2", &v).slice("y").unwrap();
        assert_eq!(s.parts, vec![p("x^2", &vx)]);

        let v3 = vars(&["x", "y", "z"]);
        let f = p("(x+y+z)^2", &v3);
        let s = f.slice("z").unwrap();
        let vxy = vars(&["x", "y"]);
        assert_eq!(s.parts, vec![p("(x+y)^2", &vxy), p("2*(x+y)", &vxy), p("1", &vxy)]);
        assert_eq!(s.recompose(), f);
        assert_eq!(s.sliced_var(), "z");
    }

    #[test]
    fn evaluate_examples() {
        let f = p("x^2+1", &vars(&["x"]));
        let v = f.evaluate(&[Complex64::new(0.0, 1.0)]).unwrap();
        assert!(v.norm() < 1e-15);
        let g = p("x+y", &vars(&["x", "y"]));
        let v = g.evaluate(&[Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)]).unwrap();
        assert_eq!(v, Complex64::new(3.0, 0.0));
        assert!(g.evaluate(&[Complex64::new(1.0, 0.0)]).is_err());
    }

    #[test]
    fn exact_division_and_failure() {
        let v = vars(&["x", "y"]);
        let a = p("x^2 - y^2", &v);
        assert_eq!(a.div_exact(&p("x-y", &v)).unwrap(), p("x+y", &v));
        assert!(matches!(a.div_exact(&p("x+2", &v)), Err(Error::NotDivisible)));
    }

    #[test]
    fn compose_and_substitute() {
        let v = vars(&["x", "y"]);
        let f = p("x^2 + x", &v);
        assert_eq!(f.compose("x", &p("x+y", &v)).unwrap(), p("(x+y)^2 + x + y", &v));
        let g = p("x*y + y^2", &v);
        let h = g.substitute("y", &Coef::ratio(1, 2)).unwrap();
        assert_eq!(h, p("1/2*x + 1/4", &vars(&["x"])));
    }

    #[test]
    fn display_is_grlex_descending() {
        let v = vars(&["x", "y"]);
        assert_eq!(p("1 + 24*x + 16*x^2 - 2*x*y", &v).to_string(), "16*x^2 - 2*x*y + 24*x + 1");
        assert_eq!(MultiPoly::zero(&v, Domain::Rational).to_string(), "0");
    }

    #[test]
    fn primitive_part_is_positive_integer_multiple() {
        let v = vars(&["x"]);
        let f = p("3/4*x^2 - 3/2", &v);
        assert_eq!(f.primitive_part(), p("x^2 - 2", &v));
        let g = p("-2/3*x + 4", &v);
        assert_eq!(g.primitive_part(), p("-x + 6", &v));
    }
}
