//! Coefficient domain: exact rationals or binary floats.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Rational,
    Float,
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Rational => f.write_str("rational"),
            Domain::Float => f.write_str("float"),
        }
    }
}

/// A single coefficient. Arithmetic between the two variants is a logic
/// error; polynomial-level operations check domains before reaching here.
#[derive(Clone, Debug, PartialEq)]
pub enum Coef {
    Rational(BigRational),
    Float(f64),
}

impl Coef {
    pub fn zero(domain: Domain) -> Self {
        match domain {
            Domain::Rational => Coef::Rational(BigRational::zero()),
            Domain::Float => Coef::Float(0.0),
        }
    }

    pub fn one(domain: Domain) -> Self {
        Self::from_i64(domain, 1)
    }

    pub fn from_i64(domain: Domain, v: i64) -> Self {
        match domain {
            Domain::Rational => Coef::Rational(BigRational::from_integer(BigInt::from(v))),
            Domain::Float => Coef::Float(v as f64),
        }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Coef::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn domain(&self) -> Domain {
        match self {
            Coef::Rational(_) => Domain::Rational,
            Coef::Float(_) => Domain::Float,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coef::Rational(r) => r.is_zero(),
            Coef::Float(v) => *v == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coef::Rational(r) => r.is_one(),
            Coef::Float(v) => *v == 1.0,
        }
    }

    pub fn signum(&self) -> i8 {
        match self {
            Coef::Rational(r) => {
                if r.is_positive() {
                    1
                } else if r.is_negative() {
                    -1
                } else {
                    0
                }
            }
            Coef::Float(v) => {
                if *v > 0.0 {
                    1
                } else if *v < 0.0 {
                    -1
                } else {
                    0
                }
            }
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Coef::Rational(r) => rational_to_f64(r),
            Coef::Float(v) => *v,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Coef::Rational(r) => Some(r),
            Coef::Float(_) => None,
        }
    }

    /// Converts into `domain`; rationals become the nearest float, floats
    /// become their exact dyadic value.
    pub fn convert(&self, domain: Domain) -> Result<Coef> {
        match (self, domain) {
            (Coef::Rational(_), Domain::Rational) | (Coef::Float(_), Domain::Float) => Ok(self.clone()),
            (Coef::Rational(r), Domain::Float) => Ok(Coef::Float(rational_to_f64(r))),
            (Coef::Float(v), Domain::Rational) => BigRational::from_float(*v)
                .map(Coef::Rational)
                .ok_or_else(|| Error::InvalidArgument(format!("non-finite coefficient {v}"))),
        }
    }

    pub fn abs(&self) -> Coef {
        match self {
            Coef::Rational(r) => Coef::Rational(r.abs()),
            Coef::Float(v) => Coef::Float(v.abs()),
        }
    }

    pub fn pow(&self, e: u32) -> Coef {
        let mut acc = Coef::one(self.domain());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Parses a coefficient string. Rationals accept `n`, `n/d` and
    /// terminating decimals (converted exactly); floats accept any decimal.
    pub fn parse(domain: Domain, s: &str) -> Result<Coef> {
        let s = s.trim();
        match domain {
            Domain::Rational => parse_rational(s).map(Coef::Rational),
            Domain::Float => {
                let v = f64::from_str(s).map_err(|_| Error::Parse(format!("bad float coefficient `{s}`")))?;
                if !v.is_finite() {
                    return Err(Error::Parse(format!("non-finite coefficient `{s}`")));
                }
                Ok(Coef::Float(v))
            }
        }
    }

    /// Interchange representation: `num/den` for rationals, shortest
    /// round-trip decimal for floats.
    pub fn to_interchange(&self) -> String {
        match self {
            Coef::Rational(r) => format!("{}/{}", r.numer(), r.denom()),
            Coef::Float(v) => format!("{v}"),
        }
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // fall back to scaling for very large numerator/denominator pairs
    let n = r.numer().bits() as i64;
    let d = r.denom().bits() as i64;
    let shift = (n - d).clamp(-1000, 1000);
    let scaled = if shift >= 0 {
        r / BigRational::from_integer(BigInt::one() << (shift as usize))
    } else {
        r * BigRational::from_integer(BigInt::one() << ((-shift) as usize))
    };
    scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational coefficient `{s}`"));
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in `{s}`")));
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.trim_start().starts_with('-');
        let int_part = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            BigInt::from_str(int).map_err(|_| bad())?
        };
        let frac_part = BigInt::from_str(frac).map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mag = int_part.abs() * &scale + frac_part;
        let num = if negative { -mag } else { mag };
        return Ok(BigRational::new(num, scale));
    }
    BigInt::from_str(s).map(BigRational::from_integer).map_err(|_| bad())
}

impl fmt::Display for Coef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coef::Rational(r) => write!(f, "{r}"),
            Coef::Float(v) => write!(f, "{v}"),
        }
    }
}

macro_rules! coef_binop {
    ($trait:ident, $method:ident, $op:tt, integer_fast_path) => {
        impl $trait<&Coef> for &Coef {
            type Output = Coef;
            fn $method(self, rhs: &Coef) -> Coef {
                match (self, rhs) {
                    // num-rational reduces by gcd even over integers
                    (Coef::Rational(a), Coef::Rational(b)) if a.is_integer() && b.is_integer() => {
                        Coef::Rational(BigRational::from_integer(a.numer() $op b.numer()))
                    }
                    (Coef::Rational(a), Coef::Rational(b)) => Coef::Rational(a $op b),
                    (Coef::Float(a), Coef::Float(b)) => Coef::Float(a $op b),
                    _ => panic!("coefficient domain mismatch"),
                }
            }
        }
    };
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Coef> for &Coef {
            type Output = Coef;
            fn $method(self, rhs: &Coef) -> Coef {
                match (self, rhs) {
                    (Coef::Rational(a), Coef::Rational(b)) => Coef::Rational(a $op b),
                    (Coef::Float(a), Coef::Float(b)) => Coef::Float(a $op b),
                    _ => panic!("coefficient domain mismatch"),
                }
            }
        }
    };
}

coef_binop!(Add, add, +, integer_fast_path);
coef_binop!(Sub, sub, -, integer_fast_path);
coef_binop!(Mul, mul, *, integer_fast_path);
coef_binop!(Div, div, /);

impl Neg for &Coef {
    type Output = Coef;
    fn neg(self) -> Coef {
        match self {
            Coef::Rational(r) => Coef::Rational(-r),
            Coef::Float(v) => Coef::Float(-v),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rational_forms() {
        assert_eq!(Coef::parse(Domain::Rational, "3/1").unwrap(), Coef::ratio(3, 1));
        assert_eq!(Coef::parse(Domain::Rational, "-6/4").unwrap(), Coef::ratio(-3, 2));
        assert_eq!(Coef::parse(Domain::Rational, "0.1").unwrap(), Coef::ratio(1, 10));
        assert_eq!(Coef::parse(Domain::Rational, "-2.25").unwrap(), Coef::ratio(-9, 4));
        assert_eq!(Coef::parse(Domain::Rational, "-0.5").unwrap(), Coef::ratio(-1, 2));
        assert!(Coef::parse(Domain::Rational, "1/0").is_err());
        assert!(Coef::parse(Domain::Rational, "abc").is_err());
    }

    #[test]
    fn interchange_strings() {
        assert_eq!(Coef::from_i64(Domain::Rational, 3).to_interchange(), "3/1");
        assert_eq!(Coef::Float(0.1).to_interchange(), "0.1");
        assert!(Coef::parse(Domain::Float, "inf").is_err());
    }

    #[test]
    fn huge_rational_to_float() {
        let big = BigRational::from_integer(BigInt::one() << 2000usize);
        let r = &big / (&big * BigRational::from_integer(BigInt::from(4)));
        assert_eq!(rational_to_f64(&r), 0.25);
    }
}
