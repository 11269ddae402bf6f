use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::intpoly::{self, IntPoly};
use super::roots::{self, float_coeffs};
use super::verdict::{ClassVerdict, Method, Status, Witness};
use crate::error::{Error, Result};
use crate::polycore::{Coef, Domain, MultiPoly};

pub(crate) fn check_univariate(f: &MultiPoly) -> Result<()> {
    if f.arity() > 1 {
        return Err(Error::ArityMismatch { expected: 1, got: f.arity() });
    }
    Ok(())
}

pub(crate) fn int_poly(f: &MultiPoly) -> Result<IntPoly> {
    Ok(IntPoly::from_rationals(&f.rational_coeffs()?))
}

/// Largest-real-part root and the polynomial's value there.
fn rightmost_witness(f: &MultiPoly) -> Option<Witness> {
    let coeffs = float_coeffs(f).ok()?;
    let z = roots::raw_roots(&coeffs).ok()?.pop()?;
    let value = f.evaluate(&[z]).ok()?;
    Some(Witness { point: vec![z], value })
}

/// The Routh array, top row `a_n, a_{n-2}, ...`, second row
/// `a_{n-1}, a_{n-3}, ...`. Row `k` has `ceil((n+1-k)/2)` entries.
#[derive(Clone, Debug, PartialEq)]
pub struct RouthTable {
    pub rows: Vec<Vec<Coef>>,
    /// A zero appeared in the first column; construction stopped there.
    pub degenerate: bool,
}

impl RouthTable {
    pub fn new(f: &MultiPoly) -> Result<Self> {
        check_univariate(f)?;
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let a = f.univariate_coeffs()?;
        let d = f.domain();
        let n = a.len() - 1;
        let len = |k: usize| (n + 2 - k) / 2;
        let pick = |start: usize, l: usize| -> Vec<Coef> {
            (0..l)
                .map(|j| start.checked_sub(2 * j).map(|i| a[i].clone()).unwrap_or_else(|| Coef::zero(d)))
                .collect()
        };
        let mut rows = vec![pick(n, len(0))];
        if n >= 1 {
            rows.push(pick(n - 1, len(1)));
        }
        let mut degenerate = rows.iter().any(|r| r[0].is_zero());
        while !degenerate && rows.len() < n + 1 {
            let k = rows.len();
            let (p, c) = (&rows[k - 2], &rows[k - 1]);
            let zero = Coef::zero(d);
            let next: Vec<Coef> = (0..len(k))
                .map(|j| {
                    let pa = p.get(j + 1).unwrap_or(&zero);
                    let cb = c.get(j + 1).unwrap_or(&zero);
                    &(&(&c[0] * pa) - &(&p[0] * cb)) / &c[0]
                })
                .collect();
            degenerate = next[0].is_zero();
            rows.push(next);
        }
        Ok(RouthTable { rows, degenerate })
    }

    pub fn first_column(&self) -> Vec<&Coef> {
        self.rows.iter().map(|r| &r[0]).collect()
    }
}

/// Strict Hurwitz test from the Routh first column.
pub fn routh_stable(f: &MultiPoly) -> Result<ClassVerdict> {
    check_univariate(f)?;
    if f.domain() != Domain::Rational {
        return Err(Error::DomainMismatch);
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (sign, g) = f.sign_normalized(0);
    let table = RouthTable::new(&g)?;
    let v = if table.degenerate {
        ClassVerdict::undetermined(Method::Routh, "degenerate Routh table; boundary roots possible")
    } else if table.first_column().iter().all(|c| c.signum() > 0) {
        ClassVerdict::member(Method::Routh)
    } else {
        ClassVerdict::non_member(Method::Routh, rightmost_witness(&g))
    };
    Ok(v.with_sign(sign))
}

/// Closed-left-half-plane stability. Exact inputs are decided with integer
/// Routh arithmetic plus a gcd split for boundary roots; float inputs use
/// certified roots with real parts compared against `tol`.
pub fn is_stable(f: &MultiPoly, tol: f64) -> Result<ClassVerdict> {
    check_univariate(f)?;
    if f.is_zero() {
        return Ok(ClassVerdict::undetermined(Method::Routh, "zero polynomial"));
    }
    let (sign, g) = f.sign_normalized(0);
    if g.is_constant() {
        return Ok(ClassVerdict::member(Method::Routh).with_sign(sign));
    }
    let v = match g.domain() {
        Domain::Rational => {
            if intpoly::closed_left_half_plane(&int_poly(&g)?) {
                ClassVerdict::member(Method::Routh)
            } else {
                ClassVerdict::non_member(Method::Routh, rightmost_witness(&g))
            }
        }
        Domain::Float => match roots::roots(&g) {
            Err(e) => ClassVerdict::undetermined(Method::CompanionRoots, e.to_string()),
            Ok(rs) => {
                let z = rs.rightmost().expect("nonconstant polynomial has roots");
                if z.re <= tol {
                    ClassVerdict::member(Method::CompanionRoots)
                } else {
                    let value = g.evaluate(&[z])?;
                    ClassVerdict::non_member(Method::CompanionRoots, Some(Witness { point: vec![z], value }))
                }
            }
        },
    };
    Ok(v.with_sign(sign))
}

/// Sample plan for the parameters of a polynomial on the positive orthant:
/// the full product of `values` over every parameter, then `extra_random`
/// log-uniform points in `[1e-2, 1e2]`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthantGrid {
    pub values: Vec<BigRational>,
    pub extra_random: usize,
    pub seed: u64,
    pub tol: f64,
}

impl Default for OrthantGrid {
    fn default() -> Self {
        let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
        OrthantGrid { values: vec![r(1, 10), r(1, 1), r(10, 1)], extra_random: 4, seed: 0, tol: 0.0 }
    }
}

impl OrthantGrid {
    pub fn points(&self, params: usize) -> Vec<Vec<BigRational>> {
        let mut pts: Vec<Vec<BigRational>> = if self.values.is_empty() { Vec::new() } else { vec![Vec::new()] };
        for _ in 0..params {
            pts = pts
                .into_iter()
                .flat_map(|p| {
                    self.values.iter().map(move |v| {
                        let mut q = p.clone();
                        q.push(v.clone());
                        q
                    })
                })
                .collect();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        for _ in 0..self.extra_random {
            pts.push((0..params).map(|_| log_uniform_rational(&mut rng)).collect());
        }
        pts
    }
}

/// A value `k/1024` close to `10^u` for `u` uniform in `[-2, 2]`.
fn log_uniform_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let u: f64 = rng.random_range(-2.0..2.0);
    let k = (10f64.powf(u) * 1024.0).round().max(1.0) as i64;
    BigRational::new(BigInt::from(k), BigInt::from(1024))
}

/// Stability in `main` for every sampled positive value of the other
/// variables. Success is only `member-sampled`.
pub fn stable_on_positive_orthant(f: &MultiPoly, main: &str, grid: &OrthantGrid) -> Result<ClassVerdict> {
    let main_idx = f.vars().index_of(main)?;
    if f.arity() < 2 {
        return Err(Error::InvalidArgument("need at least one parameter variable".into()));
    }
    let params: Vec<String> = f.vars().names().iter().filter(|n| n.as_str() != main).cloned().collect();
    let pts = grid.points(params.len());
    if pts.is_empty() {
        return Err(Error::InvalidArgument("empty sample grid".into()));
    }
    let mut skipped = 0usize;
    for pt in &pts {
        let mut g = f.clone();
        for (name, v) in params.iter().zip(pt) {
            let c = Coef::Rational(v.clone()).convert(f.domain())?;
            g = g.substitute(name, &c)?;
        }
        let v = is_stable(&g, grid.tol)?;
        match v.status {
            Status::NonMember => {
                let root = v.witness.as_ref().map(|w| w.point[0]).unwrap_or_default();
                let mut point = Vec::with_capacity(f.arity());
                let mut it = pt.iter();
                for i in 0..f.arity() {
                    if i == main_idx {
                        point.push(root);
                    } else {
                        let p = it.next().expect("one value per parameter");
                        point.push(Complex64::new(crate::polycore::coef::rational_to_f64(p), 0.0));
                    }
                }
                let value = f.evaluate(&point)?;
                return Ok(ClassVerdict::non_member(Method::Sampling, Some(Witness { point, value })));
            }
            Status::Undetermined => skipped += 1,
            _ => {}
        }
    }
    if skipped == pts.len() {
        return Ok(ClassVerdict::undetermined(Method::Sampling, "no sample could be decided"));
    }
    let v = ClassVerdict::member_sampled(Method::Sampling);
    Ok(if skipped > 0 { v.with_reason(format!("{skipped} samples undetermined")) } else { v })
}
