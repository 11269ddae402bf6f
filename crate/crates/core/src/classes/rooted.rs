use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Signed;

use super::intpoly::{self, IntPoly, Point};
use super::roots::{self, float_coeffs};
use super::stability::{check_univariate, int_poly};
use super::verdict::{ClassVerdict, Method, Witness};
use crate::error::{Error, Result};
use crate::polycore::{Domain, MultiPoly, Vars};

/// Imaginary parts below this (relative to `max(1, |z|)`) count as real.
pub const IMAG_TOL: f64 = 1e-9;
/// Absolute tolerance for root comparisons after scaling by `max |root|`.
pub const INTERLACE_TOL: f64 = 1e-9;

fn is_real(z: Complex64) -> bool {
    z.im.abs() <= IMAG_TOL * z.norm().max(1.0)
}

/// Root maximizing `badness`, with the value of `f` there.
fn worst_root(f: &MultiPoly, badness: impl Fn(Complex64) -> f64) -> Option<Witness> {
    let rs = roots::raw_roots(&float_coeffs(f).ok()?).ok()?;
    let z = rs.into_iter().max_by(|a, b| badness(*a).total_cmp(&badness(*b)))?;
    Some(Witness { point: vec![z], value: f.evaluate(&[z]).ok()? })
}

fn nonreal_witness(f: &MultiPoly) -> Option<Witness> {
    worst_root(f, |z| z.im.abs())
}

pub fn is_real_rooted(f: &MultiPoly) -> Result<ClassVerdict> {
    check_univariate(f)?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if f.is_constant() {
        return Ok(ClassVerdict::member(Method::Sturm));
    }
    match f.domain() {
        Domain::Rational => Ok(if intpoly::is_real_rooted(&int_poly(f)?) {
            ClassVerdict::member(Method::Sturm)
        } else {
            ClassVerdict::non_member(Method::Sturm, nonreal_witness(f))
        }),
        Domain::Float => Ok(match roots::roots(f) {
            Err(e) => ClassVerdict::undetermined(Method::CompanionRoots, e.to_string()),
            Ok(rs) => match rs.roots.iter().find(|(z, _)| !is_real(*z)) {
                None => ClassVerdict::member(Method::CompanionRoots),
                Some(&(z, _)) => ClassVerdict::non_member(
                    Method::CompanionRoots,
                    Some(Witness { point: vec![z], value: f.evaluate(&[z])? }),
                ),
            },
        }),
    }
}

/// Membership in 𝒫_1: strictly positive coefficients in every degree and
/// only real roots (hence only negative roots).
pub fn in_polypos1(f: &MultiPoly) -> Result<ClassVerdict> {
    check_univariate(f)?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (sign, g) = f.sign_normalized(0);
    let positive = g.univariate_coeffs()?.iter().all(|c| c.signum() > 0);
    let bad = |g: &MultiPoly| worst_root(g, |z| z.im.abs().max(z.re));
    let rooted = if positive { is_real_rooted(&g)? } else { ClassVerdict::non_member(Method::Sturm, None) };
    let v = if rooted.status.is_member() {
        ClassVerdict { status: rooted.status, ..ClassVerdict::member(rooted.method) }
    } else if rooted.status == super::Status::Undetermined {
        rooted
    } else {
        ClassVerdict::non_member(rooted.method, if positive { rooted.witness } else { bad(&g) })
    };
    Ok(v.with_sign(sign))
}

/// Weak alternation with the orientation of `f + y g` being upper: when the
/// degrees agree the smallest root belongs to `g`, otherwise to `f`.
pub fn roots_alternate(f_roots: &[f64], g_roots: &[f64], tol: f64) -> bool {
    let (first, second) = if f_roots.len() == g_roots.len() + 1 {
        (f_roots, g_roots)
    } else if f_roots.len() == g_roots.len() {
        (g_roots, f_roots)
    } else {
        return false;
    };
    let mut merged = Vec::with_capacity(first.len() + second.len());
    for i in 0..first.len() {
        merged.push(first[i]);
        if i < second.len() {
            merged.push(second[i]);
        }
    }
    merged.windows(2).all(|w| w[0] <= w[1] + tol)
}

fn sorted_real_parts(f: &MultiPoly) -> Result<Vec<f64>> {
    let mut r: Vec<f64> = roots::roots(f)?.flat().iter().map(|z| z.re).collect();
    r.sort_by(f64::total_cmp);
    Ok(r)
}

/// Whether the roots of `f` and `g` interlace, i.e. `f + y g` is upper.
///
/// Exact inputs cancel `h = gcd(f, g)` and use the Wronskian
/// `W = f1'g1 - f1 g1'` of the coprime cofactors: for real-rooted inputs
/// with positive leading coefficients the pair interlaces iff `W` is
/// identically zero or strictly positive on the real line. A repeated root
/// of a cofactor makes `W` vanish there, matching the fact that it cannot
/// be separated by a root of the other.
pub fn interlaces(f: &MultiPoly, g: &MultiPoly) -> Result<ClassVerdict> {
    check_univariate(f)?;
    check_univariate(g)?;
    if f.domain() != g.domain() {
        return Err(Error::DomainMismatch);
    }
    let method = if f.domain() == Domain::Rational { Method::Sturm } else { Method::CompanionRoots };
    if f.is_zero() || g.is_zero() {
        return Ok(ClassVerdict::undetermined(method, "zero polynomial"));
    }
    for (name, p) in [("f", f), ("g", g)] {
        let r = is_real_rooted(p)?;
        if !r.status.is_member() {
            return Ok(ClassVerdict::undetermined(method, format!("{name} is not real-rooted")));
        }
    }
    let df = f.degree_in(0).unwrap_or(0);
    let dg = g.degree_in(0).unwrap_or(0);
    if df != dg && df != dg + 1 {
        return Ok(ClassVerdict::undetermined(method, format!("degrees {df} and {dg} cannot interlace in this order")));
    }
    if f.domain() == Domain::Float {
        let (fr, gr) = match (sorted_real_parts(f), sorted_real_parts(g)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => return Ok(ClassVerdict::undetermined(method, "root certification failed")),
        };
        let scale = fr.iter().chain(&gr).fold(0.0f64, |m, r| m.max(r.abs())).max(f64::MIN_POSITIVE);
        let norm = |v: &[f64]| v.iter().map(|r| r / scale).collect::<Vec<_>>();
        return Ok(if roots_alternate(&norm(&fr), &norm(&gr), INTERLACE_TOL) {
            ClassVerdict::member(method)
        } else {
            ClassVerdict::non_member(method, upper_witness(f, g, None))
        });
    }
    let fi = int_poly(f)?.positive_leading();
    let gi = int_poly(g)?.positive_leading();
    let h = fi.gcd(&gi);
    let f1 = fi.div_exact(&h).expect("gcd divides f");
    let g1 = gi.div_exact(&h).expect("gcd divides g");
    let w = f1.derivative().mul(&g1).sub(&f1.mul(&g1.derivative()));
    if w.is_zero() {
        return Ok(ClassVerdict::member(method));
    }
    let positive = w.lc().is_some_and(Signed::is_positive) && intpoly::real_root_census(&w).0 == 0;
    Ok(if positive {
        ClassVerdict::member(method)
    } else {
        ClassVerdict::non_member(method, upper_witness(f, g, Some(&w)))
    })
}

/// A zero of `f(x) + y g(x)` with both coordinates in the upper half plane.
fn upper_witness(f: &MultiPoly, g: &MultiPoly, w: Option<&IntPoly>) -> Option<Witness> {
    wronskian_witness(f, g, w).or_else(|| sampled_witness(f, g))
}

fn sampled_witness(f: &MultiPoly, g: &MultiPoly) -> Option<Witness> {
    let x = f.vars().names().first().cloned().unwrap_or_else(|| "x".into());
    let y = if x == "y" { "t" } else { "y" };
    let vars = Vars::new(&[x.as_str(), y]);
    let lift = |p: &MultiPoly| -> Option<MultiPoly> {
        let p = p.sign_normalized(0).1;
        let coeffs = p.univariate_coeffs().ok()?;
        Some(MultiPoly::from_coeffs(&vars, 0, &coeffs, p.domain()))
    };
    let yv = MultiPoly::var(&vars, y, f.domain()).ok()?;
    let big = lift(f)?.checked_add(&yv.checked_mul(&lift(g)?).ok()?).ok()?;
    let v = super::upper::upper_refute(&big, 256, 0);
    v.witness
}

/// Near a real point where the Wronskian is negative, `x = t + iε` and
/// `y = -f(x)/g(x)` both lie in the upper half plane.
fn wronskian_witness(f: &MultiPoly, g: &MultiPoly, w: Option<&IntPoly>) -> Option<Witness> {
    let f = f.sign_normalized(0).1;
    let g = g.sign_normalized(0).1;
    let fc = float_coeffs(&f).ok()?;
    let gc = float_coeffs(&g).ok()?;
    let deriv = |c: &[Complex64]| -> Vec<Complex64> {
        c.iter().enumerate().skip(1).map(|(i, a)| a * i as f64).collect()
    };
    let (dfc, dgc) = (deriv(&fc), deriv(&gc));
    let ev = |c: &[Complex64], z: Complex64| c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a);
    let wc: Vec<Complex64> = {
        let n = fc.len().max(gc.len()) * 2;
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for (i, a) in dfc.iter().enumerate() {
            for (j, b) in gc.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        for (i, a) in fc.iter().enumerate() {
            for (j, b) in dgc.iter().enumerate() {
                out[i + j] -= a * b;
            }
        }
        out
    };
    // real parts of all roots, midpoints, small offsets and points past the Cauchy bound
    let mut cands: Vec<f64> = Vec::new();
    let top = wc.iter().rposition(|a| a.norm() > 0.0)?;
    let bound = 1.0 + wc[..top].iter().fold(0.0f64, |m, a| m.max(a.norm() / wc[top].norm()));
    cands.push(bound + 1.0);
    cands.push(-bound - 1.0);
    if let Ok(rs) = roots::raw_roots(&wc) {
        let mut real: Vec<f64> = rs.iter().map(|z| z.re).collect();
        real.sort_by(f64::total_cmp);
        for p in real.windows(2) {
            cands.push((p[0] + p[1]) / 2.0);
        }
        for r in &real {
            let d = 1e-6 * r.abs().max(1.0);
            cands.extend([r - d, r + d]);
        }
    }
    let negative_at = |t: f64| -> bool {
        match (w, BigRational::from_float(t)) {
            (Some(w), Some(q)) => w.sign_at(Point::At(&q)) < 0,
            _ => ev(&wc, Complex64::new(t, 0.0)).re < 0.0,
        }
    };
    let t = cands.into_iter().find(|&t| negative_at(t))?;
    for eps in [1e-6, 1e-4, 1e-2, 1e-8] {
        let x = Complex64::new(t, eps * t.abs().max(1.0));
        let gx = ev(&gc, x);
        if gx.norm() == 0.0 {
            continue;
        }
        let y = -ev(&fc, x) / gx;
        if y.im > 0.0 {
            let value = ev(&fc, x) + y * gx;
            return Some(Witness { point: vec![x, y], value });
        }
    }
    None
}
