//! Dense integer polynomials used by the exact class tests.
//!
//! Every routine here works up to positive constant factors: roots and the
//! signs that Sturm and Routh arguments depend on survive such scaling, so
//! rational inputs are first cleared to primitive integer polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficients in ascending order, no trailing zeros. The zero polynomial
/// is the empty vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly(Vec<BigInt>);

#[derive(Clone, Copy, Debug)]
pub enum Point<'a> {
    NegInf,
    PosInf,
    At(&'a BigRational),
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Primitive integer polynomial that is a positive multiple of the input.
    pub fn from_rationals(coeffs: &[BigRational]) -> Self {
        let lcm = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints = coeffs.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
        IntPoly::new(ints).primitive()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lc(&self) -> Option<&BigInt> {
        self.0.last()
    }

    fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the positive content.
    pub fn primitive(self) -> IntPoly {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self;
        }
        IntPoly(self.0.into_iter().map(|c| c / &g).collect())
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly(self.0.iter().map(|c| -c).collect())
    }

    /// Multiplies by -1 if the leading coefficient is negative.
    pub fn positive_leading(self) -> IntPoly {
        if self.lc().is_some_and(Signed::is_negative) {
            self.neg()
        } else {
            self
        }
    }

    /// `p(-x)`.
    pub fn reflect(&self) -> IntPoly {
        IntPoly(self.0.iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() }).collect())
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let n = self.0.len().max(other.0.len());
        let zero = BigInt::zero();
        IntPoly::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&zero) - other.0.get(i).unwrap_or(&zero))
                .collect(),
        )
    }

    /// Removes the factor `x^m`, returning `m` and the cofactor.
    pub fn strip_zero_roots(&self) -> (usize, IntPoly) {
        let m = self.0.iter().take_while(|c| c.is_zero()).count();
        (m, IntPoly(self.0[m..].to_vec()))
    }

    /// Remainder of `|lc(b)|^(deg a - deg b + 1) · a` modulo `b`.
    pub fn pseudo_rem(&self, b: &IntPoly) -> IntPoly {
        let db = b.degree().expect("pseudo-remainder by the zero polynomial");
        let lb = b.0[db].abs();
        let sign_b = b.0[db].signum();
        let mut r = self.0.clone();
        while r.len() > db && !r.is_empty() {
            let dr = r.len() - 1;
            let lr = r[dr].clone();
            for c in r.iter_mut() {
                *c *= &lb;
            }
            // subtract lr * sign(lb) * x^(dr-db) * b so the top cancels
            let factor = &lr * &sign_b;
            for (j, bc) in b.0.iter().enumerate() {
                r[dr - db + j] -= &factor * bc;
            }
            debug_assert!(r[dr].is_zero());
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        IntPoly::new(r)
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let (mut a, mut b) = (self.clone().primitive(), other.clone().primitive());
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        a.positive_leading()
    }

    /// Exact quotient when `d` divides `self` over the rationals and the
    /// quotient is integral (always the case for primitive `d`).
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        let dd = d.degree()?;
        let ld = &d.0[dd];
        let mut r = self.0.clone();
        if r.len() <= dd {
            return if r.iter().all(Zero::is_zero) { Some(IntPoly(Vec::new())) } else { None };
        }
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let top = &r[k + dd];
            if top.is_zero() {
                continue;
            }
            let (quot, rem) = top.div_rem(ld);
            if !rem.is_zero() {
                return None;
            }
            for (j, dc) in d.0.iter().enumerate() {
                r[k + j] -= &quot * dc;
            }
            q[k] = quot;
        }
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(IntPoly::new(q))
    }

    /// Sign of `p` at a point, with the limits at `±∞` taken from the
    /// leading term.
    pub fn sign_at(&self, at: Point<'_>) -> i8 {
        let Some(d) = self.degree() else { return 0 };
        let lc = self.0[d].signum();
        let lc = if lc.is_positive() { 1 } else { -1 };
        match at {
            Point::PosInf => lc,
            Point::NegInf => {
                if d % 2 == 0 {
                    lc
                } else {
                    -lc
                }
            }
            Point::At(v) => {
                // p(n/m) m^d is integral with the same sign
                let (n, m) = (v.numer(), v.denom());
                let mut acc = BigInt::zero();
                let mut npow = BigInt::one();
                let mut mpow: Vec<BigInt> = Vec::with_capacity(d + 1);
                let mut t = BigInt::one();
                for _ in 0..=d {
                    mpow.push(t.clone());
                    t *= m;
                }
                for (i, c) in self.0.iter().enumerate() {
                    acc += c * &npow * &mpow[d - i];
                    npow *= n;
                }
                if acc.is_positive() {
                    1
                } else if acc.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }
}

/// Sturm sequence `p, p', -rem, ...`, with each element rescaled by a
/// positive constant. The last element is a gcd of `p` and `p'`.
pub fn sturm_sequence(p: &IntPoly) -> Vec<IntPoly> {
    let mut seq = vec![p.clone().primitive()];
    if p.degree().unwrap_or(0) == 0 {
        return seq;
    }
    seq.push(p.derivative().primitive());
    loop {
        let n = seq.len();
        let r = seq[n - 2].pseudo_rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(r.neg().primitive());
    }
    seq
}

fn variations(seq: &[IntPoly], at: Point<'_>) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for p in seq {
        let s = p.sign_at(at);
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Distinct real roots and degree of the squarefree part.
pub fn real_root_census(p: &IntPoly) -> (usize, usize) {
    let seq = sturm_sequence(p);
    let deg = p.degree().unwrap_or(0);
    let g = seq.last().and_then(IntPoly::degree).unwrap_or(0);
    let distinct_real = variations(&seq, Point::NegInf) - variations(&seq, Point::PosInf);
    let squarefree = if seq.len() == 1 { deg } else { deg - g };
    (distinct_real, squarefree)
}

/// Distinct real roots in the open interval `(lo, hi)`; endpoints must not
/// be roots.
pub fn count_real_roots_between(p: &IntPoly, lo: Point<'_>, hi: Point<'_>) -> usize {
    let seq = sturm_sequence(p);
    variations(&seq, lo).saturating_sub(variations(&seq, hi))
}

pub fn is_real_rooted(p: &IntPoly) -> bool {
    let (real, sqfree) = real_root_census(p);
    real == sqfree
}

/// First-column signs of the Routh table with every row rescaled by a
/// positive factor so the arithmetic stays integral and division exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RouthSigns {
    pub first_column: Vec<i8>,
    pub degenerate: bool,
}

impl RouthSigns {
    pub fn all_positive(&self) -> bool {
        !self.degenerate && self.first_column.iter().all(|&s| s > 0)
    }

    pub fn sign_changes(&self) -> usize {
        self.first_column.windows(2).filter(|w| w[0] != w[1]).count()
    }
}

pub fn routh_signs(p: &IntPoly) -> RouthSigns {
    let n = p.degree().unwrap_or(0);
    let c = p.coeffs();
    let width = n / 2 + 1;
    let row = |start: usize| -> Vec<BigInt> {
        (0..width)
            .map(|j| {
                let k = start as isize - 2 * j as isize;
                if k >= 0 {
                    c[k as usize].clone()
                } else {
                    BigInt::zero()
                }
            })
            .collect()
    };
    let mut prev = row(n);
    let mut cur = if n >= 1 { row(n - 1) } else { vec![BigInt::zero(); width] };
    let sgn = |v: &BigInt| -> i8 {
        if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        }
    };
    let mut first = vec![sgn(&prev[0])];
    let mut leads = vec![prev[0].clone(), cur[0].clone()];
    if n == 0 {
        return RouthSigns { first_column: first, degenerate: false };
    }
    for k in 1..=n {
        let s = sgn(&cur[0]);
        first.push(s);
        if s == 0 {
            return RouthSigns { first_column: first, degenerate: true };
        }
        if k == n {
            break;
        }
        let zero = BigInt::zero();
        // row m times |Δ_(m-1)| is integral (Δ the leading Hurwitz minors);
        // the cross product of the two rows above carries an extra
        // |Δ_(m-3)|, which is the leading entry of row m-3
        let m = k + 1;
        let div = if m >= 4 { leads[m - 3].abs() } else { BigInt::one() };
        let next: Vec<BigInt> = (0..width)
            .map(|j| {
                let a = prev.get(j + 1).unwrap_or(&zero);
                let b = cur.get(j + 1).unwrap_or(&zero);
                let v = &cur[0] * a - &prev[0] * b;
                let v = if s < 0 { -v } else { v };
                if div.is_one() {
                    v
                } else {
                    v / &div
                }
            })
            .collect();
        leads.push(next[0].clone());
        prev = std::mem::replace(&mut cur, next);
    }
    RouthSigns { first_column: first, degenerate: false }
}

/// Strict Hurwitz stability of a polynomial with positive leading
/// coefficient: every Routh first-column entry positive.
pub fn strictly_hurwitz(p: &IntPoly) -> bool {
    routh_signs(&p.clone().positive_leading()).all_positive()
}

/// Whether every root lies in the closed left half plane.
///
/// Roots at the origin are stripped. If the Routh table is regular it
/// decides directly. Otherwise `h = gcd(p(x), p(-x))` collects every root
/// whose mirror image is also a root (including all imaginary-axis roots);
/// the cofactor must be strictly Hurwitz and the even polynomial
/// `h(x) = E(x^2)` must have only real negative roots in `E`.
pub fn closed_left_half_plane(p: &IntPoly) -> bool {
    let (_, q) = p.strip_zero_roots();
    let q = q.positive_leading();
    if q.degree().unwrap_or(0) == 0 {
        return true;
    }
    let rs = routh_signs(&q);
    if !rs.degenerate {
        return rs.all_positive();
    }
    let h = q.gcd(&q.reflect());
    let g = q.div_exact(&h).expect("gcd divides its argument").positive_leading();
    if g.degree().unwrap_or(0) > 0 && !routh_signs(&g).all_positive() {
        return false;
    }
    if h.degree().unwrap_or(0) == 0 {
        return true;
    }
    let even = IntPoly::new(h.coeffs().iter().step_by(2).cloned().collect());
    debug_assert!(h.coeffs().iter().skip(1).step_by(2).all(Zero::is_zero));
    let (_, sqfree) = real_root_census(&even);
    let zero = BigRational::zero();
    count_real_roots_between(&even, Point::NegInf, Point::At(&zero)) == sqfree
}
