use super::{det_of, normalized, TransformOutput};
use crate::error::{Error, Result};
use crate::polycore::{recompose, CoefficientSlice, Coef, MultiPoly, PolyMatrix};

fn main_slice(f: &MultiPoly) -> Result<CoefficientSlice> {
    if f.arity() == 0 {
        return Err(Error::ArityMismatch { expected: 1, got: 0 });
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(f.slice_at(0))
}

/// `Σ_i x^i (a_i² - a_{i+k} a_{i-k})` over the coefficients of `f` in its
/// first variable.
pub fn tk_transform(f: &MultiPoly, k: usize) -> Result<TransformOutput> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let s = main_slice(f)?;
    let k = k as i64;
    let parts: Vec<MultiPoly> = (0..s.parts.len() as i64)
        .map(|i| {
            let a = s.part(i);
            &(&a * &a) - &(&s.part(i + k) * &s.part(i - k))
        })
        .collect();
    Ok(normalized(recompose(&parts, f.vars(), 0, f.domain())))
}

pub fn q1_transform(f: &MultiPoly) -> Result<TransformOutput> {
    tk_transform(f, 1)
}

/// `Σ_i x^i det(a_{i-r+c})_{r,c=0..d}`.
pub fn hankel_band_transform(f: &MultiPoly, d: usize) -> Result<TransformOutput> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be positive".into()));
    }
    let s = main_slice(f)?;
    let n = d + 1;
    let parts = (0..s.parts.len() as i64)
        .map(|i| det_of(n, |r, c| s.part(i - r as i64 + c as i64)))
        .collect::<Result<Vec<_>>>()?;
    Ok(normalized(recompose(&parts, f.vars(), 0, f.domain())))
}

/// The `size × size` truncation of `M'`, where `M'[r][c]` is the `d × d`
/// determinant of the infinite upper-triangular Toeplitz matrix of `f`
/// based at `(r, c)`. The result depends only on `c - r` and vanishes
/// below the diagonal.
pub fn toeplitz_minor_matrix(f: &MultiPoly, d: usize, size: usize) -> Result<PolyMatrix> {
    if d == 0 || size < d {
        return Err(Error::InvalidArgument(format!("need 1 ≤ d ≤ size, got d={d}, size={size}")));
    }
    let s = main_slice(f)?;
    let rest = s.remaining_vars();
    let band = (0..size as i64)
        .map(|j| det_of(d, |t, u| s.part(j + u as i64 - t as i64)))
        .collect::<Result<Vec<_>>>()?;
    PolyMatrix::toeplitz(&band, &rest, f.domain(), size, size)
}

/// `Σ_i x^i (a_i b_{i+1} - a_{i+1} b_i)`.
pub fn pair_transform(f: &MultiPoly, g: &MultiPoly) -> Result<TransformOutput> {
    if !f.vars().same(g.vars()) || f.domain() != g.domain() {
        return Err(Error::VarMismatch { left: f.vars().names().to_vec(), right: g.vars().names().to_vec() });
    }
    let (a, b) = (main_slice(f)?, main_slice(g)?);
    let n = a.parts.len().max(b.parts.len()) as i64;
    let parts: Vec<MultiPoly> =
        (0..n).map(|i| &(&a.part(i) * &b.part(i + 1)) - &(&a.part(i + 1) * &b.part(i))).collect();
    Ok(normalized(recompose(&parts, f.vars(), 0, f.domain())))
}

/// `det(f^{(r+c)})_{r,c=0..d}`, or with entries `f^{(r+c)}/(r+c)!` when
/// `scaled`.
pub fn derivative_hankel(f: &MultiPoly, d: usize, scaled: bool) -> Result<TransformOutput> {
    main_slice(f)?;
    let mut derivs = Vec::with_capacity(2 * d + 1);
    let mut cur = f.clone();
    let mut fact = Coef::one(f.domain());
    for m in 0..=2 * d {
        if m > 0 {
            cur = cur.derivative_at(0, 1);
            fact = &fact * &Coef::from_i64(f.domain(), m as i64);
        }
        derivs.push(if scaled { cur.scale(&(&Coef::one(f.domain()) / &fact)) } else { cur.clone() });
    }
    Ok(normalized(det_of(d + 1, |r, c| derivs[r + c].clone())?))
}
