use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::polycore::MultiPoly;

/// Relative residual a root must reach to be accepted.
pub const RESIDUAL_THRESHOLD: f64 = 1e-10;
const CLUSTER_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    /// Distinct roots (up to clustering) with multiplicities, sorted by
    /// real then imaginary part.
    pub roots: Vec<(Complex64, usize)>,
    pub residual: f64,
}

impl RootSet {
    pub fn degree(&self) -> usize {
        self.roots.iter().map(|r| r.1).sum()
    }

    /// Roots repeated according to multiplicity.
    pub fn flat(&self) -> Vec<Complex64> {
        self.roots.iter().flat_map(|&(z, m)| std::iter::repeat_n(z, m)).collect()
    }

    /// Root with the largest real part (largest imaginary part on ties).
    pub fn rightmost(&self) -> Option<Complex64> {
        self.roots.last().map(|r| r.0)
    }
}

fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64, f64) {
    let mut p = Complex64::zero();
    let mut dp = Complex64::zero();
    let mut scale = 0.0;
    let r = z.norm();
    for a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
        scale = scale * r + a.norm();
    }
    (p, dp, scale)
}

fn relative_residual(c: &[Complex64], z: Complex64) -> f64 {
    let (p, _, scale) = horner(c, z);
    if scale == 0.0 {
        0.0
    } else {
        p.norm() / scale
    }
}

/// All roots of `c[0] + c[1] x + ...`, polished but not certified, sorted
/// by real then imaginary part.
pub fn raw_roots(c: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = c.iter().rposition(|a| !a.is_zero()).ok_or(Error::ZeroPolynomial)?;
    let c = &c[..=n];
    let zeros = c.iter().take_while(|a| a.is_zero()).count();
    let mut out = vec![Complex64::zero(); zeros];
    let core = &c[zeros..];
    let m = core.len() - 1;
    if m > 0 {
        // rescale x = s·y with s a power of two so the roots sit near the unit circle
        let ratio = (core[0].norm() / core[m].norm()).log2() / m as f64;
        let s = 2f64.powi(ratio.round().clamp(-1000.0, 1000.0) as i32);
        let mut scaled: Vec<Complex64> = Vec::with_capacity(m + 1);
        let mut sp = 1.0;
        for a in core {
            scaled.push(a * sp);
            sp *= s;
        }
        let lead = scaled[m];
        let mut comp = DMatrix::<Complex64>::zeros(m, m);
        for j in 0..m {
            comp[(0, j)] = -scaled[m - 1 - j] / lead;
        }
        for i in 1..m {
            comp[(i, i - 1)] = Complex64::new(1.0, 0.0);
        }
        let eig = comp
            .try_schur(f64::EPSILON, 100_000)
            .and_then(|s| s.eigenvalues())
            .ok_or_else(|| Error::RootCertification("eigenvalue iteration did not converge".into()))?;
        for y in eig.iter() {
            let z = polish(core, y * s);
            out.push(z);
        }
    }
    out.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(out)
}

fn polish(c: &[Complex64], mut z: Complex64) -> Complex64 {
    let mut best = relative_residual(c, z);
    for _ in 0..8 {
        let (p, dp, _) = horner(c, z);
        if dp.is_zero() || !p.is_finite() {
            break;
        }
        let cand = z - p / dp;
        let r = relative_residual(c, cand);
        if !(r < best) {
            break;
        }
        z = cand;
        best = r;
    }
    z
}

/// Certified roots of a complex coefficient sequence.
pub fn roots_of_coeffs(c: &[Complex64]) -> Result<RootSet> {
    let all = raw_roots(c)?;
    if all.is_empty() {
        return Err(Error::InvalidArgument("root finding needs degree at least one".into()));
    }
    let residual = all.iter().map(|&z| relative_residual(c, z)).fold(0.0, f64::max);
    if !(residual <= RESIDUAL_THRESHOLD) {
        return Err(Error::RootCertification(format!("residual {residual:e} above threshold")));
    }
    let mut clusters: Vec<(Complex64, usize)> = Vec::new();
    for z in all {
        match clusters
            .iter_mut()
            .find(|(rep, _)| (*rep - z).norm() <= CLUSTER_TOL * rep.norm().max(1.0))
        {
            Some((rep, m)) => {
                *rep = (*rep * *m as f64 + z) / (*m as f64 + 1.0);
                *m += 1;
            }
            None => clusters.push((z, 1)),
        }
    }
    clusters.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    Ok(RootSet { roots: clusters, residual })
}

pub fn float_coeffs(f: &MultiPoly) -> Result<Vec<Complex64>> {
    Ok(f.univariate_coeffs()?.iter().map(|c| Complex64::new(c.to_f64(), 0.0)).collect())
}

/// Complex roots of an arity-1 polynomial.
pub fn roots(f: &MultiPoly) -> Result<RootSet> {
    if f.arity() != 1 {
        return Err(Error::ArityMismatch { expected: 1, got: f.arity() });
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    roots_of_coeffs(&float_coeffs(f)?)
}
