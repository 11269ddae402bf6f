use num_rational::BigRational;
use num_traits::Signed;

use super::{det_of, normalized, TransformOutput};
use crate::error::{Error, Result};
use crate::polycore::{recompose, Coef, Domain, MultiPoly, PolyMatrix, Vars};

fn need_arity(f: &MultiPoly, want: usize, exact: bool) -> Result<()> {
    let ok = if exact { f.arity() == want } else { f.arity() >= want };
    if !ok {
        return Err(Error::ArityMismatch { expected: want, got: f.arity() });
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(())
}

/// Coefficient grid `a[i][j]` of `x^i y^j` for the first two variables,
/// each a polynomial in the remaining ones.
fn grid2(f: &MultiPoly) -> (Vec<Vec<MultiPoly>>, Vars) {
    let sx = f.slice_at(0);
    let rest = sx.remaining_vars();
    let zero = MultiPoly::zero(&rest.without(0), f.domain());
    let rows = sx
        .parts
        .iter()
        .map(|p| p.slice_at(0).parts)
        .collect::<Vec<_>>();
    (rows.into_iter().map(|r| if r.is_empty() { vec![zero.clone()] } else { r }).collect(), rest.without(0))
}

fn get(grid: &[Vec<MultiPoly>], i: usize, j: usize, zero: &MultiPoly) -> MultiPoly {
    grid.get(i).and_then(|r| r.get(j)).cloned().unwrap_or_else(|| zero.clone())
}

/// `Σ_i x^i det(a_{i+r, c})_{r,c=0..d}` for `f = Σ a_{ij} x^i y^j`. The
/// result drops `y`.
pub fn bivariate_det_transform(f: &MultiPoly, d: usize) -> Result<TransformOutput> {
    need_arity(f, 2, false)?;
    if d == 0 {
        return Err(Error::InvalidArgument("d must be positive".into()));
    }
    let (grid, rest) = grid2(f);
    let zero = MultiPoly::zero(&rest, f.domain());
    let parts = (0..grid.len())
        .map(|i| det_of(d + 1, |r, c| get(&grid, i + r, c, &zero)))
        .collect::<Result<Vec<_>>>()?;
    let out_vars = f.vars().without(1);
    Ok(normalized(recompose(&parts, &out_vars, 0, f.domain())))
}

/// `Σ_{i,j} y^j z^i det(f_{i+r, j+s}(x))_{r,s<k}` where `f_{i,j}` is the
/// coefficient of `z^i y^j`.
pub fn block_det_3var(f: &MultiPoly, k: usize) -> Result<TransformOutput> {
    need_arity(f, 3, true)?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be positive".into()));
    }
    let vars = f.vars().clone();
    let vx = Vars::new(&vars.names()[..1]);
    let zero = MultiPoly::zero(&vx, f.domain());
    // blocks[i][j] = f_{i,j}(x), i the power of z and j the power of y
    let by_z = f.slice_at(2).parts;
    let blocks: Vec<Vec<MultiPoly>> = by_z.iter().map(|p| p.slice_at(1).parts).collect();
    let ny = blocks.iter().map(Vec::len).max().unwrap_or(0);
    let mut acc = MultiPoly::zero(&vars, f.domain());
    for i in 0..blocks.len() {
        for j in 0..ny {
            let det = det_of(k, |r, s| get(&blocks, i + r, j + s, &zero))?;
            if det.is_zero() {
                continue;
            }
            let mut exps = vec![0u32; 3];
            exps[1] = j as u32;
            exps[2] = i as u32;
            let mono = MultiPoly::from_terms(&vars, f.domain(), [(exps, Coef::one(f.domain()))])?;
            acc = &acc + &(&det.with_vars(&vars)? * &mono);
        }
    }
    Ok(normalized(acc))
}

/// Hankel determinant `det(f_{i+r+c}(x))_{r,c=0..d}` of the slices
/// `f = Σ f_j(x) y^j`.
pub fn coeff_hankel(f: &MultiPoly, d: usize, i: usize) -> Result<TransformOutput> {
    need_arity(f, 2, true)?;
    let s = f.slice_at(1);
    Ok(normalized(det_of(d + 1, |r, c| s.part((i + r + c) as i64))?))
}

/// `size × size` truncation of the Toeplitz matrix with entries
/// `f_{c-r}(x)`, sliced in the second variable.
pub fn toeplitz_slice_matrix(f: &MultiPoly, size: usize) -> Result<PolyMatrix> {
    need_arity(f, 2, true)?;
    let s = f.slice_at(1);
    PolyMatrix::toeplitz(&s.parts, &s.remaining_vars(), f.domain(), size, size)
}

pub fn toeplitz_slice_minor(f: &MultiPoly, rows: &[usize], cols: &[usize], size: usize) -> Result<MultiPoly> {
    if rows.len() != cols.len() || rows.is_empty() {
        return Err(Error::Dimension(format!("selection sizes {} and {}", rows.len(), cols.len())));
    }
    if let Some(&bad) = rows.iter().chain(cols).find(|&&v| v >= size) {
        return Err(Error::Dimension(format!("index {bad} out of range for size {size}")));
    }
    toeplitz_slice_matrix(f, size)?.submatrix(rows, cols)?.det()
}

/// Arrangement `(i, j) ↦ a_{i, d-j}` for `i, j ≤ d`, from the coefficients
/// `a_{ij}` of `x^i y^j`; entries are polynomials in any further variables.
pub fn q7_arrangement(f: &MultiPoly, d: usize) -> Result<PolyMatrix> {
    need_arity(f, 2, false)?;
    let (grid, rest) = grid2(f);
    let zero = MultiPoly::zero(&rest, f.domain());
    PolyMatrix::from_fn(d + 1, d + 1, |i, j| get(&grid, i, d - j, &zero))
}

/// Expands `∏ (x + b y + c)`.
pub fn q7_product(factors: &[(BigRational, BigRational)]) -> Result<MultiPoly> {
    if factors.is_empty() {
        return Err(Error::InvalidArgument("need at least one factor".into()));
    }
    if factors.iter().any(|(b, c)| !b.is_positive() || !c.is_positive()) {
        return Err(Error::InvalidArgument("factor parameters must be positive".into()));
    }
    let v = Vars::new(&["x", "y"]);
    let d = Domain::Rational;
    let mut f = MultiPoly::one(&v, d);
    for (b, c) in factors {
        let lin = MultiPoly::from_terms(
            &v,
            d,
            [(vec![1, 0], Coef::one(d)), (vec![0, 1], Coef::Rational(b.clone())), (vec![0, 0], Coef::Rational(c.clone()))],
        )?;
        f = &f * &lin;
    }
    Ok(f)
}

/// The `(n+1) × (n+1)` arrangement for `n` linear factors.
pub fn q7_matrix(factors: &[(BigRational, BigRational)]) -> Result<PolyMatrix> {
    q7_arrangement(&q7_product(factors)?, factors.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transforms::pair_transform;

    fn p(s: &str, v: &[&str]) -> MultiPoly {
        MultiPoly::parse(s, &Vars::new(v)).unwrap()
    }

    #[test]
    fn bivariate_examples() {
        let f = p("(x+y+1)*(x+2*y+1)", &["x", "y"]);
        assert_eq!(bivariate_det_transform(&f, 1).unwrap().raw, p("-3 - 3*x", &["x"]));
        let f0 = p("1 + 3*x + x^2", &["x", "y"]);
        let g = p("2 + x", &["x", "y"]);
        let both = &f0 + &(&p("y", &["x", "y"]) * &g);
        let lhs = bivariate_det_transform(&both, 1).unwrap().raw;
        let rhs = pair_transform(&p("1 + 3*x + x^2", &["x"]), &p("2 + x", &["x"])).unwrap().raw;
        assert_eq!(lhs, rhs);
        assert!(bivariate_det_transform(&p("5*x^2*y^3", &["x", "y"]), 1).unwrap().raw.is_zero());
        assert!(bivariate_det_transform(&p("x", &["x"]), 1).is_err());
    }

    #[test]
    fn block_det_examples() {
        let v = ["x", "y", "z"];
        let two = block_det_3var(&p("(x+y+z)^2", &v), 2).unwrap();
        assert_eq!(two.raw, p("-2*(x^2+y+z)", &v));
        assert_eq!(two.normalization_sign, -1);
        let three = block_det_3var(&p("(x+y+z)^3", &v), 2).unwrap();
        assert_eq!(three.raw, p("-3*(x^4+3*y*x^2+3*z*x^2+y^2+z^2+3*y*z)", &v));
        let nine = block_det_3var(&p("(x+y+z)^3", &v), 3).unwrap();
        assert_eq!(nine.raw, p("-9*(x^3+y+z)", &v));
        let f = p("3 + x*y - 2*z^2*x + y^3*z", &v);
        assert_eq!(block_det_3var(&f, 1).unwrap().raw, f);
        assert!(block_det_3var(&p("x+y", &["x", "y"]), 2).is_err());
    }

    #[test]
    fn coeff_hankel_examples() {
        let v = ["x", "y"];
        assert_eq!(coeff_hankel(&p("(x+y)^2", &v), 1, 0).unwrap().raw, p("-3*x^2", &["x"]));
        assert_eq!(coeff_hankel(&p("(x+y)^3", &v), 0, 2).unwrap().raw, p("3*x", &["x"]));
        // rows (f1, f2), (f2, f3) of (x+y)^3 = (3x^2, 3x), (3x, 1)
        assert_eq!(coeff_hankel(&p("(x+y)^3", &v), 1, 1).unwrap().raw, p("-6*x^2", &["x"]));
        assert!(coeff_hankel(&p("x", &["x"]), 1, 0).is_err());
    }

    #[test]
    fn slice_minor_examples() {
        let v = ["x", "y"];
        let f = p("(x+y)^2", &v);
        assert_eq!(toeplitz_slice_minor(&f, &[0, 1], &[1, 2], 4).unwrap(), p("3*x^2", &["x"]));
        assert_eq!(toeplitz_slice_minor(&f, &[1], &[3], 4).unwrap(), p("1", &["x"]));
        assert_eq!(toeplitz_slice_minor(&f, &[0, 1], &[0, 1], 4).unwrap(), p("x^4", &["x"]));
        assert!(toeplitz_slice_minor(&f, &[0, 4], &[0, 1], 4).is_err());
        assert!(toeplitz_slice_minor(&f, &[0], &[0, 1], 4).is_err());
    }

    #[test]
    fn q7_examples() {
        let one = BigRational::from_integer(1.into());
        let m = q7_matrix(&[(one.clone(), one.clone())]).unwrap();
        assert_eq!(m, PolyMatrix::from_integers(&[vec![1, 1], vec![0, 1]]).unwrap());
        let m2 = q7_matrix(&[(one.clone(), one.clone()), (one.clone(), one.clone())]).unwrap();
        // a00=1, a01=2, a02=1, a10=2, a11=2, a20=1
        assert_eq!(m2, PolyMatrix::from_integers(&[vec![1, 2, 1], vec![0, 2, 2], vec![0, 0, 1]]).unwrap());
        assert!(q7_matrix(&[]).is_err());
        assert!(q7_matrix(&[(one.clone(), -one)]).is_err());
    }
}
