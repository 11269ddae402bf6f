//! Matrices with polynomial entries and their determinants.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::coef::{Coef, Domain};
use super::poly::{MultiPoly, Vars};
use crate::error::{Error, Result};

pub const DEFAULT_DET_CAP: usize = 8;

/// Below this size determinants are expanded by cofactors.
const LAPLACE_BELOW: usize = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    vars: Vars,
    domain: Domain,
    entries: Vec<MultiPoly>,
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<MultiPoly>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension("matrices need at least one row and column".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let vars = entries[0].vars().clone();
        let domain = entries[0].domain();
        for e in &entries[1..] {
            if e.vars() != &vars {
                return Err(Error::VarMismatch {
                    left: vars.names().to_vec(),
                    right: e.vars().names().to_vec(),
                });
            }
            if e.domain() != domain {
                return Err(Error::DomainMismatch);
            }
        }
        Ok(PolyMatrix { rows, cols, vars, domain, entries })
    }

    pub fn from_fn<F>(rows: usize, cols: usize, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> MultiPoly,
    {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Self::new(rows, cols, entries)
    }

    pub fn from_rows(rows: Vec<Vec<MultiPoly>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Matrix of rational constants over an empty variable list.
    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self> {
        let vars = Vars::empty();
        let entries = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&v| MultiPoly::constant(&vars, Coef::from_i64(Domain::Rational, v)))
                    .collect()
            })
            .collect();
        Self::from_rows(entries)
    }

    pub fn identity(n: usize, vars: &Vars, domain: Domain) -> Result<Self> {
        Self::from_fn(n, n, |r, c| {
            if r == c {
                MultiPoly::one(vars, domain)
            } else {
                MultiPoly::zero(vars, domain)
            }
        })
    }

    /// Finite truncation of the upper-triangular Toeplitz array whose
    /// entry `(r, c)` is `coeffs[c - r]`, zero outside the stored range.
    pub fn toeplitz(coeffs: &[MultiPoly], vars: &Vars, domain: Domain, rows: usize, cols: usize) -> Result<Self> {
        Self::from_fn(rows, cols, |r, c| {
            if c >= r && c - r < coeffs.len() {
                coeffs[c - r].clone()
            } else {
                MultiPoly::zero(vars, domain)
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn entries(&self) -> &[MultiPoly] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &MultiPoly {
        &self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[MultiPoly] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<MultiPoly>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_constant(&self) -> bool {
        self.entries.iter().all(MultiPoly::is_constant)
    }

    /// Rational entries of a constant matrix.
    pub fn rational_entries(&self) -> Option<Vec<Vec<BigRational>>> {
        if self.domain != Domain::Rational || !self.is_constant() {
            return None;
        }
        Some(
            (0..self.rows)
                .map(|r| {
                    self.row(r)
                        .iter()
                        .map(|e| {
                            e.constant_value()
                                .and_then(|c| c.as_rational().cloned())
                                .unwrap_or_else(BigRational::zero)
                        })
                        .collect()
                })
                .collect(),
        )
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                entries.push(self.get(r, c).clone());
            }
        }
        PolyMatrix { rows: self.cols, cols: self.rows, vars: self.vars.clone(), domain: self.domain, entries }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<PolyMatrix> {
        if rows.iter().any(|&r| r >= self.rows) || cols.iter().any(|&c| c >= self.cols) {
            return Err(Error::Dimension("selection index out of range".into()));
        }
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            for &c in cols {
                entries.push(self.get(r, c).clone());
            }
        }
        PolyMatrix::new(rows.len(), cols.len(), entries)
    }

    pub fn checked_mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = MultiPoly::zero(&self.vars, self.domain);
                for k in 0..self.cols {
                    let a = self.get(r, k);
                    let b = other.get(k, c);
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.checked_add(&a.checked_mul(b)?)?;
                    }
                }
                entries.push(acc);
            }
        }
        PolyMatrix::new(self.rows, other.cols, entries)
    }

    pub fn map<F>(&self, f: F) -> Result<PolyMatrix>
    where
        F: Fn(&MultiPoly) -> Result<MultiPoly>,
    {
        let entries = self.entries.iter().map(f).collect::<Result<Vec<_>>>()?;
        PolyMatrix::new(self.rows, self.cols, entries)
    }

    /// Whether every diagonal `c - r = const` carries a single value.
    pub fn is_toeplitz(&self) -> bool {
        (1..self.rows).all(|r| (1..self.cols).all(|c| self.get(r, c) == self.get(r - 1, c - 1)))
    }

    pub fn det(&self) -> Result<MultiPoly> {
        self.det_with_cap(DEFAULT_DET_CAP)
    }

    /// Exact determinant. Constant rational matrices use rational
    /// elimination; otherwise sizes below 4 expand by cofactors and larger
    /// ones run fraction-free elimination, falling back to cofactor expansion
    /// whenever a pivot vanishes.
    pub fn det_with_cap(&self, cap: usize) -> Result<MultiPoly> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        if self.rows > cap {
            return Err(Error::CapExceeded { size: self.rows, cap });
        }
        if let Some(m) = self.rational_entries() {
            let d = det_rational(m);
            return Ok(MultiPoly::constant(&self.vars, Coef::Rational(d)));
        }
        let rows: Vec<Vec<MultiPoly>> = self.to_rows();
        Ok(det_poly(&rows, &self.vars, self.domain))
    }
}

fn det_poly(m: &[Vec<MultiPoly>], vars: &Vars, domain: Domain) -> MultiPoly {
    let n = m.len();
    if n == 0 {
        return MultiPoly::one(vars, domain);
    }
    if n < LAPLACE_BELOW || domain == Domain::Float {
        return laplace(m, vars, domain);
    }
    bareiss(m, vars, domain).unwrap_or_else(|| laplace(m, vars, domain))
}

/// Cofactor expansion along the first row.
pub(crate) fn laplace(m: &[Vec<MultiPoly>], vars: &Vars, domain: Domain) -> MultiPoly {
    let n = m.len();
    match n {
        0 => return MultiPoly::one(vars, domain),
        1 => return m[0][0].clone(),
        2 => return &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        _ => {}
    }
    let mut acc = MultiPoly::zero(vars, domain);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<MultiPoly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != j)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][j] * &det_poly(&minor, vars, domain);
        acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Fraction-free elimination; `None` signals a vanishing pivot.
fn bareiss(m: &[Vec<MultiPoly>], vars: &Vars, domain: Domain) -> Option<MultiPoly> {
    let n = m.len();
    let mut a: Vec<Vec<MultiPoly>> = m.to_vec();
    let mut prev = MultiPoly::one(vars, domain);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            return None;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev).ok()?;
            }
        }
        prev = a[k][k].clone();
    }
    Some(a[n - 1][n - 1].clone())
}

/// Exact determinant of a rational matrix by Gaussian elimination with
/// row exchanges.
pub fn det_rational(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return BigRational::zero();
        };
        if p != k {
            m.swap(p, k);
            det = -det;
        }
        let pivot = m[k][k].clone();
        det *= &pivot;
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let factor = &m[i][k] / &pivot;
            for j in k + 1..n {
                let t = &factor * &m[k][j];
                m[i][j] -= t;
            }
        }
    }
    det
}

/// Exact determinant of an integer matrix; explicit formulas through size
/// 3, Bareiss elimination with row exchanges beyond.
pub fn det_integer(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    match n {
        0 => return BigInt::one(),
        1 => return m[0][0].clone(),
        2 => return &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0],
        3 => {
            let a = &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]);
            let b = &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0]);
            let c = &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0]);
            return a - b + c;
        }
        _ => {}
    }
    let mut a = m.to_vec();
    let mut prev = BigInt::one();
    let mut negate = false;
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Scales each row by the positive lcm of its denominators, giving an
/// integer matrix whose minors have the same signs as the original.
pub fn integer_row_scaled(m: &[Vec<BigRational>]) -> Vec<Vec<BigInt>> {
    m.iter()
        .map(|row| {
            let lcm = row
                .iter()
                .fold(BigInt::one(), |acc, v| num_integer::Integer::lcm(&acc, v.denom()));
            row.iter().map(|v| v.numer() * (&lcm / v.denom())).collect()
        })
        .collect()
}

/// Sign of a rational, as -1, 0 or 1.
pub fn sign_of(v: &BigRational) -> i8 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(expr: &str, v: &Vars) -> MultiPoly {
        MultiPoly::parse(expr, v).unwrap()
    }

    #[test]
    fn boundary_determinant() {
        let v = Vars::new(&["a0", "a1"]);
        let m = PolyMatrix::from_rows(vec![
            vec![p("a0", &v), p("a1", &v)],
            vec![p("0", &v), p("a0", &v)],
        ])
        .unwrap();
        assert_eq!(m.det().unwrap(), p("a0^2", &v));
    }

    #[test]
    fn identity_determinant() {
        let v = Vars::new(&["x"]);
        for n in 1..=6 {
            let m = PolyMatrix::identity(n, &v, Domain::Rational).unwrap();
            assert_eq!(m.det().unwrap(), MultiPoly::one(&v, Domain::Rational));
        }
    }

    #[test]
    fn pencil_determinant() {
        let v = Vars::new(&["x", "y"]);
        let rows = [
            ["1+13*x+5*y", "9*x+7*y", "7*x+8*y"],
            ["9*x+7*y", "1+7*x+11*y", "5*x+12*y"],
            ["7*x+8*y", "5*x+12*y", "1+4*x+14*y"],
        ];
        let m = PolyMatrix::from_rows(rows.iter().map(|r| r.iter().map(|e| p(e, &v)).collect()).collect()).unwrap();
        let expected = p(
            "1 + 24*x + 16*x^2 + 2*x^3 + 30*y + 164*x*y + 62*x^2*y + 22*y^2 + 64*x*y^2 + 4*y^3",
            &v,
        );
        assert_eq!(m.det().unwrap(), expected);
    }

    #[test]
    fn non_square_and_cap() {
        let m = PolyMatrix::from_integers(&[vec![1, 2, 3], vec![4, 5, 6]]).unwrap();
        assert!(matches!(m.det(), Err(Error::NotSquare { .. })));
        let v = Vars::new(&["x"]);
        let big = PolyMatrix::identity(9, &v, Domain::Rational).unwrap();
        assert!(matches!(big.det(), Err(Error::CapExceeded { .. })));
        assert!(big.det_with_cap(9).is_ok());
    }

    #[test]
    fn bareiss_zero_pivot_falls_back() {
        let v = Vars::new(&["x"]);
        // leading entry zero forces the cofactor fallback
        let m = PolyMatrix::from_fn(5, 5, |r, c| {
            if (r + 1) % 5 == c {
                p("x+1", &v)
            } else if r == c {
                p("0", &v)
            } else {
                p("x", &v).scale(&Coef::from_i64(Domain::Rational, (r * 5 + c) as i64 % 3))
            }
        })
        .unwrap();
        let pt = [BigRational::from_integer(3.into())];
        let numeric: Vec<Vec<BigRational>> = m
            .to_rows()
            .iter()
            .map(|row| row.iter().map(|e| e.evaluate_rational(&pt).unwrap()).collect())
            .collect();
        assert_eq!(m.det().unwrap().evaluate_rational(&pt).unwrap(), det_rational(numeric));
    }

    #[test]
    fn toeplitz_layout() {
        let v = Vars::empty();
        let c = |k| MultiPoly::constant(&v, Coef::from_i64(Domain::Rational, k));
        let coeffs = [c(1), c(2), c(1)];
        let m = PolyMatrix::toeplitz(&coeffs, &v, Domain::Rational, 3, 4).unwrap();
        let expected = PolyMatrix::from_integers(&[vec![1, 2, 1, 0], vec![0, 1, 2, 1], vec![0, 0, 1, 2]]).unwrap();
        assert_eq!(m, expected);
        let one_row = PolyMatrix::toeplitz(&coeffs, &v, Domain::Rational, 1, 5).unwrap();
        assert_eq!(one_row, PolyMatrix::from_integers(&[vec![1, 2, 1, 0, 0]]).unwrap());
        assert!(m.is_toeplitz());
    }

    #[test]
    fn integer_det_matches_rational() {
        let rows = vec![
            vec![2, -1, 0, 3, 1],
            vec![0, 0, 4, 1, 2],
            vec![1, 5, -2, 0, 0],
            vec![3, 3, 1, 1, -1],
            vec![0, 2, 2, -3, 4],
        ];
        let ints: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
        let rats: Vec<Vec<BigRational>> = ints
            .iter()
            .map(|r| r.iter().map(|v| BigRational::from_integer(v.clone())).collect())
            .collect();
        assert_eq!(BigRational::from_integer(det_integer(&ints)), det_rational(rats));
    }
}
