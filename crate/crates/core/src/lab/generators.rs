//! Samplers whose outputs belong to their class by construction.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polycore::{Coef, Domain, MultiPoly, PolyMatrix, Vars};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorClass {
    Polypos1,
    Polypos2,
    Polypos3,
    InterlacingPair,
    PsdPencil,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polypos2Kind {
    LinearForms,
    PsdPencil,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairMode {
    Alternating,
    /// `((x+1)g, g)`.
    ShiftedCopy,
}

/// Positive rationals `k/denominator` with `log2 k` uniform in
/// `[0, max_log2]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamDist {
    pub max_log2: u32,
    pub denominator: u64,
}

impl Default for ParamDist {
    fn default() -> Self {
        ParamDist { max_log2: 12, denominator: 64 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub class: GeneratorClass,
    /// Degree, or number of factors.
    pub size: usize,
    pub dist: ParamDist,
    pub seed: u64,
    /// Parameters used before any random ones are drawn.
    #[serde(default, skip_serializing_if = "Vec::is_empty", with = "rational_strings")]
    pub forced: Vec<BigRational>,
}

mod rational_strings {
    use num_rational::BigRational;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|r| format!("{}/{}", r.numer(), r.denom())).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigRational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| crate::polycore::coef::parse_rational(t).map_err(D::Error::custom))
            .collect()
    }
}

impl GeneratorSpec {
    pub fn new(class: GeneratorClass, size: usize, seed: u64) -> Self {
        GeneratorSpec { class, size, dist: ParamDist::default(), seed, forced: Vec::new() }
    }
}

struct Params<'a> {
    rng: ChaCha8Rng,
    dist: &'a ParamDist,
    forced: std::slice::Iter<'a, BigRational>,
}

impl<'a> Params<'a> {
    fn new(spec: &'a GeneratorSpec) -> Result<Self> {
        if spec.size == 0 {
            return Err(Error::InvalidArgument("size must be at least 1".into()));
        }
        if spec.dist.denominator == 0 || spec.dist.max_log2 > 60 {
            return Err(Error::InvalidArgument("invalid parameter bounds".into()));
        }
        if spec.forced.iter().any(|v| v <= &BigRational::zero()) {
            return Err(Error::InvalidArgument("forced parameters must be positive".into()));
        }
        Ok(Params { rng: ChaCha8Rng::seed_from_u64(spec.seed), dist: &spec.dist, forced: spec.forced.iter() })
    }

    fn next(&mut self) -> BigRational {
        if let Some(v) = self.forced.next() {
            return v.clone();
        }
        let u: f64 = self.rng.random_range(0.0..=self.dist.max_log2 as f64);
        let k = (2f64.powf(u).round() as u64).clamp(1, 1 << self.dist.max_log2);
        BigRational::new(BigInt::from(k), BigInt::from(self.dist.denominator))
    }
}

fn q(domain_vars: &Vars, terms: Vec<(Vec<u32>, BigRational)>) -> MultiPoly {
    MultiPoly::from_terms(domain_vars, Domain::Rational, terms.into_iter().map(|(e, c)| (e, Coef::Rational(c))))
        .expect("exponent lengths match")
}

fn product_of_roots(vars: &Vars, roots: &[BigRational]) -> MultiPoly {
    roots.iter().fold(MultiPoly::one(vars, Domain::Rational), |acc, a| {
        &acc * &q(vars, vec![(vec![1], BigRational::one()), (vec![0], a.clone())])
    })
}

/// `∏ (x + a_i)` with positive `a_i`; its roots are all negative.
pub fn gen_polypos1(degree: usize, spec: &GeneratorSpec) -> Result<MultiPoly> {
    let spec = GeneratorSpec { size: degree, ..spec.clone() };
    let mut p = Params::new(&spec)?;
    let roots: Vec<BigRational> = (0..degree).map(|_| p.next()).collect();
    Ok(product_of_roots(&Vars::new(&["x"]), &roots))
}

/// The `(b_i, c_i)` of `∏ (x + b_i y + c_i)`.
pub fn gen_linear_factors(count: usize, spec: &GeneratorSpec) -> Result<Vec<(BigRational, BigRational)>> {
    let spec = GeneratorSpec { size: count, ..spec.clone() };
    let mut p = Params::new(&spec)?;
    Ok((0..count).map(|_| (p.next(), p.next())).collect())
}

/// `det(I + xA + yB)` over the rationals.
pub fn psd_pencil(a: &[Vec<BigRational>], b: &[Vec<BigRational>]) -> Result<MultiPoly> {
    let n = a.len();
    if b.len() != n || a.iter().chain(b).any(|r| r.len() != n) {
        return Err(Error::Dimension("pencil matrices must be square of one size".into()));
    }
    let v = Vars::new(&["x", "y"]);
    let m = PolyMatrix::from_fn(n, n, |r, c| {
        let one = if r == c { BigRational::one() } else { BigRational::zero() };
        q(&v, vec![(vec![0, 0], one), (vec![1, 0], a[r][c].clone()), (vec![0, 1], b[r][c].clone())])
    })?;
    m.det_with_cap(usize::MAX)
}

/// `GᵀG + εI` with `G` an `r × n` integer matrix, `r` uniform in `1..=n`,
/// entries in `[0, 3]` and `ε` drawn from the parameter distribution.
/// Small `r` gives nearly singular matrices.
fn random_spd(n: usize, p: &mut Params) -> Vec<Vec<BigRational>> {
    let rank = p.rng.random_range(1..=n);
    let g: Vec<Vec<i64>> = (0..rank).map(|_| (0..n).map(|_| p.rng.random_range(0..=3)).collect()).collect();
    let eps = p.next();
    (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let dot: i64 = g.iter().map(|row| row[r] * row[c]).sum();
                    let mut v = BigRational::from_integer(dot.into());
                    if r == c {
                        v += &eps;
                    }
                    v
                })
                .collect()
        })
        .collect()
}

/// Either `∏ (x + b_i y + c_i)` or `det(I + xA + yB)` with `A`, `B`
/// positive definite of size `count`. Both are real stable with positive
/// coefficients.
pub fn gen_polypos2(count: usize, spec: &GeneratorSpec, kind: Polypos2Kind) -> Result<MultiPoly> {
    match kind {
        Polypos2Kind::LinearForms => crate::transforms::q7_product(&gen_linear_factors(count, spec)?),
        Polypos2Kind::PsdPencil => {
            let spec = GeneratorSpec { size: count, ..spec.clone() };
            let mut p = Params::new(&spec)?;
            let a = random_spd(count, &mut p);
            let b = random_spd(count, &mut p);
            psd_pencil(&a, &b)
        }
    }
}

/// `∏ (x + b_i y + c_i z + e_i)`; each factor has positive imaginary part
/// on the upper half planes, so the product never vanishes there.
pub fn gen_polypos3(count: usize, spec: &GeneratorSpec) -> Result<MultiPoly> {
    let spec = GeneratorSpec { size: count, ..spec.clone() };
    let mut p = Params::new(&spec)?;
    let v = Vars::new(&["x", "y", "z"]);
    let mut f = MultiPoly::one(&v, Domain::Rational);
    for _ in 0..count {
        let (b, c, e) = (p.next(), p.next(), p.next());
        let lin = q(&v, vec![(vec![1, 0, 0], BigRational::one()), (vec![0, 1, 0], b), (vec![0, 0, 1], c), (vec![0, 0, 0], e)]);
        f = &f * &lin;
    }
    Ok(f)
}

/// An interlacing pair `(f, g)` with `deg f = degree`, `deg g = degree - 1`.
/// Alternating mode sorts `2·degree - 1` distinct positive values and hands
/// them out in turn, so the roots `-r` alternate.
pub fn gen_interlacing_pair(degree: usize, spec: &GeneratorSpec, mode: PairMode) -> Result<(MultiPoly, MultiPoly)> {
    let spec = GeneratorSpec { size: degree, ..spec.clone() };
    let mut p = Params::new(&spec)?;
    let v = Vars::new(&["x"]);
    match mode {
        PairMode::ShiftedCopy => {
            let roots: Vec<BigRational> = (0..degree - 1).map(|_| p.next()).collect();
            let g = product_of_roots(&v, &roots);
            Ok((&product_of_roots(&v, &[BigRational::one()]) * &g, g))
        }
        PairMode::Alternating => {
            let mut vals: Vec<BigRational> = Vec::with_capacity(2 * degree - 1);
            let mut attempts = 0;
            while vals.len() < 2 * degree - 1 {
                let x = p.next();
                if !vals.contains(&x) {
                    vals.push(x);
                }
                attempts += 1;
                if attempts > 1000 * degree {
                    return Err(Error::InvalidArgument("parameter range too narrow for distinct roots".into()));
                }
            }
            vals.sort();
            let f_roots: Vec<_> = vals.iter().step_by(2).cloned().collect();
            let g_roots: Vec<_> = vals.iter().skip(1).step_by(2).cloned().collect();
            Ok((product_of_roots(&v, &f_roots), product_of_roots(&v, &g_roots)))
        }
    }
}
