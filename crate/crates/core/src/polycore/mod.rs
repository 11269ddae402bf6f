//! Exact and floating polynomial arithmetic, coefficient slicing and
//! polynomial-matrix determinants.

pub mod coef;
pub mod json;
pub mod matrix;
pub mod poly;

pub use coef::{Coef, Domain};
pub use matrix::{PolyMatrix, DEFAULT_DET_CAP};
pub use poly::{recompose, CoefficientSlice, Monomial, MultiPoly, Vars};

use crate::error::Result;

/// Toeplitz truncation built from the coefficients of `f` in `var`:
/// entry `(r, c)` is `f_{c-r}`, a polynomial in the remaining variables.
pub fn toeplitz(f: &MultiPoly, var: &str, rows: usize, cols: usize) -> Result<PolyMatrix> {
    let slice = f.slice(var)?;
    PolyMatrix::toeplitz(&slice.parts, &slice.remaining_vars(), f.domain(), rows, cols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use num_rational::BigRational;
    use proptest::prelude::*;

    #[test]
    fn sliced_toeplitz() {
        let f = MultiPoly::parse("(x+y)^2", &Vars::new(&["x", "y"])).unwrap();
        let m = toeplitz(&f, "y", 2, 3).unwrap();
        let vx = Vars::new(&["x"]);
        let e = |s: &str| MultiPoly::parse(s, &vx).unwrap();
        let expected = PolyMatrix::from_rows(vec![
            vec![e("x^2"), e("2*x"), e("1")],
            vec![e("0"), e("x^2"), e("2*x")],
        ])
        .unwrap();
        assert_eq!(m, expected);
    }

    #[test]
    fn pencil_determinant_at_unit_point() {
        let v = Vars::new(&["x", "y"]);
        let f = MultiPoly::parse(
            "1 + 24*x + 16*x^2 + 2*x^3 + 30*y + 164*x*y + 62*x^2*y + 22*y^2 + 64*x*y^2 + 4*y^3",
            &v,
        )
        .unwrap();
        let one = BigRational::from_integer(1.into());
        // the coefficient sum, and det [[19,16,15],[16,19,17],[15,17,19]]
        let m = PolyMatrix::from_integers(&[vec![19, 16, 15], vec![16, 19, 17], vec![15, 17, 19]]).unwrap();
        let direct = m.det().unwrap().constant_value().unwrap().as_rational().unwrap().clone();
        assert_eq!(direct, BigRational::from_integer(389.into()));
        assert_eq!(f.evaluate_rational(&[one.clone(), one]).unwrap(), direct);
        let z = f.evaluate(&[Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]).unwrap();
        assert_eq!(z, Complex64::new(389.0, 0.0));
    }

    fn arb_poly(arity: usize) -> impl Strategy<Value = MultiPoly> {
        let names = ["x", "y", "z"];
        proptest::collection::vec((proptest::collection::vec(0u32..=8, arity), -9i64..=9, 1i64..=4), 0..12).prop_map(
            move |ts| {
                let vars = Vars::new(&names[..arity]);
                let terms = ts
                    .into_iter()
                    .filter(|(e, _, _)| e.iter().sum::<u32>() <= 8)
                    .map(|(e, n, d)| (e, Coef::ratio(n, d)));
                MultiPoly::from_terms(&vars, Domain::Rational, terms).unwrap()
            },
        )
    }

    fn arb_any_poly() -> impl Strategy<Value = MultiPoly> {
        prop_oneof![arb_poly(1), arb_poly(2), arb_poly(3)]
    }

    fn arb_matrix(n: usize) -> impl Strategy<Value = PolyMatrix> {
        proptest::collection::vec(arb_poly(2), n * n).prop_map(move |es| {
            let es = es
                .into_iter()
                .map(|e| {
                    // keep entries small so the oracle stays quick
                    let t: Vec<_> = e.terms().take(3).map(|(m, c)| (m.exps().to_vec(), c.clone())).collect();
                    MultiPoly::from_terms(e.vars(), Domain::Rational, t).unwrap()
                })
                .collect();
            PolyMatrix::new(n, n, es).unwrap()
        })
    }

    /// Full permutation expansion, independent of the elimination code.
    fn permutation_det(m: &PolyMatrix) -> MultiPoly {
        let n = m.rows();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut acc = MultiPoly::zero(m.vars(), m.domain());
        fn rec(k: usize, perm: &mut Vec<usize>, m: &PolyMatrix, acc: &mut MultiPoly) {
            let n = perm.len();
            if k == n {
                let inversions = (0..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .filter(|&(i, j)| perm[i] > perm[j])
                    .count();
                let mut t = MultiPoly::one(m.vars(), m.domain());
                for (r, &c) in perm.iter().enumerate() {
                    t = &t * m.get(r, c);
                }
                *acc = if inversions % 2 == 0 { &*acc + &t } else { &*acc - &t };
                return;
            }
            for i in k..n {
                perm.swap(k, i);
                rec(k + 1, perm, m, acc);
                perm.swap(k, i);
            }
        }
        rec(0, &mut perm, m, &mut acc);
        acc
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn slice_recompose_identity(p in arb_any_poly(), which in 0usize..3) {
            let idx = which % p.arity();
            let s = p.slice_at(idx);
            prop_assert_eq!(s.recompose(), p);
        }

        #[test]
        fn hadamard_commutes_and_associates(a in arb_poly(1), b in arb_poly(1), c in arb_poly(1)) {
            prop_assert_eq!(a.hadamard(&b).unwrap(), b.hadamard(&a).unwrap());
            prop_assert_eq!(
                a.hadamard(&b).unwrap().hadamard(&c).unwrap(),
                a.hadamard(&b.hadamard(&c).unwrap()).unwrap()
            );
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn det_matches_permutation_oracle(m in (1usize..=5).prop_flat_map(arb_matrix)) {
            prop_assert_eq!(m.det().unwrap(), permutation_det(&m));
        }

        #[test]
        fn det_with_repeated_row_vanishes(m in arb_matrix(4), src in 0usize..4, dst in 0usize..4) {
            prop_assume!(src != dst);
            let mut rows = m.to_rows();
            rows[dst] = rows[src].clone();
            let dup = PolyMatrix::from_rows(rows).unwrap();
            prop_assert!(dup.det().unwrap().is_zero());
        }

        #[test]
        fn det_commutes_with_evaluation(m in arb_matrix(3), s in -20i64..20, t in 1i64..20, u in -20i64..20) {
            let pt = [BigRational::new(s.into(), t.into()), BigRational::new(u.into(), 7.into())];
            let numeric: Vec<Vec<BigRational>> = m
                .to_rows()
                .iter()
                .map(|row| row.iter().map(|e| e.evaluate_rational(&pt).unwrap()).collect())
                .collect();
            prop_assert_eq!(m.det().unwrap().evaluate_rational(&pt).unwrap(), matrix::det_rational(numeric));
        }
    }
}
