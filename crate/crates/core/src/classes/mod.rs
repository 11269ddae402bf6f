//! Membership tests for stable, real-rooted, 𝒫_1 and interlacing
//! polynomials, positive-orthant stability sampling and upper-half-plane
//! zero search.

pub mod intpoly;
mod rooted;
pub mod roots;
mod stability;
mod upper;
mod verdict;

pub use rooted::{in_polypos1, interlaces, is_real_rooted, roots_alternate, IMAG_TOL, INTERLACE_TOL};
pub use roots::{roots, RootSet, RESIDUAL_THRESHOLD};
pub use stability::{is_stable, routh_stable, stable_on_positive_orthant, OrthantGrid, RouthTable};
pub use upper::{upper_refute, ZERO_TOL};
pub use verdict::{format_complex, parse_complex, ClassVerdict, Method, Status, Witness};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::{Coef, Domain, MultiPoly, Vars};
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn poly(c: &[i64]) -> MultiPoly {
        MultiPoly::univariate("x", c)
    }

    fn arb_poly() -> impl Strategy<Value = MultiPoly> {
        (1usize..=10)
            .prop_flat_map(|d| (proptest::collection::vec(-9i64..=9, d), 1i64..=9))
            .prop_map(|(mut c, lead)| {
                c.push(lead);
                poly(&c)
            })
    }

    /// `∏ (x + a_i)` with positive rational `a_i`.
    fn arb_negative_rooted() -> impl Strategy<Value = MultiPoly> {
        proptest::collection::vec((1i64..=40, 1i64..=8), 1..=8).prop_map(|fs| {
            let v = Vars::new(&["x"]);
            fs.into_iter().fold(MultiPoly::one(&v, Domain::Rational), |acc, (n, d)| {
                let lin = MultiPoly::from_terms(&v, Domain::Rational, [(vec![1], Coef::ratio(1, 1)), (vec![0], Coef::ratio(n, d))])
                    .unwrap();
                &acc * &lin
            })
        })
    }

    /// Root alternation on exact root lists: `f_1 ≤ g_1 ≤ f_2 ≤ ...` when
    /// `f` has one more root, `g_1 ≤ f_1 ≤ g_2 ≤ ...` when the counts agree.
    fn alternation_oracle(f: &[i64], g: &[i64]) -> bool {
        let (mut f, mut g) = (f.to_vec(), g.to_vec());
        f.sort();
        g.sort();
        let merged: Vec<i64> = if f.len() == g.len() + 1 {
            (0..f.len()).flat_map(|i| std::iter::once(f[i]).chain(g.get(i).copied())).collect()
        } else {
            (0..g.len()).flat_map(|i| [g[i], f[i]]).collect()
        };
        merged.windows(2).all(|w| w[0] <= w[1])
    }

    fn arb_real_rooted(max: usize) -> impl Strategy<Value = MultiPoly> {
        proptest::collection::vec(-12i64..=12, 1..=max).prop_map(|rs| {
            let v = Vars::new(&["x"]);
            rs.into_iter().fold(MultiPoly::one(&v, Domain::Rational), |acc, r| &acc * &poly(&[-r, 2]))
        })
    }

    fn from_roots(rs: &[i64]) -> MultiPoly {
        let v = Vars::new(&["x"]);
        rs.iter().fold(MultiPoly::one(&v, Domain::Rational), |acc, &r| &acc * &poly(&[-r, 1]))
    }

    /// Root lists for `f` and `g` with `deg f ∈ {deg g, deg g + 1}`.
    fn arb_roots() -> impl Strategy<Value = (Vec<i64>, Vec<i64>)> {
        (1usize..=5, any::<bool>()).prop_flat_map(|(dg, plus)| {
            let df = if plus { dg + 1 } else { dg };
            (proptest::collection::vec(-6i64..=6, df), proptest::collection::vec(-6i64..=6, dg))
        })
    }

    fn arb_pair() -> impl Strategy<Value = (MultiPoly, MultiPoly)> {
        arb_roots().prop_map(|(fr, gr)| (from_roots(&fr), from_roots(&gr)))
    }

    #[test]
    fn oracle_self_check() {
        assert!(alternation_oracle(&[-3, -1], &[-2]));
        assert!(!alternation_oracle(&[-2, -1], &[-4]));
        assert!(alternation_oracle(&[-1], &[-2]));
        assert!(!alternation_oracle(&[-2], &[-1]));
        assert!(alternation_oracle(&[-1, -1], &[-1]));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn routh_agrees_with_is_stable(f in arb_poly()) {
            let r = routh_stable(&f).unwrap();
            let s = is_stable(&f, 0.0).unwrap();
            match r.status {
                Status::Member => prop_assert_eq!(s.status, Status::Member),
                Status::NonMember => prop_assert_eq!(s.status, Status::NonMember),
                _ => {}
            }
        }

        #[test]
        fn routh_agrees_with_roots(f in arb_poly()) {
            let r = routh_stable(&f).unwrap();
            if let Ok(rs) = roots(&f) {
                let max_re = rs.flat().iter().fold(f64::NEG_INFINITY, |m, z| m.max(z.re));
                match r.status {
                    Status::Member => prop_assert!(max_re < 1e-9),
                    Status::NonMember => prop_assert!(max_re > -1e-9),
                    _ => {}
                }
            }
        }

        #[test]
        fn stability_ignores_sign(f in arb_poly()) {
            prop_assert_eq!(is_stable(&f, 0.0).unwrap().status, is_stable(&-&f, 0.0).unwrap().status);
        }

        #[test]
        fn non_member_witness_rechecks(f in arb_poly()) {
            let v = is_stable(&f, 0.0).unwrap();
            if v.status == Status::NonMember {
                let w = v.witness.unwrap();
                prop_assert!(w.point[0].re > 0.0);
            }
        }

        #[test]
        fn sturm_agrees_on_real_products(f in arb_real_rooted(9)) {
            prop_assert_eq!(is_real_rooted(&f).unwrap().status, Status::Member);
        }

        #[test]
        fn sturm_agrees_with_roots(f in arb_poly()) {
            let exact = is_real_rooted(&f).unwrap().status;
            if let Ok(rs) = roots(&f) {
                let max_im = rs.flat().iter().fold(0.0f64, |m, z| m.max(z.im.abs() / z.norm().max(1.0)));
                // skip inputs the numeric side cannot separate
                if !(1e-7..=1e-3).contains(&max_im) {
                    prop_assert_eq!(exact == Status::Member, max_im < 1e-7);
                }
            }
        }

        #[test]
        fn products_of_positive_linear_factors_are_polypos(f in arb_negative_rooted()) {
            prop_assert_eq!(in_polypos1(&f).unwrap().status, Status::Member);
        }

        #[test]
        fn interlacing_matches_alternation((fr, gr) in arb_roots()) {
            let (f, g) = (from_roots(&fr), from_roots(&gr));
            let v = interlaces(&f, &g).unwrap();
            let expect = alternation_oracle(&fr, &gr);
            prop_assert_eq!(v.status == Status::Member, expect);
            if v.status == Status::NonMember {
                let w = v.witness.unwrap();
                prop_assert!(w.point.iter().all(|z| z.im > 0.0));
            }
        }

        #[test]
        fn interlacing_scale_invariant((f, g) in arb_pair(), a in 1i64..20, b in 1i64..20) {
            let v = interlaces(&f, &g).unwrap().status;
            let fa = f.scale(&Coef::ratio(a, 3));
            let gb = g.scale(&Coef::ratio(b, 7));
            prop_assert_eq!(interlaces(&fa, &gb).unwrap().status, v);
        }
    }

    #[test]
    fn verdict_json_for_unstable_quadratic() {
        let v = is_stable(&poly(&[1, -1, 1]), 0.0).unwrap();
        let back: ClassVerdict = serde_json::from_str(&v.to_json()).unwrap();
        assert_eq!(back.status, Status::NonMember);
        let z = back.witness.unwrap().point[0];
        assert!((z - Complex64::new(0.5, 0.75f64.sqrt())).norm() < 1e-9);
    }
}
