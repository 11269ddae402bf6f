use super::*;
use crate::polycore::{Coef, Domain, Vars};
use proptest::prelude::*;

fn up(c: &[i64]) -> MultiPoly {
    MultiPoly::univariate("x", c)
}

fn arb_coeffs(max_deg: usize) -> impl Strategy<Value = Vec<i64>> {
    (0..=max_deg).prop_flat_map(|d| (proptest::collection::vec(-20i64..=20, d), 1i64..=20)).prop_map(|(mut c, l)| {
        c.push(l);
        c
    })
}

fn arb_bivariate(max_deg: u32) -> impl Strategy<Value = MultiPoly> {
    proptest::collection::vec((0..=max_deg, 0..=max_deg, -9i64..=9), 1..10).prop_map(|ts| {
        let v = Vars::new(&["x", "y"]);
        let p = MultiPoly::from_terms(&v, Domain::Rational, ts.into_iter().map(|(a, b, c)| (vec![a, b], Coef::from_i64(Domain::Rational, c))))
            .unwrap();
        if p.is_zero() {
            MultiPoly::one(&v, Domain::Rational)
        } else {
            p
        }
    })
}

/// Leibniz expansion over all permutations.
fn leibniz(n: usize, entry: &dyn Fn(usize, usize) -> MultiPoly, vars: &Vars) -> MultiPoly {
    fn heap(k: usize, perm: &mut Vec<usize>, sign: i8, out: &mut Vec<(Vec<usize>, i8)>) {
        if k == perm.len() {
            out.push((perm.clone(), sign));
            return;
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            heap(k + 1, perm, if i == k { sign } else { -sign }, out);
            perm.swap(k, i);
        }
    }
    let mut perms = Vec::new();
    heap(0, &mut (0..n).collect(), 1, &mut perms);
    let mut acc = MultiPoly::zero(vars, Domain::Rational);
    for (p, s) in perms {
        let mut t = MultiPoly::one(vars, Domain::Rational);
        for (r, &c) in p.iter().enumerate() {
            t = &t * &entry(r, c);
        }
        acc = if s > 0 { &acc + &t } else { &acc - &t };
    }
    acc
}

fn coeff_at(c: &[i64], j: i64) -> i64 {
    if j < 0 {
        0
    } else {
        c.get(j as usize).copied().unwrap_or(0)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn tk_is_hadamard_square_beyond_half_degree(c in arb_coeffs(12), extra in 0usize..4) {
        let f = up(&c);
        let n = c.len() - 1;
        let k = n / 2 + 1 + extra;
        prop_assert_eq!(tk_transform(&f, k).unwrap().raw, f.hadamard(&f).unwrap());
    }

    #[test]
    fn hankel_band_one_is_q1(c in arb_coeffs(10)) {
        let f = up(&c);
        prop_assert_eq!(hankel_band_transform(&f, 1).unwrap(), q1_transform(&f).unwrap());
    }

    #[test]
    fn hankel_band_matches_leibniz(c in arb_coeffs(6), d in 1usize..=3) {
        let f = up(&c);
        let got = hankel_band_transform(&f, d).unwrap().raw;
        let e = Vars::empty();
        let want: Vec<i64> = (0..c.len() as i64)
            .map(|i| {
                let det = leibniz(d + 1, &|r, col| MultiPoly::constant(&e, Coef::from_i64(Domain::Rational, coeff_at(&c, i - r as i64 + col as i64))), &e);
                det.constant_value().map(|v| v.to_f64() as i64).unwrap_or(0)
            })
            .collect();
        prop_assert_eq!(got, up(&want));
    }

    #[test]
    fn minor_matrix_first_row_is_q1(c in arb_coeffs(8), pad in 0usize..3) {
        let f = up(&c);
        let size = c.len() + 2 + pad;
        let m = toeplitz_minor_matrix(&f, 2, size).unwrap();
        let q = q1_transform(&f).unwrap().raw;
        for j in 0..size {
            prop_assert_eq!(m.get(0, j).constant_value().unwrap(), q.coeff(&[j as u32]));
        }
    }

    #[test]
    fn pair_with_shifted_copy_is_negated_q1(c in arb_coeffs(10)) {
        let g = up(&c);
        let fg = &up(&[1, 1]) * &g;
        prop_assert_eq!(pair_transform(&fg, &g).unwrap().raw, -&q1_transform(&g).unwrap().raw);
    }

    #[test]
    fn bivariate_linear_in_y_is_pair(a in arb_coeffs(8), b in arb_coeffs(8)) {
        let v = Vars::new(&["x", "y"]);
        let lift = |c: &[i64], ye: u32| MultiPoly::from_terms(&v, Domain::Rational, c.iter().enumerate().map(|(i, &x)| (vec![i as u32, ye], Coef::from_i64(Domain::Rational, x)))).unwrap();
        let f = &lift(&a, 0) + &lift(&b, 1);
        prop_assert_eq!(bivariate_det_transform(&f, 1).unwrap().raw, pair_transform(&up(&a), &up(&b)).unwrap().raw);
    }

    #[test]
    fn block_det_order_one_is_identity(ts in proptest::collection::vec((0u32..4, 0u32..4, 0u32..4, -9i64..=9), 1..10)) {
        let v = Vars::new(&["x", "y", "z"]);
        let f = MultiPoly::from_terms(&v, Domain::Rational, ts.into_iter().map(|(a, b, c, k)| (vec![a, b, c], Coef::from_i64(Domain::Rational, k)))).unwrap();
        prop_assume!(!f.is_zero());
        prop_assert_eq!(block_det_3var(&f, 1).unwrap().raw, f);
    }

    #[test]
    fn block_det_matches_leibniz(f in arb_bivariate(3), k in 2usize..=3) {
        // lift f(x, y) to three variables with z-coefficients taken from y
        let v3 = Vars::new(&["x", "y", "z"]);
        let g = &f.with_vars(&Vars::new(&["x", "y"])).unwrap().with_vars(&v3).unwrap()
            * &MultiPoly::parse("1 + z + 2*y*z", &v3).unwrap();
        let got = block_det_3var(&g, k).unwrap().raw;
        let vx = Vars::new(&["x"]);
        let fij = |i: usize, j: usize| -> MultiPoly {
            let mut acc = MultiPoly::zero(&vx, Domain::Rational);
            for (m, c) in g.terms() {
                if m.exps()[2] as usize == i && m.exps()[1] as usize == j {
                    let t = MultiPoly::from_terms(&vx, Domain::Rational, [(vec![m.exps()[0]], c.clone())]).unwrap();
                    acc = &acc + &t;
                }
            }
            acc
        };
        let mut want = MultiPoly::zero(&v3, Domain::Rational);
        let dz = g.degree_in(2).unwrap_or(0) as usize;
        let dy = g.degree_in(1).unwrap_or(0) as usize;
        for i in 0..=dz {
            for j in 0..=dy {
                let det = leibniz(k, &|r, s| fij(i + r, j + s), &vx);
                let mono = MultiPoly::from_terms(&v3, Domain::Rational, [(vec![0, j as u32, i as u32], Coef::one(Domain::Rational))]).unwrap();
                want = &want + &(&det.with_vars(&v3).unwrap() * &mono);
            }
        }
        prop_assert_eq!(got, want);
    }

    #[test]
    fn coeff_hankel_of_shift_is_scaled_derivative_hankel(c in arb_coeffs(6), d in 1usize..=3) {
        let f = up(&c);
        let v = Vars::new(&["x", "y"]);
        let shifted = f.with_vars(&v).unwrap().compose("x", &MultiPoly::parse("x+y", &v).unwrap()).unwrap();
        prop_assert_eq!(coeff_hankel(&shifted, d, 0).unwrap().raw, derivative_hankel(&f, d, true).unwrap().raw);
    }

    #[test]
    fn coeff_hankel_matches_leibniz(f in arb_bivariate(4), d in 0usize..=2, i in 0usize..=2) {
        let s = f.slice_at(1);
        let vx = Vars::new(&["x"]);
        let want = leibniz(d + 1, &|r, c| s.part((i + r + c) as i64), &vx);
        prop_assert_eq!(coeff_hankel(&f, d, i).unwrap().raw, want);
    }

    #[test]
    fn normalization_relation(c in arb_coeffs(8), d in 1usize..=2) {
        let out = hankel_band_transform(&up(&c), d).unwrap();
        let scaled = out.result.scale(&Coef::from_i64(Domain::Rational, out.normalization_sign as i64));
        prop_assert_eq!(scaled, out.raw.clone());
        prop_assert!(out.result.is_zero() || out.result.leading_sign_in(0) > 0);
    }
}

#[test]
fn ids_round_trip() {
    for id in TransformId::ALL {
        assert_eq!(id.as_str().parse::<TransformId>().unwrap(), id);
        assert_eq!(serde_json::to_string(&id).unwrap(), format!("\"{}\"", id.as_str()));
    }
    assert!("q6".parse::<TransformId>().is_err());
}

#[test]
fn apply_dispatch() {
    let f = up(&[1, 3, 3, 1]);
    let p = TransformParams { k: 2, ..TransformParams::default() };
    match apply(TransformId::Tk, Some(&f), None, &p).unwrap() {
        Transformed::Poly(o) => assert_eq!(o.result, up(&[1, 9, 9, 1])),
        other => panic!("{other:?}"),
    }
    assert!(apply(TransformId::Q2b, Some(&f), None, &p).is_err());
    let one = num_rational::BigRational::from_integer(1.into());
    let q7 = TransformParams { factors: vec![(one.clone(), one.clone()); 3], size: Some(3), ..TransformParams::default() };
    match apply(TransformId::Q7, None, None, &q7).unwrap() {
        // (x+y+1)^3 arranged for d = 2: rows (a_{i2}, a_{i1}, a_{i0})
        Transformed::Matrix(m) => {
            assert_eq!(m, PolyMatrix::from_integers(&[vec![3, 3, 1], vec![3, 6, 3], vec![0, 3, 3]]).unwrap())
        }
        other => panic!("{other:?}"),
    }
}
