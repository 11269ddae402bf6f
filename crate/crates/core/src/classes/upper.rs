use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::roots;
use super::verdict::{ClassVerdict, Method, Witness};
use crate::polycore::MultiPoly;

/// `|f(point)| ≤ ZERO_TOL · scale` counts as a zero.
pub const ZERO_TOL: f64 = 1e-8;
const MIN_IMAG: f64 = 1e-9;

fn sample_upper(rng: &mut ChaCha8Rng) -> Complex64 {
    let theta = rng.random_range(0.05 * PI..0.95 * PI);
    let r = 10f64.powf(rng.random_range(-2.0..2.0));
    Complex64::from_polar(r, theta)
}

/// Looks for a zero of `f` with every coordinate in the open upper half
/// plane. All but one variable are sampled; the remaining one is solved
/// for. The first sample puts every sampled coordinate at `i`.
pub fn upper_refute(f: &MultiPoly, samples: usize, seed: u64) -> ClassVerdict {
    let d = f.arity();
    if f.is_zero() {
        let point = vec![Complex64::i(); d];
        return ClassVerdict::non_member(Method::Sampling, Some(Witness { point, value: Complex64::new(0.0, 0.0) }));
    }
    let Some(solve) = (0..d).find(|&i| f.degree_in(i).unwrap_or(0) > 0) else {
        return ClassVerdict::undetermined(Method::Sampling, "nonzero constant has no zeros");
    };
    let slice = f.slice_at(solve);
    let others_active = (0..d).any(|i| i != solve && f.degree_in(i).unwrap_or(0) > 0);
    let rounds = if others_active { samples.max(1) } else { 1 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for s in 0..rounds {
        let rest: Vec<Complex64> =
            (0..d - 1).map(|_| if s == 0 { Complex64::i() } else { sample_upper(&mut rng) }).collect();
        let coeffs: Vec<Complex64> =
            slice.parts.iter().map(|p| p.evaluate(&rest).unwrap_or_default()).collect();
        let Ok(zs) = roots::raw_roots(&coeffs) else { continue };
        for z in zs {
            if z.im <= MIN_IMAG * z.norm().max(1.0) {
                continue;
            }
            let mut point = rest.clone();
            point.insert(solve, z);
            let Ok(value) = f.evaluate(&point) else { continue };
            if value.norm() <= ZERO_TOL * f.evaluation_scale(&point) {
                return ClassVerdict::non_member(Method::Sampling, Some(Witness { point, value }));
            }
        }
    }
    ClassVerdict::undetermined(Method::Sampling, format!("no upper zero found in {rounds} samples"))
}
