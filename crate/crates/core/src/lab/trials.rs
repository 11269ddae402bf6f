use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::generators::{
    gen_interlacing_pair, gen_linear_factors, gen_polypos1, gen_polypos2, gen_polypos3, GeneratorClass, GeneratorSpec,
    PairMode, Polypos2Kind,
};
use super::{LabConfig, Outcome, TrialOutcome};
use crate::classes::{in_polypos1, interlaces, is_stable, stable_on_positive_orthant, ClassVerdict, OrthantGrid, Status};
use crate::error::Result;
use crate::polycore::{Coef, Domain, MultiPoly, PolyMatrix, Vars};
use crate::tpcheck::{is_totally_positive, is_totally_stable, product_closure_experiment, ClosureMode, MatrixClassVerdict, TpMode};
use crate::transforms::{
    bivariate_det_transform, block_det_3var, coeff_hankel, derivative_hankel, hankel_band_transform, pair_transform,
    q1_transform, q7_arrangement, q7_matrix, q7_product, tk_transform, toeplitz_minor_matrix, toeplitz_slice_matrix,
};

fn pj(p: &MultiPoly) -> Value {
    serde_json::to_value(p).expect("polynomial serialization is infallible")
}

fn mj(m: &PolyMatrix) -> Value {
    serde_json::to_value(m).expect("matrix serialization is infallible")
}

fn rat(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn factors_json(fs: &[(BigRational, BigRational)]) -> Value {
    Value::Array(fs.iter().map(|(b, c)| json!([rat(b), rat(c)])).collect())
}

fn outcome_of(status: Status) -> Outcome {
    match status {
        Status::Member | Status::MemberSampled => Outcome::Pass,
        Status::NonMember => Outcome::NonMember,
        Status::Undetermined => Outcome::Undetermined,
    }
}

fn class(input: Value, out: &MultiPoly, v: &ClassVerdict) -> TrialOutcome {
    TrialOutcome {
        outcome: outcome_of(v.status),
        input,
        output: pj(out),
        verdict: serde_json::to_value(v).expect("verdict serialization is infallible"),
    }
}

fn matrix(input: Value, m: &PolyMatrix, v: &MatrixClassVerdict) -> TrialOutcome {
    TrialOutcome {
        outcome: outcome_of(v.status),
        input,
        output: mj(m),
        verdict: serde_json::to_value(v).expect("verdict serialization is infallible"),
    }
}

fn degenerate(input: Value) -> TrialOutcome {
    TrialOutcome { outcome: Outcome::Degenerate, input, output: Value::Null, verdict: Value::Null }
}

/// First non-member, else first undetermined, else pass if anything was
/// tested.
fn combine(input: Value, parts: Vec<TrialOutcome>) -> TrialOutcome {
    for want in [Outcome::NonMember, Outcome::Undetermined] {
        if let Some(p) = parts.iter().find(|p| p.outcome == want) {
            return p.clone();
        }
    }
    if parts.iter().any(|p| p.outcome == Outcome::Pass) {
        TrialOutcome { outcome: Outcome::Pass, input, output: Value::Null, verdict: Value::Null }
    } else {
        degenerate(input)
    }
}

struct Trial<'a> {
    rng: ChaCha8Rng,
    cfg: &'a LabConfig,
}

impl Trial<'_> {
    fn spec(&mut self, class: GeneratorClass, size: usize) -> GeneratorSpec {
        GeneratorSpec { dist: self.cfg.dist.clone(), ..GeneratorSpec::new(class, size, self.rng.random()) }
    }

    fn polypos1(&mut self, min_degree: usize) -> Result<MultiPoly> {
        let deg = self.rng.random_range(min_degree..=self.cfg.max_degree.max(min_degree));
        let spec = self.spec(GeneratorClass::Polypos1, deg);
        gen_polypos1(deg, &spec)
    }

    fn factors(&mut self, max: usize) -> Result<Vec<(BigRational, BigRational)>> {
        let n = self.rng.random_range(1..=max.max(1));
        let spec = self.spec(GeneratorClass::Polypos2, n);
        gen_linear_factors(n, &spec)
    }
}

fn polypos1_target(input: Value, out: &MultiPoly) -> Result<TrialOutcome> {
    if out.is_zero() {
        return Ok(degenerate(input));
    }
    Ok(class(input, out, &in_polypos1(out)?))
}

fn stable_target(input: Value, out: &MultiPoly) -> Result<TrialOutcome> {
    if out.is_zero() {
        return Ok(degenerate(input));
    }
    Ok(class(input, out, &is_stable(out, 0.0)?))
}

pub(super) fn run_trial(id: &str, seed: u64, cfg: &LabConfig) -> Result<TrialOutcome> {
    let mut t = Trial { rng: ChaCha8Rng::seed_from_u64(seed), cfg };
    match id {
        "q1" => {
            let f = t.polypos1(1)?;
            polypos1_target(json!({ "f": pj(&f) }), &q1_transform(&f)?.result)
        }
        "q2" => {
            let f = t.polypos1(1)?;
            let n = f.degree_in(0).unwrap_or(0) as usize;
            let parts = (1..=n)
                .map(|k| polypos1_target(json!({ "f": pj(&f), "k": k }), &tk_transform(&f, k)?.result))
                .collect::<Result<Vec<_>>>()?;
            Ok(combine(json!({ "f": pj(&f) }), parts))
        }
        "q2a" => {
            let f = t.polypos1(1)?;
            let parts = (1..=3)
                .map(|d| polypos1_target(json!({ "f": pj(&f), "d": d }), &hankel_band_transform(&f, d)?.result))
                .collect::<Result<Vec<_>>>()?;
            Ok(combine(json!({ "f": pj(&f) }), parts))
        }
        "q2b" => {
            let deg = t.rng.random_range(1..=cfg.max_degree.max(1));
            let mode = if t.rng.random_range(0..4) == 0 { PairMode::ShiftedCopy } else { PairMode::Alternating };
            let spec = t.spec(GeneratorClass::InterlacingPair, deg);
            let (f, g) = gen_interlacing_pair(deg, &spec, mode)?;
            polypos1_target(json!({ "f": pj(&f), "g": pj(&g) }), &pair_transform(&f, &g)?.result)
        }
        "q2c" => {
            let fs = t.factors(cfg.max_degree)?;
            let f = q7_product(&fs)?;
            let parts = (1..=2)
                .map(|d| {
                    let input = json!({ "factors": factors_json(&fs), "d": d });
                    polypos1_target(input, &bivariate_det_transform(&f, d)?.result)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(combine(json!({ "factors": factors_json(&fs) }), parts))
        }
        "q2d" => {
            let f = t.polypos1(1)?;
            let d = t.rng.random_range(1..=3usize);
            let n = f.degree_in(0).unwrap_or(0) as usize;
            let m = toeplitz_minor_matrix(&f, d, n + d + 2)?;
            let v = is_totally_positive(&m, cfg.order_cap.unwrap_or(4), TpMode::Weak)?;
            Ok(matrix(json!({ "f": pj(&f), "d": d, "size": n + d + 2 }), &m, &v))
        }
        "q3_stable" => {
            let n = t.rng.random_range(1..=cfg.max_factors3.max(1));
            let spec = t.spec(GeneratorClass::Polypos3, n);
            let f = gen_polypos3(n, &spec)?;
            let out = block_det_3var(&f, 2)?.result;
            let grid = OrthantGrid { seed: t.rng.random(), ..OrthantGrid::default() };
            let input = json!({ "f": pj(&f), "k": 2 });
            if out.is_zero() {
                return Ok(degenerate(input));
            }
            Ok(class(input, &out, &stable_on_positive_orthant(&out, "x", &grid)?))
        }
        "q3_sign" => {
            let n = t.rng.random_range(1..=cfg.max_factors3.max(1));
            let spec = t.spec(GeneratorClass::Polypos3, n);
            let f = gen_polypos3(n, &spec)?;
            let parts = (1..=4)
                .map(|k| {
                    let raw = block_det_3var(&f, k)?.raw;
                    let input = json!({ "f": pj(&f), "k": k });
                    Ok(if raw.is_zero() {
                        degenerate(input)
                    } else {
                        let same = raw.all_coefficients_same_sign();
                        TrialOutcome {
                            outcome: if same { Outcome::Pass } else { Outcome::NonMember },
                            input,
                            output: pj(&raw),
                            verdict: json!({ "same_sign": same }),
                        }
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(combine(json!({ "f": pj(&f) }), parts))
        }
        "q4" => {
            let fs = t.factors(cfg.max_degree)?;
            let f = q7_product(&fs)?;
            let mut parts = Vec::new();
            for d in 1..=2 {
                for i in 0..=2 {
                    let input = json!({ "factors": factors_json(&fs), "d": d, "i": i });
                    parts.push(stable_target(input, &coeff_hankel(&f, d, i)?.result)?);
                }
            }
            Ok(combine(json!({ "factors": factors_json(&fs) }), parts))
        }
        "q4a" | "q4a_scaled" => {
            let f = t.polypos1(1)?;
            let scaled = id == "q4a_scaled";
            let parts = (1..=2)
                .map(|d| stable_target(json!({ "f": pj(&f), "d": d }), &derivative_hankel(&f, d, scaled)?.result))
                .collect::<Result<Vec<_>>>()?;
            Ok(combine(json!({ "f": pj(&f) }), parts))
        }
        "q5" => {
            let fs = t.factors(cfg.max_degree)?;
            let f = q7_product(&fs)?;
            let m = toeplitz_slice_matrix(&f, 6)?;
            let v = is_totally_stable(&m, cfg.order_cap.unwrap_or(3))?;
            Ok(matrix(json!({ "factors": factors_json(&fs), "size": 6 }), &m, &v))
        }
        "q7_tp" => {
            let (input, m) = match cfg.q7_generator {
                Polypos2Kind::LinearForms => {
                    let fs = t.factors(cfg.max_degree)?;
                    (json!({ "factors": factors_json(&fs) }), q7_matrix(&fs)?)
                }
                Polypos2Kind::PsdPencil => {
                    let n = t.rng.random_range(2..=cfg.max_degree.clamp(2, 4));
                    let spec = t.spec(GeneratorClass::PsdPencil, n);
                    let f = gen_polypos2(n, &spec, Polypos2Kind::PsdPencil)?;
                    (json!({ "f": pj(&f) }), q7_arrangement(&f, n)?)
                }
            };
            let cap = cfg.order_cap.unwrap_or(3);
            let weak = is_totally_positive(&m, cap, TpMode::Weak)?;
            let strict = is_totally_positive(&m, cap, TpMode::Strict)?;
            Ok(TrialOutcome {
                outcome: outcome_of(weak.status),
                input,
                output: mj(&m),
                verdict: json!({ "weak": weak, "strict": strict }),
            })
        }
        "q2_interlacer" => {
            let f = t.polypos1(2)?;
            let n = f.degree_in(0).unwrap_or(0) as usize;
            let ts = (1..=n).map(|k| Ok(tk_transform(&f, k)?.result)).collect::<Result<Vec<_>>>()?;
            let mut candidates = vec![("f'".to_string(), f.derivative_at(0, 1))];
            candidates.extend(ts.iter().enumerate().map(|(k, p)| (format!("T_{}'", k + 1), p.derivative_at(0, 1))));
            let mut found = None;
            for (name, g) in &candidates {
                let mut ok = true;
                for p in &ts {
                    if !interlaces(p, g)?.status.is_member() {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    found = Some(name.clone());
                    break;
                }
            }
            Ok(TrialOutcome {
                outcome: if found.is_some() { Outcome::Pass } else { Outcome::NonMember },
                input: json!({ "f": pj(&f) }),
                output: Value::Array(ts.iter().map(pj).collect()),
                verdict: json!({ "interlacer": found }),
            })
        }
        "q2_tk_pairs" => {
            let f = t.polypos1(2)?;
            let n = f.degree_in(0).unwrap_or(0) as usize;
            let ts = (1..=n).map(|k| Ok(tk_transform(&f, k)?.result)).collect::<Result<Vec<_>>>()?;
            for j in 0..n {
                for k in j + 1..n {
                    if ts[j] == ts[k] {
                        continue;
                    }
                    let either = interlaces(&ts[j], &ts[k])?.status.is_member() || interlaces(&ts[k], &ts[j])?.status.is_member();
                    if !either {
                        return Ok(TrialOutcome {
                            outcome: Outcome::NonMember,
                            input: json!({ "f": pj(&f), "j": j + 1, "k": k + 1 }),
                            output: json!([pj(&ts[j]), pj(&ts[k])]),
                            verdict: json!({ "interlace": false }),
                        });
                    }
                }
            }
            Ok(TrialOutcome { outcome: Outcome::Pass, input: json!({ "f": pj(&f) }), output: Value::Null, verdict: Value::Null })
        }
        "closure_stable" => {
            let a = random_totally_stable(&mut t)?;
            let b = random_totally_stable(&mut t)?;
            let (Some(a), Some(b)) = (a, b) else {
                return Ok(degenerate(Value::Null));
            };
            let r = product_closure_experiment(&a, &b, 3, ClosureMode::Stable)?;
            Ok(TrialOutcome {
                outcome: match r.closure_held {
                    Some(true) => Outcome::Pass,
                    Some(false) => Outcome::NonMember,
                    None => Outcome::Undetermined,
                },
                input: json!({ "a": mj(&a), "b": mj(&b) }),
                output: mj(&a.checked_mul(&b)?),
                verdict: serde_json::to_value(&r).expect("report serialization is infallible"),
            })
        }
        other => Err(crate::error::Error::UnknownConjecture(other.to_string())),
    }
}

/// A 3×3 matrix with diagonal `x + a_i` and off-diagonal entries that are
/// zero or positive constants, resampled until it is totally stable.
fn random_totally_stable(t: &mut Trial) -> Result<Option<PolyMatrix>> {
    let v = Vars::new(&["x"]);
    for _ in 0..50 {
        let spec = t.spec(GeneratorClass::Polypos1, 9);
        let params = gen_linear_factors(9, &spec)?;
        let mut k = 0;
        let m = PolyMatrix::from_fn(3, 3, |r, c| {
            k += 1;
            let (a, _) = &params[k - 1];
            if r == c {
                let lin = [Coef::Rational(a.clone()), Coef::one(Domain::Rational)];
                MultiPoly::from_coeffs(&v, 0, &lin, Domain::Rational)
            } else if t.rng.random_range(0..2) == 0 {
                MultiPoly::zero(&v, Domain::Rational)
            } else {
                MultiPoly::constant(&v, Coef::Rational(a.clone()))
            }
        })?;
        if is_totally_stable(&m, 3)?.status == Status::Member {
            return Ok(Some(m));
        }
    }
    Ok(None)
}
