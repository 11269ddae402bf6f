//! Conjecture fuzzing: generators, the registry of conjectured class
//! preservations, replayable trial runs and the identity suite.

pub mod generators;
mod identities;
mod trials;

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

pub use generators::{
    gen_interlacing_pair, gen_linear_factors, gen_polypos1, gen_polypos2, gen_polypos3, psd_pencil, GeneratorClass,
    GeneratorSpec, PairMode, ParamDist, Polypos2Kind,
};
pub use identities::{paper_identity_suite, run_identity_check, SubCheck, SuiteReport, IDENTITY_CHECKS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConjectureInfo {
    pub id: &'static str,
    pub transform: &'static str,
    pub target: &'static str,
    /// Notion of stability or positivity the target uses.
    pub notion: &'static str,
    /// Exploratory suites record data rather than test a claim.
    pub exploratory: bool,
}

const fn info(id: &'static str, transform: &'static str, target: &'static str, notion: &'static str) -> ConjectureInfo {
    ConjectureInfo { id, transform, target, notion, exploratory: false }
}

const fn explore(id: &'static str, transform: &'static str, target: &'static str, notion: &'static str) -> ConjectureInfo {
    ConjectureInfo { id, transform, target, notion, exploratory: true }
}

pub const REGISTRY: &[ConjectureInfo] = &[
    info("q1", "q1", "polypos1", "negative real roots, positive coefficients"),
    info("q2", "tk", "polypos1", "negative real roots, positive coefficients; every k <= deg"),
    info("q2a", "q2a", "polypos1", "negative real roots, positive coefficients; d <= 3"),
    info("q2b", "q2b", "polypos1", "negative real roots, positive coefficients"),
    info("q2c", "q2c", "polypos1", "negative real roots, positive coefficients; d <= 2"),
    info("q2d", "q2d", "totally-positive", "weak (minors >= 0); truncation deg+d+2"),
    info("q3_stable", "q3", "stable-on-orthant", "closed left half plane at sampled positive y, z; k = 2"),
    info("q3_sign", "q3", "same-sign-coefficients", "exact; k <= 4"),
    info("q4", "q4", "stable", "closed left half plane; d <= 2, i <= 2"),
    info("q4a", "q4a", "stable", "closed left half plane; d <= 2"),
    info("q4a_scaled", "q4a", "stable", "closed left half plane; factorial-scaled entries, d <= 2"),
    info("q5", "q5minor", "totally-stable", "closed left half plane; minors to order 3, truncation 6"),
    info("q7_tp", "q7", "totally-positive", "weak (minors >= 0), strict also recorded; orders to 3"),
    explore("q2_interlacer", "tk", "common-interlacer", "candidate search among derivatives"),
    explore("q2_tk_pairs", "tk", "pairwise-interlacing", "records non-interlacing pairs"),
    explore("closure_stable", "-", "totally-stable-product", "closure outcome of random totally stable pairs"),
];

pub fn conjecture(id: &str) -> Result<&'static ConjectureInfo> {
    REGISTRY.iter().find(|c| c.id == id).ok_or_else(|| Error::UnknownConjecture(id.to_string()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabConfig {
    pub max_degree: usize,
    /// Factor cap for the three-variable suites.
    pub max_factors3: usize,
    pub q7_generator: Polypos2Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order_cap: Option<usize>,
    pub dist: ParamDist,
    /// Worker threads; `STABLEPOLY_THREADS` is used when unset.
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl Default for LabConfig {
    fn default() -> Self {
        LabConfig {
            max_degree: 8,
            max_factors3: 5,
            q7_generator: Polypos2Kind::LinearForms,
            order_cap: None,
            dist: ParamDist::default(),
            threads: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    NonMember,
    Undetermined,
    /// The transform produced the zero polynomial; nothing to test.
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub outcome: Outcome,
    pub input: Value,
    pub output: Value,
    pub verdict: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub trial: u64,
    pub seed: u64,
    #[serde(flatten)]
    pub outcome: TrialOutcome,
    /// Re-running the stored seed gave the identical outcome.
    pub replay_ok: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub pass: u64,
    pub non_member: u64,
    pub undetermined: u64,
    pub degenerate: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub conjecture: String,
    pub trials: u64,
    pub master_seed: u64,
    pub tally: Tally,
    pub failures: Vec<FailureRecord>,
    pub undetermined: Vec<FailureRecord>,
    pub config: LabConfig,
    #[serde(default)]
    pub runtime_ms: u64,
}

impl ConjectureReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization is infallible")
    }

    /// JSON without the wall-clock field, for byte comparison across runs.
    pub fn canonical_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serialization is infallible");
        if let Value::Object(m) = &mut v {
            m.remove("runtime_ms");
        }
        serde_json::to_string(&v).expect("value serialization is infallible")
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let row = |w: &mut csv::Writer<Vec<u8>>, r: [String; 8]| w.write_record(r).map_err(|e| Error::InvalidArgument(e.to_string()));
        row(&mut w, ["conjecture", "trials", "master_seed", "pass", "non_member", "undetermined", "degenerate", "runtime_ms"].map(String::from))?;
        let t = &self.tally;
        row(
            &mut w,
            [
                self.conjecture.clone(),
                self.trials.to_string(),
                self.master_seed.to_string(),
                t.pass.to_string(),
                t.non_member.to_string(),
                t.undetermined.to_string(),
                t.degenerate.to_string(),
                self.runtime_ms.to_string(),
            ],
        )?;
        let bytes = w.into_inner().map_err(|e| Error::InvalidArgument(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

/// Seed of trial `index`: a splitmix64 step on the master seed, offset by
/// the index.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Re-runs one trial from its seed.
pub fn replay(conjecture_id: &str, seed: u64, config: &LabConfig) -> Result<TrialOutcome> {
    let c = conjecture(conjecture_id)?;
    trials::run_trial(c.id, seed, config)
}

fn thread_count(config: &LabConfig) -> Option<usize> {
    config
        .threads
        .or_else(|| std::env::var("STABLEPOLY_THREADS").ok().and_then(|s| s.parse().ok()))
        .filter(|&n| n > 0)
}

pub fn run_conjecture(conjecture_id: &str, trials: u64, master_seed: u64, config: &LabConfig) -> Result<ConjectureReport> {
    let c = conjecture(conjecture_id)?;
    let start = Instant::now();
    let work = || -> Result<Vec<(u64, u64, TrialOutcome)>> {
        (0..trials)
            .into_par_iter()
            .map(|i| {
                let seed = trial_seed(master_seed, i);
                trials::run_trial(c.id, seed, config).map(|o| (i, seed, o))
            })
            .collect()
    };
    let outcomes = match thread_count(config) {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(work)?,
        None => work()?,
    };
    let mut report = ConjectureReport {
        conjecture: c.id.to_string(),
        trials,
        master_seed,
        tally: Tally::default(),
        failures: Vec::new(),
        undetermined: Vec::new(),
        config: config.clone(),
        runtime_ms: 0,
    };
    for (trial, seed, outcome) in outcomes {
        let t = &mut report.tally;
        match outcome.outcome {
            Outcome::Pass => t.pass += 1,
            Outcome::Degenerate => t.degenerate += 1,
            Outcome::NonMember | Outcome::Undetermined => {
                let replay_ok = trials::run_trial(c.id, seed, config).ok().as_ref() == Some(&outcome);
                let rec = FailureRecord { trial, seed, outcome, replay_ok };
                if rec.outcome.outcome == Outcome::NonMember {
                    t.non_member += 1;
                    report.failures.push(rec);
                } else {
                    t.undetermined += 1;
                    report.undetermined.push(rec);
                }
            }
        }
    }
    report.runtime_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}
