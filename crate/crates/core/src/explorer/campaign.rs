//! Exhaustive and randomized campaigns. Trials run in parallel and are
//! merged by index, so reports do not depend on scheduling.

use std::time::Instant;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::input::MatrixFile;
use crate::seed::{CoeffPreset, ExchangeMatrix, Seed};

use super::generate::{gen_matrix_with, MatrixMode};
use super::report::{CampaignReport, Summary, TrialReport};
use super::suite::{run_check_suite, SuiteConfig};
use super::walks::{maximal_walks, random_walk};

/// Checks every maximal reduced walk of length `depth` from `root`.
pub fn run_exhaustive(root: &Seed, depth: usize, cfg: &SuiteConfig) -> CampaignReport {
    let started = Instant::now();
    let walks = maximal_walks(root.rank(), depth);
    let trials: Vec<TrialReport> = walks
        .par_iter()
        .enumerate()
        .map(|(index, walk)| {
            let mut r = run_check_suite(root, walk, cfg);
            r.index = index;
            r
        })
        .collect();
    let config = json!({
        "command": "check",
        "matrix": MatrixFile::from_matrix(root.matrix()),
        "depth": depth,
        "term_cap": cfg.limits.per_polynomial,
        "seed_term_cap": cfg.limits.per_seed,
    });
    finish(config, trials, cfg, started)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FuzzPreset {
    Trivial,
    Principal,
}

#[derive(Clone, Debug)]
pub struct FuzzConfig {
    pub rank: usize,
    pub b_max: i64,
    pub depth: usize,
    pub trials: usize,
    pub seed: u64,
    pub mode: MatrixMode,
    pub preset: FuzzPreset,
    pub suite: SuiteConfig,
}

/// Per-trial seeds, drawn sequentially from the master seed.
pub fn trial_seeds(master: u64, trials: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    (0..trials).map(|_| rng.next_u64()).collect()
}

/// One fuzz trial, fully determined by `(cfg, trial_seed)`.
pub fn fuzz_trial(cfg: &FuzzConfig, index: usize, trial_seed: u64) -> TrialReport {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
    let top = gen_matrix_with(cfg.rank, cfg.b_max, cfg.mode, &mut rng);
    let walk = random_walk(cfg.rank, cfg.depth, &mut rng);
    let preset = match cfg.preset {
        FuzzPreset::Trivial => CoeffPreset::Trivial,
        FuzzPreset::Principal => CoeffPreset::Principal,
    };
    let matrix = ExchangeMatrix::with_coefficients(top.top_block(), &preset)
        .expect("generated matrices are skew-symmetrizable");
    let mut r = run_check_suite(&Seed::root(matrix), &walk, &cfg.suite);
    r.index = index;
    r.rng_seed = Some(trial_seed);
    r
}

pub fn run_fuzz(cfg: &FuzzConfig) -> CampaignReport {
    let started = Instant::now();
    let seeds = trial_seeds(cfg.seed, cfg.trials);
    let trials: Vec<TrialReport> = seeds
        .par_iter()
        .enumerate()
        .map(|(index, &s)| fuzz_trial(cfg, index, s))
        .collect();
    let config = json!({
        "command": "fuzz",
        "rank": cfg.rank,
        "bmax": cfg.b_max,
        "depth": cfg.depth,
        "trials": cfg.trials,
        "seed": cfg.seed,
        "mode": cfg.mode,
        "coeffs": cfg.preset,
        "term_cap": cfg.suite.limits.per_polynomial,
        "seed_term_cap": cfg.suite.limits.per_seed,
    });
    finish(config, trials, &cfg.suite, started)
}

fn finish(
    config: serde_json::Value,
    trials: Vec<TrialReport>,
    cfg: &SuiteConfig,
    started: Instant,
) -> CampaignReport {
    let summary = Summary::of(&trials);
    CampaignReport {
        config,
        trials,
        summary,
        wall_time_ms: cfg.timings.then(|| started.elapsed().as_millis() as u64),
    }
}
