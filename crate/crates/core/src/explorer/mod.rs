//! Walk generation, the invariant suite, bounded distance queries and
//! campaigns.

pub mod bfs;
pub mod campaign;
pub mod generate;
pub mod report;
pub mod suite;
pub mod walks;

pub use bfs::{bfs_distance, Distance};
pub use campaign::{fuzz_trial, run_exhaustive, run_fuzz, trial_seeds, FuzzConfig, FuzzPreset};
pub use generate::{gen_matrix, gen_matrix_with, MatrixMode};
pub use report::{
    CampaignReport, CheckKind, CheckStatus, Checks, Replay, Summary, TrialReport, TrialStatus,
    Witness,
};
pub use suite::{run_check_suite, SuiteConfig};
pub use walks::{count_reduced_walks, enumerate_ball, enumerate_walks, maximal_walks, random_walk};
