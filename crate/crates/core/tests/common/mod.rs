#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

use cluster_core::explorer::{gen_matrix_with, MatrixMode};
use cluster_core::input::MatrixFile;
use cluster_core::ExchangeMatrix;
use rand::Rng;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("data")
        .join(name)
}

pub fn load(name: &str) -> ExchangeMatrix {
    MatrixFile::load(&data(name)).unwrap().to_matrix().unwrap()
}

/// Runs the `cluster` binary.
pub fn cluster(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cluster"))
        .args(args)
        .env_remove("CLUSTER_TERM_CAP")
        .env_remove("CLUSTER_SEED_TERM_CAP")
        .output()
        .expect("spawn cluster")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Random skew-symmetrizable `B` (either mode) with `0..=max_m` random
/// coefficient rows.
pub fn random_extended<R: Rng>(
    rng: &mut R,
    max_n: usize,
    b_max: i64,
    max_m: usize,
) -> ExchangeMatrix {
    let n = rng.gen_range(1..=max_n);
    let mode = if rng.gen_bool(0.5) {
        MatrixMode::SkewSymmetric
    } else {
        MatrixMode::SkewSymmetrizable
    };
    let top = gen_matrix_with(n, b_max, mode, rng).top_block();
    let m = rng.gen_range(0..=max_m);
    let mut rows = top;
    for _ in 0..m {
        rows.push((0..n).map(|_| rng.gen_range(-3..=3)).collect());
    }
    ExchangeMatrix::from_rows(n, m, rows).unwrap()
}
