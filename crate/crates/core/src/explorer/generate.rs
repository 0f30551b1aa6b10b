//! Random exchange matrices.
//!
//! All randomness goes through `ChaCha8Rng`, whose output stream is fixed
//! across platforms for a given seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::seed::ExchangeMatrix;

const SYMMETRIZABLE_ATTEMPTS: usize = 100;
const MAX_SYMMETRIZER_ENTRY: i64 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatrixMode {
    SkewSymmetric,
    SkewSymmetrizable,
}

pub fn gen_matrix(n: usize, b_max: i64, mode: MatrixMode, rng_seed: u64) -> ExchangeMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    gen_matrix_with(n, b_max, mode, &mut rng)
}

pub fn gen_matrix_with<R: Rng + ?Sized>(
    n: usize,
    b_max: i64,
    mode: MatrixMode,
    rng: &mut R,
) -> ExchangeMatrix {
    assert!(
        n >= 1 && b_max >= 1,
        "rank and entry bound must be positive"
    );
    if mode == MatrixMode::SkewSymmetrizable {
        for _ in 0..SYMMETRIZABLE_ATTEMPTS {
            if let Some(m) = try_symmetrizable(n, b_max, rng) {
                return m;
            }
        }
    }
    let mut b = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.gen_range(-b_max..=b_max);
            b[i][j] = v;
            b[j][i] = -v;
        }
    }
    ExchangeMatrix::from_rows(n, 0, b).expect("skew-symmetric by construction")
}

/// Draws `S` and the upper triangle of `B`, then sets `b_ji = -s_i b_ij / s_j`
/// so that `SB` is skew-symmetric. Gives up on a non-integral or
/// out-of-range entry.
fn try_symmetrizable<R: Rng + ?Sized>(n: usize, b_max: i64, rng: &mut R) -> Option<ExchangeMatrix> {
    let s: Vec<i64> = (0..n)
        .map(|_| rng.gen_range(1..=MAX_SYMMETRIZER_ENTRY))
        .collect();
    let mut b = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.gen_range(-b_max..=b_max);
            let num = -s[i] * v;
            if num % s[j] != 0 || (num / s[j]).abs() > b_max {
                return None;
            }
            b[i][j] = v;
            b[j][i] = num / s[j];
        }
    }
    ExchangeMatrix::from_rows(n, 0, b).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_two_unit_bound() {
        let allowed = [
            vec![vec![0, 1], vec![-1, 0]],
            vec![vec![0, -1], vec![1, 0]],
            vec![vec![0, 0], vec![0, 0]],
        ];
        for seed in 0..20 {
            let m = gen_matrix(2, 1, MatrixMode::SkewSymmetric, seed);
            assert!(allowed.contains(&m.rows()));
        }
    }

    #[test]
    fn deterministic() {
        for mode in [MatrixMode::SkewSymmetric, MatrixMode::SkewSymmetrizable] {
            assert_eq!(gen_matrix(4, 2, mode, 99), gen_matrix(4, 2, mode, 99));
        }
    }

    #[test]
    fn skew_symmetric_mode() {
        for seed in 0..100 {
            let m = gen_matrix(4, 3, MatrixMode::SkewSymmetric, seed);
            assert!(m.is_skew_symmetric());
            assert!(m.rows().iter().flatten().all(|v| v.abs() <= 3));
        }
    }

    #[test]
    fn symmetrizable_mode() {
        let mut non_symmetric = 0;
        for seed in 0..200 {
            let m = gen_matrix(3, 2, MatrixMode::SkewSymmetrizable, seed);
            assert!(m.rows().iter().flatten().all(|v| v.abs() <= 2));
            if !m.is_skew_symmetric() {
                non_symmetric += 1;
            }
        }
        assert!(non_symmetric > 0);
    }
}
