//! Reduced walks: exhaustive enumeration and random sampling.

use rand::Rng;

use crate::walk::MutationWalk;

/// Number of reduced walks of length exactly `depth` in the `n`-regular tree.
pub fn count_reduced_walks(n: usize, depth: usize) -> u128 {
    if depth == 0 {
        return 1;
    }
    n as u128 * (n.saturating_sub(1) as u128).pow(depth as u32 - 1)
}

/// All reduced walks of length exactly `depth`, in lexicographic order.
pub fn enumerate_walks(n: usize, depth: usize) -> ReducedWalks {
    let first: Vec<usize> = (0..depth).map(|i| i % 2).collect();
    let valid = depth == 0 || (n >= 1 && first.iter().all(|&k| k < n));
    ReducedWalks {
        n,
        current: valid.then_some(first),
    }
}

/// All reduced walks of length `0..=depth`, shortest first.
pub fn enumerate_ball(n: usize, depth: usize) -> impl Iterator<Item = MutationWalk> {
    (0..=depth).flat_map(move |d| enumerate_walks(n, d))
}

/// Reduced walks whose prefixes cover the whole ball of radius `depth`:
/// every walk of length `depth`, or of the longest length that exists when
/// `n = 1`.
pub fn maximal_walks(n: usize, depth: usize) -> Vec<MutationWalk> {
    let len = if n == 1 { depth.min(1) } else { depth };
    enumerate_walks(n, len).collect()
}

pub struct ReducedWalks {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Iterator for ReducedWalks {
    type Item = MutationWalk;

    fn next(&mut self) -> Option<MutationWalk> {
        let cur = self.current.take()?;
        let out = MutationWalk::new(cur.clone()).expect("reduced by construction");
        self.current = advance(cur, self.n);
        Some(out)
    }
}

fn advance(mut dirs: Vec<usize>, n: usize) -> Option<Vec<usize>> {
    for i in (0..dirs.len()).rev() {
        let prev = if i > 0 { Some(dirs[i - 1]) } else { None };
        let next = (dirs[i] + 1..n).find(|&v| Some(v) != prev);
        if let Some(v) = next {
            dirs[i] = v;
            for j in i + 1..dirs.len() {
                dirs[j] = if dirs[j - 1] == 0 { 1 } else { 0 };
            }
            return Some(dirs);
        }
    }
    None
}

/// A uniformly random reduced walk of length `len` (shorter when `n = 1`).
pub fn random_walk<R: Rng + ?Sized>(n: usize, len: usize, rng: &mut R) -> MutationWalk {
    let len = if n == 1 { len.min(1) } else { len };
    let mut dirs: Vec<usize> = Vec::with_capacity(len);
    for _ in 0..len {
        let k = match dirs.last() {
            None => rng.gen_range(0..n),
            Some(&last) => {
                let r = rng.gen_range(0..n - 1);
                if r >= last {
                    r + 1
                } else {
                    r
                }
            }
        };
        dirs.push(k);
    }
    MutationWalk::new(dirs).expect("reduced by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn strings(n: usize, d: usize) -> Vec<String> {
        enumerate_walks(n, d).map(|w| w.to_string()).collect()
    }

    #[test]
    fn small_cases() {
        assert_eq!(strings(2, 3), vec!["1,2,1", "2,1,2"]);
        assert_eq!(
            strings(3, 2),
            vec!["1,2", "1,3", "2,1", "2,3", "3,1", "3,2"]
        );
        assert_eq!(strings(4, 0), vec![""]);
        assert_eq!(strings(1, 1), vec!["1"]);
        assert!(strings(1, 2).is_empty());
    }

    #[test]
    fn counts_match_closed_form() {
        for n in 1..=5 {
            for d in 0..=6 {
                let walks: Vec<_> = enumerate_walks(n, d).collect();
                assert_eq!(
                    walks.len() as u128,
                    count_reduced_walks(n, d),
                    "n={n} d={d}"
                );
                assert!(walks.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn ball_and_maximal() {
        assert_eq!(enumerate_ball(3, 2).count(), 1 + 3 + 6);
        assert_eq!(maximal_walks(1, 5).len(), 1);
        assert_eq!(maximal_walks(3, 4).len(), 24);
    }

    #[test]
    fn random_walks_are_reduced_and_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=4 {
            for _ in 0..50 {
                let w = random_walk(n, 6, &mut rng);
                assert!(w.check_rank(n).is_ok());
                assert!(MutationWalk::new(w.directions().to_vec()).is_ok());
            }
        }
    }
}
