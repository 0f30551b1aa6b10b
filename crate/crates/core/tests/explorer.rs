mod common;

use cluster_core::explorer::{
    bfs_distance, count_reduced_walks, enumerate_walks, gen_matrix, run_check_suite, CheckKind,
    CheckStatus, Distance, MatrixMode, SuiteConfig, TrialStatus,
};
use cluster_core::{ExchangeMatrix, MutationWalk, Seed, TermLimits};
use common::{cluster, load, random_extended, stdout};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn assert_symmetrized(b: &ExchangeMatrix) {
    let d = b.symmetrizer();
    let n = b.rank();
    for i in 0..n {
        for j in 0..n {
            assert_eq!(
                d[i] * b.get(i, j),
                -d[j] * b.get(j, i),
                "DB not skew at ({i},{j}) in {b:?}"
            );
        }
    }
}

#[test]
fn matrix_mutation_preserves_the_symmetrizer_and_is_an_involution() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        let b = random_extended(&mut rng, 5, 3, 3);
        for k in 0..b.rank() {
            let Ok(once) = b.mutate(k) else { continue };
            assert_symmetrized(&once);
            assert_eq!(once.symmetrizer(), b.symmetrizer());
            assert_eq!(once.is_skew_symmetric(), b.is_skew_symmetric());
            assert_eq!(once.mutate(k).unwrap(), b);
        }
    }
}

#[test]
fn reduced_walk_counts() {
    for n in 1..=4 {
        for depth in 1..=5 {
            let expected = (n * (n - 1usize).pow(depth as u32 - 1)) as u128;
            assert_eq!(
                count_reduced_walks(n, depth),
                expected,
                "n={n} depth={depth}"
            );
            let walks: Vec<MutationWalk> = enumerate_walks(n, depth).collect();
            assert_eq!(walks.len() as u128, expected);
            for w in &walks {
                assert_eq!(w.len(), depth);
                assert!(w.directions().windows(2).all(|p| p[0] != p[1]));
            }
            let mut sorted = walks.clone();
            sorted.sort_by(|a, b| a.directions().cmp(b.directions()));
            sorted.dedup();
            assert_eq!(sorted.len(), walks.len());
        }
    }
}

#[test]
fn generated_matrices_are_deterministic_and_well_formed() {
    for mode in [MatrixMode::SkewSymmetric, MatrixMode::SkewSymmetrizable] {
        for seed in 0..50 {
            let a = gen_matrix(4, 3, mode, seed);
            assert_eq!(a, gen_matrix(4, 3, mode, seed));
            assert_symmetrized(&a);
            for i in 0..4 {
                assert_eq!(a.get(i, i), 0);
                for j in 0..4 {
                    assert!(a.get(i, j).abs() <= 3 * 3, "entry out of range in {a:?}");
                }
            }
            if mode == MatrixMode::SkewSymmetric {
                assert!(a.is_skew_symmetric());
            }
        }
    }
}

#[test]
fn distance_is_bounded_by_walk_length() {
    let limits = TermLimits::default();
    for name in ["a2.json", "markov.json", "a3_principal.json"] {
        let root = Seed::root(load(name));
        let n = root.rank();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..6 {
            let z_walk = cluster_core::explorer::random_walk(n, 2, &mut rng);
            let t_walk = cluster_core::explorer::random_walk(n, 2, &mut rng);
            let z = root.apply_walk(&z_walk, &limits).unwrap().var(0).clone();
            let d = z_walk.path_to(&t_walk).len();
            match bfs_distance(&root, &z, &t_walk, d, &limits).unwrap() {
                Distance::Found(found) => assert!(found <= d, "{name}: {found} > {d}"),
                Distance::Unknown { .. } => panic!("{name}: variable not reached within {d}"),
            }
        }
    }
}

#[test]
fn distance_equals_walk_length_in_infinite_rank_two() {
    let limits = TermLimits::default();
    let matrices = [
        load("kronecker.json"),
        ExchangeMatrix::from_rows(2, 0, vec![vec![0, 1], vec![-4, 0]]).unwrap(),
    ];
    for b in matrices {
        let root = Seed::root(b);
        for len in 0..=4 {
            // Alternating walks are the only reduced walks in rank two.
            let walk = MutationWalk::new((0..len).map(|i| i % 2).collect()).unwrap();
            let at = root.apply_walk(&walk, &limits).unwrap();
            // The root variable exchanged by the first step lies only in the
            // root and in the neighbor on the far side.
            let l = walk.directions().first().copied().unwrap_or(0);
            let z = root.var(l).clone();
            assert!(at.position_of(&z).is_none() || len == 0);
            let d = bfs_distance(&root, &z, &walk, len + 1, &limits).unwrap();
            assert_eq!(d, Distance::Found(len), "walk {walk}");
        }
    }
}

#[test]
fn injected_fault_yields_a_replayable_witness() {
    let root = Seed::root(load("a2.json"));
    let walk = MutationWalk::from_one_based(&[1, 2]).unwrap();
    let cfg = SuiteConfig {
        inject_recurrence_fault: true,
        ..Default::default()
    };
    let report = run_check_suite(&root, &walk, &cfg);
    assert_eq!(report.status, TrialStatus::Violation);
    assert_eq!(report.checks.route_agreement, CheckStatus::Violation);
    let w = report.witness.expect("witness");
    assert_eq!(w.check, CheckKind::RouteAgreement);
    assert_ne!(w.dvec_expansion, w.dvec_recurrence);

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("replay.json");
    std::fs::write(&file, serde_json::to_string(&w.replay.matrix).unwrap()).unwrap();
    let file = file.to_str().unwrap();
    let path = w.replay.path.to_string();
    let pos = w.replay.position;

    let out = cluster(&[
        "mutate", "--matrix", file, "--path", &path, "--format", "tsv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let expected = format!("{}\t{}", pos, w.expansion.as_deref().unwrap());
    assert!(
        stdout(&out).lines().any(|l| l == expected),
        "{}",
        stdout(&out)
    );

    let out = cluster(&[
        "dvec",
        "--matrix",
        file,
        "--path",
        &path,
        "--method",
        "expansion",
        "--format",
        "tsv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let line = stdout(&out).lines().nth(pos - 1).unwrap().to_string();
    let cell = line.split('\t').nth(1).unwrap();
    assert_eq!(cell, w.dvec_expansion.unwrap().to_string());
}

#[test]
fn clean_suite_passes_on_finite_types() {
    let cfg = SuiteConfig::default();
    for name in ["a2.json", "a3_principal.json"] {
        let root = Seed::root(load(name));
        for walk in enumerate_walks(root.rank(), 5) {
            let r = run_check_suite(&root, &walk, &cfg);
            assert_eq!(
                r.status,
                TrialStatus::Pass,
                "{name} walk {walk}: {:?}",
                r.witness
            );
        }
    }
}
