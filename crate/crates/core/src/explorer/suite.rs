//! The per-walk invariant suite.
//!
//! For a walk `t_0 — t_1 — ... — t_d` from the root, every vertex `t_i` is
//! checked twice:
//!
//! * against the root cluster: the forward expansions of `x_{l;t_i}`;
//! * against its own cluster: the seed at `t_i` is re-rooted and the walk is
//!   replayed backwards to `t_0`, expanding every cluster variable on the path
//!   in `x_{t_i}`.
//!
//! In both frames each expansion must divide exactly, have positive
//! coefficients (skew-symmetric roots), give the same d-vector as the
//! recurrence, and satisfy the membership dichotomy: `-e_j` if the variable
//! is the `j`-th reference variable, nonnegative otherwise. Consecutive
//! backward replays give the d-vectors of the same variables with respect to
//! adjacent clusters, which is where neighbor invariance is checked. Each
//! edge is also undone to check that mutation is an involution on the matrix,
//! the expansions and the tropical coefficients.

use std::time::Instant;

use crate::dvector::{dvec_from_expansion, dvec_recurrence_step, initial_dvectors, DVector};
use crate::error::Error;
use crate::input::MatrixFile;
use crate::seed::{CoeffPreset, ExchangeMatrix, Seed, TermLimits};
use crate::tropical::y_mutate;
use crate::walk::MutationWalk;

use super::report::{CheckKind, CheckStatus, Checks, Replay, TrialReport, TrialStatus, Witness};

const MAX_FINDINGS: usize = 8;

#[derive(Clone, Debug, Default)]
pub struct SuiteConfig {
    pub limits: TermLimits,
    /// Record per-trial wall time in reports (breaks byte-for-byte
    /// reproducibility).
    pub timings: bool,
    /// Adds one to the first component of every recurrence step. Test hook.
    #[doc(hidden)]
    pub inject_recurrence_fault: bool,
}

/// Name of the coefficient system encoded by the frozen rows at the root.
pub fn preset_name(matrix: &ExchangeMatrix) -> &'static str {
    let n = matrix.rank();
    if matrix.frozen() == 0 {
        return CoeffPreset::Trivial.name();
    }
    let identity = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect::<Vec<_>>());
    if matrix.frozen() == n && matrix.coefficient_rows().into_iter().eq(identity) {
        CoeffPreset::Principal.name()
    } else {
        CoeffPreset::Explicit(Vec::new()).name()
    }
}

/// Runs every check along `walk` from `root`. Never fails: arithmetic
/// errors become statuses.
pub fn run_check_suite(root: &Seed, walk: &MutationWalk, cfg: &SuiteConfig) -> TrialReport {
    let started = Instant::now();
    let matrix = root.matrix();
    let skew = matrix.is_skew_symmetric();
    let mut checks = Checks::all(CheckStatus::Pass);
    if !skew {
        checks.coefficient_positivity = CheckStatus::Skipped;
    }
    let mut suite = Suite {
        cfg,
        root_matrix: matrix,
        skew,
        walk,
        checks,
        witness: None,
        findings: Vec::new(),
    };

    let outcome = match walk.check_rank(root.rank()) {
        Ok(()) => suite.run(root),
        Err(e) => Err(e),
    };
    let mut resource = None;
    if let Err(e) = outcome {
        if e.is_resource_exceeded() {
            for kind in ALL_KINDS {
                let st = suite.checks.get_mut(kind);
                if *st == CheckStatus::Pass {
                    *st = CheckStatus::ResourceExceeded;
                }
            }
        }
        resource = Some(e.to_string());
    }

    let status = if suite.checks.iter().any(|s| s == CheckStatus::Violation) {
        TrialStatus::Violation
    } else if suite
        .checks
        .iter()
        .any(|s| s == CheckStatus::ResourceExceeded)
    {
        TrialStatus::ResourceExceeded
    } else {
        TrialStatus::Pass
    };

    TrialReport {
        index: 0,
        n: matrix.rank(),
        m: matrix.frozen(),
        preset: preset_name(matrix).to_string(),
        matrix: matrix.rows(),
        walk: walk.clone(),
        rng_seed: None,
        status,
        checks: suite.checks,
        witness: suite.witness,
        findings: suite.findings,
        resource,
        elapsed_ms: cfg.timings.then(|| started.elapsed().as_millis() as u64),
    }
}

const ALL_KINDS: [CheckKind; 6] = [
    CheckKind::Laurent,
    CheckKind::CoefficientPositivity,
    CheckKind::RouteAgreement,
    CheckKind::DvectorPositivity,
    CheckKind::NeighborInvariance,
    CheckKind::Involution,
];

/// Where a batch of expansions sits: they are written in the cluster at
/// `reference` (a walk from the root), and `matrix` is the extended matrix of
/// that reference seed.
struct Frame<'a> {
    reference: MutationWalk,
    matrix: &'a ExchangeMatrix,
}

/// Identifies one cluster of the path being checked, relative to a frame.
struct Site<'a> {
    vertex: &'a MutationWalk,
    /// Root-relative walk to the cluster holding the variables.
    variable: MutationWalk,
    /// Path from the frame's reference seed to that cluster.
    path: MutationWalk,
}

/// `Halt`: the trial cannot continue and the failure is already recorded.
enum Stop {
    Halt,
    Error(Error),
}

impl From<Error> for Stop {
    fn from(e: Error) -> Self {
        Stop::Error(e)
    }
}

struct Suite<'a> {
    cfg: &'a SuiteConfig,
    root_matrix: &'a ExchangeMatrix,
    skew: bool,
    walk: &'a MutationWalk,
    checks: Checks,
    witness: Option<Witness>,
    findings: Vec<Witness>,
}

impl<'a> Suite<'a> {
    fn run(&mut self, root: &Seed) -> Result<(), Error> {
        match self.run_inner(root) {
            Ok(()) | Err(Stop::Halt) => Ok(()),
            Err(Stop::Error(e)) => Err(e),
        }
    }

    fn run_inner(&mut self, root: &Seed) -> Result<(), Stop> {
        let n = root.rank();
        let root_frame = Frame {
            reference: MutationWalk::empty(),
            matrix: root.matrix(),
        };

        let mut chain: Vec<Seed> = vec![root.clone()];
        let mut rec: Vec<DVector> = initial_dvectors(n);
        let mut prev_replay: Option<Vec<Vec<DVector>>> = None;

        for i in 0..=self.walk.len() {
            let vertex = self.walk.prefix(i);
            if i > 0 {
                let k = self.walk.directions()[i - 1];
                let prev = &chain[i - 1];
                let seed = self.mutate_checked(prev, k, &root_frame, &vertex, &vertex)?;
                self.check_involution(prev, &seed, k, &vertex)?;
                rec[k] = self.recurrence_step(&rec, prev.matrix(), k)?;
                chain.push(seed);
            }
            let seed = &chain[i];

            let site = Site {
                vertex: &vertex,
                variable: vertex.clone(),
                path: vertex.clone(),
            };
            self.check_cluster(seed, &rec, &root_frame, &site);

            let replay = self.replay_from(seed, &vertex)?;
            if let Some(prev) = &prev_replay {
                let k = self.walk.directions()[i - 1];
                self.check_neighbors(prev, &replay, &chain[i - 1], seed.matrix(), k, &vertex)?;
            }
            prev_replay = Some(replay);
        }
        Ok(())
    }

    fn recurrence_step(
        &self,
        d_all: &[DVector],
        matrix: &ExchangeMatrix,
        k: usize,
    ) -> Result<DVector, Stop> {
        let d = dvec_recurrence_step(d_all, matrix, k)?;
        if self.cfg.inject_recurrence_fault {
            let mut v = d.as_slice().to_vec();
            v[0] += 1;
            return Ok(DVector::new(v));
        }
        Ok(d)
    }

    /// Mutates, recording a Laurent violation if the exchange relation does
    /// not divide.
    fn mutate_checked(
        &mut self,
        seed: &Seed,
        k: usize,
        frame: &Frame,
        vertex: &MutationWalk,
        path: &MutationWalk,
    ) -> Result<Seed, Stop> {
        match seed.mutate(k, &self.cfg.limits) {
            Ok(s) => Ok(s),
            Err(Error::NotDivisible(msg)) => {
                let w = Witness {
                    check: CheckKind::Laurent,
                    vertex: vertex.clone(),
                    reference: frame.reference.clone(),
                    variable: vertex.clone(),
                    position: k + 1,
                    expansion: None,
                    dvec_expansion: None,
                    dvec_recurrence: None,
                    dvec_neighbor: None,
                    detail: format!(
                        "exchange relation at direction {} is not exact: {msg}",
                        k + 1
                    ),
                    replay: Replay {
                        matrix: MatrixFile::from_matrix(frame.matrix),
                        path: path.clone(),
                        position: k + 1,
                    },
                };
                self.violation(w);
                Err(Stop::Halt)
            }
            Err(e) => Err(Stop::Error(e)),
        }
    }

    fn check_involution(
        &mut self,
        prev: &Seed,
        seed: &Seed,
        k: usize,
        vertex: &MutationWalk,
    ) -> Result<(), Stop> {
        let back = seed.mutate(k, &self.cfg.limits)?;
        let y_route = y_mutate(&prev.y(), prev.matrix(), k)?;
        let detail = if back != *prev {
            Some("mutating twice does not restore the seed")
        } else if y_route != seed.y() {
            Some("tropical y-mutation disagrees with the mutated coefficient rows")
        } else if y_mutate(&y_route, seed.matrix(), k)? != prev.y() {
            Some("y-mutation is not an involution")
        } else {
            None
        };
        if let Some(detail) = detail {
            let w = Witness {
                check: CheckKind::Involution,
                vertex: vertex.clone(),
                reference: MutationWalk::empty(),
                variable: vertex.clone(),
                position: k + 1,
                expansion: None,
                dvec_expansion: None,
                dvec_recurrence: None,
                dvec_neighbor: None,
                detail: detail.to_string(),
                replay: Replay {
                    matrix: MatrixFile::from_matrix(self.root_matrix),
                    path: vertex.clone(),
                    position: k + 1,
                },
            };
            self.violation(w);
        }
        Ok(())
    }

    /// Checks all variables of `seed` (expanded in the frame's reference
    /// cluster) against `rec`, their recurrence d-vectors.
    fn check_cluster(&mut self, seed: &Seed, rec: &[DVector], frame: &Frame, site: &Site) {
        let n = seed.rank();
        for l in 0..n {
            let var = seed.var(l);
            if self.skew && !var.coeffs_nonnegative() {
                let w = self.witness_for(
                    CheckKind::CoefficientPositivity,
                    frame,
                    site,
                    l,
                    seed,
                    None,
                    None,
                );
                self.violation(w);
            }
            let d = match dvec_from_expansion(var, n) {
                Ok(d) => d,
                Err(e) => {
                    let mut w =
                        self.witness_for(CheckKind::Laurent, frame, site, l, seed, None, None);
                    w.detail = e.to_string();
                    self.violation(w);
                    continue;
                }
            };
            if d != rec[l] {
                let w = self.witness_for(
                    CheckKind::RouteAgreement,
                    frame,
                    site,
                    l,
                    seed,
                    Some(d.clone()),
                    Some(rec[l].clone()),
                );
                self.violation(w);
            }
            let ok = match var.as_variable() {
                Some(j) if j < n => d == DVector::neg_unit(n, j),
                _ => d.is_nonnegative(),
            };
            if !ok {
                let w = self.witness_for(
                    CheckKind::DvectorPositivity,
                    frame,
                    site,
                    l,
                    seed,
                    Some(d),
                    None,
                );
                if self.skew {
                    self.violation(w);
                } else {
                    self.finding(w);
                }
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn witness_for(
        &self,
        check: CheckKind,
        frame: &Frame,
        site: &Site,
        l: usize,
        seed: &Seed,
        dvec_expansion: Option<DVector>,
        dvec_recurrence: Option<DVector>,
    ) -> Witness {
        let detail = match check {
            CheckKind::CoefficientPositivity => "expansion has a nonpositive coefficient".to_string(),
            CheckKind::RouteAgreement => "expansion and recurrence d-vectors differ".to_string(),
            CheckKind::DvectorPositivity => {
                "d-vector of a variable outside the reference cluster has a negative entry, or a reference variable's d-vector is not -e_l".to_string()
            }
            _ => String::new(),
        };
        Witness {
            check,
            vertex: site.vertex.clone(),
            reference: frame.reference.clone(),
            variable: site.variable.clone(),
            position: l + 1,
            expansion: Some(seed.var(l).to_string()),
            dvec_expansion,
            dvec_recurrence,
            dvec_neighbor: None,
            detail,
            replay: Replay {
                matrix: MatrixFile::from_matrix(frame.matrix),
                path: site.path.clone(),
                position: l + 1,
            },
        }
    }

    /// Re-roots at `seed` (the vertex reached by `vertex`) and walks back to
    /// the root, checking every cluster on the way. Returns the expansion
    /// d-vectors indexed by path vertex `j` (the cluster at `vertex.prefix(j)`).
    fn replay_from(
        &mut self,
        seed: &Seed,
        vertex: &MutationWalk,
    ) -> Result<Vec<Vec<DVector>>, Stop> {
        let i = vertex.len();
        let n = seed.rank();
        let base = seed.reroot();
        let frame = Frame {
            reference: vertex.clone(),
            matrix: base.matrix(),
        };
        let back = vertex.reversed();
        let mut out: Vec<Vec<DVector>> = vec![Vec::new(); i + 1];
        let mut cur = base.clone();
        let mut rec = initial_dvectors(n);
        for step in 0..=i {
            if step > 0 {
                let k = back.directions()[step - 1];
                rec[k] = self.recurrence_step(&rec, cur.matrix(), k)?;
                cur = self.mutate_checked(&cur, k, &frame, vertex, &back.prefix(step))?;
            }
            let j = i - step;
            let site = Site {
                vertex,
                variable: vertex.prefix(j),
                path: back.prefix(step),
            };
            self.check_cluster(&cur, &rec, &frame, &site);
            out[j] = cur
                .vars()
                .iter()
                .map(|v| dvec_from_expansion(v, n))
                .collect::<Result<_, _>>()?;
        }
        Ok(out)
    }

    /// `prev[j]` / `cur[j]`: d-vectors of the variables at path vertex `j`
    /// with respect to `t_{i-1}` / `t_i`, which are joined by an edge `k`.
    fn check_neighbors(
        &mut self,
        prev: &[Vec<DVector>],
        cur: &[Vec<DVector>],
        prev_seed: &Seed,
        cur_matrix: &ExchangeMatrix,
        k: usize,
        vertex: &MutationWalk,
    ) -> Result<(), Stop> {
        let i = vertex.len();
        let n = prev_seed.rank();
        for j in 0..i {
            for l in 0..n {
                if !prev[j][l].agrees_off(&cur[j][l], k) {
                    self.neighbor_violation(
                        cur_matrix,
                        vertex,
                        j,
                        l,
                        cur[j][l].clone(),
                        prev[j][l].clone(),
                    );
                }
            }
        }
        // The new variable x_{k;t_i}, seen from t_{i-1}.
        let fresh = prev_seed.reroot().mutate(k, &self.cfg.limits)?;
        let d_prev = dvec_from_expansion(fresh.var(k), n)?;
        let d_cur = DVector::neg_unit(n, k);
        if !d_prev.agrees_off(&d_cur, k) {
            self.neighbor_violation(cur_matrix, vertex, i, k, d_cur, d_prev);
        }
        Ok(())
    }

    fn neighbor_violation(
        &mut self,
        cur_matrix: &ExchangeMatrix,
        vertex: &MutationWalk,
        j: usize,
        l: usize,
        d_cur: DVector,
        d_prev: DVector,
    ) {
        let variable = vertex.prefix(j);
        let w = Witness {
            check: CheckKind::NeighborInvariance,
            vertex: vertex.clone(),
            reference: vertex.clone(),
            variable: variable.clone(),
            position: l + 1,
            expansion: None,
            dvec_expansion: Some(d_cur),
            dvec_recurrence: None,
            dvec_neighbor: Some(d_prev),
            detail: format!(
                "d-vectors w.r.t. {} and its neighbor {} differ off direction {}",
                fmt_walk(vertex),
                fmt_walk(&vertex.prefix(vertex.len() - 1)),
                vertex.last().map_or(0, |k| k + 1)
            ),
            replay: Replay {
                matrix: MatrixFile::from_matrix(cur_matrix),
                path: vertex.path_to(&variable),
                position: l + 1,
            },
        };
        self.violation(w);
    }

    fn violation(&mut self, w: Witness) {
        *self.checks.get_mut(w.check) = CheckStatus::Violation;
        if self.witness.is_none() {
            self.witness = Some(w);
        }
    }

    fn finding(&mut self, w: Witness) {
        let st = self.checks.get_mut(w.check);
        if *st == CheckStatus::Pass {
            *st = CheckStatus::Finding;
        }
        if self.findings.len() < MAX_FINDINGS {
            self.findings.push(w);
        }
    }
}

fn fmt_walk(w: &MutationWalk) -> String {
    if w.is_empty() {
        "the root".to_string()
    } else {
        format!("walk {w}")
    }
}
