//! Trial and campaign reports.

use serde::{Deserialize, Serialize};

use crate::dvector::DVector;
use crate::input::MatrixFile;
use crate::walk::MutationWalk;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Violation,
    /// A failure of a property that is not asserted in this setting.
    Finding,
    ResourceExceeded,
    Skipped,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrialStatus {
    Pass,
    Violation,
    ResourceExceeded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Laurent,
    CoefficientPositivity,
    RouteAgreement,
    DvectorPositivity,
    NeighborInvariance,
    Involution,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checks {
    pub laurent: CheckStatus,
    pub coefficient_positivity: CheckStatus,
    pub route_agreement: CheckStatus,
    pub dvector_positivity: CheckStatus,
    pub neighbor_invariance: CheckStatus,
    pub involution: CheckStatus,
}

impl Checks {
    pub fn all(status: CheckStatus) -> Self {
        Self {
            laurent: status,
            coefficient_positivity: status,
            route_agreement: status,
            dvector_positivity: status,
            neighbor_invariance: status,
            involution: status,
        }
    }

    pub fn get_mut(&mut self, kind: CheckKind) -> &mut CheckStatus {
        match kind {
            CheckKind::Laurent => &mut self.laurent,
            CheckKind::CoefficientPositivity => &mut self.coefficient_positivity,
            CheckKind::RouteAgreement => &mut self.route_agreement,
            CheckKind::DvectorPositivity => &mut self.dvector_positivity,
            CheckKind::NeighborInvariance => &mut self.neighbor_invariance,
            CheckKind::Involution => &mut self.involution,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = CheckStatus> {
        [
            self.laurent,
            self.coefficient_positivity,
            self.route_agreement,
            self.dvector_positivity,
            self.neighbor_invariance,
            self.involution,
        ]
        .into_iter()
    }
}

/// How to reproduce a witnessed value with `cluster mutate` / `cluster dvec`:
/// load `matrix`, follow `path`, read position `position` (1-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Replay {
    pub matrix: MatrixFile,
    pub path: MutationWalk,
    pub position: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub check: CheckKind,
    /// Walk from the root to the vertex being checked.
    pub vertex: MutationWalk,
    /// Walk from the root to the reference cluster.
    pub reference: MutationWalk,
    /// Walk from the root to a cluster containing the variable.
    pub variable: MutationWalk,
    pub position: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expansion: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dvec_expansion: Option<DVector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dvec_recurrence: Option<DVector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dvec_neighbor: Option<DVector>,
    pub detail: String,
    pub replay: Replay,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialReport {
    pub index: usize,
    pub n: usize,
    pub m: usize,
    pub preset: String,
    pub matrix: Vec<Vec<i64>>,
    pub walk: MutationWalk,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rng_seed: Option<u64>,
    pub status: TrialStatus,
    pub checks: Checks,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub findings: Vec<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resource: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub trials: usize,
    pub pass: usize,
    pub violations: usize,
    pub resource_exceeded: usize,
    /// Trials that recorded at least one finding.
    pub findings: usize,
}

impl Summary {
    pub fn of(trials: &[TrialReport]) -> Self {
        let mut s = Summary {
            trials: trials.len(),
            ..Default::default()
        };
        for t in trials {
            match t.status {
                TrialStatus::Pass => s.pass += 1,
                TrialStatus::Violation => s.violations += 1,
                TrialStatus::ResourceExceeded => s.resource_exceeded += 1,
            }
            if !t.findings.is_empty() {
                s.findings += 1;
            }
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CampaignReport {
    pub config: serde_json::Value,
    pub trials: Vec<TrialReport>,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<u64>,
}

impl CampaignReport {
    pub fn first_violation(&self) -> Option<&TrialReport> {
        self.trials
            .iter()
            .find(|t| t.status == TrialStatus::Violation)
    }
}
