//! Bounded distance from a cluster to the nearest cluster containing a given
//! variable.

use std::collections::HashSet;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::Result;
use crate::laurent::LaurentPolynomial;
use crate::seed::{Seed, SeedKey, TermLimits};
use crate::walk::MutationWalk;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Distance {
    Found(usize),
    /// Not found within `bound` steps.
    Unknown {
        bound: usize,
    },
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Found(d) => write!(f, "{d}"),
            Distance::Unknown { bound } => write!(f, "unknown(bound={bound})"),
        }
    }
}

impl Serialize for Distance {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Distance::Found(d) => s.serialize_u64(*d as u64),
            Distance::Unknown { .. } => s.serialize_str(&self.to_string()),
        }
    }
}

/// Breadth-first search in the tree around the vertex reached by `t_walk`,
/// merging seeds that agree up to relabeling. `z` is an expansion in the
/// root cluster; so are the variables of every visited seed, so membership
/// is plain equality.
pub fn bfs_distance(
    root: &Seed,
    z: &LaurentPolynomial,
    t_walk: &MutationWalk,
    bound: usize,
    limits: &TermLimits,
) -> Result<Distance> {
    let start = root.apply_walk(t_walk, limits)?;
    if start.position_of(z).is_some() {
        return Ok(Distance::Found(0));
    }
    let n = start.rank();
    let mut seen: HashSet<SeedKey> = HashSet::new();
    seen.insert(start.key());
    let mut frontier: Vec<(Seed, Option<usize>)> = vec![(start, None)];
    for depth in 1..=bound {
        let mut next = Vec::new();
        for (seed, came_by) in &frontier {
            for k in (0..n).filter(|&k| Some(k) != *came_by) {
                let s = seed.mutate(k, limits)?;
                if !seen.insert(s.key()) {
                    continue;
                }
                if s.position_of(z).is_some() {
                    return Ok(Distance::Found(depth));
                }
                next.push((s, Some(k)));
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(Distance::Unknown { bound })
}
