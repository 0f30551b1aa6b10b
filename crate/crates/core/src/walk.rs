//! Reduced direction sequences, i.e. non-backtracking paths in the
//! `n`-regular tree.
//!
//! Directions are stored 0-based. Text forms (parsing and `Display`) are
//! comma-separated and 1-based.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MutationWalk(Vec<usize>);

impl MutationWalk {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Builds a walk from 0-based directions, rejecting immediate repeats.
    pub fn new(directions: Vec<usize>) -> Result<Self> {
        for (step, pair) in directions.windows(2).enumerate() {
            if pair[0] == pair[1] {
                return Err(Error::WalkNotReduced {
                    direction: pair[1] + 1,
                    step: step + 2,
                });
            }
        }
        Ok(Self(directions))
    }

    /// Builds a walk from 1-based directions.
    pub fn from_one_based(directions: &[usize]) -> Result<Self> {
        if directions.contains(&0) {
            return Err(Error::InvalidWalk("directions are 1-based".into()));
        }
        Self::new(directions.iter().map(|d| d - 1).collect())
    }

    pub fn directions(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }

    pub fn check_rank(&self, rank: usize) -> Result<()> {
        match self.0.iter().find(|&&k| k >= rank) {
            Some(&k) => Err(Error::DirectionOutOfRange {
                direction: k + 1,
                rank,
            }),
            None => Ok(()),
        }
    }

    /// Moves one edge along direction `k`: backtracks if `k` is the last
    /// direction, otherwise extends.
    pub fn step(&self, k: usize) -> Self {
        let mut d = self.0.clone();
        if d.last() == Some(&k) {
            d.pop();
        } else {
            d.push(k);
        }
        Self(d)
    }

    pub fn push(&self, k: usize) -> Result<Self> {
        if self.last() == Some(k) {
            return Err(Error::WalkNotReduced {
                direction: k + 1,
                step: self.len() + 1,
            });
        }
        let mut d = self.0.clone();
        d.push(k);
        Ok(Self(d))
    }

    pub fn prefix(&self, len: usize) -> Self {
        Self(self.0[..len].to_vec())
    }

    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }

    /// The tree path from the endpoint of `self` to the endpoint of `other`
    /// (both walks start at the same vertex).
    pub fn path_to(&self, other: &Self) -> Self {
        let common = self
            .0
            .iter()
            .zip(&other.0)
            .take_while(|(a, b)| a == b)
            .count();
        let mut d: Vec<usize> = self.0[common..].iter().rev().copied().collect();
        d.extend_from_slice(&other.0[common..]);
        Self(d)
    }
}

impl fmt::Display for MutationWalk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", k + 1)?;
        }
        Ok(())
    }
}

impl FromStr for MutationWalk {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self::empty());
        }
        let dirs = s
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::InvalidWalk(format!("bad direction {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_one_based(&dirs)
    }
}

impl Serialize for MutationWalk {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for MutationWalk {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
