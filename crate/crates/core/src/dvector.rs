//! Denominator vectors, computed two ways: read off a Laurent expansion, and
//! propagated by the mutation recurrence from `d(x_l) = -e_l`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::LaurentPolynomial;
use crate::seed::ExchangeMatrix;
use crate::walk::MutationWalk;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DVector(Vec<i64>);

impl DVector {
    pub fn new(d: Vec<i64>) -> Self {
        Self(d)
    }

    /// `-e_l`, the d-vector of the `l`-th reference variable.
    pub fn neg_unit(n: usize, l: usize) -> Self {
        let mut d = vec![0; n];
        d[l] = -1;
        Self(d)
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&d| d >= 0)
    }

    /// True iff `self` and `other` agree at every index except `k`.
    pub fn agrees_off(&self, other: &Self, k: usize) -> bool {
        self.0.len() == other.0.len()
            && self
                .0
                .iter()
                .zip(&other.0)
                .enumerate()
                .all(|(i, (a, b))| i == k || a == b)
    }
}

impl fmt::Display for DVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "({})", cells.join(","))
    }
}

/// `d_j = -(minimal exponent of x_j)` for the first `n` variables.
pub fn dvec_from_expansion(p: &LaurentPolynomial, n: usize) -> Result<DVector> {
    let min = p.min_exponents()?;
    Ok(DVector(
        min.as_slice()[..n].iter().map(|&a| -(a as i64)).collect(),
    ))
}

/// New d-vector at position `k` after mutating the seed with matrix `b` and
/// d-vectors `d_all`:
/// `-d_k + max(Σ_{b_ik>0} b_ik d_i, Σ_{b_ik<0} -b_ik d_i)`, the max taken
/// componentwise. Only the mutable rows of `b` contribute.
pub fn dvec_recurrence_step(d_all: &[DVector], b: &ExchangeMatrix, k: usize) -> Result<DVector> {
    let n = b.rank();
    if k >= n {
        return Err(Error::DirectionOutOfRange {
            direction: k + 1,
            rank: n,
        });
    }
    if d_all.len() != n {
        return Err(Error::ArityMismatch(d_all.len(), n));
    }
    let dim = d_all[k].len();
    let mut pos = vec![0i64; dim];
    let mut neg = vec![0i64; dim];
    for (i, di) in d_all.iter().enumerate() {
        let bik = b.get(i, k);
        let target = if bik > 0 {
            &mut pos
        } else if bik < 0 {
            &mut neg
        } else {
            continue;
        };
        for (t, d) in target.iter_mut().zip(di.as_slice()) {
            *t = bik
                .checked_abs()
                .and_then(|b| b.checked_mul(*d))
                .and_then(|x| t.checked_add(x))
                .ok_or(Error::Overflow("d-vector entry"))?;
        }
    }
    d_all[k]
        .as_slice()
        .iter()
        .zip(pos.iter().zip(&neg))
        .map(|(dk, (p, q))| (*p.max(q)).checked_sub(*dk))
        .collect::<Option<_>>()
        .map(DVector)
        .ok_or(Error::Overflow("d-vector entry"))
}

/// Initial d-vectors `-e_1, ..., -e_n`.
pub fn initial_dvectors(n: usize) -> Vec<DVector> {
    (0..n).map(|l| DVector::neg_unit(n, l)).collect()
}

/// All `n` d-vectors at the end of `walk`, using matrix mutation only.
pub fn dvec_along_walk(b0: &ExchangeMatrix, walk: &MutationWalk) -> Result<Vec<DVector>> {
    walk.check_rank(b0.rank())?;
    let mut d = initial_dvectors(b0.rank());
    let mut b = b0.clone();
    for &k in walk.directions() {
        d[k] = dvec_recurrence_step(&d, &b, k)?;
        b = b.mutate(k)?;
    }
    Ok(d)
}
