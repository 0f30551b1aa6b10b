//! The tropical semifield `Trop(u_1, ..., u_m)` and coefficient mutation.
//!
//! An element `u_1^{a_1} ... u_m^{a_m}` is stored as its exponent vector.
//! Multiplication adds exponents, `⊕` takes the componentwise minimum.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::ExchangeMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TropicalElement(Vec<i64>);

impl TropicalElement {
    pub fn new(exponents: Vec<i64>) -> Self {
        Self(exponents)
    }

    /// The multiplicative unit.
    pub fn one(m: usize) -> Self {
        Self(vec![0; m])
    }

    /// The generator `u_{i+1}`.
    pub fn generator(m: usize, i: usize) -> Self {
        let mut e = vec![0; m];
        e[i] = 1;
        Self(e)
    }

    pub fn exponents(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn check_len(&self, other: &Self) -> Result<()> {
        if self.0.len() != other.0.len() {
            return Err(Error::ArityMismatch(self.0.len(), other.0.len()));
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b))
            .collect::<Option<_>>()
            .map(Self)
            .ok_or(Error::Overflow("tropical exponent"))
    }

    pub fn oplus(&self, other: &Self) -> Result<Self> {
        self.check_len(other)?;
        Ok(Self(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| *a.min(b))
                .collect(),
        ))
    }

    pub fn inv(&self) -> Result<Self> {
        self.pow(-1)
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        self.0
            .iter()
            .map(|a| a.checked_mul(e))
            .collect::<Option<_>>()
            .map(Self)
            .ok_or(Error::Overflow("tropical exponent"))
    }
}

impl fmt::Display for TropicalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if a == 1 {
                write!(f, "u{}", i + 1)?;
            } else {
                write!(f, "u{}^{}", i + 1, a)?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// Mutates the coefficient tuple in direction `k` (0-based):
/// `y'_k = y_k^{-1}` and `y'_i = y_i y_k^{[b_ki]+} (1 ⊕ y_k)^{-b_ki}` otherwise.
///
/// Only the top `n × n` block of `matrix` is consulted.
pub fn y_mutate(
    y: &[TropicalElement],
    matrix: &ExchangeMatrix,
    k: usize,
) -> Result<Vec<TropicalElement>> {
    let n = matrix.rank();
    if k >= n {
        return Err(Error::DirectionOutOfRange {
            direction: k + 1,
            rank: n,
        });
    }
    if y.len() != n {
        return Err(Error::ArityMismatch(y.len(), n));
    }
    let yk = &y[k];
    let one = TropicalElement::one(yk.len());
    let one_plus_yk = one.oplus(yk)?;
    y.iter()
        .enumerate()
        .map(|(i, yi)| {
            if i == k {
                return yk.inv();
            }
            let b = matrix.get(k, i);
            yi.mul(&yk.pow(b.max(0))?)?.mul(&one_plus_yk.pow(-b)?)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: &[i64]) -> TropicalElement {
        TropicalElement::new(v.to_vec())
    }

    #[test]
    fn multiplication() {
        assert_eq!(
            t(&[1, 0]).mul(&t(&[-1, 0])).unwrap(),
            TropicalElement::one(2)
        );
        assert_eq!(t(&[1, 0]).mul(&t(&[0, 1])).unwrap(), t(&[1, 1]));
        assert_eq!(t(&[2, -1]).mul(&t(&[0, 3])).unwrap(), t(&[2, 2]));
        assert!(t(&[1]).mul(&t(&[1, 0])).is_err());
    }

    #[test]
    fn tropical_sum() {
        assert_eq!(t(&[1, 0]).oplus(&t(&[2, -1])).unwrap(), t(&[1, -1]));
        let a = t(&[3, -2]);
        assert_eq!(a.oplus(&a).unwrap(), a);
        assert_eq!(
            TropicalElement::one(2).oplus(&t(&[1, 0])).unwrap(),
            t(&[0, 0])
        );
        assert!(t(&[1]).oplus(&t(&[1, 0])).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(t(&[1, 0]).to_string(), "u1");
        assert_eq!(t(&[2, -1]).to_string(), "u1^2*u2^-1");
        assert_eq!(t(&[0, 0]).to_string(), "1");
    }

    #[test]
    fn principal_root_inverts_direction() {
        let b = ExchangeMatrix::from_rows(2, 0, vec![vec![0, 1], vec![-1, 0]]).unwrap();
        let y = vec![
            TropicalElement::generator(2, 0),
            TropicalElement::generator(2, 1),
        ];
        let y1 = y_mutate(&y, &b, 0).unwrap();
        assert_eq!(y1[0], t(&[-1, 0]));
        // b_12 = 1: y'_2 = u2 * u1^1 * (1 ⊕ u1)^{-1} = u1 u2.
        assert_eq!(y1[1], t(&[1, 1]));
    }

    #[test]
    fn involution_and_range() {
        let b =
            ExchangeMatrix::from_rows(3, 0, vec![vec![0, 2, -2], vec![-2, 0, 2], vec![2, -2, 0]])
                .unwrap();
        let y = vec![t(&[1, -2]), t(&[0, 3]), t(&[-1, -1])];
        for k in 0..3 {
            let once = y_mutate(&y, &b, k).unwrap();
            let twice = y_mutate(&once, &b.mutate(k).unwrap(), k).unwrap();
            assert_eq!(twice, y);
        }
        assert!(y_mutate(&y, &b, 3).is_err());
    }
}
