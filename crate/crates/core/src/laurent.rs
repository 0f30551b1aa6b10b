//! Sparse Laurent polynomials in `n + m` variables with arbitrary-precision
//! integer coefficients.
//!
//! Terms live in a `BTreeMap` keyed by exponent vector, so iteration is in
//! ascending lexicographic order and equality is structural. Zero
//! coefficients are never stored.
//!
//! Canonical text form (used in reports and golden files):
//!
//! ```text
//! poly    := "0" | term (sep term)*
//! sep     := " + " | " - "          (" - " carries the sign of the next term)
//! term    := coeff | monomial | coeff "*" monomial
//! monomial:= factor ("*" factor)*
//! factor  := "x" index | "x" index "^" exponent
//! ```
//!
//! Terms appear in ascending lexicographic order of exponent vectors,
//! variables are 1-indexed, unit exponents and unit coefficients are omitted,
//! and zero exponents never appear.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use crate::error::{Error, Result};

mod packed;

/// Default cap on the number of terms in a single polynomial.
pub const DEFAULT_TERM_CAP: usize = 200_000;

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentVector(SmallVec<[i32; 8]>);

impl ExponentVector {
    pub fn zero(arity: usize) -> Self {
        Self(SmallVec::from_elem(0, arity))
    }

    pub fn unit(arity: usize, index: usize) -> Self {
        let mut e = Self::zero(arity);
        e.0[index] = 1;
        e
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.len(), other.len());
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, factor: i32) -> Self {
        Self(self.0.iter().map(|a| a * factor).collect())
    }

    fn min_with(&mut self, other: &Self) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a = (*a).min(*b);
        }
    }

    fn max_with(&mut self, other: &Self) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a = (*a).max(*b);
        }
    }
}

impl From<Vec<i32>> for ExponentVector {
    fn from(v: Vec<i32>) -> Self {
        Self(SmallVec::from_vec(v))
    }
}

impl From<&[i32]> for ExponentVector {
    fn from(v: &[i32]) -> Self {
        Self(SmallVec::from_slice(v))
    }
}

impl std::ops::Index<usize> for ExponentVector {
    type Output = i32;
    fn index(&self, i: usize) -> &i32 {
        &self.0[i]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    arity: usize,
    terms: BTreeMap<ExponentVector, BigInt>,
}

impl LaurentPolynomial {
    pub fn zero(arity: usize) -> Self {
        Self {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(arity: usize) -> Self {
        Self::monomial(BigInt::one(), ExponentVector::zero(arity))
    }

    pub fn constant(arity: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(c.into(), ExponentVector::zero(arity))
    }

    /// The variable `x_{index+1}`.
    pub fn var(arity: usize, index: usize) -> Self {
        Self::monomial(BigInt::one(), ExponentVector::unit(arity, index))
    }

    pub fn monomial(coeff: BigInt, exponents: ExponentVector) -> Self {
        let arity = exponents.len();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exponents, coeff);
        }
        Self { arity, terms }
    }

    /// Builds a polynomial from `(coefficient, exponents)` pairs, merging
    /// repeated exponents.
    pub fn from_terms<C, I>(arity: usize, terms: I) -> Self
    where
        C: Into<BigInt>,
        I: IntoIterator<Item = (C, Vec<i32>)>,
    {
        let mut p = Self::zero(arity);
        for (c, e) in terms {
            assert_eq!(e.len(), arity, "exponent vector length");
            p.add_term(ExponentVector::from(e), c.into());
        }
        p
    }

    fn add_term(&mut self, e: ExponentVector, c: BigInt) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending lexicographic order.
    pub fn terms(
        &self,
    ) -> impl DoubleEndedIterator<Item = (&ExponentVector, &BigInt)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &ExponentVector) -> Option<&BigInt> {
        self.terms.get(e)
    }

    /// The single term of a monomial, if this is one.
    pub fn as_monomial(&self) -> Option<(&ExponentVector, &BigInt)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Index of the variable if this is exactly `x_{i+1}`.
    pub fn as_variable(&self) -> Option<usize> {
        let (e, c) = self.as_monomial()?;
        if !c.is_one() {
            return None;
        }
        let mut found = None;
        for (i, &a) in e.as_slice().iter().enumerate() {
            match a {
                0 => {}
                1 if found.is_none() => found = Some(i),
                _ => return None,
            }
        }
        found
    }

    fn check_arity(&self, other: &Self) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch(self.arity, other.arity));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_arity(other)?;
        let (big, small) = if self.terms.len() >= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = big.clone();
        for (e, c) in &small.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    /// Product with a cap on the number of terms of the result.
    pub fn try_mul(&self, other: &Self, cap: usize) -> Result<Self> {
        self.check_arity(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.arity));
        }
        if let Some((e, c)) = other.as_monomial() {
            return Ok(self.shift_scale(e, c));
        }
        if let Some((e, c)) = self.as_monomial() {
            return Ok(other.shift_scale(e, c));
        }
        match packed::mul(self, other, cap) {
            Some(r) => r.map(|terms| Self {
                arity: self.arity,
                terms,
            }),
            None => self.mul_general(other, cap),
        }
    }

    fn mul_general(&self, other: &Self, cap: usize) -> Result<Self> {
        let mut acc: HashMap<ExponentVector, BigInt> =
            HashMap::with_capacity((self.terms.len() + other.terms.len()).min(cap));
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.add(eb);
                let c = ca * cb;
                match acc.get_mut(&e) {
                    Some(v) => *v += c,
                    None => {
                        acc.insert(e, c);
                        if acc.len() > cap {
                            return Err(Error::ResourceExceeded {
                                what: "product",
                                count: acc.len(),
                                cap,
                            });
                        }
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(Self {
            arity: self.arity,
            terms,
        })
    }

    pub fn try_pow(&self, exp: u32, cap: usize) -> Result<Self> {
        let mut result = Self::one(self.arity);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result.try_mul(&base, cap)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base, cap)?;
            }
        }
        Ok(result)
    }

    fn shift_scale(&self, e: &ExponentVector, c: &BigInt) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(ea, ca)| (ea.add(e), ca * c))
            .collect();
        Self {
            arity: self.arity,
            terms,
        }
    }

    /// Exact quotient `num / den`, by iterated leading-term elimination in
    /// lexicographic order.
    ///
    /// Quotient exponents are confined to the box
    /// `[min(num) - min(den), max(num) - max(den)]` (componentwise), which
    /// makes the elimination terminate even when the division is not exact.
    pub fn div_exact(&self, den: &Self, cap: usize) -> Result<Self> {
        self.check_arity(den)?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero(self.arity));
        }
        if let Some((de, dc)) = den.as_monomial() {
            let mut terms = BTreeMap::new();
            for (e, c) in &self.terms {
                let (q, r) = c.div_rem(dc);
                if !r.is_zero() {
                    return Err(Error::NotDivisible(format!(
                        "coefficient {c} not divisible by {dc}"
                    )));
                }
                terms.insert(e.sub(de), q);
            }
            return Ok(Self {
                arity: self.arity,
                terms,
            });
        }

        match packed::div(self, den, cap) {
            Some(r) => r.map(|terms| Self {
                arity: self.arity,
                terms,
            }),
            None => self.div_general(den, cap),
        }
    }

    /// Elimination over arbitrary-precision coefficients; `den` is not a
    /// monomial.
    fn div_general(&self, den: &Self, cap: usize) -> Result<Self> {
        let (lo_num, hi_num) = self.exponent_bounds();
        let (lo_den, hi_den) = den.exponent_bounds();
        let lo = lo_num.sub(&lo_den);
        let hi = hi_num.sub(&hi_den);
        let in_box = |e: &ExponentVector| {
            e.as_slice()
                .iter()
                .zip(lo.as_slice().iter().zip(hi.as_slice()))
                .all(|(a, (l, h))| l <= a && a <= h)
        };

        let (lead_e, lead_c) = den.terms.iter().next_back().expect("nonzero divisor");
        let tail: Vec<(&ExponentVector, &BigInt)> = den.terms.iter().rev().skip(1).collect();

        let mut rem = self.terms.clone();
        let mut quot = BTreeMap::new();
        while let Some((e, c)) = rem.pop_last() {
            let qe = e.sub(lead_e);
            if !in_box(&qe) {
                return Err(Error::NotDivisible(format!(
                    "remainder term exponent {:?} leaves the quotient support",
                    e.as_slice()
                )));
            }
            let (qc, r) = c.div_rem(lead_c);
            if !r.is_zero() {
                return Err(Error::NotDivisible(format!(
                    "coefficient {c} not divisible by leading coefficient {lead_c}"
                )));
            }
            for (de, dc) in &tail {
                let key = qe.add(de);
                let delta = &qc * *dc;
                match rem.get_mut(&key) {
                    Some(v) => {
                        *v -= delta;
                        if v.is_zero() {
                            rem.remove(&key);
                        }
                    }
                    None => {
                        rem.insert(key, -delta);
                    }
                }
            }
            quot.insert(qe, qc);
            if quot.len() > cap || rem.len() > cap.saturating_mul(4) {
                return Err(Error::ResourceExceeded {
                    what: "quotient",
                    count: quot.len().max(rem.len()),
                    cap,
                });
            }
        }
        Ok(Self {
            arity: self.arity,
            terms: quot,
        })
    }

    fn exponent_bounds(&self) -> (ExponentVector, ExponentVector) {
        let mut it = self.terms.keys();
        let first = it.next().expect("nonzero polynomial").clone();
        let (mut lo, mut hi) = (first.clone(), first);
        for e in it {
            lo.min_with(e);
            hi.max_with(e);
        }
        (lo, hi)
    }

    /// Componentwise minimum over all exponent vectors.
    pub fn min_exponents(&self) -> Result<ExponentVector> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial("minimal exponents"));
        }
        Ok(self.exponent_bounds().0)
    }

    /// True iff every stored coefficient is positive.
    pub fn coeffs_nonnegative(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    pub fn to_canonical_string(&self) -> String {
        self.to_string()
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, e: &ExponentVector) -> fmt::Result {
    let mut first = true;
    for (i, &a) in e.as_slice().iter().enumerate() {
        if a == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        if a == 1 {
            write!(f, "x{}", i + 1)?;
        } else {
            write!(f, "x{}^{}", i + 1, a)?;
        }
    }
    Ok(())
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            if idx == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else if c.is_negative() {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if e.is_zero() {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                write_monomial(f, e)?;
            }
        }
        Ok(())
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: Self) -> LaurentPolynomial {
        self.try_add(rhs).expect("arity mismatch")
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial {
            arity: self.arity,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: Self) -> LaurentPolynomial {
        self + &(-rhs)
    }
}

/// Uncapped product; panics on arity mismatch.
impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: Self) -> LaurentPolynomial {
        self.try_mul(rhs, usize::MAX).expect("arity mismatch")
    }
}
