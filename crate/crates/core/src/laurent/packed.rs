//! Fast paths for multiplication and exact division.
//!
//! Exponent vectors inside a known bounding box are packed into one `u128`
//! by mixed radix, most significant digit first, so integer order is
//! lexicographic order and adding packed keys adds exponents. Coefficients
//! are tried in checked `i128` first and in `BigInt` after an overflow. A
//! box too wide to pack returns `None` and the caller falls back to the
//! general code. Results never depend on which path ran.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt::Display;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use super::{ExponentVector, LaurentPolynomial};
use crate::error::{Error, Result};

type Terms = BTreeMap<ExponentVector, BigInt>;

/// Coefficient ring for the packed loops; `None` signals overflow.
trait Coeff: Sized + Clone + Display {
    fn from_big(c: &BigInt) -> Option<Self>;
    fn into_big(self) -> BigInt;
    fn is_zero(&self) -> bool;
    fn mul(&self, other: &Self) -> Option<Self>;
    fn add_to(&self, acc: &mut Self) -> Option<()>;
    fn sub_from(&self, acc: &mut Self) -> Option<()>;
    fn neg(&self) -> Option<Self>;
    /// Quotient if `self` is a multiple of `d`.
    fn div_exact(&self, d: &Self) -> Option<Self>;
}

impl Coeff for i128 {
    fn from_big(c: &BigInt) -> Option<Self> {
        c.to_i128()
    }
    fn into_big(self) -> BigInt {
        BigInt::from(self)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        self.checked_mul(*other)
    }
    fn add_to(&self, acc: &mut Self) -> Option<()> {
        *acc = acc.checked_add(*self)?;
        Some(())
    }
    fn sub_from(&self, acc: &mut Self) -> Option<()> {
        *acc = acc.checked_sub(*self)?;
        Some(())
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn div_exact(&self, d: &Self) -> Option<Self> {
        (self % d == 0).then(|| self / d)
    }
}

impl Coeff for BigInt {
    fn from_big(c: &BigInt) -> Option<Self> {
        Some(c.clone())
    }
    fn into_big(self) -> BigInt {
        self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn add_to(&self, acc: &mut Self) -> Option<()> {
        *acc += self;
        Some(())
    }
    fn sub_from(&self, acc: &mut Self) -> Option<()> {
        *acc -= self;
        Some(())
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        Zero::is_zero(&r).then_some(q)
    }
}

struct Packing {
    strides: SmallVec<[u128; 8]>,
}

impl Packing {
    /// Digits range over `lo..=hi` componentwise; `None` if the box does not
    /// fit in 128 bits.
    fn new(lo: &ExponentVector, hi: &ExponentVector) -> Option<Self> {
        let n = lo.len();
        let mut strides: SmallVec<[u128; 8]> = SmallVec::from_elem(0, n);
        let mut acc: u128 = 1;
        for i in (0..n).rev() {
            strides[i] = acc;
            let radix = u128::try_from(i64::from(hi[i]) - i64::from(lo[i]) + 1).ok()?;
            acc = acc.checked_mul(radix)?;
        }
        Some(Self { strides })
    }

    fn encode(&self, e: &ExponentVector, base: &ExponentVector) -> u128 {
        e.as_slice()
            .iter()
            .zip(base.as_slice())
            .zip(&self.strides)
            .map(|((&a, &b), &s)| (a - b) as u128 * s)
            .sum()
    }

    fn decode(&self, mut key: u128, base: &ExponentVector) -> ExponentVector {
        let v: SmallVec<[i32; 8]> = self
            .strides
            .iter()
            .zip(base.as_slice())
            .map(|(&s, &b)| {
                let d = key / s;
                key %= s;
                b + d as i32
            })
            .collect();
        ExponentVector(v)
    }

    fn pack<C: Coeff>(
        &self,
        p: &LaurentPolynomial,
        base: &ExponentVector,
    ) -> Option<Vec<(u128, C)>> {
        p.terms
            .iter()
            .map(|(e, c)| Some((self.encode(e, base), C::from_big(c)?)))
            .collect()
    }
}

pub(super) fn mul(
    a: &LaurentPolynomial,
    b: &LaurentPolynomial,
    cap: usize,
) -> Option<Result<Terms>> {
    let (lo_a, hi_a) = a.exponent_bounds();
    let (lo_b, hi_b) = b.exponent_bounds();
    let lo = lo_a.add(&lo_b);
    let pack = Packing::new(&lo, &hi_a.add(&hi_b))?;
    let run = |small: bool| -> Option<Result<Terms>> {
        if small {
            mul_in::<i128>(&pack, pack.pack(a, &lo_a)?, pack.pack(b, &lo_b)?, &lo, cap)
        } else {
            mul_in::<BigInt>(&pack, pack.pack(a, &lo_a)?, pack.pack(b, &lo_b)?, &lo, cap)
        }
    };
    run(true).or_else(|| run(false))
}

fn mul_in<C: Coeff>(
    pack: &Packing,
    xs: Vec<(u128, C)>,
    ys: Vec<(u128, C)>,
    lo: &ExponentVector,
    cap: usize,
) -> Option<Result<Terms>> {
    let mut acc: FxHashMap<u128, C> = FxHashMap::default();
    acc.reserve((xs.len() + ys.len()).min(cap));
    for (ka, ca) in &xs {
        for (kb, cb) in &ys {
            let c = ca.mul(cb)?;
            match acc.get_mut(&(ka + kb)) {
                Some(v) => c.add_to(v)?,
                None => {
                    acc.insert(ka + kb, c);
                    if acc.len() > cap {
                        return Some(Err(Error::ResourceExceeded {
                            what: "product",
                            count: acc.len(),
                            cap,
                        }));
                    }
                }
            }
        }
    }
    Some(Ok(acc
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (pack.decode(k, lo), c.into_big()))
        .collect()))
}

/// Same contract and error messages as the general elimination in
/// `LaurentPolynomial::div_exact`. `den` must not be a monomial.
pub(super) fn div(
    num: &LaurentPolynomial,
    den: &LaurentPolynomial,
    cap: usize,
) -> Option<Result<Terms>> {
    let (lo_n, hi_n) = num.exponent_bounds();
    let pack = Packing::new(&lo_n, &hi_n)?;
    div_in::<i128>(&pack, num, den, cap).or_else(|| div_in::<BigInt>(&pack, num, den, cap))
}

fn div_in<C: Coeff>(
    pack: &Packing,
    num: &LaurentPolynomial,
    den: &LaurentPolynomial,
    cap: usize,
) -> Option<Result<Terms>> {
    let (lo_n, hi_n) = num.exponent_bounds();
    let (lo_d, hi_d) = den.exponent_bounds();
    let lo_q = lo_n.sub(&lo_d);
    let hi_q = hi_n.sub(&hi_d);

    let mut rem: BTreeMap<u128, C> = pack.pack(num, &lo_n)?.into_iter().collect();
    let (lead_e, lead_c) = den.terms.iter().next_back().expect("nonzero divisor");
    let lead_c = C::from_big(lead_c)?;
    let mut tail: Vec<(u128, C)> = pack.pack(den, &lo_d)?;
    tail.pop();
    tail.reverse();

    let mut quot: Vec<(ExponentVector, C)> = Vec::new();
    while let Some((kr, cr)) = rem.pop_last() {
        let e = pack.decode(kr, &lo_n);
        let qe = e.sub(lead_e);
        let inside = (0..qe.len()).all(|i| lo_q[i] <= qe[i] && qe[i] <= hi_q[i]);
        if !inside {
            return Some(Err(Error::NotDivisible(format!(
                "remainder term exponent {:?} leaves the quotient support",
                e.as_slice()
            ))));
        }
        let Some(qc) = cr.div_exact(&lead_c) else {
            return Some(Err(Error::NotDivisible(format!(
                "coefficient {cr} not divisible by leading coefficient {lead_c}"
            ))));
        };
        let kq = pack.encode(&qe, &lo_q);
        for (kd, cd) in &tail {
            let delta = qc.mul(cd)?;
            match rem.entry(kq + kd) {
                Entry::Occupied(mut o) => {
                    delta.sub_from(o.get_mut())?;
                    if o.get().is_zero() {
                        o.remove();
                    }
                }
                Entry::Vacant(v) => {
                    v.insert(delta.neg()?);
                }
            }
        }
        quot.push((qe, qc));
        if quot.len() > cap || rem.len() > cap.saturating_mul(4) {
            return Some(Err(Error::ResourceExceeded {
                what: "quotient",
                count: quot.len().max(rem.len()),
                cap,
            }));
        }
    }
    Some(Ok(quot
        .into_iter()
        .map(|(e, c)| (e, c.into_big()))
        .collect()))
}
