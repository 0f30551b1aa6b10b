//! Extended exchange matrices and seeds of geometric type.
//!
//! A seed stores, for each mutable position, the expansion of its cluster
//! variable in the root cluster `x_1, ..., x_n` and the frozen variables
//! `x_{n+1}, ..., x_{n+m}`. Coefficients are encoded by the frozen rows of the
//! extended matrix; the tropical `y`-tuple is read off those rows.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laurent::{ExponentVector, LaurentPolynomial, DEFAULT_TERM_CAP};
use crate::tropical::TropicalElement;
use crate::walk::MutationWalk;

/// Default cap on the total number of terms over all expansions of one seed.
///
/// Small next to the per-polynomial cap on purpose: it bounds the cost of
/// the division behind each mutation, so runaway walks stop in well under a
/// second. The Markov quiver stays below it through eight mutations and
/// exceeds it at the ninth.
pub const DEFAULT_SEED_TERM_CAP: usize = 4_096;

/// Largest exponent magnitude a mutation may produce; leaves headroom in
/// `i32` for the sums formed during division.
const MAX_EXPONENT: i128 = (i32::MAX / 4) as i128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TermLimits {
    pub per_polynomial: usize,
    pub per_seed: usize,
}

impl Default for TermLimits {
    fn default() -> Self {
        Self {
            per_polynomial: DEFAULT_TERM_CAP,
            per_seed: DEFAULT_SEED_TERM_CAP,
        }
    }
}

impl TermLimits {
    pub fn unlimited() -> Self {
        Self {
            per_polynomial: usize::MAX,
            per_seed: usize::MAX,
        }
    }
}

/// The `(n + m) × n` extended exchange matrix `B̃`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExchangeMatrix {
    n: usize,
    m: usize,
    /// Row-major, `(n + m) * n` entries.
    entries: Vec<i64>,
    symmetrizer: Vec<i64>,
}

impl ExchangeMatrix {
    /// Builds from `n + m` rows of length `n`. Fails unless the top block is
    /// skew-symmetrizable.
    pub fn from_rows(n: usize, m: usize, rows: Vec<Vec<i64>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMatrix("rank must be at least 1".into()));
        }
        if rows.len() != n + m {
            return Err(Error::InvalidMatrix(format!(
                "expected {} rows, got {}",
                n + m,
                rows.len()
            )));
        }
        let mut entries = Vec::with_capacity((n + m) * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!(
                    "row {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    n
                )));
            }
            entries.extend_from_slice(row);
        }
        let symmetrizer = find_symmetrizer(n, &entries)?;
        Ok(Self {
            n,
            m,
            entries,
            symmetrizer,
        })
    }

    /// Top block `b` with coefficient rows chosen by `preset`.
    pub fn with_coefficients(b: Vec<Vec<i64>>, preset: &CoeffPreset) -> Result<Self> {
        let n = b.len();
        let mut rows = b;
        let m = match preset {
            CoeffPreset::Trivial => 0,
            CoeffPreset::Principal => {
                for i in 0..n {
                    let mut r = vec![0; n];
                    r[i] = 1;
                    rows.push(r);
                }
                n
            }
            CoeffPreset::Explicit(c) => {
                rows.extend(c.iter().cloned());
                c.len()
            }
        };
        Self::from_rows(n, m, rows)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn frozen(&self) -> usize {
        self.m
    }

    /// `b̃_{ij}`, 0-based.
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn top_block(&self) -> Vec<Vec<i64>> {
        self.rows().into_iter().take(self.n).collect()
    }

    pub fn coefficient_rows(&self) -> Vec<Vec<i64>> {
        self.rows().into_iter().skip(self.n).collect()
    }

    pub fn symmetrizer(&self) -> &[i64] {
        &self.symmetrizer
    }

    pub fn is_skew_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == -self.get(j, i)))
    }

    /// True iff the digraph with an edge `i → j` for each `b_ij > 0` has no
    /// directed cycle.
    pub fn is_acyclic(&self) -> bool {
        // Kahn's algorithm on the top block.
        let n = self.n;
        let mut indeg = vec![0usize; n];
        for i in 0..n {
            for j in 0..n {
                if self.get(i, j) > 0 {
                    indeg[j] += 1;
                }
            }
        }
        let mut stack: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = stack.pop() {
            seen += 1;
            for j in 0..n {
                if self.get(v, j) > 0 {
                    indeg[j] -= 1;
                    if indeg[j] == 0 {
                        stack.push(j);
                    }
                }
            }
        }
        seen == n
    }

    /// Matrix mutation in direction `k` (0-based), applied to all `n + m` rows.
    pub fn mutate(&self, k: usize) -> Result<Self> {
        let n = self.n;
        if k >= n {
            return Err(Error::DirectionOutOfRange {
                direction: k + 1,
                rank: n,
            });
        }
        let mut entries = self.entries.clone();
        for i in 0..n + self.m {
            for j in 0..n {
                let b = self.get(i, j);
                entries[i * n + j] = if i == k || j == k {
                    -b
                } else {
                    let bik = self.get(i, k);
                    let bkj = self.get(k, j);
                    bik.checked_mul((-bkj).max(0))
                        .zip(bik.max(0).checked_mul(bkj))
                        .and_then(|(p, q)| b.checked_add(p)?.checked_add(q))
                        .ok_or(Error::Overflow("matrix entry"))?
                };
            }
        }
        Ok(Self {
            n,
            m: self.m,
            entries,
            symmetrizer: self.symmetrizer.clone(),
        })
    }

    /// Coefficient tuple `y_j = ∏_i u_i^{c_ij}` read from the frozen rows.
    pub fn y(&self) -> Vec<TropicalElement> {
        (0..self.n)
            .map(|j| TropicalElement::new((0..self.m).map(|i| self.get(self.n + i, j)).collect()))
            .collect()
    }

    /// Relabels mutable positions: new position `p` takes old position
    /// `order[p]`. Frozen rows keep their place.
    pub fn permuted(&self, order: &[usize]) -> Self {
        let n = self.n;
        let mut entries = Vec::with_capacity(self.entries.len());
        for i in 0..n + self.m {
            let src_row = if i < n { order[i] } else { i };
            for &src_col in order {
                entries.push(self.get(src_row, src_col));
            }
        }
        let symmetrizer = order.iter().map(|&i| self.symmetrizer[i]).collect();
        Self {
            n,
            m: self.m,
            entries,
            symmetrizer,
        }
    }
}

impl fmt::Display for ExchangeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.entries.chunks(self.n).enumerate() {
            if i == self.n {
                writeln!(f, "  --")?;
            }
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Finds the minimal positive integer diagonal `S` with `SB` skew-symmetric.
fn find_symmetrizer(n: usize, entries: &[i64]) -> Result<Vec<i64>> {
    let b = |i: usize, j: usize| entries[i * n + j];
    for i in 0..n {
        if b(i, i) != 0 {
            return Err(Error::InvalidMatrix(format!(
                "diagonal entry at row {0}, column {0} is {1}, expected 0",
                i + 1,
                b(i, i)
            )));
        }
        for j in i + 1..n {
            let (x, y) = (b(i, j), b(j, i));
            let ok = (x == 0 && y == 0) || (x != 0 && y != 0 && x.signum() == -y.signum());
            if !ok {
                return Err(Error::InvalidMatrix(format!(
                    "entries at (row {}, column {}) = {} and (row {}, column {}) = {} are not sign-skew-symmetric",
                    i + 1, j + 1, x, j + 1, i + 1, y
                )));
            }
        }
    }

    // s_j / s_i = -b_ij / b_ji along every nonzero pair, propagated per
    // connected component.
    let mut ratio: Vec<Option<Ratio<i64>>> = vec![None; n];
    let mut scale = vec![1i64; n];
    for start in 0..n {
        if ratio[start].is_some() {
            continue;
        }
        ratio[start] = Some(Ratio::from_integer(1));
        let mut component = vec![start];
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            let si = ratio[i].expect("visited");
            for j in 0..n {
                if j == i || b(i, j) == 0 {
                    continue;
                }
                let sj = si * Ratio::new(-b(i, j), b(j, i));
                match ratio[j] {
                    None => {
                        ratio[j] = Some(sj);
                        component.push(j);
                        stack.push(j);
                    }
                    Some(existing) if existing != sj => {
                        return Err(Error::InvalidMatrix(format!(
                            "not skew-symmetrizable: inconsistent ratio at row {}, column {}",
                            i + 1,
                            j + 1
                        )));
                    }
                    Some(_) => {}
                }
            }
        }
        let lcm = component
            .iter()
            .fold(1i64, |acc, &v| acc.lcm(ratio[v].expect("set").denom()));
        let ints: Vec<i64> = component
            .iter()
            .map(|&v| (ratio[v].expect("set") * lcm).to_integer())
            .collect();
        let g = ints.iter().fold(0i64, |acc, &v| acc.gcd(&v));
        for (&v, &s) in component.iter().zip(&ints) {
            scale[v] = s / g;
        }
    }
    Ok(scale)
}

/// Coefficient system of geometric type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoeffPreset {
    /// No frozen rows.
    Trivial,
    /// Identity frozen block at the root.
    Principal,
    /// Explicit frozen rows `C` (`m × n`).
    Explicit(Vec<Vec<i64>>),
}

impl CoeffPreset {
    pub fn name(&self) -> &'static str {
        match self {
            CoeffPreset::Trivial => "trivial",
            CoeffPreset::Principal => "principal",
            CoeffPreset::Explicit(_) => "explicit",
        }
    }
}

/// A seed: extended matrix plus expansions of its cluster variables in the
/// root cluster.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed {
    matrix: ExchangeMatrix,
    vars: Vec<Arc<LaurentPolynomial>>,
    path: MutationWalk,
}

impl Seed {
    /// The root seed: `vars[l] = x_{l+1}`.
    pub fn root(matrix: ExchangeMatrix) -> Self {
        let arity = matrix.rank() + matrix.frozen();
        let vars = (0..matrix.rank())
            .map(|l| Arc::new(LaurentPolynomial::var(arity, l)))
            .collect();
        Self {
            matrix,
            vars,
            path: MutationWalk::empty(),
        }
    }

    /// Treats this seed as a new root: same extended matrix, fresh variables.
    pub fn reroot(&self) -> Self {
        Self::root(self.matrix.clone())
    }

    pub fn matrix(&self) -> &ExchangeMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn vars(&self) -> &[Arc<LaurentPolynomial>] {
        &self.vars
    }

    pub fn var(&self, l: usize) -> &LaurentPolynomial {
        &self.vars[l]
    }

    pub fn path_from_root(&self) -> &MutationWalk {
        &self.path
    }

    pub fn y(&self) -> Vec<TropicalElement> {
        self.matrix.y()
    }

    pub fn total_terms(&self) -> usize {
        self.vars.iter().map(|v| v.num_terms()).sum()
    }

    /// Mutation in direction `k` (0-based): the exchange relation
    /// `x'_k = (∏ x_j^{[b_jk]+} + ∏ x_j^{[-b_jk]+}) / x_k` over all `n + m`
    /// rows, evaluated on the stored expansions, then matrix mutation.
    pub fn mutate(&self, k: usize, limits: &TermLimits) -> Result<Self> {
        let n = self.rank();
        if k >= n {
            return Err(Error::DirectionOutOfRange {
                direction: k + 1,
                rank: n,
            });
        }
        self.check_exponent_range(k)?;
        // Intermediate polynomials may not outgrow the seed budget either;
        // this bounds the work, not just the size of the result.
        let cap = limits.per_polynomial.min(limits.per_seed);
        let pos = self.exchange_monomial(k, 1, cap)?;
        let neg = self.exchange_monomial(k, -1, cap)?;
        let num = pos.try_add(&neg)?;
        if num.num_terms() > cap {
            return Err(Error::ResourceExceeded {
                what: "exchange numerator",
                count: num.num_terms(),
                cap,
            });
        }
        let fresh = num.div_exact(&self.vars[k], cap)?;

        let mut vars = self.vars.clone();
        vars[k] = Arc::new(fresh);
        let total: usize = vars.iter().map(|v| v.num_terms()).sum();
        if total > limits.per_seed {
            return Err(Error::ResourceExceeded {
                what: "seed",
                count: total,
                cap: limits.per_seed,
            });
        }
        Ok(Self {
            matrix: self.matrix.mutate(k)?,
            vars,
            path: self.path.step(k),
        })
    }

    /// `∏_j x_j^{[sign * b_jk]+}` over mutable and frozen rows.
    /// Rejects a mutation whose exchange relation would produce exponents
    /// near the `i32` range, before any arithmetic is done.
    fn check_exponent_range(&self, k: usize) -> Result<()> {
        let n = self.rank();
        let widest = |p: &LaurentPolynomial| -> i128 {
            p.terms()
                .flat_map(|(e, _)| e.as_slice().iter().map(|a| i128::from(*a).abs()))
                .max()
                .unwrap_or(0)
        };
        let widths: Vec<i128> = self.vars.iter().map(|v| widest(v)).collect();
        for sign in [1i128, -1] {
            let mut bound = widths[k];
            for i in 0..n + self.matrix.frozen() {
                let e = (sign * i128::from(self.matrix.get(i, k))).max(0);
                bound += e * if i < n { widths[i].max(1) } else { 1 };
            }
            if bound > MAX_EXPONENT {
                return Err(Error::Overflow("Laurent exponent"));
            }
        }
        Ok(())
    }

    fn exchange_monomial(&self, k: usize, sign: i64, cap: usize) -> Result<LaurentPolynomial> {
        let n = self.rank();
        let arity = n + self.matrix.frozen();
        let mut frozen = vec![0i32; arity];
        for (i, slot) in frozen.iter_mut().enumerate().skip(n) {
            *slot = (sign * self.matrix.get(i, k)).max(0) as i32;
        }
        let mut factors: Vec<LaurentPolynomial> = Vec::new();
        for j in 0..n {
            let e = (sign * self.matrix.get(j, k)).max(0);
            if e > 0 {
                factors.push(self.vars[j].try_pow(e as u32, cap)?);
            }
        }
        factors.sort_by_key(|f| f.num_terms());
        let mut acc = LaurentPolynomial::monomial(1.into(), ExponentVector::from(frozen));
        for f in &factors {
            acc = acc.try_mul(f, cap)?;
        }
        Ok(acc)
    }

    /// Applies a reduced walk left to right.
    pub fn apply_walk(&self, walk: &MutationWalk, limits: &TermLimits) -> Result<Self> {
        walk.check_rank(self.rank())?;
        let mut s = self.clone();
        for &k in walk.directions() {
            s = s.mutate(k, limits)?;
        }
        Ok(s)
    }

    /// Index of the position holding `z`, if any.
    pub fn position_of(&self, z: &LaurentPolynomial) -> Option<usize> {
        self.vars.iter().position(|v| v.as_ref() == z)
    }

    /// Relabels positions: new position `p` takes old position `order[p]`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        Self {
            matrix: self.matrix.permuted(order),
            vars: order.iter().map(|&i| self.vars[i].clone()).collect(),
            path: self.path.clone(),
        }
    }

    pub fn key(&self) -> SeedKey {
        SeedKey::of(self)
    }
}

/// Canonical form of a seed up to relabeling of mutable positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SeedKey {
    vars: Vec<String>,
    matrix: Vec<Vec<i64>>,
}

impl SeedKey {
    pub fn of(seed: &Seed) -> Self {
        let texts: Vec<String> = seed.vars.iter().map(|v| v.to_string()).collect();
        let mut order: Vec<usize> = (0..texts.len()).collect();
        order.sort_by(|&a, &b| texts[a].cmp(&texts[b]));
        Self {
            vars: order.iter().map(|&i| texts[i].clone()).collect(),
            matrix: seed.matrix.permuted(&order).rows(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a2() -> ExchangeMatrix {
        ExchangeMatrix::from_rows(2, 0, vec![vec![0, 1], vec![-1, 0]]).unwrap()
    }

    fn markov() -> ExchangeMatrix {
        ExchangeMatrix::from_rows(3, 0, vec![vec![0, 2, -2], vec![-2, 0, 2], vec![2, -2, 0]])
            .unwrap()
    }

    fn p(arity: usize, terms: &[(i64, &[i32])]) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(arity, terms.iter().map(|(c, e)| (*c, e.to_vec())))
    }

    #[test]
    fn validation() {
        assert!(ExchangeMatrix::from_rows(2, 0, vec![vec![0, 1], vec![1, 0]]).is_err());
        assert!(ExchangeMatrix::from_rows(2, 0, vec![vec![0, 1], vec![0, 0]]).is_err());
        assert!(ExchangeMatrix::from_rows(2, 0, vec![vec![1, 1], vec![-1, 0]]).is_err());
        assert!(ExchangeMatrix::from_rows(2, 0, vec![vec![0, 1]]).is_err());
        assert!(ExchangeMatrix::from_rows(0, 0, vec![]).is_err());
        let err = ExchangeMatrix::from_rows(2, 0, vec![vec![0, 1, 3], vec![-1, 0]]).unwrap_err();
        assert!(err.to_string().contains("row 1"));
    }

    #[test]
    fn symmetrizer() {
        let b2 = ExchangeMatrix::from_rows(2, 0, vec![vec![0, 1], vec![-2, 0]]).unwrap();
        assert_eq!(b2.symmetrizer(), &[2, 1]);
        assert!(!b2.is_skew_symmetric());
        assert_eq!(markov().symmetrizer(), &[1, 1, 1]);
        // A cycle with inconsistent ratios.
        let bad =
            ExchangeMatrix::from_rows(3, 0, vec![vec![0, 1, -1], vec![-2, 0, 1], vec![1, -1, 0]]);
        assert!(bad.is_err());
    }

    #[test]
    fn rank_two_mutation_flips_signs() {
        let b = ExchangeMatrix::from_rows(2, 0, vec![vec![0, 2], vec![-2, 0]]).unwrap();
        assert_eq!(b.mutate(0).unwrap().rows(), vec![vec![0, -2], vec![2, 0]]);
        assert!(b.mutate(2).is_err());
    }

    #[test]
    fn markov_mutation() {
        let m = markov().mutate(0).unwrap();
        assert_eq!(
            m.rows(),
            vec![vec![0, -2, 2], vec![2, 0, -2], vec![-2, 2, 0]]
        );
        for k in 0..3 {
            assert_eq!(markov().mutate(k).unwrap().mutate(k).unwrap(), markov());
        }
    }

    #[test]
    fn acyclicity() {
        assert!(a2().is_acyclic());
        assert!(!markov().is_acyclic());
        let zero = ExchangeMatrix::from_rows(3, 0, vec![vec![0; 3]; 3]).unwrap();
        assert!(zero.is_acyclic());
        let a3 =
            ExchangeMatrix::from_rows(3, 0, vec![vec![0, 1, 0], vec![-1, 0, 1], vec![0, -1, 0]])
                .unwrap();
        assert!(a3.is_acyclic());
    }

    #[test]
    fn a2_seed_mutations() {
        let root = Seed::root(a2());
        let lim = TermLimits::default();
        let s1 = root.mutate(0, &lim).unwrap();
        assert_eq!(*s1.var(0), p(2, &[(1, &[-1, 0]), (1, &[-1, 1])]));
        assert_eq!(s1.var(1), root.var(1));
        let s2 = s1.mutate(1, &lim).unwrap();
        // (x1 + 1 + x2) / (x1 x2)
        assert_eq!(
            *s2.var(1),
            p(2, &[(1, &[0, -1]), (1, &[-1, -1]), (1, &[-1, 0])])
        );
        assert_eq!(s2.path_from_root().to_string(), "1,2");
    }

    #[test]
    fn seed_involution() {
        let lim = TermLimits::default();
        let root = Seed::root(
            ExchangeMatrix::with_coefficients(
                vec![vec![0, 2, -2], vec![-2, 0, 2], vec![2, -2, 0]],
                &CoeffPreset::Principal,
            )
            .unwrap(),
        );
        let s = root.apply_walk(&"1,2,3".parse().unwrap(), &lim).unwrap();
        for k in 0..3 {
            assert_eq!(s.mutate(k, &lim).unwrap().mutate(k, &lim).unwrap(), s);
        }
    }

    #[test]
    fn single_rank_seed() {
        let root = Seed::root(ExchangeMatrix::from_rows(1, 0, vec![vec![0]]).unwrap());
        let s = root.mutate(0, &TermLimits::default()).unwrap();
        // (1 + 1) / x1
        assert_eq!(*s.var(0), p(1, &[(2, &[-1])]));
    }

    #[test]
    fn pentagon() {
        let root = Seed::root(a2());
        let end = root
            .apply_walk(&"1,2,1,2,1".parse().unwrap(), &TermLimits::default())
            .unwrap();
        assert_eq!(end.permuted(&[1, 0]).matrix(), root.matrix());
        assert_eq!(end.var(0), root.var(1));
        assert_eq!(end.var(1), root.var(0));
        assert_eq!(end.key(), root.key());
    }

    #[test]
    fn walk_validation() {
        let root = Seed::root(a2());
        assert!("1,1".parse::<MutationWalk>().is_err());
        assert!(root
            .apply_walk(&"3".parse().unwrap(), &TermLimits::default())
            .is_err());
        assert_eq!(
            root.apply_walk(&MutationWalk::empty(), &TermLimits::default())
                .unwrap(),
            root
        );
    }

    #[test]
    fn seed_keys() {
        let root = Seed::root(markov());
        let swapped = root.permuted(&[1, 0, 2]);
        assert_ne!(swapped.matrix(), root.matrix());
        assert_eq!(swapped.key(), root.key());
        let s1 = root.mutate(0, &TermLimits::default()).unwrap();
        assert_ne!(s1.key(), root.key());
    }

    #[test]
    fn principal_y_follows_matrix() {
        let m = ExchangeMatrix::with_coefficients(
            vec![vec![0, 1], vec![-1, 0]],
            &CoeffPreset::Principal,
        )
        .unwrap();
        let y = m.mutate(0).unwrap().y();
        assert_eq!(y[0].exponents(), &[-1, 0]);
        assert_eq!(y[1].exponents(), &[1, 1]);
    }

    #[test]
    fn resource_guard() {
        let lim = TermLimits {
            per_polynomial: 3,
            per_seed: 100,
        };
        let r = Seed::root(markov()).apply_walk(&"1,2,3".parse().unwrap(), &lim);
        assert!(r.unwrap_err().is_resource_exceeded());
    }
}
