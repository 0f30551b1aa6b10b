//! Exact seed mutation for cluster algebras of geometric type: Laurent
//! expansions in a fixed root cluster, denominator vectors by expansion and
//! by recurrence, and a harness that checks positivity of denominator
//! vectors along walks in the exchange tree.

pub mod cli;
pub mod dvector;
pub mod error;
pub mod explorer;
pub mod input;
pub mod laurent;
pub mod seed;
pub mod tropical;
pub mod walk;

pub use dvector::{dvec_along_walk, dvec_from_expansion, dvec_recurrence_step, DVector};
pub use error::{Error, Result};
pub use laurent::{ExponentVector, LaurentPolynomial, DEFAULT_TERM_CAP};
pub use seed::{CoeffPreset, ExchangeMatrix, Seed, SeedKey, TermLimits, DEFAULT_SEED_TERM_CAP};
pub use tropical::{y_mutate, TropicalElement};
pub use walk::MutationWalk;
