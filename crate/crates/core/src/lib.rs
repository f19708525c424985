//! Exact combinatorics of permutations with fixed points.
//!
//! The crate computes rencontres numbers `p_n(k)` (permutations of an
//! `n`-set with exactly `k` fixed points) and the sequences they are tied
//! to: derangements, signed Stirling numbers of the first kind, Stirling
//! numbers of the second kind, Bell numbers and Eulerian numbers. All
//! values are exact arbitrary-precision integers or rationals.
//!
//! On top of the sequences sit three verification layers:
//!
//! * [`identities`] evaluates both sides of a catalog of sum rules
//!   (moment identities, nested binomial expansions, Bell-number
//!   representations) exactly, including "as written" variants of
//!   formulas that are known to contain misprints;
//! * [`oracle`] recomputes histograms by exhaustive enumeration of
//!   permutations and set partitions, as independent ground truth;
//! * [`bounds`] checks magnitude bounds and Lambert-W asymptotics for
//!   Stirling and Bell numbers in log-domain high-precision arithmetic.

#![forbid(unsafe_code)]

pub mod bounds;
pub mod cache;
pub mod combinat;
pub mod identities;
pub mod oracle;
pub mod poly;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;

/// Named integer parameters of one identity or bound evaluation.
pub type Params = std::collections::BTreeMap<String, i64>;

/// Convenience constructor for parameter maps.
pub fn params_from(pairs: &[(&str, i64)]) -> Params {
    pairs
        .iter()
        .map(|(name, v)| (name.to_string(), *v))
        .collect()
}

/// Arbitrary-precision nonnegative integer; all plain counts live here.
pub type Nat = BigUint;
/// Arbitrary-precision signed integer; signed Stirling numbers and
/// alternating partial sums live here.
pub type Int = BigInt;
/// Arbitrary-precision rational in lowest terms with positive denominator.
pub type Rat = BigRational;

/// Errors shared by every module of the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A mathematical precondition was violated (undefined expression,
    /// parameter outside the identity's validity range, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// The caller supplied an unusable request (missing or extraneous
    /// parameters, unknown names, malformed ranges).
    #[error("usage error: {0}")]
    Usage(String),
    /// An enumeration or sweep was larger than the configured ceiling.
    #[error("resource limit: {0}")]
    ResourceLimit(String),
    /// Malformed input data, with the 1-based line it was found on.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
