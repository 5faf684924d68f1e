//! Exact combinatorics of permutation patterns: containment testing, avoidance
//! enumeration, minima/remaining-string merging, and growth-rate bounds for
//! Stanley-Wilf sequences.
//!
//! The crate is organized around four modules:
//!
//! * [`perm`] — the [`Permutation`] value type, containment, symmetries, and
//!   all pattern constructions (layered patterns, block-structured strings,
//!   prepend-one families, ...).
//! * [`count`] — the exact counting engine: `S_n(q)` by pruned backtracking,
//!   avoider enumeration, counts refined by left-to-right minima, Wilf
//!   comparisons, and a deliberately naive brute-force oracle for
//!   cross-checking.
//! * [`merge`] — triples `(T, Z, S)` of a minima profile plus a remaining
//!   string, the merge that realizes them as a permutation, and the
//!   block-structured witness families for lower bounds.
//! * [`limits`] — exact quadratic-irrational arithmetic, closed-form
//!   Stanley-Wilf limits, finite lower bounds, upper-bound chains, and the
//!   growth-exponent optimizer.
//!
//! All types are immutable values and every operation is a pure function, so
//! everything here can be shared freely across threads. Counting may use a
//! thread pool internally but its results are deterministic.

pub mod count;
pub mod limits;
pub mod merge;
pub mod perm;

/// The engine version recorded in persisted count-cache entries.
pub fn engine_version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

pub use count::{catalan, narayana_formula, Counter, CounterConfig, CountError, CountTable, StatDistribution};
pub use limits::{AlgebraicValue, BoundReport, FeketeBound};
pub use merge::{MergeOutcome, Triple, WitnessParams};
pub use perm::{BlockSpec, Decomposability, LayerComposition, MinimaProfile, Permutation};
