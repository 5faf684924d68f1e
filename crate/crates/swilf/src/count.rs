//! Exact counting and enumeration of pattern-avoiding permutations.
//!
//! The engine builds permutations by appending one position at a time and,
//! after each extension, tests only the occurrences that would use the new
//! rightmost entry, pruning the branch on the first hit. Branches below a
//! fixed sharding depth become independent tasks; shard results are combined
//! by exact-integer addition, so counts are deterministic regardless of the
//! number of worker threads.
//!
//! [`oracle`] holds the deliberately naive reference path (filter all `n!`
//! permutations with a combinations-based containment check) that the tests
//! compare against.

use std::collections::BTreeMap;
use std::sync::Mutex;

use num::bigint::BigUint;
use num::integer::binomial;
use num::rational::BigRational;
use num::traits::{One, Zero};
use num::BigInt;
use rayon::prelude::*;
use thiserror::Error;

use crate::perm::{Entry, IncrementalMatcher, Permutation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CountError {
    #[error("the pattern must be nonempty")]
    EmptyPattern,
    #[error("n = {n} exceeds the ceiling {ceiling}; raise it or pass the override")]
    CeilingExceeded { n: usize, ceiling: usize },
    #[error("n = {n} exceeds the engine's hard limit of 64")]
    TooLarge { n: usize },
    #[error("n must be at least 1 here")]
    ZeroLength,
    #[error("the prefix length r must be at least 1")]
    ZeroPrefix,
    #[error("composite pattern length {len} exceeds the limit {limit}")]
    CompositeTooLong { len: usize, limit: usize },
    #[error("could not build the worker pool: {0}")]
    Pool(String),
}

/// Resource limits and parallelism knobs for a [`Counter`].
#[derive(Debug, Clone)]
pub struct CounterConfig {
    /// Largest `n` accepted by the counting operations.
    pub count_ceiling: usize,
    /// Largest `n` accepted by full enumeration streams.
    pub enum_ceiling: usize,
    /// Largest `n` accepted by witness-family generation.
    pub witness_ceiling: usize,
    /// Largest composite pattern length accepted by the prefix-equivalence
    /// checker.
    pub composite_limit: usize,
    /// Worker threads; 0 means one per available CPU.
    pub workers: usize,
    /// Prefix depth below which counting branches become parallel tasks.
    pub shard_depth: usize,
}

impl Default for CounterConfig {
    fn default() -> Self {
        CounterConfig {
            count_ceiling: 12,
            enum_ceiling: 8,
            witness_ceiling: 10,
            composite_limit: 6,
            workers: 0,
            shard_depth: 3,
        }
    }
}

/// Exact counts `S_n(q)` keyed by `(canonical pattern text, n)`.
#[derive(Debug, Default, Clone)]
pub struct CountTable {
    entries: BTreeMap<(String, usize), BigUint>,
}

impl CountTable {
    pub fn new() -> Self {
        CountTable::default()
    }

    pub fn get(&self, pattern: &Permutation, n: usize) -> Option<&BigUint> {
        self.entries.get(&(pattern.canonical_string(), n))
    }

    pub fn insert(&mut self, pattern: &Permutation, n: usize, count: BigUint) {
        self.entries.insert((pattern.canonical_string(), n), count);
    }

    pub fn insert_raw(&mut self, pattern_text: String, n: usize, count: BigUint) {
        self.entries.insert((pattern_text, n), count);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(String, usize), &BigUint)> {
        self.entries.iter()
    }
}

/// Counts of avoiders refined by their number of left-to-right minima.
/// Values of `m` with a zero count are omitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatDistribution {
    pub n: usize,
    per_m: BTreeMap<usize, BigUint>,
}

impl StatDistribution {
    pub fn get(&self, m: usize) -> BigUint {
        self.per_m.get(&m).cloned().unwrap_or_else(BigUint::zero)
    }

    pub fn total(&self) -> BigUint {
        self.per_m.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&usize, &BigUint)> {
        self.per_m.iter()
    }
}

/// Outcome of comparing two patterns' avoidance counts up to some `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WilfComparison {
    Agree { upto: usize },
    Disagree { n: usize, first: BigUint, second: BigUint },
}

/// Counts for the pair `12...r v` versus `r(r-1)...1 v`, which always agree.
#[derive(Debug, Clone)]
pub struct BwxReport {
    pub increasing_composite: Permutation,
    pub decreasing_composite: Permutation,
    /// `(n, count for the increasing prefix, count for the decreasing prefix)`
    pub counts: Vec<(usize, BigUint, BigUint)>,
    /// First `n` at which the counts differ, if any.
    pub counterexample: Option<usize>,
}

/// The counting engine. Completed counts are kept in an internal table that
/// is consulted before any computation; the table can be seeded from and
/// drained to persistent storage by callers.
pub struct Counter {
    cfg: CounterConfig,
    pool: rayon::ThreadPool,
    table: Mutex<CountTable>,
}

impl Counter {
    pub fn new(cfg: CounterConfig) -> Result<Self, CountError> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build()
            .map_err(|e| CountError::Pool(e.to_string()))?;
        Ok(Counter { cfg, pool, table: Mutex::new(CountTable::new()) })
    }

    pub fn with_defaults() -> Self {
        Counter::new(CounterConfig::default()).expect("default pool")
    }

    pub fn config(&self) -> &CounterConfig {
        &self.cfg
    }

    /// Copies `entries` into the internal count table.
    pub fn seed_table(&self, entries: &CountTable) {
        let mut table = self.table.lock().expect("count table lock");
        for ((pat, n), c) in entries.iter() {
            table.insert_raw(pat.clone(), *n, c.clone());
        }
    }

    /// A snapshot of the internal count table.
    pub fn table_snapshot(&self) -> CountTable {
        self.table.lock().expect("count table lock").clone()
    }

    /// The exact number of `n`-permutations avoiding `pattern`.
    pub fn count_avoiders(&self, pattern: &Permutation, n: usize) -> Result<BigUint, CountError> {
        self.check_countable(pattern, n, self.cfg.count_ceiling)?;
        if let Some(c) = self.table.lock().expect("count table lock").get(pattern, n) {
            return Ok(c.clone());
        }
        let dist = self.minima_refined_counts(pattern, n);
        let total: BigUint = dist.iter().sum();
        self.table
            .lock()
            .expect("count table lock")
            .insert(pattern, n, total.clone());
        Ok(total)
    }

    /// The avoider count refined by the number of left-to-right minima.
    pub fn count_by_lr_minima(
        &self,
        pattern: &Permutation,
        n: usize,
    ) -> Result<StatDistribution, CountError> {
        if n == 0 {
            return Err(CountError::ZeroLength);
        }
        self.check_countable(pattern, n, self.cfg.count_ceiling)?;
        let counts = self.minima_refined_counts(pattern, n);
        let total: BigUint = counts.iter().sum();
        self.table.lock().expect("count table lock").insert(pattern, n, total);
        let per_m = counts
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        Ok(StatDistribution { n, per_m })
    }

    /// All `n`-permutations avoiding `pattern`, in lexicographic order.
    pub fn enumerate_avoiders(
        &self,
        pattern: &Permutation,
        n: usize,
    ) -> Result<AvoiderIter, CountError> {
        self.check_countable(pattern, n, self.cfg.enum_ceiling)?;
        Ok(AvoiderIter::new(pattern.clone(), n))
    }

    /// Compares `S_n(first)` and `S_n(second)` for every `n <= max_n`.
    pub fn wilf_equivalent_upto(
        &self,
        first: &Permutation,
        second: &Permutation,
        max_n: usize,
    ) -> Result<WilfComparison, CountError> {
        for n in 0..=max_n {
            let a = self.count_avoiders(first, n)?;
            let b = self.count_avoiders(second, n)?;
            if a != b {
                return Ok(WilfComparison::Disagree { n, first: a, second: b });
            }
        }
        Ok(WilfComparison::Agree { upto: max_n })
    }

    /// Builds the composite patterns `12...r v` and `r(r-1)...1 v` (with `v`
    /// taken on the values `r+1, ..., r+|v|`) and compares their avoidance
    /// counts for every `n <= max_n`.
    pub fn verify_bwx(
        &self,
        r: usize,
        tail: &Permutation,
        max_n: usize,
    ) -> Result<BwxReport, CountError> {
        if r == 0 {
            return Err(CountError::ZeroPrefix);
        }
        let len = r + tail.len();
        if len > self.cfg.composite_limit {
            return Err(CountError::CompositeTooLong { len, limit: self.cfg.composite_limit });
        }
        let shifted: Vec<Entry> = tail.entries().iter().map(|&v| v + r as Entry).collect();
        let mut incr: Vec<Entry> = (1..=r as Entry).collect();
        incr.extend_from_slice(&shifted);
        let mut decr: Vec<Entry> = (1..=r as Entry).rev().collect();
        decr.extend_from_slice(&shifted);
        let increasing_composite = Permutation::new(incr).expect("valid composite");
        let decreasing_composite = Permutation::new(decr).expect("valid composite");
        let mut counts = Vec::new();
        let mut counterexample = None;
        for n in 0..=max_n {
            let a = self.count_avoiders(&increasing_composite, n)?;
            let b = self.count_avoiders(&decreasing_composite, n)?;
            if a != b && counterexample.is_none() {
                counterexample = Some(n);
            }
            counts.push((n, a, b));
        }
        Ok(BwxReport { increasing_composite, decreasing_composite, counts, counterexample })
    }

    fn check_countable(
        &self,
        pattern: &Permutation,
        n: usize,
        ceiling: usize,
    ) -> Result<(), CountError> {
        if pattern.is_empty() {
            return Err(CountError::EmptyPattern);
        }
        if n > 64 {
            return Err(CountError::TooLarge { n });
        }
        if n > ceiling {
            return Err(CountError::CeilingExceeded { n, ceiling });
        }
        Ok(())
    }

    /// Counts avoiders of each minima count `m`; index `m` of the result is
    /// the number of avoiders with exactly `m` left-to-right minima.
    fn minima_refined_counts(&self, pattern: &Permutation, n: usize) -> Vec<BigUint> {
        if n == 0 {
            return vec![BigUint::one()];
        }
        let matcher = IncrementalMatcher::new(pattern);
        let depth = self.cfg.shard_depth.min(n);
        let shards = shard_prefixes(&matcher, pattern.len(), n, depth);
        let zero = || vec![BigUint::zero(); n + 1];
        self.pool.install(|| {
            shards
                .par_iter()
                .map(|s| {
                    let mut counts = zero();
                    let mut state = s.clone();
                    let mut scratch = vec![0; pattern.len()];
                    count_subtree(&matcher, pattern.len(), n, &mut state, &mut scratch, &mut counts);
                    counts
                })
                .reduce(zero, |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                })
        })
    }
}

#[derive(Clone)]
struct SearchState {
    prefix: Vec<Entry>,
    used: u64,
    current_min: Entry,
    minima: usize,
}

impl SearchState {
    fn root() -> Self {
        SearchState { prefix: Vec::new(), used: 0, current_min: Entry::MAX, minima: 0 }
    }

    fn push(&mut self, v: Entry) -> (Entry, usize) {
        let saved = (self.current_min, self.minima);
        self.prefix.push(v);
        self.used |= 1 << (v - 1);
        if v < self.current_min {
            self.current_min = v;
            self.minima += 1;
        }
        saved
    }

    fn pop(&mut self, saved: (Entry, usize)) {
        let v = self.prefix.pop().expect("pop from nonempty prefix");
        self.used &= !(1 << (v - 1));
        self.current_min = saved.0;
        self.minima = saved.1;
    }
}

/// Enumerates all avoiding prefixes of exactly `depth` entries; each becomes
/// an independent counting task.
fn shard_prefixes(
    matcher: &IncrementalMatcher,
    k: usize,
    n: usize,
    depth: usize,
) -> Vec<SearchState> {
    let mut shards = Vec::new();
    let mut state = SearchState::root();
    let mut scratch = vec![0; k];
    fn rec(
        matcher: &IncrementalMatcher,
        n: usize,
        depth: usize,
        state: &mut SearchState,
        scratch: &mut [Entry],
        out: &mut Vec<SearchState>,
    ) {
        if state.prefix.len() == depth {
            out.push(state.clone());
            return;
        }
        for v in 1..=n as Entry {
            if state.used & (1 << (v - 1)) != 0 {
                continue;
            }
            let saved = state.push(v);
            if !matcher.completes(&state.prefix, scratch) {
                rec(matcher, n, depth, state, scratch, out);
            }
            state.pop(saved);
        }
    }
    rec(matcher, n, depth, &mut state, &mut scratch, &mut shards);
    shards
}

fn count_subtree(
    matcher: &IncrementalMatcher,
    k: usize,
    n: usize,
    state: &mut SearchState,
    scratch: &mut [Entry],
    counts: &mut [BigUint],
) {
    let _ = k;
    if state.prefix.len() == n {
        counts[state.minima] += 1u32;
        return;
    }
    for v in 1..=n as Entry {
        if state.used & (1 << (v - 1)) != 0 {
            continue;
        }
        let saved = state.push(v);
        if !matcher.completes(&state.prefix, scratch) {
            count_subtree(matcher, k, n, state, scratch, counts);
        }
        state.pop(saved);
    }
}

/// Lexicographic stream of the `n`-permutations avoiding a pattern.
pub struct AvoiderIter {
    matcher: IncrementalMatcher,
    n: usize,
    state: SearchState,
    /// Per-depth next candidate value; `cursors[d]` is the smallest value not
    /// yet tried at depth `d`.
    cursors: Vec<Entry>,
    saves: Vec<(Entry, usize)>,
    scratch: Vec<Entry>,
    done: bool,
    yielded_empty: bool,
}

impl AvoiderIter {
    fn new(pattern: Permutation, n: usize) -> Self {
        let k = pattern.len();
        AvoiderIter {
            matcher: IncrementalMatcher::new(&pattern),
            n,
            state: SearchState::root(),
            cursors: vec![1; n + 1],
            saves: Vec::with_capacity(n),
            scratch: vec![0; k],
            done: false,
            yielded_empty: false,
        }
    }
}

impl Iterator for AvoiderIter {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        if self.done {
            return None;
        }
        if self.n == 0 {
            self.done = true;
            if self.yielded_empty {
                return None;
            }
            self.yielded_empty = true;
            return Some(Permutation::empty());
        }
        loop {
            let depth = self.state.prefix.len();
            if depth == self.n {
                let out = Permutation::from_trusted(self.state.prefix.clone());
                let saved = self.saves.pop().expect("depth > 0");
                self.state.pop(saved);
                return Some(out);
            }
            let mut advanced = false;
            let mut v = self.cursors[depth];
            while v <= self.n as Entry {
                if self.state.used & (1 << (v - 1)) == 0 {
                    let saved = self.state.push(v);
                    if self.matcher.completes(&self.state.prefix, &mut self.scratch) {
                        self.state.pop(saved);
                    } else {
                        self.cursors[depth] = v + 1;
                        self.cursors[depth + 1] = 1;
                        self.saves.push(saved);
                        advanced = true;
                        break;
                    }
                }
                v += 1;
            }
            if advanced {
                continue;
            }
            // exhausted this level
            if depth == 0 {
                self.done = true;
                return None;
            }
            self.cursors[depth] = 1;
            let saved = self.saves.pop().expect("depth > 0");
            self.state.pop(saved);
        }
    }
}

/// The `n`-th Catalan number, `binom(2n, n) / (n + 1)`.
pub fn catalan(n: usize) -> BigUint {
    let b = binomial(BigUint::from(2 * n), BigUint::from(n));
    b / BigUint::from(n + 1)
}

/// The printed refinement formula `(1/n) * binom(n, m) * binom(n, m+1)`,
/// evaluated exactly as a rational. Defined for `n >= 1` and any `m`
/// (the value is 0 once `m + 1 > n`). Integrality is a theorem about the
/// formula, not an assumption of this function.
pub fn narayana_formula(n: usize, m: usize) -> BigRational {
    assert!(n >= 1, "narayana_formula needs n >= 1");
    let a = binomial(BigUint::from(n), BigUint::from(m));
    let b = binomial(BigUint::from(n), BigUint::from(m + 1));
    BigRational::new(BigInt::from(a * b), BigInt::from(n))
}

pub mod oracle {
    //! Deliberately unoptimized reference implementations, kept independent
    //! of the main engine: containment scans every subsequence, and counting
    //! filters all `n!` permutations.

    use std::collections::BTreeMap;

    use num::bigint::BigUint;
    use num::traits::Zero;

    use crate::perm::{Entry, Permutation};

    /// Every permutation of `1..=n`, in no particular order.
    pub fn all_permutations(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut values: Vec<Entry> = (1..=n as Entry).collect();
        fn rec(values: &mut Vec<Entry>, chosen: &mut Vec<Entry>, out: &mut Vec<Permutation>) {
            if values.is_empty() {
                out.push(Permutation::from_trusted(chosen.clone()));
                return;
            }
            for i in 0..values.len() {
                let v = values.remove(i);
                chosen.push(v);
                rec(values, chosen, out);
                chosen.pop();
                values.insert(i, v);
            }
        }
        rec(&mut values, &mut Vec::with_capacity(n), &mut out);
        out
    }

    /// Containment by checking every `k`-subset of positions for order
    /// isomorphism.
    pub fn contains_naive(host: &Permutation, pattern: &Permutation) -> bool {
        let k = pattern.len();
        if k == 0 {
            return true;
        }
        if k > host.len() {
            return false;
        }
        let mut idx = Vec::with_capacity(k);
        subsets(host, pattern, &mut idx, 0)
    }

    fn subsets(host: &Permutation, pattern: &Permutation, idx: &mut Vec<usize>, from: usize) -> bool {
        let k = pattern.len();
        if idx.len() == k {
            let values: Vec<Entry> = idx.iter().map(|&i| host.entries()[i]).collect();
            return Permutation::flatten(&values) == *pattern;
        }
        for i in from..host.len() {
            idx.push(i);
            if subsets(host, pattern, idx, i + 1) {
                return true;
            }
            idx.pop();
        }
        false
    }

    /// `S_n(q)` by filtering all `n!` permutations.
    pub fn count_avoiders(pattern: &Permutation, n: usize) -> BigUint {
        let mut count = BigUint::zero();
        for p in all_permutations(n) {
            if !contains_naive(&p, pattern) {
                count += 1u32;
            }
        }
        count
    }

    /// Minima distribution of the avoiders, by filtering and tallying.
    pub fn minima_distribution(pattern: &Permutation, n: usize) -> BTreeMap<usize, BigUint> {
        let mut dist: BTreeMap<usize, BigUint> = BTreeMap::new();
        for p in all_permutations(n) {
            if !contains_naive(&p, pattern) {
                let m = p.lr_minima().expect("n >= 1").len();
                *dist.entry(m).or_default() += 1u32;
            }
        }
        dist
    }
}
