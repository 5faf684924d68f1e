//! Permutations in one-line notation, pattern containment, and the pattern
//! constructions the rest of the crate builds on.
//!
//! Conventions are 1-based throughout: a permutation of length `n` is a
//! rearrangement of `1..=n`, and positions run from `1` to `n`. A
//! `Permutation` doubles as a pattern; containment only ever looks at
//! relative order.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// The integer type used for permutation entries.
pub type Entry = u32;

/// A permutation of `{1, ..., n}` in one-line notation. The empty
/// permutation (`n = 0`) is a valid value.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    entries: Vec<Entry>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermutationError {
    #[error("value {0} appears more than once")]
    Duplicate(Entry),
    #[error("value {value} is out of range 1..={n}")]
    OutOfRange { value: Entry, n: usize },
    #[error("the empty permutation has no left-to-right minima")]
    Empty,
    #[error("the pattern family is defined for k >= 4, got k = {k}")]
    FamilyIndex { k: usize },
    #[error("a layer composition needs every layer length to be at least 1")]
    ZeroLayer,
    #[error("a block specification needs at least one block")]
    NoBlocks,
}

/// Errors produced when parsing a permutation from text. Each variant names
/// the offending token.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParsePermutationError {
    #[error("empty token at position {index}")]
    EmptyToken { index: usize },
    #[error("could not read '{token}' as a positive integer")]
    InvalidToken { token: String },
    #[error("token '{token}' is out of range 1..={n}")]
    OutOfRange { token: String, n: usize },
    #[error("token '{token}' repeats a value")]
    Duplicate { token: String },
}

impl Permutation {
    /// Validates that `entries` is a rearrangement of `1..=n`.
    pub fn new(entries: Vec<Entry>) -> Result<Self, PermutationError> {
        let n = entries.len();
        let mut seen = vec![false; n];
        for &v in &entries {
            if v == 0 || v as usize > n {
                return Err(PermutationError::OutOfRange { value: v, n });
            }
            if seen[v as usize - 1] {
                return Err(PermutationError::Duplicate(v));
            }
            seen[v as usize - 1] = true;
        }
        Ok(Permutation { entries })
    }

    /// Internal constructor for values known to be valid by construction.
    pub(crate) fn from_trusted(entries: Vec<Entry>) -> Self {
        debug_assert!(Permutation::new(entries.clone()).is_ok());
        Permutation { entries }
    }

    pub fn empty() -> Self {
        Permutation { entries: Vec::new() }
    }

    /// The increasing permutation `1 2 ... n`.
    pub fn increasing(n: usize) -> Self {
        Permutation { entries: (1..=n as Entry).collect() }
    }

    /// The decreasing permutation `n ... 2 1`.
    pub fn decreasing(n: usize) -> Self {
        Permutation { entries: (1..=n as Entry).rev().collect() }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    /// The pattern order-isomorphic to a sequence of distinct values:
    /// each value is replaced by its rank within the sequence.
    pub fn flatten(values: &[Entry]) -> Self {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by_key(|&i| values[i]);
        let mut entries = vec![0; values.len()];
        for (rank, &i) in order.iter().enumerate() {
            entries[i] = rank as Entry + 1;
        }
        Permutation { entries }
    }

    /// Compact text form: a digit string for `n <= 9`, comma-separated
    /// otherwise. `Display` uses this.
    pub fn compact_string(&self) -> String {
        if self.len() <= 9 {
            self.entries.iter().map(|v| v.to_string()).collect()
        } else {
            self.canonical_string()
        }
    }

    /// Canonical machine form: always comma-separated.
    pub fn canonical_string(&self) -> String {
        self.entries
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// True iff some subsequence of `self` is order-isomorphic to `pattern`.
    ///
    /// Depth-first matching over host positions with two prunings: the host
    /// suffix must be long enough for the pattern entries still unmatched,
    /// and a candidate entry must fit between the tightest already-matched
    /// values below and above the pattern entry.
    ///
    /// Every permutation contains the empty pattern.
    pub fn contains(&self, pattern: &Permutation) -> bool {
        let k = pattern.len();
        if k == 0 {
            return true;
        }
        if k > self.len() {
            return false;
        }
        let bounds = LeftBounds::new(&pattern.entries, false);
        let mut matched = vec![0; k];
        match_from(&self.entries, k, &bounds, &mut matched, 0, 0)
    }

    pub fn avoids(&self, pattern: &Permutation) -> bool {
        !self.contains(pattern)
    }

    /// The left-to-right minima profile `(T, Z)`: positions and values of the
    /// entries smaller than everything before them. Errors on the empty
    /// permutation.
    pub fn lr_minima(&self) -> Result<MinimaProfile, PermutationError> {
        if self.is_empty() {
            return Err(PermutationError::Empty);
        }
        let mut positions = Vec::new();
        let mut values = Vec::new();
        let mut cur = Entry::MAX;
        for (i, &v) in self.entries.iter().enumerate() {
            if v < cur {
                positions.push(i + 1);
                values.push(v);
                cur = v;
            }
        }
        Ok(MinimaProfile { positions, values, ambient: self.len() })
    }

    /// The subsequence of entries that are not left-to-right minima, both as
    /// raw values and flattened to a pattern. Empty permutations and
    /// decreasing permutations have an empty remaining string.
    pub fn remaining_string(&self) -> RemainingString {
        let mut raw = Vec::new();
        let mut cur = Entry::MAX;
        for &v in &self.entries {
            if v < cur {
                cur = v;
            } else {
                raw.push(v);
            }
        }
        let flattened = Permutation::flatten(&raw);
        RemainingString { raw, flattened }
    }

    /// The reverse complement: entry `i` of the result is `k+1 - q_{k+1-i}`.
    /// An involution that preserves avoidance counts.
    pub fn reverse_complement(&self) -> Permutation {
        let k = self.len() as Entry;
        let entries = self
            .entries
            .iter()
            .rev()
            .map(|&v| k + 1 - v)
            .collect();
        Permutation { entries }
    }

    /// Every cut position `c` with `min(q_1..q_c) > max(q_{c+1}..q_k)`, i.e.
    /// all entries left of the cut larger than all entries right of it.
    /// A pattern with no such cut is indecomposable.
    pub fn decomposability(&self) -> Decomposability {
        let k = self.len();
        let mut cuts = Vec::new();
        let mut min_left = Entry::MAX;
        // suffix maxima
        let mut max_right = vec![0; k + 1];
        for i in (0..k).rev() {
            max_right[i] = max_right[i + 1].max(self.entries[i]);
        }
        for c in 1..k {
            min_left = min_left.min(self.entries[c - 1]);
            if min_left > max_right[c] {
                cuts.push(c);
            }
        }
        if cuts.is_empty() {
            Decomposability::Indecomposable
        } else {
            Decomposability::DecomposableAt(cuts)
        }
    }

    pub fn is_indecomposable(&self) -> bool {
        matches!(self.decomposability(), Decomposability::Indecomposable)
    }

    /// True iff no cut has all entries left of it smaller than all entries
    /// right of it. No nonempty permutation is both sum-decomposable and
    /// decomposable in the skew sense.
    pub fn is_sum_indecomposable(&self) -> bool {
        let k = self.len();
        let mut min_right = vec![Entry::MAX; k + 1];
        for i in (0..k).rev() {
            min_right[i] = min_right[i + 1].min(self.entries[i]);
        }
        let mut max_left = 0;
        for c in 1..k {
            max_left = max_left.max(self.entries[c - 1]);
            if max_left < min_right[c] {
                return false;
            }
        }
        true
    }

    /// If the permutation is layered — a concatenation of decreasing runs
    /// whose values increase from one run to the next — returns its unique
    /// layer-length composition.
    pub fn layers(&self) -> Option<LayerComposition> {
        let mut lengths = Vec::new();
        let mut used = 0 as Entry; // values 1..=used already consumed
        let mut i = 0;
        while i < self.len() {
            let top = self.entries[i];
            if top <= used {
                return None;
            }
            let layer_len = (top - used) as usize;
            for j in 0..layer_len {
                if i + j >= self.len() || self.entries[i + j] != top - j as Entry {
                    return None;
                }
            }
            lengths.push(layer_len);
            used = top;
            i += layer_len;
        }
        Some(LayerComposition { lengths })
    }

    pub fn is_layered(&self) -> bool {
        self.layers().is_some()
    }

    /// Adds 1 to every entry and prepends the entry 1.
    pub fn prepend_one(&self) -> Permutation {
        let mut entries = Vec::with_capacity(self.len() + 1);
        entries.push(1);
        entries.extend(self.entries.iter().map(|&v| v + 1));
        Permutation { entries }
    }

    /// The inverse of [`prepend_one`](Self::prepend_one): defined exactly
    /// when the first entry is 1.
    pub fn strip_leading_one(&self) -> Option<Permutation> {
        if self.entries.first() != Some(&1) {
            return None;
        }
        let entries = self.entries[1..].iter().map(|&v| v - 1).collect();
        Some(Permutation { entries })
    }

    /// Prepends 1 and appends `k+2` around the shifted pattern: the result
    /// has first entry 1, middle entries `q_i + 1`, and last entry `k+2`.
    pub fn sandwich(&self) -> Permutation {
        let k = self.len() as Entry;
        let mut entries = Vec::with_capacity(self.len() + 2);
        entries.push(1);
        entries.extend(self.entries.iter().map(|&v| v + 1));
        entries.push(k + 2);
        Permutation { entries }
    }

    /// Direct sum: `self` followed by `other` with `other`'s values shifted
    /// above `self`'s.
    pub fn direct_sum(&self, other: &Permutation) -> Permutation {
        let shift = self.len() as Entry;
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().map(|&v| v + shift));
        Permutation { entries }
    }

    /// Skew sum: `self` followed by `other` with `self`'s values shifted
    /// above `other`'s.
    pub fn skew_sum(&self, other: &Permutation) -> Permutation {
        let shift = other.len() as Entry;
        let mut entries: Vec<Entry> = self.entries.iter().map(|&v| v + shift).collect();
        entries.extend_from_slice(&other.entries);
        Permutation { entries }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.compact_string())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({})", self.compact_string())
    }
}

/// A permutation can be written two ways:
/// * a digit string such as `1342` (entries up to 9 only), or
/// * a comma-separated list such as `1,3,4,2` (required once `n >= 10`).
///
/// The empty string parses to the empty permutation.
impl FromStr for Permutation {
    type Err = ParsePermutationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Permutation::empty());
        }
        let tokens: Vec<String> = if s.contains(',') {
            s.split(',').map(|t| t.trim().to_string()).collect()
        } else {
            s.chars().map(|c| c.to_string()).collect()
        };
        let n = tokens.len();
        let mut values = Vec::with_capacity(n);
        for (idx, tok) in tokens.iter().enumerate() {
            if tok.is_empty() {
                return Err(ParsePermutationError::EmptyToken { index: idx + 1 });
            }
            let v: Entry = tok
                .parse()
                .map_err(|_| ParsePermutationError::InvalidToken { token: tok.clone() })?;
            values.push(v);
        }
        let mut seen = vec![false; n];
        for (tok, &v) in tokens.iter().zip(&values) {
            if v == 0 || v as usize > n {
                return Err(ParsePermutationError::OutOfRange { token: tok.clone(), n });
            }
            if seen[v as usize - 1] {
                return Err(ParsePermutationError::Duplicate { token: tok.clone() });
            }
            seen[v as usize - 1] = true;
        }
        Ok(Permutation { entries: values })
    }
}

/// The positions `T` and values `Z` of the left-to-right minima of a
/// permutation of length `ambient`. Positions are ascending and the values,
/// read in position order, strictly decrease.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimaProfile {
    positions: Vec<usize>,
    values: Vec<Entry>,
    ambient: usize,
}

impl MinimaProfile {
    /// Number of minima.
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Minima positions, ascending, 1-based. Position 1 is always present.
    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    /// Minima values in position order (strictly decreasing).
    pub fn values(&self) -> &[Entry] {
        &self.values
    }

    /// Minima values sorted ascending.
    pub fn values_ascending(&self) -> Vec<Entry> {
        let mut v = self.values.clone();
        v.sort_unstable();
        v
    }

    pub fn ambient_n(&self) -> usize {
        self.ambient
    }
}

/// The non-minima of a permutation, as raw values and as the flattened
/// pattern they form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemainingString {
    pub raw: Vec<Entry>,
    pub flattened: Permutation,
}

/// Result of the skew-cut analysis: either no cut exists, or the full list
/// of cut positions (needed by the layered machinery, which wants the
/// leading-layer length).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decomposability {
    Indecomposable,
    DecomposableAt(Vec<usize>),
}

/// Layer lengths of a layered permutation; all lengths are >= 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerComposition {
    lengths: Vec<usize>,
}

impl LayerComposition {
    pub fn new(lengths: Vec<usize>) -> Result<Self, PermutationError> {
        if lengths.contains(&0) {
            return Err(PermutationError::ZeroLayer);
        }
        Ok(LayerComposition { lengths })
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn total(&self) -> usize {
        self.lengths.iter().sum()
    }

    /// The layered permutation with these layer lengths: decreasing runs
    /// whose value blocks increase left to right. `(3,4)` gives `3217654`.
    pub fn to_permutation(&self) -> Permutation {
        let mut entries = Vec::with_capacity(self.total());
        let mut base = 0 as Entry;
        for &len in &self.lengths {
            let top = base + len as Entry;
            entries.extend((base + 1..=top).rev());
            base = top;
        }
        Permutation::from_trusted(entries)
    }

    /// All compositions of `k`, i.e. all layered patterns of length `k`.
    pub fn all(k: usize) -> Vec<LayerComposition> {
        if k == 0 {
            return vec![LayerComposition { lengths: vec![] }];
        }
        let mut out = Vec::new();
        for first in 1..=k {
            for rest in LayerComposition::all(k - first) {
                let mut lengths = vec![first];
                lengths.extend(rest.lengths);
                out.push(LayerComposition { lengths });
            }
        }
        out
    }
}

/// A block-structured permutation specification: blocks are concatenated
/// left to right, with each block's values lying entirely below every block
/// to its left.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSpec {
    blocks: Vec<Permutation>,
}

impl BlockSpec {
    pub fn new(blocks: Vec<Permutation>) -> Result<Self, PermutationError> {
        if blocks.is_empty() {
            return Err(PermutationError::NoBlocks);
        }
        Ok(BlockSpec { blocks })
    }

    pub fn blocks(&self) -> &[Permutation] {
        &self.blocks
    }

    pub fn total_len(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).sum()
    }

    /// Realizes the specification: a skew-sum of the blocks, so the leftmost
    /// block occupies the largest values. `(21, 12)` gives `4312`.
    pub fn to_permutation(&self) -> Permutation {
        let mut iter = self.blocks.iter();
        let first = iter.next().expect("BlockSpec has at least one block").clone();
        iter.fold(first, |acc, b| acc.skew_sum(b))
    }
}

/// The pattern `1 2 ... (k-3) (k-1) k (k-2)` of length `k >= 4`; member 4 is
/// `1342`, and each longer member is `prepend_one` of the previous one.
pub fn tower_pattern(k: usize) -> Result<Permutation, PermutationError> {
    if k < 4 {
        return Err(PermutationError::FamilyIndex { k });
    }
    let k = k as Entry;
    let mut entries: Vec<Entry> = (1..=k - 3).collect();
    entries.extend([k - 1, k, k - 2]);
    Ok(Permutation::from_trusted(entries))
}

/// Tightest already-placed pattern neighbours for each pattern index: the
/// index of the largest smaller earlier entry (`floor`) and of the smallest
/// larger earlier entry (`ceil`). With `pin_last`, the final pattern index
/// counts as already placed, which is what the incremental matcher needs.
pub(crate) struct LeftBounds {
    floor: Vec<Option<usize>>,
    ceil: Vec<Option<usize>>,
}

impl LeftBounds {
    pub(crate) fn new(pattern: &[Entry], pin_last: bool) -> Self {
        let k = pattern.len();
        let scan = if pin_last { k - 1 } else { k };
        let mut floor = vec![None; scan];
        let mut ceil = vec![None; scan];
        for i in 0..scan {
            let consider = |j: usize, f: &mut Option<usize>, c: &mut Option<usize>| {
                if pattern[j] < pattern[i] && f.is_none_or(|fj: usize| pattern[j] > pattern[fj]) {
                    *f = Some(j);
                }
                if pattern[j] > pattern[i] && c.is_none_or(|cj: usize| pattern[j] < pattern[cj]) {
                    *c = Some(j);
                }
            };
            let (mut f, mut c) = (None, None);
            for j in 0..i {
                consider(j, &mut f, &mut c);
            }
            if pin_last {
                consider(k - 1, &mut f, &mut c);
            }
            floor[i] = f;
            ceil[i] = c;
        }
        LeftBounds { floor, ceil }
    }
}

fn match_from(
    host: &[Entry],
    k: usize,
    bounds: &LeftBounds,
    matched: &mut [Entry],
    i: usize,
    from: usize,
) -> bool {
    if i == k {
        return true;
    }
    // not enough host entries left for the rest of the pattern
    let last_start = host.len() + i - k;
    for pos in from..=last_start {
        let v = host[pos];
        if let Some(f) = bounds.floor[i] {
            if v <= matched[f] {
                continue;
            }
        }
        if let Some(c) = bounds.ceil[i] {
            if v >= matched[c] {
                continue;
            }
        }
        matched[i] = v;
        if match_from(host, k, bounds, matched, i + 1, pos + 1) {
            return true;
        }
    }
    false
}

/// Incremental occurrence test used by the counting engine: does `prefix`
/// (a sequence of distinct values) contain the pattern with the occurrence
/// ending exactly at the last element of `prefix`?
pub(crate) struct IncrementalMatcher {
    pattern: Vec<Entry>,
    bounds: LeftBounds,
}

impl IncrementalMatcher {
    pub(crate) fn new(pattern: &Permutation) -> Self {
        IncrementalMatcher {
            pattern: pattern.entries().to_vec(),
            bounds: LeftBounds::new(pattern.entries(), !pattern.is_empty()),
        }
    }

    pub(crate) fn completes(&self, prefix: &[Entry], scratch: &mut [Entry]) -> bool {
        let k = self.pattern.len();
        debug_assert_eq!(scratch.len(), k);
        if k == 0 {
            return true;
        }
        if prefix.len() < k {
            return false;
        }
        let last = *prefix.last().expect("prefix is nonempty");
        scratch[k - 1] = last;
        self.match_pinned(&prefix[..prefix.len() - 1], scratch, 0, 0)
    }

    fn match_pinned(&self, host: &[Entry], matched: &mut [Entry], i: usize, from: usize) -> bool {
        let k = self.pattern.len();
        if i == k - 1 {
            return true;
        }
        if host.len() + i + 1 < k {
            return false;
        }
        let last_start = host.len() + i + 1 - k;
        for pos in from..=last_start {
            let v = host[pos];
            if let Some(f) = self.bounds.floor[i] {
                if v <= matched[f] {
                    continue;
                }
            }
            if let Some(c) = self.bounds.ceil[i] {
                if v >= matched[c] {
                    continue;
                }
            }
            matched[i] = v;
            if self.match_pinned(host, matched, i + 1, pos + 1) {
                return true;
            }
        }
        false
    }
}
