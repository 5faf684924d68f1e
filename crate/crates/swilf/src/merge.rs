//! Merging a left-to-right-minima profile with a remaining string, and the
//! block-structured witness families built on top of it.
//!
//! A triple `(T, Z, S)` prescribes minima values `Z` at positions `T` and the
//! string `S` of remaining entries. Placing `Z` in decreasing order at `T`
//! (forced, since minima decrease left to right) and `S` in order at the
//! other positions yields the only candidate permutation; the triple is
//! *compatible* when that permutation's minima profile is exactly `(T, Z)`,
//! which happens precisely when every remaining entry exceeds the closest
//! minimum to its left.

use std::collections::BTreeSet;

use num::bigint::BigUint;
use rayon::prelude::*;
use thiserror::Error;

use crate::count::{CountError, Counter};
use crate::perm::{BlockSpec, Entry, Permutation};

/// Structural problems with a triple, as opposed to the value-level
/// incompatible verdict.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TripleError {
    #[error("ambient length must be at least 1")]
    EmptyAmbient,
    #[error("position sets and value sets must have the same size")]
    SizeMismatch,
    #[error("position {0} is out of range")]
    PositionOutOfRange(usize),
    #[error("position {0} repeats")]
    DuplicatePosition(usize),
    #[error("value {0} is out of range")]
    ValueOutOfRange(Entry),
    #[error("value {0} repeats")]
    DuplicateValue(Entry),
    #[error("minima positions and values must be nonempty")]
    EmptyMinima,
    #[error("the remaining string must use exactly the values outside Z")]
    RemainingMismatch,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MergeError {
    #[error(transparent)]
    Triple(#[from] TripleError),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error("the base permutation must be nonempty")]
    EmptyBase,
    #[error("the buffer size must be at least 1")]
    ZeroBuffer,
    #[error("the base permutation must avoid 123")]
    BaseContains123,
    #[error("block lengths sum to {got}, expected {expected}")]
    BlockLengthMismatch { expected: usize, got: usize },
    #[error("block sizes {sizes:?} do not follow the cutting rule for block size {buffer}")]
    BadBlockSizes { sizes: Vec<usize>, buffer: usize },
    #[error("block {index} must avoid 1342")]
    BlockContains1342 { index: usize },
    #[error("n = {n} exceeds the witness ceiling {ceiling}")]
    WitnessCeiling { n: usize, ceiling: usize },
    #[error("the buffer must be smaller than n")]
    BufferTooLarge,
    #[error("construction postcondition failed: {0}")]
    Postcondition(String),
}

/// A minima profile plus remaining string over `{1, ..., n}`: positions `T`,
/// values `Z` (stored ascending), and the remaining values `S` in the order
/// they will appear.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triple {
    n: usize,
    positions: Vec<usize>,
    values: Vec<Entry>,
    remaining: Vec<Entry>,
}

impl Triple {
    pub fn new(
        n: usize,
        positions: impl IntoIterator<Item = usize>,
        values: impl IntoIterator<Item = Entry>,
        remaining: Vec<Entry>,
    ) -> Result<Self, TripleError> {
        if n == 0 {
            return Err(TripleError::EmptyAmbient);
        }
        let mut positions: Vec<usize> = positions.into_iter().collect();
        let mut values: Vec<Entry> = values.into_iter().collect();
        positions.sort_unstable();
        values.sort_unstable();
        if positions.is_empty() || values.is_empty() {
            return Err(TripleError::EmptyMinima);
        }
        if positions.len() != values.len() {
            return Err(TripleError::SizeMismatch);
        }
        for w in positions.windows(2) {
            if w[0] == w[1] {
                return Err(TripleError::DuplicatePosition(w[0]));
            }
        }
        for w in values.windows(2) {
            if w[0] == w[1] {
                return Err(TripleError::DuplicateValue(w[0]));
            }
        }
        if let Some(&p) = positions.iter().find(|&&p| p == 0 || p > n) {
            return Err(TripleError::PositionOutOfRange(p));
        }
        if let Some(&v) = values.iter().find(|&&v| v == 0 || v as usize > n) {
            return Err(TripleError::ValueOutOfRange(v));
        }
        let mut complement: Vec<Entry> =
            (1..=n as Entry).filter(|v| values.binary_search(v).is_err()).collect();
        let mut sorted_remaining = remaining.clone();
        sorted_remaining.sort_unstable();
        complement.sort_unstable();
        if sorted_remaining != complement {
            return Err(TripleError::RemainingMismatch);
        }
        Ok(Triple { n, positions, values, remaining })
    }

    /// The triple realized by a permutation: its own minima profile plus its
    /// remaining string. Always compatible.
    pub fn of_permutation(p: &Permutation) -> Result<Self, TripleError> {
        let minima = p.lr_minima().map_err(|_| TripleError::EmptyAmbient)?;
        let remaining = p.remaining_string().raw;
        Triple::new(
            p.len(),
            minima.positions().to_vec(),
            minima.values().to_vec(),
            remaining,
        )
    }

    pub fn ambient_n(&self) -> usize {
        self.n
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    /// Minima values, ascending.
    pub fn values(&self) -> &[Entry] {
        &self.values
    }

    pub fn remaining(&self) -> &[Entry] {
        &self.remaining
    }

    /// The only permutation placement the triple allows: `Z` decreasing at
    /// `T`, `S` in order elsewhere.
    fn assemble(&self) -> Permutation {
        let mut entries = vec![0; self.n];
        for (i, &pos) in self.positions.iter().enumerate() {
            entries[pos - 1] = self.values[self.values.len() - 1 - i];
        }
        let mut s = self.remaining.iter();
        for slot in entries.iter_mut() {
            if *slot == 0 {
                *slot = *s.next().expect("sizes checked at construction");
            }
        }
        Permutation::from_trusted(entries)
    }
}

/// Verdict of merging: either the realized permutation, or the assembled
/// arrangement whose minima profile differs from `(T, Z)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MergeOutcome {
    Compatible(Permutation),
    Incompatible { assembled: Permutation },
}

impl MergeOutcome {
    pub fn is_compatible(&self) -> bool {
        matches!(self, MergeOutcome::Compatible(_))
    }

    pub fn compatible(self) -> Option<Permutation> {
        match self {
            MergeOutcome::Compatible(p) => Some(p),
            MergeOutcome::Incompatible { .. } => None,
        }
    }
}

/// Merges the triple and checks, via the definition, that the result's
/// minima profile is exactly `(T, Z)`.
pub fn merge(t: &Triple) -> MergeOutcome {
    let assembled = t.assemble();
    let minima = assembled.lr_minima().expect("ambient length >= 1");
    if minima.positions() == t.positions() && minima.values_ascending() == t.values() {
        MergeOutcome::Compatible(assembled)
    } else {
        MergeOutcome::Incompatible { assembled }
    }
}

pub fn is_compatible(t: &Triple) -> bool {
    merge(t).is_compatible()
}

/// The local compatibility criterion: position 1 carries a minimum and every
/// remaining entry exceeds the closest minimum placed to its left.
/// Equivalent to [`is_compatible`]; kept as a separate route for
/// cross-checking.
pub fn local_compatibility(t: &Triple) -> bool {
    if t.positions()[0] != 1 {
        return false;
    }
    let mut desc = t.values().to_vec();
    desc.reverse();
    let mut minima_iter = t.positions().iter().zip(desc.iter()).peekable();
    let mut last_min: Option<Entry> = None;
    let mut s = t.remaining().iter();
    for pos in 1..=t.ambient_n() {
        if let Some(&(&mp, &mv)) = minima_iter.peek() {
            if mp == pos {
                last_min = Some(mv);
                minima_iter.next();
                continue;
            }
        }
        let v = *s.next().expect("sizes checked at construction");
        match last_min {
            None => return false,
            Some(m) if v < m => return false,
            _ => {}
        }
    }
    true
}

/// Prepends a decreasing buffer of the `buffer` largest values to a
/// 123-avoiding permutation, keeping the original minima at their original
/// positions: the result is the merge of the base's minima profile with the
/// string `D . S'`, where `D` is the decreasing run on the new top values
/// and `S'` is the base's remaining string.
///
/// Three postconditions are checked on every call: the result avoids 123,
/// its minima profile equals the base's, and every remaining entry at
/// position `j` exceeds the minimum closest to and preceding position
/// `j - buffer`.
pub fn extend_with_buffer(base: &Permutation, buffer: usize) -> Result<Permutation, MergeError> {
    if base.is_empty() {
        return Err(MergeError::EmptyBase);
    }
    if buffer == 0 {
        return Err(MergeError::ZeroBuffer);
    }
    if base.contains(&Permutation::increasing(3)) {
        return Err(MergeError::BaseContains123);
    }
    let n = base.len() + buffer;
    let minima = base.lr_minima().expect("base is nonempty");
    let mut string: Vec<Entry> = ((base.len() as Entry + 1)..=(n as Entry)).rev().collect();
    string.extend(base.remaining_string().raw);
    let triple = Triple::new(n, minima.positions().to_vec(), minima.values().to_vec(), string)?;
    let extended = match merge(&triple) {
        MergeOutcome::Compatible(p) => p,
        MergeOutcome::Incompatible { assembled } => {
            return Err(MergeError::Postcondition(format!(
                "buffer extension of {base} produced {assembled}, which does not realize the profile"
            )))
        }
    };
    if extended.contains(&Permutation::increasing(3)) {
        return Err(MergeError::Postcondition(format!(
            "buffer extension of {base} produced {extended}, which contains 123"
        )));
    }
    if !buffered_minima_property(&extended, buffer) {
        return Err(MergeError::Postcondition(format!(
            "buffer extension of {base} produced {extended}, which misses the shifted-minimum property"
        )));
    }
    Ok(extended)
}

/// Every remaining entry at position `j` exceeds the minimum closest to and
/// (strictly) preceding position `j - buffer`.
pub(crate) fn buffered_minima_property(p: &Permutation, buffer: usize) -> bool {
    let minima = p.lr_minima().expect("nonempty");
    let positions = minima.positions();
    let values = minima.values();
    let is_min: BTreeSet<usize> = positions.iter().copied().collect();
    for (pos, &v) in p.entries().iter().enumerate() {
        let pos = pos + 1;
        if is_min.contains(&pos) {
            continue;
        }
        if pos <= buffer + 1 {
            continue; // no position precedes pos - buffer
        }
        let threshold = pos - buffer;
        // closest minimum strictly before `threshold`
        let idx = positions.partition_point(|&mp| mp < threshold);
        if idx == 0 {
            continue;
        }
        if v <= values[idx - 1] {
            return false;
        }
    }
    true
}

/// Inputs for one witness: a 123-avoiding base, the buffer/block size, and
/// the block patterns that will replace the extended permutation's
/// remaining string.
#[derive(Debug, Clone)]
pub struct WitnessParams {
    base: Permutation,
    buffer: usize,
    blocks: BlockSpec,
}

impl WitnessParams {
    /// Validates the structural invariants: the base avoids 123, every block
    /// avoids 1342, the block sizes follow the cutting rule (every block of
    /// size `buffer` except the last, whose size lies in
    /// `[buffer, 2*buffer - 1]`), and the total block length matches the
    /// extended permutation's remaining string.
    pub fn new(base: Permutation, buffer: usize, blocks: BlockSpec) -> Result<Self, MergeError> {
        if base.is_empty() {
            return Err(MergeError::EmptyBase);
        }
        if buffer == 0 {
            return Err(MergeError::ZeroBuffer);
        }
        if base.contains(&Permutation::increasing(3)) {
            return Err(MergeError::BaseContains123);
        }
        let forbidden: Permutation = "1342".parse().expect("valid pattern");
        for (index, b) in blocks.blocks().iter().enumerate() {
            if b.contains(&forbidden) {
                return Err(MergeError::BlockContains1342 { index });
            }
        }
        let n = base.len() + buffer;
        let m = base.lr_minima().expect("nonempty").len();
        let expected = n - m;
        let got = blocks.total_len();
        if got != expected {
            return Err(MergeError::BlockLengthMismatch { expected, got });
        }
        let sizes: Vec<usize> = blocks.blocks().iter().map(|b| b.len()).collect();
        match cutting_rule_sizes(expected, buffer) {
            Some(rule) if rule == sizes => {}
            _ => return Err(MergeError::BadBlockSizes { sizes, buffer }),
        }
        Ok(WitnessParams { base, buffer, blocks })
    }

    pub fn base(&self) -> &Permutation {
        &self.base
    }

    pub fn buffer(&self) -> usize {
        self.buffer
    }

    pub fn blocks(&self) -> &BlockSpec {
        &self.blocks
    }
}

/// Block sizes prescribed by the cutting rule: `floor(total/size)` blocks,
/// all of length `size` except the last, which absorbs the remainder and has
/// length in `[size, 2*size - 1]`. `None` when `total < size`.
pub fn cutting_rule_sizes(total: usize, size: usize) -> Option<Vec<usize>> {
    if size == 0 || total < size {
        return None;
    }
    let nb = total / size;
    let last = total - (nb - 1) * size;
    debug_assert!((size..=2 * size - 1).contains(&last));
    let mut sizes = vec![size; nb - 1];
    sizes.push(last);
    Some(sizes)
}

/// A constructed witness. `minima_preserved` records whether the block
/// replacement kept the extended permutation's minima profile; it can be
/// false only when the last block is longer than `buffer + 1`, where entries
/// may travel further than the buffered-minimum property covers.
#[derive(Debug, Clone)]
pub struct Witness {
    pub permutation: Permutation,
    pub minima_preserved: bool,
}

/// Builds the witness for the given parameters: extends the base with a
/// buffer, then replaces the remaining string with the block-structured
/// permutation realized on the same value set at the same positions.
///
/// The result is checked to avoid 12453 (a hard error if it fails, which
/// the construction rules out). The minima profile is checked against the
/// extended permutation's; a mismatch is a hard error whenever every block
/// has length at most `buffer + 1` — the regime where preservation is
/// guaranteed — and is reported through [`Witness::minima_preserved`]
/// otherwise.
pub fn build_witness(params: &WitnessParams) -> Result<Witness, MergeError> {
    let extended = extend_with_buffer(&params.base, params.buffer)?;
    let minima = extended.lr_minima().expect("nonempty");
    let minima_positions: BTreeSet<usize> = minima.positions().iter().copied().collect();
    let rest_positions: Vec<usize> =
        (1..=extended.len()).filter(|p| !minima_positions.contains(p)).collect();
    let mut rest_values: Vec<Entry> = rest_positions
        .iter()
        .map(|&p| extended.entries()[p - 1])
        .collect();
    rest_values.sort_unstable();
    let shape = params.blocks.to_permutation();
    debug_assert_eq!(shape.len(), rest_positions.len());
    let mut entries = extended.entries().to_vec();
    for (&pos, &rank) in rest_positions.iter().zip(shape.entries()) {
        entries[pos - 1] = rest_values[rank as usize - 1];
    }
    let witness = Permutation::from_trusted(entries);

    let target: Permutation = "12453".parse().expect("valid pattern");
    if witness.contains(&target) {
        return Err(MergeError::Postcondition(format!(
            "witness {witness} contains 12453"
        )));
    }
    let new_minima = witness.lr_minima().expect("nonempty");
    let minima_preserved = new_minima.positions() == minima.positions()
        && new_minima.values() == minima.values();
    let max_block = params.blocks.blocks().iter().map(|b| b.len()).max().unwrap_or(0);
    if !minima_preserved && max_block <= params.buffer + 1 {
        return Err(MergeError::Postcondition(format!(
            "witness {witness} shifted the minima profile despite blocks of size <= buffer + 1"
        )));
    }
    Ok(Witness { permutation: witness, minima_preserved })
}

/// Tally from exhaustively generating witnesses for one `(n, buffer, m)`.
#[derive(Debug, Clone)]
pub struct WitnessCount {
    /// Number of distinct permutations produced.
    pub distinct: BigUint,
    /// Number of `(base, blocks)` parameter pairs generated.
    pub generated: u64,
    /// `generated - distinct`: nonzero when two parameter pairs collide on
    /// the same permutation.
    pub collisions: u64,
    /// Witnesses whose block replacement shifted the minima profile.
    pub minima_violations: u64,
}

/// Generates every witness over all valid `(base, blocks)` with the given
/// ambient length `n`, block size `buffer`, and base minima count `m`,
/// deduplicates, and verifies each output avoids 12453.
pub fn count_witnesses(
    counter: &Counter,
    n: usize,
    buffer: usize,
    m: usize,
) -> Result<WitnessCount, MergeError> {
    let ceiling = counter.config().witness_ceiling;
    if n > ceiling {
        return Err(MergeError::WitnessCeiling { n, ceiling });
    }
    if buffer == 0 {
        return Err(MergeError::ZeroBuffer);
    }
    if buffer >= n {
        return Err(MergeError::BufferTooLarge);
    }
    let base_len = n - buffer;
    let empty_tally = WitnessCount {
        distinct: BigUint::from(0u32),
        generated: 0,
        collisions: 0,
        minima_violations: 0,
    };
    if m == 0 || m > base_len {
        return Ok(empty_tally);
    }
    let three: Permutation = "123".parse().expect("valid pattern");
    let bases: Vec<Permutation> = counter
        .enumerate_avoiders(&three, base_len)?
        .filter(|p| p.lr_minima().map(|mp| mp.len()) == Ok(m))
        .collect();

    let sizes = match cutting_rule_sizes(n - m, buffer) {
        Some(s) => s,
        None => return Ok(empty_tally),
    };
    let forbidden: Permutation = "1342".parse().expect("valid pattern");
    let mut per_size: Vec<Vec<Permutation>> = Vec::with_capacity(sizes.len());
    for &s in &sizes {
        per_size.push(counter.enumerate_avoiders(&forbidden, s)?.collect());
    }

    struct Tally {
        seen: BTreeSet<Permutation>,
        generated: u64,
        violations: u64,
    }
    let run = |base: &Permutation| -> Result<Tally, MergeError> {
        let mut tally =
            Tally { seen: BTreeSet::new(), generated: 0, violations: 0 };
        let mut choice = vec![0usize; sizes.len()];
        loop {
            let blocks: Vec<Permutation> =
                choice.iter().zip(&per_size).map(|(&i, opts)| opts[i].clone()).collect();
            let spec = BlockSpec::new(blocks).expect("nonempty blocks");
            let params = WitnessParams::new(base.clone(), buffer, spec)?;
            let w = build_witness(&params)?;
            tally.generated += 1;
            if !w.minima_preserved {
                tally.violations += 1;
            }
            tally.seen.insert(w.permutation);
            // advance the mixed-radix choice vector
            let mut d = 0;
            loop {
                if d == choice.len() {
                    return Ok(tally);
                }
                choice[d] += 1;
                if choice[d] < per_size[d].len() {
                    break;
                }
                choice[d] = 0;
                d += 1;
            }
        }
    };

    let tallies: Result<Vec<Tally>, MergeError> =
        bases.par_iter().map(&run).collect();
    let mut seen = BTreeSet::new();
    let mut generated = 0;
    let mut violations = 0;
    for t in tallies? {
        generated += t.generated;
        violations += t.violations;
        seen.extend(t.seen);
    }
    Ok(WitnessCount {
        distinct: BigUint::from(seen.len()),
        generated,
        collisions: generated - seen.len() as u64,
        minima_violations: violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::count::oracle;

    fn p(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn merge_worked_examples() {
        let t = Triple::new(4, [1, 3], [1, 2], vec![4, 3]).unwrap();
        assert_eq!(merge(&t), MergeOutcome::Compatible(p("2413")));
        assert!(is_compatible(&t));

        let t = Triple::new(4, [1, 3], [1, 3], vec![2, 4]).unwrap();
        match merge(&t) {
            MergeOutcome::Incompatible { assembled } => assert_eq!(assembled, p("3214")),
            other => panic!("expected incompatible, got {other:?}"),
        }

        let t = Triple::new(1, [1], [1], vec![]).unwrap();
        assert_eq!(merge(&t), MergeOutcome::Compatible(p("1")));
    }

    #[test]
    fn single_minimum_at_front_is_always_compatible() {
        // with T = {1} and Z = {1}, every remaining entry exceeds 1
        let t = Triple::new(4, [1], [1], vec![3, 4, 2]).unwrap();
        assert!(is_compatible(&t));
        let t = Triple::new(4, [1], [1], vec![4, 2, 3]).unwrap();
        assert!(is_compatible(&t));
    }

    #[test]
    fn triple_structural_errors_are_not_verdicts() {
        assert_eq!(
            Triple::new(4, [1, 3], [1], vec![2, 4]).unwrap_err(),
            TripleError::SizeMismatch
        );
        assert_eq!(
            Triple::new(4, [1, 3], [1, 3], vec![2, 2]).unwrap_err(),
            TripleError::RemainingMismatch
        );
        assert_eq!(
            Triple::new(4, [1, 5], [1, 2], vec![4, 3]).unwrap_err(),
            TripleError::PositionOutOfRange(5)
        );
        assert_eq!(Triple::new(0, [], [], vec![]).unwrap_err(), TripleError::EmptyAmbient);
        assert_eq!(
            Triple::new(3, [], [], vec![1, 2, 3]).unwrap_err(),
            TripleError::EmptyMinima
        );
    }

    #[test]
    fn every_permutation_inverts_through_its_triple() {
        for n in 1..=6 {
            for q in oracle::all_permutations(n) {
                let t = Triple::of_permutation(&q).unwrap();
                assert_eq!(merge(&t), MergeOutcome::Compatible(q));
            }
        }
    }

    #[test]
    fn compatible_triples_biject_with_permutations() {
        // over all structurally valid triples, exactly n! are compatible
        for n in 1..=5usize {
            let mut compatible = 0u64;
            let positions_sets = subsets_nonempty(n);
            let value_sets = subsets_nonempty(n);
            for t_set in &positions_sets {
                for z_set in &value_sets {
                    if t_set.len() != z_set.len() {
                        continue;
                    }
                    let rest: Vec<Entry> = (1..=n as Entry)
                        .filter(|v| !z_set.contains(&(*v as usize)))
                        .collect();
                    for s in oracle::all_permutations(rest.len()) {
                        let remaining: Vec<Entry> =
                            s.entries().iter().map(|&i| rest[i as usize - 1]).collect();
                        let t = Triple::new(
                            n,
                            t_set.clone(),
                            z_set.iter().map(|&v| v as Entry),
                            remaining,
                        )
                        .unwrap();
                        if is_compatible(&t) {
                            compatible += 1;
                        }
                        assert_eq!(is_compatible(&t), local_compatibility(&t), "{t:?}");
                    }
                }
            }
            let factorial: u64 = (1..=n as u64).product();
            assert_eq!(compatible, factorial, "n = {n}");
        }
    }

    fn subsets_nonempty(n: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for mask in 1u32..(1 << n) {
            out.push((1..=n).filter(|i| mask & (1 << (i - 1)) != 0).collect());
        }
        out
    }

    #[test]
    fn extension_examples() {
        assert_eq!(extend_with_buffer(&p("21"), 1).unwrap(), p("213"));
        assert_eq!(extend_with_buffer(&p("1"), 1).unwrap(), p("12"));
        assert_eq!(extend_with_buffer(&p("3142"), 2).unwrap(), p("316542"));
        assert_eq!(
            extend_with_buffer(&p("123"), 1).unwrap_err(),
            MergeError::BaseContains123
        );
        assert_eq!(extend_with_buffer(&p("21"), 0).unwrap_err(), MergeError::ZeroBuffer);
    }

    #[test]
    fn extension_postconditions_exhaustive() {
        let increasing3 = p("123");
        for base_len in 1..=6 {
            for buffer in 1..=3 {
                for base in oracle::all_permutations(base_len) {
                    if base.contains(&increasing3) {
                        continue;
                    }
                    let extended = extend_with_buffer(&base, buffer).unwrap();
                    assert!(extended.avoids(&increasing3));
                    let bm = base.lr_minima().unwrap();
                    let em = extended.lr_minima().unwrap();
                    assert_eq!(bm.positions(), em.positions());
                    assert_eq!(bm.values(), em.values());
                    assert!(buffered_minima_property(&extended, buffer));
                }
            }
        }
    }

    #[test]
    fn witness_examples() {
        let spec = BlockSpec::new(vec![p("1")]).unwrap();
        let params = WitnessParams::new(p("1"), 1, spec).unwrap();
        let w = build_witness(&params).unwrap();
        assert_eq!(w.permutation, p("12"));
        assert!(w.minima_preserved);

        // all-decreasing blocks reproduce the extended permutation itself
        let base = p("3142");
        let extended = extend_with_buffer(&base, 2).unwrap();
        let spec = BlockSpec::new(vec![p("21"), p("21")]).unwrap();
        let params = WitnessParams::new(base, 2, spec).unwrap();
        let w = build_witness(&params).unwrap();
        assert_eq!(w.permutation, extended);
        assert!(w.minima_preserved);
    }

    #[test]
    fn witness_param_validation() {
        let spec = BlockSpec::new(vec![p("21"), p("21")]).unwrap();
        assert_eq!(
            WitnessParams::new(p("123"), 2, spec.clone()).unwrap_err(),
            MergeError::BaseContains123
        );
        // wrong total length
        assert!(matches!(
            WitnessParams::new(p("21"), 2, spec.clone()).unwrap_err(),
            MergeError::BlockLengthMismatch { expected: 2, got: 4 }
        ));
        // block containing 1342
        let bad = BlockSpec::new(vec![p("1342"), p("21")]).unwrap();
        assert!(matches!(
            WitnessParams::new(p("53142"), 2, bad).unwrap_err(),
            MergeError::BlockContains1342 { index: 0 }
        ));
        // sizes violating the cutting rule: total 4 with buffer 2 must be (2, 2)
        let bad_sizes = BlockSpec::new(vec![p("1"), p("321")]).unwrap();
        assert!(matches!(
            WitnessParams::new(p("3142"), 2, bad_sizes).unwrap_err(),
            MergeError::BadBlockSizes { .. }
        ));
    }

    #[test]
    fn cutting_rule_examples() {
        assert_eq!(cutting_rule_sizes(6, 2), Some(vec![2, 2, 2]));
        assert_eq!(cutting_rule_sizes(7, 2), Some(vec![2, 2, 3]));
        assert_eq!(cutting_rule_sizes(5, 3), Some(vec![5]));
        assert_eq!(cutting_rule_sizes(8, 3), Some(vec![3, 5]));
        assert_eq!(cutting_rule_sizes(1, 2), None);
    }

    #[test]
    fn count_witnesses_examples() {
        let counter = Counter::with_defaults();
        let w = count_witnesses(&counter, 2, 1, 1).unwrap();
        assert_eq!(w.distinct, BigUint::from(1u32));
        // frozen from the exhaustive generate-and-dedupe oracle
        let w = count_witnesses(&counter, 6, 2, 2).unwrap();
        assert_eq!(w.distinct, BigUint::from(24u32));
        assert_eq!(w.minima_violations, 0);
        // count never exceeds the avoider count
        let input: Permutation = p("12453");
        for m in 1..=4 {
            let w = count_witnesses(&counter, 6, 2, m).unwrap();
            assert!(w.distinct <= counter.count_avoiders(&input, 6).unwrap());
        }
        assert!(matches!(
            count_witnesses(&counter, 11, 2, 2),
            Err(MergeError::WitnessCeiling { n: 11, ceiling: 10 })
        ));
    }

    #[test]
    fn oversized_last_block_can_shift_minima_but_stays_sound() {
        // buffer 3 with remaining length 5 cuts into a single block of
        // size 5 = buffer + 2; an increasing block then dips below the
        // leading minimum of 3412's extension and creates new minima.
        let base = p("3412");
        let spec = BlockSpec::new(vec![p("12345")]).unwrap();
        let params = WitnessParams::new(base, 3, spec).unwrap();
        let w = build_witness(&params).unwrap();
        assert_eq!(w.permutation, p("3214567"));
        assert!(!w.minima_preserved);
        assert!(w.permutation.avoids(&p("12453")));
    }
}
