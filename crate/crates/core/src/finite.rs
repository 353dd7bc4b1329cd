//! Finite ground sets, subsets as membership masks, set families and nests.
//!
//! A [`Subset`] is a 64-bit membership mask, so universes hold at most
//! [`MAX_UNIVERSE`] elements. Families are kept in canonical order (by
//! cardinality, then by mask) so that printed rosters and serialized
//! instances are byte-stable.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest universe representable with mask subsets.
pub const MAX_UNIVERSE: usize = 64;

/// Default size bound for exhaustive nest enumeration.
pub const DEFAULT_ENUMERATION_BOUND: usize = 4;

/// Hard ceiling for exhaustive nest enumeration.
pub const MAX_ENUMERATION_BOUND: usize = 6;

/// A finite ground set `{0, .., size - 1}` with optional element names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Universe {
    size: usize,
    labels: Option<Arc<[String]>>,
}

impl Universe {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::EmptyUniverse);
        }
        if size > MAX_UNIVERSE {
            return Err(Error::UniverseTooLarge { size, limit: MAX_UNIVERSE });
        }
        Ok(Universe { size, labels: None })
    }

    pub fn with_labels<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut u = Universe::new(labels.len())?;
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        u.labels = Some(labels.into());
        Ok(u)
    }

    /// Attach labels to an existing universe of the same size.
    pub fn relabel(&self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.size {
            return Err(Error::LabelCount { expected: self.size, got: labels.len() });
        }
        Universe::with_labels(labels)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display name of element `i`; the index itself when unlabelled.
    pub fn label(&self, i: usize) -> String {
        match &self.labels {
            Some(l) => l[i].clone(),
            None => i.to_string(),
        }
    }

    /// Resolve a label (or a bare index) to an element index.
    pub fn element(&self, name: &str) -> Option<usize> {
        if let Some(l) = &self.labels {
            if let Some(i) = l.iter().position(|s| s == name) {
                return Some(i);
            }
        }
        name.parse::<usize>().ok().filter(|&i| i < self.size)
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.size)
    }

    /// Every subset of the universe in canonical order.
    pub fn subsets(&self) -> Vec<Subset> {
        canonical_subsets(self.size)
    }

    pub fn subset(&self, indices: &[usize]) -> Result<Subset> {
        let mut s = Subset::EMPTY;
        for &i in indices {
            if i >= self.size {
                return Err(Error::ElementOutOfRange { index: i, size: self.size });
            }
            s = s.with(i);
        }
        Ok(s)
    }

    /// `{ x1, x2 }` style roster of a subset.
    pub fn roster(&self, s: Subset) -> String {
        if s.is_empty() {
            return "∅".to_string();
        }
        let names: Vec<String> = s.iter().map(|i| self.label(i)).collect();
        format!("{{{}}}", names.join(","))
    }
}

/// All subsets of an `n`-element universe, ordered by cardinality then mask.
pub fn canonical_subsets(n: usize) -> Vec<Subset> {
    assert!(n <= 20, "subset listing is limited to 20 elements");
    let mut all: Vec<Subset> = (0..1u64 << n).map(Subset).collect();
    all.sort();
    all
}

/// A subset of a universe, stored as a membership mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Subset(u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub const fn from_bits(bits: u64) -> Self {
        Subset(bits)
    }

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            Subset(u64::MAX)
        } else {
            Subset((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        Subset(1 << i)
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        indices.into_iter().fold(Subset::EMPTY, Subset::with)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn with(self, i: usize) -> Self {
        Subset(self.0 | 1 << i)
    }

    pub fn without(self, i: usize) -> Self {
        Subset(self.0 & !(1 << i))
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    /// Complement relative to an `n`-element universe.
    pub fn complement(self, n: usize) -> Subset {
        Subset(!self.0 & Subset::full(n).0)
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset_of(self, other: Subset) -> bool {
        self != other && self.is_subset_of(other)
    }

    pub fn is_disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    pub fn comparable(self, other: Subset) -> bool {
        self.is_subset_of(other) || other.is_subset_of(self)
    }

    /// Highest element index plus one, or zero for the empty set.
    pub fn span(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    pub fn iter(self) -> SubsetIter {
        SubsetIter(self.0)
    }
}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.len(), self.0).cmp(&(other.len(), other.0))
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for Subset {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        Subset::from_indices(iter)
    }
}

/// Ascending element indices of a subset.
pub struct SubsetIter(u64);

impl Iterator for SubsetIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

/// A duplicate-free family of subsets of one universe, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetFamily {
    universe: Universe,
    sets: Vec<Subset>,
}

impl SetFamily {
    /// Build a family, rejecting out-of-range members and duplicates.
    pub fn new(universe: &Universe, sets: impl IntoIterator<Item = Subset>) -> Result<Self> {
        let mut sets: Vec<Subset> = sets.into_iter().collect();
        for s in &sets {
            if s.span() > universe.size() {
                return Err(Error::ElementOutOfRange { index: s.span() - 1, size: universe.size() });
            }
        }
        sets.sort();
        if let Some(w) = sets.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateMember(universe.roster(w[0])));
        }
        Ok(SetFamily { universe: universe.clone(), sets })
    }

    /// Build a family, silently merging duplicates. Members must fit the universe.
    pub fn collect(universe: &Universe, sets: impl IntoIterator<Item = Subset>) -> Self {
        let mut sets: Vec<Subset> = sets.into_iter().collect();
        debug_assert!(sets.iter().all(|s| s.span() <= universe.size()));
        sets.sort();
        sets.dedup();
        SetFamily { universe: universe.clone(), sets }
    }

    /// Convenience constructor from index lists.
    pub fn from_indices(universe: &Universe, sets: &[&[usize]]) -> Result<Self> {
        let subsets = sets.iter().map(|s| universe.subset(s)).collect::<Result<Vec<_>>>()?;
        SetFamily::new(universe, subsets)
    }

    pub fn empty(universe: &Universe) -> Self {
        SetFamily { universe: universe.clone(), sets: Vec::new() }
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn n(&self) -> usize {
        self.universe.size()
    }

    pub fn sets(&self) -> &[Subset] {
        &self.sets
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = Subset> + ExactSizeIterator + '_ {
        self.sets.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn contains(&self, s: Subset) -> bool {
        self.sets.binary_search(&s).is_ok()
    }

    pub fn full(&self) -> Subset {
        self.universe.full()
    }

    /// The family with `s` added (no-op if already present).
    pub fn with(&self, s: Subset) -> SetFamily {
        SetFamily::collect(&self.universe, self.iter().chain(std::iter::once(s)))
    }

    /// Union of two families on the same universe.
    pub fn union(&self, other: &SetFamily) -> Result<SetFamily> {
        if self.universe != other.universe {
            return Err(Error::UniverseMismatch);
        }
        Ok(SetFamily::collect(&self.universe, self.iter().chain(other.iter())))
    }

    /// True iff every pair of members is inclusion-comparable.
    pub fn is_nest(&self) -> bool {
        self.incomparable_pair().is_none()
    }

    fn incomparable_pair(&self) -> Option<(Subset, Subset)> {
        for (i, &a) in self.sets.iter().enumerate() {
            for &b in &self.sets[i + 1..] {
                if !a.comparable(b) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// `{X − L : L ∈ self}`.
    pub fn complement(&self) -> SetFamily {
        let n = self.n();
        SetFamily::collect(&self.universe, self.iter().map(|s| s.complement(n)))
    }

    /// Union of all members; the empty union is `∅`.
    pub fn union_all(&self) -> Subset {
        self.iter().fold(Subset::EMPTY, Subset::union)
    }

    /// Intersection of all members; the empty intersection is `X`.
    pub fn intersection_all(&self) -> Subset {
        self.iter().fold(self.full(), Subset::intersection)
    }

    /// Roster such as `{∅, {x1}, {x1,x2}}`.
    pub fn roster(&self) -> String {
        let parts: Vec<String> = self.iter().map(|s| self.universe.roster(s)).collect();
        format!("{{{}}}", parts.join(", "))
    }

    /// Members as sorted index lists.
    pub fn index_lists(&self) -> Vec<Vec<usize>> {
        self.iter().map(|s| s.iter().collect()).collect()
    }
}

/// A family whose members are pairwise comparable under inclusion.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Nest(SetFamily);

impl Nest {
    pub fn new(family: SetFamily) -> Result<Self> {
        match family.incomparable_pair() {
            None => Ok(Nest(family)),
            Some((a, b)) => {
                let u = family.universe();
                Err(Error::NotANest(u.roster(a), u.roster(b)))
            }
        }
    }

    pub fn from_indices(universe: &Universe, sets: &[&[usize]]) -> Result<Self> {
        Nest::new(SetFamily::from_indices(universe, sets)?)
    }

    pub fn empty(universe: &Universe) -> Self {
        Nest(SetFamily::empty(universe))
    }

    pub fn family(&self) -> &SetFamily {
        &self.0
    }

    pub fn into_family(self) -> SetFamily {
        self.0
    }

    /// The complementary nest `{X − L}`; inclusion reverses, so it stays a nest.
    pub fn complement(&self) -> Nest {
        Nest(self.0.complement())
    }
}

impl std::ops::Deref for Nest {
    type Target = SetFamily;

    fn deref(&self) -> &SetFamily {
        &self.0
    }
}

/// Stream every nest (inclusion chain of distinct subsets) of `u`.
///
/// Chains are produced depth-first over the canonical subset order, so every
/// chain appears exactly once and already in canonical member order. With
/// `include_trivial == false`, `∅` and `X` never appear as members.
pub fn enumerate_nests(u: &Universe, include_trivial: bool) -> Result<NestEnumerator> {
    NestEnumerator::new(u, include_trivial, DEFAULT_ENUMERATION_BOUND, None)
}

/// Depth-first inclusion-chain generator.
#[derive(Clone, Debug)]
pub struct NestEnumerator {
    universe: Universe,
    candidates: Vec<Subset>,
    stack: Vec<usize>,
    max_members: usize,
    started: bool,
    done: bool,
}

impl NestEnumerator {
    /// `bound` is the largest admitted universe size (at most
    /// [`MAX_ENUMERATION_BOUND`]); `max_members` caps the nest length.
    pub fn new(
        u: &Universe,
        include_trivial: bool,
        bound: usize,
        max_members: Option<usize>,
    ) -> Result<Self> {
        let limit = bound.min(MAX_ENUMERATION_BOUND);
        if u.size() > limit {
            return Err(Error::BoundExceeded { size: u.size(), limit });
        }
        let full = u.full();
        let candidates = u
            .subsets()
            .into_iter()
            .filter(|&s| include_trivial || (!s.is_empty() && s != full))
            .collect();
        Ok(NestEnumerator {
            universe: u.clone(),
            candidates,
            stack: Vec::new(),
            max_members: max_members.unwrap_or(usize::MAX),
            started: false,
            done: false,
        })
    }

    fn extends(&self, i: usize) -> bool {
        match self.stack.last() {
            None => true,
            Some(&j) => self.candidates[j].is_proper_subset_of(self.candidates[i]),
        }
    }

    fn first_extension(&self, from: usize) -> Option<usize> {
        (from..self.candidates.len()).find(|&i| self.extends(i))
    }

    fn current(&self) -> Nest {
        Nest(SetFamily {
            universe: self.universe.clone(),
            sets: self.stack.iter().map(|&i| self.candidates[i]).collect(),
        })
    }
}

impl Iterator for NestEnumerator {
    type Item = Nest;

    fn next(&mut self) -> Option<Nest> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(self.current());
        }
        // Try to deepen, otherwise backtrack to the next sibling.
        if self.stack.len() < self.max_members {
            let from = self.stack.last().map_or(0, |&j| j + 1);
            if let Some(i) = self.first_extension(from) {
                self.stack.push(i);
                return Some(self.current());
            }
        }
        while let Some(j) = self.stack.pop() {
            if let Some(i) = self.first_extension(j + 1) {
                self.stack.push(i);
                return Some(self.current());
            }
        }
        self.done = true;
        None
    }
}

/// Every family of subsets of `u` (all `2^(2^n)` of them), `n ≤ 4`.
pub fn enumerate_families(u: &Universe) -> Result<impl Iterator<Item = SetFamily>> {
    if u.size() > 4 {
        return Err(Error::BoundExceeded { size: u.size(), limit: 4 });
    }
    let subsets = u.subsets();
    let u = u.clone();
    let count = 1u64 << subsets.len();
    Ok((0..count).map(move |mask| {
        let sets = subsets
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &s)| s);
        SetFamily::collect(&u, sets)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(n: usize) -> Universe {
        Universe::new(n).unwrap()
    }

    #[test]
    fn universe_validation() {
        assert_eq!(Universe::new(0), Err(Error::EmptyUniverse));
        assert!(matches!(Universe::new(65), Err(Error::UniverseTooLarge { .. })));
        assert!(matches!(Universe::with_labels(["a", "a"]), Err(Error::DuplicateLabel(_))));
        let l = Universe::with_labels(["a", "b"]).unwrap();
        assert_eq!(l.element("b"), Some(1));
        assert_eq!(l.element("1"), Some(1));
        assert_eq!(l.element("c"), None);
    }

    #[test]
    fn nest_detection() {
        let u4 = Universe::with_labels(["x1", "x2", "x3", "x4"]).unwrap();
        let f = SetFamily::from_indices(&u4, &[&[0, 1], &[0, 1, 2, 3]]).unwrap();
        assert!(f.is_nest());
        assert!(SetFamily::empty(&u(3)).is_nest());
        let g = SetFamily::from_indices(&u(3), &[&[0], &[1]]).unwrap();
        assert!(!g.is_nest());
        assert!(matches!(Nest::new(g), Err(Error::NotANest(..))));
    }

    #[test]
    fn duplicates_rejected() {
        let r = SetFamily::from_indices(&u(2), &[&[0], &[0]]);
        assert!(matches!(r, Err(Error::DuplicateMember(_))));
        let r = SetFamily::from_indices(&u(2), &[&[2]]);
        assert!(matches!(r, Err(Error::ElementOutOfRange { .. })));
    }

    #[test]
    fn complement_examples() {
        let u2 = u(2);
        let f = SetFamily::from_indices(&u2, &[&[0]]).unwrap();
        assert_eq!(f.complement(), SetFamily::from_indices(&u2, &[&[1]]).unwrap());
        let u3 = u(3);
        let f = SetFamily::from_indices(&u3, &[&[0], &[0, 1]]).unwrap();
        let c = SetFamily::from_indices(&u3, &[&[1, 2], &[2]]).unwrap();
        assert_eq!(f.complement(), c);
        assert_eq!(f.complement().complement(), f);
    }

    #[test]
    fn roster_format() {
        let u4 = Universe::with_labels(["x1", "x2", "x3", "x4"]).unwrap();
        let f = SetFamily::from_indices(&u4, &[&[], &[0, 1], &[0, 1, 2, 3]]).unwrap();
        assert_eq!(f.roster(), "{∅, {x1,x2}, {x1,x2,x3,x4}}");
    }

    #[test]
    fn one_point_universe_has_four_chains() {
        let nests: Vec<Nest> = enumerate_nests(&u(1), true).unwrap().collect();
        assert_eq!(nests.len(), 4);
        let rosters: Vec<String> = nests.iter().map(|n| n.roster()).collect();
        assert!(rosters.contains(&"{}".to_string()));
        assert!(rosters.contains(&"{∅, {0}}".to_string()));
    }

    /// Independent count of chains in the Boolean lattice: a chain is either
    /// empty or determined by its least member and the chain strictly above it.
    fn chains_above(s: Subset, n: usize, trivial: bool) -> u64 {
        let full = Subset::full(n);
        let mut count = 1;
        for t in 0..(1u64 << n) {
            let t = Subset::from_bits(t);
            if s.is_proper_subset_of(t) && (trivial || t != full) {
                count += chains_above(t, n, trivial);
            }
        }
        count
    }

    fn chain_count(n: usize, trivial: bool) -> u64 {
        let full = Subset::full(n);
        let mut count = 1;
        for s in 0..(1u64 << n) {
            let s = Subset::from_bits(s);
            if trivial || (!s.is_empty() && s != full) {
                count += chains_above(s, n, trivial);
            }
        }
        count
    }

    #[test]
    fn enumeration_counts_match_recursive_oracle() {
        for n in 1..=4 {
            for trivial in [true, false] {
                let got = enumerate_nests(&u(n), trivial).unwrap().count() as u64;
                assert_eq!(got, chain_count(n, trivial), "n={n} trivial={trivial}");
            }
        }
        // Frozen values from the oracle.
        assert_eq!(enumerate_nests(&u(2), true).unwrap().count(), 12);
        assert_eq!(enumerate_nests(&u(3), true).unwrap().count(), 52);
        assert_eq!(enumerate_nests(&u(4), true).unwrap().count(), 300);
    }

    #[test]
    fn enumeration_yields_distinct_nests() {
        for n in 1..=3 {
            let all: Vec<Nest> = enumerate_nests(&u(n), true).unwrap().collect();
            let distinct: std::collections::HashSet<_> = all.iter().cloned().collect();
            assert_eq!(distinct.len(), all.len());
            assert!(all.iter().all(|x| x.is_nest()));
        }
    }

    #[test]
    fn enumeration_respects_bounds() {
        assert!(matches!(enumerate_nests(&u(5), true), Err(Error::BoundExceeded { .. })));
        let e = NestEnumerator::new(&u(5), true, 5, Some(2)).unwrap();
        assert!(e.clone().all(|x| x.len() <= 2));
        let trivial_free = enumerate_nests(&u(3), false).unwrap();
        for x in trivial_free {
            assert!(!x.contains(Subset::EMPTY) && !x.contains(Subset::full(3)));
        }
    }

    #[test]
    fn enumeration_is_restartable() {
        let all: Vec<Nest> = enumerate_nests(&u(3), true).unwrap().collect();
        let tail: Vec<Nest> = enumerate_nests(&u(3), true).unwrap().skip(17).collect();
        assert_eq!(&all[17..], &tail[..]);
    }

    #[test]
    fn family_enumeration() {
        assert_eq!(enumerate_families(&u(2)).unwrap().count(), 16);
        assert!(enumerate_families(&u(5)).is_err());
    }
}
