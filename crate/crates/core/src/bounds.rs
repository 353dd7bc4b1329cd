//! Cover characterizations of `X = ↓Y` and `X = ↑Y`, and existence of
//! upper and lower bounds under a nest order.
//!
//! `↓` and `↑` are strict images under `⊲_L`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finite::{Nest, SetFamily, Subset};
use crate::relation::{generated_order, Relation};
use crate::topology::{down_set_strict, up_set_strict};

/// Subfamily enumeration is capped at this many members.
pub const MAX_COVER_MEMBERS: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverWitness {
    pub holds: bool,
    /// The certifying cover (or subnest) when `holds`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_family: Option<Vec<Vec<usize>>>,
    /// When the characterization fails: the smallest member meeting the
    /// obstruction (a member containing `Y`, or disjoint from `Y` for the dual).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violating_member: Option<Vec<usize>>,
}

fn indices(s: Subset) -> Vec<usize> {
    s.iter().collect()
}

/// `X = ↓Y`, certified by the cover `{L : Y ⊄ L}`.
pub fn down_covers_x(nest: &Nest, y: Subset) -> CoverWitness {
    let lt = generated_order(nest);
    let holds = down_set_strict(y, &lt) == nest.full();
    let cover = SetFamily::collect(nest.universe(), nest.iter().filter(|l| !y.is_subset_of(*l)));
    debug_assert_eq!(holds, cover.union_all() == nest.full());
    if holds {
        CoverWitness {
            holds,
            witness_family: Some(cover.index_lists()),
            violating_member: None,
        }
    } else {
        CoverWitness {
            holds,
            witness_family: None,
            violating_member: nest.iter().find(|l| y.is_subset_of(*l)).map(indices),
        }
    }
}

/// `X = ↑Y`, certified by the subnest `{L : Y ∩ L ≠ ∅}` having empty
/// intersection.
pub fn up_covers_x(nest: &Nest, y: Subset) -> CoverWitness {
    let lt = generated_order(nest);
    let holds = up_set_strict(y, &lt) == nest.full();
    let meeting = SetFamily::collect(nest.universe(), nest.iter().filter(|l| !l.is_disjoint(y)));
    debug_assert_eq!(holds, meeting.intersection_all().is_empty());
    if holds {
        CoverWitness {
            holds,
            witness_family: Some(meeting.index_lists()),
            violating_member: None,
        }
    } else {
        CoverWitness {
            holds,
            witness_family: None,
            violating_member: nest.iter().rev().find(|l| l.is_disjoint(y)).map(indices),
        }
    }
}

/// Whether `{L : Y ⊄ L}` covers `X`.
pub fn cover_formula_down(nest: &Nest, y: Subset) -> bool {
    nest.iter().filter(|l| !y.is_subset_of(*l)).fold(Subset::EMPTY, Subset::union) == nest.full()
}

/// Whether `⋂{L : Y ∩ L ≠ ∅} = ∅`.
pub fn intersection_formula_up(nest: &Nest, y: Subset) -> bool {
    nest.iter().filter(|l| !l.is_disjoint(y)).fold(nest.full(), Subset::intersection).is_empty()
}

fn bounded_above(y: Subset, rel: &Relation) -> bool {
    (0..rel.n()).any(|x| y.iter().all(|v| rel.contains(v, x)))
}

/// `∃x ∀y ∈ Y : y ⊲ x`.
pub fn has_upper_bound_outside(nest: &Nest, y: Subset) -> bool {
    bounded_above(y, &generated_order(nest))
}

/// `∃x ∀y ∈ Y : x ⊲ y`.
pub fn has_lower_bound_outside(nest: &Nest, y: Subset) -> bool {
    bounded_above(y, &generated_order(nest).transpose())
}

/// `∃x ∀y ∈ Y : y ⊴ x`.
pub fn has_upper_bound(nest: &Nest, y: Subset) -> bool {
    bounded_above(y, &generated_order(nest).reflexive_closure())
}

/// `∃x ∀y ∈ Y : x ⊴ y`.
pub fn has_lower_bound(nest: &Nest, y: Subset) -> bool {
    bounded_above(y, &generated_order(nest).reflexive_closure().transpose())
}

/// `∃x ∀y ∈ Y : x ⋪ y`. Equivalent to `X ≠ ↓Y` with no hypothesis.
pub fn escapes_down_set(nest: &Nest, y: Subset) -> bool {
    let lt = generated_order(nest);
    (0..nest.n()).any(|x| y.iter().all(|v| !lt.contains(x, v)))
}

/// `∃x ∀y ∈ Y : y ⋪ x`. Equivalent to `X ≠ ↑Y`.
pub fn escapes_up_set(nest: &Nest, y: Subset) -> bool {
    let lt = generated_order(nest);
    (0..nest.n()).any(|x| y.iter().all(|v| !lt.contains(v, x)))
}

fn subfamilies(nest: &Nest) -> Result<impl Iterator<Item = Vec<Subset>> + '_> {
    let m = nest.len();
    if m > MAX_COVER_MEMBERS {
        return Err(Error::BoundExceeded { size: m, limit: MAX_COVER_MEMBERS });
    }
    let sets = nest.sets();
    Ok((0u32..1 << m).map(move |mask| {
        (0..m).filter(|i| mask >> i & 1 == 1).map(|i| sets[i]).collect()
    }))
}

/// A subfamily covering `X` in which no single member contains `Y`.
pub fn cover_without_single_subcover(nest: &Nest, y: Subset) -> Result<Option<SetFamily>> {
    let full = nest.full();
    Ok(subfamilies(nest)?
        .find(|c| {
            c.iter().fold(Subset::EMPTY, |a, &l| a.union(l)) == full
                && c.iter().all(|l| !y.is_subset_of(*l))
        })
        .map(|c| SetFamily::collect(nest.universe(), c)))
}

/// A subfamily with empty intersection in which no member misses `Y`.
pub fn empty_meet_without_disjoint_member(nest: &Nest, y: Subset) -> Result<Option<SetFamily>> {
    let full = nest.full();
    Ok(subfamilies(nest)?
        .find(|c| {
            c.iter().fold(full, |a, &l| a.intersection(l)).is_empty()
                && c.iter().all(|l| !l.is_disjoint(y))
        })
        .map(|c| SetFamily::collect(nest.universe(), c)))
}

/// Every subfamily covering `X` has a finite subfamily covering `Y`.
/// On a finite universe the cover itself qualifies, so this never fails.
pub fn every_cover_has_finite_subcover(nest: &Nest, y: Subset) -> Result<bool> {
    let full = nest.full();
    Ok(subfamilies(nest)?
        .filter(|c| c.iter().fold(Subset::EMPTY, |a, &l| a.union(l)) == full)
        .all(|c| y.is_subset_of(c.iter().fold(Subset::EMPTY, |a, &l| a.union(l)))))
}

/// Every cover of `X` by members has a single member containing `Y`.
pub fn every_cover_has_single_subcover(nest: &Nest, y: Subset) -> Result<bool> {
    Ok(cover_without_single_subcover(nest, y)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::{enumerate_nests, Universe};
    use crate::relation::t0_separates;

    fn nest(u: &Universe, sets: &[&[usize]]) -> Nest {
        Nest::from_indices(u, sets).unwrap()
    }

    #[test]
    fn down_cover_examples() {
        let u = Universe::new(3).unwrap();
        let l = nest(&u, &[&[0], &[0, 1], &[0, 1, 2]]);
        let w = down_covers_x(&l, Subset::singleton(2));
        assert!(!w.holds);
        assert_eq!(w.violating_member, Some(vec![0, 1, 2]));
        let w = down_covers_x(&l, u.full());
        assert!(!w.holds);
        assert_eq!(w.violating_member, Some(vec![0, 1, 2]));
    }

    #[test]
    fn finite_images_never_exhaust_the_universe() {
        // Maximal points of Y never lie strictly below Y, and dually.
        for n in 1..=4 {
            let u = Universe::new(n).unwrap();
            for l in enumerate_nests(&u, true).unwrap() {
                for y in u.subsets() {
                    assert!(!down_covers_x(&l, y).holds);
                    assert!(!up_covers_x(&l, y).holds);
                }
            }
        }
    }

    #[test]
    fn up_cover_examples() {
        let u = Universe::new(2).unwrap();
        let l = nest(&u, &[&[0], &[0, 1]]);
        assert!(!up_covers_x(&l, Subset::singleton(0)).holds);
        let w = up_covers_x(&l, Subset::EMPTY);
        assert!(!w.holds && w.witness_family.is_none());

        let u = Universe::new(3).unwrap();
        let l = nest(&u, &[&[], &[0]]);
        let w = up_covers_x(&l, Subset::singleton(0));
        assert!(!w.holds);
        let l = nest(&u, &[&[]]);
        let w = up_covers_x(&l, Subset::EMPTY);
        assert!(!w.holds);
    }

    #[test]
    fn bound_examples() {
        let u = Universe::new(3).unwrap();
        let chain = nest(&u, &[&[], &[0], &[0, 1]]);
        assert!(has_upper_bound_outside(&chain, Subset::singleton(0)));
        assert!(has_upper_bound_outside(&chain, Subset::EMPTY));
        assert!(!has_upper_bound_outside(&chain, u.full()));
        assert!(has_lower_bound_outside(&chain, Subset::from_indices([1, 2])));
        assert!(has_lower_bound_outside(&chain, Subset::EMPTY));
    }

    #[test]
    fn members_without_strict_lower_bound_hold_the_minimum() {
        for n in 1..=4 {
            let u = Universe::new(n).unwrap();
            for l in enumerate_nests(&u, true).unwrap() {
                if !t0_separates(&l) || !l.contains(Subset::EMPTY) {
                    continue;
                }
                let le = generated_order(&l).reflexive_closure();
                let min = (0..n).find(|&m| (0..n).all(|x| le.contains(m, x))).unwrap();
                for m in l.iter().filter(|m| !m.is_empty()) {
                    assert_eq!(!has_lower_bound_outside(&l, m), m.contains(min));
                }
            }
        }
    }

    #[test]
    fn cover_forms_match_direct_images() {
        for n in 1..=4 {
            let u = Universe::new(n).unwrap();
            for l in enumerate_nests(&u, true).unwrap() {
                let lt = generated_order(&l);
                let t0 = t0_separates(&l);
                for y in u.subsets() {
                    let down = down_covers_x(&l, y).holds;
                    let up = up_covers_x(&l, y).holds;
                    assert_eq!(down, down_set_strict(y, &lt) == u.full());
                    assert_eq!(down, cover_formula_down(&l, y));
                    assert_eq!(up, intersection_formula_up(&l, y));
                    assert_eq!(down, cover_without_single_subcover(&l, y).unwrap().is_some());
                    assert_eq!(up, empty_meet_without_disjoint_member(&l, y).unwrap().is_some());
                    assert_eq!(!down, escapes_down_set(&l, y));
                    assert_eq!(!up, escapes_up_set(&l, y));
                    assert!(every_cover_has_finite_subcover(&l, y).unwrap());
                    if t0 {
                        assert_eq!(!down, has_upper_bound(&l, y));
                        assert_eq!(!up, has_lower_bound(&l, y));
                    }
                }
            }
        }
    }
}
