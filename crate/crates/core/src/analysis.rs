//! Suprema in nest orders, the sup conditions on nests and their duals,
//! dual nest pairs, the interlocking characterizations and the LOTS check.
//!
//! Throughout, `⊴_L` is the reflexive closure of the order generated by a
//! nest `L`. A supremum exists only when the upper bounds have a unique
//! `⊴`-least element.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finite::{Nest, SetFamily, Subset};
use crate::relation::{generated_order, t0_separates, Relation};
use crate::topology::{
    down_set_strict, interval_topology, lower_topology, open_ray_topology, up_point,
    up_set_strict, upper_topology, Topology,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SupReason {
    Ok,
    NoUpperBound,
    NoLeastUpperBound,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SupResult {
    pub exists: bool,
    pub element: Option<usize>,
    pub reason: SupReason,
}

impl SupResult {
    fn found(x: usize) -> Self {
        SupResult { exists: true, element: Some(x), reason: SupReason::Ok }
    }

    fn missing(reason: SupReason) -> Self {
        SupResult { exists: false, element: None, reason }
    }
}

/// Least upper bound of `s` under the reflexive relation `le`.
pub fn sup_wrt(s: Subset, le: &Relation) -> SupResult {
    let n = le.n();
    let bounds: Vec<usize> = (0..n).filter(|&u| s.iter().all(|y| le.contains(y, u))).collect();
    if bounds.is_empty() {
        return SupResult::missing(SupReason::NoUpperBound);
    }
    let least: Vec<usize> =
        bounds.iter().copied().filter(|&m| bounds.iter().all(|&u| le.contains(m, u))).collect();
    match least[..] {
        [m] => SupResult::found(m),
        _ => SupResult::missing(SupReason::NoLeastUpperBound),
    }
}

/// Greatest lower bound of `s` under `le`.
pub fn inf_wrt(s: Subset, le: &Relation) -> SupResult {
    sup_wrt(s, &le.transpose())
}

/// Which of the three sup conditions to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Condition {
    C1,
    C2,
    C3,
}

/// Verdicts for the three conditions together with the member suprema.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Conditions {
    pub c1: bool,
    pub c2: bool,
    pub c3: bool,
    pub sups: Vec<SupResult>,
}

impl Conditions {
    pub fn get(&self, which: Condition) -> bool {
        match which {
            Condition::C1 => self.c1,
            Condition::C2 => self.c2,
            Condition::C3 => self.c3,
        }
    }
}

/// Evaluate the conditions given the extremum of each member.
fn evaluate(family: &SetFamily, extrema: Vec<SupResult>) -> Conditions {
    let c1 = extrema.iter().all(|s| s.exists);
    let c2 = c1
        && family.iter().zip(&extrema).all(|(l, s)| s.element.is_some_and(|k| !l.contains(k)));
    let c3 = c2
        && (0..family.n()).all(|x| {
            family.iter().zip(&extrema).any(|(l, s)| s.element == Some(x) && !l.contains(x))
        });
    Conditions { c1, c2, c3, sups: extrema }
}

/// C1: every member has a sup under `⊴_L`. C2: additionally each sup lies
/// outside its member. C3: additionally every point is such a sup.
pub fn conditions(nest: &Nest) -> Conditions {
    let le = generated_order(nest).reflexive_closure();
    let sups = nest.iter().map(|l| sup_wrt(l, &le)).collect();
    evaluate(nest, sups)
}

pub fn check_c1(nest: &Nest) -> bool {
    conditions(nest).c1
}

pub fn check_c2(nest: &Nest) -> bool {
    conditions(nest).c2
}

pub fn check_c3(nest: &Nest) -> bool {
    conditions(nest).c3
}

/// A pair of nests whose generated orders are mutual transposes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualNestPair {
    left: Nest,
    right: Nest,
}

impl DualNestPair {
    pub fn left(&self) -> &Nest {
        &self.left
    }

    pub fn right(&self) -> &Nest {
        &self.right
    }

    /// `⊴_L`.
    pub fn order(&self) -> Relation {
        generated_order(&self.left).reflexive_closure()
    }
}

/// Pair `l` with `r` after checking `x ⊲_L y ⟺ y ⊲_R x`.
pub fn make_dual_pair(l: &Nest, r: &Nest) -> Result<DualNestPair> {
    if l.universe() != r.universe() {
        return Err(Error::UniverseMismatch);
    }
    let (lo, ro) = (generated_order(l), generated_order(r));
    let n = l.n();
    for x in 0..n {
        for y in 0..n {
            if lo.contains(x, y) != ro.contains(y, x) {
                return Err(Error::NotDual { x, y });
            }
        }
    }
    Ok(DualNestPair { left: l.clone(), right: r.clone() })
}

/// The starred conditions for the right nest of a dual pair.
///
/// The primary route takes suprema of `R`'s members in `R`'s own order
/// `⊴_R`; the cross-check takes infima under the partner's `⊴_L`. The two
/// routes must agree on a genuine dual pair.
pub fn starred_conditions(pair: &DualNestPair) -> Result<Conditions> {
    let right = &pair.right;
    let by_sup = conditions(right);
    let le_left = pair.order();
    let infs = right.iter().map(|r| inf_wrt(r, &le_left)).collect();
    let by_inf = evaluate(right, infs);
    if by_sup != by_inf {
        return Err(Error::CrossCheck(format!(
            "sup under the right order and inf under the left order disagree for {}",
            right.roster()
        )));
    }
    Ok(by_sup)
}

/// Evaluate one starred condition for `n_r` against its dual `partner`.
pub fn check_c_star(n_r: &Nest, partner: &Nest, which: Condition) -> Result<bool> {
    let pair = make_dual_pair(partner, n_r)?;
    Ok(starred_conditions(&pair)?.get(which))
}

/// Interlocking in the set-theoretic sense, for any family: every member
/// equal to the intersection of its strict supersets in the family (empty
/// intersection = `X`) is also the union of its strict subsets (empty union
/// = `∅`).
pub fn is_interlocking_def(f: &SetFamily) -> bool {
    f.iter().all(|t| {
        let above = f
            .iter()
            .filter(|&s| s != t && t.is_subset_of(s))
            .fold(f.full(), Subset::intersection);
        if above != t {
            return true;
        }
        let below = f.iter().filter(|&s| s != t && s.is_subset_of(t)).fold(Subset::EMPTY, Subset::union);
        below == t
    })
}

/// `M = ⋂{L ∈ nest : M ⊊ L}`.
pub fn intersection_of_larger(m: Subset, nest: &SetFamily) -> bool {
    nest.iter().filter(|&l| m.is_proper_subset_of(l)).fold(nest.full(), Subset::intersection) == m
}

/// `M = ⋃{L ∈ nest : L ⊊ M}`.
pub fn union_of_smaller(m: Subset, nest: &SetFamily) -> bool {
    nest.iter().filter(|&l| l.is_proper_subset_of(m)).fold(Subset::EMPTY, Subset::union) == m
}

/// Whether `a` is closed in the Alexandroff family of the strict order `lt`:
/// its complement is a fixed point of the strict up-set operator.
pub fn alexandroff_closed(a: Subset, lt: &Relation) -> bool {
    let c = a.complement(lt.n());
    up_set_strict(c, lt) == c
}

/// A set equal to its own strict down-set.
pub fn is_lower_set(a: Subset, lt: &Relation) -> bool {
    down_set_strict(a, lt) == a
}

/// For every member closed in the Alexandroff family of `⊲_L`, its
/// complement is closed in the Alexandroff family of `⊲_{L^c}`.
pub fn is_interlocking_alexandroff(nest: &Nest) -> bool {
    let lt = generated_order(nest);
    let lt_c = generated_order(&nest.complement());
    let n = nest.n();
    nest.iter()
        .all(|l| !alexandroff_closed(l, &lt) || alexandroff_closed(l.complement(n), &lt_c))
}

/// For every member whose complement is a lower set of `⊲_{L^c}`, the member
/// is a lower set of `⊲_L`.
pub fn is_interlocking_lowersets(nest: &Nest) -> bool {
    let lt = generated_order(nest);
    let lt_c = generated_order(&nest.complement());
    let n = nest.n();
    nest.iter().all(|l| !is_lower_set(l.complement(n), &lt_c) || is_lower_set(l, &lt))
}

/// `↓Y = ⋃{L : Y ⊄ L}`.
pub fn down_set_formula(y: Subset, nest: &SetFamily) -> Subset {
    nest.iter().filter(|l| !y.is_subset_of(*l)).fold(Subset::EMPTY, Subset::union)
}

/// `↑Y = ⋃{X − L : Y ∩ L ≠ ∅}`.
pub fn up_set_formula(y: Subset, nest: &SetFamily) -> Subset {
    let n = nest.n();
    nest.iter()
        .filter(|l| !l.is_disjoint(y))
        .fold(Subset::EMPTY, |acc, l| acc.union(l.complement(n)))
}

/// Three ways of asking whether a member is a lower set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LowerSetTests {
    /// `M = ⋃{L ∈ nest : L ⊊ M}`.
    pub union_of_smaller: bool,
    /// `M = ↓M` under `⊲_L`.
    pub direct_lower: bool,
    /// `M` has no `⊴_L`-greatest element.
    pub no_maximum: bool,
}

pub fn member_lower_set_tests(nest: &Nest, m: Subset) -> Result<LowerSetTests> {
    if !nest.contains(m) {
        return Err(Error::NotAMember(nest.universe().roster(m)));
    }
    let lt = generated_order(nest);
    let le = lt.reflexive_closure();
    let has_max = m.iter().any(|k| m.iter().all(|x| le.contains(x, k)));
    Ok(LowerSetTests {
        union_of_smaller: union_of_smaller(m, nest),
        direct_lower: is_lower_set(m, &lt),
        no_maximum: !has_max,
    })
}

/// `M` has a maximal element in the usual sense: nothing in `M` lies strictly above it.
pub fn has_maximal_element(m: Subset, lt: &Relation) -> bool {
    m.iter().any(|x| lt.row(x).is_disjoint(m))
}

/// Orderability verdict for a dual pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LotsReport {
    /// C3 on the left nest and C3* on the right.
    pub c3_hypotheses: bool,
    /// Both nests T0-separate, C2 and C2* hold.
    pub c2_hypotheses: bool,
    pub linear: bool,
    /// `T_{L∪R}` equals the open-ray topology of `⊴_L`.
    pub topologies_match: bool,
    /// `linear && topologies_match`.
    pub conclusion: bool,
}

impl LotsReport {
    pub fn hypotheses(&self) -> bool {
        self.c3_hypotheses || self.c2_hypotheses
    }
}

pub fn lots_check(pair: &DualNestPair) -> Result<LotsReport> {
    let c = conditions(&pair.left);
    let cs = starred_conditions(pair)?;
    let u = pair.left.universe();
    let lt = generated_order(&pair.left);
    let both = pair.left.union(&pair.right)?;
    let linear = lt.is_linear_order();
    let topologies_match = Topology::from_subbase(&both)? == open_ray_topology(u, &lt)?;
    Ok(LotsReport {
        c3_hypotheses: c.c3 && cs.c3,
        c2_hypotheses: t0_separates(&pair.left) && t0_separates(&pair.right) && c.c2 && cs.c2,
        linear,
        topologies_match,
        conclusion: linear && topologies_match,
    })
}

/// The five topologies attached to a dual pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairTopologies {
    pub left: Topology,
    pub right: Topology,
    pub lower: Topology,
    pub upper: Topology,
    pub interval: Topology,
    pub combined: Topology,
}

pub fn pair_topologies(pair: &DualNestPair) -> Result<PairTopologies> {
    let u = pair.left.universe();
    let le = pair.order();
    Ok(PairTopologies {
        left: Topology::from_subbase(&pair.left)?,
        right: Topology::from_subbase(&pair.right)?,
        lower: lower_topology(u, &le)?,
        upper: upper_topology(u, &le)?,
        interval: interval_topology(u, &le)?,
        combined: Topology::from_subbase(&pair.left.union(&pair.right)?)?,
    })
}

/// `L ⊇ X − ↑k` for every member with a supremum `k` (`↑` under `⊴_L`).
pub fn sup_member_contains_complement_of_up(nest: &Nest) -> bool {
    let le = generated_order(nest).reflexive_closure();
    let n = nest.n();
    nest.iter().all(|l| match sup_wrt(l, &le).element {
        Some(k) => up_point(k, &le).complement(n).is_subset_of(l),
        None => true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::{enumerate_nests, Universe};

    fn nest(u: &Universe, sets: &[&[usize]]) -> Nest {
        Nest::from_indices(u, sets).unwrap()
    }

    fn x4() -> Universe {
        Universe::with_labels(["x1", "x2", "x3", "x4"]).unwrap()
    }

    #[test]
    fn sup_examples() {
        // Elements 1..5 as indices 0..4.
        let u = Universe::new(5).unwrap();
        let le = generated_order(&nest(&u, &[&[0, 1], &[0, 1, 2]])).reflexive_closure();
        assert_eq!(sup_wrt(Subset::from_indices([0, 1]), &le), SupResult::found(2));
        // 3 bounds itself under the reflexive order.
        assert_eq!(sup_wrt(Subset::from_indices([0, 1, 2]), &le), SupResult::found(2));
        // Strict upper bounds of {1,2,3} are 4 and 5, which are incomparable.
        let lt = generated_order(&nest(&u, &[&[0, 1], &[0, 1, 2]]));
        assert!(!lt.contains(3, 4) && !lt.contains(4, 3));
        assert_eq!(sup_wrt(Subset::full(5), &le).reason, SupReason::NoUpperBound);
        // Every point bounds the empty set and 1, 2 are incomparable.
        let r = sup_wrt(Subset::EMPTY, &le);
        assert_eq!(r.reason, SupReason::NoLeastUpperBound);
        assert!(r.element.is_none() && !r.exists);
        let chain = Relation::from_pairs(3, [(0, 1), (0, 2), (1, 2)]).unwrap().reflexive_closure();
        assert_eq!(sup_wrt(Subset::EMPTY, &chain), SupResult::found(0));
        assert_eq!(inf_wrt(Subset::EMPTY, &chain), SupResult::found(2));
        let anti = Relation::identity(2);
        assert_eq!(sup_wrt(Subset::full(2), &anti).reason, SupReason::NoUpperBound);
    }

    #[test]
    fn two_point_separating_nest_fails_c3() {
        let u = Universe::with_labels(["a", "b"]).unwrap();
        let l = nest(&u, &[&[0]]);
        let c = conditions(&l);
        assert!(c.c1 && !c.c2 && !c.c3);
        assert_eq!(c.sups[0].element, Some(0));
        assert!(t0_separates(&l));
    }

    #[test]
    fn one_point_empty_member_satisfies_everything() {
        let u = Universe::new(1).unwrap();
        let l = nest(&u, &[&[]]);
        let c = conditions(&l);
        assert!(c.c1 && c.c2 && c.c3);
        assert!(check_c_star(&l, &l, Condition::C3).unwrap());
    }

    #[test]
    fn linear_nests_with_nonempty_members_fail_c2() {
        for n in 1..=4 {
            let u = Universe::new(n).unwrap();
            for l in enumerate_nests(&u, true).unwrap() {
                let linear = generated_order(&l).is_linear_order();
                if linear && l.iter().any(|m| !m.is_empty()) {
                    assert!(!check_c2(&l), "{}", l.roster());
                }
            }
        }
    }

    #[test]
    fn starred_conditions_on_examples() {
        let u2 = Universe::with_labels(["x1", "x2"]).unwrap();
        let l = nest(&u2, &[&[0]]);
        let r = nest(&u2, &[&[1]]);
        let pair = make_dual_pair(&l, &r).unwrap();
        let cs = starred_conditions(&pair).unwrap();
        assert!(cs.c1);
        assert_eq!(cs.sups[0].element, Some(1));

        let u = x4();
        let l = nest(&u, &[&[0, 1], &[0, 1, 2, 3]]);
        let r = nest(&u, &[&[2, 3], &[0, 1, 2, 3]]);
        assert!(!check_c2(&l));
        assert!(!check_c_star(&r, &l, Condition::C2).unwrap());
        assert!(matches!(check_c_star(&l, &l, Condition::C1), Err(Error::NotDual { .. })));
    }

    #[test]
    fn complement_is_always_a_dual() {
        for n in 1..=4 {
            let u = Universe::new(n).unwrap();
            for l in enumerate_nests(&u, true).unwrap() {
                let pair = make_dual_pair(&l, &l.complement()).unwrap();
                starred_conditions(&pair).unwrap();
            }
        }
    }

    #[test]
    fn interlocking_examples() {
        let u = Universe::new(3).unwrap();
        let a = nest(&u, &[&[0], &[0, 1]]);
        let b = nest(&u, &[&[0], &[0, 1], &[0, 1, 2]]);
        let e = nest(&u, &[&[]]);
        for (l, expect) in [(&a, true), (&b, false), (&e, true), (&Nest::empty(&u), true)] {
            assert_eq!(is_interlocking_def(l), expect, "{}", l.roster());
            assert_eq!(is_interlocking_alexandroff(l), expect, "{}", l.roster());
            assert_eq!(is_interlocking_lowersets(l), expect, "{}", l.roster());
        }
    }

    #[test]
    fn closedness_forms_agree_with_direct_tests() {
        for n in 1..=4 {
            let u = Universe::new(n).unwrap();
            for l in enumerate_nests(&u, true).unwrap() {
                let lt = generated_order(&l);
                let lt_c = generated_order(&l.complement());
                for m in l.iter() {
                    assert_eq!(alexandroff_closed(m, &lt), intersection_of_larger(m, &l));
                    assert_eq!(alexandroff_closed(m.complement(n), &lt_c), union_of_smaller(m, &l));
                    assert_eq!(is_lower_set(m, &lt), union_of_smaller(m, &l));
                    assert_eq!(is_lower_set(m.complement(n), &lt_c), intersection_of_larger(m, &l));
                }
            }
        }
    }

    #[test]
    fn image_formulas_agree_with_direct_images() {
        for n in 1..=4 {
            let u = Universe::new(n).unwrap();
            for l in enumerate_nests(&u, true).unwrap() {
                let lt = generated_order(&l);
                for y in u.subsets() {
                    assert_eq!(down_set_formula(y, &l), down_set_strict(y, &lt));
                    assert_eq!(up_set_formula(y, &l), up_set_strict(y, &lt));
                }
                for y in 0..n {
                    let missing: Subset = l
                        .iter()
                        .filter(|m| !m.contains(y))
                        .fold(Subset::EMPTY, Subset::union);
                    assert_eq!(down_set_strict(Subset::singleton(y), &lt), missing);
                }
            }
        }
    }

    #[test]
    fn lower_set_record() {
        let u = Universe::new(3).unwrap();
        let chain = nest(&u, &[&[], &[0], &[0, 1]]);
        let t = member_lower_set_tests(&chain, Subset::from_indices([0, 1])).unwrap();
        assert_eq!(t, LowerSetTests { union_of_smaller: false, direct_lower: false, no_maximum: false });
        let t = member_lower_set_tests(&chain, Subset::EMPTY).unwrap();
        assert_eq!(t, LowerSetTests { union_of_smaller: true, direct_lower: true, no_maximum: true });
        assert!(member_lower_set_tests(&chain, Subset::singleton(2)).is_err());

        // Without separation the greatest-element reading detaches.
        let u = x4();
        let l = nest(&u, &[&[0, 1], &[0, 1, 2, 3]]);
        let t = member_lower_set_tests(&l, Subset::from_indices([0, 1])).unwrap();
        assert_eq!(t, LowerSetTests { union_of_smaller: false, direct_lower: false, no_maximum: true });
        assert!(has_maximal_element(Subset::from_indices([0, 1]), &generated_order(&l)));
    }

    #[test]
    fn lots_examples() {
        let u1 = Universe::new(1).unwrap();
        let e = nest(&u1, &[&[]]);
        let r = lots_check(&make_dual_pair(&e, &e).unwrap()).unwrap();
        assert!(r.hypotheses() && r.conclusion);

        let u2 = Universe::with_labels(["x1", "x2"]).unwrap();
        let pair = make_dual_pair(&nest(&u2, &[&[0]]), &nest(&u2, &[&[1]])).unwrap();
        let r = lots_check(&pair).unwrap();
        assert!(!r.hypotheses() && r.conclusion);

        let u = x4();
        let pair = make_dual_pair(
            &nest(&u, &[&[0, 1], &[0, 1, 2, 3]]),
            &nest(&u, &[&[2, 3], &[0, 1, 2, 3]]),
        )
        .unwrap();
        let r = lots_check(&pair).unwrap();
        assert!(!r.hypotheses() && !r.linear && !r.conclusion);
    }

    #[test]
    fn sup_members_contain_complement_of_up_set() {
        for n in 1..=4 {
            let u = Universe::new(n).unwrap();
            for l in enumerate_nests(&u, true).unwrap() {
                assert!(sup_member_contains_complement_of_up(&l));
            }
        }
    }
}
