//! Finite topologies as explicit families of open sets.
//!
//! Point-level `↑x` / `↓x` take the reflexive order `⊴`; set-level `↑A` / `↓A`
//! take the strict order `⊲`. Every function below names the relation it
//! expects.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::finite::{SetFamily, Subset, Universe};
use crate::relation::Relation;

/// Largest universe for which open families are materialized.
pub const MAX_TOPOLOGY_UNIVERSE: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Topology {
    opens: SetFamily,
}

impl Topology {
    /// Smallest topology containing `subbase`.
    ///
    /// Finite intersections of subbase members (the empty one being `X`) form
    /// the minimal neighbourhood of each point; the opens are exactly the
    /// unions of those neighbourhoods (the empty union being `∅`).
    pub fn from_subbase(subbase: &SetFamily) -> Result<Topology> {
        let u = subbase.universe();
        check_size(u)?;
        let n = u.size();
        let nbhd: Vec<Subset> = (0..n)
            .map(|x| {
                subbase
                    .iter()
                    .filter(|s| s.contains(x))
                    .fold(u.full(), Subset::intersection)
            })
            .collect();
        let mut opens: BTreeSet<u64> = BTreeSet::from([0]);
        for v in &nbhd {
            let grown: Vec<u64> = opens.iter().map(|o| o | v.bits()).collect();
            opens.extend(grown);
        }
        let t = Topology {
            opens: SetFamily::collect(u, opens.into_iter().map(Subset::from_bits)),
        };
        debug_assert!(t.satisfies_axioms());
        Ok(t)
    }

    /// Wrap an explicit family, checking the topology axioms.
    pub fn from_opens(opens: SetFamily) -> Result<Topology> {
        check_size(opens.universe())?;
        let t = Topology { opens };
        if !t.satisfies_axioms() {
            return Err(Error::Format("family is not a topology".into()));
        }
        Ok(t)
    }

    pub fn discrete(u: &Universe) -> Result<Topology> {
        let singles = SetFamily::collect(u, (0..u.size()).map(Subset::singleton));
        Topology::from_subbase(&singles)
    }

    pub fn indiscrete(u: &Universe) -> Result<Topology> {
        Topology::from_subbase(&SetFamily::empty(u))
    }

    /// Contains `∅` and `X`, closed under pairwise union and intersection.
    pub fn satisfies_axioms(&self) -> bool {
        let o = &self.opens;
        o.contains(Subset::EMPTY)
            && o.contains(o.full())
            && o.iter().all(|a| o.iter().all(|b| o.contains(a.union(b)) && o.contains(a.intersection(b))))
    }

    pub fn universe(&self) -> &Universe {
        self.opens.universe()
    }

    pub fn opens(&self) -> &SetFamily {
        &self.opens
    }

    pub fn len(&self) -> usize {
        self.opens.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_open(&self, s: Subset) -> bool {
        self.opens.contains(s)
    }

    /// `a` is closed iff `X − a` is open.
    pub fn is_closed(&self, a: Subset) -> bool {
        self.is_open(a.complement(self.universe().size()))
    }

    pub fn is_discrete(&self) -> bool {
        self.len() == 1 << self.universe().size()
    }

    /// Intersection of all opens containing `x`.
    pub fn minimal_neighbourhood(&self, x: usize) -> Subset {
        self.opens
            .iter()
            .filter(|o| o.contains(x))
            .fold(self.opens.full(), Subset::intersection)
    }

    /// Every open of `other` is open here.
    pub fn is_finer_or_equal(&self, other: &Topology) -> bool {
        other.opens.iter().all(|o| self.is_open(o))
    }

    pub fn roster(&self) -> String {
        self.opens.roster()
    }
}

fn check_size(u: &Universe) -> Result<()> {
    if u.size() > MAX_TOPOLOGY_UNIVERSE {
        return Err(Error::UniverseTooLarge { size: u.size(), limit: MAX_TOPOLOGY_UNIVERSE });
    }
    Ok(())
}

/// `↑x = {y : x ⊴ y}`.
pub fn up_point(x: usize, le: &Relation) -> Subset {
    le.row(x)
}

/// `↓x = {y : y ⊴ x}`.
pub fn down_point(x: usize, le: &Relation) -> Subset {
    le.column(x)
}

/// `↑A = {x : ∃y ∈ A, y ⊲ x}`.
pub fn up_set_strict(a: Subset, lt: &Relation) -> Subset {
    a.iter().fold(Subset::EMPTY, |acc, y| acc.union(lt.row(y)))
}

/// `↓A = {x : ∃y ∈ A, x ⊲ y}`.
pub fn down_set_strict(a: Subset, lt: &Relation) -> Subset {
    (0..lt.n()).filter(|&x| !lt.row(x).is_disjoint(a)).collect()
}

fn require_reflexive(le: &Relation) -> Result<()> {
    match le.first_irreflexive_point() {
        Some(x) => Err(Error::NotReflexive(x)),
        None => Ok(()),
    }
}

fn universe_for(u: &Universe, r: &Relation) -> Result<()> {
    if u.size() != r.n() {
        return Err(Error::UniverseMismatch);
    }
    Ok(())
}

/// Generated by `{X − ↑x : x ∈ X}` for a reflexive `⊴`.
pub fn lower_topology(u: &Universe, le: &Relation) -> Result<Topology> {
    universe_for(u, le)?;
    require_reflexive(le)?;
    let n = u.size();
    let sub = SetFamily::collect(u, (0..n).map(|x| up_point(x, le).complement(n)));
    Topology::from_subbase(&sub)
}

/// Generated by `{X − ↓x : x ∈ X}` for a reflexive `⊴`.
pub fn upper_topology(u: &Universe, le: &Relation) -> Result<Topology> {
    universe_for(u, le)?;
    require_reflexive(le)?;
    let n = u.size();
    let sub = SetFamily::collect(u, (0..n).map(|x| down_point(x, le).complement(n)));
    Topology::from_subbase(&sub)
}

/// Coarsest topology finer than both.
pub fn join(t1: &Topology, t2: &Topology) -> Result<Topology> {
    Topology::from_subbase(&t1.opens.union(&t2.opens)?)
}

/// Join of the upper and lower topologies of `⊴`.
pub fn interval_topology(u: &Universe, le: &Relation) -> Result<Topology> {
    join(&upper_topology(u, le)?, &lower_topology(u, le)?)
}

/// Topology generated by the strict rays `{x : x ⊲ a}` and `{x : a ⊲ x}`.
pub fn open_ray_topology(u: &Universe, lt: &Relation) -> Result<Topology> {
    universe_for(u, lt)?;
    let lt = lt.strict_part();
    let rays = (0..u.size()).flat_map(|a| {
        let a_set = Subset::singleton(a);
        [down_set_strict(a_set, &lt), up_set_strict(a_set, &lt)]
    });
    Topology::from_subbase(&SetFamily::collect(u, rays))
}

/// All `Y` with `Y = ↑Y` under the strict order `⊲`.
pub fn alexandroff_family(u: &Universe, lt: &Relation) -> Result<SetFamily> {
    universe_for(u, lt)?;
    check_size(u)?;
    Ok(SetFamily::collect(
        u,
        u.subsets().into_iter().filter(|&y| up_set_strict(y, lt) == y),
    ))
}

/// The same family for a nest order, via `Y = ⋃{X − L : Y ∩ L ≠ ∅}`.
pub fn alexandroff_family_by_nest(nest: &SetFamily) -> Result<SetFamily> {
    let u = nest.universe();
    check_size(u)?;
    let n = u.size();
    Ok(SetFamily::collect(
        u,
        u.subsets().into_iter().filter(|&y| {
            let image = nest
                .iter()
                .filter(|l| !l.is_disjoint(y))
                .fold(Subset::EMPTY, |acc, l| acc.union(l.complement(n)));
            image == y
        }),
    ))
}

/// Product topology on `X₁ × X₂`, pair `(x, y)` at index `x·|X₂| + y`.
pub fn product_topology(t1: &Topology, t2: &Topology) -> Result<Topology> {
    let (n1, n2) = (t1.universe().size(), t2.universe().size());
    let u = Universe::new(n1 * n2)?;
    check_size(&u)?;
    let cylinder1 = t1.opens.iter().map(|o| {
        (0..n1 * n2).filter(|p| o.contains(p / n2)).collect::<Subset>()
    });
    let cylinder2 = t2.opens.iter().map(|o| {
        (0..n1 * n2).filter(|p| o.contains(p % n2)).collect::<Subset>()
    });
    let sub = SetFamily::collect(&u, cylinder1.chain(cylinder2));
    Topology::from_subbase(&sub)
}

/// Preimage of every open of `cod` is open in `dom`; `map[x]` is the image of `x`.
pub fn is_continuous(map: &[usize], dom: &Topology, cod: &Topology) -> Result<bool> {
    let (nd, nc) = (dom.universe().size(), cod.universe().size());
    if map.len() != nd || map.iter().any(|&y| y >= nc) {
        return Err(Error::NonTotalMap { expected: nd, codomain: nc });
    }
    Ok(cod.opens.iter().all(|o| {
        let pre: Subset = (0..nd).filter(|&x| o.contains(map[x])).collect();
        dom.is_open(pre)
    }))
}

/// Openness of `w ⊆ X₁ × X₂` in the product of two finite topologies,
/// without materializing the product. `rows[x]` holds `{y : (x, y) ∈ w}`.
///
/// A set is open in a finite product iff it contains `N(x) × N(y)` for each
/// of its points, `N` being the minimal neighbourhood.
pub fn is_open_in_product(rows: &[Subset], t1: &Topology, t2: &Topology) -> bool {
    let n1 = t1.universe().size();
    let n2: Vec<Subset> = (0..t2.universe().size()).map(|y| t2.minimal_neighbourhood(y)).collect();
    (0..n1).all(|x| {
        let nx = t1.minimal_neighbourhood(x);
        rows[x].iter().all(|y| nx.iter().all(|x2| n2[y].is_subset_of(rows[x2])))
    })
}
