//! Binary relations on a finite universe and the order generated by a family.
//!
//! `x ⊲ y` holds for a family when some member contains `x` but not `y`.
//! The reflexive variant `⊴` is always obtained through
//! [`Relation::reflexive_closure`].

use std::fmt;

use crate::error::{Error, Result};
use crate::finite::{Nest, SetFamily, Subset, Universe};

/// A relation stored as one row mask per element: bit `y` of row `x` is `(x, y)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    n: usize,
    rows: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransitivityMode {
    /// All triples `x, y, z`.
    Standard,
    /// Only pairwise-distinct triples.
    DistinctTriples,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Relation { n, rows: vec![0; n] }
    }

    /// The diagonal `Δ`.
    pub fn identity(n: usize) -> Self {
        Relation { n, rows: (0..n).map(|i| 1u64 << i).collect() }
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut r = Relation::empty(n);
        for (x, y) in pairs {
            for i in [x, y] {
                if i >= n {
                    return Err(Error::ElementOutOfRange { index: i, size: n });
                }
            }
            r.insert(x, y);
        }
        Ok(r)
    }

    /// `S × (X − S)`.
    pub fn rectangle(s: Subset, n: usize) -> Self {
        let outside = s.complement(n).bits();
        let rows = (0..n).map(|x| if s.contains(x) { outside } else { 0 }).collect();
        Relation { n, rows }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.rows[x] >> y & 1 == 1
    }

    pub fn insert(&mut self, x: usize, y: usize) {
        self.rows[x] |= 1 << y;
    }

    /// `{y : x r y}`.
    pub fn row(&self, x: usize) -> Subset {
        Subset::from_bits(self.rows[x])
    }

    /// `{y : y r x}`.
    pub fn column(&self, x: usize) -> Subset {
        (0..self.n).filter(|&y| self.contains(y, x)).collect()
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    /// Pairs in lexicographic order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n).flat_map(|x| self.row(x).iter().map(move |y| (x, y))).collect()
    }

    pub fn union(&self, other: &Relation) -> Result<Relation> {
        self.same_size(other)?;
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| a | b).collect();
        Ok(Relation { n: self.n, rows })
    }

    pub fn is_subset_of(&self, other: &Relation) -> bool {
        self.n == other.n && self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0)
    }

    fn same_size(&self, other: &Relation) -> Result<()> {
        if self.n != other.n {
            return Err(Error::UniverseMismatch);
        }
        Ok(())
    }

    /// `self ∘ b = {(x, y) : ∃z, (x, z) ∈ b and (z, y) ∈ self}`.
    pub fn compose(&self, b: &Relation) -> Result<Relation> {
        self.same_size(b)?;
        let rows = (0..self.n)
            .map(|x| b.row(x).iter().fold(0, |acc, z| acc | self.rows[z]))
            .collect();
        Ok(Relation { n: self.n, rows })
    }

    pub fn transpose(&self) -> Relation {
        let mut t = Relation::empty(self.n);
        for (x, y) in self.pairs() {
            t.insert(y, x);
        }
        t
    }

    /// `self ∪ Δ`.
    pub fn reflexive_closure(&self) -> Relation {
        let rows = self.rows.iter().enumerate().map(|(i, r)| r | 1 << i).collect();
        Relation { n: self.n, rows }
    }

    /// `self − Δ`.
    pub fn strict_part(&self) -> Relation {
        let rows = self.rows.iter().enumerate().map(|(i, r)| r & !(1 << i)).collect();
        Relation { n: self.n, rows }
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|x| self.contains(x, x))
    }

    pub fn first_irreflexive_point(&self) -> Option<usize> {
        (0..self.n).find(|&x| !self.contains(x, x))
    }

    pub fn is_irreflexive(&self) -> bool {
        (0..self.n).all(|x| !self.contains(x, x))
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.pairs().into_iter().all(|(x, y)| x == y || !self.contains(y, x))
    }

    pub fn is_asymmetric(&self) -> bool {
        self.pairs().into_iter().all(|(x, y)| !self.contains(y, x))
    }

    pub fn is_transitive(&self, mode: TransitivityMode) -> bool {
        for (x, y) in self.pairs() {
            for z in self.row(y).iter() {
                if mode == TransitivityMode::DistinctTriples && (x == y || y == z || x == z) {
                    continue;
                }
                if !self.contains(x, z) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_total(&self) -> bool {
        (0..self.n).all(|x| (0..self.n).all(|y| x == y || self.contains(x, y) || self.contains(y, x)))
    }

    /// Reflexive closure is antisymmetric, transitive and total.
    pub fn is_linear_order(&self) -> bool {
        let r = self.reflexive_closure();
        r.is_antisymmetric() && r.is_transitive(TransitivityMode::Standard) && r.is_total()
    }

    /// Roster of pairs using universe labels.
    pub fn roster(&self, u: &Universe) -> String {
        let parts: Vec<String> =
            self.pairs().iter().map(|&(x, y)| format!("({},{})", u.label(x), u.label(y))).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

/// `x ⊲ y` iff some member contains `x` and misses `y`.
pub fn generated_order(f: &SetFamily) -> Relation {
    let n = f.n();
    let mut r = Relation::empty(n);
    for x in 0..n {
        for y in 0..n {
            if f.iter().any(|s| s.contains(x) && !s.contains(y)) {
                r.insert(x, y);
            }
        }
    }
    r
}

/// The same order assembled as the union of rectangles `L × (X − L)`.
pub fn generated_order_product_form(f: &SetFamily) -> Relation {
    let n = f.n();
    f.iter()
        .map(|s| Relation::rectangle(s, n))
        .fold(Relation::empty(n), |acc, r| acc.union(&r).expect("same size"))
}

/// For every ordered pair `S, T` some `R` has
/// `[S × (X−S)] ∘ [T × (X−T)] ⊆ R × (X−R)`.
pub fn rectangle_composition_condition(f: &SetFamily) -> bool {
    let n = f.n();
    let rects: Vec<Relation> = f.iter().map(|s| Relation::rectangle(s, n)).collect();
    rects.iter().all(|s| {
        rects.iter().all(|t| {
            let c = s.compose(t).expect("same size");
            rects.iter().any(|r| c.is_subset_of(r))
        })
    })
}

/// Every distinct pair is split by some member in at least one direction.
pub fn t0_separates(f: &SetFamily) -> bool {
    let n = f.n();
    (0..n).all(|x| {
        (x + 1..n).all(|y| f.iter().any(|s| s.contains(x) != s.contains(y)))
    })
}

/// Every distinct pair is split in both directions.
pub fn t1_separates(f: &SetFamily) -> bool {
    let n = f.n();
    (0..n).all(|x| {
        (0..n).all(|y| x == y || f.iter().any(|s| s.contains(x) && !s.contains(y)))
    })
}

/// `X × X − Δ ⊆ ⋃ [S × (X−S)] ∪ [(X−S) × S]`.
pub fn t0_product_characterization(f: &SetFamily) -> bool {
    let n = f.n();
    let mut cover = Relation::empty(n);
    for s in f.iter() {
        let rect = Relation::rectangle(s, n);
        cover = cover.union(&rect).and_then(|c| c.union(&rect.transpose())).expect("same size");
    }
    let off_diagonal = Relation { n, rows: (0..n).map(|x| Subset::full(n).without(x).bits()).collect() };
    off_diagonal.is_subset_of(&cover)
}

/// Result of the pairwise-union construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarUnion {
    pub family: SetFamily,
    /// Both operands contain `∅`; only then is the order identity guaranteed.
    pub precondition_holds: bool,
}

/// `{S₁ ∪ S₂ : S₁ ∈ f1, S₂ ∈ f2}`.
pub fn star_union(f1: &SetFamily, f2: &SetFamily) -> Result<StarUnion> {
    if f1.universe() != f2.universe() {
        return Err(Error::UniverseMismatch);
    }
    let family = SetFamily::collect(
        f1.universe(),
        f1.iter().flat_map(|a| f2.iter().map(move |b| a.union(b))),
    );
    let precondition_holds = f1.contains(Subset::EMPTY) && f2.contains(Subset::EMPTY);
    Ok(StarUnion { family, precondition_holds })
}

/// Whether the two families generate the same order.
pub fn orders_equivalent(f1: &SetFamily, f2: &SetFamily) -> Result<bool> {
    if f1.universe() != f2.universe() {
        return Err(Error::UniverseMismatch);
    }
    Ok(generated_order(f1) == generated_order(f2))
}

/// Strict lower rays `{y : y < a}` of a linear order, one per element.
pub fn lower_ray_nest(u: &Universe, order: &Relation) -> Result<Nest> {
    if order.n() != u.size() {
        return Err(Error::UniverseMismatch);
    }
    if !order.is_linear_order() {
        return Err(Error::NotLinear);
    }
    let strict = order.strict_part();
    Nest::new(SetFamily::collect(u, (0..u.size()).map(|a| strict.column(a))))
}
