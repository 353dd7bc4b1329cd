//! Finite groups given by Cayley tables, compatibility of nest orders with
//! the group operation, and continuity of inversion and multiplication.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite::{Nest, SetFamily, Subset, Universe, MAX_UNIVERSE};
use crate::relation::{generated_order, t0_separates};
use crate::topology::{is_continuous, is_open_in_product, Topology};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    name: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Left,
    Right,
}

#[derive(Serialize, Deserialize)]
struct TableRepr {
    order: usize,
    table: Vec<Vec<usize>>,
}

impl FiniteGroup {
    /// Validate a Cayley table: closure, associativity, identity, inverses.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if n > MAX_UNIVERSE {
            return Err(Error::UniverseTooLarge { size: n, limit: MAX_UNIVERSE });
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!("row {i} has {} entries", row.len())));
            }
            if let Some(&v) = row.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidGroup(format!("entry {v} in row {i} is out of range")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidGroup(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::InvalidGroup("no identity".into()))?;
        let inverse = (0..n)
            .map(|x| {
                (0..n)
                    .find(|&y| table[x][y] == identity && table[y][x] == identity)
                    .ok_or_else(|| Error::InvalidGroup(format!("{x} has no inverse")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FiniteGroup { order: n, table, identity, inverse, name: format!("table{n}") })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let repr: TableRepr = serde_json::from_str(text)?;
        if repr.table.len() != repr.order {
            return Err(Error::Format(format!(
                "order {} does not match {} table rows",
                repr.order,
                repr.table.len()
            )));
        }
        Self::from_table(repr.table)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&TableRepr { order: self.order, table: self.table.clone() })
            .expect("table serializes")
    }

    fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// `ℤ_n` under addition.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("cyclic group of order 0".into()));
        }
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Ok(Self::from_table(table)?.named(format!("Z{n}")))
    }

    pub fn klein_four() -> Self {
        let table = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
        Self::from_table(table).expect("Klein table is a group").named("Z2xZ2")
    }

    /// Permutations of three points in lexicographic order; `x * y` applies `y` first.
    pub fn symmetric3() -> Self {
        let perms = permutations(3);
        Self::from_perms(&perms).named("S3")
    }

    /// Symmetries of a square as permutations of its corners.
    pub fn dihedral4() -> Self {
        let r = [1, 2, 3, 0];
        let s = [0, 3, 2, 1];
        let mut elems: Vec<Vec<usize>> = vec![vec![0, 1, 2, 3]];
        let mut frontier = elems.clone();
        while let Some(p) = frontier.pop() {
            for g in [&r[..], &s[..]] {
                let q: Vec<usize> = (0..4).map(|i| p[g[i]]).collect();
                if !elems.contains(&q) {
                    elems.push(q.clone());
                    frontier.push(q);
                }
            }
        }
        elems.sort();
        Self::from_perms(&elems).named("D4")
    }

    fn from_perms(perms: &[Vec<usize>]) -> Self {
        let k = perms[0].len();
        let table = perms
            .iter()
            .map(|p| {
                perms
                    .iter()
                    .map(|q| {
                        let c: Vec<usize> = (0..k).map(|i| p[q[i]]).collect();
                        perms.iter().position(|r| *r == c).expect("closed under composition")
                    })
                    .collect()
            })
            .collect();
        Self::from_table(table).expect("permutation group")
    }

    /// `G × H` with `(g, h)` at index `g·|H| + h`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<Self> {
        let (m, n) = (g.order, h.order);
        let table = (0..m * n)
            .map(|a| (0..m * n).map(|b| g.op(a / n, b / n) * n + h.op(a % n, b % n)).collect())
            .collect();
        Ok(Self::from_table(table)?.named(format!("{}x{}", g.name, h.name)))
    }

    /// Look up a built-in group: `Z<n>`, `Z2xZ2`, `S3`, `D4`.
    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "Z2xZ2" | "V4" | "klein" => Ok(Self::klein_four()),
            "S3" => Ok(Self::symmetric3()),
            "D4" => Ok(Self::dihedral4()),
            _ => match name.strip_prefix('Z').and_then(|k| k.parse().ok()) {
                Some(n) => Self::cyclic(n),
                None => Err(Error::Unsupported(format!("unknown group {name:?}"))),
            },
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn op(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn universe(&self) -> Universe {
        Universe::new(self.order).expect("order within limits")
    }

    pub fn translate(&self, g: usize, s: Subset, side: Side) -> Subset {
        s.iter()
            .map(|x| match side {
                Side::Left => self.op(g, x),
                Side::Right => self.op(x, g),
            })
            .collect()
    }

    pub fn inverse_set(&self, s: Subset) -> Subset {
        s.iter().map(|x| self.inv(x)).collect()
    }

    pub fn product_set(&self, a: Subset, b: Subset) -> Subset {
        a.iter().flat_map(|x| b.iter().map(move |y| self.op(x, y))).collect()
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for i in 0..k {
            let mut q = p.clone();
            q.insert(i, k - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// A triple `(a, b, g)` on which the biconditional fails.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CompatWitness {
    pub a: usize,
    pub b: usize,
    pub g: usize,
    pub side: Side,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompatReport {
    pub compatible: bool,
    /// The standing separation hypothesis; the scan runs regardless.
    pub t0_separating: bool,
    pub witness: Option<CompatWitness>,
}

/// `a ⊲ b ⟺ a*g ⊲ b*g` and `a ⊲ b ⟺ g*a ⊲ g*b` for all `a, b, g`.
pub fn order_compatible(grp: &FiniteGroup, family: &SetFamily) -> CompatReport {
    let lt = generated_order(family);
    let n = grp.order();
    let mut witness = None;
    'scan: for a in 0..n {
        for b in 0..n {
            let rel = lt.contains(a, b);
            for g in 0..n {
                if rel != lt.contains(grp.op(a, g), grp.op(b, g)) {
                    witness = Some(CompatWitness { a, b, g, side: Side::Right });
                    break 'scan;
                }
                if rel != lt.contains(grp.op(g, a), grp.op(g, b)) {
                    witness = Some(CompatWitness { a, b, g, side: Side::Left });
                    break 'scan;
                }
            }
        }
    }
    CompatReport { compatible: witness.is_none(), t0_separating: t0_separates(family), witness }
}

/// Every left and right translate of every member is again a member.
pub fn prop51_premise(grp: &FiniteGroup, family: &SetFamily) -> bool {
    family.iter().all(|l| {
        (0..grp.order()).all(|g| {
            family.contains(grp.translate(g, l, Side::Left))
                && family.contains(grp.translate(g, l, Side::Right))
        })
    })
}

/// Members of a translation-closed nest are `∅` or `G`.
pub fn translation_closed_members_trivial(grp: &FiniteGroup, nest: &Nest) -> bool {
    !prop51_premise(grp, nest) || nest.iter().all(|l| l.is_empty() || l == nest.full())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ImplicationCheck {
    pub premise: bool,
    pub conclusion: bool,
}

impl ImplicationCheck {
    pub fn holds(&self) -> bool {
        !self.premise || self.conclusion
    }
}

fn check_universe(grp: &FiniteGroup, f: &SetFamily) -> Result<()> {
    if f.n() != grp.order() {
        return Err(Error::UniverseMismatch);
    }
    Ok(())
}

/// Premise: inversion swaps the two families. Conclusion: `x ↦ x⁻¹` is
/// continuous for the topology generated by `l ∪ r`.
pub fn inversion_continuity_check(
    grp: &FiniteGroup,
    l: &SetFamily,
    r: &SetFamily,
) -> Result<ImplicationCheck> {
    check_universe(grp, l)?;
    check_universe(grp, r)?;
    let premise = l.iter().all(|s| r.contains(grp.inverse_set(s)))
        && r.iter().all(|s| l.contains(grp.inverse_set(s)));
    let t = Topology::from_subbase(&l.union(r)?)?;
    let map: Vec<usize> = (0..grp.order()).map(|x| grp.inv(x)).collect();
    Ok(ImplicationCheck { premise, conclusion: is_continuous(&map, &t, &t)? })
}

fn factorizes(grp: &FiniteGroup, f: &SetFamily) -> bool {
    f.iter().all(|l| {
        (0..grp.order()).all(|x| {
            (0..grp.order()).all(|y| {
                !l.contains(grp.op(x, y))
                    || f.iter().filter(|lx| lx.contains(x)).any(|lx| {
                        f.iter()
                            .filter(|ly| ly.contains(y))
                            .any(|ly| grp.product_set(lx, ly).is_subset_of(l))
                    })
            })
        })
    })
}

/// Premise: every product landing in a member factors through members of
/// the same family. Conclusion: `(x, y) ↦ x*y` is continuous from the
/// product topology.
pub fn multiplication_continuity_check(
    grp: &FiniteGroup,
    l: &SetFamily,
    r: &SetFamily,
) -> Result<ImplicationCheck> {
    check_universe(grp, l)?;
    check_universe(grp, r)?;
    let premise = factorizes(grp, l) && factorizes(grp, r);
    let t = Topology::from_subbase(&l.union(r)?)?;
    let n = grp.order();
    let conclusion = t.opens().iter().all(|u| {
        let rows: Vec<Subset> =
            (0..n).map(|x| (0..n).filter(|&y| u.contains(grp.op(x, y))).collect()).collect();
        is_open_in_product(&rows, &t, &t)
    });
    Ok(ImplicationCheck { premise, conclusion })
}
