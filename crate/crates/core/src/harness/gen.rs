//! Seeded instance generators for the randomized sweeps.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::finite::{Nest, SetFamily, Subset, Universe};

/// A uniformly shaped random nest: prefixes of a random permutation cut at
/// a random set of lengths. Every nest on `u` has positive probability.
pub fn random_nest<R: Rng>(rng: &mut R, u: &Universe) -> Nest {
    let n = u.size();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut sets = Vec::new();
    let mut prefix = Subset::EMPTY;
    for k in 0..=n {
        if k > 0 {
            prefix = prefix.with(perm[k - 1]);
        }
        if rng.gen_bool(0.5) {
            sets.push(prefix);
        }
    }
    Nest::new(SetFamily::collect(u, sets)).expect("prefix chains are nests")
}

/// A random family of at most `max_members` distinct subsets.
pub fn random_family<R: Rng>(rng: &mut R, u: &Universe, max_members: usize) -> SetFamily {
    let k = rng.gen_range(0..=max_members);
    let full = u.full().bits();
    SetFamily::collect(u, (0..k).map(|_| Subset::from_bits(rng.gen::<u64>() & full)))
}

pub(crate) fn random_universe<R: Rng>(rng: &mut R, max_n: usize) -> Universe {
    Universe::new(rng.gen_range(1..=max_n)).expect("nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::enumerate_nests;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    #[test]
    fn random_nests_reach_every_nest_on_three_points() {
        let u = Universe::new(3).unwrap();
        let all: BTreeSet<Vec<u64>> = enumerate_nests(&u, true)
            .unwrap()
            .map(|n| n.iter().map(Subset::bits).collect())
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let seen: BTreeSet<Vec<u64>> = (0..20_000)
            .map(|_| random_nest(&mut rng, &u).iter().map(Subset::bits).collect())
            .collect();
        assert_eq!(seen, all);
    }

    #[test]
    fn random_families_stay_in_range() {
        let u = Universe::new(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200 {
            let f = random_family(&mut rng, &u, 4);
            assert!(f.len() <= 4);
            assert!(f.iter().all(|s| s.is_subset_of(u.full())));
        }
    }
}
