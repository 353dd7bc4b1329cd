use nestkit::analysis::{
    conditions, is_interlocking_alexandroff, is_interlocking_def, is_interlocking_lowersets, make_dual_pair,
    pair_topologies,
};
use nestkit::bounds::{down_covers_x, has_lower_bound, has_upper_bound, up_covers_x};
use nestkit::io::{instance_json, load_instance, InstanceKind};
use nestkit::relation::{
    generated_order_product_form, rectangle_composition_condition, star_union, t0_product_characterization,
    lower_ray_nest, t0_separates, TransitivityMode,
};
use nestkit::topology::{interval_topology, join, lower_topology, upper_topology};
use nestkit::{generated_order, Nest, Relation, SetFamily, Subset, Universe};
use proptest::prelude::*;

fn family() -> impl Strategy<Value = SetFamily> {
    (1usize..=6).prop_flat_map(|n| {
        proptest::collection::vec(0u64..(1 << n), 0..8).prop_map(move |masks| {
            let u = Universe::new(n).unwrap();
            SetFamily::collect(&u, masks.into_iter().map(Subset::from_bits))
        })
    })
}

/// Two families on one universe, both containing the empty set.
fn pair_with_empty() -> impl Strategy<Value = (SetFamily, SetFamily)> {
    (1usize..=6).prop_flat_map(|n| {
        let masks = || proptest::collection::vec(0u64..(1 << n), 0..6);
        (masks(), masks()).prop_map(move |(a, b)| {
            let u = Universe::new(n).unwrap();
            let make = |m: Vec<u64>| SetFamily::collect(&u, m.into_iter().map(Subset::from_bits).chain([Subset::EMPTY]));
            (make(a), make(b))
        })
    })
}

/// Prefixes of a permutation, each kept or dropped.
fn nest() -> impl Strategy<Value = Nest> {
    (1usize..=6).prop_flat_map(|n| {
        (Just(n), Just((0..n).collect::<Vec<_>>()).prop_shuffle(), proptest::collection::vec(any::<bool>(), n + 1))
            .prop_map(|(n, perm, keep)| {
                let u = Universe::new(n).unwrap();
                let members = (0..=n)
                    .filter(|&k| keep[k])
                    .map(|k| Subset::from_indices(perm[..k].iter().copied()));
                Nest::new(SetFamily::collect(&u, members)).unwrap()
            })
    })
}

fn small_nest() -> impl Strategy<Value = Nest> {
    nest().prop_filter("at most 4 points", |n| n.n() <= 4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn complement_is_an_involution(f in family()) {
        prop_assert_eq!(f.complement().complement(), f);
    }

    #[test]
    fn complement_keeps_nests(n in nest()) {
        prop_assert!(n.complement().is_nest());
    }

    #[test]
    fn product_form_matches(f in family()) {
        prop_assert_eq!(generated_order(&f), generated_order_product_form(&f));
    }

    #[test]
    fn nests_generate_strict_orders(n in nest()) {
        let lt = generated_order(&n);
        prop_assert!(rectangle_composition_condition(&n));
        prop_assert!(lt.is_transitive(TransitivityMode::Standard));
        prop_assert!(lt.is_irreflexive());
    }

    #[test]
    fn condition_gives_transitivity(f in family()) {
        if rectangle_composition_condition(&f) {
            prop_assert!(generated_order(&f).is_transitive(TransitivityMode::Standard));
        }
    }

    #[test]
    fn t0_characterizations_agree(f in family()) {
        prop_assert_eq!(t0_separates(&f), t0_product_characterization(&f));
    }

    #[test]
    fn t0_nest_orders_are_linear(n in nest()) {
        if t0_separates(&n) {
            prop_assert!(generated_order(&n).reflexive_closure().is_linear_order());
        }
    }

    #[test]
    fn complement_transposes(f in family()) {
        prop_assert_eq!(generated_order(&f.complement()), generated_order(&f).transpose());
    }

    #[test]
    fn star_union_keeps_order((a, b) in pair_with_empty()) {
        let s = star_union(&a, &b).unwrap();
        prop_assert!(s.precondition_holds);
        prop_assert_eq!(generated_order(&s.family), generated_order(&a.union(&b).unwrap()));
    }

    #[test]
    fn condition_chain(n in nest()) {
        let c = conditions(&n);
        prop_assert!(!c.c3 || c.c2);
        prop_assert!(!c.c2 || c.c1);
        prop_assert!(!c.c3 || t0_separates(&n));
    }

    #[test]
    fn interlocking_forms_agree(n in small_nest()) {
        let d = is_interlocking_def(&n);
        prop_assert_eq!(d, is_interlocking_alexandroff(&n));
        prop_assert_eq!(d, is_interlocking_lowersets(&n));
    }

    #[test]
    fn complements_are_dual(n in small_nest()) {
        let pair = make_dual_pair(&n, &n.complement()).unwrap();
        let t = pair_topologies(&pair).unwrap();
        prop_assert!(t.interval.is_finer_or_equal(&t.lower));
        prop_assert!(t.interval.is_finer_or_equal(&t.upper));
    }

    #[test]
    fn topology_laws(n in small_nest()) {
        let u = n.universe().clone();
        let le = generated_order(&n).reflexive_closure();
        let lo = lower_topology(&u, &le).unwrap();
        let up = upper_topology(&u, &le).unwrap();
        let iv = interval_topology(&u, &le).unwrap();
        prop_assert!(lo.satisfies_axioms() && up.satisfies_axioms());
        prop_assert_eq!(join(&lo, &up).unwrap(), join(&up, &lo).unwrap());
        prop_assert_eq!(join(&lo, &lo).unwrap(), lo.clone());
        prop_assert!(iv.is_finer_or_equal(&lo) && iv.is_finer_or_equal(&up));
    }

    #[test]
    fn finite_covers_need_bounds(n in small_nest(), bits in any::<u64>()) {
        let y = Subset::from_bits(bits & Subset::full(n.n()).bits());
        prop_assert!(!down_covers_x(&n, y).holds || !has_upper_bound(&n, y) || y.is_empty());
        prop_assert!(!up_covers_x(&n, y).holds || !has_lower_bound(&n, y) || y.is_empty());
    }

    #[test]
    fn strict_lower_rays_separate(perm in (1usize..=6).prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle())) {
        let n = perm.len();
        let u = Universe::new(n).unwrap();
        let pairs = (0..n).flat_map(|i| (i..n).map(move |j| (i, j)));
        let order = Relation::from_pairs(n, pairs.map(|(i, j)| (perm[i], perm[j]))).unwrap();
        let rays = lower_ray_nest(&u, &order).unwrap();
        prop_assert!(t0_separates(&rays));
        prop_assert_eq!(generated_order(&rays).reflexive_closure(), order);
    }

    #[test]
    fn instances_round_trip(f in family()) {
        let back = load_instance(&instance_json(&f, InstanceKind::Family)).unwrap();
        prop_assert_eq!(back.family, f);
    }
}
