use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use submatroid::format::{emit_instance, parse_instance};
use submatroid::greedy::TiePolicy;
use submatroid::instances::{gen_random, random_linear_matroid, random_submodular, MatroidShape, RandomShape};
use submatroid::matroid::{Matroid, PairElement};
use submatroid::set::{ElementSet, GroundSet};
use submatroid::tolerance::Tolerance;
use submatroid::validate::{matroid_violations, valuation_violations, Axiom, ValidationConfig};
use submatroid::valuation::Valuation;

fn set(n: usize, mask: u64) -> ElementSet {
    ElementSet::from_mask(n, mask & ((1u64 << n) - 1))
}

proptest! {
    #[test]
    fn set_algebra(n in 1usize..16, a in any::<u64>(), b in any::<u64>(), e in 0usize..16) {
        let (a, b) = (set(n, a), set(n, b));
        let e = e % n;
        prop_assert_eq!(a.union(&b).len() + a.intersection(&b).len(), a.len() + b.len());
        prop_assert!(a.difference(&b).intersection(&b).is_empty());
        prop_assert!(a.is_subset(&a.union(&b)));
        prop_assert!(a.with(e).contains(e) && !a.without(e).contains(e));
        prop_assert_eq!(ElementSet::from_mask(n, a.mask()), a.clone());
        prop_assert_eq!(ElementSet::from_elements(n, a.to_vec()).unwrap(), a);
    }

    #[test]
    fn pair_indices_round_trip(user in 0usize..20, resource in 0usize..20, resources in 1usize..20) {
        let resource = resource % resources;
        let p = PairElement::new(user, resource);
        prop_assert_eq!(PairElement::from_index(p.index(resources), resources), p);
    }

    #[test]
    fn tolerance_is_symmetric_and_ordered(a in -1e6f64..1e6, b in -1e6f64..1e6) {
        let t = Tolerance::default();
        prop_assert_eq!(t.eq(a, b), t.eq(b, a));
        prop_assert!(t.eq(a, a));
        prop_assert_eq!(t.lt(a, b), t.gt(b, a));
        prop_assert!(!(t.lt(a, b) && t.eq(a, b)));
    }

    #[test]
    fn generated_matroids_satisfy_the_axioms(seed in any::<u64>(), n in 1usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_linear_matroid(&mut rng, n).unwrap();
        prop_assert!(matroid_violations(&m).is_empty());
        let full = m.ground().full_set();
        let basis = (0..n).fold(m.ground().empty_set(), |s, e| if m.can_extend(&s, e) { s.with(e) } else { s });
        prop_assert!(m.is_basis(&basis));
        prop_assert_eq!(basis.len(), m.rank());
        prop_assert!(basis.is_subset(&full));
    }

    #[test]
    fn generated_valuations_are_monotone_submodular(seed in any::<u64>(), n in 1usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = random_submodular(&mut rng, n).unwrap();
        prop_assert!(valuation_violations(&z, &ValidationConfig::default()).is_empty());
        prop_assert_eq!(z.value(&ElementSet::empty(n)).unwrap(), 0.0);
    }

    #[test]
    fn marginal_gain_is_a_difference(seed in any::<u64>(), n in 1usize..9, mask in any::<u64>(), q in 0usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = random_submodular(&mut rng, n).unwrap();
        let s = set(n, mask);
        let q = q % n;
        if s.contains(q) {
            prop_assert!(z.marginal_gain(&s, q).is_err());
        } else {
            let diff = z.value(&s.with(q)).unwrap() - z.value(&s).unwrap();
            prop_assert!(Tolerance::default().eq(z.marginal_gain(&s, q).unwrap(), diff));
        }
    }

    #[test]
    fn tie_policy_description_round_trips(picks in prop::collection::vec(0usize..8, 0..8), kind in 0u8..3) {
        let ground = GroundSet::with_labels((0..8).map(|i| format!("x{i}")).collect()).unwrap();
        let policy = match kind {
            0 => TiePolicy::LowestIndex,
            1 => TiePolicy::HighestIndex,
            _ => {
                let mut order = Vec::new();
                for p in picks {
                    if !order.contains(&p) {
                        order.push(p);
                    }
                }
                TiePolicy::Prefer(order)
            }
        };
        let text = policy.describe(&ground);
        prop_assert_eq!(TiePolicy::parse(&text, &ground).unwrap(), policy);
    }

    #[test]
    fn instance_files_round_trip(seed in 0u64..5000, n in 1usize..9, k in 0usize..3, partition in any::<bool>()) {
        let shape = if partition {
            RandomShape::Partition { users: 1 + k, resources: n.min(5) }
        } else {
            RandomShape::Tabular {
                elements: n,
                matroid: [MatroidShape::Uniform, MatroidShape::Partition, MatroidShape::Explicit][k],
            }
        };
        let inst = gen_random(seed, &shape).unwrap();
        let text = emit_instance(&inst);
        let back = parse_instance(&text, "mem", true).unwrap();
        prop_assert_eq!(back.valuation(), inst.valuation());
        prop_assert_eq!(back.ground(), inst.ground());
        prop_assert_eq!(back.matroid().kind(), inst.matroid().kind());
        prop_assert_eq!(emit_instance(&back), text);
    }
}

#[test]
fn broken_families_are_caught_with_witnesses() {
    let g = GroundSet::new(3);
    let sets = |v: &[&[usize]]| {
        v.iter()
            .map(|s| ElementSet::from_elements(3, s.iter().copied()).unwrap())
            .collect::<Vec<_>>()
    };
    let no_empty = Matroid::explicit_unchecked(g.clone(), sets(&[&[0]])).unwrap();
    assert!(matroid_violations(&no_empty)
        .iter()
        .any(|v| v.axiom == Axiom::EmptySetIndependent));
    let not_hereditary = Matroid::explicit_unchecked(g.clone(), sets(&[&[], &[0], &[0, 1]])).unwrap();
    assert!(matroid_violations(&not_hereditary)
        .iter()
        .any(|v| v.axiom == Axiom::Hereditary));
    let no_exchange = Matroid::explicit_unchecked(g, sets(&[&[], &[0], &[1], &[2], &[0, 1]])).unwrap();
    assert!(matroid_violations(&no_exchange)
        .iter()
        .any(|v| v.axiom == Axiom::Augmentation));
}

#[test]
fn non_submodular_tables_are_caught() {
    // Complementary pair: Z({0,1}) exceeds Z({0}) + Z({1}).
    let z = Valuation::tabular(2, vec![0.0, 1.0, 1.0, 3.0]).unwrap();
    let v = valuation_violations(&z, &ValidationConfig::default());
    assert!(v.iter().any(|v| v.axiom == Axiom::Submodularity));
    let shrinking = Valuation::tabular(2, vec![0.0, 2.0, 1.0, 1.5]).unwrap();
    let v = valuation_violations(&shrinking, &ValidationConfig::default());
    assert!(v.iter().any(|v| v.axiom == Axiom::Monotonicity));
}
