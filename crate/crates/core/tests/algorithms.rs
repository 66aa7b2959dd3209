use proptest::prelude::*;

use submatroid::analysis::{analyze, discriminant_general, Discriminant};
use submatroid::exact::{
    assignment_optimum, brute_force_optimum, chain_optimum, exact_optimum, verify_guarantee, OptimumMethod,
    VerifyOptions, DEFAULT_CAP,
};
use submatroid::greedy::{run, run_greedy, run_greedy_m, run_greedy_on, Algorithm, GreedyConfig, TiePolicy};
use submatroid::instance::Instance;
use submatroid::instances::{gen_random, MatroidShape, RandomShape};
use submatroid::matroid::Matroid;
use submatroid::set::GroundSet;
use submatroid::tolerance::Tolerance;
use submatroid::valuation::{DiscountTerm, Valuation};

fn shape(k: u8) -> MatroidShape {
    [MatroidShape::Uniform, MatroidShape::Partition, MatroidShape::Explicit][k as usize % 3]
}

fn tabular(seed: u64, n: usize, k: u8) -> Instance {
    gen_random(
        seed,
        &RandomShape::Tabular {
            elements: n,
            matroid: shape(k),
        },
    )
    .unwrap()
}

/// Capacity-one blocks of two elements; each second-block element may be
/// discounted by an element of the previous block.
fn chain_instance(terms: &[(f64, f64, Option<bool>)]) -> Instance {
    let blocks = terms.len() / 2;
    let n = blocks * 2;
    let terms: Vec<DiscountTerm> = terms[..n]
        .iter()
        .enumerate()
        .map(|(e, &(full, frac, trig))| match trig {
            Some(which) if e >= 2 => DiscountTerm::triggered(full, full * frac, (e / 2 - 1) * 2 + which as usize),
            _ => DiscountTerm::plain(full),
        })
        .collect();
    let m = Matroid::partition(
        GroundSet::new(n),
        (0..blocks).map(|b| vec![2 * b, 2 * b + 1]).collect(),
        vec![1; blocks],
    )
    .unwrap();
    Instance::new(m, Valuation::discounted(terms).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn greedy_returns_a_basis_whose_value_is_the_sum_of_gains(seed in 0u64..10_000, n in 1usize..9, k in 0u8..3) {
        let inst = tabular(seed, n, k);
        let trace = run_greedy(inst.valuation(), inst.matroid(), &GreedyConfig::default()).unwrap();
        prop_assert!(inst.matroid().is_basis(&trace.final_set));
        prop_assert_eq!(trace.steps.len(), inst.rank());
        let total: f64 = trace.steps.iter().map(|s| s.gain).sum();
        prop_assert!(Tolerance::default().eq(total, trace.final_value));
        prop_assert!(Tolerance::default().eq(inst.valuation().value(&trace.final_set).unwrap(), trace.final_value));
        for s in &trace.steps {
            prop_assert!(s.tie_set.contains(&s.chosen));
            prop_assert!(s.runner_up_gain.is_none_or(|r| r <= s.gain + 1e-12));
        }
    }

    #[test]
    fn discriminants_are_at_least_one_and_bounds_are_ordered(seed in 0u64..10_000, n in 1usize..9, k in 0u8..3) {
        let inst = tabular(seed, n, k);
        let tol = Tolerance::default();
        let trace = run_greedy(inst.valuation(), inst.matroid(), &GreedyConfig::default()).unwrap();
        let d = discriminant_general(&trace, inst.valuation(), inst.matroid(), tol).unwrap();
        prop_assert!(d.iter().all(|di| di.value() >= 1.0));
        let report = analyze(&trace, &inst, tol).unwrap();
        let b = report.bounds;
        prop_assert!(b.half <= b.curvature);
        prop_assert!(b.curvature <= b.discriminant.unwrap() + 1e-15);
        prop_assert!(b.discriminant.unwrap() <= 1.0);
    }

    #[test]
    fn every_bound_holds_against_the_optimum(seed in 0u64..10_000, n in 1usize..9, k in 0u8..3) {
        let inst = tabular(seed, n, k);
        let rec = verify_guarantee(&inst, Algorithm::Greedy, &VerifyOptions::default()).unwrap();
        prop_assert!(rec.pass, "{:?}", rec.checks);
        prop_assert!(rec.ratio <= 1.0 + 1e-9);
    }

    #[test]
    fn welfare_algorithms_respect_their_bounds(seed in 0u64..10_000, users in 1usize..4, resources in 1usize..6) {
        let inst = gen_random(seed, &RandomShape::Partition { users, resources }).unwrap();
        for alg in [Algorithm::GreedyM, Algorithm::GreedyOn] {
            let rec = verify_guarantee(&inst, alg, &VerifyOptions::default()).unwrap();
            prop_assert!(rec.pass, "{alg}: {:?}", rec.checks);
        }
    }

    #[test]
    fn block_chain_optimum_matches_enumeration(
        terms in prop::collection::vec((0.1f64..5.0, 0.0f64..=1.0, prop::option::of(any::<bool>())), 2..17)
    ) {
        let inst = chain_instance(&terms);
        let tol = Tolerance::default();
        let chain = chain_optimum(inst.valuation(), inst.matroid(), tol).expect("chain structure applies");
        let brute = brute_force_optimum(inst.valuation(), inst.matroid(), DEFAULT_CAP, tol).unwrap();
        prop_assert_eq!(chain.method, OptimumMethod::BlockChain);
        prop_assert!(tol.eq(chain.optimum_value, brute.optimum_value));
        prop_assert!(tol.eq(inst.valuation().value(&chain.optimum_set).unwrap(), chain.optimum_value));
    }

    #[test]
    fn assignment_and_matroid_enumeration_agree(seed in 0u64..10_000, users in 1usize..4, resources in 1usize..6) {
        let inst = gen_random(seed, &RandomShape::Partition { users, resources }).unwrap();
        let tol = Tolerance::default();
        let a = assignment_optimum(&inst, DEFAULT_CAP, tol).unwrap();
        let b = exact_optimum(inst.valuation(), inst.matroid(), DEFAULT_CAP, tol).unwrap();
        prop_assert!(tol.eq(a.optimum_value, b.optimum_value));
    }

    #[test]
    fn tie_policies_only_change_tied_choices(seed in 0u64..10_000, n in 1usize..9) {
        let inst = tabular(seed, n, 0);
        let lo = run_greedy(inst.valuation(), inst.matroid(), &GreedyConfig::default()).unwrap();
        let cfg = GreedyConfig { tie_policy: TiePolicy::HighestIndex, ..GreedyConfig::default() };
        let hi = run_greedy(inst.valuation(), inst.matroid(), &cfg).unwrap();
        if lo.steps.iter().all(|s| s.tie_set.len() == 1) {
            prop_assert_eq!(lo.order(), hi.order());
        }
    }
}

#[test]
fn greedy_m_equals_offline_greedy_value_on_one_user() {
    for seed in 0..20 {
        let inst = gen_random(seed, &RandomShape::Partition { users: 1, resources: 5 }).unwrap();
        let m = run_greedy_m(&inst, &GreedyConfig::default()).unwrap();
        let on = run_greedy_on(&inst, &[0, 1, 2, 3, 4], &GreedyConfig::default()).unwrap();
        assert!(Tolerance::default().eq(m.final_value, on.final_value));
        assert_eq!(m.steps.len(), 5);
    }
}

#[test]
fn online_arrival_is_echoed_and_validated() {
    let inst = gen_random(3, &RandomShape::Partition { users: 2, resources: 3 }).unwrap();
    let cfg = GreedyConfig::default();
    let t = run(&inst, Algorithm::GreedyOn, Some(&[2, 0, 1]), &cfg).unwrap();
    assert_eq!(t.arrival.as_deref(), Some(&[2, 0, 1][..]));
    assert_eq!(
        t.steps.iter().map(|s| s.pair.unwrap().resource).collect::<Vec<_>>(),
        vec![2, 0, 1]
    );
    assert!(run(&inst, Algorithm::GreedyOn, Some(&[0, 0, 1]), &cfg).is_err());
    assert!(run(&inst, Algorithm::GreedyM, Some(&[0, 1, 2]), &cfg).is_err());
}

#[test]
fn modular_valuations_get_a_unit_guarantee() {
    let z = Valuation::modular(vec![3.0, 1.0, 2.0, 2.0]).unwrap();
    let inst = Instance::new(Matroid::uniform(GroundSet::new(4), 2).unwrap(), z).unwrap();
    let trace = run_greedy(inst.valuation(), inst.matroid(), &GreedyConfig::default()).unwrap();
    let report = analyze(&trace, &inst, Tolerance::default()).unwrap();
    assert_eq!(report.curvature.global, 0.0);
    assert_eq!(report.bounds.discriminant, Some(1.0));
    assert_eq!(trace.final_set.to_vec(), vec![0, 2]);
    assert_eq!(report.discriminants[1], Discriminant::Finite(1.0));
}
