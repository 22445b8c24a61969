//! The library solvers against brute force written from the definitions.

mod common;

use common::{random_alpha, random_instance, random_lambda, Flat};
use pbweak::layers::{cost_worthy_layer, greedy_truncation_layer};
use pbweak::rules::{
    evaluate_rule, solve_dp_cardinality, solve_dp_cost, solve_exhaustive, RuleSpec, Strategy, UtilityFunction,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn exhaustive_matches_brute_force_for_every_rule() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    for _ in 0..300 {
        let inst = random_instance(&mut rng, 7, 4, 8, 0..=25);
        let flat = Flat::new(&inst);
        let mut specs: Vec<RuleSpec> = Vec::new();
        for f in UtilityFunction::ALL {
            specs.push(RuleSpec::greedy(f));
            specs.push(RuleSpec::cost_worthy(f, random_alpha(&mut rng, inst.num_projects(), inst.budget())));
        }
        if let Some(lambda) = random_lambda(&mut rng, inst.budget()) {
            specs.push(RuleSpec::need_based(lambda));
        }
        for spec in specs {
            let out = solve_exhaustive(&inst, &spec).unwrap();
            let (value, sets) = flat.brute_force(&spec);
            assert_eq!(out.optimal_value, value, "{spec}");
            assert_eq!(out.optimal_sets, sets, "{spec}");
            let winners: std::collections::BTreeSet<_> = sets.iter().flat_map(|s| s.iter().cloned()).collect();
            assert_eq!(out.winners, winners);
            assert!(!out.non_enumerating);
            checked += 1;
        }
    }
    assert!(checked > 2000);
}

#[test]
fn layers_match_their_definitions() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..500 {
        let inst = random_instance(&mut rng, 8, 5, 10, 0..=30);
        let flat = Flat::new(&inst);
        let greedy = greedy_truncation_layer(&inst);
        for (i, mask) in flat.greedy_layer().into_iter().enumerate() {
            assert_eq!(greedy.agent(i), &flat.to_set(mask));
        }
        let alpha = random_alpha(&mut rng, inst.num_projects(), inst.budget());
        let worthy = cost_worthy_layer(&inst, &alpha).unwrap();
        for (i, mask) in flat.cost_worthy_layer(alpha.entries()).into_iter().enumerate() {
            assert_eq!(worthy.agent(i), &flat.to_set(mask));
        }
    }
}

#[test]
fn dp_value_matches_and_witness_is_optimal() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..300 {
        let inst = random_instance(&mut rng, 9, 5, 10, 1..=30);
        let alpha = random_alpha(&mut rng, inst.num_projects(), inst.budget());
        let layer = cost_worthy_layer(&inst, &alpha).unwrap();

        let exact = solve_exhaustive(&inst, &RuleSpec::cost_worthy(UtilityFunction::Cost, alpha.clone())).unwrap();
        let (value, witness) = solve_dp_cost(&inst, &layer, alpha.first()).unwrap();
        assert_eq!(value, exact.optimal_value);
        assert!(exact.contains_set(&witness));

        let exact = solve_exhaustive(&inst, &RuleSpec::greedy(UtilityFunction::Cardinality)).unwrap();
        let (value, witness) = solve_dp_cardinality(&inst, &greedy_truncation_layer(&inst)).unwrap();
        assert_eq!(value, exact.optimal_value);
        assert!(exact.contains_set(&witness));

        let via_dispatch =
            evaluate_rule(&inst, &RuleSpec::greedy(UtilityFunction::Cardinality), Strategy::DpIfAvailable).unwrap();
        assert!(via_dispatch.non_enumerating);
        assert_eq!(via_dispatch.optimal_sets, vec![witness]);
    }
}

#[test]
fn need_rule_with_unit_costs_and_unit_need_is_chamberlin_courant() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..100 {
        let mut inst = random_instance(&mut rng, 6, 5, 1, 1..=3);
        inst = inst.with_budget(inst.budget().min(inst.num_projects() as u64)).unwrap();
        let flat = Flat::new(&inst);
        let k = inst.budget() as usize;
        let best = common::subsets_by_size(flat.m(), k)
            .filter(|&s| s != 0)
            .map(|s| (0..inst.num_agents()).map(|i| flat.need_rank(i, 1, 1, s)).sum::<u64>())
            .min()
            .unwrap();
        let out = solve_exhaustive(&inst, &RuleSpec::need_based(pbweak::NeedParameter::integer(1).unwrap())).unwrap();
        assert_eq!(out.optimal_value, best);
    }
}
