//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; exits non-zero on any FAIL.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{is_inclusion_maximal, load, random_alpha, random_instance, set, top_k_sum, Flat};
use pbweak::axioms::{
    check_axiom, refutation_fixtures, search_counterexample_with, violation_fixtures, AlphaCondition, AxiomId,
    CheckConfig, GeneratorConfig, LambdaRange, RuleFamily, VerdictStatus,
};
use pbweak::cli::{run_cli, EXIT_VIOLATED};
use pbweak::format::{parse_instance, serialize_instance};
use pbweak::layers::{cost_worthy_layer, greedy_truncation_layer, WorthVector};
use pbweak::model::{disutility_t, prefix_set, rank_of};
use pbweak::reductions::{from_beta_cc, from_subset_sum, from_vertex_cover, Variant};
use pbweak::rules::{
    solve_dp_cardinality, solve_dp_cost, solve_exhaustive, total_disutility, Outcome, RuleSpec, UtilityFunction,
};
use pbweak::{BudgetSet, Instance, NeedParameter, Project, WeakRanking};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use UtilityFunction::{Cardinality as Card, Cost, Coverage as Cover};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Counts outcomes checked for inclusion maximality across criteria 1 to 4.
#[derive(Default)]
struct MaximalityLog {
    checked: u64,
    failures: Vec<String>,
}

impl MaximalityLog {
    fn record(&mut self, label: &str, instance: &Instance, outcome: &Outcome) {
        self.checked += 1;
        if !is_inclusion_maximal(instance, outcome) {
            self.failures.push(format!("{label}\n{}", serialize_instance(instance)));
        }
    }
}

fn criterion_1(log: &mut MaximalityLog) -> Check {
    let ex2 = load("example2.pb");
    let layer = greedy_truncation_layer(&ex2);
    ensure(layer.agent(0) == &set(&["a1", "a3", "a4"]) && layer.agent(1) == &set(&["a1", "a3"]), || {
        format!("greedy layer gave {layer}")
    })?;
    for f in [Card, Cost] {
        let out = solve_exhaustive(&ex2, &RuleSpec::greedy(f)).map_err(|e| e.to_string())?;
        log.record("example 2", &ex2, &out);
        ensure(out.optimal_sets == vec![set(&["a1", "a3"])], || format!("greedy[{f}] gave {:?}", out.optimal_sets))?;
    }

    let motivating = load("motivating.pb");
    let alpha = WorthVector::new(vec![100, 80, 60, 60, 60]).unwrap();
    for f in [Card, Cost] {
        let out = solve_exhaustive(&motivating, &RuleSpec::cost_worthy(f, alpha.clone())).map_err(|e| e.to_string())?;
        log.record("motivating", &motivating, &out);
        ensure(out.optimal_sets == vec![set(&["A", "C", "D", "E"])], || {
            format!("costworthy[{f}] gave {:?}", out.optimal_sets)
        })?;
    }

    let ex4 = load("example4.pb");
    let lambda = NeedParameter::integer(7).unwrap();
    let s1 = set(&["a1", "a2", "a3"]);
    let s2 = set(&["a1", "a3", "a4"]);
    let (d1, d2) = (total_disutility(&ex4, lambda, &s1).unwrap(), total_disutility(&ex4, lambda, &s2).unwrap());
    ensure(d1 == 5 && d2 == 3, || format!("disutilities {d1} and {d2}"))?;
    let out = solve_exhaustive(&ex4, &RuleSpec::need_based(lambda)).map_err(|e| e.to_string())?;
    log.record("need example", &ex4, &out);
    ensure(out.optimal_value == 3 && out.contains_set(&s2), || format!("need rule gave {:?}", out))?;
    Ok("example outcomes exact".into())
}

fn criterion_2(log: &mut MaximalityLog) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut dp_runs = 0;
    for trial in 0..500 {
        let inst = random_instance(&mut rng, 10, 6, 10, 1..=30);
        let alpha = random_alpha(&mut rng, inst.num_projects(), inst.budget());
        let cases = [
            (RuleSpec::greedy(Card), greedy_truncation_layer(&inst), None),
            (RuleSpec::cost_worthy(Card, alpha.clone()), cost_worthy_layer(&inst, &alpha).unwrap(), None),
            (
                RuleSpec::cost_worthy(Cost, alpha.clone()),
                cost_worthy_layer(&inst, &alpha).unwrap(),
                Some(alpha.first()),
            ),
        ];
        for (spec, profile, cost_cap) in cases {
            let exact = solve_exhaustive(&inst, &spec).map_err(|e| e.to_string())?;
            log.record("dp trial", &inst, &exact);
            let (value, witness) = match cost_cap {
                None => solve_dp_cardinality(&inst, &profile),
                Some(cap) => solve_dp_cost(&inst, &profile, cap),
            }
            .map_err(|e| e.to_string())?;
            dp_runs += 1;
            let f = spec.utility().unwrap();
            let attained = pbweak::rules::total_utility(&profile, f, &witness, &inst).unwrap();
            ensure(value == exact.optimal_value, || {
                format!(
                    "trial {trial} {spec}: dp {value}, exhaustive {}\n{}",
                    exact.optimal_value,
                    serialize_instance(&inst)
                )
            })?;
            ensure(inst.is_feasible(&witness).unwrap() && attained == value, || {
                format!("trial {trial} {spec}: witness {witness} infeasible or scores {attained}")
            })?;
            ensure(exact.contains_set(&witness), || format!("trial {trial} {spec}: witness {witness} not optimal"))?;
        }
    }
    Ok(format!("500 instances, {dp_runs} DP runs agree with enumeration"))
}

fn family_label(family: &RuleFamily) -> String {
    match family {
        RuleFamily::Fixed(spec) => spec.to_string(),
        RuleFamily::Greedy(f) => format!("greedy[{f}]"),
        RuleFamily::CostWorthy(f, cond) => format!("costworthy[{f}; {cond:?}]"),
        RuleFamily::NeedBased(range) => format!("needbased[{range:?}]"),
    }
}

struct Cell {
    axiom: AxiomId,
    family: RuleFamily,
    label: String,
}

fn compliant_cells() -> Vec<Cell> {
    use AlphaCondition as A;
    use AxiomId::*;
    use LambdaRange as R;
    let g = RuleFamily::Greedy;
    let w = RuleFamily::CostWorthy;
    let d = RuleFamily::NeedBased;
    let columns = || {
        vec![
            g(Card),
            w(Card, A::Any),
            g(Cost),
            w(Cost, A::Any),
            g(Cover),
            w(Cover, A::Any),
            d(R::UpToOne),
            d(R::Middle),
            d(R::Top),
        ]
    };
    let mut cells: Vec<(AxiomId, RuleFamily)> = Vec::new();
    for axiom in [Anonymity, Neutrality, Consistency, SplittingMono, InclusionMax] {
        cells.extend(columns().into_iter().map(|f| (axiom, f)));
    }
    cells.extend(columns().into_iter().take(6).map(|f| (CandidateMono, f)));
    cells.push((CandidateMono, d(R::UpToOne)));
    cells.push((CandidateMono, d(R::Top)));
    for f in [g(Card), w(Card, A::Any), g(Cost), w(Cost, A::Any), w(Cover, A::Flat)] {
        cells.push((NonCrossingMono, f));
    }
    for f in [w(Card, A::Any), w(Cover, A::Any), d(R::UpToOne)] {
        cells.push((DiscountMono, f));
    }
    for f in [w(Card, A::GapBelowTwo), w(Cost, A::FirstAtMostOne), w(Cover, A::GapBelowTwo)] {
        cells.push((LimitMono, f));
    }
    for f in [g(Card), w(Card, A::Any), w(Cost, A::FirstAtMostOne), g(Cover), w(Cover, A::Any), d(R::UpToOne)] {
        cells.push((ProAffordability, f));
    }
    cells
        .into_iter()
        .map(|(axiom, family)| Cell { label: format!("{axiom} / {}", family_label(&family)), axiom, family })
        .collect()
}

/// (axiom, CLI rule flags) for every cell a rule is known to violate; each
/// must be backed by at least one fixture.
fn violated_cells() -> Vec<(AxiomId, Vec<&'static str>)> {
    use AxiomId::*;
    let nb = |l: &'static str| vec!["--rule", "needbased", "--lambda", l];
    let gr = |f: &'static str| vec!["--rule", "greedy", "--f", f];
    let cw = |f: &'static str| vec!["--rule", "costworthy", "--f", f, "--alpha", "0"];
    vec![
        (CandidateMono, nb("2")),
        (NonCrossingMono, gr("cover")),
        (NonCrossingMono, cw("cover")),
        (NonCrossingMono, nb("1")),
        (NonCrossingMono, nb("2")),
        (NonCrossingMono, nb("5")),
        (DiscountMono, gr("card")),
        (DiscountMono, gr("cost")),
        (DiscountMono, gr("cover")),
        (DiscountMono, cw("cost")),
        (DiscountMono, nb("2")),
        (DiscountMono, nb("3")),
        (LimitMono, gr("card")),
        (LimitMono, gr("cost")),
        (LimitMono, gr("cover")),
        (LimitMono, cw("card")),
        (LimitMono, cw("cost")),
        (LimitMono, cw("cover")),
        (LimitMono, nb("1")),
        (LimitMono, nb("2")),
        (LimitMono, nb("5")),
        (ProAffordability, gr("cost")),
        (ProAffordability, cw("cost")),
        (ProAffordability, nb("2")),
        (ProAffordability, nb("3")),
    ]
}

fn family_matches(family: &RuleFamily, spec: &RuleSpec, instance: &Instance) -> bool {
    match (family, spec) {
        (RuleFamily::Greedy(f), RuleSpec::GreedyTruncation { f: g }) => f == g,
        (RuleFamily::CostWorthy(f, cond), RuleSpec::CostWorthy { f: g, alpha }) => f == g && cond.holds(alpha),
        (RuleFamily::NeedBased(range), RuleSpec::NeedBased { lambda }) => range.contains(*lambda, instance.budget()),
        _ => false,
    }
}

fn criterion_3() -> Check {
    let started = Instant::now();
    let violations = violation_fixtures();
    let refutations = refutation_fixtures();
    for fx in violations.iter().chain(&refutations) {
        let v = check_axiom(fx.axiom, &fx.spec, &fx.instance).map_err(|e| e.to_string())?;
        ensure(v.status == VerdictStatus::Violated, || format!("fixture {} is {}", fx.name, v.status))?;
        let rechecked = v.witness.as_ref().map(|w| w.recheck());
        ensure(matches!(rechecked, Some(Ok(true))), || format!("fixture {} witness does not recheck", fx.name))?;
    }
    let violated = violated_cells();
    for (axiom, flags) in &violated {
        let mut argv = vec!["pbweak", "check-axiom", "--axiom", axiom.name(), "--fixtures"];
        argv.extend(flags.iter().copied());
        let out = run_cli(argv.clone());
        ensure(out.code == EXIT_VIOLATED, || format!("`{}` exited {}: {}", argv.join(" "), out.code, out.stderr))?;
    }

    let cells = compliant_cells();
    let gen = GeneratorConfig { max_projects: 8, max_agents: 5, ..GeneratorConfig::default() };
    let mut refuted = Vec::new();
    for (k, cell) in cells.iter().enumerate() {
        let v =
            search_counterexample_with(cell.axiom, &cell.family, &gen, 1000, 1000 + k as u64, &CheckConfig::light())
                .map_err(|e| format!("{}: {e}", cell.label))?;
        let fixture = refutations
            .iter()
            .find(|fx| fx.axiom == cell.axiom && family_matches(&cell.family, &fx.spec, &fx.instance));
        match (&v.witness, fixture) {
            (None, None) => {
                ensure(v.trials >= 1000, || format!("{}: only {} applicable trials", cell.label, v.trials))?;
            }
            (Some(w), None) => {
                eprintln!("{} violated:\n{w}\n", cell.label);
                refuted.push(format!("{} (search)", cell.label));
            }
            (found, Some(fx)) => {
                let how = if found.is_some() { "search and fixture" } else { "fixture" };
                refuted.push(format!("{} ({how} {})", cell.label, fx.name));
            }
        }
    }
    let elapsed = started.elapsed();
    ensure(elapsed < Duration::from_secs(600), || format!("took {elapsed:?}"))?;
    let summary = format!(
        "{} violation fixtures cover {} expected-violation cells; {} of {} expected-compliant cells clean over 1000 trials each",
        violations.len(),
        violated.len(),
        cells.len() - refuted.len(),
        cells.len(),
    );
    ensure(refuted.is_empty(), || {
        format!(
            "{summary}; {} expected-compliant cells have verified counterexamples: {}",
            refuted.len(),
            refuted.join(", ")
        )
    })?;
    Ok(format!("{summary} in {elapsed:.1?}"))
}

fn subset_sum_oracle(values: &[u64], target: u64) -> bool {
    (0..1u64 << values.len()).any(|mask| {
        values.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, v)| v).sum::<u64>() == target
    })
}

fn vertex_cover_oracle(edges: &[(u32, u32)], k: u64) -> bool {
    let n = edges.iter().map(|&(u, v)| u.max(v)).max().unwrap() + 1;
    (0..1u64 << n)
        .filter(|mask| mask.count_ones() as u64 <= k)
        .any(|mask| edges.iter().all(|&(u, v)| mask >> u & 1 == 1 || mask >> v & 1 == 1))
}

fn beta_cc_oracle(profile: &[Vec<usize>], m: usize, k: usize, s: u64) -> bool {
    (1..1u64 << m).filter(|c| c.count_ones() as usize <= k).any(|committee| {
        let total: u64 =
            profile.iter().map(|order| order.iter().position(|&c| committee >> c & 1 == 1).unwrap() as u64 + 1).sum();
        total <= s
    })
}

fn criterion_4(log: &mut MaximalityLog) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut yes = 0;
    let mut total = 0;
    let mut record = |label: &str, d: &pbweak::reductions::DecisionInstance, expected: bool| -> Result<(), String> {
        let out = solve_exhaustive(&d.instance, &d.spec).map_err(|e| e.to_string())?;
        log.record(label, &d.instance, &out);
        total += 1;
        yes += expected as u32;
        ensure(d.accepts(out.optimal_value) == expected, || {
            format!(
                "{label}: solver says {}, source says {expected}\n{}",
                out.optimal_value,
                serialize_instance(&d.instance)
            )
        })
    };

    for _ in 0..50 {
        let n = rng.gen_range(1..=12);
        let values: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=30)).collect();
        let sum: u64 = values.iter().sum();
        let target = rng.gen_range(1..=sum.min(60));
        let expected = subset_sum_oracle(&values, target);
        for variant in [Variant::Greedy, Variant::CostWorthy] {
            let d = from_subset_sum(&values, target, variant).map_err(|e| e.to_string())?;
            record("subset sum", &d, expected)?;
        }
    }

    let mut graphs = 0;
    while graphs < 50 {
        let nv = rng.gen_range(2..=8u32);
        let mut pairs: Vec<(u32, u32)> = (0..nv).flat_map(|u| (u + 1..nv).map(move |v| (u, v))).collect();
        pairs.shuffle(&mut rng);
        let take = rng.gen_range(1..=pairs.len());
        let edges: Vec<(u32, u32)> =
            pairs[..take].iter().map(|&(u, v)| if rng.gen_bool(0.5) { (u, v) } else { (v, u) }).collect();
        let k = rng.gen_range(3..=(nv as u64).max(3));
        let expected = vertex_cover_oracle(&edges, k);
        for variant in [Variant::Greedy, Variant::CostWorthy] {
            let d = from_vertex_cover(&edges, k, variant).map_err(|e| e.to_string())?;
            record("vertex cover", &d, expected)?;
        }
        graphs += 1;
    }

    for _ in 0..50 {
        let m = rng.gen_range(1..=6usize);
        let n = rng.gen_range(1..=6usize);
        let orders: Vec<Vec<usize>> = (0..n)
            .map(|_| {
                let mut o: Vec<usize> = (0..m).collect();
                o.shuffle(&mut rng);
                o
            })
            .collect();
        let k = rng.gen_range(1..=m);
        let s = rng.gen_range(n as u64..=(n * m) as u64);
        let profile: Vec<WeakRanking> =
            orders.iter().map(|o| WeakRanking::strict(o.iter().map(|c| format!("c{c}"))).unwrap()).collect();
        let d = from_beta_cc(&profile, k as u64, s).map_err(|e| e.to_string())?;
        record("beta-cc", &d, beta_cc_oracle(&orders, m, k, s))?;
    }
    Ok(format!("{total} decision instances agree with brute force ({yes} YES)"))
}

fn fuzz<S: Strategy>(
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    let mut runner = TestRunner::new(Config { cases: 1000, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| format!("{name}: {e}"))
}

fn arb_instance() -> impl Strategy<Value = Instance> {
    (1usize..=7, 1usize..=4, 0u64..=25, any::<u64>()).prop_map(|(m, n, budget, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let projects: Vec<Project> = (1..=m).map(|i| Project::new(format!("p{i}"), rng.gen_range(1..=10))).collect();
        let profile = (0..n).map(|_| common::random_ranking(&mut rng, m)).collect();
        Instance::new(projects, budget, profile).unwrap()
    })
}

fn random_subset(inst: &Instance, bits: u64) -> BudgetSet {
    inst.projects().iter().enumerate().filter(|(j, _)| bits >> j & 1 == 1).map(|(_, p)| p.id.clone()).collect()
}

fn criterion_5(log: &MaximalityLog) -> Check {
    ensure(log.failures.is_empty(), || format!("not inclusion-maximal: {}", log.failures[0]))?;

    fuzz("t-antitonicity", (arb_instance(), any::<u64>(), any::<u64>(), 1u64..=30, 1u64..=3), |(inst, a, b, p, q)| {
        let small = random_subset(&inst, a & b);
        let large = random_subset(&inst, a);
        let lambda = NeedParameter::new(p, q).unwrap();
        for r in inst.profile() {
            let ts = disutility_t(r, &inst, lambda, &small).unwrap();
            let tl = disutility_t(r, &inst, lambda, &large).unwrap();
            prop_assert!(tl <= ts, "t grew from {ts} to {tl}");
        }
        Ok(())
    })?;

    fuzz("prefix/rank", arb_instance(), |inst| {
        for r in inst.profile() {
            let mut previous = 0;
            for j in 1..=r.num_classes() {
                let prefix = prefix_set(r, j).unwrap();
                prop_assert!(prefix.len() >= previous);
                previous = prefix.len();
                for p in inst.projects() {
                    let rank = rank_of(r, &p.id).unwrap();
                    prop_assert_eq!(prefix.contains(&p.id), rank <= j);
                }
            }
            prop_assert_eq!(previous, inst.num_projects());
        }
        Ok(())
    })?;

    fuzz("cost-worthy membership", (arb_instance(), any::<u64>()), |(inst, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let alpha = random_alpha(&mut rng, inst.num_projects(), inst.budget());
        let layer = cost_worthy_layer(&inst, &alpha).unwrap();
        for (i, r) in inst.profile().iter().enumerate() {
            for p in inst.projects() {
                let worth = alpha.at(rank_of(r, &p.id).unwrap());
                prop_assert_eq!(layer.agent(i).contains(&p.id), p.cost <= worth);
            }
        }
        Ok(())
    })?;

    fuzz("serialization round trip", arb_instance(), |inst| {
        let text = serialize_instance(&inst);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(serialize_instance(&back), text);
        prop_assert_eq!(back, inst);
        Ok(())
    })?;

    Ok(format!("{} outcomes inclusion-maximal; 4 properties x 1000 cases", log.checked))
}

fn criterion_6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for trial in 0..100 {
        let m = rng.gen_range(1..=8usize);
        let k = rng.gen_range(1..=4usize.min(m));
        let n = rng.gen_range(1..=6usize);
        let ids: Vec<String> = (1..=m).map(|i| format!("c{i}")).collect();
        let orders: Vec<Vec<usize>> = (0..n)
            .map(|_| {
                let mut o: Vec<usize> = (0..m).collect();
                o.shuffle(&mut rng);
                o
            })
            .collect();
        let mut scores = vec![0u64; m];
        for o in &orders {
            o.iter().take(k).for_each(|&c| scores[c] += 1);
        }
        let bloc = top_k_sum(scores, k);
        let projects = ids.iter().map(|id| Project::new(id.as_str(), 1)).collect();
        let profile = orders.iter().map(|o| WeakRanking::strict(o.iter().map(|&c| ids[c].clone())).unwrap()).collect();
        let inst = Instance::new(projects, k as u64, profile).unwrap();
        let out = solve_exhaustive(&inst, &RuleSpec::greedy(Card)).map_err(|e| e.to_string())?;
        ensure(out.optimal_value == bloc, || format!("trial {trial}: rule {}, bloc {bloc}", out.optimal_value))?;
        let oracle = Flat::new(&inst).brute_force(&RuleSpec::greedy(Card)).0;
        ensure(oracle == bloc, || format!("trial {trial}: oracle {oracle}, bloc {bloc}"))?;
    }
    Ok("100 unit-cost instances match the bloc optimum".into())
}

fn run(name: &str, f: impl FnOnce() -> Check) -> bool {
    let started = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
    });
    match result {
        Ok(detail) => {
            println!("criterion {name}: PASS ({detail}) [{:.2?}]", started.elapsed());
            true
        }
        Err(why) => {
            println!("criterion {name}: FAIL ({why}) [{:.2?}]", started.elapsed());
            false
        }
    }
}

fn main() {
    let mut log = MaximalityLog::default();
    let results = [
        run("1 (worked examples)", || criterion_1(&mut log)),
        run("2 (DP vs enumeration)", || criterion_2(&mut log)),
        run("3 (axiom matrix)", criterion_3),
        run("4 (reductions)", || criterion_4(&mut log)),
        run("5 (structural invariants)", || criterion_5(&log)),
        run("6 (bloc degeneration)", criterion_6),
    ];
    if results.iter().any(|ok| !ok) {
        std::process::exit(1);
    }
}
