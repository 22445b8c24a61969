//! Hand-built counterexamples: one instance per (axiom, rule) combination
//! that the rule is known to violate.
//!
//! [`violation_fixtures`] covers the combinations expected to fail.
//! [`refutation_fixtures`] covers combinations that were expected to comply
//! but do not; those instances were found by random search and then
//! minimised.
//!
//! Where a construction is parametric (in `L`, `λ` or `α`), it is
//! instantiated at the smallest admissible values that still produce the
//! violation; `note` records the choice.

use crate::axioms::{AxiomId, VerdictStatus};
use crate::format::parse_instance;
use crate::layers::WorthVector;
use crate::model::{Instance, NeedParameter};
use crate::rules::{RuleSpec, UtilityFunction};

#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub axiom: AxiomId,
    pub spec: RuleSpec,
    pub instance: Instance,
    pub expected: VerdictStatus,
    pub note: &'static str,
}

fn instance(body: &str) -> Instance {
    parse_instance(&format!("pbinstance 1\n{body}")).expect("fixture instance is valid")
}

fn alpha(v: &[u64]) -> WorthVector {
    WorthVector::new(v.to_vec()).expect("fixture worth vector is valid")
}

fn lambda(p: u64) -> NeedParameter {
    NeedParameter::integer(p).expect("fixture need is valid")
}

fn violated(name: &'static str, axiom: AxiomId, spec: RuleSpec, body: &str, note: &'static str) -> Fixture {
    Fixture { name, axiom, spec, instance: instance(body), expected: VerdictStatus::Violated, note }
}

const NC_SIX_AGENTS: &str = "agent a > x1 > c > b > d > x2 > x3 > x4 > x5 > x6
agent a > x2 > d > b > c > x1 > x3 > x4 > x5 > x6
agent b > x3 > a > c > d > x1 > x2 > x4 > x5 > x6
agent b > x4 > d > c > a > x1 > x2 > x3 > x5 > x6
agent c > x5 > a > b > d > x1 > x2 > x3 > x4 > x6
agent c > x6 > d > b > a > x1 > x2 > x3 > x4 > x5
";

fn nc_six_agents(budget: u64, cost: u64) -> String {
    let mut s = format!("budget {budget}\n");
    for id in ["a", "b", "c", "d", "x1", "x2", "x3", "x4", "x5", "x6"] {
        s.push_str(&format!("project {id} {cost}\n"));
    }
    s.push_str(NC_SIX_AGENTS);
    s
}

const LIMIT_GREEDY_CARD: &str = "budget 4
project a1 2
project a2 3
project a3 3
project a4 1
project a5 4
agent a1 > a2 > a3 > a4 > a5
agent a2 > a3 > a1 > a4 > a5
agent a4 > a5 > a3 > a1 > a2
agent a4 > a5 > a3 > a2 > a1
";

const DISCOUNT_GREEDY_CARD: &str = "budget 4
project a1 2
project a2 3
project a3 2
project a4 1
project a5 4
agent a1 > a2 > a3 > a4 > a5
agent a2 > a3 > a1 > a4 > a5
agent a4 > a5 > a1 > a2 > a3
agent a4 > a5 > a1 > a2 > a3
";

/// Counterexamples for the combinations expected to fail, each `Violated`.
pub fn violation_fixtures() -> Vec<Fixture> {
    use AxiomId::*;
    use UtilityFunction::*;
    let greedy = RuleSpec::greedy;
    let worthy = RuleSpec::cost_worthy;
    let need = |p| RuleSpec::need_based(lambda(p));

    vec![
        violated(
            "candidate-mono/needbased-middle",
            CandidateMono,
            need(2),
            "budget 4\nproject a1 4\nproject a2 3\nproject a3 1\nagent a1 > a2 > a3\nagent a2 > a1 > a3\n",
            "L=4, lambda=2; shifting a3 forward in the first ranking removes it from every optimal set",
        ),
        violated(
            "noncrossing-mono/greedy-cover",
            NonCrossingMono,
            greedy(Coverage),
            "budget 3
project a1 1
project a2 2
project a3 2
project a4 3
project a5 1
project a6 3
agent a1 > a2 > a3 > a4 > a5 > a6
agent a3 > a6 > a1 > a2 > a4 > a5
agent a5 > a4 > a1 > a2 > a3 > a6
",
            "L=3; swapping a2 and a3 in the first ranking breaks the winning set {a1,a3}",
        ),
        violated(
            "noncrossing-mono/costworthy-cover-nonflat",
            NonCrossingMono,
            worthy(Coverage, alpha(&[2, 2, 0, 0])),
            "budget 3
project a1 1
project a2 3
project a3 2
project a4 1
agent a1 > a2 > a3 > a4
agent a3 > a2 > a1 > a4
agent a4 > a2 > a1 > a3
",
            "alpha=(2,2,0,0), L=3; moving a3 above a2 for agent 1 makes agent 1 approve a3, so {a3,a4} \
             now covers everyone while {a1,a3} does not",
        ),
        violated(
            "noncrossing-mono/needbased-low",
            NonCrossingMono,
            need(1),
            &nc_six_agents(2, 1),
            "lambda=1, L=2, unit costs; shifting c past x1 for agent 1 makes {b,c} strictly better than {a,c}",
        ),
        violated(
            "noncrossing-mono/needbased-middle",
            NonCrossingMono,
            need(2),
            &nc_six_agents(4, 2),
            "lambda=2, L=4, every project costs 2; same profile as the low-need case",
        ),
        violated(
            "noncrossing-mono/needbased-top",
            NonCrossingMono,
            need(5),
            "budget 5
project a 1
project b 3
project x1 2
project x2 7
project x3 2
agent a > b > x2 > x1 > x3
agent x1 > a > x3 > b > x2
",
            "lambda=L=5; swapping x1 and x2 for agent 1 leaves {b,x1} as the only winner",
        ),
        violated(
            "discount-mono/greedy-card",
            DiscountMono,
            greedy(Cardinality),
            DISCOUNT_GREEDY_CARD,
            "L=4; discounting a1 lets agent 1 approve a2 as well, and {a2,a4} overtakes {a1,a4}",
        ),
        violated(
            "discount-mono/greedy-cover",
            DiscountMono,
            greedy(Coverage),
            DISCOUNT_GREEDY_CARD,
            "same instance as the cardinality case",
        ),
        violated(
            "discount-mono/greedy-cost",
            DiscountMono,
            greedy(Cost),
            "budget 4\nproject a1 4\nproject a2 4\nagent a1 > a2\nagent a2 > a1\n",
            "L=4; a discounted a1 is worth less than a2",
        ),
        violated(
            "discount-mono/costworthy-cost",
            DiscountMono,
            worthy(Cost, alpha(&[2, 0])),
            "budget 2\nproject a1 2\nproject a2 2\nagent a1 > a2\nagent a2 > a1\n",
            "alpha=(2,0), L=2; a discounted a1 scores 1 against 2 for a2",
        ),
        violated(
            "discount-mono/needbased-middle",
            DiscountMono,
            need(2),
            "budget 3\nproject a1 2\nproject a2 3\nagent a1 > a2\n",
            "lambda=2, L=3; after the discount a1 alone no longer meets the need",
        ),
        violated(
            "discount-mono/needbased-top",
            DiscountMono,
            need(3),
            "budget 3\nproject a1 3\nproject a2 3\nagent a1 > a2\n",
            "lambda=L=3; after the discount a1 alone no longer meets the need",
        ),
        violated(
            "limit-mono/greedy-card",
            LimitMono,
            greedy(Cardinality),
            LIMIT_GREEDY_CARD,
            "L=4 (costs 2, L-1, 3, 1, L); at L=5 agent 1 approves a2 too and a1 stops winning",
        ),
        violated(
            "limit-mono/greedy-cover",
            LimitMono,
            greedy(Coverage),
            LIMIT_GREEDY_CARD,
            "same instance as the cardinality case",
        ),
        violated(
            "limit-mono/greedy-cost",
            LimitMono,
            greedy(Cost),
            "budget 5
project a1 2
project a2 4
project a3 2
project a4 5
agent a1 > a2 > a3 > a4
agent a3 > a4 > a1 > a2
agent a3 > a4 > a2 > a1
",
            "L=5 (costs 2, L-1, 2, L); at L=6 the outcome moves from {a1,a3} to {a2,a3}",
        ),
        violated(
            "limit-mono/costworthy-cost-first-above-one",
            LimitMono,
            worthy(Cost, alpha(&[3, 3, 3])),
            "budget 4\nproject a1 3\nproject a2 2\nproject a3 1\nagent {a1,a2,a3}\n",
            "alpha(1)=3, L=2*alpha(1)-2=4; alpha(1)=2 does not yield a violation",
        ),
        violated(
            "limit-mono/costworthy-card-gap-two",
            LimitMono,
            worthy(Cardinality, alpha(&[2, 1, 0])),
            "budget 2\nproject a1 2\nproject a2 1\nproject a3 1\nagent a1 > a2 > a3\nagent a1 > a2 > a3\n",
            "alpha=(2,1,0), L=alpha(1)+alpha(2)-1=2; at L=3 only {a1,a2} wins and a3 drops out",
        ),
        violated(
            "limit-mono/costworthy-cover-gap-two",
            LimitMono,
            worthy(Coverage, alpha(&[2, 0, 0])),
            "budget 3
project a1 1
project a2 2
project a3 2
agent a1 > a2 > a3
agent a2 > a3 > a1
agent a2 > a3 > a1
agent a3 > a2 > a1
agent a3 > a2 > a1
agent a3 > a2 > a1
",
            "alpha=(2,0,0), L=2*alpha(1)-1=3; at L=4 {a2,a3} replaces {a1,a3}",
        ),
        violated(
            "limit-mono/needbased-low",
            LimitMono,
            need(1),
            "budget 1\nproject a1 1\nproject a2 1\nproject a3 1\nagent a1 > a2 > a3\nagent a3 > a2 > a1\n",
            "lambda=1, L=2*ceil(lambda)-1=1; at L=2 only {a1,a3} wins",
        ),
        violated(
            "limit-mono/needbased-middle",
            LimitMono,
            need(2),
            "budget 3\nproject a1 2\nproject a2 3\nproject a3 2\nagent a1 > a2 > a3\nagent a3 > a2 > a1\n",
            "lambda=2, L=2*ceil(lambda)-1=3; at L=4 only {a1,a3} wins",
        ),
        violated(
            "limit-mono/needbased-top",
            LimitMono,
            need(5),
            "budget 5\nproject a1 4\nproject a2 2\nproject a3 1\nagent a1 > a2 > a3\nagent a1 > a2 > a3\n",
            "lambda=L=5 (costs ceil(lambda)-1, L-ceil(lambda)+2, L-ceil(lambda)+1); at L=6 {a1,a2} wins",
        ),
        violated(
            "pro-affordability/greedy-cost",
            ProAffordability,
            greedy(Cost),
            "budget 5
project a1 1
project a2 4
project a3 1
project a4 5
agent a1 > a2 > a3 > a4
agent a3 > a4 > a1 > a2
agent a3 > a4 > a1 > a2
",
            "L=5 (costs 1, L-1, 1, L); only {a2,a3} wins although a1 is cheaper and preferred by all",
        ),
        violated(
            "pro-affordability/costworthy-cost-first-above-one",
            ProAffordability,
            worthy(Cost, alpha(&[2, 0])),
            "budget 2\nproject a1 1\nproject a2 2\nagent {a1,a2}\n",
            "alpha=(2,0), L=alpha(1)=2; only {a2} wins",
        ),
        violated(
            "pro-affordability/needbased-middle",
            ProAffordability,
            need(2),
            "budget 3\nproject a1 1\nproject a2 3\nproject a3 3\nagent a1 > a2 > a3\nagent a1 > a2 > a3\n",
            "lambda=2, L=3; a1 alone never meets the need, so only {a2} wins",
        ),
        violated(
            "pro-affordability/needbased-top",
            ProAffordability,
            need(3),
            "budget 3\nproject a1 1\nproject a2 3\nproject a3 3\nagent a1 > a2 > a3\nagent a1 > a2 > a3\n",
            "lambda=L=3; same instance as the middle range",
        ),
    ]
}

/// Counterexamples for combinations expected to comply, each `Violated`.
///
/// Candidate monotonicity fails for every layered rule when the winning set
/// also contains the project the shifted one overtakes: that project can
/// drop out of the approval set while the shifted one does not enter it.
/// Limit monotonicity fails for cost-worthy cardinality rules even with a
/// flat worth vector, because a larger budget can fit more cheap projects
/// than the old winning set.
pub fn refutation_fixtures() -> Vec<Fixture> {
    use AxiomId::*;
    use UtilityFunction::*;
    let greedy = RuleSpec::greedy;
    let worthy = RuleSpec::cost_worthy;

    vec![
        violated(
            "candidate-mono/greedy-card",
            CandidateMono,
            greedy(Cardinality),
            "budget 4
project a1 3
project a2 2
project a3 1
project a4 2
agent a2 > a1 > a3 > a4
agent a4 > a3 > a1 > a2
agent a1 > a2 > a4 > a3
",
            "L=4; moving a1 above a3 for agent 2 drops a3 from that agent's approvals without adding a1",
        ),
        violated(
            "candidate-mono/greedy-cost",
            CandidateMono,
            greedy(Cost),
            "budget 4
project a1 1
project a2 3
project a3 2
project a4 1
agent a3 > a4 > a2 > a1
agent a2 > a1 > a3 > a4
",
            "L=4; moving a3 above a1 for agent 2 drops a1 from that agent's approvals without adding a3",
        ),
        violated(
            "candidate-mono/greedy-cover",
            CandidateMono,
            greedy(Coverage),
            "budget 3
project a1 2
project a2 2
project a3 1
agent a2 > a3 > a1
agent a1 > a3 > a2
",
            "L=3; moving a1 above a3 for agent 1 leaves {a1,a3} covering only agent 2",
        ),
        violated(
            "candidate-mono/costworthy-card",
            CandidateMono,
            worthy(Cardinality, alpha(&[5, 2, 0])),
            "budget 5
project a1 2
project a2 3
project a3 4
agent a2 > a3 > a1
agent a3 > a1 > a2
agent a3 > a2 > a1
",
            "alpha=(5,2,0), L=5; moving a2 above a1 for agent 2 drops a1 without adding a2",
        ),
        violated(
            "candidate-mono/costworthy-cost",
            CandidateMono,
            worthy(Cost, alpha(&[3, 3, 1])),
            "budget 3\nproject a1 1\nproject a2 3\nproject a3 2\nagent a2 > a3 > a1\n",
            "alpha=(3,3,1), L=3; moving a1 above a3 drops a3 without adding anything",
        ),
        violated(
            "candidate-mono/costworthy-cover",
            CandidateMono,
            worthy(Coverage, alpha(&[2, 1, 0])),
            "budget 3
project a1 2
project a2 2
project a3 1
agent a1 > a3 > a2
agent a2 > a3 > a1
",
            "alpha=(2,1,0), L=3; moving a1 above a3 for agent 2 leaves {a1,a3} covering only agent 1",
        ),
        violated(
            "limit-mono/costworthy-card-flat",
            LimitMono,
            worthy(Cardinality, alpha(&[3, 3, 3])),
            "budget 3\nproject a1 3\nproject a2 2\nproject a3 2\nagent a2 > a1 > a3\n",
            "alpha=(3,3,3), L=3; every project is approved, and at L=4 the pair {a2,a3} beats every singleton",
        ),
    ]
}
