//! Brute-force oracles written from the definitions, sharing no code with the
//! library beyond reading instances through its public accessors.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use pbweak::format::parse_instance;
use pbweak::layers::WorthVector;
use pbweak::rules::{Outcome, RuleSpec, UtilityFunction};
use pbweak::{BudgetSet, Instance, NeedParameter, Project, WeakRanking};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("data").join(name)
}

pub fn load(name: &str) -> Instance {
    parse_instance(&std::fs::read_to_string(data(name)).unwrap()).unwrap()
}

pub fn set(ids: &[&str]) -> BudgetSet {
    ids.iter().copied().collect()
}

/// An instance flattened to indices in canonical project order.
pub struct Flat {
    pub ids: Vec<String>,
    pub costs: Vec<u64>,
    pub budget: u64,
    /// `classes[i]` lists agent `i`'s indifference classes, best first.
    pub classes: Vec<Vec<Vec<usize>>>,
}

impl Flat {
    pub fn new(instance: &Instance) -> Self {
        let ids: Vec<String> = instance.projects().iter().map(|p| p.id.to_string()).collect();
        let costs = instance.projects().iter().map(|p| p.cost).collect();
        let index = |id: &str| ids.iter().position(|x| x == id).unwrap();
        let classes = instance
            .profile()
            .iter()
            .map(|r| r.classes().iter().map(|c| c.iter().map(|p| index(p.as_str())).collect()).collect())
            .collect();
        Flat { ids, costs, budget: instance.budget(), classes }
    }

    pub fn m(&self) -> usize {
        self.ids.len()
    }

    pub fn rank(&self, agent: usize, project: usize) -> usize {
        self.classes[agent].iter().position(|c| c.contains(&project)).unwrap() + 1
    }

    pub fn cost(&self, mask: u64) -> u64 {
        (0..self.m()).filter(|&j| mask >> j & 1 == 1).map(|j| self.costs[j]).sum()
    }

    pub fn to_set(&self, mask: u64) -> BudgetSet {
        (0..self.m()).filter(|&j| mask >> j & 1 == 1).map(|j| self.ids[j].as_str()).collect()
    }

    pub fn greedy_layer(&self) -> Vec<u64> {
        self.classes
            .iter()
            .map(|classes| {
                let mut approved = 0u64;
                let mut spent = 0u64;
                for class in classes {
                    let total: u64 = class.iter().map(|&j| self.costs[j]).sum();
                    if spent + total <= self.budget {
                        spent += total;
                        class.iter().for_each(|&j| approved |= 1 << j);
                    } else {
                        for &j in class {
                            if spent + self.costs[j] <= self.budget {
                                approved |= 1 << j;
                            }
                        }
                        break;
                    }
                }
                approved
            })
            .collect()
    }

    pub fn cost_worthy_layer(&self, alpha: &[u64]) -> Vec<u64> {
        (0..self.classes.len())
            .map(|i| {
                (0..self.m()).filter(|&j| self.costs[j] <= alpha[self.rank(i, j) - 1]).fold(0u64, |acc, j| acc | 1 << j)
            })
            .collect()
    }

    pub fn utility(&self, f: UtilityFunction, approvals: &[u64], mask: u64) -> u64 {
        approvals
            .iter()
            .map(|&a| {
                let hit = a & mask;
                match f {
                    UtilityFunction::Cardinality => hit.count_ones() as u64,
                    UtilityFunction::Cost => self.cost(hit),
                    UtilityFunction::Coverage => (hit != 0) as u64,
                }
            })
            .sum()
    }

    /// First rank at which the chosen projects ranked so far reach the need,
    /// or `m + 1`.
    pub fn need_rank(&self, agent: usize, p: u64, q: u64, mask: u64) -> u64 {
        let mut covered = 0u64;
        for (k, class) in self.classes[agent].iter().enumerate() {
            covered += class.iter().filter(|&&j| mask >> j & 1 == 1).map(|&j| self.costs[j]).sum::<u64>();
            if covered * q >= p {
                return k as u64 + 1;
            }
        }
        self.m() as u64 + 1
    }

    pub fn disutility(&self, p: u64, q: u64, mask: u64) -> u64 {
        (0..self.classes.len()).map(|i| self.need_rank(i, p, q, mask)).sum()
    }

    /// Value of `mask` under `spec`, maximised for layered rules and
    /// minimised for need-based ones.
    pub fn objective(&self, spec: &RuleSpec) -> Box<dyn Fn(u64) -> u64 + '_> {
        match spec {
            RuleSpec::GreedyTruncation { f } => {
                let approvals = self.greedy_layer();
                let f = *f;
                Box::new(move |mask| self.utility(f, &approvals, mask))
            }
            RuleSpec::CostWorthy { f, alpha } => {
                let approvals = self.cost_worthy_layer(alpha.entries());
                let f = *f;
                Box::new(move |mask| self.utility(f, &approvals, mask))
            }
            RuleSpec::NeedBased { lambda } => {
                let (p, q) = (lambda.numer(), lambda.denom());
                Box::new(move |mask| self.disutility(p, q, mask))
            }
        }
    }

    /// Optimal value and every optimal feasible set, by enumeration.
    pub fn brute_force(&self, spec: &RuleSpec) -> (u64, Vec<BudgetSet>) {
        let value = self.objective(spec);
        let maximize = !matches!(spec, RuleSpec::NeedBased { .. });
        let mut best: Option<u64> = None;
        let mut sets = Vec::new();
        for mask in 0..(1u64 << self.m()) {
            if self.cost(mask) > self.budget {
                continue;
            }
            let v = value(mask);
            let better = match best {
                None => true,
                Some(b) => (maximize && v > b) || (!maximize && v < b),
            };
            if better {
                best = Some(v);
                sets.clear();
            }
            if best == Some(v) {
                sets.push(self.to_set(mask));
            }
        }
        sets.sort();
        (best.unwrap(), sets)
    }
}

/// Every optimal set's feasible one-project extensions are optimal too.
pub fn is_inclusion_maximal(instance: &Instance, outcome: &Outcome) -> bool {
    let ids: Vec<_> = instance.projects().iter().map(|p| p.id.clone()).collect();
    outcome.optimal_sets.iter().all(|s| {
        ids.iter().filter(|id| !s.contains(id)).all(|id| {
            let mut bigger = s.clone();
            bigger.insert(id.clone());
            !instance.is_feasible(&bigger).unwrap() || outcome.contains_set(&bigger)
        })
    })
}

/// Random instance with project ids `p1..pm`, costs in `1..=max_cost`,
/// budget in `budget_range`, and a mix of strict and tied rankings.
pub fn random_instance<R: Rng>(
    rng: &mut R,
    max_projects: usize,
    max_agents: usize,
    max_cost: u64,
    budget_range: std::ops::RangeInclusive<u64>,
) -> Instance {
    let m = rng.gen_range(1..=max_projects);
    let n = rng.gen_range(1..=max_agents);
    let projects: Vec<Project> = (1..=m).map(|i| Project::new(format!("p{i}"), rng.gen_range(1..=max_cost))).collect();
    let budget = rng.gen_range(budget_range);
    let profile = (0..n).map(|_| random_ranking(rng, m)).collect();
    Instance::new(projects, budget, profile).unwrap()
}

/// A shuffled order cut into classes at random points.
pub fn random_ranking<R: Rng>(rng: &mut R, m: usize) -> WeakRanking {
    let mut order: Vec<String> = (1..=m).map(|i| format!("p{i}")).collect();
    order.shuffle(rng);
    let tie_share = rng.gen_range(0.0..0.6);
    let mut classes: Vec<Vec<String>> = Vec::new();
    for id in order {
        match classes.last_mut() {
            Some(c) if rng.gen_bool(tie_share) => c.push(id),
            _ => classes.push(vec![id]),
        }
    }
    WeakRanking::new(classes).unwrap()
}

/// Non-increasing vector of length `m` with first entry at most `cap`.
pub fn random_alpha<R: Rng>(rng: &mut R, m: usize, cap: u64) -> WorthVector {
    let mut v: Vec<u64> = (0..m).map(|_| rng.gen_range(0..=cap)).collect();
    v.sort_unstable_by(|a, b| b.cmp(a));
    WorthVector::new(v).unwrap()
}

pub fn random_lambda<R: Rng>(rng: &mut R, budget: u64) -> Option<NeedParameter> {
    let q = rng.gen_range(1..=3u64);
    if budget == 0 {
        return None;
    }
    NeedParameter::new(rng.gen_range(1..=q * budget), q).ok()
}

/// Sum of the `k` largest entries, the optimum of a bloc-style committee
/// score.
pub fn top_k_sum(mut scores: Vec<u64>, k: usize) -> u64 {
    scores.sort_unstable_by(|a, b| b.cmp(a));
    scores.into_iter().take(k).sum()
}

pub fn subsets_by_size(m: usize, max_size: usize) -> impl Iterator<Item = u64> {
    (0..(1u64 << m)).filter(move |s| s.count_ones() as usize <= max_size)
}

pub fn ids_of(s: &BudgetSet) -> BTreeSet<String> {
    s.iter().map(|p| p.to_string()).collect()
}
