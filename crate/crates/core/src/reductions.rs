//! Generators that turn instances of classic hard problems into PB decision
//! instances: Subset Sum, Vertex Cover and β-Chamberlin–Courant.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{PbError, Result};
use crate::layers::WorthVector;
use crate::model::{Instance, NeedParameter, Project, ProjectId, WeakRanking};
use crate::rules::{evaluate_rule, RuleSpec, Strategy, UtilityFunction};

/// Which layered rule a reduction targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Greedy,
    CostWorthy,
}

impl std::str::FromStr for Variant {
    type Err = PbError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "greedy" => Ok(Variant::Greedy),
            "costworthy" | "cost-worthy" => Ok(Variant::CostWorthy),
            other => Err(PbError::Precondition(format!("unknown variant `{other}`"))),
        }
    }
}

/// Direction of the threshold comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    /// Some feasible set reaches utility at least the threshold.
    AtLeast,
    /// Some feasible set has total disutility at most the threshold.
    AtMost,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::AtLeast => ">=",
            Sense::AtMost => "<=",
        })
    }
}

/// "Is there a feasible set whose objective value meets `threshold`?"
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionInstance {
    pub instance: Instance,
    pub spec: RuleSpec,
    pub threshold: u64,
    pub sense: Sense,
}

impl DecisionInstance {
    pub fn accepts(&self, value: u64) -> bool {
        match self.sense {
            Sense::AtLeast => value >= self.threshold,
            Sense::AtMost => value <= self.threshold,
        }
    }

    /// Answers the question by solving the rule exactly.
    pub fn decide(&self) -> Result<bool> {
        let outcome = evaluate_rule(&self.instance, &self.spec, Strategy::Exhaustive)?;
        Ok(self.accepts(outcome.optimal_value))
    }
}

fn ids(prefix: &str, count: usize) -> Vec<ProjectId> {
    (1..=count).map(|i| ProjectId::from(format!("{prefix}{i}"))).collect()
}

/// Subset Sum: is there a subset of `values` summing to exactly `target`?
///
/// The values are sorted non-decreasingly first; project `a{i}` costs the
/// `i`-th smallest value. Budget and threshold are both `target`, scored by
/// cost utility.
///
/// * `Greedy`: one extra project of cost `target`; agent `i` ranks `a{i}`
///   first, the extra project second and the rest in id order, so the greedy
///   layer approves exactly `{a{i}}`.
/// * `CostWorthy`: a single agent ties all projects at the top and
///   `α(1) = target`.
pub fn from_subset_sum(values: &[u64], target: u64, variant: Variant) -> Result<DecisionInstance> {
    if values.is_empty() {
        return Err(PbError::Precondition("subset sum needs at least one value".into()));
    }
    if target == 0 {
        return Err(PbError::Precondition("subset sum target must be at least 1".into()));
    }
    if values.contains(&0) {
        return Err(PbError::Precondition("subset sum values must be positive".into()));
    }
    let mut xs = values.to_vec();
    xs.sort_unstable();
    let n = xs.len();

    match variant {
        Variant::Greedy => {
            let mut all = ids("a", n + 1);
            all.sort();
            let extra = ProjectId::from(format!("a{}", n + 1));
            let mut projects: Vec<Project> =
                xs.iter().enumerate().map(|(i, &x)| Project::new(format!("a{}", i + 1), x)).collect();
            projects.push(Project::new(extra.clone(), target));
            let profile = (1..=n)
                .map(|i| {
                    let own = ProjectId::from(format!("a{i}"));
                    let mut order = vec![own.clone(), extra.clone()];
                    order.extend(all.iter().filter(|p| **p != own && **p != extra).cloned());
                    WeakRanking::strict(order)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(DecisionInstance {
                instance: Instance::new(projects, target, profile)?,
                spec: RuleSpec::greedy(UtilityFunction::Cost),
                threshold: target,
                sense: Sense::AtLeast,
            })
        }
        Variant::CostWorthy => {
            let projects: Vec<Project> =
                xs.iter().enumerate().map(|(i, &x)| Project::new(format!("a{}", i + 1), x)).collect();
            let profile = vec![WeakRanking::new(vec![ids("a", n)])?];
            Ok(DecisionInstance {
                instance: Instance::new(projects, target, profile)?,
                spec: RuleSpec::cost_worthy(UtilityFunction::Cost, WorthVector::flat(target, n)?),
                threshold: target,
                sense: Sense::AtLeast,
            })
        }
    }
}

/// Worth vector head used by [`from_vertex_cover`] for the cost-worthy
/// variant when none is supplied.
pub const DEFAULT_COVER_ALPHA: [u64; 3] = [2, 1, 0];

fn vertex_id(v: u32) -> ProjectId {
    ProjectId::from(format!("v{v}"))
}

fn check_edges(edges: &[(u32, u32)]) -> Result<BTreeSet<u32>> {
    if edges.is_empty() {
        return Err(PbError::Precondition("vertex cover needs at least one edge".into()));
    }
    let mut seen = BTreeSet::new();
    let mut vertices = BTreeSet::new();
    for &(u, v) in edges {
        if u == v {
            return Err(PbError::Precondition(format!("self-loop at vertex {u}")));
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(PbError::Precondition(format!("duplicate edge {u}-{v}")));
        }
        vertices.insert(u);
        vertices.insert(v);
    }
    Ok(vertices)
}

/// Vertex Cover: do at most `k` vertices touch every edge? Requires `k > 2`.
///
/// Vertex `v` becomes project `v{v}`, one agent per edge, coverage utility,
/// threshold `|E|`. The vertex set is the set of edge endpoints.
///
/// * `Greedy`: `L = k`, unit vertex costs, a dummy `d` of cost `k - 1`;
///   the agent for edge `(u, v)` ranks `u > v > d > others`.
/// * `CostWorthy`: see [`from_vertex_cover_with_alpha`], using
///   [`DEFAULT_COVER_ALPHA`].
pub fn from_vertex_cover(edges: &[(u32, u32)], k: u64, variant: Variant) -> Result<DecisionInstance> {
    match variant {
        Variant::Greedy => greedy_vertex_cover(edges, k),
        Variant::CostWorthy => from_vertex_cover_with_alpha(edges, k, &DEFAULT_COVER_ALPHA),
    }
}

fn check_k(k: u64) -> Result<()> {
    if k <= 2 {
        return Err(PbError::Precondition(format!("vertex cover reduction requires k > 2, got {k}")));
    }
    Ok(())
}

fn greedy_vertex_cover(edges: &[(u32, u32)], k: u64) -> Result<DecisionInstance> {
    check_k(k)?;
    let vertices = check_edges(edges)?;
    let dummy = ProjectId::from("d");
    let mut projects: Vec<Project> = vertices.iter().map(|&v| Project::new(vertex_id(v), 1)).collect();
    projects.push(Project::new(dummy.clone(), k - 1));
    let mut all: Vec<ProjectId> = projects.iter().map(|p| p.id.clone()).collect();
    all.sort();
    let profile = edges
        .iter()
        .map(|&(u, v)| {
            let head = [vertex_id(u), vertex_id(v), dummy.clone()];
            let mut order = head.to_vec();
            order.extend(all.iter().filter(|p| !head.contains(p)).cloned());
            WeakRanking::strict(order)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DecisionInstance {
        instance: Instance::new(projects, k, profile)?,
        spec: RuleSpec::greedy(UtilityFunction::Coverage),
        threshold: edges.len() as u64,
        sense: Sense::AtLeast,
    })
}

/// Cost-worthy Vertex Cover reduction for a worth vector whose leading
/// entries are `head = (h1, ..., hp)` and whose remaining entries all equal
/// `hp`. Requires `p ≥ 2`, `h1 ≥ hp + 1` and `h1 ≤ k(hp + 1)`.
///
/// Vertex projects cost `hp + 1` and `L = k(hp + 1)`. Dummies `d1..d(p-2)`
/// cost `h(i+1) + 1`. The agent for edge `(u, v)` ranks
/// `{u, v} > d1 > ... > d(p-2) > others`, so only `u` and `v` are approved.
pub fn from_vertex_cover_with_alpha(edges: &[(u32, u32)], k: u64, head: &[u64]) -> Result<DecisionInstance> {
    check_k(k)?;
    let vertices = check_edges(edges)?;
    if head.len() < 2 {
        return Err(PbError::InvalidWorthVector("the head needs at least two entries".into()));
    }
    WorthVector::new(head.to_vec())?;
    let last = head[head.len() - 1];
    if head[0] < last + 1 {
        return Err(PbError::InvalidWorthVector("the head must satisfy alpha(1) > alpha(last)".into()));
    }
    let vertex_cost = last.checked_add(1).ok_or(PbError::Overflow("vertex cost"))?;
    let budget = k.checked_mul(vertex_cost).ok_or(PbError::Overflow("budget"))?;
    if head[0] > budget {
        return Err(PbError::InvalidWorthVector(format!("alpha(1) = {} exceeds the budget {budget}", head[0])));
    }

    let dummies: Vec<ProjectId> = ids("d", head.len() - 2);
    let mut projects: Vec<Project> = vertices.iter().map(|&v| Project::new(vertex_id(v), vertex_cost)).collect();
    for (i, d) in dummies.iter().enumerate() {
        let cost = head[i + 1].checked_add(1).ok_or(PbError::Overflow("dummy cost"))?;
        projects.push(Project::new(d.clone(), cost));
    }
    let mut others: Vec<ProjectId> = vertices.iter().map(|&v| vertex_id(v)).collect();
    others.sort();
    let profile = edges
        .iter()
        .map(|&(u, v)| {
            let top = vec![vertex_id(u), vertex_id(v)];
            let mut classes = vec![top.clone()];
            classes.extend(dummies.iter().map(|d| vec![d.clone()]));
            classes.extend(others.iter().filter(|p| !top.contains(p)).map(|p| vec![p.clone()]));
            WeakRanking::new(classes)
        })
        .collect::<Result<Vec<_>>>()?;
    let instance = Instance::new(projects, budget, profile)?;
    let alpha = WorthVector::new(head.to_vec())?.fitted_to(instance.num_projects());
    Ok(DecisionInstance {
        spec: RuleSpec::cost_worthy(UtilityFunction::Coverage, alpha),
        instance,
        threshold: edges.len() as u64,
        sense: Sense::AtLeast,
    })
}

/// β-Chamberlin–Courant: is there a committee of at most `k` candidates whose
/// sum over voters of the best committee member's rank is at most `s`?
///
/// Candidates become unit-cost projects with `L = k`, decided by the
/// need-based rule with `λ = 1`.
pub fn from_beta_cc(profile: &[WeakRanking], k: u64, s: u64) -> Result<DecisionInstance> {
    let first = profile.first().ok_or_else(|| PbError::Precondition("β-CC needs at least one voter".into()))?;
    if let Some(i) = profile.iter().position(|r| !r.is_strict()) {
        return Err(PbError::Precondition(format!("voter {} does not have a strict ranking", i + 1)));
    }
    let m = first.len() as u64;
    if k == 0 || k > m {
        return Err(PbError::Precondition(format!("committee size {k} outside 1..={m}")));
    }
    let projects = first.projects().map(|id| Project::new(id.clone(), 1)).collect();
    Ok(DecisionInstance {
        instance: Instance::new(projects, k, profile.to_vec())?,
        spec: RuleSpec::need_based(NeedParameter::integer(1)?),
        threshold: s,
        sense: Sense::AtMost,
    })
}
