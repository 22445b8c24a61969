use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{PbError, Result};
use crate::model::{Project, ProjectId, WeakRanking};

/// A set of projects, identified by id. Feasibility is a property relative to
/// an instance, see [`Instance::is_feasible`].
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BudgetSet(BTreeSet<ProjectId>);

impl BudgetSet {
    pub fn new() -> Self {
        BudgetSet(BTreeSet::new())
    }

    pub fn members(&self) -> &BTreeSet<ProjectId> {
        &self.0
    }

    pub fn contains(&self, id: &ProjectId) -> bool {
        self.0.contains(id)
    }

    pub fn insert(&mut self, id: impl Into<ProjectId>) -> bool {
        self.0.insert(id.into())
    }

    pub fn iter(&self) -> impl Iterator<Item = &ProjectId> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(&self, other: &BudgetSet) -> bool {
        self.0.is_subset(&other.0)
    }
}

impl<P: Into<ProjectId>> FromIterator<P> for BudgetSet {
    fn from_iter<T: IntoIterator<Item = P>>(iter: T) -> Self {
        BudgetSet(iter.into_iter().map(Into::into).collect())
    }
}

impl fmt::Display for BudgetSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, id) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{id}")?;
        }
        f.write_str("}")
    }
}

/// An ordinal PB instance: projects with costs, a budget and one weak ranking
/// per agent.
///
/// Projects are stored sorted by id, so a project's index is its position in
/// canonical order. Rankings are validated to be complete over the project
/// set. Instances are immutable; the `with_*` methods build modified copies.
#[derive(Debug, Clone)]
pub struct Instance {
    projects: Vec<Project>,
    budget: u64,
    profile: Vec<WeakRanking>,
    total_cost: u64,
    index: BTreeMap<ProjectId, usize>,
    // agent -> classes of project indices
    classes: Vec<Vec<Vec<usize>>>,
    // agent -> project index -> 1-based rank
    ranks: Vec<Vec<usize>>,
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.projects == other.projects && self.budget == other.budget && self.profile == other.profile
    }
}

impl Eq for Instance {}

impl Instance {
    pub fn new(mut projects: Vec<Project>, budget: u64, profile: Vec<WeakRanking>) -> Result<Self> {
        projects.sort_by(|a, b| a.id.cmp(&b.id));
        let mut index = BTreeMap::new();
        let mut total_cost = 0u64;
        for (i, p) in projects.iter().enumerate() {
            if p.cost == 0 {
                return Err(PbError::NonPositiveCost(p.id.clone()));
            }
            if index.insert(p.id.clone(), i).is_some() {
                return Err(PbError::DuplicateProject(p.id.clone()));
            }
            total_cost = total_cost.checked_add(p.cost).ok_or(PbError::Overflow("total project cost"))?;
        }

        let m = projects.len();
        let mut classes = Vec::with_capacity(profile.len());
        let mut ranks = Vec::with_capacity(profile.len());
        for (agent, ranking) in profile.iter().enumerate() {
            let mut agent_classes = Vec::with_capacity(ranking.num_classes());
            let mut agent_ranks = vec![0usize; m];
            for (k, class) in ranking.classes().iter().enumerate() {
                let mut idx = Vec::with_capacity(class.len());
                for id in class {
                    let &i = index.get(id).ok_or_else(|| PbError::UnknownProject(id.clone()))?;
                    agent_ranks[i] = k + 1;
                    idx.push(i);
                }
                idx.sort_unstable();
                agent_classes.push(idx);
            }
            if ranking.len() != m {
                return Err(PbError::IncompleteRanking { agent: agent + 1, missing: m.saturating_sub(ranking.len()) });
            }
            classes.push(agent_classes);
            ranks.push(agent_ranks);
        }

        Ok(Instance { projects, budget, profile, total_cost, index, classes, ranks })
    }

    pub fn projects(&self) -> &[Project] {
        &self.projects
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn profile(&self) -> &[WeakRanking] {
        &self.profile
    }

    pub fn num_projects(&self) -> usize {
        self.projects.len()
    }

    pub fn num_agents(&self) -> usize {
        self.profile.len()
    }

    pub fn total_cost(&self) -> u64 {
        self.total_cost
    }

    pub fn index_of(&self, id: &ProjectId) -> Result<usize> {
        self.index.get(id).copied().ok_or_else(|| PbError::UnknownProject(id.clone()))
    }

    pub fn contains_project(&self, id: &ProjectId) -> bool {
        self.index.contains_key(id)
    }

    pub fn project(&self, idx: usize) -> &Project {
        &self.projects[idx]
    }

    pub fn cost(&self, idx: usize) -> u64 {
        self.projects[idx].cost
    }

    pub fn cost_by_id(&self, id: &ProjectId) -> Result<u64> {
        Ok(self.cost(self.index_of(id)?))
    }

    /// Indifference classes of `agent` as project indices, best first.
    pub fn agent_classes(&self, agent: usize) -> &[Vec<usize>] {
        &self.classes[agent]
    }

    /// 1-based rank of project `idx` for `agent`.
    pub fn rank(&self, agent: usize, idx: usize) -> usize {
        self.ranks[agent][idx]
    }

    /// `c(S)`, the summed cost of the members of `s`.
    pub fn cost_of(&self, s: &BudgetSet) -> Result<u64> {
        let mut total = 0u64;
        for id in s.iter() {
            total += self.cost_by_id(id)?;
        }
        Ok(total)
    }

    pub fn is_feasible(&self, s: &BudgetSet) -> Result<bool> {
        Ok(self.cost_of(s)? <= self.budget)
    }

    pub fn full_set(&self) -> BudgetSet {
        self.projects.iter().map(|p| p.id.clone()).collect()
    }

    /// Bitmask over project indices. Only available while `m ≤ 64`.
    pub fn mask_of(&self, s: &BudgetSet) -> Result<u64> {
        self.require_mask_width()?;
        let mut mask = 0u64;
        for id in s.iter() {
            mask |= 1 << self.index_of(id)?;
        }
        Ok(mask)
    }

    pub fn set_of_mask(&self, mut mask: u64) -> BudgetSet {
        let mut set = BudgetSet::new();
        while mask != 0 {
            let i = mask.trailing_zeros() as usize;
            set.insert(self.projects[i].id.clone());
            mask &= mask - 1;
        }
        set
    }

    pub fn set_of_indices(&self, idx: impl IntoIterator<Item = usize>) -> BudgetSet {
        idx.into_iter().map(|i| self.projects[i].id.clone()).collect()
    }

    pub fn mask_cost(&self, mut mask: u64) -> u64 {
        let mut total = 0;
        while mask != 0 {
            total += self.projects[mask.trailing_zeros() as usize].cost;
            mask &= mask - 1;
        }
        total
    }

    pub(crate) fn require_mask_width(&self) -> Result<()> {
        if self.projects.len() > 64 {
            return Err(PbError::Capacity(format!(
                "set enumeration supports at most 64 projects, instance has {}",
                self.projects.len()
            )));
        }
        Ok(())
    }

    pub fn with_budget(&self, budget: u64) -> Result<Instance> {
        Instance::new(self.projects.clone(), budget, self.profile.clone())
    }

    pub fn with_profile(&self, profile: Vec<WeakRanking>) -> Result<Instance> {
        Instance::new(self.projects.clone(), self.budget, profile)
    }

    pub fn with_projects(&self, projects: Vec<Project>) -> Result<Instance> {
        Instance::new(projects, self.budget, self.profile.clone())
    }

    pub fn with_cost(&self, id: &ProjectId, cost: u64) -> Result<Instance> {
        let idx = self.index_of(id)?;
        let mut projects = self.projects.clone();
        projects[idx].cost = cost;
        self.with_projects(projects)
    }
}
