//! Translations from weak rankings to approval ballots.
//!
//! The greedy-truncation layer walks each ranking class by class and keeps
//! whole classes while they fit in the budget; at the first class that does
//! not fit it keeps exactly the members that fit individually next to the
//! classes already taken, then stops. The cost-worthy layer approves a
//! project when its cost does not exceed the worth assigned to the rank the
//! agent gives it.

use std::fmt;

use serde::Serialize;

use crate::error::{PbError, Result};
use crate::model::{BudgetSet, Instance};

/// One approval set per agent, in agent order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApprovalProfile {
    approvals: Vec<BudgetSet>,
}

impl ApprovalProfile {
    pub fn new(approvals: Vec<BudgetSet>) -> Self {
        ApprovalProfile { approvals }
    }

    pub fn approvals(&self) -> &[BudgetSet] {
        &self.approvals
    }

    pub fn agent(&self, i: usize) -> &BudgetSet {
        &self.approvals[i]
    }

    pub fn len(&self) -> usize {
        self.approvals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.approvals.is_empty()
    }

    /// Approval sets as project indices of `instance`.
    pub fn to_indices(&self, instance: &Instance) -> Result<Vec<Vec<usize>>> {
        self.approvals.iter().map(|a| a.iter().map(|id| instance.index_of(id)).collect()).collect()
    }

    /// Number of approvals per project index.
    pub fn approval_counts(&self, instance: &Instance) -> Result<Vec<u64>> {
        let mut counts = vec![0u64; instance.num_projects()];
        for agent in self.to_indices(instance)? {
            for i in agent {
                counts[i] += 1;
            }
        }
        Ok(counts)
    }

    fn from_indices(instance: &Instance, idx: Vec<Vec<usize>>) -> Self {
        ApprovalProfile { approvals: idx.into_iter().map(|a| instance.set_of_indices(a)).collect() }
    }
}

impl fmt::Display for ApprovalProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.approvals.iter().enumerate() {
            writeln!(f, "agent {}: {}", i + 1, a)?;
        }
        Ok(())
    }
}

/// The worth vector `α`: `α(j)` is the largest cost a rank-`j` project may
/// have and still be approved. Non-increasing by construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct WorthVector(Vec<u64>);

impl WorthVector {
    pub fn new(entries: Vec<u64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(PbError::InvalidWorthVector("empty".into()));
        }
        if let Some(w) = entries.windows(2).find(|w| w[0] < w[1]) {
            return Err(PbError::InvalidWorthVector(format!(
                "entries must be non-increasing, found {} before {}",
                w[0], w[1]
            )));
        }
        Ok(WorthVector(entries))
    }

    /// Same value at every rank.
    pub fn flat(value: u64, len: usize) -> Result<Self> {
        WorthVector::new(vec![value; len])
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `α(1)`.
    pub fn first(&self) -> u64 {
        self.0[0]
    }

    /// `α(m)`.
    pub fn last(&self) -> u64 {
        *self.0.last().expect("worth vector is non-empty")
    }

    /// `α(rank)` for a 1-based rank.
    pub fn at(&self, rank: usize) -> u64 {
        self.0[rank - 1]
    }

    /// Right-pads with the last entry, or truncates, to exactly `m` entries.
    pub fn fitted_to(&self, m: usize) -> WorthVector {
        let mut v = self.0.clone();
        let last = self.last();
        v.resize(m.max(1), last);
        WorthVector(v)
    }

    /// Length must equal the number of projects and every entry must lie in
    /// `{0, …, L}`.
    pub fn validate_for(&self, instance: &Instance) -> Result<()> {
        if self.len() != instance.num_projects() {
            return Err(PbError::InvalidWorthVector(format!(
                "expected {} entries, got {}",
                instance.num_projects(),
                self.len()
            )));
        }
        if self.first() > instance.budget() {
            return Err(PbError::InvalidWorthVector(format!(
                "entry {} exceeds the budget {}",
                self.first(),
                instance.budget()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for WorthVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        f.write_str(&parts.join(","))
    }
}

pub(crate) fn greedy_indices(instance: &Instance) -> Vec<Vec<usize>> {
    let budget = instance.budget();
    (0..instance.num_agents())
        .map(|agent| {
            let mut approved = Vec::new();
            let mut spent = 0u64;
            for class in instance.agent_classes(agent) {
                let class_cost: u64 = class.iter().map(|&i| instance.cost(i)).sum();
                if spent + class_cost <= budget {
                    approved.extend_from_slice(class);
                    spent += class_cost;
                } else {
                    // `spent` is frozen here: each member is tested on its own.
                    approved.extend(class.iter().copied().filter(|&i| instance.cost(i) <= budget - spent));
                    break;
                }
            }
            approved.sort_unstable();
            approved
        })
        .collect()
}

pub(crate) fn cost_worthy_indices(instance: &Instance, alpha: &WorthVector) -> Vec<Vec<usize>> {
    (0..instance.num_agents())
        .map(|agent| {
            (0..instance.num_projects()).filter(|&i| instance.cost(i) <= alpha.at(instance.rank(agent, i))).collect()
        })
        .collect()
}

/// Greedy-truncation layer.
///
/// Note that `c(A_i) ≤ L` is not guaranteed: several members of the boundary
/// class may each fit on their own without fitting together.
pub fn greedy_truncation_layer(instance: &Instance) -> ApprovalProfile {
    ApprovalProfile::from_indices(instance, greedy_indices(instance))
}

/// Cost-worthy layer: `A_i = { a : c(a) ≤ α(r_i(a)) }`.
pub fn cost_worthy_layer(instance: &Instance, alpha: &WorthVector) -> Result<ApprovalProfile> {
    alpha.validate_for(instance)?;
    Ok(ApprovalProfile::from_indices(instance, cost_worthy_indices(instance, alpha)))
}
