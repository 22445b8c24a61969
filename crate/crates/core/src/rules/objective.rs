use crate::error::{PbError, Result};
use crate::layers::{cost_worthy_indices, greedy_indices, ApprovalProfile};
use crate::model::{disutility_t, BudgetSet, Instance, NeedParameter};
use crate::rules::{RuleSpec, UtilityFunction};

/// `Σ_i f(A_i ∩ S)`.
pub fn total_utility(profile: &ApprovalProfile, f: UtilityFunction, s: &BudgetSet, instance: &Instance) -> Result<u64> {
    for id in s.iter() {
        instance.index_of(id)?;
    }
    let mut total = 0u64;
    for approved in profile.approvals() {
        let mut count = 0u64;
        let mut cost = 0u64;
        for id in approved.iter().filter(|id| s.contains(id)) {
            count += 1;
            cost += instance.cost_by_id(id)?;
        }
        total += match f {
            UtilityFunction::Cardinality => count,
            UtilityFunction::Cost => cost,
            UtilityFunction::Coverage => u64::from(count > 0),
        };
    }
    Ok(total)
}

/// `Σ_i t_i(λ, S)`.
pub fn total_disutility(instance: &Instance, lambda: NeedParameter, s: &BudgetSet) -> Result<u64> {
    let mut total = 0u64;
    for ranking in instance.profile() {
        total += disutility_t(ranking, instance, lambda, s)? as u64;
    }
    Ok(total)
}

/// The objective of a rule on one instance, evaluated on project bitmasks.
pub(crate) struct MaskObjective {
    costs: Vec<u64>,
    kind: Kind,
}

enum Kind {
    /// Sum of per-project scores.
    Additive(Vec<u64>),
    /// Number of agents whose approval mask meets the set.
    Coverage(Vec<u64>),
    /// Per agent, indifference classes as masks, best first.
    Need { classes: Vec<Vec<u64>>, lambda: NeedParameter, miss: u64 },
}

fn to_mask(idx: &[usize]) -> u64 {
    idx.iter().fold(0u64, |m, &i| m | (1 << i))
}

impl MaskObjective {
    pub(crate) fn new(instance: &Instance, spec: &RuleSpec) -> Result<Self> {
        instance.require_mask_width()?;
        spec.validate(instance)?;
        let costs: Vec<u64> = instance.projects().iter().map(|p| p.cost).collect();
        let approvals = match spec {
            RuleSpec::GreedyTruncation { .. } => Some(greedy_indices(instance)),
            RuleSpec::CostWorthy { alpha, .. } => Some(cost_worthy_indices(instance, alpha)),
            RuleSpec::NeedBased { .. } => None,
        };
        let kind = match (spec, approvals) {
            (RuleSpec::NeedBased { lambda }, _) => Kind::Need {
                classes: (0..instance.num_agents())
                    .map(|a| instance.agent_classes(a).iter().map(|c| to_mask(c)).collect())
                    .collect(),
                lambda: *lambda,
                miss: instance.num_projects() as u64 + 1,
            },
            (_, Some(approvals)) => match spec.utility().expect("layered rule") {
                UtilityFunction::Coverage => Kind::Coverage(approvals.iter().map(|a| to_mask(a)).collect()),
                f => {
                    let mut scores = vec![0u64; costs.len()];
                    for agent in &approvals {
                        for &i in agent {
                            scores[i] += if f == UtilityFunction::Cost { costs[i] } else { 1 };
                        }
                    }
                    Kind::Additive(scores)
                }
            },
            (_, None) => unreachable!("layered rules always produce approvals"),
        };
        Ok(MaskObjective { costs, kind })
    }

    pub(crate) fn costs(&self) -> &[u64] {
        &self.costs
    }

    fn cost(&self, mut mask: u64) -> u64 {
        let mut total = 0;
        while mask != 0 {
            total += self.costs[mask.trailing_zeros() as usize];
            mask &= mask - 1;
        }
        total
    }

    pub(crate) fn value(&self, mask: u64) -> u64 {
        match &self.kind {
            Kind::Additive(scores) => {
                let mut total = 0;
                let mut m = mask;
                while m != 0 {
                    total += scores[m.trailing_zeros() as usize];
                    m &= m - 1;
                }
                total
            }
            Kind::Coverage(approvals) => approvals.iter().filter(|&&a| a & mask != 0).count() as u64,
            Kind::Need { classes, lambda, miss } => classes
                .iter()
                .map(|agent| {
                    let mut covered = 0;
                    for (k, &class) in agent.iter().enumerate() {
                        covered += self.cost(class & mask);
                        if lambda.is_met_by(covered) {
                            return k as u64 + 1;
                        }
                    }
                    *miss
                })
                .sum(),
        }
    }
}

pub(crate) fn check_profile_alignment(instance: &Instance, profile: &ApprovalProfile) -> Result<()> {
    if profile.len() != instance.num_agents() {
        return Err(PbError::Precondition(format!(
            "approval profile has {} agents, instance has {}",
            profile.len(),
            instance.num_agents()
        )));
    }
    Ok(())
}
