//! The three rule families as exact optimizers.
//!
//! Every rule is irresolute: [`solve_exhaustive`] returns all optimal
//! feasible sets. The knapsack-style dynamic programs in [`dp`] compute the
//! optimal value and one witness for the additive cases.

mod dp;
mod exhaustive;
mod objective;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{PbError, Result};
use crate::layers::{cost_worthy_layer, greedy_truncation_layer, ApprovalProfile, WorthVector};
use crate::model::{BudgetSet, Instance, NeedParameter, ProjectId};

pub use dp::{solve_dp_cardinality, solve_dp_cost};
pub use exhaustive::{solve_exhaustive, solve_exhaustive_with, SolveOptions};
pub use objective::{total_disutility, total_utility};

pub(crate) use exhaustive::{solve_masks, MaskOutcome};

/// How an agent values the approved part of a budget set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum UtilityFunction {
    /// `f(S) = |S|`
    Cardinality,
    /// `f(S) = c(S)`
    Cost,
    /// `f(S) = 1` if `S` is non-empty, else `0`
    Coverage,
}

impl UtilityFunction {
    pub const ALL: [UtilityFunction; 3] =
        [UtilityFunction::Cardinality, UtilityFunction::Cost, UtilityFunction::Coverage];

    pub fn name(self) -> &'static str {
        match self {
            UtilityFunction::Cardinality => "card",
            UtilityFunction::Cost => "cost",
            UtilityFunction::Coverage => "cover",
        }
    }
}

impl fmt::Display for UtilityFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for UtilityFunction {
    type Err = PbError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "card" | "cardinality" => Ok(UtilityFunction::Cardinality),
            "cost" => Ok(UtilityFunction::Cost),
            "cover" | "coverage" => Ok(UtilityFunction::Coverage),
            _ => Err(PbError::Precondition(format!("unknown utility function `{s}`"))),
        }
    }
}

/// A fully parameterised rule.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RuleSpec {
    GreedyTruncation { f: UtilityFunction },
    CostWorthy { f: UtilityFunction, alpha: WorthVector },
    NeedBased { lambda: NeedParameter },
}

impl RuleSpec {
    pub fn greedy(f: UtilityFunction) -> Self {
        RuleSpec::GreedyTruncation { f }
    }

    pub fn cost_worthy(f: UtilityFunction, alpha: WorthVector) -> Self {
        RuleSpec::CostWorthy { f, alpha }
    }

    pub fn need_based(lambda: NeedParameter) -> Self {
        RuleSpec::NeedBased { lambda }
    }

    pub fn utility(&self) -> Option<UtilityFunction> {
        match self {
            RuleSpec::GreedyTruncation { f } | RuleSpec::CostWorthy { f, .. } => Some(*f),
            RuleSpec::NeedBased { .. } => None,
        }
    }

    /// Checks the parameters against `instance`.
    pub fn validate(&self, instance: &Instance) -> Result<()> {
        match self {
            RuleSpec::GreedyTruncation { .. } => Ok(()),
            RuleSpec::CostWorthy { alpha, .. } => alpha.validate_for(instance),
            RuleSpec::NeedBased { lambda } => lambda.validate_for(instance),
        }
    }

    /// The same rule re-targeted at an instance with a different number of
    /// projects: the worth vector is padded with its last entry (or
    /// truncated) to the new length. Other families are returned unchanged.
    pub fn adapted_to(&self, instance: &Instance) -> RuleSpec {
        match self {
            RuleSpec::CostWorthy { f, alpha } => {
                RuleSpec::CostWorthy { f: *f, alpha: alpha.fitted_to(instance.num_projects()) }
            }
            other => other.clone(),
        }
    }

    /// The approval profile the rule optimises over, for layered rules.
    pub fn approvals(&self, instance: &Instance) -> Result<Option<ApprovalProfile>> {
        match self {
            RuleSpec::GreedyTruncation { .. } => Ok(Some(greedy_truncation_layer(instance))),
            RuleSpec::CostWorthy { alpha, .. } => Ok(Some(cost_worthy_layer(instance, alpha)?)),
            RuleSpec::NeedBased { .. } => Ok(None),
        }
    }

    /// Whether a larger objective value is better.
    pub fn maximizes(&self) -> bool {
        !matches!(self, RuleSpec::NeedBased { .. })
    }
}

impl fmt::Display for RuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleSpec::GreedyTruncation { f: u } => write!(f, "greedy[{u}]"),
            RuleSpec::CostWorthy { f: u, alpha } => write!(f, "costworthy[{u}; alpha={alpha}]"),
            RuleSpec::NeedBased { lambda } => write!(f, "needbased[lambda={lambda}]"),
        }
    }
}

/// The irresolute result of a rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    /// Total utility (layered rules) or total disutility (need-based rules).
    pub optimal_value: u64,
    /// Every optimal feasible set, sorted. Holds a single witness when
    /// `non_enumerating` is set.
    pub optimal_sets: Vec<BudgetSet>,
    /// Projects in at least one optimal set.
    pub winners: BTreeSet<ProjectId>,
    /// Set when the outcome came from a DP that reports one witness only.
    pub non_enumerating: bool,
}

impl Outcome {
    pub(crate) fn from_sets(optimal_value: u64, mut optimal_sets: Vec<BudgetSet>, non_enumerating: bool) -> Self {
        optimal_sets.sort();
        optimal_sets.dedup();
        let winners = optimal_sets.iter().flat_map(|s| s.iter().cloned()).collect();
        Outcome { optimal_value, optimal_sets, winners, non_enumerating }
    }

    pub fn contains_set(&self, s: &BudgetSet) -> bool {
        self.optimal_sets.binary_search(s).is_ok()
    }

    pub fn is_winner(&self, id: &ProjectId) -> bool {
        self.winners.contains(id)
    }
}

/// Solver selection for [`evaluate_rule`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Exhaustive,
    /// Use a DP when one exists for the rule, else enumerate.
    DpIfAvailable,
}

/// Dispatches to the DP solvers for additive layered objectives when asked
/// to, and to exhaustive enumeration otherwise.
pub fn evaluate_rule(instance: &Instance, spec: &RuleSpec, strategy: Strategy) -> Result<Outcome> {
    spec.validate(instance)?;
    if strategy == Strategy::DpIfAvailable {
        let dp = match spec {
            RuleSpec::GreedyTruncation { f: UtilityFunction::Cardinality } => {
                Some(solve_dp_cardinality(instance, &greedy_truncation_layer(instance))?)
            }
            RuleSpec::CostWorthy { f: UtilityFunction::Cardinality, alpha } => {
                Some(solve_dp_cardinality(instance, &cost_worthy_layer(instance, alpha)?)?)
            }
            RuleSpec::CostWorthy { f: UtilityFunction::Cost, alpha } => {
                Some(solve_dp_cost(instance, &cost_worthy_layer(instance, alpha)?, alpha.first())?)
            }
            _ => None,
        };
        if let Some((value, witness)) = dp {
            return Ok(Outcome::from_sets(value, vec![witness], true));
        }
    }
    solve_exhaustive(instance, spec)
}
