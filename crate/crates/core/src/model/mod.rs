//! Instances, weak rankings and the need-based disutility primitive.

mod instance;
mod need;
mod project;
pub(crate) mod ranking;

pub use instance::{BudgetSet, Instance};
pub use need::{disutility_t, NeedParameter};
pub use project::{Project, ProjectId};
pub use ranking::WeakRanking;

use crate::error::Result;

/// `r_i(a)`.
pub fn rank_of(ranking: &WeakRanking, project: &ProjectId) -> Result<usize> {
    ranking.rank_of(project)
}

/// `P_i[j]`.
pub fn prefix_set(ranking: &WeakRanking, j: usize) -> Result<std::collections::BTreeSet<ProjectId>> {
    ranking.prefix_set(j)
}

/// `c(S)`.
pub fn cost_of(instance: &Instance, s: &BudgetSet) -> Result<u64> {
    instance.cost_of(s)
}
