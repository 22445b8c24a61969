use crate::error::{PbError, Result};
use crate::layers::ApprovalProfile;
use crate::model::{BudgetSet, Instance};
use crate::rules::objective::check_profile_alignment;

const UNREACHABLE: u64 = u64::MAX;
const MAX_CELLS: usize = 1 << 27;

/// Knapsack over score: picks a feasible set maximising the summed item
/// scores.
///
/// `table[i][j]` is the cheapest cost of a subset of items `i..m` whose
/// scores sum to exactly `j`, or `UNREACHABLE`. The witness is rebuilt front
/// to back, taking each item whenever the rest can still complete the
/// optimum within the remaining budget, so earlier projects are preferred.
fn knapsack(instance: &Instance, scores: &[u64]) -> Result<(u64, BudgetSet)> {
    let m = scores.len();
    let total = scores.iter().try_fold(0u64, |acc, &s| acc.checked_add(s)).ok_or(PbError::Overflow("total score"))?;
    let width = usize::try_from(total)
        .ok()
        .and_then(|t| t.checked_add(1))
        .filter(|w| w.saturating_mul(m + 1) <= MAX_CELLS)
        .ok_or_else(|| PbError::Capacity(format!("score table with {total} columns is too large")))?;

    let mut table = vec![UNREACHABLE; (m + 1) * width];
    table[m * width] = 0;
    for i in (0..m).rev() {
        let s = scores[i] as usize;
        let c = instance.cost(i);
        let (head, next) = table.split_at_mut((i + 1) * width);
        let row = &mut head[i * width..];
        for j in 0..width {
            let skip = next[j];
            let take = if j >= s && next[j - s] != UNREACHABLE { next[j - s] + c } else { UNREACHABLE };
            row[j] = skip.min(take);
        }
    }

    let budget = instance.budget();
    let best = (0..width).rev().find(|&j| table[j] <= budget).expect("score 0 costs nothing");

    let mut witness = Vec::new();
    let (mut j, mut left) = (best, budget);
    for i in 0..m {
        let s = scores[i] as usize;
        let c = instance.cost(i);
        let next = &table[(i + 1) * width..(i + 2) * width];
        if j >= s && c <= left && next[j - s] <= left - c {
            witness.push(i);
            j -= s;
            left -= c;
        }
    }
    debug_assert_eq!(j, 0);
    Ok((best as u64, instance.set_of_indices(witness)))
}

/// Optimal value and one optimal set for the cardinality objective
/// `Σ_i |A_i ∩ S|` over the approvals in `profile`. `O(m²n)`.
pub fn solve_dp_cardinality(instance: &Instance, profile: &ApprovalProfile) -> Result<(u64, BudgetSet)> {
    check_profile_alignment(instance, profile)?;
    knapsack(instance, &profile.approval_counts(instance)?)
}

/// Optimal value and one optimal set for the cost objective
/// `Σ_i c(A_i ∩ S)`, with project score `(#approvals) · c(a)`. Every
/// approved project must cost at most `alpha_1`, which bounds the table
/// width by `m·n·alpha_1`.
pub fn solve_dp_cost(instance: &Instance, profile: &ApprovalProfile, alpha_1: u64) -> Result<(u64, BudgetSet)> {
    check_profile_alignment(instance, profile)?;
    let counts = profile.approval_counts(instance)?;
    let mut scores = Vec::with_capacity(counts.len());
    for (i, &count) in counts.iter().enumerate() {
        let c = instance.cost(i);
        if count > 0 && c > alpha_1 {
            return Err(PbError::Precondition(format!(
                "approved project `{}` costs {c}, more than alpha(1) = {alpha_1}",
                instance.project(i).id
            )));
        }
        scores.push(count.checked_mul(c).ok_or(PbError::Overflow("project score"))?);
    }
    knapsack(instance, &scores)
}
