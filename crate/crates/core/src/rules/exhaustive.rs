use std::collections::HashSet;

use crate::error::{PbError, Result};
use crate::model::Instance;
use crate::rules::objective::MaskObjective;
use crate::rules::{Outcome, RuleSpec};

/// Limits for full enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    /// Largest number of projects accepted.
    pub max_projects: usize,
    /// Largest number of optimal sets stored before giving up.
    pub max_sets: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { max_projects: 22, max_sets: 1 << 20 }
    }
}

/// All optimal feasible sets as project-index bitmasks, in increasing mask
/// order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct MaskOutcome {
    pub value: u64,
    pub masks: Vec<u64>,
}

impl MaskOutcome {
    pub(crate) fn contains(&self, mask: u64) -> bool {
        self.masks.binary_search(&mask).is_ok()
    }

    pub(crate) fn winners(&self) -> u64 {
        self.masks.iter().fold(0, |w, &m| w | m)
    }

    pub(crate) fn to_outcome(&self, instance: &Instance) -> Outcome {
        let sets = self.masks.iter().map(|&m| instance.set_of_mask(m)).collect();
        Outcome::from_sets(self.value, sets, false)
    }
}

struct Search<'a> {
    objective: &'a MaskObjective,
    budget: u64,
    maximize: bool,
    max_sets: usize,
    best: Option<u64>,
    masks: Vec<u64>,
    overflow: bool,
}

impl Search<'_> {
    fn visit(&mut self, i: usize, mask: u64, cost: u64) {
        if self.overflow {
            return;
        }
        if i == self.objective.costs().len() {
            self.record(mask);
            return;
        }
        self.visit(i + 1, mask, cost);
        let c = self.objective.costs()[i];
        if cost + c <= self.budget {
            self.visit(i + 1, mask | (1 << i), cost + c);
        }
    }

    fn record(&mut self, mask: u64) {
        let v = self.objective.value(mask);
        let better = match self.best {
            None => true,
            Some(b) if self.maximize => v > b,
            Some(b) => v < b,
        };
        if better {
            self.best = Some(v);
            self.masks.clear();
        }
        if better || self.best == Some(v) {
            if self.masks.len() == self.max_sets {
                self.overflow = true;
                return;
            }
            self.masks.push(mask);
        }
    }
}

pub(crate) fn solve_masks(instance: &Instance, spec: &RuleSpec, opts: &SolveOptions) -> Result<MaskOutcome> {
    let m = instance.num_projects();
    if m > opts.max_projects.min(64) {
        return Err(PbError::Capacity(format!(
            "exhaustive enumeration is capped at {} projects, instance has {m}",
            opts.max_projects.min(64)
        )));
    }
    let objective = MaskObjective::new(instance, spec)?;
    let mut search = Search {
        objective: &objective,
        budget: instance.budget(),
        maximize: spec.maximizes(),
        max_sets: opts.max_sets,
        best: None,
        masks: Vec::new(),
        overflow: false,
    };
    search.visit(0, 0, 0);
    if search.overflow {
        return Err(PbError::Capacity(format!(
            "more than {} optimal sets; raise the stored-set ceiling",
            opts.max_sets
        )));
    }
    let mut masks = search.masks;
    masks.sort_unstable();
    let out = MaskOutcome { value: search.best.expect("the empty set is always feasible"), masks };
    debug_assert!(inclusion_maximal(instance, &out), "outcome of {spec} is not inclusion-maximal");
    Ok(out)
}

/// Every feasible one-project extension of an optimal set is optimal.
/// Checking single additions suffices: chains of them reach every feasible
/// superset.
pub(crate) fn inclusion_maximal(instance: &Instance, out: &MaskOutcome) -> bool {
    let optimal: HashSet<u64> = out.masks.iter().copied().collect();
    out.masks.iter().all(|&s| {
        let spent = instance.mask_cost(s);
        (0..instance.num_projects()).all(|i| {
            s & (1 << i) != 0 || spent + instance.cost(i) > instance.budget() || optimal.contains(&(s | (1 << i)))
        })
    })
}

/// Every optimal feasible set of `spec` on `instance`, with default limits.
pub fn solve_exhaustive(instance: &Instance, spec: &RuleSpec) -> Result<Outcome> {
    solve_exhaustive_with(instance, spec, &SolveOptions::default())
}

pub fn solve_exhaustive_with(instance: &Instance, spec: &RuleSpec, opts: &SolveOptions) -> Result<Outcome> {
    Ok(solve_masks(instance, spec, opts)?.to_outcome(instance))
}
