//! Axiom checking.
//!
//! [`check_axiom`] applies every admissible perturbation of one kind to an
//! instance, re-solves exhaustively and tests the axiom's implication.
//! [`violation_fixtures`] holds hand-built instances on which specific rules
//! violate specific axioms, and [`search_counterexample`] samples random
//! instances looking for violations.

mod check;
mod fixtures;
mod perturb;
mod search;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{PbError, Result};
use crate::model::{BudgetSet, Instance, ProjectId};
use crate::rules::{solve_exhaustive, Outcome, RuleSpec, SolveOptions};

pub use check::{check_axiom, check_axiom_with};
pub use fixtures::{refutation_fixtures, violation_fixtures, Fixture};
pub use perturb::{
    fresh_part_ids, permute_agents, perturb_discount, perturb_limit, perturb_shift_forward, perturb_split,
    rename_projects,
};
pub use search::{
    random_instance, random_weak_ranking, sample_spec, search_counterexample, search_counterexample_with,
    AlphaCondition, GeneratorConfig, LambdaRange, RuleFamily,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum AxiomId {
    Anonymity,
    Neutrality,
    Consistency,
    CandidateMono,
    NonCrossingMono,
    SplittingMono,
    DiscountMono,
    LimitMono,
    InclusionMax,
    ProAffordability,
}

impl AxiomId {
    pub const ALL: [AxiomId; 10] = [
        AxiomId::Anonymity,
        AxiomId::Neutrality,
        AxiomId::Consistency,
        AxiomId::CandidateMono,
        AxiomId::NonCrossingMono,
        AxiomId::SplittingMono,
        AxiomId::DiscountMono,
        AxiomId::LimitMono,
        AxiomId::InclusionMax,
        AxiomId::ProAffordability,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AxiomId::Anonymity => "anonymity",
            AxiomId::Neutrality => "neutrality",
            AxiomId::Consistency => "consistency",
            AxiomId::CandidateMono => "candidate-mono",
            AxiomId::NonCrossingMono => "noncrossing-mono",
            AxiomId::SplittingMono => "splitting-mono",
            AxiomId::DiscountMono => "discount-mono",
            AxiomId::LimitMono => "limit-mono",
            AxiomId::InclusionMax => "inclusion-max",
            AxiomId::ProAffordability => "pro-affordability",
        }
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AxiomId {
    type Err = PbError;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.to_ascii_lowercase().replace('_', "-");
        AxiomId::ALL
            .into_iter()
            .find(|a| a.name() == norm || a.name().replace('-', "") == norm.replace('-', ""))
            .ok_or_else(|| PbError::Precondition(format!("unknown axiom `{s}`")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum VerdictStatus {
    /// No violation among the perturbations that were tried.
    HoldsOnTrials,
    Violated,
    /// The instance admits no perturbation of the requested kind.
    NotApplicable,
}

impl fmt::Display for VerdictStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictStatus::HoldsOnTrials => "HOLDS_ON_TRIALS",
            VerdictStatus::Violated => "VIOLATED",
            VerdictStatus::NotApplicable => "NOT_APPLICABLE",
        })
    }
}

/// What a violation is about.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Subject {
    /// Agent `i` of the perturbed instance holds the ranking of agent `perm[i]`.
    AgentPermutation(Vec<usize>),
    /// Project renaming, as `(old id, new id)` pairs.
    ProjectRenaming(Vec<(ProjectId, ProjectId)>),
    /// A set optimal for both groups but not for the joint electorate.
    JointSet(BudgetSet),
    /// `project` was moved up one place by `agent` (0-based).
    Shift {
        agent: usize,
        project: ProjectId,
    },
    /// `set` was winning and `project ∈ set` was moved up by `agent` past a
    /// project outside the set.
    SetShift {
        set: BudgetSet,
        agent: usize,
        project: ProjectId,
    },
    Split {
        project: ProjectId,
        parts: Vec<ProjectId>,
    },
    /// A winner that stopped winning.
    Project(ProjectId),
    Superset {
        set: BudgetSet,
        superset: BudgetSet,
    },
    /// `cheaper` is weakly preferred by everyone to the winner `winner`,
    /// costs less, and does not win.
    Pair {
        winner: ProjectId,
        cheaper: ProjectId,
    },
}

/// A concrete violation, with everything needed to re-verify it.
#[derive(Debug, Clone)]
pub struct Witness {
    pub axiom: AxiomId,
    pub spec: RuleSpec,
    pub instance: Instance,
    /// The perturbed instance; the joint instance for consistency; the
    /// instance itself for axioms without a perturbation.
    pub perturbed: Instance,
    /// Second electorate, for consistency.
    pub auxiliary: Option<Instance>,
    pub subject: Subject,
    pub before: Outcome,
    pub after: Outcome,
}

fn winners_of(outcome: &Outcome) -> &std::collections::BTreeSet<ProjectId> {
    &outcome.winners
}

impl Witness {
    /// Re-solves every instance from scratch and confirms the violation.
    pub fn recheck(&self) -> Result<bool> {
        let spec_after = self.spec.adapted_to(&self.perturbed);
        let before = solve_exhaustive(&self.instance, &self.spec)?;
        let after = solve_exhaustive(&self.perturbed, &spec_after)?;
        Ok(match &self.subject {
            Subject::AgentPermutation(_) => before.optimal_sets != after.optimal_sets,
            Subject::ProjectRenaming(map) => {
                let rename = |id: &ProjectId| {
                    map.iter().find(|(old, _)| old == id).map(|(_, new)| new.clone()).unwrap_or(id.clone())
                };
                let mut expected: Vec<BudgetSet> =
                    before.optimal_sets.iter().map(|s| s.iter().map(rename).collect()).collect();
                expected.sort();
                expected != after.optimal_sets
            }
            Subject::JointSet(s) => {
                let Some(aux) = &self.auxiliary else { return Ok(false) };
                let second = solve_exhaustive(aux, &self.spec)?;
                before.contains_set(s) && second.contains_set(s) && !after.contains_set(s)
            }
            Subject::Shift { project, .. } | Subject::Project(project) => {
                winners_of(&before).contains(project) && !winners_of(&after).contains(project)
            }
            Subject::SetShift { set, .. } => before.contains_set(set) && !after.contains_set(set),
            Subject::Split { project, parts } => {
                winners_of(&before).contains(project) && parts.iter().all(|p| !after.winners.contains(p))
            }
            Subject::Superset { set, superset } => {
                before.contains_set(set)
                    && set.is_subset(superset)
                    && set != superset
                    && self.instance.is_feasible(superset)?
                    && !before.contains_set(superset)
            }
            Subject::Pair { winner, cheaper } => {
                let all_prefer = self
                    .instance
                    .profile()
                    .iter()
                    .all(|r| matches!((r.rank_of(cheaper), r.rank_of(winner)), (Ok(a), Ok(b)) if a <= b));
                all_prefer
                    && self.instance.cost_by_id(cheaper)? < self.instance.cost_by_id(winner)?
                    && before.winners.contains(winner)
                    && !before.winners.contains(cheaper)
            }
        })
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "axiom: {}", self.axiom)?;
        writeln!(f, "rule: {}", self.spec)?;
        match &self.subject {
            Subject::AgentPermutation(p) => {
                let p: Vec<String> = p.iter().map(|i| (i + 1).to_string()).collect();
                writeln!(f, "agent permutation: [{}]", p.join(","))?
            }
            Subject::ProjectRenaming(map) => {
                let m: Vec<String> = map.iter().map(|(a, b)| format!("{a}->{b}")).collect();
                writeln!(f, "renaming: {}", m.join(" "))?
            }
            Subject::JointSet(s) => writeln!(f, "set {s} wins for both groups but not jointly")?,
            Subject::Shift { agent, project } => {
                writeln!(f, "winner {project} shifted forward by agent {} and lost", agent + 1)?
            }
            Subject::SetShift { set, agent, project } => {
                writeln!(f, "winning set {set} stopped winning after agent {} shifted {project} forward", agent + 1)?
            }
            Subject::Split { project, parts } => {
                let p: Vec<&str> = parts.iter().map(ProjectId::as_str).collect();
                writeln!(f, "winner {project} split into {{{}}}, none of which wins", p.join(","))?
            }
            Subject::Project(p) => writeln!(f, "winner {p} lost")?,
            Subject::Superset { set, superset } => {
                writeln!(f, "{set} wins but its feasible superset {superset} does not")?
            }
            Subject::Pair { winner, cheaper } => {
                writeln!(f, "{winner} wins but the cheaper, unanimously weakly preferred {cheaper} does not")?
            }
        }
        writeln!(f, "instance:")?;
        write!(f, "{}", crate::format::serialize_instance(&self.instance))?;
        if let Some(aux) = &self.auxiliary {
            writeln!(f, "second group:")?;
            write!(f, "{}", crate::format::serialize_instance(aux))?;
        }
        writeln!(f, "perturbed:")?;
        write!(f, "{}", crate::format::serialize_instance(&self.perturbed))?;
        writeln!(f, "before: {}", fmt_sets(&self.before))?;
        write!(f, "after: {}", fmt_sets(&self.after))
    }
}

fn fmt_sets(outcome: &Outcome) -> String {
    let sets: Vec<String> = outcome.optimal_sets.iter().map(ToString::to_string).collect();
    format!("value {} sets [{}]", outcome.optimal_value, sets.join(" "))
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub witness: Option<Box<Witness>>,
    /// Instances on which the axiom was applicable and checked.
    pub trials: u64,
    /// Perturbed instances (or set pairs) examined.
    pub perturbations: u64,
}

impl Verdict {
    pub fn is_violated(&self) -> bool {
        self.status == VerdictStatus::Violated
    }
}

/// Knobs for [`check_axiom_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckConfig {
    /// Enumerate all agent/project permutations up to this many items,
    /// sample above it.
    pub full_permutation_limit: usize,
    pub sampled_permutations: usize,
    /// Largest number of profile bipartitions tried for consistency.
    pub max_bipartitions: usize,
    /// Projects up to this cost are also split into unit-cost parts.
    pub max_unit_split: u64,
    /// Seed for sampled permutations.
    pub seed: u64,
    pub solve: SolveOptions,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            full_permutation_limit: 6,
            sampled_permutations: 200,
            max_bipartitions: 64,
            max_unit_split: 4,
            seed: 0,
            solve: SolveOptions::default(),
        }
    }
}

impl CheckConfig {
    /// A cheaper configuration for running many checks in a row.
    pub fn light() -> Self {
        CheckConfig {
            full_permutation_limit: 3,
            sampled_permutations: 24,
            max_bipartitions: 16,
            ..CheckConfig::default()
        }
    }
}
