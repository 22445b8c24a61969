//! Exact participatory budgeting over weak rankings.
//!
//! Three rule families are provided, all irresolute: the greedy-truncation
//! and cost-worthy layered approval rules, which first translate every weak
//! ranking into an approval ballot, and the need-based rules, which minimise
//! the total rank at which each agent's need is covered. Alongside the
//! solvers the crate ships an axiom checker with perturbation operators and
//! a randomized counterexample search, generators that embed Subset Sum,
//! Vertex Cover and β-CC instances into PB, and a small text format plus CLI.

pub mod axioms;
pub mod cli;
pub mod error;
pub mod format;
pub mod layers;
pub mod model;
pub mod reductions;
pub mod rules;

pub use error::{PbError, Result};
pub use model::{BudgetSet, Instance, NeedParameter, Project, ProjectId, WeakRanking};
