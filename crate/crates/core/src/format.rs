//! Line-oriented text format for instances.
//!
//! ```text
//! # comment
//! pbinstance 1
//! budget 5
//! project a1 3
//! project a2 2
//! agent {a1,a2}
//! agent a2 > a1
//! ```
//!
//! `#` starts a comment anywhere on a line. After the header the `budget`,
//! `project` and `agent` lines may appear in any order; agents are numbered
//! by order of appearance.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::error::{PbError, Result};
use crate::model::ranking::valid_id;
use crate::model::{Instance, Project, ProjectId, WeakRanking};

fn parse_err(line: usize, message: impl Into<String>) -> PbError {
    PbError::Parse { line, message: message.into() }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut header = false;
    let mut budget: Option<u64> = None;
    let mut projects: Vec<Project> = Vec::new();
    let mut ids = BTreeSet::new();
    let mut agents: Vec<(usize, WeakRanking)> = Vec::new();

    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (keyword, rest) = match line.split_once(char::is_whitespace) {
            Some((k, r)) => (k, r.trim()),
            None => (line, ""),
        };
        if !header {
            if keyword != "pbinstance" || rest != "1" {
                return Err(parse_err(line_no, "expected header `pbinstance 1`"));
            }
            header = true;
            continue;
        }
        match keyword {
            "budget" => {
                if budget.is_some() {
                    return Err(parse_err(line_no, "budget given twice"));
                }
                let value = rest.parse().map_err(|_| parse_err(line_no, format!("bad budget `{rest}`")))?;
                budget = Some(value);
            }
            "project" => {
                let mut parts = rest.split_whitespace();
                let (Some(id), Some(cost), None) = (parts.next(), parts.next(), parts.next()) else {
                    return Err(parse_err(line_no, "expected `project <id> <cost>`"));
                };
                if !valid_id(id) {
                    return Err(parse_err(line_no, format!("bad project id `{id}`")));
                }
                let id = ProjectId::from(id);
                let cost: u64 = cost.parse().map_err(|_| parse_err(line_no, format!("bad cost `{cost}`")))?;
                if cost == 0 {
                    return Err(parse_err(line_no, format!("project `{id}` must have a positive cost")));
                }
                if !ids.insert(id.clone()) {
                    return Err(parse_err(line_no, format!("duplicate project `{id}`")));
                }
                projects.push(Project { id, cost });
            }
            "agent" => {
                let ranking: WeakRanking = rest.parse().map_err(|e: PbError| parse_err(line_no, e.to_string()))?;
                agents.push((line_no, ranking));
            }
            other => return Err(parse_err(line_no, format!("unknown keyword `{other}`"))),
        }
    }

    if !header {
        return Err(parse_err(1, "missing header `pbinstance 1`"));
    }
    let last_line = text.lines().count().max(1);
    let budget = budget.ok_or_else(|| parse_err(last_line, "missing `budget` line"))?;

    for (line_no, ranking) in &agents {
        if let Some(unknown) = ranking.projects().find(|id| !ids.contains(*id)) {
            return Err(parse_err(*line_no, format!("unknown project `{unknown}`")));
        }
        let seen: BTreeSet<&ProjectId> = ranking.projects().collect();
        let missing: Vec<String> = ids.iter().filter(|id| !seen.contains(id)).map(ToString::to_string).collect();
        if !missing.is_empty() {
            return Err(parse_err(*line_no, format!("ranking is incomplete, missing {}", missing.join(", "))));
        }
    }

    let profile = agents.into_iter().map(|(_, r)| r).collect();
    Instance::new(projects, budget, profile).map_err(|e| parse_err(last_line, e.to_string()))
}

/// Canonical text form: projects in id order, class members sorted.
pub fn serialize_instance(instance: &Instance) -> String {
    let mut out = String::from("pbinstance 1\n");
    let _ = writeln!(out, "budget {}", instance.budget());
    for p in instance.projects() {
        let _ = writeln!(out, "project {} {}", p.id, p.cost);
    }
    for r in instance.profile() {
        let _ = writeln!(out, "agent {r}");
    }
    out
}
