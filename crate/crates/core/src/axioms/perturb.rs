//! Instance transformations used by the axioms.

use std::collections::BTreeSet;

use crate::error::{PbError, Result};
use crate::model::{Instance, Project, ProjectId, WeakRanking};

fn check_agent(instance: &Instance, agent: usize) -> Result<()> {
    if agent >= instance.num_agents() {
        return Err(PbError::Precondition(format!(
            "agent index {agent} out of range for {} agents",
            instance.num_agents()
        )));
    }
    Ok(())
}

/// Index of the project directly above `idx` in `agent`'s ranking, when both
/// sit in singleton classes. `None` for top-ranked projects and for tied
/// boundaries.
pub(crate) fn singleton_predecessor(instance: &Instance, agent: usize, idx: usize) -> Option<usize> {
    let classes = instance.agent_classes(agent);
    let k = instance.rank(agent, idx) - 1;
    if k == 0 || classes[k].len() != 1 || classes[k - 1].len() != 1 {
        return None;
    }
    Some(classes[k - 1][0])
}

pub(crate) fn swap_with_predecessor(instance: &Instance, agent: usize, idx: usize) -> Result<Instance> {
    let mut profile = instance.profile().to_vec();
    let mut classes = profile[agent].classes().to_vec();
    let k = instance.rank(agent, idx) - 1;
    classes.swap(k - 1, k);
    profile[agent] = WeakRanking::from_classes_unchecked(classes);
    instance.with_profile(profile)
}

/// Moves `project` one position up in the ranking of `agent` (0-based),
/// swapping it with the project directly above.
///
/// Returns `Ok(None)` when the project is already ranked first. Only strict
/// boundaries are supported: if either the project's class or the class
/// above it has more than one member, the move is undefined and a
/// precondition error is returned.
pub fn perturb_shift_forward(instance: &Instance, agent: usize, project: &ProjectId) -> Result<Option<Instance>> {
    check_agent(instance, agent)?;
    let idx = instance.index_of(project)?;
    if instance.rank(agent, idx) == 1 {
        return Ok(None);
    }
    if singleton_predecessor(instance, agent, idx).is_none() {
        return Err(PbError::Precondition(format!(
            "`{project}` does not sit on a strict boundary in the ranking of agent {}",
            agent + 1
        )));
    }
    swap_with_predecessor(instance, agent, idx).map(Some)
}

/// Replaces `project` by `parts`, whose costs must sum to its cost. The parts
/// take the project's place in every ranking, tied with each other and with
/// the rest of its class.
pub fn perturb_split(instance: &Instance, project: &ProjectId, parts: &[(ProjectId, u64)]) -> Result<Instance> {
    let idx = instance.index_of(project)?;
    if parts.is_empty() {
        return Err(PbError::Precondition("a split needs at least one part".into()));
    }
    let mut fresh = BTreeSet::new();
    let mut total = 0u64;
    for (id, cost) in parts {
        if instance.contains_project(id) || !fresh.insert(id.clone()) {
            return Err(PbError::Precondition(format!("part id `{id}` is not fresh")));
        }
        if *cost == 0 {
            return Err(PbError::NonPositiveCost(id.clone()));
        }
        total = total.checked_add(*cost).ok_or(PbError::Overflow("split cost"))?;
    }
    if total != instance.cost(idx) {
        return Err(PbError::Precondition(format!("parts cost {total}, but `{project}` costs {}", instance.cost(idx))));
    }

    let mut projects: Vec<Project> = instance.projects().iter().filter(|p| &p.id != project).cloned().collect();
    projects.extend(parts.iter().map(|(id, cost)| Project::new(id.clone(), *cost)));
    let profile = instance
        .profile()
        .iter()
        .map(|r| {
            let classes = r
                .classes()
                .iter()
                .map(|class| {
                    let mut c: Vec<ProjectId> = Vec::with_capacity(class.len() + parts.len());
                    for id in class {
                        if id == project {
                            c.extend(parts.iter().map(|(p, _)| p.clone()));
                        } else {
                            c.push(id.clone());
                        }
                    }
                    c.sort();
                    c
                })
                .collect();
            WeakRanking::from_classes_unchecked(classes)
        })
        .collect();
    Instance::new(projects, instance.budget(), profile)
}

/// `count` ids derived from `project` that do not occur in `instance`.
pub fn fresh_part_ids(instance: &Instance, project: &ProjectId, count: usize) -> Vec<ProjectId> {
    let mut stem = format!("{project}_");
    loop {
        let ids: Vec<ProjectId> = (1..=count).map(|k| ProjectId::from(format!("{stem}{k}"))).collect();
        if ids.iter().all(|id| !instance.contains_project(id)) {
            return ids;
        }
        stem.push('_');
    }
}

/// Lowers the cost of `project` by one. `Ok(None)` when it costs less than 2.
pub fn perturb_discount(instance: &Instance, project: &ProjectId) -> Result<Option<Instance>> {
    let cost = instance.cost_by_id(project)?;
    if cost < 2 {
        return Ok(None);
    }
    instance.with_cost(project, cost - 1).map(Some)
}

/// Raises the budget by one. `Ok(None)` when some project costs exactly
/// `L + 1`.
pub fn perturb_limit(instance: &Instance) -> Result<Option<Instance>> {
    let next = instance.budget().checked_add(1).ok_or(PbError::Overflow("budget"))?;
    if instance.projects().iter().any(|p| p.cost == next) {
        return Ok(None);
    }
    instance.with_budget(next).map(Some)
}

fn check_permutation(perm: &[usize], len: usize) -> Result<()> {
    let mut seen = vec![false; len];
    if perm.len() != len {
        return Err(PbError::Precondition(format!("permutation of length {} for {len} items", perm.len())));
    }
    for &p in perm {
        if p >= len || std::mem::replace(&mut seen[p], true) {
            return Err(PbError::Precondition("not a permutation".into()));
        }
    }
    Ok(())
}

/// Agent `i` of the result holds the ranking of agent `perm[i]`.
pub fn permute_agents(instance: &Instance, perm: &[usize]) -> Result<Instance> {
    check_permutation(perm, instance.num_agents())?;
    let profile = perm.iter().map(|&p| instance.profile()[p].clone()).collect();
    instance.with_profile(profile)
}

/// Renames project `i` (in canonical order) to the id of project `perm[i]`,
/// everywhere, carrying its cost along.
pub fn rename_projects(instance: &Instance, perm: &[usize]) -> Result<Instance> {
    check_permutation(perm, instance.num_projects())?;
    let new_id = |id: &ProjectId| -> ProjectId {
        let i = instance.index_of(id).expect("ranking ids belong to the instance");
        instance.project(perm[i]).id.clone()
    };
    let projects = instance.projects().iter().map(|p| Project::new(new_id(&p.id), p.cost)).collect();
    let profile = instance
        .profile()
        .iter()
        .map(|r| {
            let classes = r
                .classes()
                .iter()
                .map(|class| {
                    let mut c: Vec<ProjectId> = class.iter().map(new_id).collect();
                    c.sort();
                    c
                })
                .collect();
            WeakRanking::from_classes_unchecked(classes)
        })
        .collect();
    Instance::new(projects, instance.budget(), profile)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::parse_instance;

    fn inst(text: &str) -> Instance {
        parse_instance(&format!("pbinstance 1\n{text}")).unwrap()
    }

    #[test]
    fn shift_forward_swaps_neighbours() {
        let i = inst("budget 4\nproject a1 1\nproject a2 1\nproject a3 1\nagent a1 > a2 > a3\n");
        let shifted = perturb_shift_forward(&i, 0, &"a3".into()).unwrap().unwrap();
        assert_eq!(shifted.profile()[0].to_string(), "a1 > a3 > a2");
        assert!(perturb_shift_forward(&i, 0, &"a1".into()).unwrap().is_none());
        assert!(perturb_shift_forward(&i, 1, &"a1".into()).is_err());
    }

    #[test]
    fn shift_across_a_tie_is_rejected() {
        let i = inst("budget 4\nproject a1 1\nproject a2 1\nproject a3 1\nagent {a1,a2} > a3\n");
        assert!(matches!(perturb_shift_forward(&i, 0, &"a3".into()), Err(PbError::Precondition(_))));
    }

    #[test]
    fn split_joins_the_class() {
        let i = inst("budget 4\nproject a1 1\nproject x 4\nproject a2 1\nagent a1 > x > a2\n");
        let parts = [("x1".into(), 2), ("x2".into(), 2)];
        let split = perturb_split(&i, &"x".into(), &parts).unwrap();
        assert_eq!(split.profile()[0].to_string(), "a1 > {x1,x2} > a2");
        assert_eq!(split.num_projects(), 4);

        let renamed = perturb_split(&i, &"x".into(), &[("y".into(), 4)]).unwrap();
        assert_eq!(renamed.profile()[0].to_string(), "a1 > y > a2");

        assert!(perturb_split(&i, &"x".into(), &[("y".into(), 3)]).is_err());
        assert!(perturb_split(&i, &"x".into(), &[("a1".into(), 4)]).is_err());
        let ids = fresh_part_ids(&i, &"x".into(), 2);
        assert_eq!(ids, vec![ProjectId::from("x_1"), ProjectId::from("x_2")]);
    }

    #[test]
    fn discount_and_limit() {
        let i = inst("budget 3\nproject a 2\nproject b 1\nagent a > b\n");
        let d = perturb_discount(&i, &"a".into()).unwrap().unwrap();
        assert_eq!(d.cost_by_id(&"a".into()).unwrap(), 1);
        assert!(perturb_discount(&i, &"b".into()).unwrap().is_none());
        assert_eq!(perturb_limit(&i).unwrap().unwrap().budget(), 4);
        let blocked = inst("budget 3\nproject a 4\nagent a\n");
        assert!(perturb_limit(&blocked).unwrap().is_none());
    }

    #[test]
    fn renaming_and_agent_permutation() {
        let i = inst("budget 3\nproject a 2\nproject b 1\nagent a > b\nagent b > a\n");
        let swapped = permute_agents(&i, &[1, 0]).unwrap();
        assert_eq!(swapped.profile()[0].to_string(), "b > a");
        let renamed = rename_projects(&i, &[1, 0]).unwrap();
        assert_eq!(renamed.cost_by_id(&"b".into()).unwrap(), 2);
        assert_eq!(renamed.profile()[0].to_string(), "b > a");
        assert!(permute_agents(&i, &[0, 0]).is_err());
    }
}
