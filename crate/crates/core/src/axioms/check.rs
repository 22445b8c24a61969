use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::axioms::perturb::{
    fresh_part_ids, permute_agents, perturb_limit, perturb_split, rename_projects, singleton_predecessor,
    swap_with_predecessor,
};
use crate::axioms::{AxiomId, CheckConfig, Subject, Verdict, VerdictStatus, Witness};
use crate::error::Result;
use crate::model::{Instance, ProjectId};
use crate::rules::{solve_masks, MaskOutcome, RuleSpec};

fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (mask != 0).then(|| {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            i
        })
    })
}

/// All permutations of `0..k` except the identity, or a seeded sample of
/// them when `k` is above the enumeration limit.
fn permutations(k: usize, cfg: &CheckConfig) -> Vec<Vec<usize>> {
    let identity: Vec<usize> = (0..k).collect();
    if k <= cfg.full_permutation_limit {
        let mut out = Vec::new();
        let mut p = identity;
        while next_permutation(&mut p) {
            out.push(p.clone());
        }
        out
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        (0..cfg.sampled_permutations)
            .map(|_| {
                let mut p = identity.clone();
                p.shuffle(&mut rng);
                p
            })
            .filter(|p| *p != identity)
            .collect()
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else { return false };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("p[i] qualifies");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Cost vectors a project of cost `c` is split into: a plain renaming, a
/// unit part plus the rest, two halves, and all unit parts for cheap
/// projects.
fn split_schemes(c: u64, max_unit: u64) -> Vec<Vec<u64>> {
    let mut out = vec![vec![c]];
    if c >= 2 {
        out.push(vec![1, c - 1]);
    }
    if c >= 4 {
        out.push(vec![c / 2, c - c / 2]);
    }
    if (3..=max_unit).contains(&c) {
        out.push(vec![1; c as usize]);
    }
    out
}

struct Checker<'a> {
    axiom: AxiomId,
    spec: &'a RuleSpec,
    instance: &'a Instance,
    cfg: &'a CheckConfig,
    base: MaskOutcome,
    perturbations: u64,
}

impl Checker<'_> {
    fn solve(&self, instance: &Instance, spec: &RuleSpec) -> Result<MaskOutcome> {
        solve_masks(instance, spec, &self.cfg.solve)
    }

    fn witness(&self, perturbed: Instance, after: &MaskOutcome, subject: Subject) -> Witness {
        Witness {
            axiom: self.axiom,
            spec: self.spec.clone(),
            instance: self.instance.clone(),
            after: after.to_outcome(&perturbed),
            perturbed,
            auxiliary: None,
            subject,
            before: self.base.to_outcome(self.instance),
        }
    }

    fn id(&self, idx: usize) -> ProjectId {
        self.instance.project(idx).id.clone()
    }

    fn anonymity(&mut self) -> Result<Option<Witness>> {
        for perm in permutations(self.instance.num_agents(), self.cfg) {
            let p = permute_agents(self.instance, &perm)?;
            let r = self.solve(&p, self.spec)?;
            self.perturbations += 1;
            if r.masks != self.base.masks {
                return Ok(Some(self.witness(p, &r, Subject::AgentPermutation(perm))));
            }
        }
        Ok(None)
    }

    fn neutrality(&mut self) -> Result<Option<Witness>> {
        for perm in permutations(self.instance.num_projects(), self.cfg) {
            let p = rename_projects(self.instance, &perm)?;
            let r = self.solve(&p, self.spec)?;
            self.perturbations += 1;
            let mut expected: Vec<u64> =
                self.base.masks.iter().map(|&s| bits(s).fold(0, |m, i| m | (1 << perm[i]))).collect();
            expected.sort_unstable();
            if r.masks != expected {
                let map = perm.iter().enumerate().map(|(i, &j)| (self.id(i), self.id(j))).collect();
                return Ok(Some(self.witness(p, &r, Subject::ProjectRenaming(map))));
            }
        }
        Ok(None)
    }

    fn consistency(&mut self) -> Result<Option<Witness>> {
        let n = self.instance.num_agents();
        if n < 2 {
            return Ok(None);
        }
        let profile = self.instance.profile();
        let total = (1u64 << (n - 1)) - 1;
        for b in (0..total).take(self.cfg.max_bipartitions) {
            let (mut first, mut second) = (vec![profile[0].clone()], Vec::new());
            for (i, r) in profile.iter().enumerate().skip(1) {
                if b & (1 << (i - 1)) != 0 {
                    first.push(r.clone());
                } else {
                    second.push(r.clone());
                }
            }
            let joint: Vec<_> = first.iter().chain(&second).cloned().collect();
            let i1 = self.instance.with_profile(first)?;
            let i2 = self.instance.with_profile(second)?;
            let ij = self.instance.with_profile(joint)?;
            let (r1, r2, rj) = (self.solve(&i1, self.spec)?, self.solve(&i2, self.spec)?, self.solve(&ij, self.spec)?);
            self.perturbations += 1;
            if let Some(&s) = r1.masks.iter().find(|&&s| r2.contains(s) && !rj.contains(s)) {
                return Ok(Some(Witness {
                    axiom: self.axiom,
                    spec: self.spec.clone(),
                    before: r1.to_outcome(&i1),
                    after: rj.to_outcome(&ij),
                    subject: Subject::JointSet(i1.set_of_mask(s)),
                    instance: i1,
                    perturbed: ij,
                    auxiliary: Some(i2),
                }));
            }
        }
        Ok(None)
    }

    fn candidate(&mut self) -> Result<Option<Witness>> {
        for x in bits(self.base.winners()) {
            for agent in 0..self.instance.num_agents() {
                if singleton_predecessor(self.instance, agent, x).is_none() {
                    continue;
                }
                let p = swap_with_predecessor(self.instance, agent, x)?;
                let r = self.solve(&p, self.spec)?;
                self.perturbations += 1;
                if r.winners() & (1 << x) == 0 {
                    return Ok(Some(self.witness(p, &r, Subject::Shift { agent, project: self.id(x) })));
                }
            }
        }
        Ok(None)
    }

    fn non_crossing(&mut self) -> Result<Option<Witness>> {
        for agent in 0..self.instance.num_agents() {
            for x in 0..self.instance.num_projects() {
                let Some(above) = singleton_predecessor(self.instance, agent, x) else { continue };
                let sets: Vec<u64> =
                    self.base.masks.iter().copied().filter(|s| s & (1 << x) != 0 && s & (1 << above) == 0).collect();
                if sets.is_empty() {
                    continue;
                }
                let p = swap_with_predecessor(self.instance, agent, x)?;
                let r = self.solve(&p, self.spec)?;
                for s in sets {
                    self.perturbations += 1;
                    if !r.contains(s) {
                        let subject =
                            Subject::SetShift { set: self.instance.set_of_mask(s), agent, project: self.id(x) };
                        return Ok(Some(self.witness(p, &r, subject)));
                    }
                }
            }
        }
        Ok(None)
    }

    fn splitting(&mut self) -> Result<Option<Witness>> {
        for x in bits(self.base.winners()) {
            let id = self.id(x);
            for costs in split_schemes(self.instance.cost(x), self.cfg.max_unit_split) {
                let ids = fresh_part_ids(self.instance, &id, costs.len());
                let parts: Vec<(ProjectId, u64)> = ids.iter().cloned().zip(costs).collect();
                let p = perturb_split(self.instance, &id, &parts)?;
                let spec = self.spec.adapted_to(&p);
                let r = self.solve(&p, &spec)?;
                self.perturbations += 1;
                let won = r.winners();
                let mut hit = false;
                for part in &ids {
                    hit |= won & (1 << p.index_of(part)?) != 0;
                }
                if !hit {
                    return Ok(Some(self.witness(p, &r, Subject::Split { project: id, parts: ids })));
                }
            }
        }
        Ok(None)
    }

    fn discount(&mut self) -> Result<Option<Witness>> {
        for x in bits(self.base.winners()) {
            let c = self.instance.cost(x);
            if c < 2 {
                continue;
            }
            let p = self.instance.with_cost(&self.id(x), c - 1)?;
            let r = self.solve(&p, self.spec)?;
            self.perturbations += 1;
            if r.winners() & (1 << x) == 0 {
                return Ok(Some(self.witness(p, &r, Subject::Project(self.id(x)))));
            }
        }
        Ok(None)
    }

    fn limit(&mut self) -> Result<Option<Witness>> {
        let Some(p) = perturb_limit(self.instance)? else { return Ok(None) };
        let r = self.solve(&p, self.spec)?;
        self.perturbations += 1;
        let lost = self.base.winners() & !r.winners();
        Ok(bits(lost).next().map(|x| self.witness(p, &r, Subject::Project(self.id(x)))))
    }

    fn inclusion_max(&mut self) -> Result<Option<Witness>> {
        let inst = self.instance;
        let full = if inst.num_projects() == 64 { u64::MAX } else { (1u64 << inst.num_projects()) - 1 };
        for &s in &self.base.masks {
            let rest = full & !s;
            let mut t = rest;
            while t != 0 {
                let sup = s | t;
                if inst.mask_cost(sup) <= inst.budget() {
                    self.perturbations += 1;
                    if !self.base.contains(sup) {
                        let subject = Subject::Superset { set: inst.set_of_mask(s), superset: inst.set_of_mask(sup) };
                        return Ok(Some(self.witness(inst.clone(), &self.base, subject)));
                    }
                }
                t = (t - 1) & rest;
            }
        }
        Ok(None)
    }

    fn pro_affordability(&mut self) -> Result<Option<Witness>> {
        let inst = self.instance;
        let winners = self.base.winners();
        for x in bits(winners) {
            for y in 0..inst.num_projects() {
                let eligible = y != x
                    && inst.cost(y) < inst.cost(x)
                    && (0..inst.num_agents()).all(|a| inst.rank(a, y) <= inst.rank(a, x));
                if !eligible {
                    continue;
                }
                self.perturbations += 1;
                if winners & (1 << y) == 0 {
                    let subject = Subject::Pair { winner: self.id(x), cheaper: self.id(y) };
                    return Ok(Some(self.witness(inst.clone(), &self.base, subject)));
                }
            }
        }
        Ok(None)
    }
}

/// [`check_axiom_with`] using [`CheckConfig::default`].
pub fn check_axiom(axiom: AxiomId, spec: &RuleSpec, instance: &Instance) -> Result<Verdict> {
    check_axiom_with(axiom, spec, instance, &CheckConfig::default())
}

/// Tests `axiom` for `spec` on `instance` against every admissible
/// perturbation (sampled permutations above the configured size). Shifts
/// are only applied across strict boundaries. Returns the first violation
/// found.
pub fn check_axiom_with(axiom: AxiomId, spec: &RuleSpec, instance: &Instance, cfg: &CheckConfig) -> Result<Verdict> {
    spec.validate(instance)?;
    let base = solve_masks(instance, spec, &cfg.solve)?;
    let mut checker = Checker { axiom, spec, instance, cfg, base, perturbations: 0 };
    let found = match axiom {
        AxiomId::Anonymity => checker.anonymity()?,
        AxiomId::Neutrality => checker.neutrality()?,
        AxiomId::Consistency => checker.consistency()?,
        AxiomId::CandidateMono => checker.candidate()?,
        AxiomId::NonCrossingMono => checker.non_crossing()?,
        AxiomId::SplittingMono => checker.splitting()?,
        AxiomId::DiscountMono => checker.discount()?,
        AxiomId::LimitMono => checker.limit()?,
        AxiomId::InclusionMax => checker.inclusion_max()?,
        AxiomId::ProAffordability => checker.pro_affordability()?,
    };
    let perturbations = checker.perturbations;
    Ok(match found {
        Some(w) => Verdict { status: VerdictStatus::Violated, witness: Some(Box::new(w)), trials: 1, perturbations },
        None if perturbations == 0 && axiom != AxiomId::InclusionMax => {
            Verdict { status: VerdictStatus::NotApplicable, witness: None, trials: 0, perturbations }
        }
        None => Verdict { status: VerdictStatus::HoldsOnTrials, witness: None, trials: 1, perturbations },
    })
}
