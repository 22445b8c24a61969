//! Randomized counterexample search.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::axioms::{check_axiom_with, AxiomId, CheckConfig, Verdict, VerdictStatus};
use crate::error::Result;
use crate::layers::WorthVector;
use crate::model::{Instance, NeedParameter, Project, ProjectId, WeakRanking};
use crate::rules::{RuleSpec, UtilityFunction};

/// Constraint on sampled worth vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaCondition {
    Any,
    /// `α(1) = α(m)`
    Flat,
    /// `α(1) ≠ α(m)`
    NotFlat,
    /// `α(1) < α(m) + 2`
    GapBelowTwo,
    /// `α(1) ≥ α(m) + 2`
    GapAtLeastTwo,
    /// `α(1) ≤ 1`
    FirstAtMostOne,
    /// `α(1) > 1`
    FirstAboveOne,
}

impl AlphaCondition {
    pub fn holds(self, alpha: &WorthVector) -> bool {
        let (first, last) = (alpha.first(), alpha.last());
        match self {
            AlphaCondition::Any => true,
            AlphaCondition::Flat => first == last,
            AlphaCondition::NotFlat => first != last,
            AlphaCondition::GapBelowTwo => first < last + 2,
            AlphaCondition::GapAtLeastTwo => first >= last + 2,
            AlphaCondition::FirstAtMostOne => first <= 1,
            AlphaCondition::FirstAboveOne => first > 1,
        }
    }
}

/// Range of the need parameter relative to the budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaRange {
    /// `(0, 1]`
    UpToOne,
    /// `(1, L-1]`
    Middle,
    /// `(L-1, L]`
    Top,
}

impl LambdaRange {
    pub fn contains(self, lambda: NeedParameter, budget: u64) -> bool {
        let (p, q) = (lambda.numer() as u128, lambda.denom() as u128);
        let l = budget as u128;
        match self {
            LambdaRange::UpToOne => p <= q,
            LambdaRange::Middle => p > q && p + q <= q * l,
            LambdaRange::Top => p + q > q * l && p <= q * l,
        }
    }
}

/// Which rules to draw for each sampled instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RuleFamily {
    /// One rule; cost-worthy vectors are refitted to each instance.
    Fixed(RuleSpec),
    Greedy(UtilityFunction),
    CostWorthy(UtilityFunction, AlphaCondition),
    NeedBased(LambdaRange),
}

/// Bounds for random instances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorConfig {
    pub max_projects: usize,
    pub max_agents: usize,
    /// Costs are uniform in `[1, max_cost]`.
    pub max_cost: u64,
    /// Probability that an instance uses strict rankings only; otherwise
    /// rankings are uniform weak orders.
    pub strict_share: f64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig { max_projects: 8, max_agents: 5, max_cost: 10, strict_share: 0.5 }
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Number of weak orders on `n` items, for `0..=n`.
fn ordered_bell(n: usize) -> Vec<u128> {
    let mut a = vec![1u128; n + 1];
    for k in 1..=n {
        a[k] = (1..=k).map(|j| binomial(k, j) * a[k - j]).sum();
    }
    a
}

/// A weak order drawn uniformly among all weak orders on `ids`: the size
/// of the top class is drawn with weight `C(n, j) · a(n - j)`, its members
/// uniformly, and the rest recursively.
pub fn random_weak_ranking<R: Rng>(rng: &mut R, ids: &[ProjectId]) -> WeakRanking {
    let mut rest: Vec<ProjectId> = ids.to_vec();
    let a = ordered_bell(rest.len());
    let mut classes = Vec::new();
    while !rest.is_empty() {
        let n = rest.len();
        let mut pick = rng.gen_range(0..a[n]);
        let mut size = n;
        for j in 1..=n {
            let w = binomial(n, j) * a[n - j];
            if pick < w {
                size = j;
                break;
            }
            pick -= w;
        }
        rest.shuffle(rng);
        let class: Vec<ProjectId> = rest.drain(..size).collect();
        classes.push(class);
    }
    WeakRanking::new(classes).expect("classes partition the ids")
}

/// Uniform costs, uniform budget in `[1, Σc]`, and either uniform weak
/// orders or uniform strict orders.
pub fn random_instance<R: Rng>(rng: &mut R, cfg: &GeneratorConfig) -> Instance {
    let m = rng.gen_range(1..=cfg.max_projects.max(1));
    let n = rng.gen_range(1..=cfg.max_agents.max(1));
    let projects: Vec<Project> =
        (1..=m).map(|i| Project::new(format!("a{i}"), rng.gen_range(1..=cfg.max_cost.max(1)))).collect();
    let total: u64 = projects.iter().map(|p| p.cost).sum();
    let budget = rng.gen_range(1..=total);
    let ids: Vec<ProjectId> = projects.iter().map(|p| p.id.clone()).collect();
    let strict = rng.gen_bool(cfg.strict_share.clamp(0.0, 1.0));
    let profile = (0..n)
        .map(|_| {
            if strict {
                let mut order = ids.clone();
                order.shuffle(rng);
                WeakRanking::strict(order).expect("distinct ids")
            } else {
                random_weak_ranking(rng, &ids)
            }
        })
        .collect();
    Instance::new(projects, budget, profile).expect("generated instance is valid")
}

fn random_alpha<R: Rng>(rng: &mut R, m: usize, budget: u64, cond: AlphaCondition) -> Option<WorthVector> {
    let (lo, hi) = match cond {
        AlphaCondition::FirstAtMostOne => (0, budget.min(1)),
        AlphaCondition::NotFlat => (1, budget),
        AlphaCondition::GapAtLeastTwo | AlphaCondition::FirstAboveOne => (2, budget),
        _ => (0, budget),
    };
    if lo > hi {
        return None;
    }
    let first = rng.gen_range(lo..=hi);
    let last = match cond {
        AlphaCondition::Flat => first,
        AlphaCondition::NotFlat => rng.gen_range(0..first),
        AlphaCondition::GapBelowTwo => rng.gen_range(first.saturating_sub(1)..=first),
        AlphaCondition::GapAtLeastTwo => rng.gen_range(0..=first - 2),
        _ => rng.gen_range(0..=first),
    };
    let mut entries = vec![first];
    let mut middle: Vec<u64> = (0..m.saturating_sub(2)).map(|_| rng.gen_range(last..=first)).collect();
    middle.sort_unstable_by(|a, b| b.cmp(a));
    entries.extend(middle);
    if m >= 2 {
        entries.push(last);
    }
    let alpha = WorthVector::new(entries).ok()?;
    cond.holds(&alpha).then_some(alpha)
}

fn random_lambda<R: Rng>(rng: &mut R, budget: u64, range: LambdaRange) -> Option<NeedParameter> {
    let q: u64 = rng.gen_range(1..=4);
    let (lo, hi) = match range {
        LambdaRange::UpToOne => (1, q),
        LambdaRange::Middle => (q + 1, q * budget.checked_sub(1)?),
        LambdaRange::Top => (q * budget.checked_sub(1)? + 1, q * budget),
    };
    if lo > hi {
        return None;
    }
    NeedParameter::new(rng.gen_range(lo..=hi), q).ok()
}

/// A rule of `family` valid for `instance`, or `None` when the family's
/// parameter range is empty at this budget and size.
pub fn sample_spec<R: Rng>(rng: &mut R, family: &RuleFamily, instance: &Instance) -> Option<RuleSpec> {
    let spec = match family {
        RuleFamily::Fixed(spec) => spec.adapted_to(instance),
        RuleFamily::Greedy(f) => RuleSpec::greedy(*f),
        RuleFamily::CostWorthy(f, cond) => {
            RuleSpec::cost_worthy(*f, random_alpha(rng, instance.num_projects(), instance.budget(), *cond)?)
        }
        RuleFamily::NeedBased(range) => RuleSpec::need_based(random_lambda(rng, instance.budget(), *range)?),
    };
    spec.validate(instance).ok().map(|_| spec)
}

/// [`search_counterexample_with`] using [`CheckConfig::light`].
pub fn search_counterexample(
    axiom: AxiomId,
    family: &RuleFamily,
    gen: &GeneratorConfig,
    trials: u64,
    seed: u64,
) -> Result<Verdict> {
    search_counterexample_with(axiom, family, gen, trials, seed, &CheckConfig::light())
}

/// Draws random instances and rules until `trials` of them admit a check of
/// `axiom`, stopping at the first violation. Instances on which the axiom
/// is not applicable do not count; at most `100 · trials + 1000` draws are
/// made. Deterministic for a given seed.
pub fn search_counterexample_with(
    axiom: AxiomId,
    family: &RuleFamily,
    gen: &GeneratorConfig,
    trials: u64,
    seed: u64,
    check: &CheckConfig,
) -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0u64;
    let mut perturbations = 0u64;
    let max_draws = trials.saturating_mul(100).saturating_add(1000);
    let mut draws = 0u64;
    while done < trials && draws < max_draws {
        draws += 1;
        let instance = random_instance(&mut rng, gen);
        let Some(spec) = sample_spec(&mut rng, family, &instance) else { continue };
        let cfg = CheckConfig { seed: rng.gen(), ..*check };
        let verdict = check_axiom_with(axiom, &spec, &instance, &cfg)?;
        perturbations += verdict.perturbations;
        match verdict.status {
            VerdictStatus::NotApplicable => continue,
            VerdictStatus::HoldsOnTrials => done += 1,
            VerdictStatus::Violated => {
                return Ok(Verdict { trials: done + 1, perturbations, ..verdict });
            }
        }
    }
    Ok(Verdict { status: VerdictStatus::HoldsOnTrials, witness: None, trials: done, perturbations })
}
