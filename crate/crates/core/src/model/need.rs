use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::error::{PbError, Result};
use crate::model::{BudgetSet, Instance, WeakRanking};

/// The need `λ`, an exact positive rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NeedParameter(Ratio<u64>);

impl NeedParameter {
    pub fn new(numer: u64, denom: u64) -> Result<Self> {
        if denom == 0 {
            return Err(PbError::InvalidNeed("zero denominator".into()));
        }
        if numer == 0 {
            return Err(PbError::InvalidNeed("need must be positive".into()));
        }
        Ok(NeedParameter(Ratio::new(numer, denom)))
    }

    pub fn integer(value: u64) -> Result<Self> {
        NeedParameter::new(value, 1)
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    /// `⌈λ⌉`. For integral costs `c ≥ λ ⟺ c ≥ ⌈λ⌉`, which is how every
    /// comparison against the need is carried out.
    pub fn threshold(&self) -> u64 {
        self.0.ceil().to_integer()
    }

    /// Exact test `amount ≥ λ`.
    pub fn is_met_by(&self, amount: u64) -> bool {
        amount as u128 * self.denom() as u128 >= self.numer() as u128
    }

    /// Checks `0 < λ ≤ L`.
    pub fn validate_for(&self, instance: &Instance) -> Result<()> {
        if !self.is_met_by(instance.budget()) {
            return Err(PbError::InvalidNeed(format!("need {self} exceeds the budget {}", instance.budget())));
        }
        Ok(())
    }
}

impl fmt::Display for NeedParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl FromStr for NeedParameter {
    type Err = PbError;

    /// Accepts `p/q` or an integer literal.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || PbError::InvalidNeed(format!("cannot parse `{s}` as p/q"));
        match s.trim().split_once('/') {
            Some((p, q)) => {
                let p = p.trim().parse().map_err(|_| bad())?;
                let q = q.trim().parse().map_err(|_| bad())?;
                NeedParameter::new(p, q)
            }
            None => NeedParameter::integer(s.trim().parse().map_err(|_| bad())?),
        }
    }
}

impl Serialize for NeedParameter {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// `t_i(λ, S)`: the smallest rank `j` such that the members of `s` ranked at
/// most `j` by `ranking` cost at least `λ`, or `m + 1` when `c(S) < λ`.
/// Here `m` is the number of projects of `instance`.
pub fn disutility_t(ranking: &WeakRanking, instance: &Instance, lambda: NeedParameter, s: &BudgetSet) -> Result<usize> {
    for id in s.iter() {
        instance.index_of(id)?;
    }
    let mut covered = 0u64;
    for (k, class) in ranking.classes().iter().enumerate() {
        for id in class {
            if s.contains(id) {
                covered += instance.cost_by_id(id)?;
            }
        }
        if lambda.is_met_by(covered) {
            return Ok(k + 1);
        }
    }
    Ok(instance.num_projects() + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Project;

    fn need_example() -> Instance {
        Instance::new(
            vec![
                Project::new("a1", 4),
                Project::new("a2", 2),
                Project::new("a3", 5),
                Project::new("a4", 3),
                Project::new("a5", 2),
            ],
            12,
            vec!["a1 > {a2,a4} > a3 > a5".parse().unwrap(), "{a3,a4} > a1 > a5 > a2".parse().unwrap()],
        )
        .unwrap()
    }

    fn set(v: &[&str]) -> BudgetSet {
        v.iter().copied().collect()
    }

    #[test]
    fn need_example_values() {
        let inst = need_example();
        let lambda = NeedParameter::integer(7).unwrap();
        let s1 = set(&["a1", "a2", "a3"]);
        let s2 = set(&["a1", "a3", "a4"]);
        assert_eq!(disutility_t(&inst.profile()[1], &inst, lambda, &s1).unwrap(), 2);
        assert_eq!(disutility_t(&inst.profile()[0], &inst, lambda, &s1).unwrap(), 3);
        assert_eq!(disutility_t(&inst.profile()[0], &inst, lambda, &s2).unwrap(), 2);
        assert_eq!(disutility_t(&inst.profile()[1], &inst, lambda, &s2).unwrap(), 1);
    }

    #[test]
    fn empty_set_gets_m_plus_one() {
        let inst = need_example();
        let lambda = NeedParameter::new(1, 3).unwrap();
        for r in inst.profile() {
            assert_eq!(disutility_t(r, &inst, lambda, &BudgetSet::new()).unwrap(), 6);
        }
    }

    #[test]
    fn fractional_need_compares_exactly() {
        let lambda: NeedParameter = "13/2".parse().unwrap();
        assert!(!lambda.is_met_by(6));
        assert!(lambda.is_met_by(7));
        assert_eq!(lambda.threshold(), 7);
        assert_eq!("4".parse::<NeedParameter>().unwrap().threshold(), 4);
        assert_eq!("8/2".parse::<NeedParameter>().unwrap().to_string(), "4");
    }

    #[test]
    fn need_validation() {
        assert!(NeedParameter::new(0, 1).is_err());
        assert!(NeedParameter::new(1, 0).is_err());
        assert!("x/2".parse::<NeedParameter>().is_err());
        let inst = need_example();
        assert!(NeedParameter::integer(12).unwrap().validate_for(&inst).is_ok());
        assert!("25/2".parse::<NeedParameter>().unwrap().validate_for(&inst).is_err());
    }
}
