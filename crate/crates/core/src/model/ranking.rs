use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{PbError, Result};
use crate::model::ProjectId;

/// A complete weak order, stored as an ordered partition into indifference
/// classes. Class `0` holds the rank-1 projects.
///
/// Members inside a class are kept sorted, so two rankings describing the same
/// weak order compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeakRanking {
    classes: Vec<Vec<ProjectId>>,
}

impl WeakRanking {
    /// Builds a ranking from its classes, best first. Classes must be
    /// non-empty and pairwise disjoint. Completeness is checked by
    /// [`Instance`](crate::model::Instance), which knows the project set.
    pub fn new<I, C, P>(classes: I) -> Result<Self>
    where
        I: IntoIterator<Item = C>,
        C: IntoIterator<Item = P>,
        P: Into<ProjectId>,
    {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for class in classes {
            let mut members: Vec<ProjectId> = class.into_iter().map(Into::into).collect();
            if members.is_empty() {
                return Err(PbError::MalformedRanking("empty indifference class".into()));
            }
            members.sort();
            for id in &members {
                if !seen.insert(id.clone()) {
                    return Err(PbError::MalformedRanking(format!("project `{id}` appears more than once")));
                }
            }
            out.push(members);
        }
        Ok(WeakRanking { classes: out })
    }

    /// A strict ranking: every class is a singleton.
    pub fn strict<I, P>(order: I) -> Result<Self>
    where
        I: IntoIterator<Item = P>,
        P: Into<ProjectId>,
    {
        WeakRanking::new(order.into_iter().map(|p| [p]))
    }

    pub fn classes(&self) -> &[Vec<ProjectId>] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn is_strict(&self) -> bool {
        self.classes.iter().all(|c| c.len() == 1)
    }

    /// Every project mentioned by the ranking, best class first.
    pub fn projects(&self) -> impl Iterator<Item = &ProjectId> {
        self.classes.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.classes.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// 1-based rank of `project`, i.e. the index of its class plus one.
    pub fn rank_of(&self, project: &ProjectId) -> Result<usize> {
        self.classes
            .iter()
            .position(|c| c.binary_search(project).is_ok())
            .map(|i| i + 1)
            .ok_or_else(|| PbError::UnknownProject(project.clone()))
    }

    /// Union of the first `j` classes. Values of `j` past the number of
    /// classes saturate to the full project set.
    pub fn prefix_set(&self, j: usize) -> Result<BTreeSet<ProjectId>> {
        if j < 1 {
            return Err(PbError::Precondition("prefix length must be at least 1".into()));
        }
        Ok(self.classes.iter().take(j).flatten().cloned().collect())
    }

    pub(crate) fn from_classes_unchecked(classes: Vec<Vec<ProjectId>>) -> Self {
        WeakRanking { classes }
    }
}

impl fmt::Display for WeakRanking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, class) in self.classes.iter().enumerate() {
            if k > 0 {
                f.write_str(" > ")?;
            }
            if class.len() == 1 {
                write!(f, "{}", class[0])?;
            } else {
                f.write_str("{")?;
                for (i, id) in class.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{id}")?;
                }
                f.write_str("}")?;
            }
        }
        Ok(())
    }
}

pub(crate) fn valid_id(tok: &str) -> bool {
    !tok.is_empty() && tok.chars().all(|c| !c.is_whitespace() && !matches!(c, '{' | '}' | ',' | '>' | '#'))
}

impl FromStr for WeakRanking {
    type Err = PbError;

    /// Parses `a1 > {a2,a3} > a4`.
    fn from_str(s: &str) -> Result<Self> {
        let mut classes = Vec::new();
        for part in s.split('>') {
            let part = part.trim();
            if part.is_empty() {
                return Err(PbError::MalformedRanking("empty class between `>`".into()));
            }
            if let Some(inner) = part.strip_prefix('{') {
                let inner = inner
                    .strip_suffix('}')
                    .ok_or_else(|| PbError::MalformedRanking(format!("unclosed class `{part}`")))?;
                let mut members = Vec::new();
                for tok in inner.split(',') {
                    let tok = tok.trim();
                    if !valid_id(tok) {
                        return Err(PbError::MalformedRanking(format!("bad project id `{tok}` in class `{part}`")));
                    }
                    members.push(ProjectId::from(tok));
                }
                classes.push(members);
            } else if valid_id(part) {
                classes.push(vec![ProjectId::from(part)]);
            } else {
                return Err(PbError::MalformedRanking(format!("malformed class `{part}`")));
            }
        }
        WeakRanking::new(classes)
    }
}
