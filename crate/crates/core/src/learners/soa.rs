use serde::{Deserialize, Serialize};

use super::{Learner, LearnerError};
use crate::hypothesis::{ConceptClass, Point};
use crate::littlestone::VersionSpace;

/// When SOA shrinks its version space.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UpdateRule {
    /// Only after a mistake.
    #[default]
    OnMistake,
    /// After every round, as in the textbook algorithm.
    Always,
}

/// What to do when an update would leave no consistent hypothesis.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmptyPolicy {
    /// Fail with the offending round.
    #[default]
    Error,
    /// Skip the update.
    Keep,
    /// Restart from the whole class, restricted by the current example when
    /// that is possible.
    Reset,
}

/// SOA's label on `x`: the restriction with the larger Ldim, 0 on ties, and
/// never a label whose restriction is empty unless both are.
pub fn soa_label(space: &VersionSpace, x: &Point) -> Result<(bool, VersionSpace, VersionSpace), LearnerError> {
    let zero = space.restrict(x, false)?;
    let one = space.restrict(x, true)?;
    let label = match (zero.is_empty(), one.is_empty()) {
        (_, true) => false,
        (true, false) => true,
        (false, false) => one.ldim()? > zero.ldim()?,
    };
    Ok((label, zero, one))
}

#[derive(Clone, Debug)]
struct Pending {
    x: Point,
    label: bool,
    zero: VersionSpace,
    one: VersionSpace,
}

/// Shared version-space machinery of SOA and Expert.
#[derive(Clone, Debug)]
struct SpaceLearner {
    root: VersionSpace,
    space: VersionSpace,
    empty: EmptyPolicy,
    round: u64,
    mistakes: u64,
    pending: Option<Pending>,
}

impl SpaceLearner {
    fn new(class: &ConceptClass, empty: EmptyPolicy) -> Self {
        let root = VersionSpace::new(class);
        Self {
            space: root.clone(),
            root,
            empty,
            round: 0,
            mistakes: 0,
            pending: None,
        }
    }

    fn predict(&mut self, x: &Point) -> Result<bool, LearnerError> {
        if let Some(p) = &self.pending {
            if &p.x == x {
                return Ok(p.label);
            }
        }
        let (label, zero, one) = soa_label(&self.space, x)?;
        self.pending = Some(Pending {
            x: x.clone(),
            label,
            zero,
            one,
        });
        Ok(label)
    }

    /// Counts the round and returns whether it was a mistake, leaving the
    /// candidate restriction in `pending` for [`SpaceLearner::update`].
    fn score(&mut self, x: &Point, y: bool) -> Result<bool, LearnerError> {
        let label = self.predict(x)?;
        self.round += 1;
        let mistake = label != y;
        if mistake {
            self.mistakes += 1;
        }
        Ok(mistake)
    }

    fn update(&mut self, x: &Point, y: bool, apply: bool) -> Result<(), LearnerError> {
        let pending = self.pending.take().expect("scored before update");
        if !apply {
            return Ok(());
        }
        let next = if y { pending.one } else { pending.zero };
        if !next.is_empty() {
            self.space = next;
            return Ok(());
        }
        match self.empty {
            EmptyPolicy::Error => Err(LearnerError::EmptyVersionSpace { round: self.round }),
            EmptyPolicy::Keep => Ok(()),
            EmptyPolicy::Reset => {
                let fresh = self.root.restrict(x, y)?;
                self.space = if fresh.is_empty() { self.root.clone() } else { fresh };
                Ok(())
            }
        }
    }
}

/// The Standard Optimal Algorithm over a single class.
#[derive(Clone, Debug)]
pub struct Soa {
    inner: SpaceLearner,
    rule: UpdateRule,
}

impl Soa {
    pub fn new(class: &ConceptClass) -> Self {
        Self::with_options(class, UpdateRule::OnMistake, EmptyPolicy::Error)
    }

    pub fn with_options(class: &ConceptClass, rule: UpdateRule, empty: EmptyPolicy) -> Self {
        Self {
            inner: SpaceLearner::new(class, empty),
            rule,
        }
    }

    pub fn version_space(&self) -> &VersionSpace {
        &self.inner.space
    }
}

impl Learner for Soa {
    fn predict(&mut self, x: &Point) -> Result<bool, LearnerError> {
        self.inner.predict(x)
    }

    fn absorb(&mut self, x: &Point, y: bool) -> Result<(), LearnerError> {
        let mistake = self.inner.score(x, y)?;
        let apply = mistake || self.rule == UpdateRule::Always;
        self.inner.update(x, y, apply)
    }

    fn mistakes(&self) -> u64 {
        self.inner.mistakes
    }

    fn name(&self) -> String {
        match self.rule {
            UpdateRule::OnMistake => "soa".into(),
            UpdateRule::Always => "soa-always".into(),
        }
    }
}

/// Strictly increasing round indices `i_1 < ... < i_L`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct ExpertKey(Vec<u64>);

impl ExpertKey {
    pub fn new(indices: Vec<u64>) -> Result<Self, LearnerError> {
        let ok = indices.first().is_none_or(|&i| i >= 1) && indices.windows(2).all(|w| w[0] < w[1]);
        if ok {
            Ok(Self(indices))
        } else {
            Err(LearnerError::BadKey(indices))
        }
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn indices(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<u64> {
        self.0.last().copied()
    }

    pub fn contains(&self, t: u64) -> bool {
        self.0.binary_search(&t).is_ok()
    }
}

impl TryFrom<Vec<u64>> for ExpertKey {
    type Error = LearnerError;

    fn try_from(v: Vec<u64>) -> Result<Self, Self::Error> {
        Self::new(v)
    }
}

impl From<ExpertKey> for Vec<u64> {
    fn from(k: ExpertKey) -> Self {
        k.0
    }
}

/// SOA that only updates on mistaken rounds listed in its key.
#[derive(Clone, Debug)]
pub struct Expert {
    inner: SpaceLearner,
    key: ExpertKey,
}

impl Expert {
    pub fn new(class: &ConceptClass, key: ExpertKey, empty: EmptyPolicy) -> Self {
        Self {
            inner: SpaceLearner::new(class, empty),
            key,
        }
    }

    pub fn key(&self) -> &ExpertKey {
        &self.key
    }

    pub fn version_space(&self) -> &VersionSpace {
        &self.inner.space
    }
}

impl Learner for Expert {
    fn predict(&mut self, x: &Point) -> Result<bool, LearnerError> {
        self.inner.predict(x)
    }

    fn absorb(&mut self, x: &Point, y: bool) -> Result<(), LearnerError> {
        let mistake = self.inner.score(x, y)?;
        let apply = mistake && self.key.contains(self.inner.round);
        self.inner.update(x, y, apply)
    }

    fn mistakes(&self) -> u64 {
        self.inner.mistakes
    }

    fn name(&self) -> String {
        format!("expert{:?}", self.key.indices())
    }
}
