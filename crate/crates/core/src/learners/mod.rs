//! Realizable-setting learners behind a single observe / predict / reveal
//! protocol.

mod aggregator;
mod cover;
mod simple;
mod soa;
mod spec;

pub use aggregator::Aggregator;
pub use cover::{CoverLearner, CoverSpec};
pub use simple::{ConstantLearner, ThresholdSimple};
pub use soa::{soa_label, EmptyPolicy, Expert, ExpertKey, Soa, UpdateRule};
pub use spec::{CoverDef, Enumeration, LearnerSpec};

use crate::fpl::FplError;
use crate::hypothesis::io::LoadError;
use crate::hypothesis::{ClassError, FamilyError, Point};
use crate::littlestone::LittlestoneError;

#[derive(Debug, thiserror::Error)]
pub enum LearnerError {
    #[error("round {round}: no hypothesis is consistent with the labels seen so far")]
    EmptyVersionSpace { round: u64 },
    #[error("round {round}: every cover hypothesis has been eliminated")]
    Uncovered { round: u64 },
    #[error("round {round}: labels are inconsistent with every threshold")]
    Inconsistent { round: u64 },
    #[error("invalid expert key {0:?}: indices must be positive and strictly increasing")]
    BadKey(Vec<u64>),
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Littlestone(#[from] LittlestoneError),
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Fpl(#[from] FplError),
}

/// An online learner. Each round the caller presents a point with
/// [`predict`](Learner::predict) and then reveals its label with
/// [`absorb`](Learner::absorb). Calling `predict` twice on the same point
/// before `absorb` returns the same answer.
pub trait Learner: Send {
    fn predict(&mut self, x: &Point) -> Result<bool, LearnerError>;

    /// Records the label of the point just predicted. Absorbing a point that
    /// was never predicted computes the prediction first.
    fn absorb(&mut self, x: &Point, y: bool) -> Result<(), LearnerError>;

    fn mistakes(&self) -> u64;

    fn is_deterministic(&self) -> bool {
        true
    }

    fn name(&self) -> String;
}
