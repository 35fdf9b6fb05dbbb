//! Game loop, regret accounting, Monte-Carlo experiments and the bound
//! verification suite.

mod checks;
mod experiment;
mod game;

pub use checks::{verify_bounds, Check, ExperimentReport, Fault, Suite, Verdict, VerifyOptions};
pub use experiment::{
    agnostic_bound, coin_flip_lower_bound, fpl_bound, lower_holds, monte_carlo, run_trials, summarize, trial_seed,
    upper_holds, BoundSpec, ComparatorSpec, CurvePoint, ExperimentConfig, RegretCurve, Summary, SE_MARGIN,
};
pub use game::{regret, run_game, GameTrace, Rivals, RoundRecord};

use crate::hypothesis::io::LoadError;
use crate::hypothesis::{ClassError, FamilyError};
use crate::learners::LearnerError;
use crate::nature::NatureError;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("round {round}: learner failed")]
    Learner {
        round: u64,
        #[source]
        source: LearnerError,
    },
    #[error("round {round}: nature failed")]
    Nature {
        round: u64,
        #[source]
        source: NatureError,
    },
    #[error("round {round}: comparison class failed")]
    Rival {
        round: u64,
        #[source]
        source: ClassError,
    },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Setup(#[from] LearnerError),
    #[error(transparent)]
    NatureSetup(#[from] NatureError),
}
