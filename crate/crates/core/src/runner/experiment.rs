use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{run_game, RunError, Rivals};
use crate::fpl::derive_seed;
use crate::hypothesis::io::{ClassSource, LoadedClass};
use crate::learners::LearnerSpec;
use crate::nature::NatureSpec;

/// Mean and standard error of independent trial values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub trials: usize,
    pub mean: f64,
    /// Sample standard deviation over `sqrt(trials)`.
    pub se: f64,
}

pub fn summarize(values: &[f64]) -> Summary {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let se = if n < 2 {
        f64::NAN
    } else {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        (var / n as f64).sqrt()
    };
    Summary { trials: n, mean, se }
}

/// Standard errors of margin used by every statistical check.
pub const SE_MARGIN: f64 = 3.0;

/// `mean + 3·SE <= bound`.
pub fn upper_holds(s: &Summary, bound: f64) -> bool {
    s.mean + SE_MARGIN * s.se <= bound
}

/// `mean - 3·SE >= bound`.
pub fn lower_holds(s: &Summary, bound: f64) -> bool {
    s.mean - SE_MARGIN * s.se >= bound
}

/// `d + (d + 3)·ln T·√T + (2 ln n + 4)·√T`.
pub fn agnostic_bound(dim: u32, index: u64, horizon: u64) -> f64 {
    let d = f64::from(dim);
    let t = horizon as f64;
    d + (d + 3.0) * t.ln() * t.sqrt() + (2.0 * (index as f64).ln() + 4.0) * t.sqrt()
}

/// `(k + 2)·√T`.
pub fn fpl_bound(k: f64, horizon: u64) -> f64 {
    (k + 2.0) * (horizon as f64).sqrt()
}

/// `3√T / 64`.
pub fn coin_flip_lower_bound(horizon: u64) -> f64 {
    3.0 * (horizon as f64).sqrt() / 64.0
}

/// An analytic curve to compare expected regret against.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "bound", rename_all = "kebab-case")]
pub enum BoundSpec {
    /// Upper bound `(k + 2)√T` for an expert of complexity `k`.
    Fpl { k: f64 },
    /// Upper bound for a rival in component `index` of dimension `dim`.
    Agnostic { dim: u32, index: u64 },
    /// Lower bound `3√T/64`.
    CoinFlipLower,
    /// A constant upper bound.
    Constant { value: f64 },
}

impl BoundSpec {
    pub fn value(&self, horizon: u64) -> f64 {
        match self {
            BoundSpec::Fpl { k } => fpl_bound(*k, horizon),
            BoundSpec::Agnostic { dim, index } => agnostic_bound(*dim, *index, horizon),
            BoundSpec::CoinFlipLower => coin_flip_lower_bound(horizon),
            BoundSpec::Constant { value } => *value,
        }
    }

    pub fn is_lower(&self) -> bool {
        matches!(self, BoundSpec::CoinFlipLower)
    }

    pub fn holds(&self, s: &Summary, horizon: u64) -> bool {
        if self.is_lower() {
            lower_holds(s, self.value(horizon))
        } else {
            upper_holds(s, self.value(horizon))
        }
    }
}

/// The class regret is measured against.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComparatorSpec {
    pub class: ClassSource,
    /// For families: how many components to include.
    #[serde(default)]
    pub components: Option<usize>,
}

impl ComparatorSpec {
    pub fn build(&self) -> Result<Rivals, RunError> {
        match self.class.load()? {
            LoadedClass::Concept(c) => Ok(Rivals::class(&c)),
            LoadedClass::Family(f) => {
                let n = self.components.or(f.component_count()).ok_or_else(|| {
                    RunError::Config("comparing against an infinite family needs `components`".into())
                })?;
                Rivals::family(&f, n)
            }
        }
    }
}

/// A Monte-Carlo regret experiment.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub learner: LearnerSpec,
    pub nature: NatureSpec,
    pub horizons: Vec<u64>,
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    pub comparator: ComparatorSpec,
    #[serde(default)]
    pub bound: Option<BoundSpec>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), RunError> {
        if self.trials < 2 {
            return Err(RunError::Config(format!(
                "at least 2 trials are needed for a standard error, got {}",
                self.trials
            )));
        }
        if self.horizons.is_empty() || self.horizons.contains(&0) {
            return Err(RunError::Config("horizons must be a non-empty list of positive integers".into()));
        }
        Ok(())
    }
}

/// Expected regret at one horizon.
#[derive(Clone, Debug, Serialize)]
pub struct CurvePoint {
    pub horizon: u64,
    pub regret: Summary,
    pub mistakes: Summary,
    pub bound: Option<f64>,
    pub holds: Option<bool>,
}

/// Expected regret estimates across horizons.
#[derive(Clone, Debug, Serialize)]
pub struct RegretCurve {
    pub seed: u64,
    pub points: Vec<CurvePoint>,
}

impl RegretCurve {
    pub fn all_hold(&self) -> bool {
        self.points.iter().all(|p| p.holds != Some(false))
    }
}

/// Seed of trial `trial` under master seed `master`.
pub fn trial_seed(master: u64, trial: u64) -> u64 {
    derive_seed(master, trial)
}

/// Runs `trials` independent trials in parallel; trial i gets
/// [`trial_seed`]`(master, i)`.
pub fn run_trials<T, F>(trials: usize, master: u64, f: F) -> Result<Vec<T>, RunError>
where
    T: Send,
    F: Fn(u64) -> Result<T, RunError> + Sync,
{
    (0..trials as u64)
        .into_par_iter()
        .map(|i| f(trial_seed(master, i)))
        .collect()
}

/// Plays the configured game `trials` times to the largest horizon and
/// summarizes regret against the comparator at every listed horizon.
pub fn monte_carlo(config: &ExperimentConfig) -> Result<RegretCurve, RunError> {
    config.validate()?;
    let max_t = *config.horizons.iter().max().expect("validated");
    let per_trial = run_trials(config.trials, config.seed, |seed| {
        let mut learner = config.learner.build(derive_seed(seed, 1))?;
        let mut nature = config.nature.build(&config.learner, derive_seed(seed, 2))?;
        let mut rivals = config.comparator.build()?;
        let trace = run_game(learner.as_mut(), &mut nature, max_t, Some(&mut rivals))?;
        Ok(config
            .horizons
            .iter()
            .map(|&h| {
                let r = &trace.rounds[h as usize - 1];
                (
                    r.cum_mistakes as f64 - r.cum_best_rival.unwrap_or(0) as f64,
                    r.cum_mistakes as f64,
                )
            })
            .collect::<Vec<_>>())
    })?;
    let points = config
        .horizons
        .iter()
        .enumerate()
        .map(|(j, &h)| {
            let regrets: Vec<f64> = per_trial.iter().map(|v| v[j].0).collect();
            let mistakes: Vec<f64> = per_trial.iter().map(|v| v[j].1).collect();
            let regret = summarize(&regrets);
            CurvePoint {
                horizon: h,
                regret,
                mistakes: summarize(&mistakes),
                bound: config.bound.as_ref().map(|b| b.value(h)),
                holds: config.bound.as_ref().map(|b| b.holds(&regret, h)),
            }
        })
        .collect();
    Ok(RegretCurve {
        seed: config.seed,
        points,
    })
}
