use serde::{Deserialize, Serialize};

use super::cover::DEFAULT_COVER_SEARCH;
use super::{
    Aggregator, ConstantLearner, CoverLearner, CoverSpec, EmptyPolicy, Expert, ExpertKey, Learner, LearnerError, Soa,
    ThresholdSimple, UpdateRule,
};
use crate::fpl::{AgnosticFpl, AgnosticOptions, ComplexityAssignment, FplLearner, Redraw};
use crate::hypothesis::io::{ClassSource, HypothesisDef};
use crate::hypothesis::ClassError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Enumeration {
    RationalThresholds,
    NaturalThresholds,
}

/// `{"hypotheses": [...]}` or `{"enumeration": "rational-thresholds"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoverDef {
    List { hypotheses: Vec<HypothesisDef> },
    Enumerated { enumeration: Enumeration },
}

impl CoverDef {
    pub fn build(&self) -> Result<CoverSpec, LearnerError> {
        Ok(match self {
            CoverDef::List { hypotheses } => {
                CoverSpec::List(hypotheses.iter().map(|h| h.build()).collect::<Result<_, _>>()?)
            }
            CoverDef::Enumerated {
                enumeration: Enumeration::RationalThresholds,
            } => CoverSpec::RationalThresholds,
            CoverDef::Enumerated {
                enumeration: Enumeration::NaturalThresholds,
            } => CoverSpec::NaturalThresholds,
        })
    }
}

fn keep() -> EmptyPolicy {
    EmptyPolicy::Keep
}

fn default_cap_d() -> u32 {
    AgnosticOptions::default().cap_d
}

fn default_cap_t() -> u64 {
    AgnosticOptions::default().cap_t
}

/// A learner description, e.g. `{"learner": "soa", "class": "classes/full3.json"}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "learner", rename_all = "kebab-case")]
pub enum LearnerSpec {
    Soa {
        class: ClassSource,
        #[serde(default)]
        update: UpdateRule,
        #[serde(default)]
        empty: EmptyPolicy,
    },
    Expert {
        class: ClassSource,
        key: ExpertKey,
        #[serde(default = "keep")]
        empty: EmptyPolicy,
    },
    Aggregator {
        family: ClassSource,
    },
    Cover {
        cover: CoverDef,
        #[serde(default)]
        search_limit: Option<u64>,
    },
    ThresholdSimple,
    Constant {
        label: u8,
    },
    Fpl {
        experts: Vec<HypothesisDef>,
        /// Defaults to `2(ln n + 1)` for the n-th expert.
        #[serde(default)]
        complexities: Option<Vec<f64>>,
        #[serde(default)]
        redraw: Redraw,
        #[serde(default)]
        seed: Option<u64>,
    },
    AgnosticFpl {
        family: ClassSource,
        #[serde(default)]
        redraw: Redraw,
        #[serde(default)]
        components: Option<usize>,
        #[serde(default)]
        seed: Option<u64>,
        #[serde(default = "default_cap_d")]
        cap_d: u32,
        #[serde(default = "default_cap_t", rename = "cap_T")]
        cap_t: u64,
    },
}

impl LearnerSpec {
    pub fn is_deterministic(&self) -> bool {
        !matches!(self, LearnerSpec::Fpl { .. } | LearnerSpec::AgnosticFpl { .. })
    }

    /// Builds a fresh learner. `seed` is used by randomized learners unless
    /// the spec pins its own.
    pub fn build(&self, seed: u64) -> Result<Box<dyn Learner>, LearnerError> {
        Ok(match self {
            LearnerSpec::Soa { class, update, empty } => {
                Box::new(Soa::with_options(&class.load()?.into_concept()?, *update, *empty))
            }
            LearnerSpec::Expert { class, key, empty } => {
                Box::new(Expert::new(&class.load()?.into_concept()?, key.clone(), *empty))
            }
            LearnerSpec::Aggregator { family } => Box::new(Aggregator::new(family.load()?.into_family()?)?),
            LearnerSpec::Cover { cover, search_limit } => Box::new(CoverLearner::with_limit(
                cover.build()?,
                search_limit.unwrap_or(DEFAULT_COVER_SEARCH),
            )?),
            LearnerSpec::ThresholdSimple => Box::new(ThresholdSimple::new()),
            LearnerSpec::Constant { label } if *label <= 1 => Box::new(ConstantLearner::new(*label == 1)),
            LearnerSpec::Constant { label } => return Err(ClassError::NotBinary(*label).into()),
            LearnerSpec::Fpl {
                experts,
                complexities,
                redraw,
                seed: pinned,
            } => {
                let experts = experts.iter().map(|h| h.build()).collect::<Result<Vec<_>, _>>()?;
                let k = match complexities {
                    Some(k) => ComplexityAssignment::Explicit(k.clone()),
                    None => ComplexityAssignment::Meta,
                };
                Box::new(FplLearner::new(experts, &k, *redraw, pinned.unwrap_or(seed))?)
            }
            LearnerSpec::AgnosticFpl {
                family,
                redraw,
                components,
                seed: pinned,
                cap_d,
                cap_t,
            } => {
                let options = AgnosticOptions {
                    redraw: *redraw,
                    components: *components,
                    cap_d: *cap_d,
                    cap_t: *cap_t,
                };
                Box::new(AgnosticFpl::new(
                    &family.load()?.into_family()?,
                    &options,
                    pinned.unwrap_or(seed),
                )?)
            }
        })
    }
}
