//! Nature's side of the protocol: realizable streams, shattered-tree and
//! window-halving adversaries, iid sources and coin flips.

mod adversary;
mod window;

pub use adversary::{commit_adversary, commit_against, mistake_seeking_script, soa_worst_case, TreeAdversary};
pub use window::{ThresholdWindow, WindowHalving};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::fpl::derive_seed;
use crate::hypothesis::io::{ClassSource, HypothesisDef, LoadError, MeasureDef};
use crate::hypothesis::{ClassError, Hypothesis, MeasureSampler, Point};
use crate::learners::{LearnerError, LearnerSpec};
use crate::littlestone::LittlestoneError;

#[derive(Debug, thiserror::Error)]
pub enum NatureError {
    #[error("round {round}: the strategy has no more points")]
    Exhausted { round: u64 },
    #[error("scripted labels: {points} points but {labels} labels")]
    ScriptLength { points: usize, labels: usize },
    #[error("the class is empty")]
    EmptyClass,
    #[error("the class has Ldim 0; there is nothing to force")]
    NothingToForce,
    #[error("{0}")]
    Unsupported(String),
    #[error("{0}")]
    Inconsistent(String),
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error(transparent)]
    Littlestone(#[from] LittlestoneError),
    #[error(transparent)]
    Learner(#[from] LearnerError),
    #[error(transparent)]
    Load(#[from] LoadError),
}

/// Where scripted labels come from.
#[derive(Clone, Debug)]
pub enum Labels {
    /// Realizable: `y = h*(x)`.
    Target(Hypothesis),
    /// Arbitrary labels, one per scripted point.
    Fixed(Vec<bool>),
}

/// A fixed point sequence, optionally repeated.
#[derive(Clone, Debug)]
pub struct Scripted {
    xs: Vec<Point>,
    labels: Labels,
    cycle: bool,
    pos: usize,
}

impl Scripted {
    pub fn new(xs: Vec<Point>, labels: Labels, cycle: bool) -> Self {
        Self { xs, labels, cycle, pos: 0 }
    }

    pub fn points(&self) -> &[Point] {
        &self.xs
    }

    pub fn labels(&self) -> &Labels {
        &self.labels
    }
}

/// Nature's strategy for one game.
#[derive(Clone, Debug)]
pub enum NatureStrategy {
    Scripted(Scripted),
    Tree(TreeAdversary),
    Iid { sampler: MeasureSampler, target: Hypothesis },
    WindowHalving(WindowHalving),
    CoinFlip { point: Point, rng: ChaCha8Rng },
}

impl NatureStrategy {
    pub fn coin_flip(point: Point, seed: u64) -> Self {
        NatureStrategy::CoinFlip {
            point,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// The point for round `round` (1-based).
    pub fn next_point(&mut self, round: u64) -> Result<Point, NatureError> {
        match self {
            NatureStrategy::Scripted(s) => {
                if s.pos >= s.xs.len() {
                    if !s.cycle || s.xs.is_empty() {
                        return Err(NatureError::Exhausted { round });
                    }
                    s.pos = 0;
                }
                Ok(s.xs[s.pos].clone())
            }
            NatureStrategy::Tree(t) => t.next_point(),
            NatureStrategy::Iid { sampler, .. } => Ok(sampler.next_point()),
            NatureStrategy::WindowHalving(w) => w.next_point().ok_or(NatureError::Exhausted { round }),
            NatureStrategy::CoinFlip { point, .. } => Ok(point.clone()),
        }
    }

    /// The label of the point just issued, after the learner predicted `yhat`.
    pub fn reveal_label(&mut self, x: &Point, yhat: bool) -> Result<bool, NatureError> {
        match self {
            NatureStrategy::Scripted(s) => {
                let y = match &s.labels {
                    Labels::Target(h) => h.eval(x)?,
                    Labels::Fixed(ys) => ys[s.pos],
                };
                s.pos += 1;
                Ok(y)
            }
            NatureStrategy::Tree(t) => t.reveal(x, yhat),
            NatureStrategy::Iid { target, .. } => Ok(target.eval(x)?),
            NatureStrategy::WindowHalving(w) => Ok(w.reveal(yhat)),
            NatureStrategy::CoinFlip { rng, .. } => Ok(rng.gen()),
        }
    }

    /// The hypothesis labelling the stream, for realizable strategies. The
    /// online tree adversary and window halving report one consistent with
    /// everything revealed so far.
    pub fn target(&self) -> Option<Hypothesis> {
        match self {
            NatureStrategy::Scripted(Scripted {
                labels: Labels::Target(h),
                ..
            }) => Some(h.clone()),
            NatureStrategy::Tree(t) => Some(t.target()),
            NatureStrategy::Iid { target, .. } => Some(target.clone()),
            NatureStrategy::WindowHalving(w) => w.window().realizing_cut().map(Hypothesis::Threshold),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TreeMode {
    Online,
    #[default]
    Committed,
}

fn default_depth() -> u64 {
    64
}

fn default_coin_point() -> Point {
    Point::int(0)
}

/// A nature description, e.g. `{"nature": "window-halving", "depth": 64}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "nature", rename_all = "kebab-case")]
pub enum NatureSpec {
    TreeAdversary {
        class: ClassSource,
        #[serde(default)]
        mode: TreeMode,
    },
    Iid {
        measure: MeasureDef,
        target: HypothesisDef,
    },
    CoinFlip {
        #[serde(default = "default_coin_point")]
        point: Point,
    },
    WindowHalving {
        #[serde(default = "default_depth")]
        depth: u64,
    },
    Scripted {
        x: Vec<Point>,
        #[serde(default)]
        y: Option<Vec<u8>>,
        #[serde(default)]
        target: Option<HypothesisDef>,
        #[serde(default)]
        cycle: bool,
    },
    /// A realizable stream that asks, each round, a point the learner would
    /// currently get wrong.
    MistakeSeeking {
        target: HypothesisDef,
        domain: Vec<Point>,
        length: usize,
    },
}

impl NatureSpec {
    /// Builds the strategy for one game. `learner` is the learner it will
    /// face, needed by the strategies that simulate it; `seed` drives the
    /// random strategies through a stream independent of the learner's.
    pub fn build(&self, learner: &LearnerSpec, seed: u64) -> Result<NatureStrategy, NatureError> {
        let own_seed = derive_seed(seed, u64::MAX);
        Ok(match self {
            NatureSpec::TreeAdversary { class, mode } => {
                let class = class.load()?.into_finite()?;
                match mode {
                    TreeMode::Online => NatureStrategy::Tree(TreeAdversary::new(class)?),
                    TreeMode::Committed => NatureStrategy::Scripted(commit_adversary(&class, learner, seed)?),
                }
            }
            NatureSpec::Iid { measure, target } => NatureStrategy::Iid {
                sampler: measure.build()?.sampler(own_seed),
                target: target.build()?,
            },
            NatureSpec::CoinFlip { point } => NatureStrategy::coin_flip(point.clone(), own_seed),
            NatureSpec::WindowHalving { depth } => NatureStrategy::WindowHalving(WindowHalving::new(*depth)),
            NatureSpec::Scripted { x, y, target, cycle } => {
                let labels = match (y, target) {
                    (Some(ys), None) => {
                        if ys.len() != x.len() {
                            return Err(NatureError::ScriptLength {
                                points: x.len(),
                                labels: ys.len(),
                            });
                        }
                        let ys = ys
                            .iter()
                            .map(|&b| if b <= 1 { Ok(b == 1) } else { Err(ClassError::NotBinary(b)) })
                            .collect::<Result<_, _>>()?;
                        Labels::Fixed(ys)
                    }
                    (None, Some(t)) => Labels::Target(t.build()?),
                    _ => {
                        return Err(NatureError::Unsupported(
                            "a script needs exactly one of `y` and `target`".into(),
                        ))
                    }
                };
                NatureStrategy::Scripted(Scripted::new(x.clone(), labels, *cycle))
            }
            NatureSpec::MistakeSeeking { target, domain, length } => {
                if !learner.is_deterministic() {
                    return Err(NatureError::Unsupported(
                        "mistake-seeking scripts need a deterministic learner".into(),
                    ));
                }
                let target = target.build()?;
                let xs = mistake_seeking_script(&target, domain, learner.build(seed)?, *length)?;
                NatureStrategy::Scripted(Scripted::new(xs, Labels::Target(target), false))
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::hypothesis::io::{ClassDef, ExplicitDef};
    use crate::hypothesis::FiniteClass;
    use crate::learners::{Learner, Soa, UpdateRule};
    use crate::littlestone::ldim;

    fn full(names: &[&str]) -> Arc<FiniteClass> {
        Arc::new(FiniteClass::full(names.iter().map(|n| Point::named(*n)).collect()))
    }

    fn soa_spec(class: &FiniteClass) -> LearnerSpec {
        LearnerSpec::Soa {
            class: ClassSource::Inline(ClassDef::Explicit(ExplicitDef::from_class(class))),
            update: Default::default(),
            empty: Default::default(),
        }
    }

    fn play(nature: &mut NatureStrategy, learner: &mut dyn Learner, rounds: u64) -> u64 {
        for t in 1..=rounds {
            let x = nature.next_point(t).unwrap();
            let p = learner.predict(&x).unwrap();
            let y = nature.reveal_label(&x, p).unwrap();
            learner.absorb(&x, y).unwrap();
        }
        learner.mistakes()
    }

    #[test]
    fn scripted_order_and_labels() {
        let mut s = NatureStrategy::Scripted(Scripted::new(
            vec![Point::named("a"), Point::named("b")],
            Labels::Target(Hypothesis::Constant(true)),
            true,
        ));
        let got: Vec<Point> = (1..=3)
            .map(|t| {
                let x = s.next_point(t).unwrap();
                assert!(s.reveal_label(&x, false).unwrap());
                x
            })
            .collect();
        assert_eq!(got, vec![Point::named("a"), Point::named("b"), Point::named("a")]);
        let mut once = NatureStrategy::Scripted(Scripted::new(vec![], Labels::Fixed(vec![]), false));
        assert!(matches!(once.next_point(1), Err(NatureError::Exhausted { round: 1 })));
    }

    #[test]
    fn online_tree_forces_ldim_mistakes() {
        let c = full(&["a", "b", "c"]);
        let mut nature = NatureStrategy::Tree(TreeAdversary::new(c.clone()).unwrap());
        let mut soa = Soa::new(&crate::hypothesis::ConceptClass::Finite(c));
        assert_eq!(play(&mut nature, &mut soa, 3), 3);
        assert_eq!(play(&mut nature, &mut soa, 5), 3);
    }

    #[test]
    fn committed_script_against_soa() {
        let c = full(&["a", "b"]);
        let script = commit_adversary(&c, &soa_spec(&c), 0).unwrap();
        assert_eq!(script.points()[..2], [Point::named("a"), Point::named("b")]);
        let mut nature = NatureStrategy::Scripted(script);
        let mut soa = soa_spec(&c).build(0).unwrap();
        assert_eq!(play(&mut nature, soa.as_mut(), 4), 2);
    }

    #[test]
    fn committed_script_against_constant() {
        let c = Arc::new(FiniteClass::integer_thresholds(&[1, 2, 3, 4, 5, 6, 7], &[1, 2, 3, 4, 5, 6, 7, 8]).unwrap());
        let spec = LearnerSpec::Constant { label: 0 };
        let mut nature = NatureStrategy::Scripted(commit_adversary(&c, &spec, 0).unwrap());
        let mut l = spec.build(0).unwrap();
        assert!(play(&mut nature, l.as_mut(), 10) >= 3);
        let single = Arc::new(FiniteClass::from_bits(vec![Point::int(1)], vec![vec![1]]).unwrap());
        assert!(matches!(commit_adversary(&single, &spec, 0), Err(NatureError::NothingToForce)));
        let fpl: LearnerSpec = serde_json::from_str(r#"{"learner":"fpl","experts":[{"constant":0}]}"#).unwrap();
        assert!(matches!(commit_adversary(&c, &fpl, 0), Err(NatureError::Unsupported(_))));
    }

    #[test]
    fn worst_case_matches_ldim_on_small_classes() {
        for c in [full(&["a", "b"]), full(&["a", "b", "c"])] {
            let (v, seq) = soa_worst_case(&c, UpdateRule::OnMistake).unwrap();
            assert_eq!(v, ldim(&c).unwrap());
            let mut soa = Soa::new(&crate::hypothesis::ConceptClass::Finite(c.clone()));
            for (x, y) in &seq {
                soa.absorb(x, *y).unwrap();
            }
            assert_eq!(soa.mistakes(), u64::from(v));
        }
    }

    #[test]
    fn coin_flip_is_fair() {
        let mut n = NatureStrategy::coin_flip(Point::int(0), 17);
        let ones = (0..10_000)
            .filter(|_| n.reveal_label(&Point::int(0), false).unwrap())
            .count();
        // sd 50; the band is 4 sd wide on each side
        assert!((4_800..=5_200).contains(&ones), "{ones}");
    }

    #[test]
    fn spec_parsing() {
        let specs = [
            r#"{"nature":"coin-flip"}"#,
            r#"{"nature":"window-halving","depth":40}"#,
            r#"{"nature":"scripted","x":["a","b"],"y":[1,0]}"#,
            r#"{"nature":"scripted","x":[1,2],"target":{"threshold":2},"cycle":true}"#,
            r#"{"nature":"iid","measure":{"geometric":20},"target":{"threshold":3}}"#,
        ];
        let learner = LearnerSpec::Constant { label: 0 };
        for s in specs {
            let spec: NatureSpec = serde_json::from_str(s).unwrap();
            let mut n = spec.build(&learner, 1).unwrap();
            let x = n.next_point(1).unwrap();
            n.reveal_label(&x, false).unwrap();
        }
        let bad: NatureSpec = serde_json::from_str(r#"{"nature":"scripted","x":["a"],"y":[1,0]}"#).unwrap();
        assert!(matches!(bad.build(&learner, 1), Err(NatureError::ScriptLength { .. })));
    }
}
