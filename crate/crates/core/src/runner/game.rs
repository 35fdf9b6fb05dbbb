use std::io::Write;
use std::sync::Arc;

use serde::Serialize;

use super::RunError;
use crate::hypothesis::{ClassError, ClassFamily, ConceptClass, FiniteClass, Hypothesis, Point};
use crate::learners::Learner;
use crate::nature::NatureStrategy;

/// One round of play.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundRecord {
    pub t: u64,
    pub x: Point,
    pub y: bool,
    pub yhat: bool,
    pub mistake: bool,
    pub cum_mistakes: u64,
    /// Fewest mistakes of any comparison hypothesis on rounds `1..=t`.
    pub cum_best_rival: Option<u64>,
}

#[derive(Serialize)]
struct CsvRow {
    t: u64,
    x: String,
    y: u8,
    yhat: u8,
    mistake: u8,
    cum_mistakes: u64,
    cum_best_rival: Option<u64>,
}

/// The full transcript of a game.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GameTrace {
    pub learner: String,
    pub rounds: Vec<RoundRecord>,
}

impl GameTrace {
    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    pub fn mistakes(&self) -> u64 {
        self.rounds.last().map_or(0, |r| r.cum_mistakes)
    }

    pub fn best_rival(&self) -> Option<u64> {
        self.rounds.last().and_then(|r| r.cum_best_rival)
    }

    /// Learner mistakes minus the best rival's, over the first `horizon` rounds.
    pub fn regret_at(&self, horizon: usize) -> Option<i64> {
        let r = self.rounds.get(horizon.checked_sub(1)?)?;
        Some(r.cum_mistakes as i64 - r.cum_best_rival? as i64)
    }

    /// The `(x, y)` columns.
    pub fn data(&self) -> Vec<(Point, bool)> {
        self.rounds.iter().map(|r| (r.x.clone(), r.y)).collect()
    }

    /// Writes `t,x,y,yhat,mistake,cum_mistakes,cum_best_rival`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.rounds {
            w.serialize(CsvRow {
                t: r.t,
                x: r.x.to_string(),
                y: u8::from(r.y),
                yhat: u8::from(r.yhat),
                mistake: u8::from(r.mistake),
                cum_mistakes: r.cum_mistakes,
                cum_best_rival: r.cum_best_rival,
            })?;
        }
        if self.rounds.is_empty() {
            w.write_record(["t", "x", "y", "yhat", "mistake", "cum_mistakes", "cum_best_rival"])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Running best-in-hindsight over a comparison class.
#[derive(Clone, Debug)]
pub enum Rivals {
    /// Rows of an explicit class, counted incrementally.
    Finite { class: Arc<FiniteClass>, counts: Vec<u64> },
    /// A fixed list of hypotheses, counted incrementally.
    List { hypotheses: Vec<Hypothesis>, counts: Vec<u64> },
    /// Symbolic classes, re-solved on the whole prefix each round.
    Classes { classes: Vec<ConceptClass>, data: Vec<(Point, bool)> },
}

impl Rivals {
    pub fn class(class: &ConceptClass) -> Self {
        match class {
            ConceptClass::Finite(c) => Rivals::Finite {
                counts: vec![0; c.len()],
                class: c.clone(),
            },
            ConceptClass::Singleton(h) => Rivals::List {
                hypotheses: vec![h.clone()],
                counts: vec![0],
            },
            other => Rivals::Classes {
                classes: vec![other.clone()],
                data: Vec::new(),
            },
        }
    }

    pub fn hypotheses(hypotheses: Vec<Hypothesis>) -> Self {
        let counts = vec![0; hypotheses.len()];
        Rivals::List { hypotheses, counts }
    }

    /// The union of the first `components` members of a family.
    pub fn family(family: &ClassFamily, components: usize) -> Result<Self, RunError> {
        let classes = (1..=components)
            .map(|n| family.component(n).map(|c| c.class))
            .collect::<Result<Vec<_>, _>>()?;
        if let [single] = &classes[..] {
            return Ok(Self::class(single));
        }
        Ok(Rivals::Classes {
            classes,
            data: Vec::new(),
        })
    }

    /// Adds a round and returns the current best count.
    pub fn observe(&mut self, x: &Point, y: bool) -> Result<u64, ClassError> {
        match self {
            Rivals::Finite { class, counts } => {
                let xi = class.point_index(x)?;
                for (h, c) in counts.iter_mut().enumerate() {
                    if class.row(h)[xi] != y {
                        *c += 1;
                    }
                }
                Ok(counts.iter().copied().min().unwrap_or(0))
            }
            Rivals::List { hypotheses, counts } => {
                for (h, c) in hypotheses.iter().zip(counts.iter_mut()) {
                    if h.eval(x)? != y {
                        *c += 1;
                    }
                }
                Ok(counts.iter().copied().min().unwrap_or(0))
            }
            Rivals::Classes { classes, data } => {
                data.push((x.clone(), y));
                let mut best = u64::MAX;
                for c in classes.iter() {
                    best = best.min(c.best_mistakes(data)?);
                }
                Ok(best)
            }
        }
    }
}

/// Plays `horizon` rounds of observe / predict / reveal.
pub fn run_game(
    learner: &mut dyn Learner,
    nature: &mut NatureStrategy,
    horizon: u64,
    mut rivals: Option<&mut Rivals>,
) -> Result<GameTrace, RunError> {
    let mut trace = GameTrace {
        learner: learner.name(),
        rounds: Vec::with_capacity(horizon.min(1 << 20) as usize),
    };
    let mut cum = 0;
    for t in 1..=horizon {
        let x = nature.next_point(t).map_err(|source| RunError::Nature { round: t, source })?;
        let yhat = learner
            .predict(&x)
            .map_err(|source| RunError::Learner { round: t, source })?;
        let y = nature
            .reveal_label(&x, yhat)
            .map_err(|source| RunError::Nature { round: t, source })?;
        learner
            .absorb(&x, y)
            .map_err(|source| RunError::Learner { round: t, source })?;
        let mistake = y != yhat;
        cum += u64::from(mistake);
        let cum_best_rival = match rivals.as_deref_mut() {
            Some(r) => Some(r.observe(&x, y).map_err(|source| RunError::Rival { round: t, source })?),
            None => None,
        };
        trace.rounds.push(RoundRecord {
            t,
            x,
            y,
            yhat,
            mistake,
            cum_mistakes: cum,
            cum_best_rival,
        });
    }
    Ok(trace)
}

/// Learner mistakes minus the fewest mistakes of any member of `class` on
/// the trace's `(x, y)` columns.
pub fn regret(trace: &GameTrace, class: &ConceptClass) -> Result<i64, ClassError> {
    let best = class.best_mistakes(&trace.data())?;
    let mistakes = trace.rounds.iter().filter(|r| r.mistake).count() as i64;
    Ok(mistakes - best as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::ConstantLearner;
    use crate::nature::{Labels, Scripted};

    fn coin_class() -> ConceptClass {
        ConceptClass::Finite(Arc::new(
            FiniteClass::from_bits(vec![Point::int(0)], vec![vec![0], vec![1]]).unwrap(),
        ))
    }

    #[test]
    fn hand_counted_regret() {
        let mut nature = NatureStrategy::Scripted(Scripted::new(
            vec![Point::int(0); 4],
            Labels::Fixed(vec![true, false, true, false]),
            false,
        ));
        let mut learner = ConstantLearner::new(false);
        let mut rivals = Rivals::class(&coin_class());
        let trace = run_game(&mut learner, &mut nature, 4, Some(&mut rivals)).unwrap();
        assert_eq!(trace.mistakes(), 2);
        assert_eq!(trace.best_rival(), Some(2));
        assert_eq!(trace.regret_at(4), Some(0));
        assert_eq!(regret(&trace, &coin_class()).unwrap(), 0);
        assert_eq!(trace.regret_at(1), Some(1));
    }

    #[test]
    fn csv_format() {
        let mut nature = NatureStrategy::Scripted(Scripted::new(
            vec![Point::int(0), Point::ratio(1, 2)],
            Labels::Fixed(vec![true, false]),
            false,
        ));
        let mut learner = ConstantLearner::new(false);
        let trace = run_game(&mut learner, &mut nature, 2, None).unwrap();
        let mut out = Vec::new();
        trace.write_csv(&mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "t,x,y,yhat,mistake,cum_mistakes,cum_best_rival\n1,0,1,0,1,1,\n2,1/2,0,0,0,1,\n"
        );
    }

    #[test]
    fn empty_game() {
        let mut nature = NatureStrategy::Scripted(Scripted::new(vec![], Labels::Fixed(vec![]), false));
        let mut learner = ConstantLearner::new(false);
        let trace = run_game(&mut learner, &mut nature, 0, None).unwrap();
        assert!(trace.is_empty());
        let mut out = Vec::new();
        trace.write_csv(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "t,x,y,yhat,mistake,cum_mistakes,cum_best_rival\n");
    }

    #[test]
    fn exhaustion_reports_round() {
        let mut nature = NatureStrategy::Scripted(Scripted::new(vec![Point::int(0)], Labels::Fixed(vec![true]), false));
        let mut learner = ConstantLearner::new(false);
        let err = run_game(&mut learner, &mut nature, 3, None).unwrap_err();
        assert!(matches!(err, RunError::Nature { round: 2, .. }));
    }
}
