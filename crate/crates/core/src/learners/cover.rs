use num_bigint::BigInt;

use super::{Learner, LearnerError};
use crate::hypothesis::{stern_brocot, Hypothesis, Point, Rational};

/// An ordered, possibly infinite list of cover hypotheses `h'_1, h'_2, ...`.
#[derive(Clone, Debug)]
pub enum CoverSpec {
    List(Vec<Hypothesis>),
    /// `1[x >= q_n]` with `q_n` in Stern–Brocot order.
    RationalThresholds,
    /// `1[x >= n]`.
    NaturalThresholds,
}

impl CoverSpec {
    /// The n-th hypothesis (1-based), or `None` past the end of a finite list.
    pub fn hypothesis(&self, n: u64) -> Option<Hypothesis> {
        match self {
            CoverSpec::List(list) => usize::try_from(n - 1).ok().and_then(|i| list.get(i)).cloned(),
            CoverSpec::RationalThresholds => Some(Hypothesis::Threshold(stern_brocot(n))),
            CoverSpec::NaturalThresholds => Some(Hypothesis::Threshold(Rational::from_integer(BigInt::from(n)))),
        }
    }
}

/// Default search limit for infinite covers.
pub const DEFAULT_COVER_SEARCH: u64 = 1_000_000;

/// Predicts with the smallest-index cover hypothesis consistent with the
/// history; eliminated hypotheses never come back.
pub struct CoverLearner {
    spec: CoverSpec,
    cursor: u64,
    current: Hypothesis,
    history: Vec<(Point, bool)>,
    round: u64,
    mistakes: u64,
    search_limit: u64,
}

impl CoverLearner {
    pub fn new(spec: CoverSpec) -> Result<Self, LearnerError> {
        Self::with_limit(spec, DEFAULT_COVER_SEARCH)
    }

    pub fn with_limit(spec: CoverSpec, search_limit: u64) -> Result<Self, LearnerError> {
        let current = spec.hypothesis(1).ok_or(LearnerError::Uncovered { round: 0 })?;
        Ok(Self {
            spec,
            cursor: 1,
            current,
            history: Vec::new(),
            round: 0,
            mistakes: 0,
            search_limit,
        })
    }

    /// Index of the hypothesis currently followed.
    pub fn cursor(&self) -> u64 {
        self.cursor
    }

    fn advance(&mut self) -> Result<(), LearnerError> {
        'search: loop {
            self.cursor += 1;
            let h = match self.spec.hypothesis(self.cursor) {
                Some(h) if self.cursor <= self.search_limit => h,
                _ => return Err(LearnerError::Uncovered { round: self.round }),
            };
            for (x, y) in &self.history {
                if h.eval(x)? != *y {
                    continue 'search;
                }
            }
            self.current = h;
            return Ok(());
        }
    }
}

impl Learner for CoverLearner {
    fn predict(&mut self, x: &Point) -> Result<bool, LearnerError> {
        Ok(self.current.eval(x)?)
    }

    fn absorb(&mut self, x: &Point, y: bool) -> Result<(), LearnerError> {
        self.round += 1;
        self.history.push((x.clone(), y));
        if self.current.eval(x)? != y {
            self.mistakes += 1;
            self.advance()?;
        }
        Ok(())
    }

    fn mistakes(&self) -> u64 {
        self.mistakes
    }

    fn name(&self) -> String {
        "cover".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn target_first_never_errs() {
        let mut c = CoverLearner::new(CoverSpec::List(vec![Hypothesis::Constant(true)])).unwrap();
        for i in 0..20 {
            c.absorb(&Point::int(i), true).unwrap();
        }
        assert_eq!(c.mistakes(), 0);
    }

    #[test]
    fn ones_then_zeros_costs_one_mistake() {
        let spec = CoverSpec::List(vec![Hypothesis::Constant(true), Hypothesis::Constant(false)]);
        let mut c = CoverLearner::new(spec).unwrap();
        for i in 0..10 {
            let p = c.predict(&Point::int(i)).unwrap();
            assert_eq!(p, i == 0);
            c.absorb(&Point::int(i), false).unwrap();
        }
        assert_eq!(c.mistakes(), 1);
        assert_eq!(c.cursor(), 2);
    }

    #[test]
    fn exhausted_list_is_an_error() {
        let mut c = CoverLearner::new(CoverSpec::List(vec![Hypothesis::Constant(true)])).unwrap();
        let err = c.absorb(&Point::int(1), false).unwrap_err();
        assert!(matches!(err, LearnerError::Uncovered { round: 1 }));
    }

    #[test]
    fn rational_cover_finds_target() {
        // 1[x >= 2/5] sits at index 9 of the enumeration
        let target = Rational::new(2.into(), 5.into());
        let mut c = CoverLearner::new(CoverSpec::RationalThresholds).unwrap();
        for (n, d) in [(1, 2), (1, 3), (2, 5), (3, 8), (1, 10), (9, 10)] {
            let x = Point::ratio(n, d);
            let y = x.value().unwrap() >= &target;
            c.absorb(&x, y).unwrap();
        }
        assert!(c.cursor() <= 9);
        assert!(c.mistakes() <= 9);
    }
}
