use super::{Learner, LearnerError};
use crate::hypothesis::{ClassError, Point};

/// Learner for `{1[x >= n] : n ∈ ℕ}` over the positive integers: predict 0
/// until the first mistake, then predict the majority vote of the finitely
/// many thresholds still consistent.
#[derive(Clone, Debug, Default)]
pub struct ThresholdSimple {
    /// Consistent cuts are `lo..=hi`; `hi` is unknown until a 1 label is seen.
    lo: u64,
    hi: Option<u64>,
    erred: bool,
    round: u64,
    mistakes: u64,
}

impl ThresholdSimple {
    pub fn new() -> Self {
        // Cut 0 labels every positive integer 1, exactly like cut 1.
        Self {
            lo: 1,
            ..Self::default()
        }
    }

    fn point(x: &Point) -> Result<u64, LearnerError> {
        x.positive_integer()
            .ok_or_else(|| ClassError::InvalidPoint(x.to_string()).into())
    }
}

impl Learner for ThresholdSimple {
    fn predict(&mut self, x: &Point) -> Result<bool, LearnerError> {
        let x = Self::point(x)?;
        let hi = match (self.erred, self.hi) {
            (true, Some(hi)) => hi,
            _ => return Ok(false),
        };
        let total = hi.saturating_sub(self.lo) + 1;
        let ones = if x < self.lo { 0 } else { x.min(hi) - self.lo + 1 };
        Ok(2 * ones > total)
    }

    fn absorb(&mut self, x: &Point, y: bool) -> Result<(), LearnerError> {
        let label = self.predict(x)?;
        let x = Self::point(x)?;
        self.round += 1;
        if label != y {
            self.mistakes += 1;
            self.erred = true;
        }
        if y {
            self.hi = Some(self.hi.map_or(x, |h| h.min(x)));
        } else {
            self.lo = self.lo.max(x + 1);
        }
        if self.hi.is_some_and(|hi| self.lo > hi) {
            return Err(LearnerError::Inconsistent { round: self.round });
        }
        Ok(())
    }

    fn mistakes(&self) -> u64 {
        self.mistakes
    }

    fn name(&self) -> String {
        "threshold-simple".into()
    }
}

/// Always predicts the same label.
#[derive(Clone, Debug)]
pub struct ConstantLearner {
    label: bool,
    mistakes: u64,
}

impl ConstantLearner {
    pub fn new(label: bool) -> Self {
        Self { label, mistakes: 0 }
    }
}

impl Learner for ConstantLearner {
    fn predict(&mut self, _x: &Point) -> Result<bool, LearnerError> {
        Ok(self.label)
    }

    fn absorb(&mut self, _x: &Point, y: bool) -> Result<(), LearnerError> {
        if y != self.label {
            self.mistakes += 1;
        }
        Ok(())
    }

    fn mistakes(&self) -> u64 {
        self.mistakes
    }

    fn name(&self) -> String {
        format!("constant{}", u8::from(self.label))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(cut: u64, xs: &[u64]) -> u64 {
        let mut l = ThresholdSimple::new();
        for &x in xs {
            l.absorb(&Point::int(x as i64), x >= cut).unwrap();
        }
        l.mistakes()
    }

    #[test]
    fn no_mistakes_below_the_cut() {
        assert_eq!(run(100, &[1, 5, 7, 99, 3]), 0);
    }

    #[test]
    fn five_then_halving() {
        let xs = [5, 4, 3, 2, 1, 2, 3, 4, 5];
        let m = run(3, &xs);
        assert!((1..=4).contains(&m), "{m}");
    }

    #[test]
    fn bound_holds_for_all_small_targets() {
        for cut in 1..=20u64 {
            for start in 1..=20u64 {
                let mut xs = vec![start];
                xs.extend((1..=20).rev());
                xs.extend(1..=20);
                let bound = if start >= cut {
                    1 + (64 - (start - 1).leading_zeros()) as u64
                } else {
                    // first mistake happens later; bound uses that point
                    1 + 5
                };
                assert!(run(cut, &xs) <= bound, "cut {cut} start {start}");
            }
        }
    }

    #[test]
    fn inconsistent_labels() {
        let mut l = ThresholdSimple::new();
        l.absorb(&Point::int(3), true).unwrap();
        assert!(matches!(
            l.absorb(&Point::int(5), false),
            Err(LearnerError::Inconsistent { round: 2 })
        ));
    }
}
