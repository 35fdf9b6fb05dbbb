use super::soa::{EmptyPolicy, Soa, UpdateRule};
use super::{Learner, LearnerError};
use crate::hypothesis::{ClassFamily, Point};

/// Runs SOA on every component of a countable union and predicts as the
/// component minimizing `e_n + n`, where `e_n` counts the mistakes that
/// component's SOA has made on the whole history.
///
/// Components are instantiated lazily: index `n` is only built once
/// `n < min_m (e_m + m)`, since larger indices can never be selected. A
/// newly built component replays the history to get its exact `e_n`.
pub struct Aggregator {
    family: ClassFamily,
    subs: Vec<Soa>,
    history: Vec<(Point, bool)>,
    mistakes: u64,
    pending: Option<(Point, bool)>,
}

impl Aggregator {
    pub fn new(family: ClassFamily) -> Result<Self, LearnerError> {
        let mut agg = Self {
            family,
            subs: Vec::new(),
            history: Vec::new(),
            mistakes: 0,
            pending: None,
        };
        agg.grow()?;
        Ok(agg)
    }

    /// Counterfactual mistake counts `e_1..e_N` of the instantiated components.
    pub fn counts(&self) -> Vec<u64> {
        self.subs.iter().map(|s| s.mistakes()).collect()
    }

    pub fn instantiated(&self) -> usize {
        self.subs.len()
    }

    /// Current selector `J = argmin_n (e_n + n)`, smallest `n` on ties.
    pub fn selector(&self) -> usize {
        let mut best = (u64::MAX, 0);
        for (i, s) in self.subs.iter().enumerate() {
            let score = s.mistakes() + i as u64 + 1;
            if score < best.0 {
                best = (score, i + 1);
            }
        }
        best.1
    }

    fn bound(&self) -> u64 {
        self.subs
            .iter()
            .enumerate()
            .map(|(i, s)| s.mistakes() + i as u64 + 1)
            .min()
            .unwrap_or(u64::MAX)
    }

    fn grow(&mut self) -> Result<(), LearnerError> {
        loop {
            let next = self.subs.len() + 1;
            if (next as u64) >= self.bound() || self.family.component_count().is_some_and(|len| next > len) {
                return Ok(());
            }
            let component = self.family.component(next)?;
            let mut sub = Soa::with_options(&component.class, UpdateRule::OnMistake, EmptyPolicy::Keep);
            for (x, y) in &self.history {
                sub.absorb(x, *y)?;
            }
            self.subs.push(sub);
        }
    }
}

impl Learner for Aggregator {
    fn predict(&mut self, x: &Point) -> Result<bool, LearnerError> {
        if let Some((p, label)) = &self.pending {
            if p == x {
                return Ok(*label);
            }
        }
        let j = self.selector();
        let label = self.subs[j - 1].predict(x)?;
        self.pending = Some((x.clone(), label));
        Ok(label)
    }

    fn absorb(&mut self, x: &Point, y: bool) -> Result<(), LearnerError> {
        let label = self.predict(x)?;
        self.pending = None;
        if label != y {
            self.mistakes += 1;
        }
        for sub in &mut self.subs {
            sub.absorb(x, y)?;
        }
        self.history.push((x.clone(), y));
        self.grow()
    }

    fn mistakes(&self) -> u64 {
        self.mistakes
    }

    fn name(&self) -> String {
        "aggregator".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_round_selects_component_one() {
        let agg = Aggregator::new(ClassFamily::FiniteSupport { domain_size: Some(12) }).unwrap();
        assert_eq!(agg.selector(), 1);
        assert_eq!(agg.instantiated(), 1);
    }

    #[test]
    fn grows_as_mistakes_accumulate() {
        // Natural thresholds: component n is the single hypothesis 1[x >= n].
        let mut agg = Aggregator::new(ClassFamily::NaturalThresholds).unwrap();
        // target 1[x >= 4]
        for x in [1i64, 2, 3, 4, 5, 3, 4, 1, 2, 6] {
            agg.absorb(&Point::int(x), x >= 4).unwrap();
        }
        let e = agg.counts();
        let j = agg.selector();
        let best = e.iter().enumerate().map(|(i, c)| c + i as u64 + 1).min().unwrap();
        assert_eq!(e[j - 1] + j as u64, best);
        // component 4 is the target and never errs
        assert_eq!(e.get(3).copied(), Some(0));
        assert_eq!(j, 4);
        // every uninstantiated index is at least the current minimum
        assert!(agg.instantiated() as u64 + 1 >= best);
    }
}
