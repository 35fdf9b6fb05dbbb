use super::{perturbed_leader, ComplexityAssignment, FplError, MassTracker, Perturber, Redraw};
use crate::hypothesis::{Hypothesis, Point};
use crate::learners::{Learner, LearnerError};

/// FPL over a fixed list of hypotheses used as experts.
pub struct FplLearner {
    experts: Vec<Hypothesis>,
    k: Vec<f64>,
    losses: Vec<u64>,
    perturber: Perturber,
    round: u64,
    mistakes: u64,
    pending: Option<(Point, bool)>,
}

impl FplLearner {
    pub fn new(
        experts: Vec<Hypothesis>,
        complexities: &ComplexityAssignment,
        redraw: Redraw,
        seed: u64,
    ) -> Result<Self, FplError> {
        if experts.is_empty() {
            return Err(FplError::NoExperts);
        }
        let k = complexities.prefix(experts.len())?;
        let mut mass = MassTracker::new();
        for &ki in &k {
            mass.register(ki)?;
        }
        Ok(Self {
            losses: vec![0; experts.len()],
            experts,
            k,
            perturber: Perturber::new(redraw, seed),
            round: 0,
            mistakes: 0,
            pending: None,
        })
    }

    /// Counterfactual mistakes of each expert so far.
    pub fn losses(&self) -> &[u64] {
        &self.losses
    }

    pub fn complexities(&self) -> &[f64] {
        &self.k
    }
}

impl Learner for FplLearner {
    fn predict(&mut self, x: &Point) -> Result<bool, LearnerError> {
        if let Some((p, label)) = &self.pending {
            if p == x {
                return Ok(*label);
            }
        }
        let t = self.round + 1;
        let q = self.perturber.round(self.experts.len());
        let i = perturbed_leader(t, self.losses.iter().copied(), &self.k, q);
        let label = self.experts[i].eval(x)?;
        self.pending = Some((x.clone(), label));
        Ok(label)
    }

    fn absorb(&mut self, x: &Point, y: bool) -> Result<(), LearnerError> {
        let label = self.predict(x)?;
        self.pending = None;
        self.round += 1;
        if label != y {
            self.mistakes += 1;
        }
        for (h, loss) in self.experts.iter().zip(&mut self.losses) {
            if h.eval(x)? != y {
                *loss += 1;
            }
        }
        Ok(())
    }

    fn mistakes(&self) -> u64 {
        self.mistakes
    }

    fn is_deterministic(&self) -> bool {
        false
    }

    fn name(&self) -> String {
        "fpl".into()
    }
}
