//! Follow-the-Perturbed-Leader over countably many experts, and the
//! hierarchical agnostic learner built from growing pools of keyed SOA
//! experts.

mod agnostic;
mod complexity;
mod fixed;
mod pool;

pub use agnostic::{AgnosticFpl, AgnosticOptions, PoolFpl};
pub use complexity::{
    analytic_inner_mass, inner_complexity, meta_complexity, meta_prefix_mass, pool_mass, ComplexityAssignment,
    MassTracker, MASS_TOLERANCE,
};
pub use fixed::FplLearner;
pub use pool::{ExpertPool, PoolExpert, SpaceTable};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum FplError {
    #[error("complexity prefix mass {mass} exceeds 1")]
    Mass { mass: f64 },
    #[error("complexity {0} is negative or not finite")]
    BadComplexity(f64),
    #[error("{experts} experts but {complexities} complexities")]
    Length { experts: usize, complexities: usize },
    #[error("an FPL learner needs at least one expert")]
    NoExperts,
    #[error("component {index} has dimension {dim}, above the cap {cap}")]
    DimCap { index: usize, dim: u32, cap: u32 },
    #[error("round {round} is past the horizon cap {cap}")]
    HorizonCap { round: u64, cap: u64 },
    #[error("the family is infinite; set the number of components")]
    Unbounded,
}

/// Whether perturbations are redrawn each round or drawn once per expert.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Redraw {
    #[default]
    PerRound,
    Once,
}

/// Independent seed for stream `stream` of a run seeded with `master`.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    let mut z = master ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Exponential(1) perturbations by inverse CDF on a seeded uniform stream.
#[derive(Clone, Debug)]
pub struct Perturber {
    redraw: Redraw,
    rng: ChaCha8Rng,
    draws: Vec<f64>,
}

impl Perturber {
    pub fn new(redraw: Redraw, seed: u64) -> Self {
        Self {
            redraw,
            rng: ChaCha8Rng::seed_from_u64(seed),
            draws: Vec::new(),
        }
    }

    fn exp1(rng: &mut ChaCha8Rng) -> f64 {
        let u: f64 = rng.gen();
        -(-u).ln_1p()
    }

    /// Perturbations for experts `0..n` this round.
    pub fn round(&mut self, n: usize) -> &[f64] {
        match self.redraw {
            Redraw::PerRound => {
                self.draws.clear();
                self.draws.extend((0..n).map(|_| Self::exp1(&mut self.rng)));
            }
            Redraw::Once => {
                while self.draws.len() < n {
                    let q = Self::exp1(&mut self.rng);
                    self.draws.push(q);
                }
            }
        }
        &self.draws[..n]
    }
}

/// Index minimizing `loss_i + (k_i - q_i)·√t`; the smallest index wins ties.
pub fn perturbed_leader(t: u64, loss: impl Iterator<Item = u64>, k: &[f64], q: &[f64]) -> usize {
    let scale = (t as f64).sqrt();
    let mut best = (f64::INFINITY, 0);
    for (i, l) in loss.enumerate() {
        let score = l as f64 + (k[i] - q[i]) * scale;
        if score < best.0 {
            best = (score, i);
        }
    }
    best.1
}
