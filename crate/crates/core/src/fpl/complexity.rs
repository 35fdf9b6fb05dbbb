use super::FplError;

/// Slack allowed on prefix masses for floating-point summation error.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// `k_n = 2(ln n + 1)` for the n-th component of the meta learner.
pub fn meta_complexity(n: u64) -> f64 {
    2.0 * ((n as f64).ln() + 1.0)
}

/// `1 + (d + 2)·ln j` for a key whose last index is `j`; the empty key gets 1.
pub fn inner_complexity(dim: u32, last: Option<u64>) -> f64 {
    match last {
        None => 1.0,
        Some(j) => 1.0 + (f64::from(dim) + 2.0) * (j as f64).ln(),
    }
}

/// How a fixed list of experts is priced.
#[derive(Clone, Debug, PartialEq)]
pub enum ComplexityAssignment {
    Explicit(Vec<f64>),
    /// `k_n = 2(ln n + 1)`.
    Meta,
}

impl ComplexityAssignment {
    /// Complexities of the first `n` experts.
    pub fn prefix(&self, n: usize) -> Result<Vec<f64>, FplError> {
        match self {
            ComplexityAssignment::Explicit(k) if k.len() == n => Ok(k.clone()),
            ComplexityAssignment::Explicit(k) => Err(FplError::Length {
                experts: n,
                complexities: k.len(),
            }),
            ComplexityAssignment::Meta => Ok((1..=n as u64).map(meta_complexity).collect()),
        }
    }
}

/// `Σ_{n <= terms} e^{-k_n}` for the meta scheme.
pub fn meta_prefix_mass(terms: u64) -> f64 {
    (1..=terms).map(|n| (-meta_complexity(n)).exp()).sum()
}

/// `Σ_{t <= terms} t^d e^{-1-(d+2) ln t}`: every round contributes at most
/// `t^d` keys at the inner price.
pub fn analytic_inner_mass(dim: u32, terms: u64) -> f64 {
    (1..=terms)
        .map(|t| {
            let t = t as f64;
            (f64::from(dim) * t.ln() - 1.0 - (f64::from(dim) + 2.0) * t.ln()).exp()
        })
        .sum()
}

/// Mass of an actual pool with all keys of length `<= dim` and last index
/// `<= horizon`, including the empty key.
pub fn pool_mass(dim: u32, horizon: u64) -> f64 {
    let mut mass = (-inner_complexity(dim, None)).exp();
    for t in 1..=horizon {
        // keys ending at t: choose the other L-1 indices below t
        let count: f64 = (1..=dim).map(|l| binomial(t - 1, u64::from(l) - 1)).sum();
        mass += count * (-inner_complexity(dim, Some(t))).exp();
    }
    mass
}

fn binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Running `Σ e^{-k_i}` over registered experts, rejecting any registration
/// that would push it past 1.
#[derive(Clone, Debug, Default)]
pub struct MassTracker {
    mass: f64,
}

impl MassTracker {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn register(&mut self, k: f64) -> Result<(), FplError> {
        if !k.is_finite() || k < 0.0 {
            return Err(FplError::BadComplexity(k));
        }
        let mass = self.mass + (-k).exp();
        if mass > 1.0 + MASS_TOLERANCE {
            return Err(FplError::Mass { mass });
        }
        self.mass = mass;
        Ok(())
    }
}
