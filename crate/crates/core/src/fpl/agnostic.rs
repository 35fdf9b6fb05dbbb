use serde::{Deserialize, Serialize};

use super::{derive_seed, inner_complexity, meta_complexity, perturbed_leader, ExpertPool, FplError, MassTracker, Perturber, Redraw};
use crate::hypothesis::{ClassFamily, ConceptClass, Point};
use crate::learners::{Learner, LearnerError};

/// FPL over the growing pool of keyed SOA experts of one class, with
/// complexity `1 + (d + 2)·ln j` for keys ending at `j`.
pub struct PoolFpl {
    pool: ExpertPool,
    k: Vec<f64>,
    mass: MassTracker,
    perturber: Perturber,
    mistakes: u64,
    pending: Option<(Point, bool)>,
}

impl PoolFpl {
    pub fn new(class: &ConceptClass, dim: u32, redraw: Redraw, seed: u64) -> Result<Self, FplError> {
        let pool = ExpertPool::new(class, dim);
        let mut mass = MassTracker::new();
        let k0 = inner_complexity(dim, None);
        mass.register(k0)?;
        Ok(Self {
            pool,
            k: vec![k0],
            mass,
            perturber: Perturber::new(redraw, seed),
            mistakes: 0,
            pending: None,
        })
    }

    pub fn pool(&self) -> &ExpertPool {
        &self.pool
    }

    pub fn mass(&self) -> f64 {
        self.mass.mass()
    }

    fn extend(&mut self) -> Result<(), LearnerError> {
        let t = self.pool.round() + 1;
        let added = self.pool.extend(t);
        let k = inner_complexity(self.pool.dim(), Some(t));
        for _ in 0..added {
            self.mass.register(k)?;
            self.k.push(k);
        }
        Ok(())
    }
}

impl Learner for PoolFpl {
    fn predict(&mut self, x: &Point) -> Result<bool, LearnerError> {
        if let Some((p, label)) = &self.pending {
            if p == x {
                return Ok(*label);
            }
        }
        self.extend()?;
        self.pool.prepare(x)?;
        let t = self.pool.round() + 1;
        let q = self.perturber.round(self.pool.len());
        let i = perturbed_leader(t, self.pool.experts().iter().map(|e| e.loss), &self.k, q);
        let label = self.pool.label(i);
        self.pending = Some((x.clone(), label));
        Ok(label)
    }

    fn absorb(&mut self, x: &Point, y: bool) -> Result<(), LearnerError> {
        let label = self.predict(x)?;
        self.pending = None;
        if label != y {
            self.mistakes += 1;
        }
        self.pool.absorb(x, y)
    }

    fn mistakes(&self) -> u64 {
        self.mistakes
    }

    fn is_deterministic(&self) -> bool {
        false
    }

    fn name(&self) -> String {
        format!("pool-fpl(d={})", self.pool.dim())
    }
}

/// Settings of [`AgnosticFpl`].
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgnosticOptions {
    #[serde(default)]
    pub redraw: Redraw,
    /// Number of components `H_1..H_N` to run; defaults to the family size.
    #[serde(default)]
    pub components: Option<usize>,
    #[serde(default = "default_cap_d")]
    pub cap_d: u32,
    #[serde(default = "default_cap_t", rename = "cap_T", alias = "cap_t")]
    pub cap_t: u64,
}

fn default_cap_d() -> u32 {
    2
}

fn default_cap_t() -> u64 {
    500
}

impl Default for AgnosticOptions {
    fn default() -> Self {
        Self {
            redraw: Redraw::PerRound,
            components: None,
            cap_d: default_cap_d(),
            cap_t: default_cap_t(),
        }
    }
}

/// Meta FPL over one [`PoolFpl`] per component, with `k_n = 2(ln n + 1)`.
/// Every inner instance predicts and learns every round, so the meta
/// losses are their exact counterfactual mistake counts.
pub struct AgnosticFpl {
    inners: Vec<PoolFpl>,
    k: Vec<f64>,
    meta_losses: Vec<u64>,
    perturber: Perturber,
    labels: Vec<bool>,
    round: u64,
    cap_t: u64,
    mistakes: u64,
    pending: Option<(Point, bool)>,
}

impl AgnosticFpl {
    pub fn new(family: &ClassFamily, options: &AgnosticOptions, seed: u64) -> Result<Self, LearnerError> {
        let n = match (options.components, family.component_count()) {
            (Some(n), Some(len)) => n.min(len),
            (Some(n), None) => n,
            (None, Some(len)) => len,
            (None, None) => return Err(FplError::Unbounded.into()),
        };
        if n == 0 {
            return Err(LearnerError::Config("the meta learner needs at least one component".into()));
        }
        let mut inners = Vec::with_capacity(n);
        let mut mass = MassTracker::new();
        let mut k = Vec::with_capacity(n);
        for index in 1..=n {
            let c = family.component(index)?;
            if c.dim > options.cap_d {
                return Err(FplError::DimCap {
                    index,
                    dim: c.dim,
                    cap: options.cap_d,
                }
                .into());
            }
            inners.push(PoolFpl::new(&c.class, c.dim, options.redraw, derive_seed(seed, index as u64))?);
            let kn = meta_complexity(index as u64);
            mass.register(kn)?;
            k.push(kn);
        }
        Ok(Self {
            meta_losses: vec![0; n],
            inners,
            k,
            perturber: Perturber::new(options.redraw, derive_seed(seed, 0)),
            labels: Vec::new(),
            round: 0,
            cap_t: options.cap_t,
            mistakes: 0,
            pending: None,
        })
    }

    pub fn inners(&self) -> &[PoolFpl] {
        &self.inners
    }

    /// Counterfactual mistakes of each inner instance.
    pub fn meta_losses(&self) -> &[u64] {
        &self.meta_losses
    }
}

impl Learner for AgnosticFpl {
    fn predict(&mut self, x: &Point) -> Result<bool, LearnerError> {
        if let Some((p, label)) = &self.pending {
            if p == x {
                return Ok(*label);
            }
        }
        let t = self.round + 1;
        if t > self.cap_t {
            return Err(FplError::HorizonCap { round: t, cap: self.cap_t }.into());
        }
        self.labels.clear();
        for inner in &mut self.inners {
            self.labels.push(inner.predict(x)?);
        }
        let q = self.perturber.round(self.inners.len());
        let n = perturbed_leader(t, self.meta_losses.iter().copied(), &self.k, q);
        let label = self.labels[n];
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
        for (n, inner) in self.inners.iter_mut().enumerate() {
            if self.labels[n] != y {
                self.meta_losses[n] += 1;
            }
            inner.absorb(x, y)?;
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
        "agnostic-fpl".into()
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::hypothesis::FiniteClass;

    fn coin_family() -> ClassFamily {
        let c = FiniteClass::from_bits(vec![Point::int(0)], vec![vec![0], vec![1]]).unwrap();
        ClassFamily::explicit(vec![c], None).unwrap()
    }

    #[test]
    fn meta_losses_are_inner_mistakes() {
        let fam = ClassFamily::FiniteSupport { domain_size: Some(4) };
        let opts = AgnosticOptions {
            components: Some(2),
            ..AgnosticOptions::default()
        };
        let mut a = AgnosticFpl::new(&fam, &opts, 3).unwrap();
        for t in 0..40i64 {
            let x = Point::int(t % 4 + 1);
            a.absorb(&x, t % 3 == 0).unwrap();
        }
        let inner: Vec<u64> = a.inners().iter().map(|i| i.mistakes()).collect();
        assert_eq!(a.meta_losses(), &inner[..]);
        for inner in a.inners() {
            assert!(inner.mass() < 0.83);
        }
    }

    #[test]
    fn caps_are_enforced() {
        let fam = ClassFamily::FiniteSupport { domain_size: None };
        assert!(matches!(
            AgnosticFpl::new(&fam, &AgnosticOptions::default(), 1),
            Err(LearnerError::Fpl(FplError::Unbounded))
        ));
        let opts = AgnosticOptions {
            components: Some(3),
            ..AgnosticOptions::default()
        };
        assert!(matches!(
            AgnosticFpl::new(&fam, &opts, 1),
            Err(LearnerError::Fpl(FplError::DimCap { index: 3, .. }))
        ));
        let opts = AgnosticOptions {
            cap_t: 2,
            ..AgnosticOptions::default()
        };
        let mut a = AgnosticFpl::new(&coin_family(), &opts, 1).unwrap();
        a.absorb(&Point::int(0), true).unwrap();
        a.absorb(&Point::int(0), true).unwrap();
        assert!(a.predict(&Point::int(0)).is_err());
    }

    #[test]
    fn pool_fpl_is_reproducible() {
        let class = ConceptClass::Finite(Arc::new(FiniteClass::full(vec![Point::named("a"), Point::named("b")])));
        let run = || {
            let mut f = PoolFpl::new(&class, 2, Redraw::PerRound, 5).unwrap();
            (0..30)
                .map(|t| {
                    let x = Point::named(if t % 2 == 0 { "a" } else { "b" });
                    let p = f.predict(&x).unwrap();
                    f.absorb(&x, t % 5 < 2).unwrap();
                    p
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(run(), run());
    }
}
