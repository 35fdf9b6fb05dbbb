use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{LdimOracle, LittlestoneError};
use crate::hypothesis::{ClassError, ConceptClass, HypSet, Hypothesis, Point, Rational};

/// Identity of a version space within its class; two spaces of the same
/// class with equal keys contain the same hypotheses.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SpaceKey {
    Explicit(HypSet),
    Singleton(bool),
    /// Points forced to 1 and to 0.
    FiniteSupport { ones: BTreeSet<u64>, zeros: BTreeSet<u64> },
    /// Surviving cut indices `lo..=hi` (cut `j / 2^bits`).
    Dyadic { lo: BigInt, hi: BigInt },
}

#[derive(Clone, Debug)]
enum SpaceClass {
    Explicit(Arc<LdimOracle>),
    Singleton(Hypothesis),
    FiniteSupport { max_ones: u64, domain_size: Option<u64> },
    Dyadic { bits: u32 },
}

/// The hypotheses of a class consistent with a list of `(point, label)`
/// constraints, with a lazily computed Littlestone dimension.
#[derive(Clone, Debug)]
pub struct VersionSpace {
    class: SpaceClass,
    key: SpaceKey,
    constraints: Vec<(Point, bool)>,
    dim: OnceLock<u32>,
}

impl VersionSpace {
    /// The whole class, with no constraints applied.
    pub fn new(class: &ConceptClass) -> Self {
        let (class, key) = match class {
            ConceptClass::Finite(c) => (
                SpaceClass::Explicit(Arc::new(LdimOracle::new(c.clone()))),
                SpaceKey::Explicit(c.all()),
            ),
            ConceptClass::Singleton(h) => (SpaceClass::Singleton(h.clone()), SpaceKey::Singleton(true)),
            ConceptClass::FiniteSupport { max_ones, domain_size } => (
                SpaceClass::FiniteSupport {
                    max_ones: *max_ones,
                    domain_size: *domain_size,
                },
                SpaceKey::FiniteSupport {
                    ones: BTreeSet::new(),
                    zeros: BTreeSet::new(),
                },
            ),
            ConceptClass::DyadicThresholds { bits } => (
                SpaceClass::Dyadic { bits: *bits },
                SpaceKey::Dyadic {
                    lo: BigInt::zero(),
                    hi: BigInt::one() << *bits,
                },
            ),
        };
        Self {
            class,
            key,
            constraints: Vec::new(),
            dim: OnceLock::new(),
        }
    }

    /// A root space over an explicit class that reuses an existing oracle.
    pub fn with_oracle(oracle: Arc<LdimOracle>) -> Self {
        let key = SpaceKey::Explicit(oracle.class().all());
        Self {
            class: SpaceClass::Explicit(oracle),
            key,
            constraints: Vec::new(),
            dim: OnceLock::new(),
        }
    }

    pub fn key(&self) -> &SpaceKey {
        &self.key
    }

    pub fn constraints(&self) -> &[(Point, bool)] {
        &self.constraints
    }

    pub fn is_empty(&self) -> bool {
        match (&self.class, &self.key) {
            (_, SpaceKey::Explicit(set)) => set.is_empty(),
            (_, SpaceKey::Singleton(alive)) => !alive,
            (SpaceClass::FiniteSupport { max_ones, .. }, SpaceKey::FiniteSupport { ones, zeros }) => {
                ones.len() as u64 > *max_ones || !ones.is_disjoint(zeros)
            }
            (_, SpaceKey::Dyadic { lo, hi }) => lo > hi,
            _ => unreachable!("space key does not match its class"),
        }
    }

    /// The sub-space with `h(x) = y`.
    pub fn restrict(&self, x: &Point, y: bool) -> Result<VersionSpace, ClassError> {
        let key = match (&self.class, &self.key) {
            (SpaceClass::Explicit(oracle), SpaceKey::Explicit(set)) => {
                let class = oracle.class();
                SpaceKey::Explicit(class.split(set, class.point_index(x)?, y))
            }
            (SpaceClass::Singleton(h), SpaceKey::Singleton(alive)) => SpaceKey::Singleton(*alive && h.eval(x)? == y),
            (SpaceClass::FiniteSupport { domain_size, .. }, SpaceKey::FiniteSupport { ones, zeros }) => {
                let i = match x.positive_integer() {
                    Some(i) if domain_size.is_none_or(|m| i <= m) => i,
                    _ => return Err(ClassError::InvalidPoint(x.to_string())),
                };
                let (mut ones, mut zeros) = (ones.clone(), zeros.clone());
                if y {
                    ones.insert(i);
                } else {
                    zeros.insert(i);
                }
                SpaceKey::FiniteSupport { ones, zeros }
            }
            (SpaceClass::Dyadic { bits }, SpaceKey::Dyadic { lo, hi }) => {
                let v = x.value().ok_or_else(|| ClassError::InvalidPoint(x.to_string()))?;
                // Cuts j with j / 2^bits <= x are those with j <= floor(x 2^bits).
                let scaled: Rational = v * Rational::from_integer(BigInt::one() << *bits);
                let below = scaled.floor().to_integer();
                if y {
                    SpaceKey::Dyadic {
                        lo: lo.clone(),
                        hi: hi.clone().min(below),
                    }
                } else {
                    SpaceKey::Dyadic {
                        lo: lo.clone().max(below + 1),
                        hi: hi.clone(),
                    }
                }
            }
            _ => unreachable!("space key does not match its class"),
        };
        let mut constraints = self.constraints.clone();
        constraints.push((x.clone(), y));
        Ok(VersionSpace {
            class: self.class.clone(),
            key,
            constraints,
            dim: OnceLock::new(),
        })
    }

    /// Littlestone dimension of this space; an error when empty.
    pub fn ldim(&self) -> Result<u32, LittlestoneError> {
        if let Some(&d) = self.dim.get() {
            return Ok(d);
        }
        if self.is_empty() {
            return Err(LittlestoneError::EmptyClass);
        }
        let d = match (&self.class, &self.key) {
            (SpaceClass::Explicit(oracle), SpaceKey::Explicit(set)) => oracle.ldim(set)?,
            (_, SpaceKey::Singleton(_)) => 0,
            (SpaceClass::FiniteSupport { max_ones, domain_size }, SpaceKey::FiniteSupport { ones, zeros }) => {
                // Subsets of the free points with at most (budget) ones.
                let budget = max_ones - ones.len() as u64;
                let dim = match domain_size {
                    Some(m) => budget.min(m - ones.union(zeros).count() as u64),
                    None => budget,
                };
                u32::try_from(dim).unwrap_or(u32::MAX)
            }
            (_, SpaceKey::Dyadic { lo, hi }) => {
                // k distinct thresholds on a line: binary search depth floor(log2 k).
                let count: BigInt = hi - lo + 1;
                debug_assert!(count.is_positive());
                u32::try_from(count.bits() - 1).unwrap_or(u32::MAX)
            }
            _ => unreachable!("space key does not match its class"),
        };
        let _ = self.dim.set(d);
        Ok(d)
    }

    /// Surviving rows, for explicit classes.
    pub fn members(&self) -> Option<&HypSet> {
        match &self.key {
            SpaceKey::Explicit(set) => Some(set),
            _ => None,
        }
    }

    /// A hypothesis in the space, if any.
    pub fn witness_hypothesis(&self) -> Option<Hypothesis> {
        if self.is_empty() {
            return None;
        }
        match (&self.class, &self.key) {
            (SpaceClass::Explicit(oracle), SpaceKey::Explicit(set)) => Some(Hypothesis::Row {
                class: oracle.class().clone(),
                index: set.first()?,
            }),
            (SpaceClass::Singleton(h), _) => Some(h.clone()),
            (SpaceClass::FiniteSupport { .. }, SpaceKey::FiniteSupport { ones, .. }) => Some(Hypothesis::Indicator(
                ones.iter().map(|&i| Point::int(i as i64)).collect(),
            )),
            (SpaceClass::Dyadic { bits }, SpaceKey::Dyadic { hi, .. }) => Some(Hypothesis::Threshold(Rational::new(
                hi.clone(),
                BigInt::one() << *bits,
            ))),
            _ => unreachable!("space key does not match its class"),
        }
    }
}
