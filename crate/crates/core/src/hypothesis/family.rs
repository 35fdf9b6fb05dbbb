//! Single concept classes (explicit or symbolic) and countable unions of them.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::class::{ClassError, FiniteClass, Hypothesis};
use super::point::{Point, Rational};
use crate::littlestone;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("component indices start at 1")]
    ZeroIndex,
    #[error("component {index} requested but the family has {len} components")]
    OutOfRange { index: usize, len: usize },
    #[error("component {index} declares dimension {declared} but its Littlestone dimension is {computed}")]
    DimMismatch { index: usize, declared: u32, computed: u32 },
    #[error("component {0} is empty")]
    EmptyComponent(usize),
    #[error("{declared} dimensions declared for {components} components")]
    DimCount { declared: usize, components: usize },
}

/// A single hypothesis class a learner can run SOA over.
///
/// Explicit classes are dense matrices; the symbolic variants are evaluated
/// by formula and never materialized.
#[derive(Clone, Debug)]
pub enum ConceptClass {
    Finite(Arc<FiniteClass>),
    Singleton(Hypothesis),
    /// `{h : |h⁻¹(1)| <= max_ones}` over the positive integers, or over
    /// `1..=domain_size` when truncated.
    FiniteSupport { max_ones: u64, domain_size: Option<u64> },
    /// Thresholds `1[x >= j / 2^bits]` for `j = 0..=2^bits`, over rational points.
    DyadicThresholds { bits: u32 },
}

impl ConceptClass {
    /// Checks that `x` belongs to the class domain.
    pub fn check_point(&self, x: &Point) -> Result<(), ClassError> {
        match self {
            ConceptClass::Finite(c) => c.point_index(x).map(|_| ()),
            ConceptClass::Singleton(h) => h.eval(x).map(|_| ()),
            ConceptClass::FiniteSupport { domain_size, .. } => match x.positive_integer() {
                Some(i) if domain_size.is_none_or(|m| i <= m) => Ok(()),
                _ => Err(ClassError::InvalidPoint(x.to_string())),
            },
            ConceptClass::DyadicThresholds { .. } => x
                .value()
                .map(|_| ())
                .ok_or_else(|| ClassError::InvalidPoint(x.to_string())),
        }
    }

    /// Fewest mistakes any member makes on `data`.
    pub fn best_mistakes(&self, data: &[(Point, bool)]) -> Result<u64, ClassError> {
        for (x, _) in data {
            self.check_point(x)?;
        }
        match self {
            ConceptClass::Finite(c) => {
                let cols = data
                    .iter()
                    .map(|(x, y)| Ok((c.point_index(x)?, *y)))
                    .collect::<Result<Vec<_>, ClassError>>()?;
                Ok((0..c.len())
                    .map(|h| cols.iter().filter(|(xi, y)| c.row(h)[*xi] != *y).count() as u64)
                    .min()
                    .unwrap_or(u64::MAX))
            }
            ConceptClass::Singleton(h) => {
                let mut m = 0;
                for (x, y) in data {
                    m += u64::from(h.eval(x)? != *y);
                }
                Ok(m)
            }
            ConceptClass::FiniteSupport { max_ones, .. } => {
                // Start from the all-zero hypothesis; switching a point to 1
                // gains (#ones - #zeros) observed there.
                let mut balance: BTreeMap<&Point, (u64, u64)> = BTreeMap::new();
                for (x, y) in data {
                    let e = balance.entry(x).or_default();
                    if *y {
                        e.1 += 1;
                    } else {
                        e.0 += 1;
                    }
                }
                let base: u64 = balance.values().map(|(_, ones)| ones).sum();
                let mut gains: Vec<u64> = balance
                    .values()
                    .filter(|(zeros, ones)| ones > zeros)
                    .map(|(zeros, ones)| ones - zeros)
                    .collect();
                gains.sort_unstable_by(|a, b| b.cmp(a));
                let take = usize::try_from(*max_ones).unwrap_or(usize::MAX);
                Ok(base - gains.iter().take(take).sum::<u64>())
            }
            ConceptClass::DyadicThresholds { bits } => {
                let scale = Rational::from_integer(BigInt::one() << *bits);
                let mut cuts: BTreeSet<Rational> = BTreeSet::new();
                cuts.insert(Rational::zero());
                cuts.insert(Rational::one());
                for (x, _) in data {
                    let v = x.value().expect("checked above");
                    let c = (v * &scale).ceil() / &scale;
                    if c > Rational::zero() && c < Rational::one() {
                        cuts.insert(c);
                    }
                }
                Ok(cuts
                    .iter()
                    .map(|c| {
                        data.iter()
                            .filter(|(x, y)| (x.value().expect("checked above") >= c) != *y)
                            .count() as u64
                    })
                    .min()
                    .expect("at least two cuts"))
            }
        }
    }
}

/// Which built-in decomposition a family uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    ExplicitList,
    RationalThresholds,
    FiniteSupport,
    NaturalThresholds,
}

/// One member `H_n` of a countable union, with its Littlestone dimension.
#[derive(Clone, Debug)]
pub struct Component {
    pub index: usize,
    pub dim: u32,
    pub class: ConceptClass,
}

/// A countable union `H = ∪ₙ Hₙ` of Littlestone classes.
#[derive(Clone, Debug)]
pub enum ClassFamily {
    /// A finite list of explicit classes; dimensions are verified at load.
    ExplicitList(Vec<Component>),
    /// Singletons `{1[x >= q_n]}` with `q_n` the n-th rational of `[0,1]` in
    /// Stern–Brocot order.
    RationalThresholds,
    /// Singletons `{1[x >= n]}` over the positive integers.
    NaturalThresholds,
    /// `Hₙ = {h : |h⁻¹(1)| <= n}`.
    FiniteSupport { domain_size: Option<u64> },
}

impl ClassFamily {
    /// Builds an explicit-list family, computing each component's dimension
    /// and checking it against `declared` when given.
    pub fn explicit(classes: Vec<FiniteClass>, declared: Option<Vec<u32>>) -> Result<Self, FamilyError> {
        if let Some(d) = &declared {
            if d.len() != classes.len() {
                return Err(FamilyError::DimCount {
                    declared: d.len(),
                    components: classes.len(),
                });
            }
        }
        let mut components = Vec::with_capacity(classes.len());
        for (i, class) in classes.into_iter().enumerate() {
            let index = i + 1;
            let computed = littlestone::ldim(&class).map_err(|_| FamilyError::EmptyComponent(index))?;
            if let Some(d) = &declared {
                if d[i] != computed {
                    return Err(FamilyError::DimMismatch {
                        index,
                        declared: d[i],
                        computed,
                    });
                }
            }
            components.push(Component {
                index,
                dim: computed,
                class: ConceptClass::Finite(Arc::new(class)),
            });
        }
        Ok(ClassFamily::ExplicitList(components))
    }

    pub fn kind(&self) -> FamilyKind {
        match self {
            ClassFamily::ExplicitList(_) => FamilyKind::ExplicitList,
            ClassFamily::RationalThresholds => FamilyKind::RationalThresholds,
            ClassFamily::NaturalThresholds => FamilyKind::NaturalThresholds,
            ClassFamily::FiniteSupport { .. } => FamilyKind::FiniteSupport,
        }
    }

    /// Number of components, `None` when the union is infinite.
    pub fn component_count(&self) -> Option<usize> {
        match self {
            ClassFamily::ExplicitList(c) => Some(c.len()),
            _ => None,
        }
    }

    pub fn component(&self, n: usize) -> Result<Component, FamilyError> {
        if n == 0 {
            return Err(FamilyError::ZeroIndex);
        }
        match self {
            ClassFamily::ExplicitList(list) => list.get(n - 1).cloned().ok_or(FamilyError::OutOfRange {
                index: n,
                len: list.len(),
            }),
            ClassFamily::RationalThresholds => Ok(Component {
                index: n,
                dim: 0,
                class: ConceptClass::Singleton(Hypothesis::Threshold(stern_brocot(n as u64))),
            }),
            ClassFamily::NaturalThresholds => Ok(Component {
                index: n,
                dim: 0,
                class: ConceptClass::Singleton(Hypothesis::Threshold(Rational::from_integer(BigInt::from(n)))),
            }),
            ClassFamily::FiniteSupport { domain_size } => {
                let max_ones = n as u64;
                let dim = domain_size.map_or(max_ones, |m| max_ones.min(m));
                Ok(Component {
                    index: n,
                    dim: u32::try_from(dim).unwrap_or(u32::MAX),
                    class: ConceptClass::FiniteSupport {
                        max_ones,
                        domain_size: *domain_size,
                    },
                })
            }
        }
    }
}

/// The n-th element (1-based) of `ℚ ∩ [0,1]`: `0`, `1`, then the Stern–Brocot
/// tree between them in breadth-first order (`1/2, 1/3, 2/3, 1/4, 2/5, ...`).
pub fn stern_brocot(n: u64) -> Rational {
    assert!(n >= 1, "enumeration is 1-based");
    match n {
        1 => return Rational::zero(),
        2 => return Rational::one(),
        _ => {}
    }
    let m = n - 2;
    let level = 63 - m.leading_zeros();
    let pos = m - (1u64 << level);
    let (mut lo_n, mut lo_d) = (BigInt::zero(), BigInt::one());
    let (mut hi_n, mut hi_d) = (BigInt::one(), BigInt::one());
    let mut mid = (&lo_n + &hi_n, &lo_d + &hi_d);
    for bit in (0..level).rev() {
        if (pos >> bit) & 1 == 0 {
            (hi_n, hi_d) = mid;
        } else {
            (lo_n, lo_d) = mid;
        }
        mid = (&lo_n + &hi_n, &lo_d + &hi_d);
    }
    debug_assert!(mid.0.gcd(&mid.1).is_one());
    Rational::new_raw(mid.0, mid.1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stern_brocot_prefix() {
        let got: Vec<String> = (1..=9).map(|n| super::super::point::format_rational(&stern_brocot(n))).collect();
        assert_eq!(got, ["0", "1", "1/2", "1/3", "2/3", "1/4", "2/5", "3/5", "3/4"]);
    }

    #[test]
    fn stern_brocot_is_injective_and_reduced() {
        let mut seen = BTreeSet::new();
        for n in 1..=4096 {
            let q = stern_brocot(n);
            assert!(q.numer().gcd(q.denom()).is_one());
            assert!(q >= Rational::zero() && q <= Rational::one());
            assert!(seen.insert(q), "duplicate at {n}");
        }
    }

    #[test]
    fn finite_support_components() {
        let fam = ClassFamily::FiniteSupport { domain_size: Some(12) };
        let c = fam.component(1).unwrap();
        assert_eq!(c.dim, 1);
        assert_eq!(fam.component(20).unwrap().dim, 12);
        assert_eq!(fam.component(0).unwrap_err(), FamilyError::ZeroIndex);
    }

    #[test]
    fn rational_threshold_components_are_singletons() {
        let fam = ClassFamily::RationalThresholds;
        let c = fam.component(3).unwrap();
        assert_eq!(c.dim, 0);
        match c.class {
            ConceptClass::Singleton(Hypothesis::Threshold(q)) => assert_eq!(q, stern_brocot(3)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn explicit_family_checks_dims() {
        let pts = vec![Point::named("a"), Point::named("b")];
        let full = FiniteClass::full(pts.clone());
        let fam = ClassFamily::explicit(vec![full.clone()], Some(vec![2])).unwrap();
        assert_eq!(fam.component(1).unwrap().dim, 2);
        assert_eq!(
            ClassFamily::explicit(vec![full], Some(vec![1])).unwrap_err(),
            FamilyError::DimMismatch {
                index: 1,
                declared: 1,
                computed: 2
            }
        );
        assert!(matches!(fam.component(2), Err(FamilyError::OutOfRange { index: 2, len: 1 })));
    }

    #[test]
    fn best_mistakes_finite_support_matches_enumeration() {
        // Over {1..5} with at most 2 ones: compare the greedy rule against the
        // explicit class of all subsets of size <= 2.
        let pts: Vec<Point> = (1..=5).map(Point::int).collect();
        let mut rows = Vec::new();
        for mask in 0u32..32 {
            if mask.count_ones() <= 2 {
                rows.push((0..5).map(|i| u8::from(mask >> i & 1 == 1)).collect());
            }
        }
        let explicit = ConceptClass::Finite(Arc::new(FiniteClass::from_bits(pts, rows).unwrap()));
        let symbolic = ConceptClass::FiniteSupport {
            max_ones: 2,
            domain_size: Some(5),
        };
        let data: Vec<(Point, bool)> = [(1, true), (1, true), (2, true), (3, true), (3, false), (4, true), (1, false)]
            .iter()
            .map(|&(x, y)| (Point::int(x), y))
            .collect();
        for len in 0..=data.len() {
            assert_eq!(
                explicit.best_mistakes(&data[..len]).unwrap(),
                symbolic.best_mistakes(&data[..len]).unwrap()
            );
        }
    }

    #[test]
    fn best_mistakes_dyadic() {
        let class = ConceptClass::DyadicThresholds { bits: 3 };
        let data = vec![
            (Point::ratio(1, 4), false),
            (Point::ratio(3, 4), true),
            (Point::ratio(1, 2), true),
        ];
        assert_eq!(class.best_mistakes(&data).unwrap(), 0);
        let noisy = vec![(Point::ratio(1, 4), true), (Point::ratio(3, 4), false)];
        assert_eq!(class.best_mistakes(&noisy).unwrap(), 1);
    }
}
