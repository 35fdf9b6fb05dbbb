use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::point::{format_rational, parse_rational, Point, Rational};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum MeasureError {
    #[error("support has {support} points but {masses} masses were given")]
    Length { support: usize, masses: usize },
    #[error("mass of {point} is not positive")]
    NonPositive { point: String },
    #[error("masses sum to {0}, not 1")]
    NotNormalized(String),
    #[error("point {0} appears twice in the support")]
    DuplicatePoint(String),
    #[error("cannot parse mass {0:?} as a rational")]
    BadMass(String),
    #[error("common denominator of the masses exceeds 64 bits")]
    TooFine,
    #[error("a measure needs at least one point")]
    Empty,
}

/// A probability measure with finite support and exact rational masses.
#[derive(Clone, Debug)]
pub struct DiscreteMeasure {
    support: Vec<Point>,
    mass: Vec<Rational>,
    /// Masses scaled to a common integer denominator.
    weights: Vec<u64>,
}

impl DiscreteMeasure {
    pub fn new(support: Vec<Point>, mass: Vec<Rational>) -> Result<Self, MeasureError> {
        if support.is_empty() {
            return Err(MeasureError::Empty);
        }
        if support.len() != mass.len() {
            return Err(MeasureError::Length {
                support: support.len(),
                masses: mass.len(),
            });
        }
        let mut seen = HashSet::new();
        for (p, m) in support.iter().zip(&mass) {
            if !seen.insert(p) {
                return Err(MeasureError::DuplicatePoint(p.to_string()));
            }
            if !m.is_positive() {
                return Err(MeasureError::NonPositive { point: p.to_string() });
            }
        }
        let total: Rational = mass.iter().sum();
        if !total.is_one() {
            return Err(MeasureError::NotNormalized(format_rational(&total)));
        }
        let denom = mass.iter().fold(BigInt::one(), |acc, m| acc.lcm(m.denom()));
        let weights = mass
            .iter()
            .map(|m| (m.numer() * (&denom / m.denom())).to_u64().ok_or(MeasureError::TooFine))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { support, mass, weights })
    }

    /// Parses masses written as `"p/q"` strings.
    pub fn parse(support: Vec<Point>, mass: &[String]) -> Result<Self, MeasureError> {
        let mass = mass
            .iter()
            .map(|s| parse_rational(s).ok_or_else(|| MeasureError::BadMass(s.clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(support, mass)
    }

    /// Mass `2^-i` on the i-th point, with the residual `2^-(n-1)` folded
    /// onto the last point so the total is exactly 1.
    pub fn geometric(support: Vec<Point>) -> Result<Self, MeasureError> {
        let n = support.len();
        if n == 0 {
            return Err(MeasureError::Empty);
        }
        let mass = (1..=n)
            .map(|i| {
                let exp = if i == n { n - 1 } else { i };
                Rational::new(BigInt::one(), BigInt::one() << exp)
            })
            .collect();
        Self::new(support, mass)
    }

    pub fn support(&self) -> &[Point] {
        &self.support
    }

    pub fn mass(&self, i: usize) -> &Rational {
        &self.mass[i]
    }

    pub fn mass_of(&self, x: &Point) -> Rational {
        self.support
            .iter()
            .position(|p| p == x)
            .map_or_else(Rational::zero, |i| self.mass[i].clone())
    }

    /// Draws one support point; exact, via integer weights.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> &Point {
        let dist = WeightedIndex::new(&self.weights).expect("weights are positive");
        &self.support[dist.sample(rng)]
    }

    pub fn sampler(&self, seed: u64) -> MeasureSampler {
        MeasureSampler {
            support: self.support.clone(),
            dist: WeightedIndex::new(&self.weights).expect("weights are positive"),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

/// A seeded iid stream from a [`DiscreteMeasure`]; the n-th draw depends only
/// on the seed and n.
#[derive(Clone, Debug)]
pub struct MeasureSampler {
    support: Vec<Point>,
    dist: WeightedIndex<u64>,
    rng: ChaCha8Rng,
}

impl MeasureSampler {
    pub fn next_point(&mut self) -> Point {
        self.support[self.dist.sample(&mut self.rng)].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(n: i64) -> Vec<Point> {
        (1..=n).map(Point::int).collect()
    }

    #[test]
    fn point_mass() {
        let m = DiscreteMeasure::parse(vec![Point::named("a")], &["1".into()]).unwrap();
        let mut s = m.sampler(3);
        assert!((0..100).all(|_| s.next_point() == Point::named("a")));
    }

    #[test]
    fn fair_pair_frequency() {
        let m = DiscreteMeasure::parse(
            vec![Point::named("a"), Point::named("b")],
            &["1/2".into(), "1/2".into()],
        )
        .unwrap();
        let mut s = m.sampler(11);
        let hits = (0..10_000).filter(|_| s.next_point() == Point::named("a")).count();
        // sd of the frequency is 0.005; [0.45, 0.55] is a 10-sigma band.
        assert!((4_500..=5_500).contains(&hits), "{hits}");
    }

    #[test]
    fn geometric_masses_and_frequency() {
        let m = DiscreteMeasure::geometric(pts(20)).unwrap();
        assert_eq!(m.mass(0), &Rational::new(1.into(), 2.into()));
        assert_eq!(m.mass(19), m.mass(18));
        let mut s = m.sampler(5);
        let hits = (0..10_000).filter(|_| s.next_point() == Point::int(1)).count();
        assert!((4_600..=5_400).contains(&hits), "{hits}");
    }

    #[test]
    fn sampler_is_reproducible() {
        let m = DiscreteMeasure::geometric(pts(20)).unwrap();
        let a: Vec<Point> = {
            let mut s = m.sampler(99);
            (0..50).map(|_| s.next_point()).collect()
        };
        let mut s = m.sampler(99);
        let b: Vec<Point> = (0..50).map(|_| s.next_point()).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_invalid_measures() {
        let two = vec![Point::named("a"), Point::named("b")];
        assert!(matches!(
            DiscreteMeasure::parse(two.clone(), &["1/2".into(), "1/3".into()]),
            Err(MeasureError::NotNormalized(_))
        ));
        assert!(matches!(
            DiscreteMeasure::parse(two.clone(), &["1".into(), "0".into()]),
            Err(MeasureError::NonPositive { .. })
        ));
        assert!(matches!(
            DiscreteMeasure::parse(two, &["x".into(), "1".into()]),
            Err(MeasureError::BadMass(_))
        ));
    }
}
