//! Hypothesis classes: explicit finite classes, symbolic single classes,
//! countable unions of them, and discrete measures over countable domains.

mod bitset;
mod class;
mod family;
pub mod io;
mod measure;
mod point;

pub use bitset::HypSet;
pub use class::{ClassError, FiniteClass, Hypothesis};
pub use family::{stern_brocot, ClassFamily, Component, ConceptClass, FamilyError, FamilyKind};
pub use measure::{DiscreteMeasure, MeasureError, MeasureSampler};
pub use point::{format_rational, parse_rational, Point, Rational};
