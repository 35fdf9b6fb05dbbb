//! Exact Littlestone dimension, shattered-tree witnesses and the minimax
//! mistake oracle for finite classes.

mod minimax;
mod version_space;
mod witness;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::hypothesis::{ClassError, FiniteClass, HypSet};

pub use minimax::{minimax_mistakes, minimax_mistakes_with_cap, DEFAULT_MINIMAX_CAP};
pub use version_space::{SpaceKey, VersionSpace};
pub use witness::{node_index, shattered_tree_witness, verify_witness, ShatteredTreeWitness};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum LittlestoneError {
    #[error("the Littlestone dimension of an empty class is undefined")]
    EmptyClass,
    #[error("witness depth must be at least 1")]
    ZeroDepth,
    #[error("a depth-{depth} witness needs {expected} points, got {got}")]
    Structure { depth: u32, expected: usize, got: usize },
    #[error("oracle capacity exceeded: more than {limit} version spaces")]
    Capacity { limit: usize },
    #[error(transparent)]
    Class(#[from] ClassError),
}

/// Memo table for the Ldim recursion, keyed by the set of surviving rows.
#[derive(Debug, Default, Clone)]
pub struct LdimMemo {
    table: HashMap<HypSet, u32>,
}

impl LdimMemo {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    /// Overwrites an entry. Only fault-injection checks should need this: a
    /// wrong entry makes every dependent Ldim query wrong.
    pub fn inject(&mut self, members: HypSet, value: u32) {
        self.table.insert(members, value);
    }
}

/// Littlestone dimension of a non-empty finite class.
pub fn ldim(class: &FiniteClass) -> Result<u32, LittlestoneError> {
    ldim_of(class, &class.all(), &mut LdimMemo::new())
}

/// Littlestone dimension of the sub-class `members`, sharing `memo` across calls.
pub fn ldim_of(class: &FiniteClass, members: &HypSet, memo: &mut LdimMemo) -> Result<u32, LittlestoneError> {
    if members.is_empty() {
        return Err(LittlestoneError::EmptyClass);
    }
    Ok(ldim_rec(class, members, memo))
}

fn floor_log2(n: usize) -> u32 {
    debug_assert!(n > 0);
    usize::BITS - 1 - n.leading_zeros()
}

// Ldim(S) = max over splitting x of 1 + min(Ldim(S⁰), Ldim(S¹)), or 0 when no
// point splits S. Branches are pruned with Ldim(S) <= floor(log2 |S|).
fn ldim_rec(class: &FiniteClass, set: &HypSet, memo: &mut LdimMemo) -> u32 {
    if let Some(&v) = memo.table.get(set) {
        return v;
    }
    let ceiling = floor_log2(set.len());
    let mut best = 0;
    if ceiling > 0 {
        for xi in 0..class.domain().len() {
            let ones = class.ones(xi);
            if !set.splits(ones) {
                continue;
            }
            let with_one = set.intersection(ones);
            let with_zero = set.difference(ones);
            let (small, large) = if with_one.len() <= with_zero.len() {
                (with_one, with_zero)
            } else {
                (with_zero, with_one)
            };
            if floor_log2(small.len()) < best {
                continue;
            }
            let a = ldim_rec(class, &small, memo);
            if a < best {
                continue;
            }
            let b = ldim_rec(class, &large, memo);
            best = best.max(1 + a.min(b));
            if best == ceiling {
                break;
            }
        }
    }
    memo.table.insert(set.clone(), best);
    best
}

/// A finite class paired with a shared Ldim memo, so the many version spaces
/// of one run reuse each other's work.
#[derive(Debug)]
pub struct LdimOracle {
    class: Arc<FiniteClass>,
    memo: Mutex<LdimMemo>,
}

impl LdimOracle {
    pub fn new(class: Arc<FiniteClass>) -> Self {
        Self {
            class,
            memo: Mutex::new(LdimMemo::new()),
        }
    }

    pub fn class(&self) -> &Arc<FiniteClass> {
        &self.class
    }

    pub fn ldim(&self, members: &HypSet) -> Result<u32, LittlestoneError> {
        let mut memo = self.memo.lock().unwrap_or_else(|e| e.into_inner());
        ldim_of(&self.class, members, &mut memo)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypothesis::Point;

    fn points(n: usize) -> Vec<Point> {
        (0..n).map(|i| Point::named(format!("p{i}"))).collect()
    }

    #[test]
    fn singleton_has_dim_zero() {
        let c = FiniteClass::from_bits(points(3), vec![vec![0, 1, 1]]).unwrap();
        assert_eq!(ldim(&c).unwrap(), 0);
    }

    #[test]
    fn full_class_dims() {
        for d in 1..=4 {
            assert_eq!(ldim(&FiniteClass::full(points(d))).unwrap(), d as u32);
        }
    }

    #[test]
    fn thresholds_over_three_points() {
        let c = FiniteClass::integer_thresholds(&[1, 2, 3], &[1, 2, 3, 4]).unwrap();
        assert_eq!(ldim(&c).unwrap(), 2);
        // Seven points, eight cuts: binary search depth 3.
        let c = FiniteClass::integer_thresholds(&[1, 2, 3, 4, 5, 6, 7], &[1, 2, 3, 4, 5, 6, 7, 8]).unwrap();
        assert_eq!(ldim(&c).unwrap(), 3);
    }

    #[test]
    fn empty_class_is_an_error() {
        let c = FiniteClass::from_bits(points(2), vec![]).unwrap();
        assert_eq!(ldim(&c).unwrap_err(), LittlestoneError::EmptyClass);
    }

    #[test]
    fn injected_memo_entry_is_used() {
        let c = FiniteClass::full(points(2));
        let mut memo = LdimMemo::new();
        memo.inject(c.all(), 7);
        assert_eq!(ldim_of(&c, &c.all(), &mut memo).unwrap(), 7);
    }

    #[test]
    fn oracle_shares_memo() {
        let c = Arc::new(FiniteClass::full(points(3)));
        let oracle = LdimOracle::new(c.clone());
        assert_eq!(oracle.ldim(&c.all()).unwrap(), 3);
        let half = c.split(&c.all(), 0, true);
        assert_eq!(oracle.ldim(&half).unwrap(), 2);
    }
}
