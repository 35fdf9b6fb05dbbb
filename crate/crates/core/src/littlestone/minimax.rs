use std::collections::HashMap;

use super::LittlestoneError;
use crate::hypothesis::{FiniteClass, HypSet};

/// Default bound on the number of distinct version spaces the oracle visits.
pub const DEFAULT_MINIMAX_CAP: usize = 1 << 20;

/// Value of the mistake game on `class`: Nature picks a point and a label
/// consistent with some surviving hypothesis, the learner commits to a
/// prediction first, and play continues until no point splits the version
/// space. Computed by plain game-tree search with no Ldim shortcuts.
pub fn minimax_mistakes(class: &FiniteClass) -> Result<u32, LittlestoneError> {
    minimax_mistakes_with_cap(class, DEFAULT_MINIMAX_CAP)
}

pub fn minimax_mistakes_with_cap(class: &FiniteClass, cap: usize) -> Result<u32, LittlestoneError> {
    if class.is_empty() {
        return Err(LittlestoneError::EmptyClass);
    }
    let mut memo = HashMap::new();
    value(class, &class.all(), &mut memo, cap)
}

fn value(class: &FiniteClass, set: &HypSet, memo: &mut HashMap<HypSet, u32>, cap: usize) -> Result<u32, LittlestoneError> {
    if let Some(&v) = memo.get(set) {
        return Ok(v);
    }
    if memo.len() >= cap {
        return Err(LittlestoneError::Capacity { limit: cap });
    }
    let mut best = 0;
    for xi in 0..class.domain().len() {
        if !set.splits(class.ones(xi)) {
            // Only one label is consistent; the learner predicts it and nothing changes.
            continue;
        }
        let v0 = value(class, &class.split(set, xi, false), memo, cap)?;
        let v1 = value(class, &class.split(set, xi, true), memo, cap)?;
        let predict_zero = v0.max(1 + v1);
        let predict_one = (1 + v0).max(v1);
        best = best.max(predict_zero.min(predict_one));
    }
    memo.insert(set.clone(), best);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypothesis::Point;

    #[test]
    fn small_games() {
        let ab = vec![Point::named("a"), Point::named("b")];
        assert_eq!(minimax_mistakes(&FiniteClass::full(ab.clone())).unwrap(), 2);
        let single = FiniteClass::from_bits(ab, vec![vec![0, 1]]).unwrap();
        assert_eq!(minimax_mistakes(&single).unwrap(), 0);
        let t = FiniteClass::integer_thresholds(&[1, 2, 3], &[1, 2, 3, 4]).unwrap();
        assert_eq!(minimax_mistakes(&t).unwrap(), 2);
    }

    #[test]
    fn cap_is_an_error() {
        let pts: Vec<Point> = (0..4).map(|i| Point::named(format!("p{i}"))).collect();
        let c = FiniteClass::full(pts);
        assert_eq!(
            minimax_mistakes_with_cap(&c, 3).unwrap_err(),
            LittlestoneError::Capacity { limit: 3 }
        );
    }
}
