use std::collections::BTreeMap;

use serde::Serialize;

use super::{ldim_of, LdimMemo, LittlestoneError};
use crate::hypothesis::{FiniteClass, HypSet, Point};

/// A complete binary tree of domain points, stored level by level: the root
/// is node 1 and the children of node i are 2i (label 0) and 2i+1 (label 1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShatteredTreeWitness {
    pub depth: u32,
    /// `points[i - 1]` is node i.
    pub points: Vec<Point>,
    /// Labeling (as a 0/1 string) → id of a hypothesis realizing it.
    pub realizers: Option<BTreeMap<String, String>>,
}

/// Node visited at level `t = labels.len() + 1` after the labels `y_1..y_{t-1}`:
/// `2^(t-1) + Σ_j y_j 2^(t-1-j)`.
pub fn node_index(labels: &[bool]) -> usize {
    let t = labels.len() + 1;
    let mut i = 1usize << (t - 1);
    for (j, &y) in labels.iter().enumerate() {
        if y {
            i += 1 << (t - 2 - j);
        }
    }
    i
}

/// A depth-`d` shattered tree, or `None` when `ldim(class) < d`.
///
/// Each node takes the first domain point whose two restrictions both keep
/// Ldim at least the remaining depth minus one, so the search never backtracks.
pub fn shattered_tree_witness(class: &FiniteClass, d: u32) -> Result<Option<ShatteredTreeWitness>, LittlestoneError> {
    if d == 0 {
        return Err(LittlestoneError::ZeroDepth);
    }
    if class.is_empty() {
        return Err(LittlestoneError::EmptyClass);
    }
    let mut memo = LdimMemo::new();
    if ldim_of(class, &class.all(), &mut memo)? < d {
        return Ok(None);
    }
    let size = (1usize << d) - 1;
    let mut points: Vec<Option<usize>> = vec![None; size];
    let mut realizers = BTreeMap::new();
    grow(class, &class.all(), 1, d, &mut points, &mut realizers, &mut String::new(), &mut memo)?;
    let points = points
        .into_iter()
        .map(|p| class.domain()[p.expect("every node is filled")].clone())
        .collect();
    Ok(Some(ShatteredTreeWitness {
        depth: d,
        points,
        realizers: Some(realizers),
    }))
}

#[allow(clippy::too_many_arguments)]
fn grow(
    class: &FiniteClass,
    set: &HypSet,
    node: usize,
    remaining: u32,
    points: &mut [Option<usize>],
    realizers: &mut BTreeMap<String, String>,
    labels: &mut String,
    memo: &mut LdimMemo,
) -> Result<(), LittlestoneError> {
    if remaining == 0 {
        let h = set.first().ok_or(LittlestoneError::EmptyClass)?;
        realizers.insert(labels.clone(), class.ids()[h].clone());
        return Ok(());
    }
    let need = remaining - 1;
    let mut chosen = None;
    for xi in 0..class.domain().len() {
        if !set.splits(class.ones(xi)) {
            continue;
        }
        let zero = class.split(set, xi, false);
        let one = class.split(set, xi, true);
        if ldim_of(class, &zero, memo)? >= need && ldim_of(class, &one, memo)? >= need {
            chosen = Some((xi, zero, one));
            break;
        }
    }
    let (xi, zero, one) = chosen.expect("Ldim bound guarantees a splitting point");
    points[node - 1] = Some(xi);
    for (y, child) in [('0', zero), ('1', one)] {
        labels.push(y);
        grow(class, &child, 2 * node + usize::from(y == '1'), need, points, realizers, labels, memo)?;
        labels.pop();
    }
    Ok(())
}

/// Checks every labeling of `{0,1}^depth` against the class, indexing the
/// tree with [`node_index`].
pub fn verify_witness(w: &ShatteredTreeWitness, class: &FiniteClass) -> Result<bool, LittlestoneError> {
    if w.depth == 0 {
        return Err(LittlestoneError::ZeroDepth);
    }
    let expected = (1usize << w.depth) - 1;
    if w.points.len() != expected {
        return Err(LittlestoneError::Structure {
            depth: w.depth,
            expected,
            got: w.points.len(),
        });
    }
    let idx = w
        .points
        .iter()
        .map(|p| class.point_index(p))
        .collect::<Result<Vec<_>, _>>()?;
    let d = w.depth as usize;
    for mask in 0u64..1 << d {
        let labels: Vec<bool> = (0..d).map(|t| mask >> (d - 1 - t) & 1 == 1).collect();
        let mut set = class.all();
        for t in 0..d {
            let i = node_index(&labels[..t]);
            set = class.split(&set, idx[i - 1], labels[t]);
        }
        if set.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::littlestone::ldim;

    fn ab() -> Vec<Point> {
        vec![Point::named("a"), Point::named("b")]
    }

    #[test]
    fn node_index_layout() {
        assert_eq!(node_index(&[]), 1);
        assert_eq!(node_index(&[false]), 2);
        assert_eq!(node_index(&[true]), 3);
        assert_eq!(node_index(&[true, false]), 6);
        assert_eq!(node_index(&[true, true]), 7);
    }

    #[test]
    fn full_class_on_two_points() {
        let c = FiniteClass::full(ab());
        let w = shattered_tree_witness(&c, 2).unwrap().unwrap();
        assert_eq!(w.points, vec![Point::named("a"), Point::named("b"), Point::named("b")]);
        assert_eq!(w.realizers.as_ref().unwrap().len(), 4);
        assert!(verify_witness(&w, &c).unwrap());
        assert!(shattered_tree_witness(&c, 3).unwrap().is_none());
    }

    #[test]
    fn three_row_class_fails_the_two_point_tree() {
        let c = FiniteClass::from_bits(ab(), vec![vec![0, 0], vec![0, 1], vec![1, 0]]).unwrap();
        let w = ShatteredTreeWitness {
            depth: 2,
            points: vec![Point::named("a"), Point::named("b"), Point::named("b")],
            realizers: None,
        };
        assert!(!verify_witness(&w, &c).unwrap());
    }

    #[test]
    fn singleton_and_thresholds() {
        let s = FiniteClass::from_bits(ab(), vec![vec![1, 0]]).unwrap();
        assert!(shattered_tree_witness(&s, 1).unwrap().is_none());
        let t = FiniteClass::integer_thresholds(&[1, 2, 3], &[1, 2, 3, 4]).unwrap();
        assert!(shattered_tree_witness(&t, 3).unwrap().is_none());
        let w = shattered_tree_witness(&t, ldim(&t).unwrap()).unwrap().unwrap();
        assert!(verify_witness(&w, &t).unwrap());
    }

    #[test]
    fn argument_errors() {
        let c = FiniteClass::full(ab());
        assert_eq!(shattered_tree_witness(&c, 0).unwrap_err(), LittlestoneError::ZeroDepth);
        let bad = ShatteredTreeWitness {
            depth: 2,
            points: vec![Point::named("a")],
            realizers: None,
        };
        assert!(matches!(verify_witness(&bad, &c), Err(LittlestoneError::Structure { .. })));
        let one = ShatteredTreeWitness {
            depth: 1,
            points: vec![Point::named("a")],
            realizers: None,
        };
        assert!(verify_witness(&one, &c).unwrap());
    }
}
