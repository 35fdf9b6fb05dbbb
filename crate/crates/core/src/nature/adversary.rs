use std::collections::HashMap;
use std::sync::Arc;

use super::{Labels, NatureError, Scripted};
use crate::hypothesis::{FiniteClass, HypSet, Hypothesis, Point};
use crate::learners::{Learner, LearnerSpec, UpdateRule};
use crate::littlestone::{ldim, ldim_of, shattered_tree_witness, LdimMemo};

/// Online shattered-tree adversary: while the consistent set still has
/// Ldim `k >= 1`, it asks the first point whose two restrictions both keep
/// Ldim `>= k - 1` and answers the opposite of the prediction. Afterwards
/// it labels with the first consistent hypothesis.
#[derive(Clone, Debug)]
pub struct TreeAdversary {
    class: Arc<FiniteClass>,
    consistent: HypSet,
    memo: LdimMemo,
    tail: usize,
}

impl TreeAdversary {
    pub fn new(class: Arc<FiniteClass>) -> Result<Self, NatureError> {
        if class.is_empty() {
            return Err(NatureError::EmptyClass);
        }
        Ok(Self {
            consistent: class.all(),
            class,
            memo: LdimMemo::new(),
            tail: 0,
        })
    }

    pub fn next_point(&mut self) -> Result<Point, NatureError> {
        let k = ldim_of(&self.class, &self.consistent, &mut self.memo)?;
        if k >= 1 {
            for xi in 0..self.class.domain().len() {
                if !self.consistent.splits(self.class.ones(xi)) {
                    continue;
                }
                let zero = self.class.split(&self.consistent, xi, false);
                let one = self.class.split(&self.consistent, xi, true);
                if ldim_of(&self.class, &zero, &mut self.memo)? + 1 >= k && ldim_of(&self.class, &one, &mut self.memo)? + 1 >= k {
                    return Ok(self.class.domain()[xi].clone());
                }
            }
            unreachable!("a class with Ldim >= 1 has a balanced splitting point");
        }
        let x = self.class.domain()[self.tail % self.class.domain().len()].clone();
        self.tail += 1;
        Ok(x)
    }

    pub fn reveal(&mut self, x: &Point, yhat: bool) -> Result<bool, NatureError> {
        let xi = self.class.point_index(x)?;
        let y = if self.consistent.splits(self.class.ones(xi)) {
            !yhat
        } else {
            self.class.eval(self.consistent.first().expect("non-empty"), x)?
        };
        self.consistent = self.class.split(&self.consistent, xi, y);
        Ok(y)
    }

    pub fn target(&self) -> Hypothesis {
        Hypothesis::Row {
            class: self.class.clone(),
            index: self.consistent.first().expect("non-empty"),
        }
    }
}

/// Simulates `learner` privately along a depth-`ldim` shattered tree,
/// answering the opposite of every prediction, then commits to a hypothesis
/// realizing that branch. The script is the branch followed by the whole
/// domain, repeated.
pub fn commit_against(class: &Arc<FiniteClass>, mut learner: Box<dyn Learner>) -> Result<Scripted, NatureError> {
    if !learner.is_deterministic() {
        return Err(NatureError::Unsupported(format!(
            "committing needs a deterministic learner, {} is randomized",
            learner.name()
        )));
    }
    let d = ldim(class)?;
    if d == 0 {
        return Err(NatureError::NothingToForce);
    }
    let witness = shattered_tree_witness(class, d)?.expect("depth equals Ldim");
    let mut node = 1usize;
    let mut branch = Vec::new();
    let mut labels = String::new();
    for _ in 0..d {
        let x = witness.points[node - 1].clone();
        let y = !learner.predict(&x)?;
        learner.absorb(&x, y)?;
        labels.push(if y { '1' } else { '0' });
        node = 2 * node + usize::from(y);
        branch.push((x, y));
    }
    let id = &witness.realizers.as_ref().expect("witness has realizers")[&labels];
    let index = class.position(id).expect("realizer belongs to the class");
    let target = Hypothesis::Row {
        class: class.clone(),
        index,
    };
    for (x, y) in &branch {
        if target.eval(x)? != *y {
            return Err(NatureError::Inconsistent(format!("committed hypothesis disagrees at {x}")));
        }
    }
    let mut xs: Vec<Point> = branch.into_iter().map(|(x, _)| x).collect();
    xs.extend(class.domain().iter().cloned());
    Ok(Scripted::new(xs, Labels::Target(target), true))
}

/// [`commit_against`] for a learner built from `spec`.
pub fn commit_adversary(class: &Arc<FiniteClass>, spec: &LearnerSpec, seed: u64) -> Result<Scripted, NatureError> {
    if !spec.is_deterministic() {
        return Err(NatureError::Unsupported("committing needs a deterministic learner".into()));
    }
    commit_against(class, spec.build(seed)?)
}

/// A realizable stream for a fixed target, built against a deterministic
/// learner: each round the first domain point the learner would get wrong
/// is asked, or the next point in rotation when there is none.
pub fn mistake_seeking_script(
    target: &Hypothesis,
    domain: &[Point],
    mut learner: Box<dyn Learner>,
    length: usize,
) -> Result<Vec<Point>, NatureError> {
    if domain.is_empty() {
        return Err(NatureError::Inconsistent("empty domain".into()));
    }
    let mut xs = Vec::with_capacity(length);
    for t in 0..length {
        let mut pick = None;
        for x in domain {
            if learner.predict(x)? != target.eval(x)? {
                pick = Some(x.clone());
                break;
            }
        }
        let x = pick.unwrap_or_else(|| domain[t % domain.len()].clone());
        learner.absorb(&x, target.eval(&x)?)?;
        xs.push(x);
    }
    Ok(xs)
}

/// The most mistakes SOA can be forced to make on `class` by any realizable
/// adaptive sequence, with a sequence attaining it.
///
/// Searches over pairs (SOA's version space, labels-consistent set); a move
/// that changes neither is skipped since it cannot add mistakes.
pub fn soa_worst_case(class: &FiniteClass, rule: UpdateRule) -> Result<(u32, Vec<(Point, bool)>), NatureError> {
    if class.is_empty() {
        return Err(NatureError::EmptyClass);
    }
    let mut search = WorstCase {
        class,
        rule,
        ldim: LdimMemo::new(),
        memo: HashMap::new(),
    };
    let all = class.all();
    let value = search.value(&all, &all)?;
    let mut seq = Vec::new();
    let (mut v, mut c) = (all.clone(), all);
    while let Some((xi, y, nv, nc)) = search.best_move(&v, &c)? {
        seq.push((class.domain()[xi].clone(), y));
        v = nv;
        c = nc;
    }
    Ok((value, seq))
}

struct WorstCase<'a> {
    class: &'a FiniteClass,
    rule: UpdateRule,
    ldim: LdimMemo,
    memo: HashMap<(HypSet, HypSet), u32>,
}

impl WorstCase<'_> {
    fn soa(&mut self, v: &HypSet, xi: usize) -> Result<bool, NatureError> {
        let zero = self.class.split(v, xi, false);
        let one = self.class.split(v, xi, true);
        Ok(match (zero.is_empty(), one.is_empty()) {
            (_, true) => false,
            (true, false) => true,
            (false, false) => ldim_of(self.class, &one, &mut self.ldim)? > ldim_of(self.class, &zero, &mut self.ldim)?,
        })
    }

    #[allow(clippy::type_complexity)]
    fn moves(&mut self, v: &HypSet, c: &HypSet) -> Result<Vec<(usize, bool, u32, HypSet, HypSet)>, NatureError> {
        let mut out = Vec::new();
        for xi in 0..self.class.domain().len() {
            let yhat = self.soa(v, xi)?;
            for y in [false, true] {
                let nc = self.class.split(c, xi, y);
                if nc.is_empty() {
                    continue;
                }
                let mistake = yhat != y;
                let nv = if mistake || self.rule == UpdateRule::Always {
                    self.class.split(v, xi, y)
                } else {
                    v.clone()
                };
                if &nv == v && &nc == c {
                    continue;
                }
                out.push((xi, y, u32::from(mistake), nv, nc));
            }
        }
        Ok(out)
    }

    fn value(&mut self, v: &HypSet, c: &HypSet) -> Result<u32, NatureError> {
        if let Some(&x) = self.memo.get(&(v.clone(), c.clone())) {
            return Ok(x);
        }
        let mut best = 0;
        for (_, _, m, nv, nc) in self.moves(v, c)? {
            best = best.max(m + self.value(&nv, &nc)?);
        }
        self.memo.insert((v.clone(), c.clone()), best);
        Ok(best)
    }

    #[allow(clippy::type_complexity)]
    fn best_move(&mut self, v: &HypSet, c: &HypSet) -> Result<Option<(usize, bool, HypSet, HypSet)>, NatureError> {
        let target = self.value(v, c)?;
        if target == 0 {
            return Ok(None);
        }
        for (xi, y, m, nv, nc) in self.moves(v, c)? {
            if m + self.value(&nv, &nc)? == target {
                return Ok(Some((xi, y, nv, nc)));
            }
        }
        unreachable!("the value is attained by some move")
    }
}
