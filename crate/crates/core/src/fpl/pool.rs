use std::collections::HashMap;

use crate::hypothesis::{ConceptClass, Point};
use crate::learners::{soa_label, ExpertKey, LearnerError};
use crate::littlestone::{SpaceKey, VersionSpace};

/// Interned version spaces of one class with cached SOA labels and
/// restrictions, so experts in the same state share all work.
#[derive(Debug)]
pub struct SpaceTable {
    spaces: Vec<VersionSpace>,
    ids: HashMap<SpaceKey, u32>,
    points: HashMap<Point, u32>,
    /// (space, point) → (label, id of the 0-restriction, id of the 1-restriction)
    steps: HashMap<(u32, u32), (bool, u32, u32)>,
}

impl SpaceTable {
    pub fn new(class: &ConceptClass) -> Self {
        let mut table = Self {
            spaces: Vec::new(),
            ids: HashMap::new(),
            points: HashMap::new(),
            steps: HashMap::new(),
        };
        table.intern(VersionSpace::new(class));
        table
    }

    pub fn root(&self) -> u32 {
        0
    }

    pub fn len(&self) -> usize {
        self.spaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spaces.is_empty()
    }

    pub fn space(&self, id: u32) -> &VersionSpace {
        &self.spaces[id as usize]
    }

    fn intern(&mut self, space: VersionSpace) -> u32 {
        if let Some(&id) = self.ids.get(space.key()) {
            return id;
        }
        let id = self.spaces.len() as u32;
        self.ids.insert(space.key().clone(), id);
        self.spaces.push(space);
        id
    }

    pub fn point_id(&mut self, x: &Point) -> u32 {
        let next = self.points.len() as u32;
        *self.points.entry(x.clone()).or_insert(next)
    }

    fn step(&mut self, space: u32, x: &Point, xi: u32) -> Result<(bool, u32, u32), LearnerError> {
        if let Some(&s) = self.steps.get(&(space, xi)) {
            return Ok(s);
        }
        let (label, zero, one) = soa_label(&self.spaces[space as usize], x)?;
        let s = (label, self.intern(zero), self.intern(one));
        self.steps.insert((space, xi), s);
        Ok(s)
    }

    /// SOA label of space `space` on `x`.
    pub fn label(&mut self, space: u32, x: &Point) -> Result<bool, LearnerError> {
        let xi = self.point_id(x);
        Ok(self.step(space, x, xi)?.0)
    }

    /// Restriction of `space` by `(x, y)`, or `space` itself when that is empty.
    pub fn restrict_or_keep(&mut self, space: u32, x: &Point, y: bool) -> Result<u32, LearnerError> {
        let xi = self.point_id(x);
        let (_, zero, one) = self.step(space, x, xi)?;
        let next = if y { one } else { zero };
        Ok(if self.spaces[next as usize].is_empty() { space } else { next })
    }
}

/// One keyed expert of a pool. The key is recovered through `parent`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PoolExpert {
    pub space: u32,
    pub loss: u64,
    pub len: u32,
    pub last: Option<u64>,
    pub parent: Option<u32>,
}

/// All keyed SOA experts `(i_1 < ... < i_L)` with `L <= dim` whose last
/// index has been reached. A key ending at round t is registered at round t
/// as a copy of its prefix key, which behaved identically until then.
/// Updates that would empty a version space are skipped.
#[derive(Debug)]
pub struct ExpertPool {
    dim: u32,
    table: SpaceTable,
    experts: Vec<PoolExpert>,
    round: u64,
    extended: u64,
    prepared: Option<Point>,
    space_labels: Vec<bool>,
}

impl ExpertPool {
    pub fn new(class: &ConceptClass, dim: u32) -> Self {
        let table = SpaceTable::new(class);
        let root = table.root();
        Self {
            dim,
            table,
            experts: vec![PoolExpert {
                space: root,
                loss: 0,
                len: 0,
                last: None,
                parent: None,
            }],
            round: 0,
            extended: 0,
            prepared: None,
            space_labels: Vec::new(),
        }
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.experts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.experts.is_empty()
    }

    pub fn experts(&self) -> &[PoolExpert] {
        &self.experts
    }

    pub fn table(&self) -> &SpaceTable {
        &self.table
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn key(&self, i: usize) -> ExpertKey {
        let mut idx = Vec::new();
        let mut cur = Some(i as u32);
        while let Some(c) = cur {
            let e = &self.experts[c as usize];
            if let Some(j) = e.last {
                idx.push(j);
            }
            cur = e.parent;
        }
        idx.reverse();
        ExpertKey::new(idx).expect("pool keys are increasing")
    }

    /// Registers every key with `L <= dim` ending at `t`; returns how many.
    /// Must be called once per round, with `t` the upcoming round.
    pub fn extend(&mut self, t: u64) -> usize {
        assert_eq!(t, self.round + 1, "pool extended out of order");
        if self.extended >= t {
            return 0;
        }
        self.extended = t;
        let before = self.experts.len();
        for i in 0..before {
            let e = self.experts[i];
            if e.len < self.dim {
                self.experts.push(PoolExpert {
                    space: e.space,
                    loss: e.loss,
                    len: e.len + 1,
                    last: Some(t),
                    parent: Some(i as u32),
                });
            }
        }
        self.experts.len() - before
    }

    /// Computes every expert's label on `x`; see [`ExpertPool::label`].
    pub fn prepare(&mut self, x: &Point) -> Result<(), LearnerError> {
        if self.prepared.as_ref() == Some(x) {
            return Ok(());
        }
        let xi = self.table.point_id(x);
        self.space_labels.clear();
        for s in 0..self.table.len() as u32 {
            let label = if self.table.space(s).is_empty() {
                false
            } else {
                self.table.step(s, x, xi)?.0
            };
            self.space_labels.push(label);
        }
        self.prepared = Some(x.clone());
        Ok(())
    }

    /// Label of expert `i` on the prepared point.
    pub fn label(&self, i: usize) -> bool {
        self.space_labels[self.experts[i].space as usize]
    }

    pub fn absorb(&mut self, x: &Point, y: bool) -> Result<(), LearnerError> {
        self.prepare(x)?;
        self.round += 1;
        let t = self.round;
        for i in 0..self.experts.len() {
            let e = self.experts[i];
            if self.space_labels[e.space as usize] == y {
                continue;
            }
            self.experts[i].loss += 1;
            if e.last == Some(t) {
                self.experts[i].space = self.table.restrict_or_keep(e.space, x, y)?;
            }
        }
        self.prepared = None;
        Ok(())
    }
}
