use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use super::bitset::HypSet;
use super::point::{format_rational, Point, Rational};

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum ClassError {
    #[error("point {0} is not in the class domain")]
    UnknownPoint(String),
    #[error("point {0} is not a valid element of this domain")]
    InvalidPoint(String),
    #[error("row {row} has {got} entries but the domain has {expected} points")]
    RowLength { row: usize, expected: usize, got: usize },
    #[error("{labels} hypothesis ids given for {rows} rows")]
    LabelCount { rows: usize, labels: usize },
    #[error("hypotheses {first} and {second} are identical")]
    DuplicateHypothesis { first: String, second: String },
    #[error("hypothesis id {0} appears twice")]
    DuplicateId(String),
    #[error("point {0} appears twice in the domain")]
    DuplicatePoint(String),
    #[error("matrix entry {0} is not 0 or 1")]
    NotBinary(u8),
}

/// An explicit hypothesis class over a finite domain, stored as a dense
/// `|H| x |domain|` 0/1 matrix.
#[derive(Clone)]
pub struct FiniteClass {
    domain: Vec<Point>,
    index: HashMap<Point, usize>,
    ids: Vec<String>,
    rows: Vec<Vec<bool>>,
    /// For each domain point, the rows labelling it 1.
    ones: Vec<HypSet>,
}

impl FiniteClass {
    /// Builds a class, rejecting duplicate points, duplicate rows and ragged
    /// matrices.
    pub fn new(domain: Vec<Point>, ids: Vec<String>, rows: Vec<Vec<bool>>) -> Result<Self, ClassError> {
        if ids.len() != rows.len() {
            return Err(ClassError::LabelCount {
                rows: rows.len(),
                labels: ids.len(),
            });
        }
        let mut index = HashMap::with_capacity(domain.len());
        for (i, p) in domain.iter().enumerate() {
            if index.insert(p.clone(), i).is_some() {
                return Err(ClassError::DuplicatePoint(p.to_string()));
            }
        }
        let mut seen_rows: HashMap<&[bool], usize> = HashMap::new();
        let mut seen_ids = BTreeSet::new();
        for (r, row) in rows.iter().enumerate() {
            if row.len() != domain.len() {
                return Err(ClassError::RowLength {
                    row: r,
                    expected: domain.len(),
                    got: row.len(),
                });
            }
            if let Some(first) = seen_rows.insert(row.as_slice(), r) {
                return Err(ClassError::DuplicateHypothesis {
                    first: ids[first].clone(),
                    second: ids[r].clone(),
                });
            }
            if !seen_ids.insert(ids[r].as_str()) {
                return Err(ClassError::DuplicateId(ids[r].clone()));
            }
        }
        let ones = (0..domain.len())
            .map(|x| HypSet::from_indices(rows.len(), (0..rows.len()).filter(|&h| rows[h][x])))
            .collect();
        Ok(Self {
            domain,
            index,
            ids,
            rows,
            ones,
        })
    }

    /// Builds a class with ids `h0, h1, ...` from a 0/1 matrix.
    pub fn from_bits(domain: Vec<Point>, rows: Vec<Vec<u8>>) -> Result<Self, ClassError> {
        let rows = rows
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|b| match b {
                        0 => Ok(false),
                        1 => Ok(true),
                        other => Err(ClassError::NotBinary(other)),
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let ids = (0..rows.len()).map(|i| format!("h{i}")).collect();
        Self::new(domain, ids, rows)
    }

    /// All `2^n` labelings of `domain`, row `r` labelling point `i` with bit
    /// `n-1-i` of `r` (so rows read as binary numerals).
    pub fn full(domain: Vec<Point>) -> Self {
        let n = domain.len();
        assert!(n < 20, "full class over {n} points is too large");
        let rows = (0..1usize << n)
            .map(|r| (0..n).map(|i| (r >> (n - 1 - i)) & 1 == 1).collect())
            .collect();
        let ids = (0..1usize << n).map(|r| bit_string(r, n)).collect();
        Self::new(domain, ids, rows).expect("full class is well formed")
    }

    /// Thresholds `h_k(x) = 1[x >= k]` over integer points, one row per cut.
    pub fn integer_thresholds(points: &[i64], cuts: &[i64]) -> Result<Self, ClassError> {
        let domain = points.iter().map(|&p| Point::int(p)).collect();
        let rows = cuts
            .iter()
            .map(|&k| points.iter().map(|&p| p >= k).collect())
            .collect();
        let ids = cuts.iter().map(|k| format!("x>={k}")).collect();
        Self::new(domain, ids, rows)
    }

    pub fn domain(&self) -> &[Point] {
        &self.domain
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, h: usize) -> &[bool] {
        &self.rows[h]
    }

    pub fn point_index(&self, x: &Point) -> Result<usize, ClassError> {
        self.index
            .get(x)
            .copied()
            .ok_or_else(|| ClassError::UnknownPoint(x.to_string()))
    }

    pub fn eval(&self, h: usize, x: &Point) -> Result<bool, ClassError> {
        Ok(self.rows[h][self.point_index(x)?])
    }

    /// Rows labelling domain point `xi` with 1.
    pub fn ones(&self, xi: usize) -> &HypSet {
        &self.ones[xi]
    }

    pub fn all(&self) -> HypSet {
        HypSet::full(self.len())
    }

    /// Members of `set` labelling domain point `xi` with `y`.
    pub fn split(&self, set: &HypSet, xi: usize, y: bool) -> HypSet {
        if y {
            set.intersection(&self.ones[xi])
        } else {
            set.difference(&self.ones[xi])
        }
    }

    /// The sub-class of hypotheses with `h(x) = y`, keeping hypothesis ids.
    pub fn restrict(&self, x: &Point, y: bool) -> Result<FiniteClass, ClassError> {
        let xi = self.point_index(x)?;
        Ok(self.subclass(&self.split(&self.all(), xi, y)))
    }

    pub fn subclass(&self, members: &HypSet) -> FiniteClass {
        let ids = members.iter().map(|h| self.ids[h].clone()).collect();
        let rows = members.iter().map(|h| self.rows[h].clone()).collect();
        FiniteClass::new(self.domain.clone(), ids, rows).expect("subclass of a valid class is valid")
    }

    /// Row of the hypothesis with the given id.
    pub fn position(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|i| i == id)
    }

    pub fn row_string(&self, h: usize) -> String {
        self.rows[h].iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

impl fmt::Debug for FiniteClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteClass(domain={:?}, rows=[", self.domain)?;
        for h in 0..self.len() {
            if h > 0 {
                f.write_str(" ")?;
            }
            f.write_str(&self.row_string(h))?;
        }
        f.write_str("])")
    }
}

fn bit_string(r: usize, n: usize) -> String {
    (0..n).map(|i| if (r >> (n - 1 - i)) & 1 == 1 { '1' } else { '0' }).collect()
}

/// A single evaluable hypothesis.
#[derive(Clone)]
pub enum Hypothesis {
    Constant(bool),
    /// `1[x >= cut]` over rational points.
    Threshold(Rational),
    /// `1[x ∈ support]`, zero everywhere else.
    Indicator(BTreeSet<Point>),
    /// A row of an explicit class.
    Row { class: Arc<FiniteClass>, index: usize },
}

impl Hypothesis {
    pub fn eval(&self, x: &Point) -> Result<bool, ClassError> {
        match self {
            Hypothesis::Constant(b) => Ok(*b),
            Hypothesis::Threshold(cut) => x
                .value()
                .map(|v| v >= cut)
                .ok_or_else(|| ClassError::InvalidPoint(x.to_string())),
            Hypothesis::Indicator(support) => Ok(support.contains(x)),
            Hypothesis::Row { class, index } => class.eval(*index, x),
        }
    }

    pub fn id(&self) -> String {
        match self {
            Hypothesis::Constant(b) => format!("const{}", u8::from(*b)),
            Hypothesis::Threshold(cut) => format!("x>={}", format_rational(cut)),
            Hypothesis::Indicator(support) => {
                let items: Vec<String> = support.iter().map(|p| p.to_string()).collect();
                format!("1{{{}}}", items.join(","))
            }
            Hypothesis::Row { class, index } => class.ids()[*index].clone(),
        }
    }
}

impl fmt::Debug for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}
