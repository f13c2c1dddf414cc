//! Bell-correlation tables `p(ab|xy)`.
//!
//! A [`BehaviorTable`] stores one probability per `(x, y, a, b)` tuple, where
//! `x`/`y` index Alice's and Bob's measurement settings and `a`/`b` their
//! outcomes. All indices are 0-based. Entries may be missing, in which case
//! the table is *partial*; operations that need a missing entry report
//! [`TableError::MissingEntries`].

mod json;
mod prob;
mod validate;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use json::{parse_table, to_json, ParseError};
pub(crate) use prob::ratio_to_f64;
pub use prob::{format_ratio, Prob, ProbParseError};
pub use validate::{Level, ValidationReport, Violation};

/// Setting and outcome cardinalities of a two-party scenario.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Shape {
    pub n_x: usize,
    pub n_y: usize,
    pub n_a: usize,
    pub n_b: usize,
}

impl Shape {
    pub fn new(n_x: usize, n_y: usize, n_a: usize, n_b: usize) -> Result<Self, TableError> {
        let shape = Self { n_x, n_y, n_a, n_b };
        if n_x == 0 || n_y == 0 || n_a == 0 || n_b == 0 {
            return Err(TableError::EmptyDimension(shape));
        }
        Ok(shape)
    }

    pub fn len(&self) -> usize {
        self.n_x * self.n_y * self.n_a * self.n_b
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Shape with the two parties' roles exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            n_x: self.n_y,
            n_y: self.n_x,
            n_a: self.n_b,
            n_b: self.n_a,
        }
    }

    fn offset(&self, idx: Index) -> usize {
        ((idx.x * self.n_y + idx.y) * self.n_a + idx.a) * self.n_b + idx.b
    }

    fn contains(&self, idx: Index) -> bool {
        idx.x < self.n_x && idx.y < self.n_y && idx.a < self.n_a && idx.b < self.n_b
    }

    /// All index tuples in `x, y, a, b` lexicographic order.
    pub fn indices(&self) -> impl Iterator<Item = Index> + '_ {
        let s = *self;
        (0..s.n_x).flat_map(move |x| {
            (0..s.n_y).flat_map(move |y| {
                (0..s.n_a).flat_map(move |a| (0..s.n_b).map(move |b| Index { x, y, a, b }))
            })
        })
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} x {} settings, {} x {} outcomes",
            self.n_x, self.n_y, self.n_a, self.n_b
        )
    }
}

/// A `(x, y, a, b)` position in a table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Index {
    pub x: usize,
    pub y: usize,
    pub a: usize,
    pub b: usize,
}

impl Index {
    pub fn new(x: usize, y: usize, a: usize, b: usize) -> Self {
        Self { x, y, a, b }
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(x={}, y={}, a={}, b={})",
            self.x, self.y, self.a, self.b
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Party {
    Alice,
    Bob,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TableError {
    #[error("every cardinality must be positive, got {0}")]
    EmptyDimension(Shape),
    #[error("index {index} out of range for {shape}")]
    OutOfRange { index: Index, shape: Shape },
    #[error("entry {0} is not a finite number")]
    NonFinite(Index),
    #[error("missing entries needed for this operation, first missing at {0}")]
    MissingEntries(Index),
    #[error("invalid relabeling: {0}")]
    InvalidRelabeling(String),
}

/// One party's outcome distribution for one setting.
#[derive(Debug, Clone, PartialEq)]
pub struct Marginal {
    pub party: Party,
    pub setting: usize,
    /// The other party's setting that was summed over.
    pub summed_over: usize,
    pub probs: Vec<Prob>,
}

impl Marginal {
    pub fn values(&self) -> Vec<f64> {
        self.probs.iter().map(Prob::value).collect()
    }
}

/// A (possibly partial) Bell-correlation table. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct BehaviorTable {
    shape: Shape,
    entries: Vec<Option<Prob>>,
}

impl BehaviorTable {
    /// A complete table from an entry function.
    pub fn from_fn<F>(shape: Shape, mut f: F) -> Result<Self, TableError>
    where
        F: FnMut(Index) -> Prob,
    {
        let mut builder = TableBuilder::new(shape);
        for idx in shape.indices() {
            builder.set(idx, f(idx))?;
        }
        Ok(builder.build())
    }

    /// A complete table of floats from an entry function.
    pub fn from_f64_fn<F>(shape: Shape, mut f: F) -> Result<Self, TableError>
    where
        F: FnMut(Index) -> f64,
    {
        Self::from_fn(shape, |idx| Prob::from_f64(f(idx)))
    }

    pub fn builder(shape: Shape) -> TableBuilder {
        TableBuilder::new(shape)
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn get(&self, idx: Index) -> Option<&Prob> {
        if !self.shape.contains(idx) {
            return None;
        }
        self.entries[self.shape.offset(idx)].as_ref()
    }

    /// Float value of `p(ab|xy)`, if present.
    pub fn p(&self, x: usize, y: usize, a: usize, b: usize) -> Option<f64> {
        self.get(Index { x, y, a, b }).map(Prob::value)
    }

    pub fn is_complete(&self) -> bool {
        self.entries.iter().all(Option::is_some)
    }

    /// True when every present entry carries an exact rational value.
    pub fn is_exact(&self) -> bool {
        self.entries.iter().flatten().all(Prob::is_exact)
    }

    pub fn present(&self) -> impl Iterator<Item = (Index, &Prob)> + '_ {
        self.shape
            .indices()
            .zip(self.entries.iter())
            .filter_map(|(idx, e)| e.as_ref().map(|p| (idx, p)))
    }

    pub fn first_missing(&self) -> Option<Index> {
        self.shape
            .indices()
            .zip(self.entries.iter())
            .find(|(_, e)| e.is_none())
            .map(|(idx, _)| idx)
    }

    /// Dense float view indexed like the table, `None` for missing entries.
    pub fn dense_values(&self) -> Vec<Option<f64>> {
        self.entries
            .iter()
            .map(|e| e.as_ref().map(Prob::value))
            .collect()
    }

    /// `p(a|x) = Σ_b p(ab|xy)` for a single outcome, summing over Bob's setting `y`.
    pub fn marginal_a_entry(&self, x: usize, a: usize, y: usize) -> Result<Prob, TableError> {
        self.sum_over((0..self.shape.n_b).map(|b| Index { x, y, a, b }))
    }

    /// `p(b|y) = Σ_a p(ab|xy)` for a single outcome, summing over Alice's setting `x`.
    pub fn marginal_b_entry(&self, y: usize, b: usize, x: usize) -> Result<Prob, TableError> {
        self.sum_over((0..self.shape.n_a).map(|a| Index { x, y, a, b }))
    }

    /// Alice's outcome distribution for setting `x`, summing over Bob's setting `y`.
    pub fn marginal_a(&self, x: usize, y: usize) -> Result<Marginal, TableError> {
        let probs = (0..self.shape.n_a)
            .map(|a| self.marginal_a_entry(x, a, y))
            .collect::<Result<_, _>>()?;
        Ok(Marginal {
            party: Party::Alice,
            setting: x,
            summed_over: y,
            probs,
        })
    }

    /// Bob's outcome distribution for setting `y`, summing over Alice's setting `x`.
    pub fn marginal_b(&self, y: usize, x: usize) -> Result<Marginal, TableError> {
        let probs = (0..self.shape.n_b)
            .map(|b| self.marginal_b_entry(y, b, x))
            .collect::<Result<_, _>>()?;
        Ok(Marginal {
            party: Party::Bob,
            setting: y,
            summed_over: x,
            probs,
        })
    }

    fn sum_over(&self, idxs: impl Iterator<Item = Index>) -> Result<Prob, TableError> {
        let mut acc: Option<Prob> = None;
        for idx in idxs {
            if !self.shape.contains(idx) {
                return Err(TableError::OutOfRange {
                    index: idx,
                    shape: self.shape,
                });
            }
            let p = self.get(idx).ok_or(TableError::MissingEntries(idx))?;
            acc = Some(match acc {
                None => p.clone(),
                Some(s) => &s + p,
            });
        }
        Ok(acc.unwrap_or_else(Prob::zero))
    }

    /// The table `q` with `q(ba|yx) = p(ab|xy)`.
    pub fn swap_parties(&self) -> Self {
        let shape = self.shape.swapped();
        let mut entries = vec![None; shape.len()];
        for (idx, p) in self.present() {
            let swapped = Index {
                x: idx.y,
                y: idx.x,
                a: idx.b,
                b: idx.a,
            };
            entries[shape.offset(swapped)] = Some(p.clone());
        }
        Self { shape, entries }
    }

    /// Rename settings and outcomes according to `relabeling`.
    pub fn relabel(&self, relabeling: &Relabeling) -> Result<Self, TableError> {
        relabeling.check(self.shape)?;
        let mut entries = vec![None; self.shape.len()];
        for (idx, p) in self.present() {
            let to = Index {
                x: relabeling.x[idx.x],
                y: relabeling.y[idx.y],
                a: relabeling.a[idx.x][idx.a],
                b: relabeling.b[idx.y][idx.b],
            };
            entries[self.shape.offset(to)] = Some(p.clone());
        }
        Ok(Self {
            shape: self.shape,
            entries,
        })
    }

    pub fn validate(&self, level: Level, tol: &crate::Tolerances) -> ValidationReport {
        validate::validate(self, level, tol)
    }
}

/// Incremental construction of a [`BehaviorTable`].
#[derive(Debug, Clone)]
pub struct TableBuilder {
    shape: Shape,
    entries: Vec<Option<Prob>>,
}

impl TableBuilder {
    pub fn new(shape: Shape) -> Self {
        Self {
            shape,
            entries: vec![None; shape.len()],
        }
    }

    /// Set one entry. Values within `1e-12` outside `[0, 1]` are clamped;
    /// values further out are kept and flagged by validation.
    pub fn set(&mut self, idx: Index, p: Prob) -> Result<&mut Self, TableError> {
        if !self.shape.contains(idx) {
            return Err(TableError::OutOfRange {
                index: idx,
                shape: self.shape,
            });
        }
        if !p.value().is_finite() {
            return Err(TableError::NonFinite(idx));
        }
        self.entries[self.shape.offset(idx)] = Some(p.clamped_for_ingest());
        Ok(self)
    }

    pub fn set_f64(&mut self, idx: Index, p: f64) -> Result<&mut Self, TableError> {
        self.set(idx, Prob::from_f64(p))
    }

    pub fn is_set(&self, idx: Index) -> bool {
        self.shape.contains(idx) && self.entries[self.shape.offset(idx)].is_some()
    }

    pub fn build(self) -> BehaviorTable {
        BehaviorTable {
            shape: self.shape,
            entries: self.entries,
        }
    }
}

/// Permutations of setting labels and, per setting, of outcome labels.
///
/// Entry `(x, y, a, b)` moves to `(x[x], y[y], a[x][a], b[y][b])`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relabeling {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub a: Vec<Vec<usize>>,
    pub b: Vec<Vec<usize>>,
}

impl Relabeling {
    pub fn identity(shape: Shape) -> Self {
        Self {
            x: (0..shape.n_x).collect(),
            y: (0..shape.n_y).collect(),
            a: vec![(0..shape.n_a).collect(); shape.n_x],
            b: vec![(0..shape.n_b).collect(); shape.n_y],
        }
    }

    fn check(&self, shape: Shape) -> Result<(), TableError> {
        fn is_perm(p: &[usize], n: usize) -> bool {
            let mut seen = vec![false; n];
            p.len() == n
                && p.iter()
                    .all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
        }
        let bad = |what: &str| Err(TableError::InvalidRelabeling(what.to_string()));
        if !is_perm(&self.x, shape.n_x) {
            return bad("x is not a permutation of Alice's settings");
        }
        if !is_perm(&self.y, shape.n_y) {
            return bad("y is not a permutation of Bob's settings");
        }
        if self.a.len() != shape.n_x || !self.a.iter().all(|p| is_perm(p, shape.n_a)) {
            return bad("a must hold one outcome permutation per Alice setting");
        }
        if self.b.len() != shape.n_y || !self.b.iter().all(|p| is_perm(p, shape.n_b)) {
            return bad("b must hold one outcome permutation per Bob setting");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chsh_like() -> BehaviorTable {
        let s = 2f64.sqrt();
        let shape = Shape::new(2, 2, 2, 2).unwrap();
        BehaviorTable::from_f64_fn(shape, |i| {
            if (i.a ^ i.b) == i.x * i.y {
                (2.0 + s) / 8.0
            } else {
                (2.0 - s) / 8.0
            }
        })
        .unwrap()
    }

    fn partial_3x3() -> BehaviorTable {
        let mut b = BehaviorTable::builder(Shape::new(1, 1, 3, 3).unwrap());
        b.set(Index::new(0, 0, 0, 0), Prob::frac(1, 10)).unwrap();
        for (a, bb) in [(0, 1), (0, 2), (1, 0), (2, 0)] {
            b.set(Index::new(0, 0, a, bb), Prob::frac(1, 100)).unwrap();
        }
        b.build()
    }

    #[test]
    fn zero_cardinality_rejected() {
        assert!(matches!(
            Shape::new(2, 0, 2, 2),
            Err(TableError::EmptyDimension(_))
        ));
    }

    #[test]
    fn chsh_marginals_are_uniform() {
        let t = chsh_like();
        for x in 0..2 {
            for y in 0..2 {
                for v in t.marginal_a(x, y).unwrap().values() {
                    assert!((v - 0.5).abs() < 1e-15);
                }
                for v in t.marginal_b(y, x).unwrap().values() {
                    assert!((v - 0.5).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn partial_marginal_uses_exact_row() {
        let t = partial_3x3();
        assert!(!t.is_complete());
        assert!(t.is_exact());
        assert_eq!(t.marginal_a_entry(0, 0, 0).unwrap(), Prob::frac(12, 100));
        assert_eq!(t.marginal_b_entry(0, 0, 0).unwrap(), Prob::frac(12, 100));
        assert_eq!(
            t.marginal_a_entry(0, 1, 0),
            Err(TableError::MissingEntries(Index::new(0, 0, 1, 1)))
        );
        assert!(t.marginal_a(0, 0).is_err());
    }

    #[test]
    fn deterministic_product_marginal() {
        let shape = Shape::new(2, 2, 3, 3).unwrap();
        let t = BehaviorTable::from_f64_fn(shape, |i| if i.a == 0 && i.b == 0 { 1.0 } else { 0.0 })
            .unwrap();
        assert_eq!(t.marginal_a(1, 0).unwrap().values(), vec![1.0, 0.0, 0.0]);
    }

    #[test]
    fn chsh_is_party_symmetric() {
        let t = chsh_like();
        assert_eq!(t.swap_parties(), t);
    }

    #[test]
    fn swap_moves_entries_and_shape() {
        let shape = Shape::new(1, 2, 3, 2).unwrap();
        let t = BehaviorTable::from_f64_fn(shape, |i| (shape.offset(i) as f64) / 100.0).unwrap();
        let s = t.swap_parties();
        assert_eq!(s.shape(), Shape::new(2, 1, 2, 3).unwrap());
        for i in shape.indices() {
            assert_eq!(t.p(i.x, i.y, i.a, i.b), s.p(i.y, i.x, i.b, i.a));
        }
        assert_eq!(s.swap_parties(), t);
    }

    #[test]
    fn relabel_rejects_non_permutations() {
        let t = chsh_like();
        let mut r = Relabeling::identity(t.shape());
        r.a[1] = vec![0, 0];
        assert!(matches!(
            t.relabel(&r),
            Err(TableError::InvalidRelabeling(_))
        ));
        assert_eq!(t.relabel(&Relabeling::identity(t.shape())).unwrap(), t);
    }

    #[test]
    fn builder_rejects_out_of_range_index_and_nan() {
        let mut b = BehaviorTable::builder(Shape::new(1, 1, 2, 2).unwrap());
        assert!(b.set_f64(Index::new(0, 0, 2, 0), 0.5).is_err());
        assert!(b.set_f64(Index::new(0, 0, 0, 0), f64::NAN).is_err());
    }
}
