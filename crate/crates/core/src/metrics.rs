//! Clustering quality: adjusted Rand index and the misclassified ratio.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::VertexSet;

/// Per-vertex labels. Values are arbitrary ids; only equality matters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Labeling {
    labels: Vec<usize>,
}

impl Labeling {
    /// Label given to vertices outside every reported cluster.
    pub const OUTSIDE: usize = usize::MAX;

    pub fn new(labels: Vec<usize>) -> Self {
        Self { labels }
    }

    /// `0` on `a`, `1` on `b`, [`Labeling::OUTSIDE`] elsewhere.
    pub fn from_pair(n: usize, a: &VertexSet, b: &VertexSet) -> Result<Self> {
        if let Some(v) = a.first_overlap(b) {
            return Err(Error::OverlappingSets(v));
        }
        let mut labels = vec![Self::OUTSIDE; n];
        for (set, tag) in [(a, 0), (b, 1)] {
            for v in set.iter() {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
                labels[v] = tag;
            }
        }
        Ok(Self { labels })
    }

    /// Keeps the two ground-truth classes `ca`, `cb` and marks the rest outside.
    pub fn restrict(truth: &[usize], ca: usize, cb: usize) -> Self {
        let labels = truth
            .iter()
            .map(|&l| match l {
                l if l == ca => 0,
                l if l == cb => 1,
                _ => Self::OUTSIDE,
            })
            .collect();
        Self { labels }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.labels
    }

    /// Vertices carrying `label`.
    pub fn members(&self, label: usize) -> VertexSet {
        VertexSet::from_ids(self.labels.iter().enumerate().filter(|(_, &l)| l == label).map(|(v, _)| v))
    }
}

impl From<Vec<usize>> for Labeling {
    fn from(labels: Vec<usize>) -> Self {
        Self::new(labels)
    }
}

fn choose2(x: u64) -> f64 {
    (x as f64) * (x.saturating_sub(1) as f64) / 2.0
}

/// Adjusted Rand index from the contingency table. Two labelings that are both a
/// single cluster (or both all singletons) agree perfectly and score 1.
pub fn ari(a: &Labeling, b: &Labeling) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch { left: a.len(), right: b.len() });
    }
    let mut table: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let mut rows: BTreeMap<usize, u64> = BTreeMap::new();
    let mut cols: BTreeMap<usize, u64> = BTreeMap::new();
    for (&x, &y) in a.labels.iter().zip(&b.labels) {
        *table.entry((x, y)).or_default() += 1;
        *rows.entry(x).or_default() += 1;
        *cols.entry(y).or_default() += 1;
    }
    let index: f64 = table.values().map(|&c| choose2(c)).sum();
    let sa: f64 = rows.values().map(|&c| choose2(c)).sum();
    let sb: f64 = cols.values().map(|&c| choose2(c)).sum();
    let total = choose2(a.len() as u64);
    if total == 0.0 {
        return Ok(1.0);
    }
    let expected = sa * sb / total;
    let max = (sa + sb) / 2.0;
    if max == expected {
        return Ok(1.0);
    }
    Ok((index - expected) / (max - expected))
}

/// `(|L Δ C₁| + |R Δ C₂|) / (|L ∪ C₁| + |R ∪ C₂|)`, minimised over swapping `L` and `R`.
pub fn misclassified_ratio(l: &VertexSet, r: &VertexSet, c1: &VertexSet, c2: &VertexSet) -> Result<f64> {
    if let Some(v) = l.first_overlap(r) {
        return Err(Error::OverlappingSets(v));
    }
    if let Some(v) = c1.first_overlap(c2) {
        return Err(Error::OverlappingSets(v));
    }
    if l.is_empty() && r.is_empty() && c1.is_empty() && c2.is_empty() {
        return Err(Error::undefined("misclassified ratio of four empty sets"));
    }
    let oriented = |x: &VertexSet, y: &VertexSet| {
        let diff = x.symmetric_difference_len(c1) + y.symmetric_difference_len(c2);
        let union = x.union(c1).len() + y.union(c2).len();
        diff as f64 / union as f64
    };
    Ok(oriented(l, r).min(oriented(r, l)))
}
