//! Immutable weighted sparse graphs and the set functionals defined on them.
//!
//! Storage is CSR. Undirected graphs keep one symmetric adjacency; directed
//! graphs keep both the out- and the in-adjacency so that either direction
//! can be scanned locally.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Sorted, deduplicated list of vertex ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct VertexSet {
    ids: Vec<usize>,
}

impl VertexSet {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds a set from arbitrary ids; ids must be `< n`.
    pub fn new(ids: impl IntoIterator<Item = usize>, n: usize) -> Result<Self> {
        let mut ids: Vec<usize> = ids.into_iter().collect();
        if let Some(&bad) = ids.iter().find(|&&v| v >= n) {
            return Err(Error::VertexOutOfRange { vertex: bad, n });
        }
        ids.sort_unstable();
        ids.dedup();
        Ok(Self { ids })
    }

    /// Builds a set without a range check. Ids are still sorted and deduplicated.
    pub fn from_ids(ids: impl IntoIterator<Item = usize>) -> Self {
        let mut ids: Vec<usize> = ids.into_iter().collect();
        ids.sort_unstable();
        ids.dedup();
        Self { ids }
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.ids.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.ids.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.ids
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet::from_ids(self.iter().chain(other.iter()))
    }

    /// First common element, if any.
    pub fn first_overlap(&self, other: &VertexSet) -> Option<usize> {
        let (mut i, mut j) = (0, 0);
        while i < self.ids.len() && j < other.ids.len() {
            match self.ids[i].cmp(&other.ids[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return Some(self.ids[i]),
            }
        }
        None
    }

    pub fn symmetric_difference_len(&self, other: &VertexSet) -> usize {
        let common = self.iter().filter(|&v| other.contains(v)).count();
        self.len() + other.len() - 2 * common
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.ids
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self::from_ids(iter)
    }
}

/// Iterator over `(neighbor, weight)` pairs of one CSR row.
#[derive(Clone, Debug)]
pub struct Neighbors<'a, T> {
    targets: std::slice::Iter<'a, usize>,
    weights: std::slice::Iter<'a, T>,
}

impl<T: Copy> Iterator for Neighbors<'_, T> {
    type Item = (usize, T);

    #[inline]
    fn next(&mut self) -> Option<Self::Item> {
        Some((*self.targets.next()?, *self.weights.next()?))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        self.targets.size_hint()
    }
}

impl<T: Copy> ExactSizeIterator for Neighbors<'_, T> {}

#[derive(Clone, Debug, Default)]
struct Csr<T> {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    weights: Vec<T>,
}

impl<T: Scalar> Csr<T> {
    /// `arcs` must be sorted by source.
    fn from_sorted(n: usize, arcs: &[(usize, usize, T)]) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for &(u, _, _) in arcs {
            offsets[u + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        Self {
            offsets,
            targets: arcs.iter().map(|a| a.1).collect(),
            weights: arcs.iter().map(|a| a.2).collect(),
        }
    }

    #[inline]
    fn row(&self, v: usize) -> Neighbors<'_, T> {
        let (a, b) = (self.offsets[v], self.offsets[v + 1]);
        Neighbors {
            targets: self.targets[a..b].iter(),
            weights: self.weights[a..b].iter(),
        }
    }

    #[inline]
    fn row_len(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    fn row_sums(&self, n: usize) -> Vec<T> {
        (0..n).map(|v| self.row(v).map(|(_, w)| w).fold(T::zero(), |a, b| a + b)).collect()
    }
}

/// Immutable weighted graph, undirected or directed.
///
/// Invariants: positive finite weights, no self-loops, ids dense in `[0, n)`,
/// parallel edges merged by summing weights, undirected adjacency symmetric.
#[derive(Clone, Debug)]
pub struct WeightedGraph<T = f64> {
    n: usize,
    directed: bool,
    out: Csr<T>,
    // only populated for directed graphs
    inc: Csr<T>,
    out_degree: Vec<T>,
    in_degree: Vec<T>,
    edge_count: usize,
    total_volume: T,
}

impl<T: Scalar> WeightedGraph<T> {
    pub fn builder(n: usize, directed: bool) -> GraphBuilder<T> {
        GraphBuilder::new(n, directed)
    }

    /// Convenience constructor used heavily in tests.
    pub fn from_edges(
        n: usize,
        directed: bool,
        edges: impl IntoIterator<Item = (usize, usize, T)>,
    ) -> Result<Self> {
        let mut b = GraphBuilder::new(n, directed);
        for (u, v, w) in edges {
            b.add_edge(u, v, w)?;
        }
        Ok(b.build())
    }

    /// Unit-weight convenience constructor.
    pub fn from_unweighted(
        n: usize,
        directed: bool,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        Self::from_edges(n, directed, edges.into_iter().map(|(u, v)| (u, v, T::one())))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Number of distinct edges (arcs for digraphs) after merging.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Sum of all degrees (`2·Σw` undirected, `Σw` over arcs for out-degrees of a digraph).
    pub fn total_volume(&self) -> T {
        self.total_volume
    }

    #[inline]
    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    /// Neighbors of `v` in an undirected graph, out-neighbors in a digraph.
    #[inline]
    pub fn neighbors(&self, v: usize) -> Neighbors<'_, T> {
        self.out.row(v)
    }

    #[inline]
    pub fn out_neighbors(&self, v: usize) -> Neighbors<'_, T> {
        self.out.row(v)
    }

    /// In-neighbors of `v`; equals `neighbors` for undirected graphs.
    #[inline]
    pub fn in_neighbors(&self, v: usize) -> Neighbors<'_, T> {
        if self.directed {
            self.inc.row(v)
        } else {
            self.out.row(v)
        }
    }

    #[inline]
    pub(crate) fn out_row_len(&self, v: usize) -> usize {
        self.out.row_len(v)
    }

    #[inline]
    pub(crate) fn in_row_len(&self, v: usize) -> usize {
        if self.directed {
            self.inc.row_len(v)
        } else {
            self.out.row_len(v)
        }
    }

    /// Weighted degree. For a digraph this is `deg_out + deg_in`.
    pub fn degree(&self, v: usize) -> Result<T> {
        self.check_vertex(v)?;
        Ok(self.deg(v))
    }

    #[inline]
    pub(crate) fn deg(&self, v: usize) -> T {
        if self.directed {
            self.out_degree[v] + self.in_degree[v]
        } else {
            self.out_degree[v]
        }
    }

    #[inline]
    pub(crate) fn deg_out(&self, v: usize) -> T {
        self.out_degree[v]
    }

    #[inline]
    pub(crate) fn deg_in(&self, v: usize) -> T {
        self.in_degree[v]
    }

    pub fn out_degree(&self, v: usize) -> Result<T> {
        self.check_vertex(v)?;
        Ok(self.out_degree[v])
    }

    pub fn in_degree(&self, v: usize) -> Result<T> {
        self.check_vertex(v)?;
        Ok(self.in_degree[v])
    }

    /// All edges once: `u < v` for undirected graphs, every arc for digraphs.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        let directed = self.directed;
        (0..self.n).flat_map(move |u| {
            self.out
                .row(u)
                .filter(move |&(v, _)| directed || u < v)
                .map(move |(v, w)| (u, v, w))
        })
    }

    fn check_set(&self, s: &VertexSet) -> Result<()> {
        match s.as_slice().last() {
            Some(&v) if v >= self.n => Err(Error::VertexOutOfRange { vertex: v, n: self.n }),
            _ => Ok(()),
        }
    }

    fn check_disjoint(&self, a: &VertexSet, b: &VertexSet) -> Result<()> {
        self.check_set(a)?;
        self.check_set(b)?;
        match a.first_overlap(b) {
            Some(v) => Err(Error::OverlappingSets(v)),
            None => Ok(()),
        }
    }

    /// `vol(S) = Σ deg(v)`.
    pub fn volume(&self, s: &VertexSet) -> Result<T> {
        self.check_set(s)?;
        Ok(s.iter().map(|v| self.deg(v)).fold(T::zero(), |a, b| a + b))
    }

    pub fn volume_out(&self, s: &VertexSet) -> Result<T> {
        self.check_set(s)?;
        Ok(s.iter().map(|v| self.out_degree[v]).fold(T::zero(), |a, b| a + b))
    }

    pub fn volume_in(&self, s: &VertexSet) -> Result<T> {
        self.check_set(s)?;
        Ok(s.iter().map(|v| self.in_degree[v]).fold(T::zero(), |a, b| a + b))
    }

    /// Weight of edges between `a` and `b`; for digraphs only arcs from `a` to `b`.
    pub fn cut_weight(&self, a: &VertexSet, b: &VertexSet) -> Result<T> {
        self.check_disjoint(a, b)?;
        Ok(self.cut_unchecked(a, b))
    }

    fn cut_unchecked(&self, a: &VertexSet, b: &VertexSet) -> T {
        a.iter()
            .flat_map(|u| self.out.row(u))
            .filter(|&(v, _)| b.contains(v))
            .map(|(_, w)| w)
            .fold(T::zero(), |a, b| a + b)
    }

    /// Weight of edges leaving `s`.
    pub fn boundary(&self, s: &VertexSet) -> Result<T> {
        self.check_set(s)?;
        Ok(s.iter()
            .flat_map(|u| self.out.row(u))
            .filter(|&(v, _)| !s.contains(v))
            .map(|(_, w)| w)
            .fold(T::zero(), |a, b| a + b))
    }

    /// `|∂S| / min(vol S, vol V∖S)` on an undirected graph.
    pub fn conductance(&self, s: &VertexSet) -> Result<T> {
        if self.directed {
            return Err(Error::WrongGraphKind("undirected"));
        }
        if s.is_empty() || s.len() == self.n {
            return Err(Error::undefined("conductance of an empty or full set"));
        }
        let vol = self.volume(s)?;
        let denom = vol.min(self.total_volume - vol);
        if denom <= T::zero() {
            return Err(Error::undefined("conductance with zero volume"));
        }
        Ok(self.boundary(s)? / denom)
    }

    /// `β(L,R) = 1 − 2e(L,R)/vol(L∪R)`.
    pub fn bipartiteness(&self, l: &VertexSet, r: &VertexSet) -> Result<T> {
        if self.directed {
            return Err(Error::WrongGraphKind("undirected"));
        }
        self.check_disjoint(l, r)?;
        if l.is_empty() && r.is_empty() {
            return Err(Error::undefined("bipartiteness of an empty pair"));
        }
        let vol = self.volume(l)? + self.volume(r)?;
        if vol <= T::zero() {
            return Err(Error::undefined("bipartiteness with zero volume"));
        }
        let e = self.cut_unchecked(l, r);
        Ok(T::one() - (e + e) / vol)
    }

    /// `F(L,R) = 1 − 2e(L,R)/(vol_out(L) + vol_in(R))` on a digraph.
    pub fn flow_ratio(&self, l: &VertexSet, r: &VertexSet) -> Result<T> {
        if !self.directed {
            return Err(Error::WrongGraphKind("directed"));
        }
        self.check_disjoint(l, r)?;
        let denom = self.volume_out(l)? + self.volume_in(r)?;
        if denom <= T::zero() {
            return Err(Error::undefined("flow ratio with zero denominator"));
        }
        let e = self.cut_unchecked(l, r);
        Ok(T::one() - (e + e) / denom)
    }

    /// `CI(L,R) = ½·|e(L,R) − e(R,L)| / (e(L,R) + e(R,L))` on a digraph.
    pub fn cut_imbalance(&self, l: &VertexSet, r: &VertexSet) -> Result<T> {
        if !self.directed {
            return Err(Error::WrongGraphKind("directed"));
        }
        self.check_disjoint(l, r)?;
        let lr = self.cut_unchecked(l, r);
        let rl = self.cut_unchecked(r, l);
        let total = lr + rl;
        if total <= T::zero() {
            return Err(Error::undefined("cut imbalance with no crossing edges"));
        }
        Ok(T::half() * ((lr - rl) / total).abs())
    }

    /// Same graph with every weight multiplied by `c`.
    pub fn scaled(&self, c: T) -> Result<Self> {
        if !(c > T::zero()) || !c.is_finite() {
            return Err(Error::invalid("scale factor must be positive and finite"));
        }
        Self::from_edges(self.n, self.directed, self.edges().map(|(u, v, w)| (u, v, w * c)))
    }

    /// Digraph with two opposite arcs per undirected edge.
    pub fn bidirected(&self) -> Result<Self> {
        if self.directed {
            return Err(Error::WrongGraphKind("undirected"));
        }
        Self::from_edges(
            self.n,
            true,
            self.edges().flat_map(|(u, v, w)| [(u, v, w), (v, u, w)]),
        )
    }
}

/// Collects edges, validates them, and merges duplicates on `build`.
#[derive(Clone, Debug)]
pub struct GraphBuilder<T> {
    n: usize,
    directed: bool,
    edges: Vec<(usize, usize, T)>,
}

impl<T: Scalar> GraphBuilder<T> {
    pub fn new(n: usize, directed: bool) -> Self {
        Self { n, directed, edges: Vec::new() }
    }

    pub fn with_capacity(n: usize, directed: bool, edges: usize) -> Self {
        Self { n, directed, edges: Vec::with_capacity(edges) }
    }

    /// Grows the vertex count to at least `n`.
    pub fn ensure_vertices(&mut self, n: usize) {
        self.n = self.n.max(n);
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn add_edge(&mut self, u: usize, v: usize, w: T) -> Result<()> {
        let n = self.n;
        for x in [u, v] {
            if x >= n {
                return Err(Error::VertexOutOfRange { vertex: x, n });
            }
        }
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if !(w > T::zero()) || !w.is_finite() {
            return Err(Error::InvalidWeight { u, v, weight: w.to_f64_lossy() });
        }
        let (a, b) = if self.directed || u < v { (u, v) } else { (v, u) };
        self.edges.push((a, b, w));
        Ok(())
    }

    pub fn build(mut self) -> WeightedGraph<T> {
        let n = self.n;
        self.edges.sort_unstable_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
        let mut merged: Vec<(usize, usize, T)> = Vec::with_capacity(self.edges.len());
        for (u, v, w) in self.edges {
            match merged.last_mut() {
                Some(last) if last.0 == u && last.1 == v => last.2 += w,
                _ => merged.push((u, v, w)),
            }
        }
        let edge_count = merged.len();

        if self.directed {
            let out = Csr::from_sorted(n, &merged);
            let mut reversed: Vec<(usize, usize, T)> = merged.iter().map(|&(u, v, w)| (v, u, w)).collect();
            reversed.sort_unstable_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
            let inc = Csr::from_sorted(n, &reversed);
            let out_degree = out.row_sums(n);
            let in_degree = inc.row_sums(n);
            let total_volume = out_degree.iter().copied().fold(T::zero(), |a, b| a + b) + in_degree.iter().copied().fold(T::zero(), |a, b| a + b);
            WeightedGraph {
                n,
                directed: true,
                out,
                inc,
                out_degree,
                in_degree,
                edge_count,
                total_volume,
            }
        } else {
            let mut arcs: Vec<(usize, usize, T)> = Vec::with_capacity(2 * edge_count);
            for &(u, v, w) in &merged {
                arcs.push((u, v, w));
                arcs.push((v, u, w));
            }
            arcs.sort_unstable_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
            let out = Csr::from_sorted(n, &arcs);
            let degree = out.row_sums(n);
            let total_volume = degree.iter().copied().fold(T::zero(), |a, b| a + b);
            WeightedGraph {
                n,
                directed: false,
                out,
                inc: Csr::default(),
                in_degree: degree.clone(),
                out_degree: degree,
                edge_count,
                total_volume,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type G = WeightedGraph<f64>;

    fn set(ids: &[usize]) -> VertexSet {
        VertexSet::from_ids(ids.iter().copied())
    }

    fn triangle() -> G {
        G::from_unweighted(3, false, [(0, 1), (1, 2), (2, 0)]).unwrap()
    }

    fn four_cycle() -> G {
        G::from_unweighted(4, false, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    #[test]
    fn degrees() {
        let t = triangle();
        for v in 0..3 {
            assert_eq!(t.degree(v).unwrap(), 2.0);
        }
        let d = G::from_unweighted(2, true, [(0, 1)]).unwrap();
        assert_eq!(d.out_degree(0).unwrap(), 1.0);
        assert_eq!(d.in_degree(0).unwrap(), 0.0);
        let w = G::from_edges(2, false, [(0, 1, 30.0)]).unwrap();
        assert_eq!(w.degree(0).unwrap(), 30.0);
        assert!(matches!(t.degree(3), Err(Error::VertexOutOfRange { vertex: 3, n: 3 })));
    }

    #[test]
    fn volumes() {
        let t = triangle();
        assert_eq!(t.volume(&VertexSet::empty()).unwrap(), 0.0);
        assert_eq!(t.volume(&set(&[0, 1, 2])).unwrap(), 6.0);
        assert_eq!(four_cycle().volume(&set(&[0, 1])).unwrap(), 4.0);
    }

    #[test]
    fn cuts() {
        let c = four_cycle();
        assert_eq!(c.cut_weight(&set(&[0, 2]), &set(&[1, 3])).unwrap(), 4.0);
        let d = G::from_unweighted(3, true, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(d.cut_weight(&set(&[0]), &set(&[1])).unwrap(), 1.0);
        assert_eq!(d.cut_weight(&set(&[1]), &set(&[0])).unwrap(), 0.0);
        let pair = G::from_unweighted(4, false, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(pair.cut_weight(&set(&[0, 1]), &set(&[2, 3])).unwrap(), 0.0);
        assert!(matches!(
            c.cut_weight(&set(&[0, 1]), &set(&[1, 2])),
            Err(Error::OverlappingSets(1))
        ));
    }

    #[test]
    fn conductance_values() {
        let single = G::from_unweighted(2, false, [(0, 1)]).unwrap();
        assert_eq!(single.conductance(&set(&[0])).unwrap(), 1.0);
        let k22 = G::from_unweighted(4, false, [(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        assert_eq!(k22.conductance(&set(&[0, 1])).unwrap(), 1.0);
        let path = G::from_unweighted(3, false, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(path.conductance(&set(&[0])).unwrap(), 1.0);
        // cut 1 over min(vol {a,b} = 3, vol {c} = 1)
        assert_eq!(path.conductance(&set(&[0, 1])).unwrap(), 1.0);
        let longer = G::from_unweighted(4, false, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(longer.conductance(&set(&[0, 1])).unwrap(), 1.0 / 3.0);
        assert!(path.conductance(&VertexSet::empty()).is_err());
        assert!(path.conductance(&set(&[0, 1, 2])).is_err());
    }

    #[test]
    fn bipartiteness_values() {
        let c = four_cycle();
        assert_eq!(c.bipartiteness(&set(&[0, 2]), &set(&[1, 3])).unwrap(), 0.0);
        let t = triangle();
        assert_eq!(t.bipartiteness(&set(&[0]), &set(&[1])).unwrap(), 0.5);
        let g = G::from_unweighted(4, false, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.bipartiteness(&set(&[0]), &set(&[2])).unwrap(), 1.0);
        assert!(t.bipartiteness(&VertexSet::empty(), &VertexSet::empty()).is_err());
        assert!(t.bipartiteness(&set(&[0]), &set(&[0])).is_err());
    }

    #[test]
    fn flow_ratio_values() {
        let d = G::from_unweighted(2, true, [(0, 1)]).unwrap();
        assert_eq!(d.flow_ratio(&set(&[0]), &set(&[1])).unwrap(), 0.0);
        // reversed roles leave a zero denominator on a lone arc
        assert!(d.flow_ratio(&set(&[1]), &set(&[0])).is_err());
        let chain = G::from_unweighted(3, true, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(chain.flow_ratio(&set(&[1]), &set(&[0])).unwrap(), 1.0);
        let iso = G::from_unweighted(3, true, [(0, 1)]).unwrap();
        assert!(iso.flow_ratio(&set(&[1]), &set(&[2])).is_err());
    }

    #[test]
    fn cut_imbalance_values() {
        let one_way = G::from_unweighted(4, true, [(0, 2), (1, 3)]).unwrap();
        assert_eq!(one_way.cut_imbalance(&set(&[0, 1]), &set(&[2, 3])).unwrap(), 0.5);
        let both = G::from_unweighted(2, true, [(0, 1), (1, 0)]).unwrap();
        assert_eq!(both.cut_imbalance(&set(&[0]), &set(&[1])).unwrap(), 0.0);
        // e(L,R) = 3, e(R,L) = 1
        let g = G::from_edges(2, true, [(0, 1, 3.0), (1, 0, 1.0)]).unwrap();
        assert_eq!(g.cut_imbalance(&set(&[0]), &set(&[1])).unwrap(), 0.25);
        let none = G::from_unweighted(3, true, [(0, 1)]).unwrap();
        assert!(none.cut_imbalance(&set(&[0]), &set(&[2])).is_err());
    }

    #[test]
    fn construction_rejects_bad_edges() {
        let mut b = G::builder(3, false);
        assert!(matches!(b.add_edge(1, 1, 1.0), Err(Error::SelfLoop(1))));
        assert!(matches!(b.add_edge(0, 1, 0.0), Err(Error::InvalidWeight { .. })));
        assert!(matches!(b.add_edge(0, 1, -2.0), Err(Error::InvalidWeight { .. })));
        assert!(matches!(b.add_edge(0, 5, 1.0), Err(Error::VertexOutOfRange { .. })));
    }

    #[test]
    fn parallel_edges_merge() {
        let g = G::from_edges(2, false, [(0, 1, 1.0), (1, 0, 2.5)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.degree(0).unwrap(), 3.5);
        let d = G::from_edges(2, true, [(0, 1, 1.0), (0, 1, 1.0), (1, 0, 1.0)]).unwrap();
        assert_eq!(d.edge_count(), 2);
        assert_eq!(d.out_degree(0).unwrap(), 2.0);
        assert_eq!(d.in_degree(0).unwrap(), 1.0);
    }

    #[test]
    fn undirected_adjacency_is_symmetric() {
        let g = G::from_edges(4, false, [(0, 1, 2.0), (1, 2, 3.0), (3, 0, 0.5)]).unwrap();
        for (u, v, w) in g.edges() {
            assert!(g.neighbors(v).any(|(x, wx)| x == u && wx == w));
            assert!(g.neighbors(u).any(|(x, wx)| x == v && wx == w));
        }
    }

    #[test]
    fn works_in_single_precision() {
        let t = WeightedGraph::<f32>::from_unweighted(3, false, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(t.bipartiteness(&set(&[0]), &set(&[1])).unwrap(), 0.5f32);
    }
}
