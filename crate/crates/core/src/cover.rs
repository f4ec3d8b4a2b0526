//! Virtual double cover (undirected input) and semi-double cover (directed input).
//!
//! Every base vertex `v` has two lifts `v₁`, `v₂`. The double cover joins
//! `u₁–v₂` and `u₂–v₁` for each edge `{u,v}`; the semi-double cover joins only
//! `u₁–v₂` for each arc `(u,v)`. Neither cover is ever materialized: all queries
//! go through the base graph's adjacency.

use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{Neighbors, VertexSet, WeightedGraph};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub enum Side {
    First,
    Second,
}

impl Side {
    pub fn from_index(i: u8) -> Result<Side> {
        match i {
            1 => Ok(Side::First),
            2 => Ok(Side::Second),
            _ => Err(Error::invalid(format!("side must be 1 or 2, got {i}"))),
        }
    }

    pub fn index(self) -> u8 {
        match self {
            Side::First => 1,
            Side::Second => 2,
        }
    }

    pub fn flip(self) -> Side {
        match self {
            Side::First => Side::Second,
            Side::Second => Side::First,
        }
    }
}

/// A vertex `(base, side)` of a cover, packed as `2·base + (side − 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoverVertex(usize);

impl CoverVertex {
    #[inline]
    pub fn new(base: usize, side: Side) -> Self {
        CoverVertex(2 * base + usize::from(side == Side::Second))
    }

    #[inline]
    pub fn first(base: usize) -> Self {
        Self::new(base, Side::First)
    }

    #[inline]
    pub fn second(base: usize) -> Self {
        Self::new(base, Side::Second)
    }

    #[inline]
    pub fn base(self) -> usize {
        self.0 / 2
    }

    #[inline]
    pub fn side(self) -> Side {
        if self.0 % 2 == 0 {
            Side::First
        } else {
            Side::Second
        }
    }

    /// The other lift of the same base vertex.
    #[inline]
    pub fn twin(self) -> Self {
        CoverVertex(self.0 ^ 1)
    }

    /// Dense index in `[0, 2n)`.
    #[inline]
    pub fn index(self) -> usize {
        self.0
    }

    #[inline]
    pub fn from_index(i: usize) -> Self {
        CoverVertex(i)
    }
}

impl fmt::Debug for CoverVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.base(), self.side().index())
    }
}

impl fmt::Display for CoverVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.base(), self.side().index())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverKind {
    /// Bipartite lift of an undirected graph.
    Double,
    /// One undirected edge `{u₁, v₂}` per arc `(u, v)` of a digraph.
    SemiDouble,
}

/// Sorted set of cover vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CoverSet {
    ids: Vec<CoverVertex>,
}

impl CoverSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_vertices(it: impl IntoIterator<Item = CoverVertex>) -> Self {
        let mut ids: Vec<CoverVertex> = it.into_iter().collect();
        ids.sort_unstable();
        ids.dedup();
        Self { ids }
    }

    /// `L₁ ∪ R₂`.
    pub fn from_pair(l: &VertexSet, r: &VertexSet) -> Self {
        Self::from_vertices(
            l.iter()
                .map(CoverVertex::first)
                .chain(r.iter().map(CoverVertex::second)),
        )
    }

    #[inline]
    pub fn contains(&self, v: CoverVertex) -> bool {
        self.ids.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = CoverVertex> + '_ {
        self.ids.iter().copied()
    }

    pub fn as_slice(&self) -> &[CoverVertex] {
        &self.ids
    }

    /// At most one lift of every base vertex.
    pub fn is_simple(&self) -> bool {
        // sorted order puts u₁ directly before u₂
        self.ids.windows(2).all(|w| w[0].base() != w[1].base())
    }

    /// `L = {u : u₁ ∈ S}`, `R = {u : u₂ ∈ S}`. Overlapping when `S` is not simple.
    pub fn to_cluster_pair(&self) -> (VertexSet, VertexSet) {
        let l = self.iter().filter(|v| v.side() == Side::First).map(CoverVertex::base);
        let r = self.iter().filter(|v| v.side() == Side::Second).map(CoverVertex::base);
        (VertexSet::from_ids(l), VertexSet::from_ids(r))
    }

    /// `P = {u₁, u₂ : u₁ ∈ S and u₂ ∈ S}`.
    pub fn doubled(&self) -> CoverSet {
        CoverSet {
            ids: self.iter().filter(|&v| self.contains(v.twin())).collect(),
        }
    }

    /// `S ∖ P`; always simple.
    pub fn epsilon_simple_cleanup(&self) -> CoverSet {
        CoverSet {
            ids: self.iter().filter(|&v| !self.contains(v.twin())).collect(),
        }
    }

    /// `{u₂ : u₁ ∈ S} ∪ {u₁ : u₂ ∈ S}`.
    pub fn simple_complement(&self) -> CoverSet {
        Self::from_vertices(self.iter().map(CoverVertex::twin))
    }
}

impl FromIterator<CoverVertex> for CoverSet {
    fn from_iter<I: IntoIterator<Item = CoverVertex>>(iter: I) -> Self {
        Self::from_vertices(iter)
    }
}

/// Neighbors of a cover vertex.
#[derive(Clone, Debug)]
pub struct CoverNeighbors<'a, T> {
    inner: Neighbors<'a, T>,
    side: Side,
}

impl<T: Copy> Iterator for CoverNeighbors<'_, T> {
    type Item = (CoverVertex, T);

    #[inline]
    fn next(&mut self) -> Option<Self::Item> {
        let (v, w) = self.inner.next()?;
        Some((CoverVertex::new(v, self.side), w))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        self.inner.size_hint()
    }
}

/// Read-only view of the (semi-)double cover of a base graph.
#[derive(Clone, Copy, Debug)]
pub struct Cover<'g, T> {
    graph: &'g WeightedGraph<T>,
    kind: CoverKind,
}

impl<'g, T: Scalar> Cover<'g, T> {
    /// Double cover for undirected graphs, semi-double cover for digraphs.
    pub fn of(graph: &'g WeightedGraph<T>) -> Self {
        let kind = if graph.is_directed() {
            CoverKind::SemiDouble
        } else {
            CoverKind::Double
        };
        Self { graph, kind }
    }

    pub fn double(graph: &'g WeightedGraph<T>) -> Result<Self> {
        if graph.is_directed() {
            return Err(Error::WrongGraphKind("undirected"));
        }
        Ok(Self { graph, kind: CoverKind::Double })
    }

    pub fn semi_double(graph: &'g WeightedGraph<T>) -> Result<Self> {
        if !graph.is_directed() {
            return Err(Error::WrongGraphKind("directed"));
        }
        Ok(Self { graph, kind: CoverKind::SemiDouble })
    }

    pub fn graph(&self) -> &'g WeightedGraph<T> {
        self.graph
    }

    pub fn kind(&self) -> CoverKind {
        self.kind
    }

    /// `2n`.
    pub fn vertex_count(&self) -> usize {
        2 * self.graph.n()
    }

    pub fn check(&self, v: CoverVertex) -> Result<()> {
        if v.index() < self.vertex_count() {
            Ok(())
        } else {
            Err(Error::invalid(format!(
                "cover vertex {v} out of range for a base graph with {} vertices",
                self.graph.n()
            )))
        }
    }

    #[inline]
    pub fn neighbors(&self, v: CoverVertex) -> CoverNeighbors<'g, T> {
        let base = v.base();
        let (inner, side) = match (self.kind, v.side()) {
            (CoverKind::Double, s) => (self.graph.neighbors(base), s.flip()),
            (CoverKind::SemiDouble, Side::First) => (self.graph.out_neighbors(base), Side::Second),
            (CoverKind::SemiDouble, Side::Second) => (self.graph.in_neighbors(base), Side::First),
        };
        CoverNeighbors { inner, side }
    }

    /// Checked variant of [`Cover::neighbors`].
    pub fn cover_neighbors(&self, v: CoverVertex) -> Result<Vec<(CoverVertex, T)>> {
        self.check(v)?;
        Ok(self.neighbors(v).collect())
    }

    #[inline]
    pub(crate) fn neighbor_count(&self, v: CoverVertex) -> usize {
        let base = v.base();
        match (self.kind, v.side()) {
            (CoverKind::Double, _) | (CoverKind::SemiDouble, Side::First) => self.graph.out_row_len(base),
            (CoverKind::SemiDouble, Side::Second) => self.graph.in_row_len(base),
        }
    }

    /// `deg_G(u)` for the double cover; `deg_out(u)` for `u₁` and `deg_in(u)` for `u₂`
    /// in the semi-double cover.
    #[inline]
    pub fn degree(&self, v: CoverVertex) -> T {
        let base = v.base();
        match (self.kind, v.side()) {
            (CoverKind::Double, _) => self.graph.deg(base),
            (CoverKind::SemiDouble, Side::First) => self.graph.deg_out(base),
            (CoverKind::SemiDouble, Side::Second) => self.graph.deg_in(base),
        }
    }

    /// `vol(V_H)`: `2·vol(G)` or `vol_out(V) + vol_in(V)`.
    pub fn total_volume(&self) -> T {
        match self.kind {
            CoverKind::Double => self.graph.total_volume() + self.graph.total_volume(),
            CoverKind::SemiDouble => self.graph.total_volume(),
        }
    }

    pub fn volume(&self, s: &CoverSet) -> T {
        s.iter().map(|v| self.degree(v)).fold(T::zero(), |a, b| a + b)
    }

    /// Weight of cover edges leaving `s`.
    pub fn boundary(&self, s: &CoverSet) -> T {
        s.iter()
            .flat_map(|v| self.neighbors(v))
            .filter(|&(y, _)| !s.contains(y))
            .map(|(_, w)| w)
            .fold(T::zero(), |a, b| a + b)
    }

    fn check_set(&self, s: &CoverSet) -> Result<()> {
        match s.as_slice().last() {
            Some(&v) => self.check(v),
            None => Ok(()),
        }
    }

    /// `Φ_H(S) = |∂S| / min(vol S, vol V_H − vol S)`.
    pub fn conductance(&self, s: &CoverSet) -> Result<T> {
        self.check_set(s)?;
        if s.is_empty() || s.len() == self.vertex_count() {
            return Err(Error::undefined("cover conductance of an empty or full set"));
        }
        let vol = self.volume(s);
        let denom = vol.min(self.total_volume() - vol);
        if denom <= T::zero() {
            return Err(Error::undefined("cover conductance with zero volume"));
        }
        Ok(self.boundary(s) / denom)
    }

    /// `|∂S| / vol S`, the one-sided ratio. Agrees with [`Cover::conductance`]
    /// whenever `vol S ≤ vol V_H / 2`, which every simple set of a double cover satisfies.
    pub fn cut_ratio(&self, s: &CoverSet) -> Result<T> {
        self.check_set(s)?;
        let vol = self.volume(s);
        if vol <= T::zero() {
            return Err(Error::undefined("cut ratio with zero volume"));
        }
        Ok(self.boundary(s) / vol)
    }

    /// `vol(P) / vol(S)`: `S` is ε-simple for every ε at least this value.
    pub fn simplicity_defect(&self, s: &CoverSet) -> Result<T> {
        let vol = self.volume(s);
        if vol <= T::zero() {
            return Err(Error::undefined("simplicity defect with zero volume"));
        }
        Ok(self.volume(&s.doubled()) / vol)
    }
}

/// Free-function form of [`Cover::conductance`] on the cover matching `g`'s kind.
pub fn conductance_in_cover<T: Scalar>(g: &WeightedGraph<T>, s: &CoverSet) -> Result<T> {
    Cover::of(g).conductance(s)
}
