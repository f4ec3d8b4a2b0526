//! Slow exact references used to check the fast paths: dense Pagerank, exhaustive
//! set search, the exact ESP kernel, and the Lovász–Simonovits curve.
//!
//! These build their own view of the cover straight from the edge list instead
//! of going through [`crate::cover::Cover`], so a bug there does not hide here.
//! Everything is computed in `f64`.

use crate::cover::{CoverSet, CoverVertex};
use crate::error::{Error, Result};
use crate::graph::{VertexSet, WeightedGraph};
use crate::pagerank::MassVector;
use crate::scalar::Scalar;

pub const PAGERANK_MAX_COVER: usize = 4096;
pub const PAIR_MAX_N: usize = 8;
pub const ALL_SETS_MAX_COVER: usize = 16;
pub const KERNEL_MAX_COVER: usize = 24;

/// Dense vector over the `2n` cover vertices, indexed by [`CoverVertex::index`].
#[derive(Clone, Debug, PartialEq)]
pub struct DenseVector(pub Vec<f64>);

impl DenseVector {
    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    pub fn indicator(len: usize, v: CoverVertex) -> Self {
        let mut d = Self::zeros(len);
        d.0[v.index()] = 1.0;
        d
    }

    pub fn from_mass<T: Scalar>(m: &MassVector<T>, len: usize) -> Self {
        let mut d = Self::zeros(len);
        for (v, x) in m.iter() {
            d.0[v.index()] = x.to_f64_lossy();
        }
        d
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn l1_norm(&self) -> f64 {
        self.0.iter().map(|x| x.abs()).fold(0.0, |a, b| a + b)
    }

    pub fn max_abs_diff(&self, other: &DenseVector) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn add(&self, other: &DenseVector) -> DenseVector {
        DenseVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// Adjacency lists of the cover (or of an undirected base graph), built directly
/// from the edge list.
struct Lifted {
    adj: Vec<Vec<(usize, f64)>>,
    deg: Vec<f64>,
}

impl Lifted {
    fn cover<T: Scalar>(g: &WeightedGraph<T>) -> Self {
        let len = 2 * g.n();
        let mut adj = vec![Vec::new(); len];
        let mut link = |a: usize, b: usize, w: f64| {
            adj[a].push((b, w));
            adj[b].push((a, w));
        };
        for (u, v, w) in g.edges() {
            let w = w.to_f64_lossy();
            link(2 * u, 2 * v + 1, w);
            if !g.is_directed() {
                link(2 * u + 1, 2 * v, w);
            }
        }
        Self::finish(adj)
    }

    fn base<T: Scalar>(g: &WeightedGraph<T>) -> Self {
        let mut adj = vec![Vec::new(); g.n()];
        for (u, v, w) in g.edges() {
            adj[u].push((v, w.to_f64_lossy()));
            adj[v].push((u, w.to_f64_lossy()));
        }
        Self::finish(adj)
    }

    fn finish(adj: Vec<Vec<(usize, f64)>>) -> Self {
        let deg = adj.iter().map(|row| row.iter().map(|e| e.1).fold(0.0, |a, b| a + b)).collect();
        Self { adj, deg }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    /// `x ↦ xW` for the lazy walk `W = ½(I + D⁻¹A)`; isolated vertices keep their mass.
    fn apply_walk(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; x.len()];
        for (a, &m) in x.iter().enumerate() {
            if m == 0.0 {
                continue;
            }
            if self.deg[a] <= 0.0 {
                out[a] += m;
                continue;
            }
            out[a] += 0.5 * m;
            for &(b, w) in &self.adj[a] {
                out[b] += 0.5 * m * w / self.deg[a];
            }
        }
        out
    }

    /// `χ_y W χ_S^T`.
    fn hit_probability(&self, y: usize, members: &[bool]) -> f64 {
        if self.deg[y] <= 0.0 {
            return if members[y] { 1.0 } else { 0.0 };
        }
        let inside: f64 = self.adj[y].iter().filter(|e| members[e.0]).map(|e| e.1).fold(0.0, |a, b| a + b);
        0.5 * (members[y] as u8 as f64) + 0.5 * inside / self.deg[y]
    }
}

/// `pr(α, s) = α Σ_t (1−α)^t s W^t`, summed until the remaining tail is below
/// `1e-13·‖s‖₁`. On the cover when `on_cover`, else on the undirected base graph.
pub fn exact_pagerank<T: Scalar>(g: &WeightedGraph<T>, on_cover: bool, alpha: f64, s: &DenseVector) -> Result<DenseVector> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::invalid(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    let lifted = if on_cover {
        if 2 * g.n() > PAGERANK_MAX_COVER {
            return Err(Error::SizeGuard(format!("cover has {} vertices, limit {PAGERANK_MAX_COVER}", 2 * g.n())));
        }
        Lifted::cover(g)
    } else {
        if g.is_directed() {
            return Err(Error::WrongGraphKind("undirected"));
        }
        if g.n() > PAGERANK_MAX_COVER {
            return Err(Error::SizeGuard(format!("graph has {} vertices, limit {PAGERANK_MAX_COVER}", g.n())));
        }
        Lifted::base(g)
    };
    if s.len() != lifted.len() {
        return Err(Error::LengthMismatch { left: s.len(), right: lifted.len() });
    }
    let norm = s.l1_norm();
    let mut term: Vec<f64> = s.0.iter().map(|x| alpha * x).collect();
    let mut sum = term.clone();
    let mut tail = (1.0 - alpha) * norm;
    while tail > 1e-13 * norm.max(f64::MIN_POSITIVE) {
        term = lifted.apply_walk(&term).into_iter().map(|x| (1.0 - alpha) * x).collect();
        for (a, b) in sum.iter_mut().zip(&term) {
            *a += b;
        }
        tail *= 1.0 - alpha;
    }
    Ok(DenseVector(sum))
}

/// Exhaustive minimum of `β(L, R)` over disjoint `(L, R)` with `vol(L ∪ R) > 0`.
/// Ties go to the lexicographically smallest `(L, R)`.
pub fn brute_force_best_pair<T: Scalar>(g: &WeightedGraph<T>) -> Result<(VertexSet, VertexSet, f64)> {
    if g.is_directed() {
        return Err(Error::WrongGraphKind("undirected"));
    }
    let n = g.n();
    if n > PAIR_MAX_N {
        return Err(Error::SizeGuard(format!("{n} vertices, limit {PAIR_MAX_N}")));
    }
    let base = Lifted::base(g);
    let mut best: Option<(Vec<u8>, f64)> = None;
    for code in 0..3usize.pow(n as u32) {
        let side = ternary(code, n);
        let vol: f64 = (0..n).filter(|&v| side[v] != 0).map(|v| base.deg[v]).fold(0.0, |a, b| a + b);
        if vol <= 0.0 {
            continue;
        }
        let mut cross = 0.0;
        for v in (0..n).filter(|&v| side[v] == 1) {
            cross += base.adj[v].iter().filter(|e| side[e.0] == 2).map(|e| e.1).sum::<f64>();
        }
        let beta = 1.0 - 2.0 * cross / vol;
        let better = match &best {
            None => true,
            Some((_, b)) if beta < *b => true,
            // equal values: prefer the lexicographically smaller (L, R)
            Some((s, b)) if beta == *b => pair_key(&side) < pair_key(s),
            _ => false,
        };
        if better {
            best = Some((side, beta));
        }
    }
    let (side, beta) = best.ok_or(Error::NotFound)?;
    let pick = |s: u8| VertexSet::from_ids((0..n).filter(|&v| side[v] == s));
    Ok((pick(1), pick(2), beta))
}

fn pair_key(side: &[u8]) -> (Vec<usize>, Vec<usize>) {
    let pick = |s: u8| (0..side.len()).filter(|&v| side[v] == s).collect();
    (pick(1), pick(2))
}

fn ternary(mut code: usize, n: usize) -> Vec<u8> {
    let mut digits = vec![0u8; n];
    for d in digits.iter_mut() {
        *d = (code % 3) as u8;
        code /= 3;
    }
    digits
}

/// Exhaustive minimum of the cover conductance, over simple sets only (`3ⁿ`) or
/// over all cover subsets (`2^{2n}`). Sets with undefined conductance are skipped.
pub fn brute_force_min_conductance<T: Scalar>(g: &WeightedGraph<T>, simple_only: bool) -> Result<(CoverSet, f64)> {
    let n = g.n();
    let len = 2 * n;
    if simple_only && n > PAIR_MAX_N {
        return Err(Error::SizeGuard(format!("{n} vertices, limit {PAIR_MAX_N}")));
    }
    if !simple_only && len > ALL_SETS_MAX_COVER {
        return Err(Error::SizeGuard(format!("cover has {len} vertices, limit {ALL_SETS_MAX_COVER}")));
    }
    let cover = Lifted::cover(g);
    let total: f64 = cover.deg.iter().fold(0.0, |a, b| a + b);
    let candidates: Box<dyn Iterator<Item = Vec<bool>>> = if simple_only {
        Box::new((0..3usize.pow(n as u32)).map(move |code| {
            let side = ternary(code, n);
            let mut m = vec![false; len];
            for v in 0..n {
                match side[v] {
                    1 => m[2 * v] = true,
                    2 => m[2 * v + 1] = true,
                    _ => {}
                }
            }
            m
        }))
    } else {
        Box::new((0..1usize << len).map(move |bits| (0..len).map(|i| bits >> i & 1 == 1).collect()))
    };
    let mut best: Option<(Vec<bool>, f64)> = None;
    for members in candidates {
        let vol: f64 = (0..len).filter(|&i| members[i]).map(|i| cover.deg[i]).fold(0.0, |a, b| a + b);
        let denom = vol.min(total - vol);
        if denom <= 0.0 {
            continue;
        }
        let mut cut = 0.0;
        for i in (0..len).filter(|&i| members[i]) {
            cut += cover.adj[i].iter().filter(|e| !members[e.0]).map(|e| e.1).sum::<f64>();
        }
        let phi = cut / denom;
        if best.as_ref().is_none_or(|b| phi < b.1) {
            best = Some((members, phi));
        }
    }
    let (members, phi) = best.ok_or(Error::NotFound)?;
    let set = CoverSet::from_vertices((0..len).filter(|&i| members[i]).map(CoverVertex::from_index));
    Ok((set, phi))
}

/// One successor of the ESP kernel row.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelEntry {
    pub set: CoverSet,
    /// `K(S, S′)`.
    pub k: f64,
    /// `K̂(S, S′) = vol(S′)/vol(S) · K(S, S′)`.
    pub k_hat: f64,
    pub volume: f64,
}

/// The full row `K(S, ·)` of the evolving set process from `s`, with its
/// volume-biased reweighting. Includes `∅` when it has positive probability.
pub fn exact_esp_kernel<T: Scalar>(g: &WeightedGraph<T>, s: &CoverSet) -> Result<Vec<KernelEntry>> {
    let len = 2 * g.n();
    if len > KERNEL_MAX_COVER {
        return Err(Error::SizeGuard(format!("cover has {len} vertices, limit {KERNEL_MAX_COVER}")));
    }
    let cover = Lifted::cover(g);
    let mut members = vec![false; len];
    for v in s.iter() {
        if v.index() >= len {
            return Err(Error::invalid(format!("cover vertex {v} out of range")));
        }
        members[v.index()] = true;
    }
    let vol_s: f64 = s.iter().map(|v| cover.deg[v.index()]).fold(0.0, |a, b| a + b);
    if vol_s <= 0.0 {
        return Err(Error::undefined("kernel from a set of zero volume"));
    }
    let q: Vec<f64> = (0..len).map(|y| cover.hit_probability(y, &members)).collect();

    // distinct positive levels, descending; values within rounding are one level
    let mut levels: Vec<f64> = q.iter().copied().filter(|&x| x > 0.0).collect();
    levels.sort_unstable_by(|a, b| b.total_cmp(a));
    levels.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);

    let mut row = Vec::with_capacity(levels.len() + 1);
    let top = levels.first().copied().unwrap_or(0.0);
    if top < 1.0 {
        row.push(KernelEntry { set: CoverSet::empty(), k: 1.0 - top, k_hat: 0.0, volume: 0.0 });
    }
    for (j, &level) in levels.iter().enumerate() {
        let below = levels.get(j + 1).copied().unwrap_or(0.0);
        let set = CoverSet::from_vertices((0..len).filter(|&y| q[y] >= level - 1e-12).map(CoverVertex::from_index));
        let volume: f64 = set.iter().map(|v| cover.deg[v.index()]).fold(0.0, |a, b| a + b);
        let k = level - below;
        row.push(KernelEntry { set, k, k_hat: volume / vol_s * k, volume });
    }
    Ok(row)
}

/// Piecewise-linear Lovász–Simonovits curve of a mass vector.
#[derive(Clone, Debug, PartialEq)]
pub struct LsCurve {
    /// Breakpoints `(vol(S_j), p(S_j))`, from `(0, 0)` to `(vol(V_H), ‖p‖₁)`.
    pub points: Vec<(f64, f64)>,
}

impl LsCurve {
    pub fn total_volume(&self) -> f64 {
        self.points.last().map_or(0.0, |p| p.0)
    }

    /// `p[x]`; at a vertical jump the upper value is returned.
    pub fn query(&self, x: f64) -> Result<f64> {
        let end = self.total_volume();
        if !(0.0..=end).contains(&x) {
            return Err(Error::invalid(format!("x = {x} outside [0, {end}]")));
        }
        let j = self.points.partition_point(|p| p.0 <= x);
        let (x1, y1) = self.points[j - 1];
        match self.points.get(j) {
            Some(&(x2, y2)) if x2 > x1 => Ok(y1 + (y2 - y1) * (x - x1) / (x2 - x1)),
            _ => Ok(y1),
        }
    }

    pub fn slopes(&self) -> Vec<f64> {
        self.points
            .windows(2)
            .filter(|w| w[1].0 > w[0].0)
            .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
            .collect()
    }
}

/// The curve through the sweep sets of `p` on the cover of `g`.
pub fn ls_curve<T: Scalar>(p: &MassVector<T>, g: &WeightedGraph<T>) -> Result<LsCurve> {
    let cover = Lifted::cover(g);
    let len = cover.len();
    let mut entries: Vec<(usize, f64)> = Vec::with_capacity(p.len());
    for (v, x) in p.iter() {
        if v.index() >= len {
            return Err(Error::invalid(format!("cover vertex {v} out of range")));
        }
        entries.push((v.index(), x.to_f64_lossy()));
    }
    let ratio = |&(i, x): &(usize, f64)| if cover.deg[i] > 0.0 { x / cover.deg[i] } else { f64::INFINITY };
    entries.sort_unstable_by(|a, b| ratio(b).total_cmp(&ratio(a)).then(a.0.cmp(&b.0)));
    let mut points = vec![(0.0, 0.0)];
    let (mut vol, mut mass) = (0.0, 0.0);
    for &(i, x) in &entries {
        vol += cover.deg[i];
        mass += x;
        points.push((vol, mass));
    }
    let total: f64 = cover.deg.iter().fold(0.0, |a, b| a + b);
    if total > vol {
        points.push((total, mass));
    }
    Ok(LsCurve { points })
}
