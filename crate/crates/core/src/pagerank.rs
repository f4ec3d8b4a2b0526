//! Approximate personalized Pagerank on the double cover and the LocBipartDC
//! pipeline built on it: push, simplify, sweep.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, HashSet, VecDeque};

use rustc_hash::FxBuildHasher;

use crate::cover::{Cover, CoverSet, CoverVertex, Side};
use crate::error::{Error, Result};
use crate::graph::{VertexSet, WeightedGraph};
use crate::scalar::Scalar;

// unseeded, so iteration order is reproducible run to run
pub(crate) type DetMap<K, V> = HashMap<K, V, FxBuildHasher>;
pub(crate) type DetSet<K> = HashSet<K, FxBuildHasher>;

/// Sparse nonnegative vector over cover vertices. Zeros are never stored.
#[derive(Clone, Debug, Default)]
pub struct MassVector<T> {
    entries: DetMap<CoverVertex, T>,
}

impl<T: Scalar> MassVector<T> {
    pub fn new() -> Self {
        Self { entries: DetMap::default() }
    }

    /// Indicator vector `χ_v`.
    pub fn indicator(v: CoverVertex) -> Self {
        let mut m = Self::new();
        m.set(v, T::one());
        m
    }

    #[inline]
    pub fn get(&self, v: CoverVertex) -> T {
        self.entries.get(&v).copied().unwrap_or_else(T::zero)
    }

    /// Stores `x`, dropping it when negligible. Negative values are a caller bug.
    pub fn set(&mut self, v: CoverVertex, x: T) {
        debug_assert!(x >= T::zero(), "mass must be nonnegative");
        if x > T::negligible() {
            self.entries.insert(v, x);
        } else {
            self.entries.remove(&v);
        }
    }

    #[inline]
    pub fn add(&mut self, v: CoverVertex, x: T) -> T {
        match self.entries.entry(v) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += x;
                *e.get()
            }
            Entry::Vacant(e) => {
                if x > T::negligible() {
                    e.insert(x);
                }
                x
            }
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (CoverVertex, T)> + '_ {
        self.entries.iter().map(|(&v, &x)| (v, x))
    }

    /// Entries sorted by cover vertex.
    pub fn sorted(&self) -> Vec<(CoverVertex, T)> {
        let mut v: Vec<_> = self.iter().collect();
        v.sort_unstable_by_key(|e| e.0);
        v
    }

    pub fn support(&self) -> CoverSet {
        CoverSet::from_vertices(self.entries.keys().copied())
    }

    pub fn l1_norm(&self) -> T {
        self.sorted().into_iter().map(|(_, x)| x).fold(T::zero(), |a, b| a + b)
    }

    pub fn mass_on(&self, s: &CoverSet) -> T {
        s.iter().map(|v| self.get(v)).fold(T::zero(), |a, b| a + b)
    }

    pub fn scaled(&self, c: T) -> Self {
        let mut out = Self::new();
        for (v, x) in self.iter() {
            out.set(v, x * c);
        }
        out
    }

    /// Dense copy of length `2n`, indexed by [`CoverVertex::index`].
    pub fn to_dense(&self, n: usize) -> Vec<T> {
        let mut d = vec![T::zero(); 2 * n];
        for (v, x) in self.iter() {
            d[v.index()] = x;
        }
        d
    }

    pub fn from_dense(d: &[T]) -> Self {
        let mut m = Self::new();
        for (i, &x) in d.iter().enumerate() {
            m.set(CoverVertex::from_index(i), x);
        }
        m
    }
}

impl<T: Scalar> FromIterator<(CoverVertex, T)> for MassVector<T> {
    fn from_iter<I: IntoIterator<Item = (CoverVertex, T)>>(iter: I) -> Self {
        let mut m = Self::new();
        for (v, x) in iter {
            m.add(v, x);
        }
        m
    }
}

/// The simplify operator: `σ(p)(u₁) = max(0, p(u₁) − p(u₂))` and symmetrically for `u₂`.
pub fn simplify<T: Scalar>(p: &MassVector<T>) -> MassVector<T> {
    let mut out = MassVector::new();
    for (v, x) in p.iter() {
        let diff = x - p.get(v.twin());
        if diff > T::zero() {
            out.set(v, diff);
        }
    }
    out
}

/// Push state of the approximate Pagerank computation on a cover.
///
/// Maintains `p + pr(α, r) = pr(α, χ_seed)` across pushes. Work is confined to
/// vertices that receive residual; nothing proportional to `n` is allocated.
#[derive(Clone, Debug)]
pub struct ApproxPagerank<'g, T> {
    cover: Cover<'g, T>,
    alpha: T,
    epsilon: T,
    p: MassVector<T>,
    r: MassVector<T>,
    queue: VecDeque<CoverVertex>,
    queued: DetSet<CoverVertex>,
    pushes: usize,
    pushed_volume: T,
}

impl<'g, T: Scalar> ApproxPagerank<'g, T> {
    /// `p = 0`, `r = χ_seed`.
    pub fn new(cover: Cover<'g, T>, seed: CoverVertex, alpha: T, epsilon: T) -> Result<Self> {
        cover.check(seed)?;
        if !(alpha > T::zero() && alpha <= T::one()) {
            return Err(Error::invalid(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        if !(epsilon > T::zero()) || !epsilon.is_finite() {
            return Err(Error::invalid(format!("epsilon must be positive, got {epsilon}")));
        }
        if cover.degree(seed) <= T::zero() {
            return Err(Error::ZeroDegreeSeed(seed.base()));
        }
        let mut state = Self {
            cover,
            alpha,
            epsilon,
            p: MassVector::new(),
            r: MassVector::indicator(seed),
            queue: VecDeque::new(),
            queued: DetSet::default(),
            pushes: 0,
            pushed_volume: T::zero(),
        };
        state.enqueue_if_heavy(seed);
        Ok(state)
    }

    pub fn p(&self) -> &MassVector<T> {
        &self.p
    }

    pub fn r(&self) -> &MassVector<T> {
        &self.r
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn epsilon(&self) -> T {
        self.epsilon
    }

    pub fn pushes(&self) -> usize {
        self.pushes
    }

    /// `Σ deg(u)` over all pushes so far.
    pub fn pushed_volume(&self) -> T {
        self.pushed_volume
    }

    #[inline]
    fn is_heavy(&self, v: CoverVertex) -> bool {
        let d = self.cover.degree(v);
        d > T::zero() && self.r.get(v) >= self.epsilon * d
    }

    fn enqueue_if_heavy(&mut self, v: CoverVertex) {
        if self.is_heavy(v) && self.queued.insert(v) {
            self.queue.push_back(v);
        }
    }

    /// One push at `(u, i)`: bank `α·r(u_i)`, keep half of the rest on `u_i`, and
    /// spread the other half over the cover neighbors in proportion to edge weight.
    ///
    /// Panics if `r(u_i)` is zero.
    pub fn push(&mut self, u: CoverVertex) {
        let mass = self.r.get(u);
        assert!(mass > T::zero(), "push at {u:?} with zero residual");
        let alpha = self.alpha;
        let deg = self.cover.degree(u);
        let moving = (T::one() - alpha) * mass;

        self.p.add(u, alpha * mass);
        self.pushes += 1;
        self.pushed_volume += deg;

        if deg <= T::zero() {
            // a lazy walk never leaves an isolated vertex
            self.r.set(u, moving);
            return;
        }
        self.r.set(u, moving * T::half());
        let share = moving * T::half() / deg;
        let epsilon = self.epsilon;
        for (v, w) in self.cover.neighbors(u) {
            let now = self.r.add(v, share * w);
            if now >= epsilon * self.cover.degree(v) && self.queued.insert(v) {
                self.queue.push_back(v);
            }
        }
        self.enqueue_if_heavy(u);
    }

    /// Pushes the next queued vertex that is still above threshold. Returns the
    /// vertex pushed, or `None` once `max r(u)/deg(u) < ε`.
    pub fn step(&mut self) -> Option<CoverVertex> {
        while let Some(u) = self.queue.pop_front() {
            self.queued.remove(&u);
            if self.is_heavy(u) {
                self.push(u);
                return Some(u);
            }
        }
        None
    }

    pub fn run(mut self) -> ApproxPagerankResult<T> {
        while self.step().is_some() {}
        ApproxPagerankResult {
            p: self.p,
            r: self.r,
            pushes: self.pushes,
            pushed_volume: self.pushed_volume,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ApproxPagerankResult<T> {
    pub p: MassVector<T>,
    pub r: MassVector<T>,
    pub pushes: usize,
    pub pushed_volume: T,
}

/// `apr_H(α, χ_{v₁}, r)` on the double cover of an undirected graph.
pub fn approximate_pagerank_dc<T: Scalar>(
    g: &WeightedGraph<T>,
    v: usize,
    alpha: T,
    epsilon: T,
) -> Result<ApproxPagerankResult<T>> {
    g.check_vertex(v)?;
    let cover = Cover::double(g)?;
    Ok(ApproxPagerank::new(cover, CoverVertex::first(v), alpha, epsilon)?.run())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum SweepMode {
    /// Return the first prefix meeting the target.
    #[default]
    First,
    /// Return the minimum-conductance prefix, if it meets the target.
    Best,
}

/// Output of the undirected pipeline.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusterPair<T> {
    pub l: VertexSet,
    pub r: VertexSet,
    /// `β(L, R)` recomputed on the base graph.
    pub beta: T,
    /// `vol(L ∪ R)`.
    pub volume: T,
    /// 1-based index of the sweep prefix.
    pub sweep_index: usize,
}

/// Sweep order: `p(v)/deg(v)` descending, ties by base id then side.
pub fn sweep_order<T: Scalar>(cover: &Cover<'_, T>, p: &MassVector<T>) -> Vec<CoverVertex> {
    let mut keyed: Vec<(CoverVertex, T)> = p
        .iter()
        .map(|(v, x)| {
            let d = cover.degree(v);
            let ratio = if d > T::zero() { x / d } else { T::infinity() };
            (v, ratio)
        })
        .collect();
    keyed.sort_unstable_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.0.cmp(&b.0))
    });
    keyed.into_iter().map(|(v, _)| v).collect()
}

/// Scans sweep prefixes of a simple vector `p` and returns the first (or best)
/// prefix whose cover conductance is at most `beta_target`.
pub fn sweep_cut<T: Scalar>(
    g: &WeightedGraph<T>,
    p: &MassVector<T>,
    beta_target: T,
    mode: SweepMode,
) -> Result<ClusterPair<T>> {
    let cover = Cover::double(g)?;
    if !p.support().is_simple() {
        return Err(Error::invalid("sweep requires a vector with simple support"));
    }
    let order = sweep_order(&cover, p);
    let total = cover.total_volume();

    let mut inside: DetSet<CoverVertex> = DetSet::default();
    let mut vol = T::zero();
    let mut cut = T::zero();
    let mut best: Option<(usize, T)> = None;

    for (j, &v) in order.iter().enumerate() {
        let mut internal = T::zero();
        for (y, w) in cover.neighbors(v) {
            if inside.contains(&y) {
                internal += w;
            }
        }
        inside.insert(v);
        let d = cover.degree(v);
        vol += d;
        cut += d - internal - internal;
        let denom = vol.min(total - vol);
        if denom <= T::zero() {
            continue;
        }
        let phi = cut.max(T::zero()) / denom;
        match mode {
            SweepMode::First => {
                if phi <= beta_target {
                    let pair = pair_from_prefix(g, &order[..=j])?;
                    // the incremental value can drift from the recomputed one in the last bits
                    if pair.beta <= beta_target {
                        return Ok(pair);
                    }
                }
            }
            SweepMode::Best => {
                if best.is_none_or(|(_, b)| phi < b) {
                    best = Some((j, phi));
                }
            }
        }
    }

    if let Some((j, phi)) = best {
        if phi <= beta_target {
            let pair = pair_from_prefix(g, &order[..=j])?;
            if pair.beta <= beta_target {
                return Ok(pair);
            }
        }
    }
    Err(Error::NotFound)
}

fn pair_from_prefix<T: Scalar>(g: &WeightedGraph<T>, prefix: &[CoverVertex]) -> Result<ClusterPair<T>> {
    let (l, r) = CoverSet::from_vertices(prefix.iter().copied()).to_cluster_pair();
    let beta = g.bipartiteness(&l, &r)?;
    let volume = g.volume(&l)? + g.volume(&r)?;
    Ok(ClusterPair { l, r, beta, volume, sweep_index: prefix.len() })
}

/// `β̂ = √(7560·β)`: the target to pass so that `α = β̂²/378 = 20β`.
pub fn guarantee_beta_hat<T: Scalar>(beta: T) -> T {
    (T::of(7560.0) * beta).sqrt()
}

/// Resolved parameters of one LocBipartDC run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocBipartConfig<T> {
    pub alpha: T,
    pub epsilon: T,
    /// Largest acceptable bipartiteness of the returned pair.
    pub beta_hat: T,
    pub sweep: SweepMode,
}

impl<T: Scalar> LocBipartConfig<T> {
    /// `α = β̂²/378`, `ε = 1/(20γ)`.
    pub fn from_targets(gamma: T, beta_hat: T) -> Result<Self> {
        if !(gamma > T::zero()) || !gamma.is_finite() {
            return Err(Error::invalid(format!("gamma must be positive, got {gamma}")));
        }
        if !(beta_hat > T::zero() && beta_hat <= T::one()) {
            return Err(Error::invalid(format!("beta_hat must lie in (0, 1], got {beta_hat}")));
        }
        let alpha = beta_hat * beta_hat / T::of(378.0);
        Ok(Self {
            alpha,
            epsilon: T::one() / (T::of(20.0) * gamma),
            beta_hat,
            sweep: SweepMode::First,
        })
    }

    /// Explicit push parameters, bypassing the target-based formulas.
    pub fn explicit(alpha: T, epsilon: T, beta_hat: T) -> Result<Self> {
        if !(alpha > T::zero() && alpha <= T::one()) {
            return Err(Error::invalid(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        if !(epsilon > T::zero()) || !epsilon.is_finite() {
            return Err(Error::invalid(format!("epsilon must be positive, got {epsilon}")));
        }
        if !(beta_hat > T::zero() && beta_hat <= T::one()) {
            return Err(Error::invalid(format!("beta_hat must lie in (0, 1], got {beta_hat}")));
        }
        Ok(Self { alpha, epsilon, beta_hat, sweep: SweepMode::First })
    }

    pub fn with_sweep(mut self, sweep: SweepMode) -> Self {
        self.sweep = sweep;
        self
    }

    /// `1/(εα)`, the bound on `vol(supp(p))`.
    pub fn support_volume_bound(&self) -> T {
        T::one() / (self.epsilon * self.alpha)
    }
}

/// Full result of a LocBipartDC run, including push diagnostics.
#[derive(Debug)]
pub struct LocBipartOutcome<T> {
    pub pair: Result<ClusterPair<T>>,
    pub pushes: usize,
    pub pushed_volume: T,
    /// `vol(supp(p))` of the unsimplified vector.
    pub support_volume: T,
    pub simplified_support: usize,
}

/// Runs push, simplify and sweep with the given configuration.
pub fn loc_bipart_dc_with<T: Scalar>(
    g: &WeightedGraph<T>,
    u: usize,
    config: &LocBipartConfig<T>,
) -> Result<LocBipartOutcome<T>> {
    g.check_vertex(u)?;
    let cover = Cover::double(g)?;
    if g.deg(u) <= T::zero() {
        return Err(Error::ZeroDegreeSeed(u));
    }
    let apr = ApproxPagerank::new(cover, CoverVertex::new(u, Side::First), config.alpha, config.epsilon)?.run();
    let support_volume = apr.p.iter().map(|(v, _)| cover.degree(v)).fold(T::zero(), |a, b| a + b);
    let simple = simplify(&apr.p);
    let pair = sweep_cut(g, &simple, config.beta_hat, config.sweep);
    Ok(LocBipartOutcome {
        pair,
        pushes: apr.pushes,
        pushed_volume: apr.pushed_volume,
        support_volume,
        simplified_support: simple.len(),
    })
}

/// LocBipartDC with target volume `gamma` and target bipartiteness `beta_hat`.
pub fn loc_bipart_dc<T: Scalar>(
    g: &WeightedGraph<T>,
    u: usize,
    gamma: T,
    beta_hat: T,
) -> Result<ClusterPair<T>> {
    let config = LocBipartConfig::from_targets(gamma, beta_hat)?;
    loc_bipart_dc_with(g, u, &config)?.pair
}
