//! Volume-biased evolving set process on the semi-double cover, sampled through
//! the walk/evolving-set coupling, and the EvoCutDirected algorithm on top of it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cover::{Cover, CoverKind, CoverSet, CoverVertex, Side};
use crate::error::{Error, Result};
use crate::graph::{VertexSet, WeightedGraph};
use crate::pagerank::{DetMap, DetSet};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug)]
struct Inflow<T> {
    weight: T,
    count: usize,
}

/// One realisation of the volume-biased ESP together with its coupled walker.
///
/// Keeps, for every `y ∈ S ∪ ∂S`, the weight of `y`'s cover edges into `S`.
/// That is all `Q(y, S) = ½·[y ∈ S] + ½·w(y, S)/deg(y)` needs, and it is updated
/// only around vertices that enter or leave `S`.
#[derive(Clone, Debug)]
pub struct EspState<'g, T> {
    cover: Cover<'g, T>,
    members: DetSet<CoverVertex>,
    inflow: DetMap<CoverVertex, Inflow<T>>,
    walker: CoverVertex,
    step: usize,
    volume: T,
    cut: T,
}

impl<'g, T: Scalar> EspState<'g, T> {
    /// `S₀ = {seed}` with the walker at the seed.
    pub fn new(cover: Cover<'g, T>, seed: CoverVertex) -> Result<Self> {
        cover.check(seed)?;
        if cover.degree(seed) <= T::zero() {
            return Err(Error::ZeroDegreeSeed(seed.base()));
        }
        Self::with_walker(cover, &CoverSet::from_vertices([seed]), seed)
    }

    /// Starts from `set` with the walker placed at `walker ∈ set`.
    pub fn with_walker(cover: Cover<'g, T>, set: &CoverSet, walker: CoverVertex) -> Result<Self> {
        if !set.contains(walker) {
            return Err(Error::invalid(format!("walker {walker} is not in the start set")));
        }
        let mut state = Self {
            cover,
            members: DetSet::default(),
            inflow: DetMap::default(),
            walker,
            step: 0,
            volume: T::zero(),
            cut: T::zero(),
        };
        for v in set.iter() {
            cover.check(v)?;
            state.insert(v);
        }
        Ok(state)
    }

    /// Starts from `set` with the walker drawn from the degree distribution on
    /// `set`; this is the coupling's initial condition for a non-singleton start.
    pub fn from_set<R: Rng + ?Sized>(cover: Cover<'g, T>, set: &CoverSet, rng: &mut R) -> Result<Self> {
        let vol: T = set.iter().map(|v| cover.degree(v)).fold(T::zero(), |a, b| a + b);
        if !(vol > T::zero()) {
            return Err(Error::invalid("start set has zero volume"));
        }
        let mut target = T::of(rng.random::<f64>()) * vol;
        let mut walker = None;
        for v in set.iter() {
            let d = cover.degree(v);
            if d <= T::zero() {
                continue;
            }
            walker = Some(v);
            if target < d {
                break;
            }
            target -= d;
        }
        Self::with_walker(cover, set, walker.expect("positive volume implies a positive-degree member"))
    }

    pub fn cover(&self) -> Cover<'g, T> {
        self.cover
    }

    pub fn walker(&self) -> CoverVertex {
        self.walker
    }

    pub fn steps(&self) -> usize {
        self.step
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: CoverVertex) -> bool {
        self.members.contains(&v)
    }

    pub fn set(&self) -> CoverSet {
        CoverSet::from_vertices(self.members.iter().copied())
    }

    /// `vol(S)`, maintained incrementally.
    pub fn volume(&self) -> T {
        self.volume
    }

    /// `|∂S|`, maintained incrementally.
    pub fn boundary(&self) -> T {
        self.cut.max(T::zero())
    }

    /// `Φ_H(S)` from the running totals; `None` when undefined.
    pub fn conductance(&self) -> Option<T> {
        let denom = self.volume.min(self.cover.total_volume() - self.volume);
        (denom > T::zero()).then(|| self.boundary() / denom)
    }

    /// `Q(y, S)`: probability that one lazy-walk step from `y` lands in `S`.
    pub fn membership_probability(&self, y: CoverVertex) -> T {
        let member = self.members.contains(&y);
        let d = self.cover.degree(y);
        if d <= T::zero() {
            return if member { T::one() } else { T::zero() };
        }
        let inside = self.inflow.get(&y).map_or(T::zero(), |f| f.weight);
        let own = if member { T::half() } else { T::zero() };
        own + T::half() * inside / d
    }

    fn insert(&mut self, z: CoverVertex) {
        if !self.members.insert(z) {
            return;
        }
        let d = self.cover.degree(z);
        let inside = self.inflow.get(&z).map_or(T::zero(), |f| f.weight);
        self.volume += d;
        self.cut += d - inside - inside;
        for (y, w) in self.cover.neighbors(z) {
            let full = self.cover.neighbor_count(y);
            let degree = self.cover.degree(y);
            let e = self.inflow.entry(y).or_insert(Inflow { weight: T::zero(), count: 0 });
            e.count += 1;
            // snapping keeps Q exactly 1 for fully surrounded members
            e.weight = if e.count == full { degree } else { e.weight + w };
        }
    }

    fn remove(&mut self, z: CoverVertex) {
        if !self.members.remove(&z) {
            return;
        }
        let d = self.cover.degree(z);
        let inside = self.inflow.get(&z).map_or(T::zero(), |f| f.weight);
        self.volume -= d;
        self.cut -= d - inside - inside;
        if self.members.is_empty() {
            self.volume = T::zero();
            self.cut = T::zero();
        }
        for (y, w) in self.cover.neighbors(z) {
            if let Some(e) = self.inflow.get_mut(&y) {
                e.count -= 1;
                if e.count == 0 {
                    self.inflow.remove(&y);
                } else {
                    e.weight = (e.weight - w).max(T::zero());
                }
            }
        }
    }

    fn lazy_walk_step<R: Rng + ?Sized>(&self, rng: &mut R) -> CoverVertex {
        let x = self.walker;
        let d = self.cover.degree(x);
        if d <= T::zero() || rng.random::<bool>() {
            return x;
        }
        let mut target = T::of(rng.random::<f64>()) * d;
        let mut last = x;
        for (y, w) in self.cover.neighbors(x) {
            last = y;
            if target < w {
                return y;
            }
            target -= w;
        }
        // rounding left a sliver of target; it belongs to the last neighbor
        last
    }

    /// One step of the volume-biased ESP: move the walker, draw the threshold
    /// uniformly on `(0, Q(X_{t+1}, S_t)]`, keep every `y` with `Q(y, S_t)` at or
    /// above it.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let next = self.lazy_walk_step(rng);
        let q = self.membership_probability(next);
        debug_assert!(q > T::zero());
        let threshold = q * T::of(1.0 - rng.random::<f64>());

        let mut removed: Vec<CoverVertex> = self
            .members
            .iter()
            .copied()
            .filter(|&y| self.membership_probability(y) < threshold)
            .collect();
        let mut added: Vec<CoverVertex> = self
            .inflow
            .keys()
            .copied()
            .filter(|y| !self.members.contains(y) && self.membership_probability(*y) >= threshold)
            .collect();
        added.sort_unstable();
        removed.sort_unstable();

        // add first so the set never passes through empty
        for z in added {
            self.insert(z);
        }
        for z in removed {
            self.remove(z);
        }
        self.walker = next;
        self.step += 1;
        debug_assert!(self.members.contains(&self.walker));
    }
}

/// A sample `S_T` together with the best set seen on the way.
#[derive(Clone, Debug)]
pub struct EspSample<T> {
    pub set: CoverSet,
    pub steps: usize,
    /// Lowest `Φ_H(S_t)` over `t ∈ [0, T]`.
    pub min_conductance: Option<T>,
    pub min_conductance_set: CoverSet,
    pub min_conductance_step: usize,
}

/// Runs `T` volume-biased ESP steps from `S₀ = {u}`.
pub fn generate_sample<T: Scalar, R: Rng + ?Sized>(
    g: &WeightedGraph<T>,
    u: CoverVertex,
    steps: usize,
    rng: &mut R,
) -> Result<EspSample<T>> {
    let cover = Cover::of(g);
    let mut state = EspState::new(cover, u)?;
    let mut best = (state.conductance(), state.set(), 0);
    for t in 1..=steps {
        state.step(rng);
        if let Some(phi) = state.conductance() {
            if best.0.is_none_or(|b| phi < b) {
                best = (Some(phi), state.set(), t);
            }
        }
    }
    Ok(EspSample {
        set: state.set(),
        steps,
        min_conductance: best.0,
        min_conductance_set: best.1,
        min_conductance_step: best.2,
    })
}

/// `T = max(1, ⌊1/(100·φ^{2/3})⌋)`.
pub fn steps_for_phi<T: Scalar>(phi: T) -> Result<usize> {
    if !(phi > T::zero() && phi <= T::one()) {
        return Err(Error::invalid(format!("phi must lie in (0, 1], got {phi}")));
    }
    // the relative nudge keeps exact cubes such as φ = 10⁻⁶ from flooring one short
    let t = (T::one() / (T::of(100.0) * phi.powf(T::of(2.0 / 3.0))) * T::of(1.0 + 1e-9)).floor();
    Ok(t.to_usize().unwrap_or(usize::MAX).max(1))
}

/// Output of EvoCutDirected.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectedClusterPair<T> {
    pub l: VertexSet,
    pub r: VertexSet,
    /// `F(L, R)` recomputed on the digraph.
    pub flow: T,
    /// `vol_out(L) + vol_in(R)`.
    pub volume: T,
    pub steps_used: usize,
    pub side: Side,
    /// `vol(P)/vol(S)` for the sampled set `S` and its doubled part `P`.
    pub epsilon: T,
    /// `|∂S|/vol(S)` of the sampled set.
    pub sample_cut_ratio: T,
    /// `|∂S′|/vol(S′)` of the simple set `S′ = S ∖ P`.
    pub pair_cut_ratio: T,
}

fn pair_from_sample<T: Scalar>(g: &WeightedGraph<T>, s: &CoverSet, steps: usize, side: Side) -> Result<DirectedClusterPair<T>> {
    let cover = Cover::semi_double(g)?;
    let simple = s.epsilon_simple_cleanup();
    if simple.is_empty() {
        return Err(Error::NotFound);
    }
    let (l, r) = simple.to_cluster_pair();
    let flow = g.flow_ratio(&l, &r)?;
    let volume = g.volume_out(&l)? + g.volume_in(&r)?;
    Ok(DirectedClusterPair {
        l,
        r,
        flow,
        volume,
        steps_used: steps,
        side,
        epsilon: cover.simplicity_defect(s)?,
        sample_cut_ratio: cover.cut_ratio(s)?,
        pair_cut_ratio: cover.cut_ratio(&simple)?,
    })
}

fn check_seed<T: Scalar>(g: &WeightedGraph<T>, u: usize, side: Side) -> Result<Cover<'_, T>> {
    g.check_vertex(u)?;
    let cover = Cover::semi_double(g)?;
    if cover.degree(CoverVertex::new(u, side)) <= T::zero() {
        return Err(Error::ZeroDegreeSeed(u));
    }
    Ok(cover)
}

/// EvoCutDirected with an explicit number of ESP steps.
pub fn evo_cut_directed_steps<T: Scalar, R: Rng + ?Sized>(
    g: &WeightedGraph<T>,
    u: usize,
    side: Side,
    steps: usize,
    rng: &mut R,
) -> Result<DirectedClusterPair<T>> {
    let cover = check_seed(g, u, side)?;
    debug_assert_eq!(cover.kind(), CoverKind::SemiDouble);
    let sample = generate_sample(g, CoverVertex::new(u, side), steps, rng)?;
    pair_from_sample(g, &sample.set, steps, side)
}

/// EvoCutDirected seeded at `u_i` with target flow ratio `phi`.
pub fn evo_cut_directed<T: Scalar, R: Rng + ?Sized>(
    g: &WeightedGraph<T>,
    u: usize,
    side: Side,
    phi: T,
    rng: &mut R,
) -> Result<DirectedClusterPair<T>> {
    let steps = steps_for_phi(phi)?;
    evo_cut_directed_steps(g, u, side, steps, rng)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum SideChoice {
    One(Side),
    /// Run both sides concurrently and keep the lower flow ratio.
    Both,
}

/// Runs the requested side(s). For [`SideChoice::Both`] each side gets its own
/// generator derived from `seed`, so the result does not depend on scheduling.
pub fn evo_cut_directed_both<T: Scalar>(
    g: &WeightedGraph<T>,
    u: usize,
    choice: SideChoice,
    steps: usize,
    seed: u64,
) -> Result<DirectedClusterPair<T>> {
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    match choice {
        SideChoice::One(side) => evo_cut_directed_steps(g, u, side, steps, &mut master),
        SideChoice::Both => {
            g.check_vertex(u)?;
            let (s1, s2) = (master.random::<u64>(), master.random::<u64>());
            let run = |side: Side, s: u64| {
                let mut rng = ChaCha8Rng::seed_from_u64(s);
                evo_cut_directed_steps(g, u, side, steps, &mut rng)
            };
            let (a, b) = rayon::join(|| run(Side::First, s1), || run(Side::Second, s2));
            match (a, b) {
                (Ok(a), Ok(b)) => Ok(if b.flow < a.flow { b } else { a }),
                (Ok(a), Err(_)) => Ok(a),
                (Err(_), Ok(b)) => Ok(b),
                // report the more informative failure
                (Err(e), Err(Error::NotFound)) | (Err(Error::NotFound), Err(e)) => Err(e),
                (Err(e), Err(_)) => Err(e),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type G = WeightedGraph<f64>;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn sample_digraph() -> G {
        G::from_unweighted(6, true, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 5), (5, 3), (2, 4)]).unwrap()
    }

    #[test]
    fn zero_steps_returns_seed() {
        let g = sample_digraph();
        let s = generate_sample(&g, CoverVertex::first(0), 0, &mut rng(1)).unwrap();
        assert_eq!(s.set.as_slice(), &[CoverVertex::first(0)]);
    }

    #[test]
    fn full_set_is_absorbing() {
        let g = sample_digraph();
        let cover = Cover::of(&g);
        let all = CoverSet::from_vertices((0..12).map(CoverVertex::from_index));
        let mut state = EspState::from_set(cover, &all, &mut rng(3)).unwrap();
        let mut r = rng(4);
        for _ in 0..50 {
            state.step(&mut r);
            assert_eq!(state.len(), 12);
        }
        assert_eq!(state.set(), all);
    }

    #[test]
    fn q_is_one_for_surrounded_members() {
        let g = sample_digraph();
        let cover = Cover::of(&g);
        // 0₁'s cover neighbors are 1₂ and 3₂
        let s = CoverSet::from_vertices([CoverVertex::first(0), CoverVertex::second(1), CoverVertex::second(3)]);
        let state = EspState::with_walker(cover, &s, CoverVertex::first(0)).unwrap();
        assert_eq!(state.membership_probability(CoverVertex::first(0)), 1.0);
        assert_eq!(state.membership_probability(CoverVertex::first(5)), 0.5);
        assert_eq!(state.membership_probability(CoverVertex::first(4)), 0.0);
    }

    #[test]
    fn coupling_and_one_hop_growth() {
        let g = sample_digraph();
        let cover = Cover::of(&g);
        let mut state = EspState::new(cover, CoverVertex::first(0)).unwrap();
        let mut r = rng(9);
        for _ in 0..200 {
            let before = state.set();
            let mut reach: DetSet<CoverVertex> = before.iter().collect();
            for v in before.iter() {
                reach.extend(cover.neighbors(v).map(|(y, _)| y));
            }
            state.step(&mut r);
            assert!(state.contains(state.walker()));
            assert!(state.set().iter().all(|v| reach.contains(&v)));
            let s = state.set();
            assert!((state.volume() - cover.volume(&s)).abs() < 1e-9);
            assert!((state.boundary() - cover.boundary(&s)).abs() < 1e-9);
        }
    }

    #[test]
    fn steps_formula() {
        assert_eq!(steps_for_phi(1e-6).unwrap(), 100);
        assert_eq!(steps_for_phi(0.5).unwrap(), 1);
        assert!(steps_for_phi(0.0).is_err());
        assert!(steps_for_phi(1.5).is_err());
    }

    #[test]
    fn deterministic_under_seed() {
        let g = sample_digraph();
        let a = evo_cut_directed_both(&g, 0, SideChoice::Both, 20, 77);
        let b = evo_cut_directed_both(&g, 0, SideChoice::Both, 20, 77);
        match (a, b) {
            (Ok(a), Ok(b)) => assert_eq!(a, b),
            (Err(a), Err(b)) => assert_eq!(a.to_string(), b.to_string()),
            _ => panic!("nondeterministic outcome"),
        }
    }

    #[test]
    fn seeds_are_validated() {
        let g = G::from_unweighted(3, true, [(0, 1)]).unwrap();
        assert!(matches!(evo_cut_directed(&g, 0, Side::Second, 0.1, &mut rng(0)), Err(Error::ZeroDegreeSeed(0))));
        assert!(evo_cut_directed(&g, 5, Side::First, 0.1, &mut rng(0)).is_err());
        let u = G::from_unweighted(2, false, [(0, 1)]).unwrap();
        assert!(matches!(evo_cut_directed(&u, 0, Side::First, 0.1, &mut rng(0)), Err(Error::WrongGraphKind(_))));
    }

    #[test]
    fn output_pair_is_simple() {
        let g = sample_digraph();
        let mut r = rng(5);
        for _ in 0..30 {
            if let Ok(pair) = evo_cut_directed_steps(&g, 0, Side::First, 5, &mut r) {
                assert!(pair.l.first_overlap(&pair.r).is_none());
                assert_eq!(pair.flow, g.flow_ratio(&pair.l, &pair.r).unwrap());
            }
        }
    }
}
