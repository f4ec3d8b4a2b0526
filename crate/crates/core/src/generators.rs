//! Seedable random graph models: a three-cluster SBM, the cyclic block model and
//! its extension with a planted local cycle.
//!
//! Pairs are sampled by geometric skipping, so generation costs `O(|E|)` expected
//! rather than `O(n²)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, WeightedGraph};
use crate::scalar::Scalar;

fn check_prob(name: &str, p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must lie in [0, 1], got {p}")))
    }
}

/// Calls `f` with the index of every success among `total` Bernoulli(`p`) trials.
fn sample_indices<R: Rng + ?Sized>(total: u64, p: f64, rng: &mut R, mut f: impl FnMut(u64, &mut R)) {
    if total == 0 || p <= 0.0 {
        return;
    }
    if p >= 1.0 {
        for k in 0..total {
            f(k, rng);
        }
        return;
    }
    let skip = Geometric::new(p).expect("p checked to lie in (0, 1)");
    let mut k: u64 = 0;
    loop {
        k = match k.checked_add(skip.sample(rng)) {
            Some(k) if k < total => k,
            _ => return,
        };
        f(k, rng);
        k += 1;
    }
}

/// Pair index `k` over `{(i, j) : 0 ≤ j < i < size}` in row order.
fn triangular_pair(k: u64) -> (u64, u64) {
    let mut i = ((1.0 + (1.0 + 8.0 * k as f64).sqrt()) / 2.0).floor() as u64;
    while i * (i - 1) / 2 > k {
        i -= 1;
    }
    while (i + 1) * i / 2 <= k {
        i += 1;
    }
    (i, k - i * (i - 1) / 2)
}

struct Sampler<T> {
    builder: GraphBuilder<T>,
    rng: ChaCha8Rng,
}

impl<T: Scalar> Sampler<T> {
    fn new(n: usize, directed: bool, seed: u64) -> Self {
        Self { builder: GraphBuilder::new(n, directed), rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    fn edge(&mut self, u: usize, v: usize) {
        self.builder.add_edge(u, v, T::one()).expect("generated ids are in range and distinct");
    }

    /// Pairs inside `[start, start + size)`; for digraphs each edge is oriented uniformly.
    fn within(&mut self, start: usize, size: usize, p: f64) {
        let total = (size as u64) * (size as u64).saturating_sub(1) / 2;
        let mut edges = Vec::new();
        let directed = self.builder.is_directed();
        sample_indices(total, p, &mut self.rng, |k, rng| {
            let (i, j) = triangular_pair(k);
            let (u, v) = (start + i as usize, start + j as usize);
            edges.push(if directed && rng.random::<bool>() { (v, u) } else { (u, v) });
        });
        for (u, v) in edges {
            self.edge(u, v);
        }
    }

    /// Pairs between `[a, a + na)` and `[b, b + nb)`. Each sampled pair is oriented
    /// `a → b` with probability `forward`.
    fn between(&mut self, a: usize, na: usize, b: usize, nb: usize, p: f64, forward: f64) {
        let total = na as u64 * nb as u64;
        let mut edges = Vec::new();
        sample_indices(total, p, &mut self.rng, |k, rng| {
            let (u, v) = (a + (k / nb as u64) as usize, b + (k % nb as u64) as usize);
            edges.push(if rng.random::<f64>() < forward { (u, v) } else { (v, u) });
        });
        for (u, v) in edges {
            self.edge(u, v);
        }
    }

    fn finish(self) -> WeightedGraph<T> {
        self.builder.build()
    }
}

/// Three clusters `C₁, C₂` of size `n1` and `C₃` of size `10·n1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SbmSpec {
    pub n1: usize,
    pub p1: f64,
    pub q1: f64,
}

impl SbmSpec {
    pub fn new(n1: usize, p1: f64, q1: f64) -> Self {
        Self { n1, p1, q1 }
    }

    /// Edge probability inside `C₃`.
    pub fn p2(&self) -> f64 {
        2.0 * self.p1
    }

    /// Edge probability between `C₃` and either of `C₁, C₂`.
    pub fn q2(&self) -> f64 {
        0.1 * self.p1
    }

    pub fn n3(&self) -> usize {
        10 * self.n1
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.n1 + self.n3()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n1 == 0 {
            return Err(Error::invalid("n1 must be at least 1"));
        }
        check_prob("p1", self.p1)?;
        check_prob("q1", self.q1)?;
        check_prob("p2 = 2·p1", self.p2())?;
        check_prob("q2 = 0.1·p1", self.q2())
    }
}

/// Labels: `C₁ = 0`, `C₂ = 1`, `C₃ = 2`, laid out in that order.
pub fn gen_sbm<T: Scalar>(spec: &SbmSpec, seed: u64) -> Result<(WeightedGraph<T>, Vec<usize>)> {
    spec.validate()?;
    let (n1, n3) = (spec.n1, spec.n3());
    let mut s = Sampler::new(spec.vertex_count(), false, seed);
    s.within(0, n1, spec.p1);
    s.within(n1, n1, spec.p1);
    s.within(2 * n1, n3, spec.p2());
    s.between(0, n1, n1, n1, spec.q1, 1.0);
    s.between(0, n1, 2 * n1, n3, spec.q2(), 1.0);
    s.between(n1, n1, 2 * n1, n3, spec.q2(), 1.0);
    let labels = (0..spec.vertex_count()).map(|v| (v / n1).min(2)).collect();
    Ok((s.finish(), labels))
}

/// `k` clusters of size `n` arranged in a directed cycle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CbmSpec {
    pub k: usize,
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub eta: f64,
}

impl Default for CbmSpec {
    fn default() -> Self {
        Self { k: 3, n: 1000, p: 0.001, q: 0.01, eta: 0.9 }
    }
}

impl CbmSpec {
    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::invalid("k must be at least 2"));
        }
        if self.n == 0 {
            return Err(Error::invalid("cluster size n must be at least 1"));
        }
        check_prob("p", self.p)?;
        check_prob("q", self.q)?;
        check_prob("eta", self.eta)
    }

    fn sample_into<T: Scalar>(&self, s: &mut Sampler<T>) {
        let n = self.n;
        for i in 0..self.k {
            s.within(i * n, n, self.p);
        }
        // with k = 2 the two cycle arcs join the same pair of clusters; sample it once
        let arcs = if self.k == 2 { 1 } else { self.k };
        for i in 0..arcs {
            let j = (i + 1) % self.k;
            s.between(i * n, n, j * n, n, self.q, self.eta);
        }
    }
}

/// Labels: cluster `C_{i+1}` gets label `i`.
pub fn gen_cbm<T: Scalar>(spec: &CbmSpec, seed: u64) -> Result<(WeightedGraph<T>, Vec<usize>)> {
    spec.validate()?;
    let total = spec.k * spec.n;
    let mut s = Sampler::new(total, true, seed);
    spec.sample_into(&mut s);
    let labels = (0..total).map(|v| v / spec.n).collect();
    Ok((s.finish(), labels))
}

/// CBM plus two clusters `C_{k+1}`, `C_{k+2}` of size `n_prime` that form a
/// local cycle through `C₁`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CbmPlusSpec {
    pub cbm: CbmSpec,
    pub n_prime: usize,
    pub q1_prime: f64,
    pub q2_prime: f64,
    pub eta_prime: f64,
}

impl Default for CbmPlusSpec {
    fn default() -> Self {
        Self { cbm: CbmSpec::default(), n_prime: 100, q1_prime: 0.5, q2_prime: 0.005, eta_prime: 1.0 }
    }
}

impl CbmPlusSpec {
    pub fn validate(&self) -> Result<()> {
        self.cbm.validate()?;
        if self.n_prime == 0 {
            return Err(Error::invalid("n' must be at least 1"));
        }
        check_prob("q1'", self.q1_prime)?;
        check_prob("q2'", self.q2_prime)?;
        check_prob("eta'", self.eta_prime)
    }

    pub fn vertex_count(&self) -> usize {
        self.cbm.k * self.cbm.n + 2 * self.n_prime
    }

    /// Labels of the planted pair `(C_{k+1}, C_{k+2})`.
    pub fn planted_labels(&self) -> (usize, usize) {
        (self.cbm.k, self.cbm.k + 1)
    }
}

/// Labels: `0..k` for the cycle clusters, `k` for `C_{k+1}`, `k + 1` for `C_{k+2}`.
///
/// Edges between `C_{k+1}` and `C₁` point into `C_{k+1}` with probability `η′`;
/// edges between `C_{k+2}` and `C₁` point into `C₁` with probability `η′`.
pub fn gen_cbm_plus<T: Scalar>(spec: &CbmPlusSpec, seed: u64) -> Result<(WeightedGraph<T>, Vec<usize>)> {
    spec.validate()?;
    let CbmPlusSpec { cbm, n_prime: np, .. } = *spec;
    let (a, b) = (cbm.k * cbm.n, cbm.k * cbm.n + np);
    let mut s = Sampler::new(spec.vertex_count(), true, seed);
    cbm.sample_into(&mut s);
    s.within(a, np, cbm.p);
    s.within(b, np, cbm.p);
    s.between(a, np, b, np, spec.q1_prime, 0.5);
    s.between(0, cbm.n, a, np, spec.q2_prime, spec.eta_prime);
    s.between(b, np, 0, cbm.n, spec.q2_prime, spec.eta_prime);
    let labels = (0..spec.vertex_count())
        .map(|v| if v < a { v / cbm.n } else if v < b { cbm.k } else { cbm.k + 1 })
        .collect();
    Ok((s.finish(), labels))
}
