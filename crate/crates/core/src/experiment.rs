//! Synthetic benchmark harness: repeated LocBipartDC runs on the SBM variant and
//! EvoCutDirected runs on CBM+, scored against the planted clusters.
//!
//! Every trial draws its own graph and seed vertex from a generator derived from
//! the master seed, so trials are independent and can run in parallel without
//! changing the result.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::esp::{evo_cut_directed_both, steps_for_phi, SideChoice};
use crate::generators::{gen_cbm_plus, gen_sbm, CbmPlusSpec, SbmSpec};
use crate::graph::{VertexSet, WeightedGraph};
use crate::metrics::{ari, misclassified_ratio, Labeling};
use crate::pagerank::{loc_bipart_dc_with, LocBipartConfig, SweepMode};

/// How LocBipartDC is parameterised in a benchmark.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum BipartParams {
    /// `α = β̂²/378`, `ε = 1/(20γ)` with fixed targets.
    Targets { gamma: f64, beta_hat: f64 },
    /// `γ = vol(C₁ ∪ C₂)` of the generated instance and a fixed `β̂`.
    PlantedVolume { beta_hat: f64 },
    /// Push parameters given directly.
    Explicit { alpha: f64, epsilon: f64, beta_hat: f64 },
}

impl BipartParams {
    fn config(&self, planted_volume: f64) -> Result<LocBipartConfig<f64>> {
        match *self {
            BipartParams::Targets { gamma, beta_hat } => LocBipartConfig::from_targets(gamma, beta_hat),
            BipartParams::PlantedVolume { beta_hat } => LocBipartConfig::from_targets(planted_volume, beta_hat),
            BipartParams::Explicit { alpha, epsilon, beta_hat } => LocBipartConfig::explicit(alpha, epsilon, beta_hat),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table1Spec {
    pub sbm: SbmSpec,
    pub runs: usize,
    pub seed: u64,
    pub params: BipartParams,
    pub sweep: SweepMode,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BipartTrial {
    pub graph_seed: u64,
    pub seed_vertex: usize,
    pub found: bool,
    pub beta: Option<f64>,
    pub ari: f64,
    pub misclassified: f64,
    pub volume: f64,
    /// `vol(C₁ ∪ C₂)` and `β(C₁, C₂)` of the generated instance.
    pub planted_volume: f64,
    pub planted_beta: f64,
    pub beta_hat: f64,
    pub alpha: f64,
    pub epsilon: f64,
    pub pushes: usize,
    pub runtime_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table1Report {
    pub trials: Vec<BipartTrial>,
    /// Over all runs; a run that finds nothing scores the empty output.
    pub mean_ari: f64,
    pub mean_misclassified: f64,
    /// Over runs that returned a pair.
    pub mean_beta: Option<f64>,
    pub found_runs: usize,
    pub mean_runtime_ms: f64,
}

fn trial_seeds(master: u64, runs: usize) -> Vec<(u64, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    (0..runs).map(|_| (rng.random(), rng.random())).collect()
}

fn mean(xs: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, count) = xs.fold((0.0, 0usize), |(s, c), x| (s + x, c + 1));
    (count > 0).then(|| sum / count as f64)
}

fn members(labels: &[usize], c: usize) -> VertexSet {
    VertexSet::from_ids(labels.iter().enumerate().filter(|(_, &l)| l == c).map(|(v, _)| v))
}

fn bipart_trial(spec: &Table1Spec, graph_seed: u64, pick_seed: u64) -> Result<BipartTrial> {
    let (g, labels): (WeightedGraph<f64>, _) = gen_sbm(&spec.sbm, graph_seed)?;
    let (c1, c2) = (members(&labels, 0), members(&labels, 1));
    let planted_volume = g.volume(&c1.union(&c2))?;
    let planted_beta = g.bipartiteness(&c1, &c2)?;
    let config = spec.params.config(planted_volume)?.with_sweep(spec.sweep);

    // seed uniformly in C₁ ∪ C₂ among vertices that have an edge
    let mut rng = ChaCha8Rng::seed_from_u64(pick_seed);
    let pool: Vec<usize> = c1.union(&c2).iter().filter(|&v| g.degree(v).map_or(false, |d| d > 0.0)).collect();
    if pool.is_empty() {
        return Err(Error::invalid("planted clusters have no edges"));
    }
    let u = pool[rng.random_range(0..pool.len())];

    let start = Instant::now();
    let outcome = loc_bipart_dc_with(&g, u, &config)?;
    let runtime_ms = start.elapsed().as_secs_f64() * 1e3;

    let truth = Labeling::restrict(&labels, 0, 1);
    let (l, r, beta, volume) = match &outcome.pair {
        Ok(p) => (p.l.clone(), p.r.clone(), Some(p.beta), p.volume),
        Err(Error::NotFound) => (VertexSet::empty(), VertexSet::empty(), None, 0.0),
        Err(e) => return Err(Error::invalid(format!("trial failed: {e}"))),
    };
    let found = beta.is_some();
    let output = Labeling::from_pair(g.n(), &l, &r)?;
    let misclassified = if found { misclassified_ratio(&l, &r, &c1, &c2)? } else { 1.0 };
    Ok(BipartTrial {
        graph_seed,
        seed_vertex: u,
        found,
        beta,
        ari: ari(&output, &truth)?,
        misclassified,
        volume,
        planted_volume,
        planted_beta,
        beta_hat: config.beta_hat,
        alpha: config.alpha,
        epsilon: config.epsilon,
        pushes: outcome.pushes,
        runtime_ms,
    })
}

/// Runs the undirected benchmark; trials run in parallel.
pub fn run_table1(spec: &Table1Spec) -> Result<Table1Report> {
    let trials = trial_seeds(spec.seed, spec.runs)
        .into_par_iter()
        .map(|(gs, ps)| bipart_trial(spec, gs, ps))
        .collect::<Result<Vec<_>>>()?;
    Ok(Table1Report {
        mean_ari: mean(trials.iter().map(|t| t.ari)).unwrap_or(f64::NAN),
        mean_misclassified: mean(trials.iter().map(|t| t.misclassified)).unwrap_or(f64::NAN),
        mean_beta: mean(trials.iter().filter_map(|t| t.beta)),
        found_runs: trials.iter().filter(|t| t.found).count(),
        mean_runtime_ms: mean(trials.iter().map(|t| t.runtime_ms)).unwrap_or(f64::NAN),
        trials,
    })
}

/// How many ESP steps EvoCutDirected takes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum DirectedParams {
    Phi(f64),
    Steps(usize),
}

impl DirectedParams {
    pub fn steps(&self) -> Result<usize> {
        match *self {
            DirectedParams::Phi(phi) => steps_for_phi(phi),
            DirectedParams::Steps(t) => Ok(t),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table2Spec {
    pub cbm_plus: CbmPlusSpec,
    pub runs: usize,
    pub seed: u64,
    pub params: DirectedParams,
    pub side: SideChoice,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DirectedTrial {
    pub graph_seed: u64,
    pub seed_vertex: usize,
    pub found: bool,
    pub flow: Option<f64>,
    pub ari: f64,
    pub volume: f64,
    pub planted_flow: f64,
    /// `ε = vol(P)/vol(S)` and the one-sided cut ratios of `S` and `S ∖ P`.
    pub epsilon: Option<f64>,
    pub sample_cut_ratio: Option<f64>,
    pub pair_cut_ratio: Option<f64>,
    pub steps: usize,
    pub runtime_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table2Report {
    pub trials: Vec<DirectedTrial>,
    pub mean_ari: f64,
    pub mean_flow: Option<f64>,
    pub found_runs: usize,
    pub mean_runtime_ms: f64,
}

fn directed_trial(spec: &Table2Spec, graph_seed: u64, pick_seed: u64) -> Result<DirectedTrial> {
    let (g, labels): (WeightedGraph<f64>, _) = gen_cbm_plus(&spec.cbm_plus, graph_seed)?;
    let (la, lb) = spec.cbm_plus.planted_labels();
    let (ca, cb) = (members(&labels, la), members(&labels, lb));
    let planted_flow = g.flow_ratio(&ca, &cb)?;
    let steps = spec.params.steps()?;

    let mut rng = ChaCha8Rng::seed_from_u64(pick_seed);
    let pool: Vec<usize> = ca.union(&cb).iter().filter(|&v| g.degree(v).map_or(false, |d| d > 0.0)).collect();
    if pool.is_empty() {
        return Err(Error::invalid("planted clusters have no edges"));
    }
    let u = pool[rng.random_range(0..pool.len())];
    let run_seed = rng.random::<u64>();

    // a fixed side needs a positive degree on that side; fall back to not-found otherwise
    let start = Instant::now();
    let result = evo_cut_directed_both(&g, u, spec.side, steps, run_seed);
    let runtime_ms = start.elapsed().as_secs_f64() * 1e3;

    let truth = Labeling::restrict(&labels, la, lb);
    let pair = match result {
        Ok(p) => Some(p),
        Err(Error::NotFound) | Err(Error::ZeroDegreeSeed(_)) => None,
        Err(e) => return Err(e),
    };
    let (l, r) = pair.as_ref().map_or((VertexSet::empty(), VertexSet::empty()), |p| (p.l.clone(), p.r.clone()));
    let output = Labeling::from_pair(g.n(), &l, &r)?;
    Ok(DirectedTrial {
        graph_seed,
        seed_vertex: u,
        found: pair.is_some(),
        flow: pair.as_ref().map(|p| p.flow),
        ari: ari(&output, &truth)?,
        volume: pair.as_ref().map_or(0.0, |p| p.volume),
        planted_flow,
        epsilon: pair.as_ref().map(|p| p.epsilon),
        sample_cut_ratio: pair.as_ref().map(|p| p.sample_cut_ratio),
        pair_cut_ratio: pair.as_ref().map(|p| p.pair_cut_ratio),
        steps,
        runtime_ms,
    })
}

/// Runs the directed benchmark; trials run in parallel.
pub fn run_table2(spec: &Table2Spec) -> Result<Table2Report> {
    let trials = trial_seeds(spec.seed, spec.runs)
        .into_par_iter()
        .map(|(gs, ps)| directed_trial(spec, gs, ps))
        .collect::<Result<Vec<_>>>()?;
    Ok(Table2Report {
        mean_ari: mean(trials.iter().map(|t| t.ari)).unwrap_or(f64::NAN),
        mean_flow: mean(trials.iter().filter_map(|t| t.flow)),
        found_runs: trials.iter().filter(|t| t.found).count(),
        mean_runtime_ms: mean(trials.iter().map(|t| t.runtime_ms)).unwrap_or(f64::NAN),
        trials,
    })
}
