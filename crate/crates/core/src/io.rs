//! Text formats and the JSON run record.
//!
//! Edge lists: one edge per line, `u v [w]`, whitespace separated, 0-based ids,
//! `#` starts a comment. A `# vertices N` line fixes the vertex count so that
//! trailing isolated vertices survive a round trip.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cover::{Cover, CoverSet};
use crate::error::{Error, Result};
use crate::graph::{GraphBuilder, VertexSet, WeightedGraph};
use crate::metrics::{ari, misclassified_ratio, Labeling};
use crate::scalar::Scalar;

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { path: path.display().to_string(), line, msg: msg.into() }
}

fn open(path: &Path) -> Result<BufReader<fs::File>> {
    Ok(BufReader::new(fs::File::open(path)?))
}

/// Reads an edge list. Duplicate edges are merged by summing weights.
pub fn load_edge_list<T: Scalar>(path: impl AsRef<Path>, directed: bool) -> Result<WeightedGraph<T>> {
    let path = path.as_ref();
    let mut builder = GraphBuilder::<T>::new(0, directed);
    for (i, line) in open(path)?.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let (body, comment) = match line.split_once('#') {
            Some((b, c)) => (b, Some(c)),
            None => (line.as_str(), None),
        };
        if let Some(c) = comment {
            let mut words = c.split_whitespace();
            if words.next() == Some("vertices") {
                let n = words
                    .next()
                    .and_then(|w| w.parse::<usize>().ok())
                    .ok_or_else(|| parse_err(path, lineno, "expected `# vertices N`"))?;
                builder.ensure_vertices(n);
            }
        }
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() > 3 || fields.len() < 2 {
            return Err(parse_err(path, lineno, format!("expected `u v [w]`, got {} fields", fields.len())));
        }
        let id = |s: &str| s.parse::<usize>().map_err(|_| parse_err(path, lineno, format!("bad vertex id `{s}`")));
        let (u, v) = (id(fields[0])?, id(fields[1])?);
        let w = match fields.get(2) {
            Some(s) => s.parse::<f64>().map_err(|_| parse_err(path, lineno, format!("bad weight `{s}`")))?,
            None => 1.0,
        };
        builder.ensure_vertices(u.max(v) + 1);
        builder
            .add_edge(u, v, T::of(w))
            .map_err(|e| parse_err(path, lineno, e.to_string()))?;
    }
    Ok(builder.build())
}

/// Canonical text form: a `# vertices N` header, then edges sorted by `(u, v)`
/// (`u < v` for undirected graphs) with shortest round-trip weights.
pub fn edge_list_string<T: Scalar>(g: &WeightedGraph<T>) -> String {
    let mut out = String::new();
    let kind = if g.is_directed() { "directed" } else { "undirected" };
    writeln!(out, "# vertices {}", g.n()).unwrap();
    writeln!(out, "# {kind}").unwrap();
    for (u, v, w) in g.edges() {
        writeln!(out, "{u} {v} {}", w.to_f64_lossy()).unwrap();
    }
    out
}

pub fn write_edge_list<T: Scalar>(g: &WeightedGraph<T>, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, edge_list_string(g))?;
    Ok(())
}

/// Reads `j,l,count` rows of a pairwise flow matrix `M` (counts for the same
/// ordered pair add up) and builds the digraph with an arc `j → l` of weight
/// `(M_jl − M_lj)/(M_jl + M_lj)` whenever `M_jl > M_lj`. A leading header row is
/// skipped.
pub fn load_flow_matrix<T: Scalar>(path: impl AsRef<Path>) -> Result<WeightedGraph<T>> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_path(path)
        .map_err(|e| parse_err(path, 0, e.to_string()))?;
    let mut counts: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut n = 0;
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| parse_err(path, i + 1, e.to_string()))?;
        let lineno = record.position().map_or(i + 1, |p| p.line() as usize);
        if record.len() != 3 {
            return Err(parse_err(path, lineno, format!("expected `j,l,count`, got {} fields", record.len())));
        }
        let j = record[0].parse::<usize>();
        let l = record[1].parse::<usize>();
        let (j, l) = match (j, l) {
            (Ok(j), Ok(l)) => (j, l),
            _ if i == 0 => continue,
            _ => return Err(parse_err(path, lineno, "bad vertex id")),
        };
        let c = record[2]
            .parse::<f64>()
            .map_err(|_| parse_err(path, lineno, format!("bad count `{}`", &record[2])))?;
        if !(c >= 0.0) || !c.is_finite() {
            return Err(parse_err(path, lineno, format!("count must be finite and nonnegative, got {c}")));
        }
        if j == l {
            return Err(parse_err(path, lineno, format!("self-flow at {j}")));
        }
        *counts.entry((j, l)).or_default() += c;
        n = n.max(j.max(l) + 1);
    }
    let mut builder = GraphBuilder::<T>::new(n, true);
    for (&(j, l), &a) in &counts {
        let b = counts.get(&(l, j)).copied().unwrap_or(0.0);
        if a > b {
            builder.add_edge(j, l, T::of((a - b) / (a + b)))?;
        }
    }
    Ok(builder.build())
}

/// `vertex label` lines; every vertex in `0..n` must appear exactly once.
pub fn load_labels(path: impl AsRef<Path>, n: usize) -> Result<Vec<usize>> {
    let path = path.as_ref();
    let mut labels = vec![None; n];
    for (i, line) in open(path)?.lines().enumerate() {
        let line = line?;
        let body = line.split('#').next().unwrap_or("");
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        let parsed = match fields.as_slice() {
            [v, l] => v.parse::<usize>().ok().zip(l.parse::<usize>().ok()),
            _ => None,
        };
        let (v, l) = parsed.ok_or_else(|| parse_err(path, i + 1, "expected `vertex label`"))?;
        if v >= n {
            return Err(parse_err(path, i + 1, format!("vertex {v} out of range for {n} vertices")));
        }
        if labels[v].replace(l).is_some() {
            return Err(parse_err(path, i + 1, format!("vertex {v} labelled twice")));
        }
    }
    labels
        .into_iter()
        .enumerate()
        .map(|(v, l)| l.ok_or_else(|| parse_err(path, 0, format!("vertex {v} has no label"))))
        .collect()
}

pub fn write_labels(labels: &[usize], path: impl AsRef<Path>) -> Result<()> {
    let mut out = String::new();
    for (v, l) in labels.iter().enumerate() {
        writeln!(out, "{v} {l}").unwrap();
    }
    fs::write(path, out)?;
    Ok(())
}

/// Optional `vertex name` sidecar; the name is the rest of the line.
pub fn load_names(path: impl AsRef<Path>) -> Result<BTreeMap<usize, String>> {
    let path = path.as_ref();
    let mut names = BTreeMap::new();
    for (i, line) in open(path)?.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (v, name) = line.split_once(char::is_whitespace).ok_or_else(|| parse_err(path, i + 1, "expected `vertex name`"))?;
        let v = v.parse::<usize>().map_err(|_| parse_err(path, i + 1, format!("bad vertex id `{v}`")))?;
        names.insert(v, name.trim().to_string());
    }
    Ok(names)
}

/// Identifies the graph a result was computed on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFingerprint {
    pub n: usize,
    pub m: usize,
    pub directed: bool,
    /// SHA-256 of the canonical edge list.
    pub sha256: String,
}

impl GraphFingerprint {
    pub fn of<T: Scalar>(g: &WeightedGraph<T>) -> Self {
        let digest = Sha256::digest(edge_list_string(g).as_bytes());
        Self { n: g.n(), m: g.edge_count(), directed: g.is_directed(), sha256: hex::encode(digest) }
    }
}

/// Inputs of a run; fields that do not apply stay `null`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunParameters {
    pub gamma: Option<f64>,
    pub beta_hat: Option<f64>,
    pub alpha: Option<f64>,
    pub epsilon: Option<f64>,
    pub phi: Option<f64>,
    pub steps: Option<usize>,
    pub side: Option<String>,
    pub best_sweep: Option<bool>,
}

/// Quality of `(L, R)`, always recomputed from the graph.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub beta: Option<f64>,
    pub flow: Option<f64>,
    pub volume: Option<f64>,
    pub conductance_in_cover: Option<f64>,
    pub cut_imbalance: Option<f64>,
}

impl RunMetrics {
    pub fn compute<T: Scalar>(g: &WeightedGraph<T>, l: &VertexSet, r: &VertexSet) -> Self {
        if l.is_empty() && r.is_empty() {
            return Self::default();
        }
        let f = |x: Result<T>| x.ok().map(Scalar::to_f64_lossy);
        let phi = f(Cover::of(g).conductance(&CoverSet::from_pair(l, r)));
        if g.is_directed() {
            let volume = g.volume_out(l).and_then(|a| Ok(a + g.volume_in(r)?));
            Self {
                beta: None,
                flow: f(g.flow_ratio(l, r)),
                volume: f(volume),
                conductance_in_cover: phi,
                cut_imbalance: f(g.cut_imbalance(l, r)),
            }
        } else {
            Self {
                beta: f(g.bipartiteness(l, r)),
                flow: None,
                volume: f(g.volume(&l.union(r))),
                conductance_in_cover: phi,
                cut_imbalance: None,
            }
        }
    }
}

/// JSON record of one clustering run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub algorithm: String,
    pub found: bool,
    pub seed_vertex: usize,
    pub parameters: RunParameters,
    pub l: Vec<usize>,
    pub r: Vec<usize>,
    pub metrics: RunMetrics,
    pub wall_clock_ms: f64,
    pub rng_seed: Option<u64>,
    pub graph: GraphFingerprint,
    /// Agreement with a ground-truth pair, when labels were supplied.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evaluation: Option<Evaluation>,
}

/// Scores of `(L, R)` against the ground-truth classes `target_labels`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub target_labels: (usize, usize),
    /// Three-way labelling: `{L, R, outside}` against `{C_a, C_b, outside}`.
    pub ari: f64,
    /// `None` when the output is empty.
    pub misclassified_ratio: Option<f64>,
}

impl Evaluation {
    pub fn compute(n: usize, l: &VertexSet, r: &VertexSet, truth: &[usize], target_labels: (usize, usize)) -> Result<Self> {
        if truth.len() != n {
            return Err(Error::LengthMismatch { left: truth.len(), right: n });
        }
        let (a, b) = target_labels;
        let expected = Labeling::restrict(truth, a, b);
        let output = Labeling::from_pair(n, l, r)?;
        let misclassified_ratio = if l.is_empty() && r.is_empty() {
            None
        } else {
            Some(misclassified_ratio(l, r, &expected.members(0), &expected.members(1))?)
        };
        Ok(Self { target_labels, ari: ari(&output, &expected)?, misclassified_ratio })
    }
}

impl RunResult {
    /// Builds the record, recomputing every metric from `g` and the output sets.
    /// `pair` is `None` for a run that found nothing.
    #[allow(clippy::too_many_arguments)]
    pub fn new<T: Scalar>(
        algorithm: &str,
        g: &WeightedGraph<T>,
        seed_vertex: usize,
        parameters: RunParameters,
        pair: Option<(&VertexSet, &VertexSet)>,
        wall_clock_ms: f64,
        rng_seed: Option<u64>,
    ) -> Self {
        let (l, r, metrics) = match pair {
            Some((l, r)) => (l.as_slice().to_vec(), r.as_slice().to_vec(), RunMetrics::compute(g, l, r)),
            None => (Vec::new(), Vec::new(), RunMetrics::default()),
        };
        Self {
            algorithm: algorithm.to_string(),
            found: pair.is_some(),
            seed_vertex,
            parameters,
            l,
            r,
            metrics,
            wall_clock_ms,
            rng_seed,
            graph: GraphFingerprint::of(g),
            evaluation: None,
        }
    }

    pub fn l_set(&self) -> VertexSet {
        VertexSet::from_ids(self.l.iter().copied())
    }

    pub fn r_set(&self) -> VertexSet {
        VertexSet::from_ids(self.r.iter().copied())
    }

    pub fn evaluate(&mut self, truth: &[usize], target_labels: (usize, usize)) -> Result<()> {
        let e = Evaluation::compute(self.graph.n, &self.l_set(), &self.r_set(), truth, target_labels)?;
        self.evaluation = Some(e);
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
