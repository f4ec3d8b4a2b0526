#![allow(dead_code)]

use localpair::{Cover, CoverVertex, Graph, MassVector, Side, VertexSet};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn weight<R: Rng>(rng: &mut R, weighted: bool) -> f64 {
    if weighted {
        rng.random_range(0.1..5.0)
    } else {
        1.0
    }
}

/// G(n, p) with optional random weights. Directed graphs may contain both `u→v` and `v→u`.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64, directed: bool, weighted: bool) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u == v || (!directed && v < u) {
                continue;
            }
            if rng.random::<f64>() < p {
                edges.push((u, v, weight(rng, weighted)));
            }
        }
    }
    Graph::from_edges(n, directed, edges).unwrap()
}

/// Random spanning tree plus G(n, p) extras; undirected.
pub fn random_connected<R: Rng>(rng: &mut R, n: usize, p: f64, weighted: bool) -> Graph {
    let mut present = vec![vec![false; n]; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let (u, v) = (order[i], order[rng.random_range(0..i)]);
        present[u][v] = true;
        present[v][u] = true;
        edges.push((u, v, weight(rng, weighted)));
    }
    for u in 0..n {
        for v in u + 1..n {
            if !present[u][v] && rng.random::<f64>() < p {
                edges.push((u, v, weight(rng, weighted)));
            }
        }
    }
    Graph::from_edges(n, false, edges).unwrap()
}

/// Random disjoint `(L, R)`, both non-empty when `n ≥ 2`.
pub fn random_pair<R: Rng>(rng: &mut R, n: usize) -> (VertexSet, VertexSet) {
    loop {
        let (mut l, mut r) = (Vec::new(), Vec::new());
        for v in 0..n {
            match rng.random_range(0..3) {
                1 => l.push(v),
                2 => r.push(v),
                _ => {}
            }
        }
        if !l.is_empty() && !r.is_empty() {
            return (VertexSet::from_ids(l), VertexSet::from_ids(r));
        }
    }
}

pub fn random_mass<R: Rng>(rng: &mut R, n: usize, density: f64) -> MassVector<f64> {
    let mut m = MassVector::new();
    for v in 0..n {
        for side in [Side::First, Side::Second] {
            if rng.random::<f64>() < density {
                m.set(CoverVertex::new(v, side), rng.random_range(0.0..1.0));
            }
        }
    }
    m
}

/// `pW` for the lazy walk `W = ½(I + D⁻¹A)` on the cover. Mass on an isolated
/// cover vertex stays put.
pub fn lazy_walk(cover: &Cover<'_, f64>, p: &MassVector<f64>) -> MassVector<f64> {
    let mut out = MassVector::new();
    for (v, x) in p.iter() {
        let d = cover.degree(v);
        if d <= 0.0 {
            out.add(v, x);
            continue;
        }
        out.add(v, 0.5 * x);
        for (y, w) in cover.neighbors(v) {
            out.add(y, 0.5 * x * w / d);
        }
    }
    out
}

/// `a ⪯ b + tol` at every cover vertex in either support.
pub fn dominated(a: &MassVector<f64>, b: &MassVector<f64>, tol: f64) -> bool {
    a.iter().all(|(v, x)| x <= b.get(v) + tol) && b.iter().all(|(v, _)| a.get(v) <= b.get(v) + tol)
}

pub fn sum(a: &MassVector<f64>, b: &MassVector<f64>) -> MassVector<f64> {
    a.iter().chain(b.iter()).collect()
}
