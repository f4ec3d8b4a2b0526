//! End-to-end acceptance checks. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line, even when nothing fails.
//!
//! `ACCEPTANCE_ONLY=3,7` restricts the run; `ACCEPTANCE_FULL=1` adds the
//! n₁ = 10 000 benchmark row.

mod common;

use std::collections::HashMap;
use std::panic::{self, AssertUnwindSafe};
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use localpair::esp::evo_cut_directed_steps;
use localpair::experiment::{run_table1, run_table2, BipartParams, DirectedParams, Table1Spec, Table2Report, Table2Spec};
use localpair::oracle::{brute_force_best_pair, brute_force_min_conductance, exact_esp_kernel, exact_pagerank, DenseVector};
use localpair::pagerank::{approximate_pagerank_dc, loc_bipart_dc_with, simplify, ApproxPagerank, LocBipartConfig, SweepMode};
use localpair::{
    CbmPlusSpec, Cover, CoverSet, CoverVertex, EspState, Graph, MassVector, SbmSpec, Side, SideChoice, VertexSet,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn within(limit: Duration, start: Instant) -> std::result::Result<f64, String> {
    let s = start.elapsed().as_secs_f64();
    if s < limit.as_secs_f64() {
        Ok(s)
    } else {
        Err(format!("took {s:.1}s, limit {}s", limit.as_secs()))
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn graph_with_edges<R: Rng>(rng: &mut R, max_n: usize, directed: bool, weighted: bool) -> Graph {
    loop {
        let n = rng.random_range(2..=max_n);
        let p = rng.random_range(0.05..0.6);
        let g = random_graph(rng, n, p, directed, weighted);
        if g.edge_count() > 0 {
            return g;
        }
    }
}

// 1
fn reduction_identities() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    let mut checked = 0;
    for i in 0..200 {
        let g = graph_with_edges(&mut r, 50, false, i % 4 != 0);
        let cover = Cover::double(&g).unwrap();
        let (l, rr) = random_pair(&mut r, g.n());
        let Ok(beta) = g.bipartiteness(&l, &rr) else { continue };
        let phi = cover.conductance(&CoverSet::from_pair(&l, &rr)).unwrap();
        ensure!((phi - beta).abs() <= 1e-12, "undirected graph {i}: Φ_H = {phi}, β = {beta}");
        checked += 1;
    }
    let mut checked_d = 0;
    for i in 0..200 {
        let g = graph_with_edges(&mut r, 50, true, i % 4 != 0);
        let cover = Cover::semi_double(&g).unwrap();
        let (l, rr) = random_pair(&mut r, g.n());
        let Ok(flow) = g.flow_ratio(&l, &rr) else { continue };
        let s = CoverSet::from_pair(&l, &rr);
        let ratio = cover.cut_ratio(&s).unwrap();
        ensure!((ratio - flow).abs() <= 1e-12, "digraph {i}: |∂S|/vol S = {ratio}, F = {flow}");
        if cover.volume(&s) <= cover.total_volume() / 2.0 {
            let phi = cover.conductance(&s).unwrap();
            ensure!((phi - flow).abs() <= 1e-12, "digraph {i}: Φ_H = {phi}, F = {flow}");
        }
        checked_d += 1;
    }
    ensure!(checked >= 150 && checked_d >= 150, "too few defined cases ({checked}, {checked_d})");
    let s = within(Duration::from_secs(5), start)?;
    Ok(format!("{checked} undirected + {checked_d} directed pairs exact to 1e-12 in {s:.2}s"))
}

// 2
fn push_invariant() -> Outcome {
    let start = Instant::now();
    let mut r = rng(2);
    let mut pushes = 0;
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let g = graph_with_edges(&mut r, 20, false, i % 2 == 0);
        let v = (0..g.n()).find(|&v| g.degree(v).unwrap() > 0.0).unwrap();
        let alpha = r.random_range(0.05..0.4);
        let eps = r.random_range(1e-4..1e-2);
        let len = 2 * g.n();
        let seed = CoverVertex::first(v);
        let target = exact_pagerank(&g, true, alpha, &DenseVector::indicator(len, seed)).unwrap();
        let mut apr = ApproxPagerank::new(Cover::double(&g).unwrap(), seed, alpha, eps).unwrap();
        while apr.step().is_some() {
            let pr_r = exact_pagerank(&g, true, alpha, &DenseVector::from_mass(apr.r(), len)).unwrap();
            let lhs = DenseVector::from_mass(apr.p(), len).add(&pr_r);
            let err = lhs.max_abs_diff(&target);
            worst = worst.max(err);
            ensure!(err <= 1e-8, "graph {i}, push {}: error {err:e}", apr.pushes());
        }
        pushes += apr.pushes();
    }
    let s = within(Duration::from_secs(30), start)?;
    Ok(format!("{pushes} pushes on 50 graphs, worst ‖·‖∞ {worst:.1e}, {s:.1}s"))
}

fn ring(n: usize, offset: usize, span: usize) -> Vec<(usize, usize, f64)> {
    (0..n).flat_map(|i| (1..=span).map(move |k| (offset + i, offset + (i + k) % n, 1.0))).collect()
}

// 3
fn apr_guarantees() -> Outcome {
    let mut r = rng(3);
    for i in 0..100 {
        let g = graph_with_edges(&mut r, 200, false, i % 2 == 0);
        let cover = Cover::double(&g).unwrap();
        let v = (0..g.n()).find(|&v| g.degree(v).unwrap() > 0.0).unwrap();
        let alpha = r.random_range(0.01..0.3);
        let eps = r.random_range(1e-5..1e-2);
        let res = approximate_pagerank_dc(&g, v, alpha, eps).unwrap();
        for (u, x) in res.r.iter() {
            let d = cover.degree(u);
            ensure!(d == 0.0 || x / d < eps, "graph {i}: r({u})/deg = {} ≥ ε = {eps}", x / d);
        }
        let vol: f64 = res.p.iter().map(|(u, _)| cover.degree(u)).sum();
        ensure!(vol <= 1.0 / (eps * alpha), "graph {i}: vol(supp p) = {vol} > 1/(εα)");
    }

    // target of volume 10⁴ (5 000 edges), remainder of 10⁶ edges
    let nt = 1000;
    let mut target: Vec<(usize, usize, f64)> = Vec::new();
    let base = random_connected(&mut r, nt, 4000.0 / (nt * nt / 2) as f64, false);
    target.extend(base.edges());
    let small = Graph::from_edges(nt, false, target.clone()).unwrap();
    let mut all = target.clone();
    all.extend(ring(100_000, nt, 10));
    let big = Graph::from_edges(nt + 100_000, false, all).unwrap();
    ensure!(big.edge_count() >= small.edge_count() + 1_000_000, "remainder too small");

    let (alpha, eps) = (0.01, 1e-5);
    let time = |g: &Graph| {
        let mut best = Duration::MAX;
        let mut out = None;
        for _ in 0..7 {
            let t = Instant::now();
            let res = approximate_pagerank_dc(g, 0, alpha, eps).unwrap();
            best = best.min(t.elapsed());
            out = Some(res);
        }
        (best, out.unwrap())
    };
    let (t_small, res_small) = time(&small);
    let (t_big, res_big) = time(&big);
    ensure!(res_small.p.sorted() == res_big.p.sorted(), "remainder changed the result");
    ensure!(res_big.p.iter().all(|(u, _)| u.base() < nt), "mass escaped the target component");
    let bound = 1.0 / (eps * alpha);
    ensure!(res_big.pushed_volume <= bound, "touched volume {} > 1/(εα) = {bound}", res_big.pushed_volume);
    let ratio = t_big.as_secs_f64() / t_small.as_secs_f64();
    ensure!(ratio < 2.0, "runtime ratio {ratio:.2} (with remainder {t_big:?}, without {t_small:?})");
    Ok(format!(
        "100 runs within bounds; locality: touched vol {:.0}, {:?} vs {:?} (×{ratio:.2})",
        res_big.pushed_volume, t_big, t_small
    ))
}

// 4
fn sigma_laws() -> Outcome {
    let mut r = rng(4);
    for case in 0..1000 {
        let g = graph_with_edges(&mut r, 15, false, case % 2 == 0);
        let cover = Cover::double(&g).unwrap();
        let n = g.n();
        let (p, a, b) = (random_mass(&mut r, n, 0.6), random_mass(&mut r, n, 0.5), random_mass(&mut r, n, 0.5));
        let c: f64 = r.random_range(0.0..10.0);

        let lhs = simplify(&p.scaled(c));
        let rhs = simplify(&p).scaled(c);
        ensure!(dominated(&lhs, &rhs, 1e-12) && dominated(&rhs, &lhs, 1e-12), "case {case}: homogeneity");
        ensure!(dominated(&simplify(&sum(&a, &b)), &sum(&simplify(&a), &simplify(&b)), 1e-12), "case {case}: subadditivity");
        let walked_then_simplified = simplify(&lazy_walk(&cover, &p));
        let simplified_then_walked = lazy_walk(&cover, &simplify(&p));
        ensure!(dominated(&walked_then_simplified, &simplified_then_walked, 1e-12), "case {case}: σ∘(pW) ⪯ (σ∘p)W");
    }

    // one arc a → b on the semi-double cover: the domination fails
    let g = Graph::from_unweighted(2, true, [(0, 1)]).unwrap();
    let cover = Cover::semi_double(&g).unwrap();
    let p: MassVector<f64> = [(CoverVertex::first(0), 0.5), (CoverVertex::second(0), 0.5)].into_iter().collect();
    let b2 = CoverVertex::second(1);
    let left = simplify(&lazy_walk(&cover, &p)).get(b2);
    let right = lazy_walk(&cover, &simplify(&p)).get(b2);
    ensure!(left == 0.25 && right == 0.0, "semi-double counterexample gave {left} vs {right}");
    Ok("1000 cases; semi-double counterexample (σ∘(pW))(b₂) = 0.25 > 0".into())
}

fn table1_spec(n1: usize) -> Table1Spec {
    Table1Spec {
        sbm: SbmSpec::new(n1, 1.0 / n1 as f64, 18.0 / n1 as f64),
        runs: 10,
        seed: 2024,
        params: BipartParams::PlantedVolume { beta_hat: 1.0 },
        sweep: SweepMode::Best,
    }
}

// 5
fn table1() -> Outcome {
    let start = Instant::now();
    let rep = run_table1(&table1_spec(1000)).map_err(|e| e.to_string())?;
    let s = start.elapsed().as_secs_f64();
    let beta = rep.mean_beta.unwrap_or(f64::NAN);
    for t in &rep.trials {
        if let Some(b) = t.beta {
            ensure!(b <= t.beta_hat, "trial returned β = {b} > β̂ = {}", t.beta_hat);
        }
    }
    let summary = format!(
        "ARI {:.3}, β {beta:.3}, misclassified {:.3}, found {}/10, {s:.1}s",
        rep.mean_ari, rep.mean_misclassified, rep.found_runs
    );
    ensure!(rep.mean_ari >= 0.90, "mean ARI below 0.90: {summary}");
    ensure!(beta <= 0.25, "mean β above 0.25: {summary}");
    ensure!(rep.mean_misclassified <= 0.15, "misclassified above 0.15: {summary}");
    ensure!(s < 60.0, "over 60s: {summary}");

    if std::env::var_os("ACCEPTANCE_FULL").is_some() {
        let big = run_table1(&table1_spec(10_000)).map_err(|e| e.to_string())?;
        ensure!(big.mean_ari >= 0.85, "n₁ = 10000: mean ARI {:.3} below 0.85", big.mean_ari);
        return Ok(format!("{summary}; n₁ = 10000: ARI {:.3}", big.mean_ari));
    }
    Ok(format!("{summary}; n₁ = 10000 row skipped (set ACCEPTANCE_FULL=1)"))
}

// 6
fn returned_pair_contract() -> Outcome {
    let mut r = rng(6);
    let (mut returned, mut runs) = (0, 0);
    let mut graphs: Vec<Graph> = (0..40).map(|i| graph_with_edges(&mut r, 60, false, i % 2 == 0)).collect();
    for seed in 0..10 {
        graphs.push(localpair::gen_sbm(&SbmSpec::new(60, 0.05, 0.3), seed).unwrap().0);
    }
    for g in &graphs {
        let v = (0..g.n()).find(|&v| g.degree(v).unwrap() > 0.0).unwrap();
        for beta_hat in [0.05f64, 0.2, 0.5, 0.8, 1.0] {
            for sweep in [SweepMode::First, SweepMode::Best] {
                // push cost is 1/(εα); draw the push parameters directly to keep runs short
                let config = if r.random::<bool>() {
                    LocBipartConfig::from_targets(r.random_range(1.0..100.0), beta_hat.max(0.5))
                } else {
                    LocBipartConfig::explicit(r.random_range(0.005..0.3), r.random_range(1e-5..1e-2), beta_hat)
                };
                let config = config.unwrap().with_sweep(sweep);
                runs += 1;
                let Ok(pair) = loc_bipart_dc_with(g, v, &config).unwrap().pair else { continue };
                returned += 1;
                let beta = g.bipartiteness(&pair.l, &pair.r).unwrap();
                ensure!(beta <= config.beta_hat, "β(L′,R′) = {beta} > β̂ = {}", config.beta_hat);
                ensure!(pair.l.first_overlap(&pair.r).is_none(), "L′ ∩ R′ ≠ ∅");
                ensure!(!pair.l.is_empty() || !pair.r.is_empty(), "empty pair returned");
            }
        }
    }
    ensure!(returned > 0, "no run returned a pair");
    Ok(format!("{returned} of {runs} runs returned a pair; all within β̂ and disjoint"))
}

fn cv(i: usize, side: u8) -> CoverVertex {
    CoverVertex::new(i, if side == 1 { Side::First } else { Side::Second })
}

fn kernel_cases() -> Vec<(Graph, Vec<CoverSet>)> {
    let set = |vs: &[(usize, u8)]| CoverSet::from_vertices(vs.iter().map(|&(i, s)| cv(i, s)));
    vec![
        (
            Graph::from_unweighted(3, true, [(0, 1), (1, 2), (2, 0), (0, 2)]).unwrap(),
            vec![set(&[(0, 1)]), set(&[(0, 1), (1, 2)]), set(&[(0, 1), (0, 2), (2, 2)])],
        ),
        (
            Graph::from_unweighted(5, true, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (1, 3), (2, 0)]).unwrap(),
            vec![set(&[(1, 1)]), set(&[(0, 1), (1, 2), (2, 2)]), set(&[(3, 2), (4, 1), (4, 2)])],
        ),
        (
            Graph::from_edges(
                6,
                true,
                [(0, 1, 2.0), (1, 2, 1.0), (2, 0, 0.5), (3, 4, 1.5), (4, 5, 1.0), (5, 3, 3.0), (2, 3, 0.25), (4, 1, 1.0)],
            )
            .unwrap(),
            vec![set(&[(2, 1)]), set(&[(0, 1), (1, 2), (3, 1)]), set(&[(1, 1), (1, 2), (4, 1), (5, 2)])],
        ),
    ]
}

fn key(s: &CoverSet) -> Vec<usize> {
    s.iter().map(CoverVertex::index).collect()
}

// 7
fn esp_kernel() -> Outcome {
    let start = Instant::now();
    let samples = 100_000;
    let mut r = rng(7);
    let mut worst_tv: f64 = 0.0;
    let mut worst_mart: f64 = 0.0;
    for (gi, (g, sets)) in kernel_cases().iter().enumerate() {
        let cover = Cover::semi_double(g).unwrap();

        // K is stochastic and vol(S_t) a martingale under it, from every start set
        let len = 2 * g.n();
        for bits in 1u32..(1 << len) {
            let s = CoverSet::from_vertices((0..len).filter(|i| bits >> i & 1 == 1).map(CoverVertex::from_index));
            let vol = cover.volume(&s);
            if vol <= 0.0 {
                continue;
            }
            let row = exact_esp_kernel(g, &s).unwrap();
            let mass: f64 = row.iter().map(|e| e.k).sum();
            let mean_vol: f64 = row.iter().map(|e| e.k * e.volume).sum();
            let hat: f64 = row.iter().map(|e| e.k_hat).sum();
            let err = (mass - 1.0).abs().max((mean_vol - vol).abs() / vol).max((hat - 1.0).abs());
            worst_mart = worst_mart.max(err);
            ensure!(err <= 1e-10, "graph {gi}, set {s:?}: Σk = {mass}, E vol = {mean_vol} vs {vol}");
        }

        for s in sets {
            let row = exact_esp_kernel(g, s).unwrap();
            let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
            for _ in 0..samples {
                let mut state = EspState::from_set(cover, s, &mut r).unwrap();
                state.step(&mut r);
                *counts.entry(key(&state.set())).or_default() += 1;
            }
            let mut tv = 0.0;
            let mut seen = 0;
            for e in &row {
                let emp = counts.get(&key(&e.set)).copied().unwrap_or(0);
                seen += emp;
                tv += (emp as f64 / samples as f64 - e.k_hat).abs();
            }
            // samples landing on sets outside the exact row
            tv += (samples - seen) as f64 / samples as f64;
            tv /= 2.0;
            worst_tv = worst_tv.max(tv);
            ensure!(tv < 0.01, "graph {gi}, start {s:?}: TV {tv:.4}");
        }
    }
    let s = within(Duration::from_secs(30), start)?;
    Ok(format!("worst TV {worst_tv:.4} over 9 starts × 1e5; martingale error {worst_mart:.1e}; {s:.1}s"))
}

static TABLE2: OnceLock<Table2Report> = OnceLock::new();

// 8
fn table2() -> Outcome {
    let spec = Table2Spec {
        cbm_plus: CbmPlusSpec::default(),
        runs: 10,
        seed: 2024,
        params: DirectedParams::Phi(1e-6),
        side: SideChoice::Both,
    };
    let start = Instant::now();
    let rep = run_table2(&spec).map_err(|e| e.to_string())?;
    let s = start.elapsed().as_secs_f64();
    let summary = format!(
        "ARI {:.3}, F {:.4}, found {}/10, {s:.1}s",
        rep.mean_ari,
        rep.mean_flow.unwrap_or(f64::NAN),
        rep.found_runs
    );
    let _ = TABLE2.set(rep.clone());
    ensure!(rep.mean_ari >= 0.90, "mean ARI below 0.90: {summary}");
    ensure!(s < 60.0, "over 60s: {summary}");
    Ok(summary)
}

fn cleanup_holds(eps: f64, sample: f64, pair: f64) -> bool {
    pair <= (sample + eps) / (1.0 - eps) + 1e-12
}

// 9
fn cleanup_bound() -> Outcome {
    let mut checked = 0;
    let mut worst_eps: f64 = 0.0;
    if let Some(rep) = TABLE2.get() {
        for t in rep.trials.iter().filter(|t| t.found) {
            let (e, s, p) = (t.epsilon.unwrap(), t.sample_cut_ratio.unwrap(), t.pair_cut_ratio.unwrap());
            ensure!(cleanup_holds(e, s, p), "benchmark trial: Φ(S∖P) = {p} > ({s} + {e})/(1 − {e})");
            checked += 1;
        }
    }
    let mut r = rng(9);
    for i in 0..800 {
        let g = graph_with_edges(&mut r, 30, true, i % 2 == 0);
        let u = r.random_range(0..g.n());
        let side = if r.random::<bool>() { Side::First } else { Side::Second };
        let steps = r.random_range(1..60);
        match evo_cut_directed_steps(&g, u, side, steps, &mut r) {
            Ok(p) => {
                worst_eps = worst_eps.max(p.epsilon);
                ensure!(
                    cleanup_holds(p.epsilon, p.sample_cut_ratio, p.pair_cut_ratio),
                    "digraph {i}: Φ(S∖P) = {} > ({} + {})/(1 − {})",
                    p.pair_cut_ratio,
                    p.sample_cut_ratio,
                    p.epsilon,
                    p.epsilon
                );
                checked += 1;
            }
            Err(localpair::Error::NotFound | localpair::Error::ZeroDegreeSeed(_)) => {}
            Err(e) => return Err(format!("digraph {i}: {e}")),
        }
    }
    ensure!(checked >= 200, "only {checked} runs produced a pair");
    Ok(format!("{checked} runs, largest ε {worst_eps:.3}"))
}

// 10
fn brute_force_agreement() -> Outcome {
    let mut r = rng(10);
    for i in 0..500 {
        let n = r.random_range(2..=6);
        let p = r.random_range(0.0..0.8);
        let g = random_connected(&mut r, n, p, i % 2 == 1);
        let cover = Cover::double(&g).unwrap();
        let (l, rr, beta) = brute_force_best_pair(&g).unwrap();
        let (s, phi) = brute_force_min_conductance(&g, true).unwrap();
        ensure!(s.is_simple(), "graph {i}: minimiser is not simple");
        ensure!((beta - phi).abs() <= 1e-12, "graph {i}: min β = {beta}, min Φ = {phi}");
        let forward = cover.conductance(&CoverSet::from_pair(&l, &rr)).unwrap();
        ensure!((forward - phi).abs() <= 1e-12, "graph {i}: pair → set gives Φ = {forward}, min {phi}");
        let (l2, r2): (VertexSet, VertexSet) = s.to_cluster_pair();
        let back = g.bipartiteness(&l2, &r2).unwrap();
        ensure!((back - beta).abs() <= 1e-12, "graph {i}: set → pair gives β = {back}, min {beta}");
    }
    Ok("500 connected graphs with n ≤ 6".into())
}

fn main() {
    let criteria: [(u32, &str, fn() -> Outcome); 10] = [
        (1, "reduction identities", reduction_identities),
        (2, "push invariant vs dense oracle", push_invariant),
        (3, "approximate pagerank guarantees", apr_guarantees),
        (4, "simplify operator laws", sigma_laws),
        (5, "SBM benchmark (bipartite)", table1),
        (6, "returned-pair contract", returned_pair_contract),
        (7, "evolving-set kernel", esp_kernel),
        (8, "CBM+ benchmark (directed)", table2),
        (9, "epsilon-simple cleanup bound", cleanup_bound),
        (10, "brute-force agreement", brute_force_agreement),
    ];
    let only: Option<Vec<u32>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());

    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (id, name, run) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {id:>2} FAIL  {name}: {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
