//! `localpair` command-line interface.
//!
//! Exit codes: 0 success (a run that finds no pair is still a success),
//! 1 usage error, 2 I/O or parse error, 3 invalid parameters.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use localpair::esp::{evo_cut_directed_both, steps_for_phi, SideChoice};
use localpair::experiment::{run_table1, run_table2, BipartParams, DirectedParams, Table1Spec, Table2Spec};
use localpair::io::{self, RunParameters, RunResult};
use localpair::oracle::{self, DenseVector};
use localpair::pagerank::{approximate_pagerank_dc, loc_bipart_dc_with, simplify, LocBipartConfig, SweepMode};
use localpair::{gen_cbm, gen_cbm_plus, gen_sbm, CbmPlusSpec, CbmSpec, CoverSet, CoverVertex, Error, Graph, SbmSpec, Side};
use serde_json::json;

/// Like `println!`, but a closed pipe (`localpair ... | head`) is not an error.
macro_rules! outln {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

/// Seed used by every randomized command when `--rng-seed` is not given.
const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(name = "localpair", version, about = "Local clustering of densely connected cluster pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a synthetic graph; writes an edge list and a `.labels` sidecar.
    #[command(subcommand)]
    Generate(GenerateCmd),
    /// Find a pair (L, R) with small bipartiteness around a seed vertex.
    ClusterBipartite(BipartiteArgs),
    /// Find a pair (L, R) with small flow ratio L → R around a seed vertex.
    ClusterDirected(DirectedArgs),
    /// Score a saved JSON result against ground-truth labels.
    Eval(EvalArgs),
    /// Exact reference computations on small graphs.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Run the synthetic benchmarks and print a summary table.
    #[command(subcommand)]
    Bench(BenchCmd),
}

#[derive(Args)]
struct OutputArgs {
    /// Output edge list; labels go to `<FILE>.labels`.
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long, visible_alias = "seed", default_value_t = DEFAULT_SEED)]
    rng_seed: u64,
}

#[derive(Subcommand)]
enum GenerateCmd {
    /// Three clusters: C1, C2 of size n1 and C3 of size 10·n1.
    Sbm {
        #[arg(long, default_value_t = 1000)]
        n1: usize,
        #[arg(long, default_value_t = 0.001)]
        p1: f64,
        #[arg(long, default_value_t = 0.018)]
        q1: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Cyclic block model.
    Cbm {
        #[command(flatten)]
        cbm: CbmArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Cyclic block model plus a planted local pair C_{k+1}, C_{k+2}.
    #[command(name = "cbm+")]
    CbmPlus {
        #[command(flatten)]
        cbm: CbmArgs,
        #[arg(long, default_value_t = 100)]
        n_prime: usize,
        #[arg(long, default_value_t = 0.5)]
        q1_prime: f64,
        #[arg(long, default_value_t = 0.005)]
        q2_prime: f64,
        #[arg(long, default_value_t = 1.0)]
        eta_prime: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Clone, Copy)]
struct CbmArgs {
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 0.001)]
    p: f64,
    #[arg(long, default_value_t = 0.01)]
    q: f64,
    #[arg(long, default_value_t = 0.9)]
    eta: f64,
}

impl CbmArgs {
    fn spec(self) -> CbmSpec {
        CbmSpec { k: self.k, n: self.n, p: self.p, q: self.q, eta: self.eta }
    }
}

#[derive(Args)]
struct CommonClusterArgs {
    /// Input graph file.
    #[arg(short, long)]
    graph: PathBuf,
    #[arg(long)]
    seed_vertex: usize,
    /// Print the full JSON record instead of a summary.
    #[arg(long)]
    json: bool,
    /// Ground-truth labels; adds ARI and misclassified ratio to the output.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Ground-truth classes to compare against, e.g. `0,1`.
    #[arg(long, value_parser = parse_label_pair)]
    target_labels: Option<(usize, usize)>,
    /// `vertex name` sidecar for readable summaries.
    #[arg(long)]
    names: Option<PathBuf>,
}

#[derive(Args)]
struct BipartiteArgs {
    #[command(flatten)]
    common: CommonClusterArgs,
    /// Target volume γ; sets ε = 1/(20γ).
    #[arg(long)]
    gamma: f64,
    /// Target bipartiteness β̂ in (0, 1]; sets α = β̂²/378 and bounds the output.
    #[arg(long = "beta")]
    beta: f64,
    /// Return the lowest-conductance sweep prefix instead of the first one within β̂.
    #[arg(long)]
    best_sweep: bool,
    /// Override the teleport probability α.
    #[arg(long)]
    alpha: Option<f64>,
    /// Override the push threshold ε.
    #[arg(long)]
    epsilon: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum InputFormat {
    /// `u v [w]` edge list.
    Edges,
    /// `j,l,count` flow matrix.
    Flow,
}

#[derive(Args)]
struct DirectedArgs {
    #[command(flatten)]
    common: CommonClusterArgs,
    /// Seed side: 1 if the seed is believed to be in L, 2 if in R.
    #[arg(long, value_enum, default_value = "both")]
    side: SideArg,
    /// Target flow ratio φ; sets T = max(1, ⌊1/(100·φ^{2/3})⌋).
    #[arg(long, required_unless_present = "steps")]
    phi: Option<f64>,
    /// Number of evolving-set steps, overriding the φ formula.
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    rng_seed: u64,
    #[arg(long, value_enum, default_value = "edges")]
    format: InputFormat,
}

#[derive(Args)]
struct EvalArgs {
    /// JSON result written by a cluster command.
    #[arg(long)]
    output: PathBuf,
    #[arg(long)]
    labels: PathBuf,
    /// Ground-truth classes; defaults to `0,1` for undirected graphs and to the
    /// two largest labels (the planted pair of CBM+) for directed ones.
    #[arg(long, value_parser = parse_label_pair)]
    target_labels: Option<(usize, usize)>,
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Exact personalized Pagerank on the (semi-)double cover.
    Pagerank {
        #[arg(short, long)]
        graph: PathBuf,
        #[arg(long)]
        directed: bool,
        #[arg(long)]
        seed_vertex: usize,
        #[arg(long, value_enum, default_value = "1")]
        side: SideArg,
        #[arg(long)]
        alpha: f64,
    },
    /// Exact evolving-set kernel row from a cover set such as `0:1,3:2`.
    Kernel {
        #[arg(short, long)]
        graph: PathBuf,
        #[arg(long)]
        directed: bool,
        #[arg(long, value_parser = parse_cover_set)]
        set: CoverSet,
    },
    /// Lovász–Simonovits curve of the approximate Pagerank from a seed.
    LsCurve {
        #[arg(short, long)]
        graph: PathBuf,
        #[arg(long)]
        seed_vertex: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        epsilon: f64,
        /// Apply the simplify operator first.
        #[arg(long)]
        simplify: bool,
    },
}

#[derive(Subcommand)]
enum BenchCmd {
    /// LocBipartDC on the three-cluster SBM, scored against (C1, C2).
    Table1 {
        #[arg(long, default_value_t = 1000)]
        n1: usize,
        /// Defaults to 1/n1 (0.001 at n1 = 1000).
        #[arg(long)]
        p1: Option<f64>,
        /// Defaults to 18/n1 (0.018 at n1 = 1000).
        #[arg(long)]
        q1: Option<f64>,
        #[arg(long, default_value_t = 10)]
        runs: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        rng_seed: u64,
        /// Target bipartiteness; α = β̂²/378.
        #[arg(long, default_value_t = 1.0)]
        beta_hat: f64,
        /// Target volume; defaults to vol(C1 ∪ C2) of each generated instance.
        #[arg(long)]
        gamma: Option<f64>,
        /// Use the first qualifying sweep prefix instead of the best one.
        #[arg(long)]
        first_sweep: bool,
        #[arg(long)]
        json: bool,
    },
    /// EvoCutDirected (both sides) on CBM+, scored against the planted pair.
    Table2 {
        #[command(flatten)]
        cbm: CbmArgs,
        #[arg(long, default_value_t = 100)]
        n_prime: usize,
        #[arg(long, default_value_t = 10)]
        runs: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        rng_seed: u64,
        /// Target flow ratio; the default gives T = 100 steps.
        #[arg(long, default_value_t = 1e-6)]
        phi: f64,
        #[arg(long)]
        json: bool,
    },
}

fn parse_label_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected `A,B`")?;
    let a = a.trim().parse().map_err(|_| format!("bad label `{a}`"))?;
    let b = b.trim().parse().map_err(|_| format!("bad label `{b}`"))?;
    Ok((a, b))
}

fn parse_cover_set(s: &str) -> Result<CoverSet, String> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let (u, i) = t.trim().split_once(':').ok_or(format!("expected `vertex:side`, got `{t}`"))?;
            let u: usize = u.parse().map_err(|_| format!("bad vertex `{u}`"))?;
            let side = match i {
                "1" => Side::First,
                "2" => Side::Second,
                _ => return Err(format!("side must be 1 or 2, got `{i}`")),
            };
            Ok(CoverVertex::new(u, side))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(CoverSet::from_vertices)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) | Error::Parse { .. } | Error::Json(_) => 2,
        _ => 3,
    }
}

fn labels_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".labels");
    PathBuf::from(s)
}

fn write_generated(g: &Graph, labels: &[usize], out: &OutputArgs) -> localpair::Result<()> {
    io::write_edge_list(g, &out.output)?;
    let lp = labels_path(&out.output);
    io::write_labels(labels, &lp)?;
    outln!(
        "wrote {} ({} vertices, {} edges) and {}",
        out.output.display(),
        g.n(),
        g.edge_count(),
        lp.display()
    );
    Ok(())
}

fn generate(cmd: GenerateCmd) -> localpair::Result<()> {
    match cmd {
        GenerateCmd::Sbm { n1, p1, q1, out } => {
            let (g, labels) = gen_sbm(&SbmSpec::new(n1, p1, q1), out.rng_seed)?;
            write_generated(&g, &labels, &out)
        }
        GenerateCmd::Cbm { cbm, out } => {
            let (g, labels) = gen_cbm(&cbm.spec(), out.rng_seed)?;
            write_generated(&g, &labels, &out)
        }
        GenerateCmd::CbmPlus { cbm, n_prime, q1_prime, q2_prime, eta_prime, out } => {
            let spec = CbmPlusSpec { cbm: cbm.spec(), n_prime, q1_prime, q2_prime, eta_prime };
            let (g, labels) = gen_cbm_plus(&spec, out.rng_seed)?;
            write_generated(&g, &labels, &out)
        }
    }
}

fn default_targets(directed: bool, truth: &[usize]) -> (usize, usize) {
    if directed {
        let top = truth.iter().copied().max().unwrap_or(1);
        (top.saturating_sub(1), top)
    } else {
        (0, 1)
    }
}

fn report(mut result: RunResult, common: &CommonClusterArgs) -> localpair::Result<()> {
    if let Some(path) = &common.labels {
        let truth = io::load_labels(path, result.graph.n)?;
        let targets = common.target_labels.unwrap_or_else(|| default_targets(result.graph.directed, &truth));
        result.evaluate(&truth, targets)?;
    }
    if common.json {
        outln!("{}", result.to_json()?);
        return Ok(());
    }
    let names = common.names.as_ref().map(io::load_names).transpose()?;
    let show = |ids: &[usize]| -> String {
        let label = |v: usize| match names.as_ref().and_then(|m: &BTreeMap<usize, String>| m.get(&v)) {
            Some(name) => name.clone(),
            None => v.to_string(),
        };
        ids.iter().map(|&v| label(v)).collect::<Vec<_>>().join(" ")
    };
    outln!("algorithm: {}", result.algorithm);
    outln!("found: {}", result.found);
    if result.found {
        let m = &result.metrics;
        if let Some(b) = m.beta {
            outln!("beta: {b:.6}");
        }
        if let Some(f) = m.flow {
            outln!("flow_ratio: {f:.6}");
        }
        if let Some(ci) = m.cut_imbalance {
            outln!("cut_imbalance: {ci:.6}");
        }
        if let Some(v) = m.volume {
            outln!("volume: {v}");
        }
        outln!("|L| = {}, |R| = {}", result.l.len(), result.r.len());
        outln!("L: {}", show(&result.l));
        outln!("R: {}", show(&result.r));
    }
    if let Some(e) = &result.evaluation {
        outln!("ari: {:.6}", e.ari);
        match e.misclassified_ratio {
            Some(m) => outln!("misclassified_ratio: {m:.6}"),
            None => outln!("misclassified_ratio: n/a"),
        }
    }
    outln!("wall_clock_ms: {:.3}", result.wall_clock_ms);
    Ok(())
}

fn cluster_bipartite(a: BipartiteArgs) -> localpair::Result<()> {
    let g: Graph = io::load_edge_list(&a.common.graph, false)?;
    let mut config = LocBipartConfig::from_targets(a.gamma, a.beta)?;
    if a.alpha.is_some() || a.epsilon.is_some() {
        config = LocBipartConfig::explicit(a.alpha.unwrap_or(config.alpha), a.epsilon.unwrap_or(config.epsilon), a.beta)?;
    }
    let config = config.with_sweep(if a.best_sweep { SweepMode::Best } else { SweepMode::First });
    let start = Instant::now();
    let outcome = loc_bipart_dc_with(&g, a.common.seed_vertex, &config)?;
    let ms = start.elapsed().as_secs_f64() * 1e3;
    let pair = match outcome.pair {
        Ok(p) => Some(p),
        Err(Error::NotFound) => None,
        Err(e) => return Err(e),
    };
    let params = RunParameters {
        gamma: Some(a.gamma),
        beta_hat: Some(a.beta),
        alpha: Some(config.alpha),
        epsilon: Some(config.epsilon),
        best_sweep: Some(a.best_sweep),
        ..Default::default()
    };
    let result = RunResult::new(
        "loc-bipart-dc",
        &g,
        a.common.seed_vertex,
        params,
        pair.as_ref().map(|p| (&p.l, &p.r)),
        ms,
        None,
    );
    report(result, &a.common)
}

fn cluster_directed(a: DirectedArgs) -> localpair::Result<()> {
    let g: Graph = match a.format {
        InputFormat::Edges => io::load_edge_list(&a.common.graph, true)?,
        InputFormat::Flow => io::load_flow_matrix(&a.common.graph)?,
    };
    let steps = match (a.steps, a.phi) {
        (Some(t), _) => t,
        (None, Some(phi)) => steps_for_phi(phi)?,
        (None, None) => unreachable!("clap requires --phi or --steps"),
    };
    let (choice, side_name) = match a.side {
        SideArg::One => (SideChoice::One(Side::First), "1"),
        SideArg::Two => (SideChoice::One(Side::Second), "2"),
        SideArg::Both => (SideChoice::Both, "both"),
    };
    let start = Instant::now();
    let pair = match evo_cut_directed_both(&g, a.common.seed_vertex, choice, steps, a.rng_seed) {
        Ok(p) => Some(p),
        Err(Error::NotFound) => None,
        Err(e) => return Err(e),
    };
    let ms = start.elapsed().as_secs_f64() * 1e3;
    let params = RunParameters {
        phi: a.phi,
        steps: Some(steps),
        side: Some(side_name.to_string()),
        ..Default::default()
    };
    let result = RunResult::new(
        "evo-cut-directed",
        &g,
        a.common.seed_vertex,
        params,
        pair.as_ref().map(|p| (&p.l, &p.r)),
        ms,
        Some(a.rng_seed),
    );
    report(result, &a.common)
}

fn eval(a: EvalArgs) -> localpair::Result<()> {
    let text = std::fs::read_to_string(&a.output)?;
    let mut result = RunResult::from_json(&text)?;
    let truth = io::load_labels(&a.labels, result.graph.n)?;
    let targets = a.target_labels.unwrap_or_else(|| default_targets(result.graph.directed, &truth));
    result.evaluate(&truth, targets)?;
    let e = result.evaluation.as_ref().expect("just evaluated");
    outln!("target_labels: {},{}", targets.0, targets.1);
    outln!("ari: {:.6}", e.ari);
    match e.misclassified_ratio {
        Some(m) => outln!("misclassified_ratio: {m:.6}"),
        None => outln!("misclassified_ratio: n/a (empty output)"),
    }
    Ok(())
}

fn cover_label(i: usize) -> String {
    let v = CoverVertex::from_index(i);
    v.to_string()
}

fn oracle_cmd(cmd: OracleCmd) -> localpair::Result<()> {
    match cmd {
        OracleCmd::Pagerank { graph, directed, seed_vertex, side, alpha } => {
            let g: Graph = io::load_edge_list(&graph, directed)?;
            g.check_vertex(seed_vertex)?;
            let side = match side {
                SideArg::Two => Side::Second,
                _ => Side::First,
            };
            let s = DenseVector::indicator(2 * g.n(), CoverVertex::new(seed_vertex, side));
            let pr = oracle::exact_pagerank(&g, true, alpha, &s)?;
            let entries: Vec<_> = pr
                .0
                .iter()
                .enumerate()
                .filter(|(_, &x)| x != 0.0)
                .map(|(i, &x)| json!({ "vertex": cover_label(i), "mass": x }))
                .collect();
            outln!("{}", serde_json::to_string_pretty(&json!({ "alpha": alpha, "pagerank": entries }))?);
        }
        OracleCmd::Kernel { graph, directed, set } => {
            let g: Graph = io::load_edge_list(&graph, directed)?;
            let row = oracle::exact_esp_kernel(&g, &set)?;
            let rows: Vec<_> = row
                .iter()
                .map(|e| {
                    let members: Vec<String> = e.set.iter().map(|v| v.to_string()).collect();
                    json!({ "set": members, "k": e.k, "k_hat": e.k_hat, "volume": e.volume })
                })
                .collect();
            outln!("{}", serde_json::to_string_pretty(&json!({ "kernel": rows }))?);
        }
        OracleCmd::LsCurve { graph, seed_vertex, alpha, epsilon, simplify: simple } => {
            let g: Graph = io::load_edge_list(&graph, false)?;
            let apr = approximate_pagerank_dc(&g, seed_vertex, alpha, epsilon)?;
            let p = if simple { simplify(&apr.p) } else { apr.p };
            let curve = oracle::ls_curve(&p, &g)?;
            outln!("{}", serde_json::to_string_pretty(&json!({ "points": curve.points }))?);
        }
    }
    Ok(())
}

fn bench(cmd: BenchCmd) -> localpair::Result<()> {
    match cmd {
        BenchCmd::Table1 { n1, p1, q1, runs, rng_seed, beta_hat, gamma, first_sweep, json } => {
            let p1 = p1.unwrap_or(1.0 / n1 as f64);
            let q1 = q1.unwrap_or(18.0 / n1 as f64);
            let params = match gamma {
                Some(gamma) => BipartParams::Targets { gamma, beta_hat },
                None => BipartParams::PlantedVolume { beta_hat },
            };
            let spec = Table1Spec {
                sbm: SbmSpec::new(n1, p1, q1),
                runs,
                seed: rng_seed,
                params,
                sweep: if first_sweep { SweepMode::First } else { SweepMode::Best },
            };
            let rep = run_table1(&spec)?;
            if json {
                outln!("{}", serde_json::to_string_pretty(&rep)?);
                return Ok(());
            }
            outln!("SBM n1={n1} p1={p1} q1={q1}, {runs} runs, found {}/{runs}", rep.found_runs);
            outln!("{:<22}{:>12}{:>14}", "metric", "measured", "target");
            outln!("{:<22}{:>12.3}{:>14}", "ARI", rep.mean_ari, ">= 0.90");
            match rep.mean_beta {
                Some(b) => outln!("{:<22}{:>12.3}{:>14}", "beta-value", b, "<= 0.25"),
                None => outln!("{:<22}{:>12}{:>14}", "beta-value", "n/a", "<= 0.25"),
            }
            outln!("{:<22}{:>12.3}{:>14}", "misclassified ratio", rep.mean_misclassified, "<= 0.15");
            outln!("{:<22}{:>12.1}", "mean runtime (ms)", rep.mean_runtime_ms);
        }
        BenchCmd::Table2 { cbm, n_prime, runs, rng_seed, phi, json } => {
            let spec = Table2Spec {
                cbm_plus: CbmPlusSpec { cbm: cbm.spec(), n_prime, ..CbmPlusSpec::default() },
                runs,
                seed: rng_seed,
                params: DirectedParams::Phi(phi),
                side: SideChoice::Both,
            };
            let rep = run_table2(&spec)?;
            if json {
                outln!("{}", serde_json::to_string_pretty(&rep)?);
                return Ok(());
            }
            outln!(
                "CBM+ k={} n={} n'={n_prime}, phi={phi} (T = {}), {runs} runs, found {}/{runs}",
                cbm.k,
                cbm.n,
                steps_for_phi(phi)?,
                rep.found_runs
            );
            outln!("{:<22}{:>12}{:>14}", "metric", "measured", "target");
            outln!("{:<22}{:>12.3}{:>14}", "ARI", rep.mean_ari, ">= 0.90");
            match rep.mean_flow {
                Some(f) => outln!("{:<22}{:>12.4}", "flow ratio", f),
                None => outln!("{:<22}{:>12}", "flow ratio", "n/a"),
            }
            outln!("{:<22}{:>12.1}", "mean runtime (ms)", rep.mean_runtime_ms);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Generate(cmd) => generate(cmd),
        Command::ClusterBipartite(a) => cluster_bipartite(a),
        Command::ClusterDirected(a) => cluster_directed(a),
        Command::Eval(a) => eval(a),
        Command::Oracle(cmd) => oracle_cmd(cmd),
        Command::Bench(cmd) => bench(cmd),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
