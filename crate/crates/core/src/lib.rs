//! Local algorithms for finding densely connected cluster pairs.
//!
//! Undirected graphs: [`loc_bipart_dc`] runs approximate Pagerank on the double
//! cover, simplifies it and sweeps for a pair `(L, R)` with small bipartiteness.
//! Digraphs: [`evo_cut_directed`] samples a volume-biased evolving set on the
//! semi-double cover and reads off a pair with small flow ratio.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix `f64`.

pub mod cover;
pub mod error;
pub mod esp;
pub mod experiment;
pub mod generators;
pub mod graph;
pub mod io;
pub mod metrics;
pub mod oracle;
pub mod pagerank;
pub mod scalar;

pub use cover::{conductance_in_cover, Cover, CoverKind, CoverSet, CoverVertex, Side};
pub use error::{Error, Result};
pub use esp::{evo_cut_directed, evo_cut_directed_both, generate_sample, DirectedClusterPair, EspState, SideChoice};
pub use generators::{gen_cbm, gen_cbm_plus, gen_sbm, CbmPlusSpec, CbmSpec, SbmSpec};
pub use graph::{GraphBuilder, VertexSet, WeightedGraph};
pub use metrics::{ari, misclassified_ratio, Labeling};
pub use pagerank::{
    approximate_pagerank_dc, loc_bipart_dc, loc_bipart_dc_with, simplify, sweep_cut, guarantee_beta_hat,
    ApproxPagerank, ClusterPair, LocBipartConfig, MassVector, SweepMode,
};
pub use scalar::Scalar;

pub type Graph = WeightedGraph<f64>;
pub type Mass = MassVector<f64>;
pub type Pair = ClusterPair<f64>;
pub type DirectedPair = DirectedClusterPair<f64>;
