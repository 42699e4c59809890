//! Degree-based edge weighting schemes for weighted random walks.
//!
//! - uniform: every edge weight 1 (the simple random walk)
//! - ikeda: `w(u,v) = 1 / sqrt(d(u) d(v))`
//! - mindeg: `w(u,v) = 1 / min(d(u), d(v))`
//!
//! Schemes are only defined on simple graphs; anything else is rejected.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{exact_hitting, TransitionKernel};
use crate::graph::Graph;
use crate::par::Executor;
use crate::rng::stream_rng;
use crate::walk::{estimate, EstimateRecord, Start, StopCriterion, WalkConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    #[default]
    Uniform,
    Ikeda,
    Mindeg,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [Scheme::Uniform, Scheme::Ikeda, Scheme::Mindeg];

    /// Weight of edge `(u, v)` given the endpoint degrees.
    pub fn weight(self, du: usize, dv: usize) -> f64 {
        match self {
            Scheme::Uniform => 1.0,
            Scheme::Ikeda => 1.0 / ((du * dv) as f64).sqrt(),
            Scheme::Mindeg => 1.0 / du.min(dv) as f64,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Uniform => "uniform",
            Scheme::Ikeda => "ikeda",
            Scheme::Mindeg => "mindeg",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "uniform" => Ok(Scheme::Uniform),
            "ikeda" => Ok(Scheme::Ikeda),
            "mindeg" | "min-deg" => Ok(Scheme::Mindeg),
            other => Err(Error::Parameter(format!("unknown scheme `{other}`"))),
        }
    }
}

/// Reweight a simple graph by `scheme`. Existing weights are discarded.
pub fn apply_scheme(g: &Graph, scheme: Scheme) -> Result<Graph> {
    if !g.is_simple() {
        return Err(Error::Unsupported(format!(
            "the {scheme} scheme is only defined on simple graphs"
        )));
    }
    let deg = g.degrees();
    g.reweighted(|e| scheme.weight(deg[e.u], deg[e.v]))
}

/// Checks of the min-deg scheme's guarantees on one graph.
#[derive(Debug, Clone, Serialize)]
pub struct MindegReport {
    pub n: usize,
    /// `w(G) = 2 Σ w(e)`.
    pub total_weight: f64,
    pub total_weight_in_range: bool,
    /// `min_u w(u)`; must be at least 1.
    pub min_vertex_weight: f64,
    /// Every edge satisfies `w ≤ 1/d(u) + 1/d(v) ≤ 2w`.
    pub edge_sandwich_holds: bool,
    pub max_hitting: f64,
    pub hitting_cap: f64,
    pub hitting_within_cap: bool,
    pub paths_checked: usize,
    pub max_path_degree_sum: usize,
    pub path_degree_sum_within_3n: bool,
    /// `max_hitting · h(n)`, the resulting cover-time bound.
    pub cover_bound: f64,
}

impl MindegReport {
    pub fn all_hold(&self) -> bool {
        self.total_weight_in_range
            && self.min_vertex_weight >= 1.0 - 1e-12
            && self.edge_sandwich_holds
            && self.hitting_within_cap
            && self.path_degree_sum_within_3n
    }
}

/// Evaluate the min-deg invariants: `n ≤ w(G) ≤ 2n`, `w(u) ≥ 1`, exact max
/// hitting time `≤ 6n²`, and `Σ d(x_i) ≤ 3n` along `paths` random shortest paths.
pub fn mindeg_invariant_report(g: &Graph, paths: usize, seed: u64) -> Result<MindegReport> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.n();
    let weighted = apply_scheme(g, Scheme::Mindeg)?;
    let total_weight = weighted.total_weight();
    let deg = g.degrees();
    let edge_sandwich_holds = weighted.edges().iter().all(|e| {
        let mid = 1.0 / deg[e.u] as f64 + 1.0 / deg[e.v] as f64;
        e.weight <= mid + 1e-15 && mid <= 2.0 * e.weight + 1e-15
    });
    let min_vertex_weight = weighted
        .weighted_degrees()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);

    let kernel = TransitionKernel::from_graph(&weighted, false)?;
    let hitting = exact_hitting(&kernel, Executor::default())?;
    let max_hitting = hitting.max();
    let hitting_cap = 6.0 * (n * n) as f64;

    let mut rng = stream_rng(seed, 0);
    let mut max_path_degree_sum = 0;
    for _ in 0..paths {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        let sum: usize = g.shortest_path(u, v)?.iter().map(|&x| deg[x]).sum();
        max_path_degree_sum = max_path_degree_sum.max(sum);
    }

    Ok(MindegReport {
        n,
        total_weight,
        total_weight_in_range: total_weight >= n as f64 - 1e-9 && total_weight <= 2.0 * n as f64 + 1e-9,
        min_vertex_weight,
        edge_sandwich_holds,
        max_hitting,
        hitting_cap,
        hitting_within_cap: max_hitting <= hitting_cap,
        paths_checked: paths,
        max_path_degree_sum,
        path_degree_sum_within_3n: max_path_degree_sum <= 3 * n,
        cover_bound: max_hitting * crate::harmonic(n),
    })
}

/// Cover-time speed-up of the min-deg walk over the simple walk.
#[derive(Debug, Clone, Serialize)]
pub struct Speedup {
    pub uniform: EstimateRecord,
    pub mindeg: EstimateRecord,
    /// `uniform.mean / mindeg.mean`.
    pub ratio: f64,
    /// Delta-method standard error of the ratio.
    pub ratio_stderr: f64,
}

impl Speedup {
    /// How many standard errors the ratio lies above 1.
    pub fn sigma_above_one(&self) -> f64 {
        (self.ratio - 1.0) / self.ratio_stderr
    }
}

/// Estimate `COV_uniform / COV_mindeg` from `start` with common seeds.
pub fn speedup(g: &Graph, start: usize, trials: u64, seed: u64, exec: Executor) -> Result<Speedup> {
    let weighted = apply_scheme(g, Scheme::Mindeg)?;
    let run = |graph: &Graph, scheme: Scheme| {
        let config = WalkConfig::new(graph, StopCriterion::Cover)
            .scheme_tag(scheme)
            .start(Start::Vertex(start));
        estimate(&config, trials, seed, exec)
    };
    let uniform = run(g, Scheme::Uniform)?;
    let mindeg = run(&weighted, Scheme::Mindeg)?;
    let ratio = uniform.mean / mindeg.mean;
    let rel = (uniform.stderr() / uniform.mean).powi(2) + (mindeg.stderr() / mindeg.mean).powi(2);
    Ok(Speedup {
        ratio_stderr: ratio * rel.sqrt(),
        ratio,
        uniform,
        mindeg,
    })
}
