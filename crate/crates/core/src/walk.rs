//! Seeded Monte Carlo simulation of random walks.
//!
//! Trial `i` of an estimate with seed `s` draws from [`stream_rng`]`(s, i)`
//! (for a worst-case sweep, start `u` uses streams `u·trials + i`), and trial
//! results are folded in index order. Estimates are therefore bit-identical
//! for any worker count.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use ordered_float::OrderedFloat;
use rand::Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::Distribution;
use serde::Serialize;

use crate::electrical::matthews_upper;
use crate::error::{Error, Result};
use crate::exact::{exact_cover_times, exact_hitting, TransitionKernel, COVER_DP_CAP};
use crate::graph::Graph;
use crate::par::Executor;
use crate::rng::{stream_rng, WalkRng};
use crate::weighting::Scheme;

/// Default per-trial step budget.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Vertices with more incident edge ends than this sample through an alias table.
pub const ALIAS_THRESHOLD: usize = 8;

/// When a trial ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopCriterion {
    /// Every vertex visited.
    Cover,
    /// The walk stands on this vertex.
    Hit(usize),
    /// `N_v(t) > δ π_v t` for every `v`; `δ = 0` is the cover time.
    Blanket(f64),
    /// `N_v(t) ≥ π_v · reference` for every `v`, with `reference` a cover-time value.
    BlanketCover { reference: f64 },
    /// A fixed number of steps.
    Steps(u64),
}

impl StopCriterion {
    pub fn quantity(&self) -> String {
        match self {
            StopCriterion::Cover => "cover".into(),
            StopCriterion::Hit(v) => format!("hit:{v}"),
            StopCriterion::Blanket(d) => format!("blanket:{d}"),
            StopCriterion::BlanketCover { .. } => "blanket-cover".into(),
            StopCriterion::Steps(t) => format!("steps:{t}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Start {
    Vertex(usize),
    /// Estimate from every start and keep the largest mean.
    WorstCaseSweep,
}

/// What to simulate. The graph is walked with its stored weights; `scheme`
/// only labels the output, so reweight the graph before building the config.
#[derive(Debug, Clone)]
pub struct WalkConfig<'a> {
    pub graph: &'a Graph,
    pub graph_id: String,
    pub scheme: Scheme,
    pub lazy: bool,
    pub start: Start,
    pub stop: StopCriterion,
    pub budget: u64,
}

impl<'a> WalkConfig<'a> {
    pub fn new(graph: &'a Graph, stop: StopCriterion) -> Self {
        WalkConfig {
            graph,
            graph_id: "graph".into(),
            scheme: Scheme::Uniform,
            lazy: false,
            start: Start::Vertex(0),
            stop,
            budget: DEFAULT_BUDGET,
        }
    }

    pub fn scheme_tag(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn lazy(mut self, lazy: bool) -> Self {
        self.lazy = lazy;
        self
    }

    pub fn start(mut self, start: Start) -> Self {
        self.start = start;
        self
    }

    pub fn budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn graph_id(mut self, id: impl Into<String>) -> Self {
        self.graph_id = id.into();
        self
    }

    fn validate(&self) -> Result<()> {
        let g = self.graph;
        if g.n() == 0 {
            return Err(Error::Parameter("graph has no vertices".into()));
        }
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        if g.n() > 1 {
            if let Some(v) = (0..g.n()).find(|&v| g.degrees()[v] == 0) {
                return Err(Error::ZeroDegree(v));
            }
        }
        if let Start::Vertex(v) = self.start {
            g.check_vertex(v)?;
        }
        match self.stop {
            StopCriterion::Hit(v) => g.check_vertex(v)?,
            StopCriterion::Blanket(d) if !(0.0..1.0).contains(&d) => {
                return Err(Error::Parameter(format!("blanket δ must lie in [0, 1), got {d}")))
            }
            StopCriterion::BlanketCover { reference } if !(reference > 0.0 && reference.is_finite()) => {
                return Err(Error::Parameter(format!("reference cover value must be positive, got {reference}")))
            }
            _ => {}
        }
        Ok(())
    }
}

enum Row {
    Uniform,
    Scan,
    Alias(WeightedAliasIndex<f64>),
}

/// Per-vertex next-step sampler over incident edge ends.
pub struct Sampler {
    offset: Vec<usize>,
    target: Vec<usize>,
    weight: Vec<f64>,
    total: Vec<f64>,
    rows: Vec<Row>,
    lazy: bool,
}

impl Sampler {
    pub fn new(g: &Graph, lazy: bool) -> Result<Self> {
        let n = g.n();
        let mut offset = Vec::with_capacity(n + 1);
        let (mut target, mut weight) = (Vec::new(), Vec::new());
        let mut rows = Vec::with_capacity(n);
        offset.push(0);
        for v in 0..n {
            let start = target.len();
            for (u, w) in g.edge_ends(v) {
                target.push(u);
                weight.push(w);
            }
            offset.push(target.len());
            let ws = &weight[start..];
            rows.push(if ws.iter().all(|&w| w == ws[0]) {
                Row::Uniform
            } else if ws.len() > ALIAS_THRESHOLD {
                Row::Alias(WeightedAliasIndex::new(ws.to_vec()).map_err(|e| Error::Numeric(e.to_string()))?)
            } else {
                Row::Scan
            });
        }
        Ok(Sampler {
            offset,
            target,
            weight,
            total: g.weighted_degrees().to_vec(),
            rows,
            lazy,
        })
    }

    #[inline]
    pub fn step(&self, v: usize, rng: &mut WalkRng) -> usize {
        if self.lazy && rng.random_bool(0.5) {
            return v;
        }
        let (lo, hi) = (self.offset[v], self.offset[v + 1]);
        if lo == hi {
            return v;
        }
        match &self.rows[v] {
            Row::Uniform => self.target[lo + rng.random_range(0..hi - lo)],
            Row::Alias(table) => self.target[lo + table.sample(rng)],
            Row::Scan => {
                let mut r = rng.random::<f64>() * self.total[v];
                for i in lo..hi {
                    r -= self.weight[i];
                    if r < 0.0 {
                        return self.target[i];
                    }
                }
                self.target[hi - 1]
            }
        }
    }
}

/// One simulated walk.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub steps: u64,
    /// `N_v(t)`: visits to `v` at times `0..=t`.
    pub visits: Vec<u64>,
    /// The step budget ran out before the stop criterion held.
    pub censored: bool,
}

fn stationary_of(g: &Graph) -> Vec<f64> {
    let total = g.total_weight();
    if total == 0.0 {
        return vec![1.0];
    }
    g.weighted_degrees().iter().map(|c| c / total).collect()
}

struct Walker<'a> {
    sampler: &'a Sampler,
    pi: &'a [f64],
    stop: StopCriterion,
    budget: u64,
}

impl Walker<'_> {
    fn run(&self, start: usize, rng: &mut WalkRng) -> TrialOutcome {
        let n = self.pi.len();
        let mut visits = vec![0u64; n];
        visits[start] = 1;
        let mut v = start;
        let mut t = 0u64;
        let mut seen = 1usize;
        let done = |t: u64, v: usize, seen: usize, visits: &[u64], heap: &mut BinaryHeap<_>| match self.stop {
            StopCriterion::Cover => seen == n,
            StopCriterion::Hit(x) => v == x,
            StopCriterion::Steps(k) => t >= k,
            StopCriterion::Blanket(d) => seen == n && blanket_holds(heap, visits, self.pi, d, t),
            StopCriterion::BlanketCover { .. } => false,
        };
        // Blanket bookkeeping: min-heap of deadlines N_v / (δ π_v), lazily pruned.
        let mut heap: BinaryHeap<Reverse<(OrderedFloat<f64>, usize)>> = BinaryHeap::new();
        let delta = match self.stop {
            StopCriterion::Blanket(d) => d,
            _ => 0.0,
        };
        let track_heap = delta > 0.0;
        if track_heap {
            heap.push(Reverse((OrderedFloat(deadline(1, self.pi[start], delta)), start)));
        }
        // Blanket-cover bookkeeping: vertices still short of their target.
        let targets: Vec<f64> = match self.stop {
            StopCriterion::BlanketCover { reference } => self.pi.iter().map(|p| p * reference).collect(),
            _ => Vec::new(),
        };
        let mut short = targets.iter().filter(|&&x| x > 0.0).count();
        if !targets.is_empty() && (visits[start] as f64) >= targets[start] && targets[start] > 0.0 {
            short -= 1;
        }
        let blanket_cover = !targets.is_empty();

        loop {
            let finished = if blanket_cover { short == 0 } else { done(t, v, seen, &visits, &mut heap) };
            if finished {
                return TrialOutcome { steps: t, visits, censored: false };
            }
            if t >= self.budget {
                return TrialOutcome { steps: t, visits, censored: true };
            }
            v = self.sampler.step(v, rng);
            t += 1;
            let before = visits[v];
            visits[v] += 1;
            if before == 0 {
                seen += 1;
            }
            if track_heap {
                heap.push(Reverse((OrderedFloat(deadline(visits[v], self.pi[v], delta)), v)));
            }
            if blanket_cover && targets[v] > 0.0 && (before as f64) < targets[v] && (visits[v] as f64) >= targets[v] {
                short -= 1;
            }
        }
    }
}

fn deadline(visits: u64, pi: f64, delta: f64) -> f64 {
    visits as f64 / (delta * pi)
}

/// `N_v(t) > δ π_v t` for all (visited) `v`, checking only the vertex with
/// the earliest deadline.
fn blanket_holds(
    heap: &mut BinaryHeap<Reverse<(OrderedFloat<f64>, usize)>>,
    visits: &[u64],
    pi: &[f64],
    delta: f64,
    t: u64,
) -> bool {
    if delta == 0.0 {
        return true;
    }
    while let Some(&Reverse((d, v))) = heap.peek() {
        if d.0 != deadline(visits[v], pi[v], delta) {
            heap.pop();
            continue;
        }
        return visits[v] as f64 > delta * pi[v] * t as f64;
    }
    true
}

/// Run trial `trial` of `config` from `start`. The stream is
/// `stream_rng(seed, trial)`.
pub fn simulate(config: &WalkConfig, start: usize, seed: u64, trial: u64) -> Result<TrialOutcome> {
    config.validate()?;
    config.graph.check_vertex(start)?;
    let sampler = Sampler::new(config.graph, config.lazy)?;
    let pi = stationary_of(config.graph);
    let walker = Walker {
        sampler: &sampler,
        pi: &pi,
        stop: config.stop,
        budget: config.budget,
    };
    Ok(walker.run(start, &mut stream_rng(seed, trial)))
}

/// Aggregated Monte Carlo estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateRecord {
    pub quantity: String,
    pub graph_id: String,
    pub scheme: Scheme,
    /// Start vertex, or `worst:<v>` for a sweep.
    pub start: String,
    /// Uncensored trials contributing to the mean.
    pub trials: u64,
    pub seed: u64,
    pub mean: f64,
    /// Unbiased sample variance (0 for a single trial).
    pub variance: f64,
    /// Trials that exhausted the step budget.
    pub censored: u64,
}

/// Header matching [`EstimateRecord::csv_row`].
pub const ESTIMATE_CSV_HEADER: &str = "quantity,graph_id,scheme,start,trials,seed,mean,stderr,censored";

impl EstimateRecord {
    pub fn stderr(&self) -> f64 {
        (self.variance / self.trials as f64).sqrt()
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.quantity,
            self.graph_id,
            self.scheme,
            self.start,
            self.trials,
            self.seed,
            self.mean,
            self.stderr(),
            self.censored
        )
    }

    /// `|mean − value|` in standard errors.
    pub fn z_score(&self, value: f64) -> f64 {
        (self.mean - value) / self.stderr()
    }
}

/// Welford accumulator (count, mean, M2).
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Moments {
    pub(crate) count: u64,
    pub(crate) mean: f64,
    m2: f64,
}

impl Moments {
    pub(crate) fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    pub(crate) fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }
}

fn run_trials(config: &WalkConfig, start: usize, trials: u64, seed: u64, first_stream: u64, exec: Executor) -> Result<(Moments, u64)> {
    let sampler = Sampler::new(config.graph, config.lazy)?;
    let pi = stationary_of(config.graph);
    let walker = Walker {
        sampler: &sampler,
        pi: &pi,
        stop: config.stop,
        budget: config.budget,
    };
    let outcomes = exec.map_indexed(trials as usize, |i| {
        let o = walker.run(start, &mut stream_rng(seed, first_stream + i as u64));
        (o.steps, o.censored)
    });
    let mut moments = Moments::default();
    let mut censored = 0;
    for (steps, cens) in outcomes {
        if cens {
            censored += 1;
        } else {
            moments.push(steps as f64);
        }
    }
    Ok((moments, censored))
}

/// Estimate the stopping time of `config` over `trials` seeded trials.
pub fn estimate(config: &WalkConfig, trials: u64, seed: u64, exec: Executor) -> Result<EstimateRecord> {
    config.validate()?;
    if trials == 0 {
        return Err(Error::Parameter("need at least one trial".into()));
    }
    let (start, moments, censored) = match config.start {
        Start::Vertex(s) => {
            let (m, c) = run_trials(config, s, trials, seed, 0, exec)?;
            (s.to_string(), m, c)
        }
        Start::WorstCaseSweep => {
            let mut best: Option<(usize, Moments, u64)> = None;
            for s in 0..config.graph.n() {
                let (m, c) = run_trials(config, s, trials, seed, s as u64 * trials, exec)?;
                if m.count > 0 && best.as_ref().is_none_or(|b| m.mean > b.1.mean) {
                    best = Some((s, m, c));
                }
            }
            match best {
                Some((s, m, c)) => (format!("worst:{s}"), m, c),
                None => (String::from("worst"), Moments::default(), trials),
            }
        }
    };
    if moments.count == 0 {
        return Err(Error::Numeric(format!(
            "all {censored} trials exhausted the step budget of {}",
            config.budget
        )));
    }
    Ok(EstimateRecord {
        quantity: config.stop.quantity(),
        graph_id: config.graph_id.clone(),
        scheme: config.scheme,
        start,
        trials: moments.count,
        seed,
        mean: moments.mean,
        variance: moments.variance(),
        censored,
    })
}

/// Cover time from `config.start`.
pub fn estimate_cover(config: &WalkConfig, trials: u64, seed: u64, exec: Executor) -> Result<EstimateRecord> {
    let mut c = config.clone();
    c.stop = StopCriterion::Cover;
    estimate(&c, trials, seed, exec)
}

/// Hitting time of `target` from `config.start`.
pub fn estimate_hitting(config: &WalkConfig, target: usize, trials: u64, seed: u64, exec: Executor) -> Result<EstimateRecord> {
    let mut c = config.clone();
    c.stop = StopCriterion::Hit(target);
    estimate(&c, trials, seed, exec)
}

/// Blanket time with parameter `delta`.
pub fn estimate_blanket(config: &WalkConfig, delta: f64, trials: u64, seed: u64, exec: Executor) -> Result<EstimateRecord> {
    let mut c = config.clone();
    c.stop = StopCriterion::Blanket(delta);
    estimate(&c, trials, seed, exec)
}

/// Reference cover value for blanket-cover runs: the exact worst-start cover
/// time when the oracle applies, otherwise the hitting-time upper bound.
pub fn reference_cover_value(g: &Graph, exec: Executor) -> Result<f64> {
    let k = TransitionKernel::from_graph(g, false)?;
    if g.n() <= COVER_DP_CAP {
        Ok(exact_cover_times(&k, exec)?.into_iter().fold(0.0, f64::max))
    } else {
        Ok(matthews_upper(&exact_hitting(&k, exec)?))
    }
}

/// Fraction of time spent at each vertex over `steps` steps from `start`.
pub fn visit_frequencies(g: &Graph, lazy: bool, start: usize, steps: u64, seed: u64) -> Result<Vec<f64>> {
    let config = WalkConfig::new(g, StopCriterion::Steps(steps)).lazy(lazy).start(Start::Vertex(start));
    let o = simulate(&config, start, seed, 0)?;
    let total = (o.steps + 1) as f64;
    Ok(o.visits.iter().map(|&c| c as f64 / total).collect())
}

/// Result of the random-walk s-t connectivity test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StConnectivity {
    /// `true` only if the walk reached `t`.
    pub connected: bool,
    pub steps: u64,
    /// `8nm`.
    pub budget: u64,
}

/// Walk from `s` for at most `8nm` steps and report whether `t` was reached.
/// A `false` answer is wrong with probability at most 1/2.
pub fn st_connectivity(g: &Graph, s: usize, t: usize, seed: u64) -> Result<StConnectivity> {
    st_connectivity_run(g, s, t, seed, 0)
}

/// [`st_connectivity`] on stream `run` of `seed`, for independent repeats.
pub fn st_connectivity_run(g: &Graph, s: usize, t: usize, seed: u64, run: u64) -> Result<StConnectivity> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    let budget = 8 * g.n() as u64 * g.m() as u64;
    if s == t {
        return Ok(StConnectivity { connected: true, steps: 0, budget });
    }
    if g.degrees()[s] == 0 {
        return Ok(StConnectivity { connected: false, steps: budget, budget });
    }
    let sampler = Sampler::new(g, false)?;
    let mut rng = stream_rng(seed, run);
    let mut v = s;
    for step in 1..=budget {
        v = sampler.step(v, &mut rng);
        if v == t {
            return Ok(StConnectivity { connected: true, steps: step, budget });
        }
    }
    Ok(StConnectivity { connected: false, steps: budget, budget })
}
