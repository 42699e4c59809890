//! Configuration-model random graphs for a prescribed degree sequence.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::par::Executor;
use crate::rng::stream_rng;
use crate::walk::{simulate, EstimateRecord, Moments, StopCriterion, WalkConfig};

/// A degree sequence with an even sum.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSequence {
    d: Vec<usize>,
}

impl DegreeSequence {
    pub fn new(d: Vec<usize>) -> Result<Self> {
        if d.is_empty() {
            return Err(Error::Parameter("degree sequence is empty".into()));
        }
        if let Some(i) = d.iter().position(|&x| x == 0) {
            return Err(Error::ZeroDegree(i));
        }
        let sum: usize = d.iter().sum();
        if sum % 2 == 1 {
            return Err(Error::OddDegreeSum(sum));
        }
        Ok(DegreeSequence { d })
    }

    /// `r`-regular on `n` vertices.
    pub fn regular(n: usize, r: usize) -> Result<Self> {
        Self::new(vec![r; n])
    }

    /// One integer per line; blank lines and `#` comments are skipped.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut d = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            d.push(line.parse().map_err(|_| Error::Parse {
                line: i + 1,
                message: format!("expected a degree, found `{line}`"),
            })?);
        }
        Self::new(d)
    }

    pub fn degrees(&self) -> &[usize] {
        &self.d
    }

    pub fn n(&self) -> usize {
        self.d.len()
    }

    pub fn m(&self) -> usize {
        self.d.iter().sum::<usize>() / 2
    }

    /// Average degree `θ = 2m/n`.
    pub fn theta(&self) -> f64 {
        2.0 * self.m() as f64 / self.n() as f64
    }

    pub fn min(&self) -> usize {
        self.d.iter().copied().min().unwrap_or(0)
    }

    pub fn max(&self) -> usize {
        self.d.iter().copied().max().unwrap_or(0)
    }

    /// `n_j` for every degree `j` that occurs.
    pub fn counts(&self) -> BTreeMap<usize, usize> {
        let mut c = BTreeMap::new();
        for &x in &self.d {
            *c.entry(x).or_insert(0) += 1;
        }
        c
    }

    /// `ν = Σ d_i (d_i − 1) / (2m)`.
    pub fn nu(&self) -> f64 {
        self.d.iter().map(|&x| (x * (x - 1)) as f64).sum::<f64>() / (2 * self.m()) as f64
    }

    /// Asymptotic probability that a configuration is simple,
    /// `exp(−ν/2 − ν²/4)`.
    pub fn predicted_p_simple(&self) -> f64 {
        let nu = self.nu();
        (-nu / 2.0 - nu * nu / 4.0).exp()
    }

    /// `max(1000, ⌈20 / p⌉)` with `p` the predicted acceptance rate.
    pub fn default_max_tries(&self) -> usize {
        let p = self.predicted_p_simple();
        1000usize.max((20.0 / p).ceil().min(1e12) as usize)
    }

    /// `Δ = o(m^{1/3})` is needed for the simplicity estimate; this flags
    /// sequences where `Δ³ ≥ m`.
    pub fn max_degree_flagged(&self) -> bool {
        (self.max() as f64).powi(3) >= self.m() as f64
    }
}

/// Uniform perfect matching of the `2m` stubs: shuffle, then pair neighbours.
/// Uses stream 0 of `seed`.
pub fn sample_configuration(d: &DegreeSequence, seed: u64) -> Result<Graph> {
    configuration_from_stream(d, seed, 0)
}

fn configuration_from_stream(d: &DegreeSequence, seed: u64, stream: u64) -> Result<Graph> {
    let mut stubs: Vec<usize> = d.d.iter().enumerate().flat_map(|(v, &k)| std::iter::repeat_n(v, k)).collect();
    stubs.shuffle(&mut stream_rng(seed, stream));
    Graph::from_unit_edges(d.n(), stubs.chunks_exact(2).map(|p| (p[0], p[1])))
}

/// A simple graph drawn by rejection.
#[derive(Debug, Clone)]
pub struct SimpleSample {
    pub graph: Graph,
    /// Configurations drawn, including the accepted one.
    pub attempts: usize,
}

/// Draw configurations (stream `i` for attempt `i`) until one is simple.
/// Conditioned on simplicity the result is uniform over simple graphs with
/// degree sequence `d`.
pub fn sample_simple(d: &DegreeSequence, seed: u64, max_tries: Option<usize>) -> Result<SimpleSample> {
    let max_tries = max_tries.unwrap_or_else(|| d.default_max_tries());
    for attempt in 0..max_tries {
        let g = configuration_from_stream(d, seed, attempt as u64)?;
        if g.is_simple() {
            return Ok(SimpleSample {
                graph: g,
                attempts: attempt + 1,
            });
        }
    }
    Err(Error::RejectionFailure {
        attempts: max_tries,
        acceptance_rate: 0.0,
    })
}

/// Fraction of `attempts` configurations (streams `0..attempts`) that are simple.
pub fn empirical_p_simple(d: &DegreeSequence, attempts: usize, seed: u64, exec: Executor) -> Result<f64> {
    if attempts == 0 {
        return Err(Error::Parameter("need at least one attempt".into()));
    }
    let simple = exec
        .map_indexed(attempts, |i| configuration_from_stream(d, seed, i as u64).map(|g| g.is_simple()))
        .into_iter()
        .collect::<Result<Vec<bool>>>()?;
    Ok(simple.iter().filter(|&&s| s).count() as f64 / attempts as f64)
}

/// Smallest degree `j` with `n_j ≥ fraction · n`.
pub fn effective_min_degree(d: &DegreeSequence, fraction: f64) -> Option<usize> {
    let need = fraction * d.n() as f64;
    d.counts().into_iter().find(|&(_, c)| c as f64 >= need).map(|(j, _)| j)
}

/// Finite-`n` readings of the asymptotic niceness conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NiceParams {
    /// Lower bound on `n_d / n` in condition (iv).
    pub alpha: f64,
    /// Exponent constant, `0 < κ < 1/11`.
    pub kappa: f64,
    /// Threshold multiplier for the upper tail in (vi); `None` uses `ln ln n`.
    pub gamma: Option<f64>,
    /// `θ ≤ theta_slack · √(ln n)` stands in for `θ = o(√log n)`.
    pub theta_slack: f64,
    /// Constant used for every `O(·)`.
    pub big_o: f64,
    /// Degree `j` counts as occurring `Θ(n)` times when `n_j ≥ fraction · n`.
    pub effective_fraction: f64,
}

impl Default for NiceParams {
    fn default() -> Self {
        NiceParams {
            alpha: 0.05,
            kappa: 1.0 / 12.0,
            gamma: None,
            theta_slack: 4.0,
            big_o: 8.0,
            effective_fraction: 0.01,
        }
    }
}

/// One checked condition: `observed ≤ limit` (or `≥` where noted).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Condition {
    pub holds: bool,
    pub observed: f64,
    pub limit: f64,
}

impl Condition {
    fn at_most(observed: f64, limit: f64) -> Self {
        Condition {
            holds: observed <= limit,
            observed,
            limit,
        }
    }

    fn at_least(observed: f64, limit: f64) -> Self {
        Condition {
            holds: observed >= limit,
            observed,
            limit,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NicenessReport {
    pub n: usize,
    pub theta: f64,
    pub min_degree: usize,
    pub max_degree: usize,
    pub effective_min_degree: Option<usize>,
    pub gamma: f64,
    pub params: NiceParams,
    /// (i) average degree
    pub average_degree: Condition,
    /// (ii) `δ ≥ 3`
    pub min_degree_at_least_3: Condition,
    /// (iii) worst `n_i / n^{κi/d}` for `δ ≤ i < d`, against the constant
    pub low_degree_counts: Condition,
    /// (iv) `n_d / n ≥ α`
    pub effective_degree_share: Condition,
    /// (v) `Δ ≤ C n^{κ(d−1)/d}`
    pub max_degree_bound: Condition,
    /// (vi) `#{v : d_v ≥ γθ} ≤ C n^{κ(d−1)/d}`
    pub upper_tail: Condition,
    pub nice: bool,
}

/// Evaluate conditions (i)–(vi) under `params`.
pub fn check_nice(d: &DegreeSequence, params: &NiceParams) -> NicenessReport {
    let n = d.n();
    let nf = n as f64;
    let ln_n = nf.ln().max(0.0);
    let theta = d.theta();
    let gamma = params.gamma.unwrap_or_else(|| ln_n.max(1.0).ln().max(0.0));
    let counts = d.counts();
    let deff = effective_min_degree(d, params.effective_fraction);
    let c = params.big_o;

    let average_degree = Condition::at_most(theta, params.theta_slack * ln_n.sqrt());
    let min_degree_at_least_3 = Condition::at_least(d.min() as f64, 3.0);

    let (low, share, max_bound, tail) = match deff {
        Some(de) => {
            let def = de as f64;
            let worst_low = counts
                .range(d.min()..de)
                .map(|(&i, &ni)| ni as f64 / nf.powf(params.kappa * i as f64 / def))
                .fold(0.0, f64::max);
            let cap = c * nf.powf(params.kappa * (def - 1.0) / def);
            let tail_count = d.d.iter().filter(|&&x| x as f64 >= gamma * theta).count();
            (
                Condition::at_most(worst_low, c),
                Condition::at_least(counts[&de] as f64 / nf, params.alpha),
                Condition::at_most(d.max() as f64, cap),
                Condition::at_most(tail_count as f64, cap),
            )
        }
        None => {
            let fail = Condition {
                holds: false,
                observed: f64::NAN,
                limit: f64::NAN,
            };
            (fail, fail, fail, fail)
        }
    };
    let nice = [average_degree, min_degree_at_least_3, low, share, max_bound, tail]
        .iter()
        .all(|x| x.holds);
    NicenessReport {
        n,
        theta,
        min_degree: d.min(),
        max_degree: d.max(),
        effective_min_degree: deff,
        gamma,
        params: *params,
        average_degree,
        min_degree_at_least_3,
        low_degree_counts: low,
        effective_degree_share: share,
        max_degree_bound: max_bound,
        upper_tail: tail,
        nice,
    }
}

/// `(d−1)/(d−2) · θ/d · n ln n` with `d` the effective minimum degree.
pub fn predicted_cover(d: &DegreeSequence, fraction: f64) -> Result<f64> {
    let de = effective_min_degree(d, fraction).ok_or_else(|| Error::Parameter("no effective minimum degree".into()))?;
    if de < 3 {
        return Err(Error::Parameter(format!(
            "prediction needs effective minimum degree ≥ 3, got {de}"
        )));
    }
    let (de, n) = (de as f64, d.n() as f64);
    Ok((de - 1.0) / (de - 2.0) * d.theta() / de * n * n.ln())
}

/// Seed of the graph drawn for trial `t` of [`random_graph_cover`].
fn graph_seed(seed: u64, t: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(t)
}

/// Cover time from vertex 0 averaged over fresh simple graphs: trial `t`
/// draws its own graph and walks it on stream `t` of `seed`. Disconnected
/// draws are counted as censored.
pub fn random_graph_cover(d: &DegreeSequence, trials: u64, seed: u64, exec: Executor) -> Result<EstimateRecord> {
    if trials == 0 {
        return Err(Error::Parameter("need at least one trial".into()));
    }
    let outcomes = exec.map_indexed(trials as usize, |t| {
        let g = sample_simple(d, graph_seed(seed, t as u64), None)?.graph;
        if !g.is_connected() {
            return Ok(None);
        }
        let config = WalkConfig::new(&g, StopCriterion::Cover);
        simulate(&config, 0, seed, t as u64).map(|o| (!o.censored).then_some(o.steps as f64))
    });
    let mut moments = Moments::default();
    let mut censored = 0;
    for o in outcomes {
        match o? {
            Some(x) => moments.push(x),
            None => censored += 1,
        }
    }
    if moments.count == 0 {
        return Err(Error::Numeric("no trial produced a connected graph and a finished walk".into()));
    }
    Ok(EstimateRecord {
        quantity: StopCriterion::Cover.quantity(),
        graph_id: format!("configuration:n={}", d.n()),
        scheme: crate::Scheme::Uniform,
        start: "0".into(),
        trials: moments.count,
        seed,
        mean: moments.mean,
        variance: moments.variance(),
        censored,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_sequence_basics() {
        let d = DegreeSequence::new(vec![3, 3, 2, 2, 2]).unwrap();
        assert_eq!((d.n(), d.m(), d.min(), d.max()), (5, 6, 2, 3));
        assert!((d.theta() - 2.4).abs() < 1e-15);
        assert_eq!(DegreeSequence::new(vec![1, 2]).unwrap_err(), Error::OddDegreeSum(3));
        assert!(DegreeSequence::new(vec![]).is_err());
        assert_eq!(DegreeSequence::from_text("# r=2\n2\n2\n\n2\n").unwrap(), DegreeSequence::regular(3, 2).unwrap());
        assert!(matches!(DegreeSequence::from_text("2\nx\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn single_edge_and_degree_preservation() {
        let d = DegreeSequence::new(vec![1, 1]).unwrap();
        for s in 0..10 {
            let g = sample_configuration(&d, s).unwrap();
            assert_eq!(g.canonical_edges(), vec![(0, 1, 1.0)]);
        }
        let d = DegreeSequence::new(vec![5, 1, 3, 3, 2, 4, 2]).unwrap();
        for s in 0..50 {
            assert_eq!(sample_configuration(&d, s).unwrap().degrees(), d.degrees());
        }
    }

    #[test]
    fn two_two_matching_frequencies() {
        let d = DegreeSequence::new(vec![2, 2]).unwrap();
        let samples = 10_000;
        let double = (0..samples)
            .filter(|&s| !sample_configuration(&d, s).unwrap().has_loops())
            .count();
        assert!((double as f64 / samples as f64 - 2.0 / 3.0).abs() < 0.02);
    }

    #[test]
    fn rejection_cases() {
        let d = DegreeSequence::new(vec![1, 3]).unwrap();
        assert!(matches!(sample_simple(&d, 1, None), Err(Error::RejectionFailure { .. })));
        let k4 = sample_simple(&DegreeSequence::regular(4, 3).unwrap(), 2, None).unwrap();
        assert_eq!(k4.graph.canonical_edges().len(), 6);
        assert!(k4.graph.is_simple());
        let tri = sample_simple(&DegreeSequence::regular(3, 2).unwrap(), 2, None).unwrap();
        assert_eq!(tri.graph.m(), 3);
        assert!(tri.attempts >= 1);
    }

    #[test]
    fn nu_and_prediction() {
        assert!((DegreeSequence::regular(10, 4).unwrap().nu() - 3.0).abs() < 1e-12);
        let d = DegreeSequence::regular(10, 3).unwrap();
        assert!((d.predicted_p_simple() - (-2.0f64).exp()).abs() < 1e-15);
        let ones = DegreeSequence::regular(6, 1).unwrap();
        assert_eq!(ones.nu(), 0.0);
        assert_eq!(ones.predicted_p_simple(), 1.0);
        assert_eq!(d.default_max_tries(), 1000);
    }

    #[test]
    fn acceptance_rate_tracks_prediction() {
        let d = DegreeSequence::regular(100, 3).unwrap();
        let p = empirical_p_simple(&d, 10_000, 3, Executor::Parallel).unwrap();
        assert!((p - d.predicted_p_simple()).abs() < 0.02, "{p}");
    }

    #[test]
    fn uniform_over_simple_two_regular_on_four() {
        // three labelled 4-cycles
        let d = DegreeSequence::regular(4, 2).unwrap();
        let samples = 10_000u64;
        let mut counts: BTreeMap<Vec<(usize, usize)>, usize> = BTreeMap::new();
        for s in 0..samples {
            let g = sample_simple(&d, s, None).unwrap().graph;
            let key = g.canonical_edges().into_iter().map(|(u, v, _)| (u, v)).collect();
            *counts.entry(key).or_insert(0) += 1;
        }
        assert_eq!(counts.len(), 3);
        let e = samples as f64 / 3.0;
        let chi2: f64 = counts.values().map(|&c| (c as f64 - e).powi(2) / e).sum();
        // 99.9% quantile of chi-square with 2 degrees of freedom
        assert!(chi2 < 13.82, "{chi2}");
    }

    #[test]
    fn niceness_examples() {
        let p = NiceParams::default();
        let r = check_nice(&DegreeSequence::regular(1000, 3).unwrap(), &p);
        assert!(r.nice, "{r:?}");
        assert_eq!(r.effective_min_degree, Some(3));

        let mut d = vec![3; 100_000];
        d[0] = 10;
        d[1] = 10;
        let r = check_nice(&DegreeSequence::new(d).unwrap(), &p);
        assert!(r.nice, "{r:?}");

        let r = check_nice(&DegreeSequence::regular(100, 2).unwrap(), &p);
        assert!(!r.min_degree_at_least_3.holds && !r.nice);
    }

    #[test]
    fn predicted_cover_values() {
        let d = DegreeSequence::regular(1000, 3).unwrap();
        let c = predicted_cover(&d, 0.01).unwrap();
        assert!((c - 2000.0 * 1000f64.ln()).abs() < 1e-9);
        assert!((c - 13815.5).abs() < 0.1);
        let d4 = DegreeSequence::regular(500, 4).unwrap();
        assert!((predicted_cover(&d4, 0.01).unwrap() - 1.5 * 500.0 * 500f64.ln()).abs() < 1e-9);
        assert!(predicted_cover(&DegreeSequence::regular(10, 2).unwrap(), 0.01).is_err());
    }
}
