//! Electrical-network view of a weighted graph: effective resistance, flows
//! and the resistance- and hitting-time-based cover-time bounds.
//!
//! Edge weights are conductances, so an edge of weight `w` has resistance
//! `1/w`. Loops never carry current.

use nalgebra::{DMatrix, DVector};
use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{exact_cover_times, exact_hitting, HittingMatrix, TransitionKernel, COVER_DP_CAP};
use crate::graph::{Graph, GraphFamily};
use crate::harmonic;
use crate::linalg::{self, Factorized};
use crate::par::Executor;

/// Largest graph for the resistance-weighted spanning tree.
pub const MERST_CAP: usize = 2000;

/// Largest subset size searched by [`best_matthews_lower`].
pub const MATTHEWS_SET_CAP: usize = 12;

/// Largest graph for the exhaustive lower-bound search.
pub const MATTHEWS_SEARCH_CAP: usize = 16;

/// Largest side accepted by [`grid_resistance_monitor`].
pub const GRID_MONITOR_CAP: usize = 40;

/// Header of the bound CSV produced by [`CoverBounds::csv_row`].
pub const BOUND_CSV_HEADER: &str = "graph_id,n,m,exact_cover,matthews_lower,matthews_upper,merst,spanning_tree_4mn";

/// Weighted Laplacian restricted to `keep` (loops drop out).
fn laplacian_minor(g: &Graph, keep: &[usize]) -> DMatrix<f64> {
    let mut index = vec![usize::MAX; g.n()];
    for (i, &v) in keep.iter().enumerate() {
        index[v] = i;
    }
    let m = keep.len();
    let mut l = DMatrix::zeros(m, m);
    for e in g.edges().iter().filter(|e| !e.is_loop()) {
        let (a, b) = (index[e.u], index[e.v]);
        if a != usize::MAX {
            l[(a, a)] += e.weight;
        }
        if b != usize::MAX {
            l[(b, b)] += e.weight;
        }
        if a != usize::MAX && b != usize::MAX {
            l[(a, b)] -= e.weight;
            l[(b, a)] -= e.weight;
        }
    }
    l
}

/// Voltages with `W(u) = 1`, `W(v) = 0`, harmonic elsewhere.
fn unit_voltage(g: &Graph, u: usize, v: usize) -> Result<Vec<f64>> {
    let n = g.n();
    let interior: Vec<usize> = (0..n).filter(|&x| x != u && x != v).collect();
    let mut w = vec![0.0; n];
    w[u] = 1.0;
    if interior.is_empty() {
        return Ok(w);
    }
    let l = laplacian_minor(g, &interior);
    let mut index = vec![usize::MAX; n];
    for (i, &x) in interior.iter().enumerate() {
        index[x] = i;
    }
    // Right-hand side: conductance from each interior vertex to u.
    let mut b = DVector::zeros(interior.len());
    for e in g.edges() {
        if e.u == u && index[e.v] != usize::MAX {
            b[index[e.v]] += e.weight;
        } else if e.v == u && index[e.u] != usize::MAX {
            b[index[e.u]] += e.weight;
        }
    }
    let x = linalg::solve(l, &b, "voltage system")?;
    for (i, &y) in interior.iter().enumerate() {
        w[y] = x[i];
    }
    Ok(w)
}

/// Current leaving `s` under voltages `w`.
fn strength(g: &Graph, w: &[f64], s: usize) -> f64 {
    g.incident(s)
        .iter()
        .map(|&id| {
            let e = g.edge(id);
            e.weight * (w[s] - w[e.other(s)])
        })
        .sum()
}

fn check_pair(g: &Graph, u: usize, v: usize) -> Result<()> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    linalg::check_cap("voltage system", g.n())?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(())
}

/// `R(u, v) = 1 / (current strength)` for the unit voltage `W(u) = 1, W(v) = 0`.
pub fn effective_resistance(g: &Graph, u: usize, v: usize) -> Result<f64> {
    check_pair(g, u, v)?;
    if u == v {
        return Ok(0.0);
    }
    let w = unit_voltage(g, u, v)?;
    Ok(1.0 / strength(g, &w, u))
}

/// Commute time `c(G) R(u, v)`.
pub fn commute_time(g: &Graph, u: usize, v: usize) -> Result<f64> {
    Ok(g.total_weight() * effective_resistance(g, u, v)?)
}

/// All pairwise effective resistances. Vertices in different components
/// have no finite resistance and are stored as `None`.
#[derive(Debug, Clone)]
pub struct ResistanceMatrix {
    n: usize,
    r: Vec<Option<f64>>,
}

impl ResistanceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: usize, v: usize) -> Option<f64> {
        self.r[u * self.n + v]
    }

    /// Largest finite resistance.
    pub fn max_finite(&self) -> f64 {
        self.r.iter().flatten().copied().fold(0.0, f64::max)
    }

    /// Worst violation of symmetry, zero diagonal, nonnegativity and the
    /// triangle inequality over finite entries.
    pub fn metric_violation(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0f64;
        for u in 0..n {
            if let Some(x) = self.get(u, u) {
                worst = worst.max(x.abs());
            }
            for v in 0..n {
                match (self.get(u, v), self.get(v, u)) {
                    (Some(a), Some(b)) => worst = worst.max((a - b).abs()).max(-a),
                    (None, None) => {}
                    _ => return f64::INFINITY,
                }
                for w in 0..n {
                    if let (Some(a), Some(b), Some(c)) = (self.get(u, w), self.get(u, v), self.get(v, w)) {
                        worst = worst.max(a - b - c);
                    }
                }
            }
        }
        worst
    }
}

/// Pairwise resistances from the inverse of the Laplacian grounded at the
/// lowest vertex of each component: `R(u,v) = G_uu + G_vv − 2 G_uv`.
pub fn full_matrix(g: &Graph, exec: Executor) -> Result<ResistanceMatrix> {
    let n = g.n();
    linalg::check_cap("resistance matrix", n)?;
    let comp = g.components();
    let mut r = vec![None; n * n];
    let count = comp.iter().copied().max().map_or(0, |c| c + 1);
    for c in 0..count {
        let members: Vec<usize> = (0..n).filter(|&v| comp[v] == c).collect();
        let rest = &members[1..];
        let k = rest.len();
        // green[i][j] = G for rest[i], rest[j]; the ground has G = 0.
        let green: Vec<Vec<f64>> = if k == 0 {
            Vec::new()
        } else {
            let lu = Factorized::new(laplacian_minor(g, rest), "grounded Laplacian")?;
            exec.map_indexed(k, |j| {
                let mut e = DVector::zeros(k);
                e[j] = 1.0;
                lu.solve(&e).map(|x| x.iter().copied().collect())
            })
            .into_iter()
            .collect::<Result<_>>()?
        };
        let gval = |a: usize, b: usize| if a == 0 || b == 0 { 0.0 } else { green[b - 1][a - 1] };
        for (a, &u) in members.iter().enumerate() {
            for (b, &v) in members.iter().enumerate() {
                let x = if a == b { 0.0 } else { gval(a, a) + gval(b, b) - 2.0 * gval(a, b) };
                r[u * n + v] = Some(x.max(0.0));
            }
        }
    }
    // Symmetrize solver noise.
    for u in 0..n {
        for v in u + 1..n {
            if let (Some(a), Some(b)) = (r[u * n + v], r[v * n + u]) {
                let m = 0.5 * (a + b);
                r[u * n + v] = Some(m);
                r[v * n + u] = Some(m);
            }
        }
    }
    Ok(ResistanceMatrix { n, r })
}

/// A flow on the edges of a graph from `source` to `sink`. `value[id]` is the
/// flow along edge `id` oriented from `edge.u` to `edge.v`, so reversing an
/// edge negates its value.
#[derive(Debug, Clone, PartialEq)]
pub struct Flow {
    pub source: usize,
    pub sink: usize,
    pub value: Vec<f64>,
}

impl Flow {
    /// Build from oriented entries `(edge id, tail, amount)`. An edge may be
    /// listed in both orientations only if the amounts are negatives.
    pub fn from_oriented(g: &Graph, source: usize, sink: usize, entries: &[(usize, usize, f64)]) -> Result<Flow> {
        g.check_vertex(source)?;
        g.check_vertex(sink)?;
        let mut value: Vec<Option<f64>> = vec![None; g.m()];
        for &(id, tail, x) in entries {
            if id >= g.m() {
                return Err(Error::InvalidFlow(format!("edge {id} does not exist")));
            }
            let e = g.edge(id);
            let along = if tail == e.u {
                x
            } else if tail == e.v {
                -x
            } else {
                return Err(Error::InvalidFlow(format!("vertex {tail} is not an end of edge {id}")));
            };
            match value[id] {
                Some(prev) if (prev - along).abs() > 1e-12 => {
                    return Err(Error::InvalidFlow(format!(
                        "antisymmetry violated on edge {id}: {prev} vs {along}"
                    )))
                }
                _ => value[id] = Some(along),
            }
        }
        Ok(Flow {
            source,
            sink,
            value: value.into_iter().map(|x| x.unwrap_or(0.0)).collect(),
        })
    }

    /// Net flow out of `v`.
    pub fn divergence(&self, g: &Graph, v: usize) -> f64 {
        g.incident(v)
            .iter()
            .map(|&id| {
                let e = g.edge(id);
                if e.is_loop() {
                    0.0
                } else if e.u == v {
                    self.value[id]
                } else {
                    -self.value[id]
                }
            })
            .sum()
    }

    pub fn strength(&self, g: &Graph) -> f64 {
        self.divergence(g, self.source)
    }

    /// Check Kirchhoff's node law off `{source, sink}`, zero flow on loops,
    /// and a nonnegative strength (exactly 1 when `unit`).
    pub fn validate(&self, g: &Graph, unit: bool) -> Result<()> {
        if self.value.len() != g.m() {
            return Err(Error::InvalidFlow(format!("flow has {} values for {} edges", self.value.len(), g.m())));
        }
        if let Some(id) = (0..g.m()).find(|&id| g.edge(id).is_loop() && self.value[id] != 0.0) {
            return Err(Error::InvalidFlow(format!("loop {id} carries flow")));
        }
        for v in 0..g.n() {
            if v != self.source && v != self.sink {
                let d = self.divergence(g, v);
                if d.abs() > 1e-9 {
                    return Err(Error::InvalidFlow(format!("Kirchhoff's node law fails at {v}: divergence {d}")));
                }
            }
        }
        let s = self.strength(g);
        if s < -1e-9 {
            return Err(Error::InvalidFlow(format!("negative strength {s}")));
        }
        if unit && (s - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidFlow(format!("strength {s} is not 1")));
        }
        Ok(())
    }
}

/// `Σ φ(e)² r(e)` with `r(e) = 1 / w(e)`.
pub fn flow_energy(g: &Graph, flow: &Flow) -> Result<f64> {
    flow.validate(g, false)?;
    Ok(g.edges().iter().zip(&flow.value).map(|(e, x)| x * x / e.weight).sum())
}

/// The unit current flow from `u` to `v`.
pub fn unit_current_flow(g: &Graph, u: usize, v: usize) -> Result<Flow> {
    check_pair(g, u, v)?;
    if u == v {
        return Err(Error::Parameter("unit flow needs distinct ends".into()));
    }
    let w = unit_voltage(g, u, v)?;
    let s = strength(g, &w, u);
    let value = g
        .edges()
        .iter()
        .map(|e| if e.is_loop() { 0.0 } else { e.weight * (w[e.u] - w[e.v]) / s })
        .collect();
    Ok(Flow { source: u, sink: v, value })
}

/// `energy(flow) − R(u, v)`; nonnegative for every unit flow from `u` to `v`.
pub fn thomson_gap(g: &Graph, u: usize, v: usize, flow: &Flow) -> Result<f64> {
    if flow.source != u || flow.sink != v {
        return Err(Error::InvalidFlow(format!(
            "flow runs {}→{}, expected {u}→{v}",
            flow.source, flow.sink
        )));
    }
    flow.validate(g, true)?;
    Ok(flow_energy(g, flow)? - effective_resistance(g, u, v)?)
}

/// Cover-time bound from a spanning tree walked twice.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpanningTreeBound {
    /// `2m(2n − 2)`.
    pub sharp: f64,
    /// `4mn`.
    pub headline: f64,
}

pub fn spanning_tree_bound(g: &Graph) -> Result<SpanningTreeBound> {
    if !g.is_unit_weight() {
        return Err(Error::Unsupported("spanning-tree bound needs unit weights".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let (n, m) = (g.n() as f64, g.m() as f64);
    Ok(SpanningTreeBound {
        sharp: 2.0 * m * (2.0 * n - 2.0),
        headline: 4.0 * m * n,
    })
}

/// Minimum spanning tree of the complete graph weighted by effective resistance.
#[derive(Debug, Clone, Serialize)]
pub struct MerstBound {
    pub tree: Vec<(usize, usize, f64)>,
    /// `Σ R` over the tree.
    pub tree_resistance: f64,
    /// `c(G) · tree_resistance`.
    pub bound: f64,
}

pub fn merst_bound(g: &Graph, exec: Executor) -> Result<MerstBound> {
    let n = g.n();
    if n > MERST_CAP {
        return Err(Error::TooLarge {
            what: "resistance spanning tree",
            size: n,
            cap: MERST_CAP,
        });
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let r = full_matrix(g, exec)?;
    let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            pairs.push((r.get(u, v).ok_or(Error::Disconnected)?, u, v));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut uf = UnionFind::<usize>::new(n);
    let mut tree = Vec::with_capacity(n.saturating_sub(1));
    for (x, u, v) in pairs {
        if uf.union(u, v) {
            tree.push((u, v, x));
            if tree.len() + 1 == n {
                break;
            }
        }
    }
    let tree_resistance: f64 = tree.iter().map(|t| t.2).sum();
    Ok(MerstBound {
        bound: g.total_weight() * tree_resistance,
        tree_resistance,
        tree,
    })
}

/// `max_{u,v} H[u][v] · h(n)`.
pub fn matthews_upper(h: &HittingMatrix) -> f64 {
    h.max() * harmonic(h.n())
}

/// `min_{u≠v ∈ A} H[u][v] · h(|A| − 1)`.
pub fn matthews_lower(h: &HittingMatrix, set: &[usize]) -> Result<f64> {
    if set.len() < 2 {
        return Err(Error::Parameter("lower bound needs |A| ≥ 2".into()));
    }
    if let Some(&v) = set.iter().find(|&&v| v >= h.n()) {
        return Err(Error::VertexOutOfRange { vertex: v, n: h.n() });
    }
    Ok(h.min_within(set) * harmonic(set.len() - 1))
}

/// `max_{u,v ∈ V'} H[u][v] · h(|V'|)`, bounding the time to visit all of `V'`.
pub fn matthews_subset(h: &HittingMatrix, set: &[usize]) -> Result<f64> {
    if let Some(&v) = set.iter().find(|&&v| v >= h.n()) {
        return Err(Error::VertexOutOfRange { vertex: v, n: h.n() });
    }
    Ok(h.max_within(set) * harmonic(set.len()))
}

/// Best lower bound over all sets `A` with `2 ≤ |A| ≤ 12`. Ties keep the
/// first set in increasing bitmask order.
pub fn best_matthews_lower(h: &HittingMatrix) -> Result<(f64, Vec<usize>)> {
    let n = h.n();
    if n > MATTHEWS_SEARCH_CAP {
        return Err(Error::TooLarge {
            what: "exhaustive lower-bound search",
            size: n,
            cap: MATTHEWS_SEARCH_CAP,
        });
    }
    if n < 2 {
        return Err(Error::Parameter("lower bound needs at least two vertices".into()));
    }
    let mut best = (f64::NEG_INFINITY, Vec::new());
    for mask in 1usize..1 << n {
        let size = mask.count_ones() as usize;
        if !(2..=MATTHEWS_SET_CAP).contains(&size) {
            continue;
        }
        let set: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        let x = h.min_within(&set) * harmonic(size - 1);
        if x > best.0 {
            best = (x, set);
        }
    }
    Ok(best)
}

/// Every bound for one graph, as written to the bound CSV.
#[derive(Debug, Clone, Serialize)]
pub struct CoverBounds {
    pub n: usize,
    pub m: usize,
    /// `max_u COV_u`, only for graphs within the exact oracle's cap.
    pub exact_cover: Option<f64>,
    pub matthews_lower: Option<f64>,
    pub matthews_upper: f64,
    pub merst: Option<f64>,
    pub spanning_tree_4mn: Option<f64>,
}

impl CoverBounds {
    pub fn compute(g: &Graph, exec: Executor) -> Result<CoverBounds> {
        let kernel = TransitionKernel::from_graph(g, false)?;
        let h = exact_hitting(&kernel, exec)?;
        let exact_cover = if g.n() <= COVER_DP_CAP {
            Some(exact_cover_times(&kernel, exec)?.into_iter().fold(0.0, f64::max))
        } else {
            None
        };
        let matthews_lower = if (2..=MATTHEWS_SEARCH_CAP).contains(&g.n()) {
            Some(best_matthews_lower(&h)?.0)
        } else {
            None
        };
        let merst = if g.n() <= MERST_CAP {
            Some(merst_bound(g, exec)?.bound)
        } else {
            None
        };
        Ok(CoverBounds {
            n: g.n(),
            m: g.m(),
            exact_cover,
            matthews_lower,
            matthews_upper: matthews_upper(&h),
            merst,
            spanning_tree_4mn: spanning_tree_bound(g).ok().map(|b| b.headline),
        })
    }

    /// The smallest available upper bound.
    pub fn best_upper(&self) -> f64 {
        [Some(self.matthews_upper), self.merst, self.spanning_tree_4mn]
            .into_iter()
            .flatten()
            .fold(f64::INFINITY, f64::min)
    }

    /// One CSV row matching [`BOUND_CSV_HEADER`]; missing values are empty.
    pub fn csv_row(&self, graph_id: &str) -> String {
        let opt = |x: Option<f64>| x.map(|v| format!("{v}")).unwrap_or_default();
        format!(
            "{graph_id},{},{},{},{},{},{},{}",
            self.n,
            self.m,
            opt(self.exact_cover),
            opt(self.matthews_lower),
            self.matthews_upper,
            opt(self.merst),
            opt(self.spanning_tree_4mn)
        )
    }
}

/// Largest resistance on the `k × k` grid against the `8 h(k)` ceiling.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridMonitor {
    pub k: usize,
    pub max_resistance: f64,
    pub bound: f64,
    pub margin: f64,
    pub holds: bool,
}

pub fn grid_resistance_monitor(k: usize, exec: Executor) -> Result<GridMonitor> {
    if k == 0 || k > GRID_MONITOR_CAP {
        return Err(Error::Parameter(format!("grid side must be in 1..={GRID_MONITOR_CAP}, got {k}")));
    }
    let g = GraphFamily::Grid2d(k, k).generate()?;
    let max_resistance = full_matrix(&g, exec)?.max_finite();
    let bound = 8.0 * harmonic(k);
    Ok(GridMonitor {
        k,
        max_resistance,
        bound,
        margin: bound - max_resistance,
        holds: max_resistance < bound,
    })
}

/// Outcome of comparing resistances before and after lowering conductances.
#[derive(Debug, Clone, Serialize)]
pub struct RayleighReport {
    pub pairs_checked: usize,
    /// Pairs separated by the change (infinite resistance, law holds vacuously).
    pub disconnected_pairs: usize,
    /// Largest `R_before − R_after`; at most `1e-9` when the law holds.
    pub max_decrease: f64,
    pub holds: bool,
}

/// Check `R_after ≥ R_before` for every pair. `after` must be `before` with
/// edges removed or conductances lowered.
pub fn rayleigh_compare(before: &Graph, after: &Graph, exec: Executor) -> Result<RayleighReport> {
    if before.n() != after.n() {
        return Err(Error::Parameter("graphs must share a vertex set".into()));
    }
    let (rb, ra) = (full_matrix(before, exec)?, full_matrix(after, exec)?);
    let n = before.n();
    let (mut pairs, mut disconnected, mut worst) = (0, 0, f64::NEG_INFINITY);
    for u in 0..n {
        for v in u + 1..n {
            pairs += 1;
            match (rb.get(u, v), ra.get(u, v)) {
                (Some(b), Some(a)) => worst = worst.max(b - a),
                (_, None) => disconnected += 1,
                (None, Some(_)) => worst = f64::INFINITY,
            }
        }
    }
    let max_decrease = if pairs == 0 { 0.0 } else { worst };
    Ok(RayleighReport {
        pairs_checked: pairs,
        disconnected_pairs: disconnected,
        max_decrease,
        holds: max_decrease <= 1e-9,
    })
}

/// [`rayleigh_compare`] after deleting the edges `deleted`.
pub fn rayleigh_monitor(g: &Graph, deleted: &[usize], exec: Executor) -> Result<RayleighReport> {
    rayleigh_compare(g, &g.without_edges(deleted)?, exec)
}

/// Asymptotic cover-time frame on `n` vertices: `(n ln n, (4/27) n³)`.
/// Both ends hold up to `1 + o(1)` factors and are reported, not asserted.
pub fn feige_frame(n: usize) -> (f64, f64) {
    let x = n as f64;
    (x * x.ln(), 4.0 / 27.0 * x.powi(3))
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn arb_connected(max_n: usize) -> impl Strategy<Value = Graph> {
        (2usize..max_n)
            .prop_flat_map(|n| {
                let tree = proptest::collection::vec((0.2f64..4.0, any::<prop::sample::Index>()), n - 1);
                let extra = proptest::collection::vec((0..n, 0..n, 0.2f64..4.0), 0..2 * n);
                (Just(n), tree, extra)
            })
            .prop_map(|(n, tree, extra)| {
                let mut g = Graph::empty(n);
                for (v, (w, idx)) in (1..n).zip(tree) {
                    g.add_edge(idx.index(v), v, w).unwrap();
                }
                for (u, v, w) in extra {
                    g.add_edge(u, v, w).unwrap();
                }
                g
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn resistance_is_a_metric(g in arb_connected(30)) {
            prop_assert!(full_matrix(&g, Executor::Sequential).unwrap().metric_violation() < 1e-9);
        }

        #[test]
        fn perturbed_flows_cost_more(g in arb_connected(12), bumps in proptest::collection::vec(-0.5f64..0.5, 1..4)) {
            let (u, v) = (0, g.n() - 1);
            let mut f = unit_current_flow(&g, u, v).unwrap();
            // Push extra flow around cycles: any closed walk keeps the flow valid.
            let nonloops: Vec<usize> = (0..g.m()).filter(|&id| !g.edge(id).is_loop()).collect();
            for (i, b) in bumps.iter().enumerate() {
                let a = nonloops[i % nonloops.len()];
                let e = *g.edge(a);
                if let Ok(path) = g.without_edges(&[a]).and_then(|h| h.shortest_path(e.v, e.u)) {
                    f.value[a] += b;
                    for w in path.windows(2) {
                        let id = g.incident(w[0]).iter().copied()
                            .find(|&id| id != a && g.edge(id).other(w[0]) == w[1] && !g.edge(id).is_loop())
                            .unwrap();
                        f.value[id] += if g.edge(id).u == w[0] { *b } else { -*b };
                    }
                }
            }
            let gap = thomson_gap(&g, u, v, &f).unwrap();
            prop_assert!(gap >= -1e-9);
        }
    }
}
