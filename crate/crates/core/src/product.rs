//! Walks observed on a vertex subset, block decompositions, and the numeric
//! cover-time bounds for Cartesian products.

use std::collections::VecDeque;
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::electrical::full_matrix;
use crate::error::{Error, Result};
use crate::exact::TransitionKernel;
use crate::graph::{cartesian_product, parse_field, Graph};
use crate::linalg::{self, Factorized};
use crate::par::Executor;

/// Largest product accepted by [`product_resistance_monitor`].
pub const PRODUCT_MONITOR_CAP: usize = 2500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Interior,
    Exterior,
}

/// An edge of the observed graph, in local labels `0..|S|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObservedEdge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
    pub kind: EdgeKind,
}

/// The walk on `G` watched only while it stands on `S`.
///
/// Local label `i` is `subset[i]` in `G`. Interior edges are the edges of
/// `G[S]`. An exterior edge `(u, v)` carries the conductance of excursions
/// from `u` through `V ∖ S` that return to `S` at `v`; an exterior loop
/// (`u = v`) adds its conductance to `c_H(u)` once, so `c_H(u) = d_G(u)` for
/// every vertex of `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalObservation {
    pub subset: Vec<usize>,
    /// Vertices of `S` with a neighbour outside `S` (labels in `G`).
    pub boundary: Vec<usize>,
    pub edges: Vec<ObservedEdge>,
}

impl LocalObservation {
    pub fn n(&self) -> usize {
        self.subset.len()
    }

    /// `c_H(u)` for local vertex `u`, exterior loops counted once.
    pub fn conductance(&self, u: usize) -> f64 {
        self.edges
            .iter()
            .map(|e| match (e.kind, e.u == e.v) {
                (EdgeKind::Interior, true) => 2.0 * e.weight * f64::from(u8::from(e.u == u)),
                (_, true) => e.weight * f64::from(u8::from(e.u == u)),
                (_, false) => e.weight * f64::from(u8::from(e.u == u || e.v == u)),
            })
            .sum()
    }

    /// Plain weighted graph with the same walk: exterior loops are stored at
    /// half weight so that the usual count-twice rule reproduces `c_H`.
    pub fn to_graph(&self) -> Result<Graph> {
        let mut g = Graph::empty(self.n());
        for e in &self.edges {
            let w = if e.kind == EdgeKind::Exterior && e.u == e.v { e.weight / 2.0 } else { e.weight };
            g.add_edge(e.u, e.v, w)?;
        }
        Ok(g)
    }

    pub fn kernel(&self) -> Result<TransitionKernel> {
        TransitionKernel::from_graph(&self.to_graph()?, false)
    }

    /// Graph text format with a trailing `interior|exterior` column and a
    /// `# S=` comment listing the original labels.
    pub fn to_text(&self) -> String {
        let s: Vec<String> = self.subset.iter().map(|v| v.to_string()).collect();
        let mut out = format!("# S={}\n{} {}\n", s.join(","), self.n(), self.edges.len());
        for e in &self.edges {
            let tag = match e.kind {
                EdgeKind::Interior => "interior",
                EdgeKind::Exterior => "exterior",
            };
            let _ = writeln!(out, "{} {} {} {}", e.u, e.v, e.weight, tag);
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut subset = None;
        let mut header = None;
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if let Some(rest) = line.strip_prefix("# S=") {
                let vs = rest
                    .split(',')
                    .filter(|x| !x.trim().is_empty())
                    .map(|x| parse_field::<usize>(x, line_no))
                    .collect::<Result<Vec<_>>>()?;
                subset = Some(vs);
                continue;
            }
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            if header.is_none() {
                if f.len() != 2 {
                    return Err(Error::Parse { line: line_no, message: "expected `n m`".into() });
                }
                header = Some((parse_field::<usize>(f[0], line_no)?, parse_field::<usize>(f[1], line_no)?));
                continue;
            }
            if f.len() != 4 {
                return Err(Error::Parse { line: line_no, message: "expected `u v w tag`".into() });
            }
            let kind = match f[3] {
                "interior" => EdgeKind::Interior,
                "exterior" => EdgeKind::Exterior,
                t => return Err(Error::Parse { line: line_no, message: format!("unknown tag `{t}`") }),
            };
            edges.push(ObservedEdge {
                u: parse_field(f[0], line_no)?,
                v: parse_field(f[1], line_no)?,
                weight: parse_field(f[2], line_no)?,
                kind,
            });
        }
        let (n, m) = header.ok_or(Error::Parse { line: 1, message: "missing header".into() })?;
        let subset = subset.unwrap_or_else(|| (0..n).collect());
        if subset.len() != n || edges.len() != m {
            return Err(Error::Parse {
                line: 1,
                message: format!("header says {n} vertices and {m} edges, found {} and {}", subset.len(), edges.len()),
            });
        }
        if let Some(e) = edges.iter().find(|e| e.u >= n || e.v >= n) {
            return Err(Error::VertexOutOfRange { vertex: e.u.max(e.v), n });
        }
        Ok(LocalObservation { boundary: Vec::new(), subset, edges })
    }
}

/// Build `Loc(G, S)`.
///
/// With `X = V ∖ S`, the probability that a walk entering the exterior at `x`
/// returns to `S` first at `v` is `A = (I − P_XX)⁻¹ P_XS`, and the exterior
/// conductance between boundary vertices is `c(u, v) = Σ_x w(u, x) A[x][v]`.
pub fn local_observation(g: &Graph, subset: &[usize]) -> Result<LocalObservation> {
    let n = g.n();
    if subset.is_empty() {
        return Err(Error::Parameter("S must be nonempty".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for &v in &sorted {
        g.check_vertex(v)?;
    }
    let mut local = vec![usize::MAX; n];
    for (i, &v) in sorted.iter().enumerate() {
        local[v] = i;
    }
    let inside = |v: usize| local[v] != usize::MAX;

    let mut edges: Vec<ObservedEdge> = g
        .edges()
        .iter()
        .filter(|e| inside(e.u) && inside(e.v))
        .map(|e| ObservedEdge {
            u: local[e.u],
            v: local[e.v],
            weight: e.weight,
            kind: EdgeKind::Interior,
        })
        .collect();

    let boundary: Vec<usize> = sorted
        .iter()
        .copied()
        .filter(|&v| g.neighbors(v).iter().any(|&x| !inside(x)))
        .collect();
    if boundary.is_empty() {
        return Ok(LocalObservation { subset: sorted, boundary, edges });
    }

    // Exterior vertices reachable from the boundary through the exterior.
    let mut ext_index = vec![usize::MAX; n];
    let mut exterior = Vec::new();
    let mut queue: VecDeque<usize> = VecDeque::new();
    for &b in &boundary {
        for x in g.neighbors(b) {
            if !inside(x) && ext_index[x] == usize::MAX {
                ext_index[x] = exterior.len();
                exterior.push(x);
                queue.push_back(x);
            }
        }
    }
    while let Some(x) = queue.pop_front() {
        for y in g.neighbors(x) {
            if !inside(y) && ext_index[y] == usize::MAX {
                ext_index[y] = exterior.len();
                exterior.push(y);
                queue.push_back(y);
            }
        }
    }
    linalg::check_cap("exterior absorbing chain", exterior.len())?;
    let c = g.weighted_degrees();
    let k = exterior.len();
    let mut a = DMatrix::<f64>::identity(k, k);
    let mut rhs = DMatrix::<f64>::zeros(k, boundary.len());
    let mut b_index = vec![usize::MAX; n];
    for (i, &b) in boundary.iter().enumerate() {
        b_index[b] = i;
    }
    for (i, &x) in exterior.iter().enumerate() {
        for (y, w) in g.edge_ends(x) {
            let p = w / c[x];
            if ext_index[y] != usize::MAX {
                a[(i, ext_index[y])] -= p;
            } else if b_index[y] != usize::MAX {
                rhs[(i, b_index[y])] += p;
            }
        }
    }
    let lu = Factorized::new(a, "exterior absorbing chain")?;
    let mut absorb = DMatrix::<f64>::zeros(k, boundary.len());
    for j in 0..boundary.len() {
        let col: DVector<f64> = rhs.column(j).into_owned();
        absorb.set_column(j, &lu.solve(&col)?);
    }
    let nb = boundary.len();
    let mut cond = DMatrix::<f64>::zeros(nb, nb);
    for (i, &u) in boundary.iter().enumerate() {
        for &id in g.incident(u) {
            let e = g.edge(id);
            let x = e.other(u);
            if inside(x) {
                continue;
            }
            let xi = ext_index[x];
            for j in 0..nb {
                cond[(i, j)] += e.weight * absorb[(xi, j)];
            }
        }
    }
    for i in 0..nb {
        for j in i..nb {
            // Reversibility makes cond symmetric; average away solver noise.
            let w = if i == j { cond[(i, i)] } else { 0.5 * (cond[(i, j)] + cond[(j, i)]) };
            if w > 0.0 {
                edges.push(ObservedEdge {
                    u: local[boundary[i]],
                    v: local[boundary[j]],
                    weight: w,
                    kind: EdgeKind::Exterior,
                });
            }
        }
    }
    Ok(LocalObservation { subset: sorted, boundary, edges })
}

/// Vertex sets covering `H`, each of size at least `k`, connected, and of
/// diameter at most `4k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockDecomposition {
    pub k: usize,
    pub blocks: Vec<Vec<usize>>,
}

/// Outcome of [`BlockDecomposition::check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockCheck {
    pub min_size: usize,
    pub all_connected: bool,
    pub max_diameter: usize,
    pub covers: bool,
}

impl BlockCheck {
    pub fn holds(&self, k: usize, n: usize) -> bool {
        self.min_size >= k.min(n) && self.all_connected && self.max_diameter <= 4 * k && self.covers
    }
}

impl BlockDecomposition {
    pub fn check(&self, h: &Graph) -> Result<BlockCheck> {
        let mut seen = vec![false; h.n()];
        let mut min_size = usize::MAX;
        let mut all_connected = true;
        let mut max_diameter = 0;
        for b in &self.blocks {
            min_size = min_size.min(b.len());
            for &v in b {
                seen[v] = true;
            }
            let sub = h.induced(b)?;
            if sub.is_connected() {
                max_diameter = max_diameter.max(sub.diameter()?);
            } else {
                all_connected = false;
            }
        }
        Ok(BlockCheck {
            min_size: if self.blocks.is_empty() { 0 } else { min_size },
            all_connected,
            max_diameter,
            covers: seen.into_iter().all(|s| s),
        })
    }
}

/// BFS from `root` to depth `k` through unvisited vertices. Returns the new
/// vertices in BFS order and the depth-`k` vertices (the leaves to continue from).
fn bounded_bfs(h: &Graph, root: usize, k: usize, visited: &mut [bool]) -> (Vec<usize>, Vec<usize>) {
    let mut fresh = Vec::new();
    let mut leaves = Vec::new();
    let mut queue = VecDeque::from([(root, 0usize)]);
    visited[root] = true;
    while let Some((x, d)) = queue.pop_front() {
        if d == k {
            leaves.push(x);
            continue;
        }
        for y in h.neighbors(x) {
            if !visited[y] {
                visited[y] = true;
                fresh.push(y);
                queue.push_back((y, d + 1));
            }
        }
    }
    (fresh, leaves)
}

/// Grow BFS trees of depth `k` from vertex 0, then from each depth-`k` leaf
/// in FIFO order. A tree with fewer than `k` vertices is merged into the
/// block of the leaf it grew from; otherwise it becomes a new block whose
/// leaves are processed in turn. Neighbours are explored in label order.
/// Blocks share their root leaf with the parent block.
pub fn block_decomposition(h: &Graph, k: usize) -> Result<BlockDecomposition> {
    let n = h.n();
    if k == 0 {
        return Err(Error::Parameter("k must be at least 1".into()));
    }
    if n == 0 {
        return Ok(BlockDecomposition { k, blocks: Vec::new() });
    }
    if !h.is_connected() {
        return Err(Error::Disconnected);
    }
    if k > n {
        return Ok(BlockDecomposition { k, blocks: vec![(0..n).collect()] });
    }
    let mut visited = vec![false; n];
    let (fresh, leaves) = bounded_bfs(h, 0, k, &mut visited);
    let mut blocks = vec![std::iter::once(0).chain(fresh).collect::<Vec<_>>()];
    let mut queue: VecDeque<(usize, usize)> = leaves.into_iter().map(|l| (l, 0)).collect();
    while let Some((leaf, parent)) = queue.pop_front() {
        let (fresh, leaves) = bounded_bfs(h, leaf, k, &mut visited);
        if fresh.len() + 1 < k {
            blocks[parent].extend(fresh);
        } else {
            blocks.push(std::iter::once(leaf).chain(fresh).collect());
            let id = blocks.len() - 1;
            queue.extend(leaves.into_iter().map(|l| (l, id)));
        }
    }
    for b in &mut blocks {
        b.sort_unstable();
    }
    Ok(BlockDecomposition { k, blocks })
}

/// Numeric evaluation of the product cover-time bounds for `G □ H`.
#[derive(Debug, Clone, Serialize)]
pub struct MainBounds {
    /// `(1 + δ_G/Δ_H) cov_H`.
    pub lower_from_h: f64,
    /// `(1 + δ_H/Δ_G) cov_G` when `cov_G` is supplied.
    pub lower_from_g: Option<f64>,
    pub lower: f64,
    /// `(1 + Δ_G/δ_H) bcov_H + M m_G m_H n_H ℓ² / (cov_H D_G)`, to be
    /// multiplied by an unknown universal constant `K`.
    pub upper_times_k: Option<f64>,
    /// Why the upper expression was withheld.
    pub upper_withheld: Option<String>,
    /// `ℓ = ln(D_G + 1) ln(n_G D_G)`.
    pub ell: f64,
    /// `M = n_G m_H + n_H m_G`, the edge count of the product.
    pub product_edges: usize,
    pub diameter_g: usize,
    pub constant: &'static str,
}

pub fn theorem_main_bounds(g: &Graph, h: &Graph, cov_h: f64, bcov_h: f64, cov_g: Option<f64>) -> Result<MainBounds> {
    for x in [g, h] {
        if !x.is_connected() {
            return Err(Error::Disconnected);
        }
        if !x.is_plain() {
            return Err(Error::Unsupported("product bounds need simple unweighted factors".into()));
        }
    }
    let (ng, nh, mg, mh) = (g.n(), h.n(), g.m(), h.m());
    let (dmin_g, dmax_g, dmin_h, dmax_h) = (
        g.min_degree() as f64,
        g.max_degree() as f64,
        h.min_degree() as f64,
        h.max_degree() as f64,
    );
    let dg = g.diameter()?;
    let lower_from_h = (1.0 + dmin_g / dmax_h) * cov_h;
    let lower_from_g = cov_g.map(|c| (1.0 + dmin_h / dmax_g) * c);
    let lower = lower_from_g.map_or(lower_from_h, |x| x.max(lower_from_h));
    let product_edges = ng * mh + nh * mg;
    let ell = ((dg + 1) as f64).ln() * ((ng * dg) as f64).ln();
    let (upper_times_k, upper_withheld) = if nh < dg + 1 {
        (None, Some(format!("n_H = {nh} < D_G + 1 = {}", dg + 1)))
    } else if dg == 0 {
        (None, Some("D_G = 0 leaves the second term undefined".into()))
    } else {
        let first = (1.0 + dmax_g / dmin_h) * bcov_h;
        let second = product_edges as f64 * mg as f64 * mh as f64 * nh as f64 * ell * ell / (cov_h * dg as f64);
        (Some(first + second), None)
    };
    Ok(MainBounds {
        lower_from_h,
        lower_from_g,
        lower,
        upper_times_k,
        upper_withheld,
        ell,
        product_edges,
        diameter_g: dg,
        constant: "×K",
    })
}

/// Largest resistance in `G □ H` against `α ln(D_G + 1)` with
/// `α = n_H / (D_G + 1)`.
#[derive(Debug, Clone, Serialize)]
pub struct ProductResistance {
    pub r_max: f64,
    pub alpha: f64,
    /// `α ln(D_G + 1)`, the scale to be multiplied by an unknown `ζ`.
    pub scale: f64,
    /// `r_max / scale`, or `None` when the scale vanishes.
    pub ratio: Option<f64>,
    pub constant: &'static str,
}

pub fn product_resistance_monitor(g: &Graph, h: &Graph, exec: Executor) -> Result<ProductResistance> {
    let size = g.n() * h.n();
    if size > PRODUCT_MONITOR_CAP {
        return Err(Error::TooLarge {
            what: "product resistance monitor",
            size,
            cap: PRODUCT_MONITOR_CAP,
        });
    }
    let f = cartesian_product(g, h)?;
    let r_max = full_matrix(&f, exec)?.max_finite();
    let dg = g.diameter()?;
    let alpha = h.n() as f64 / (dg + 1) as f64;
    let scale = alpha * ((dg + 1) as f64).ln();
    Ok(ProductResistance {
        r_max,
        alpha,
        scale,
        ratio: (scale > 0.0).then(|| r_max / scale),
        constant: "×ζ",
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphFamily;

    fn fam(f: GraphFamily) -> Graph {
        f.generate().unwrap()
    }

    #[test]
    fn whole_vertex_set_is_unchanged() {
        let g = fam(GraphFamily::Lollipop(8));
        let loc = local_observation(&g, &(0..8).collect::<Vec<_>>()).unwrap();
        assert!(loc.boundary.is_empty());
        assert_eq!(loc.to_graph().unwrap(), g);
    }

    #[test]
    fn path_end_becomes_a_loop() {
        let g = fam(GraphFamily::Path(3));
        let loc = local_observation(&g, &[0, 1]).unwrap();
        let ext: Vec<_> = loc.edges.iter().filter(|e| e.kind == EdgeKind::Exterior).collect();
        assert_eq!(ext.len(), 1);
        assert_eq!((ext[0].u, ext[0].v), (1, 1));
        assert!((ext[0].weight - 1.0).abs() < 1e-12);
        assert!((loc.conductance(1) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn cycle_of_four_minus_one_vertex() {
        let g = fam(GraphFamily::Cycle(4));
        let loc = local_observation(&g, &[0, 1, 2]).unwrap();
        let weight = |u, v| {
            loc.edges
                .iter()
                .filter(|e| e.kind == EdgeKind::Exterior && e.u == u && e.v == v)
                .map(|e| e.weight)
                .sum::<f64>()
        };
        assert!((weight(0, 2) - 0.5).abs() < 1e-12);
        assert!((weight(0, 0) - 0.5).abs() < 1e-12);
        assert!((weight(2, 2) - 0.5).abs() < 1e-12);
        for u in 0..3 {
            assert!((loc.conductance(u) - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn text_round_trip() {
        let g = fam(GraphFamily::Grid2d(3, 3));
        let loc = local_observation(&g, &[0, 1, 3, 4]).unwrap();
        let text = loc.to_text();
        assert!(text.starts_with("# S=0,1,3,4\n"));
        let back = LocalObservation::from_text(&text).unwrap();
        assert_eq!(back.subset, loc.subset);
        assert_eq!(back.edges, loc.edges);
    }

    #[test]
    fn blocks_on_a_ring() {
        let h = fam(GraphFamily::Cycle(12));
        let d = block_decomposition(&h, 3).unwrap();
        assert_eq!(d.blocks, vec![vec![0, 1, 2, 3, 9, 10, 11], vec![3, 4, 5, 6], vec![7, 8, 9]]);
        assert!(d.check(&h).unwrap().holds(3, 12));
    }

    #[test]
    fn blocks_on_a_path() {
        let h = fam(GraphFamily::Path(10));
        let d = block_decomposition(&h, 4).unwrap();
        assert_eq!(d.blocks[0], vec![0, 1, 2, 3, 4]);
        assert!(d.check(&h).unwrap().holds(4, 10));
        let d = block_decomposition(&h, 11).unwrap();
        assert_eq!(d.blocks, vec![(0..10).collect::<Vec<_>>()]);
        let d = block_decomposition(&h, 1).unwrap();
        assert!(d.check(&h).unwrap().holds(1, 10));
    }

    #[test]
    fn main_bounds_on_cycles() {
        let n = 9;
        let z = fam(GraphFamily::Cycle(n));
        let cov = (n * (n - 1) / 2) as f64;
        let b = theorem_main_bounds(&z, &z, cov, 2.0 * cov, Some(cov)).unwrap();
        assert!((b.lower - (n * (n - 1)) as f64).abs() < 1e-12);
        assert_eq!(b.product_edges, 2 * n * n);
        assert!(b.upper_times_k.is_some());
        let big = fam(GraphFamily::Path(20));
        let small = fam(GraphFamily::Path(5));
        let b = theorem_main_bounds(&big, &small, 16.0, 20.0, None).unwrap();
        assert!(b.upper_times_k.is_none() && b.upper_withheld.is_some());
    }

    #[test]
    fn product_resistance() {
        let k2 = fam(GraphFamily::Path(2));
        let r = product_resistance_monitor(&k2, &k2, Executor::Sequential).unwrap();
        assert!((r.r_max - 1.0).abs() < 1e-12);
        assert_eq!(r.constant, "×ζ");
    }
}
