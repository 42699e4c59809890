//! Weighted undirected multigraphs with loops, deterministic family generators
//! and the Cartesian product.
//!
//! Vertices are dense ids `0..n`. Edges are stored as a flat multiset together
//! with a per-vertex incidence index, so degree queries are O(1) and neighbour
//! scans are O(degree). An unweighted graph is just a graph whose weights are
//! all 1.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::stream_rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    /// Conductance; resistance is `1 / weight`.
    pub weight: f64,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    /// The endpoint opposite `x`. Panics if `x` is not an endpoint.
    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            assert_eq!(self.v, x, "vertex {x} is not an endpoint");
            self.u
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    // edge ids incident to each vertex; a loop is listed once
    incidence: Vec<Vec<usize>>,
    // number of edge ends at each vertex (loops count twice)
    degree: Vec<usize>,
    // total conductance at each vertex (loops count twice)
    conductance: Vec<f64>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            incidence: vec![Vec::new(); n],
            degree: vec![0; n],
            conductance: vec![0.0; n],
        }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut g = Graph::empty(n);
        for (u, v, w) in edges {
            g.add_edge(u, v, w)?;
        }
        Ok(g)
    }

    /// Unit-weight graph from an edge list.
    pub fn from_unit_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::from_edges(n, edges.into_iter().map(|(u, v)| (u, v, 1.0)))
    }

    pub fn add_edge(&mut self, u: usize, v: usize, weight: f64) -> Result<usize> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(Error::InvalidWeight(weight));
        }
        let id = self.edges.len();
        self.edges.push(Edge { u, v, weight });
        self.incidence[u].push(id);
        self.degree[u] += 1;
        self.conductance[u] += weight;
        if u != v {
            self.incidence[v].push(id);
        }
        self.degree[v] += 1;
        self.conductance[v] += weight;
        Ok(id)
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id]
    }

    /// Edge ids incident to `v` (each loop listed once).
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    /// Number of edge ends at `v`; loops count twice.
    pub fn degree(&self, v: usize) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.degree[v])
    }

    /// Total conductance `c(v)`; loops count twice.
    pub fn weighted_degree(&self, v: usize) -> Result<f64> {
        self.check_vertex(v)?;
        Ok(self.conductance[v])
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degree
    }

    pub fn weighted_degrees(&self) -> &[f64] {
        &self.conductance
    }

    /// `c(G)`: twice the total edge weight.
    pub fn total_weight(&self) -> f64 {
        2.0 * self.edges.iter().map(|e| e.weight).sum::<f64>()
    }

    pub fn min_degree(&self) -> usize {
        self.degree.iter().copied().min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.degree.iter().copied().max().unwrap_or(0)
    }

    /// Neighbours of `v` as edge ends: a loop yields `v` twice, parallel edges
    /// repeat the neighbour. Items are `(neighbour, weight)`.
    pub fn edge_ends(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.incidence[v].iter().flat_map(move |&id| {
            let e = &self.edges[id];
            let times = if e.is_loop() { 2 } else { 1 };
            std::iter::repeat_n((e.other(v), e.weight), times)
        })
    }

    /// Distinct neighbours of `v` in increasing label order (excluding `v`).
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.incidence[v]
            .iter()
            .map(|&id| self.edges[id].other(v))
            .filter(|&x| x != v)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn has_loops(&self) -> bool {
        self.edges.iter().any(Edge::is_loop)
    }

    /// No loops and no parallel edges.
    pub fn is_simple(&self) -> bool {
        if self.has_loops() {
            return false;
        }
        let mut pairs: Vec<(usize, usize)> = self
            .edges
            .iter()
            .map(|e| (e.u.min(e.v), e.u.max(e.v)))
            .collect();
        pairs.sort_unstable();
        pairs.windows(2).all(|w| w[0] != w[1])
    }

    pub fn is_unit_weight(&self) -> bool {
        self.edges.iter().all(|e| e.weight == 1.0)
    }

    /// Simple and unit-weight.
    pub fn is_plain(&self) -> bool {
        self.is_unit_weight() && self.is_simple()
    }

    /// Component label of every vertex, labels assigned in order of first vertex.
    pub fn components(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            let mut stack = vec![s];
            while let Some(x) = stack.pop() {
                for &id in &self.incidence[x] {
                    let y = self.edges[id].other(x);
                    if label[y] == usize::MAX {
                        label[y] = next;
                        stack.push(y);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.components().iter().all(|&c| c == 0)
    }

    /// BFS hop distances from `s`; `None` for unreachable vertices.
    pub fn bfs_distances(&self, s: usize) -> Result<Vec<Option<usize>>> {
        self.check_vertex(s)?;
        let mut dist = vec![None; self.n];
        dist[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            let dx = dist[x].unwrap();
            for y in self.neighbors(x) {
                if dist[y].is_none() {
                    dist[y] = Some(dx + 1);
                    queue.push_back(y);
                }
            }
        }
        Ok(dist)
    }

    /// Largest hop distance between any two vertices.
    pub fn diameter(&self) -> Result<usize> {
        let mut best = 0;
        for s in 0..self.n {
            for d in self.bfs_distances(s)? {
                best = best.max(d.ok_or(Error::Disconnected)?);
            }
        }
        Ok(best)
    }

    /// A minimum-hop path from `u` to `v`. Among shortest paths the one choosing
    /// the lowest-labelled next vertex at every step is returned.
    pub fn shortest_path(&self, u: usize, v: usize) -> Result<Vec<usize>> {
        self.check_vertex(u)?;
        let to_target = self.bfs_distances(v)?;
        let mut d = to_target[u].ok_or(Error::NoPath { from: u, to: v })?;
        let mut path = vec![u];
        let mut x = u;
        while d > 0 {
            x = self
                .neighbors(x)
                .into_iter()
                .find(|&y| to_target[y] == Some(d - 1))
                .expect("BFS layers are consistent");
            path.push(x);
            d -= 1;
        }
        Ok(path)
    }

    /// Edge multiset in canonical form: endpoints ordered, weights rounded to
    /// 12 decimals, sorted.
    pub fn canonical_edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out: Vec<(usize, usize, f64)> = self
            .edges
            .iter()
            .map(|e| (e.u.min(e.v), e.u.max(e.v), round12(e.weight)))
            .collect();
        out.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)).then(a.2.total_cmp(&b.2)));
        out
    }

    /// Same vertices and edges with vertex `x` renamed to `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::Parameter(format!(
                "permutation has length {}, expected {}",
                perm.len(),
                self.n
            )));
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Parameter("not a permutation".into()));
            }
        }
        Graph::from_edges(
            self.n,
            self.edges.iter().map(|e| (perm[e.u], perm[e.v], e.weight)),
        )
    }

    /// Copy with every weight replaced by `f(edge)`.
    pub fn reweighted<F: Fn(&Edge) -> f64>(&self, f: F) -> Result<Graph> {
        Graph::from_edges(self.n, self.edges.iter().map(|e| (e.u, e.v, f(e))))
    }

    /// Copy without the listed edge ids.
    pub fn without_edges(&self, ids: &[usize]) -> Result<Graph> {
        for &id in ids {
            if id >= self.m() {
                return Err(Error::Parameter(format!("edge id {id} out of range")));
            }
        }
        Graph::from_edges(
            self.n,
            self.edges
                .iter()
                .enumerate()
                .filter(|(id, _)| !ids.contains(id))
                .map(|(_, e)| (e.u, e.v, e.weight)),
        )
    }

    /// Induced subgraph on `vertices` (relabelled `0..k` in the given order).
    pub fn induced(&self, vertices: &[usize]) -> Result<Graph> {
        let mut index = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            self.check_vertex(v)?;
            index[v] = i;
        }
        Graph::from_edges(
            vertices.len(),
            self.edges
                .iter()
                .filter(|e| index[e.u] != usize::MAX && index[e.v] != usize::MAX)
                .map(|e| (index[e.u], index[e.v], e.weight)),
        )
    }

    /// Serialize in the text format: `n m`, then one `u v w` line per edge.
    pub fn to_text(&self) -> String {
        self.to_text_with_header(&[])
    }

    /// Like [`Graph::to_text`] with leading `# key=value` comment lines.
    pub fn to_text_with_header(&self, header: &[(&str, String)]) -> String {
        let mut s = String::new();
        for (k, v) in header {
            s.push_str(&format!("# {k}={v}\n"));
        }
        s.push_str(&format!("{} {}\n", self.n, self.m()));
        for e in &self.edges {
            s.push_str(&format!("{} {} {}\n", e.u, e.v, e.weight));
        }
        s
    }

    /// Parse the text format. Blank lines and lines starting with `#` are skipped.
    pub fn from_text(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line, head) = lines.next().ok_or(Error::Parse {
            line: 0,
            message: "missing `n m` header".into(),
        })?;
        let fields: Vec<&str> = head.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::Parse {
                line,
                message: "header must be `n m`".into(),
            });
        }
        let n: usize = parse_field(fields[0], line)?;
        let m: usize = parse_field(fields[1], line)?;
        let mut g = Graph::empty(n);
        for (line, l) in lines.by_ref().take(m) {
            let fields: Vec<&str> = l.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::Parse {
                    line,
                    message: "edge line must be `u v w`".into(),
                });
            }
            let u = parse_field(fields[0], line)?;
            let v = parse_field(fields[1], line)?;
            let w: f64 = parse_field(fields[2], line)?;
            g.add_edge(u, v, w).map_err(|e| Error::Parse {
                line,
                message: e.to_string(),
            })?;
        }
        if g.m() != m {
            return Err(Error::Parse {
                line,
                message: format!("header declares {m} edges, found {}", g.m()),
            });
        }
        if let Some((line, _)) = lines.next() {
            return Err(Error::Parse {
                line,
                message: "trailing content after the declared edges".into(),
            });
        }
        Ok(g)
    }
}

/// Equality of vertex count and canonical edge multiset.
impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.canonical_edges() == other.canonical_edges()
    }
}

fn round12(w: f64) -> f64 {
    (w * 1e12).round() / 1e12
}

pub(crate) fn parse_field<T: FromStr>(s: &str, line: usize) -> Result<T> {
    s.parse().map_err(|_| Error::Parse {
        line,
        message: format!("cannot parse `{s}`"),
    })
}

/// Named graph families with their canonical labelling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFamily {
    /// `P_n`: vertices `0..n` in order.
    Path(usize),
    /// `Z_n`: ring order, `n >= 3`.
    Cycle(usize),
    /// `K_n`.
    Complete(usize),
    /// `P_rows □ P_cols`.
    Grid2d(usize, usize),
    /// `Z_rows □ Z_cols`.
    Torus2d(usize, usize),
    /// Clique on the first `n - ⌊n/3⌋` vertices, then a path of `⌊n/3⌋`
    /// vertices hanging off the last clique vertex.
    Lollipop(usize),
    /// Centre `0` with this many leaves.
    Star(usize),
    /// Complete binary tree on `n` vertices in heap order.
    BinaryTree(usize),
}

impl GraphFamily {
    pub fn generate(&self) -> Result<Graph> {
        let bad = |what: &str| Err(Error::Parameter(format!("{self}: {what}")));
        match *self {
            GraphFamily::Path(n) => {
                if n < 1 {
                    return bad("need n >= 1");
                }
                Graph::from_unit_edges(n, (1..n).map(|i| (i - 1, i)))
            }
            GraphFamily::Cycle(n) => {
                if n < 3 {
                    return bad("need n >= 3");
                }
                Graph::from_unit_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
            }
            GraphFamily::Complete(n) => {
                if n < 1 {
                    return bad("need n >= 1");
                }
                Graph::from_unit_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))))
            }
            GraphFamily::Grid2d(r, c) => {
                if r < 1 || c < 1 {
                    return bad("need both sides >= 1");
                }
                cartesian_product(&GraphFamily::Path(r).generate()?, &GraphFamily::Path(c).generate()?)
            }
            GraphFamily::Torus2d(r, c) => {
                if r < 3 || c < 3 {
                    return bad("need both sides >= 3");
                }
                cartesian_product(&GraphFamily::Cycle(r).generate()?, &GraphFamily::Cycle(c).generate()?)
            }
            GraphFamily::Lollipop(n) => {
                if n < 3 {
                    return bad("need n >= 3");
                }
                let tail = n / 3;
                let clique = n - tail;
                let mut edges: Vec<(usize, usize)> =
                    (0..clique).flat_map(|i| (i + 1..clique).map(move |j| (i, j))).collect();
                edges.extend((clique..n).map(|i| (i - 1, i)));
                Graph::from_unit_edges(n, edges)
            }
            GraphFamily::Star(leaves) => Graph::from_unit_edges(leaves + 1, (1..=leaves).map(|i| (0, i))),
            GraphFamily::BinaryTree(n) => {
                if n < 1 {
                    return bad("need n >= 1");
                }
                Graph::from_unit_edges(n, (1..n).map(|i| ((i - 1) / 2, i)))
            }
        }
    }

    /// Closed-form `(n, m)` of the generated instance.
    pub fn expected_counts(&self) -> (usize, usize) {
        match *self {
            GraphFamily::Path(n) => (n, n.saturating_sub(1)),
            GraphFamily::Cycle(n) => (n, n),
            GraphFamily::Complete(n) => (n, n * n.saturating_sub(1) / 2),
            GraphFamily::Grid2d(r, c) => (r * c, r * (c - 1) + c * (r - 1)),
            GraphFamily::Torus2d(r, c) => (r * c, 2 * r * c),
            GraphFamily::Lollipop(n) => {
                let clique = n - n / 3;
                (n, clique * (clique - 1) / 2 + n / 3)
            }
            GraphFamily::Star(l) => (l + 1, l),
            GraphFamily::BinaryTree(n) => (n, n.saturating_sub(1)),
        }
    }
}

impl fmt::Display for GraphFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphFamily::Path(n) => write!(f, "path:{n}"),
            GraphFamily::Cycle(n) => write!(f, "cycle:{n}"),
            GraphFamily::Complete(n) => write!(f, "complete:{n}"),
            GraphFamily::Grid2d(r, c) => write!(f, "grid2d:{r}x{c}"),
            GraphFamily::Torus2d(r, c) => write!(f, "torus2d:{r}x{c}"),
            GraphFamily::Lollipop(n) => write!(f, "lollipop:{n}"),
            GraphFamily::Star(l) => write!(f, "star:{l}"),
            GraphFamily::BinaryTree(n) => write!(f, "binary-tree:{n}"),
        }
    }
}

impl FromStr for GraphFamily {
    type Err = Error;

    /// Parses `name:params`, e.g. `cycle:8`, `grid2d:4x5`, `torus2d:6` (square).
    fn from_str(s: &str) -> Result<Self> {
        let (name, params) = s
            .split_once(':')
            .ok_or_else(|| Error::Parameter(format!("family `{s}` must look like name:params")))?;
        let one = |p: &str| -> Result<usize> {
            p.trim()
                .parse()
                .map_err(|_| Error::Parameter(format!("bad size `{p}` in `{s}`")))
        };
        let two = |p: &str| -> Result<(usize, usize)> {
            match p.split_once(['x', ',']) {
                Some((a, b)) => Ok((one(a)?, one(b)?)),
                None => {
                    let k = one(p)?;
                    Ok((k, k))
                }
            }
        };
        Ok(match name.trim() {
            "path" => GraphFamily::Path(one(params)?),
            "cycle" => GraphFamily::Cycle(one(params)?),
            "complete" => GraphFamily::Complete(one(params)?),
            "grid2d" | "grid" => {
                let (r, c) = two(params)?;
                GraphFamily::Grid2d(r, c)
            }
            "torus2d" | "torus" => {
                let (r, c) = two(params)?;
                GraphFamily::Torus2d(r, c)
            }
            "lollipop" => GraphFamily::Lollipop(one(params)?),
            "star" => GraphFamily::Star(one(params)?),
            "binary-tree" | "binarytree" => GraphFamily::BinaryTree(one(params)?),
            other => return Err(Error::Parameter(format!("unknown family `{other}`"))),
        })
    }
}

/// Cartesian product `G □ H`. Vertex `(a, x)` is encoded as `a * n_H + x`.
///
/// Both factors must be simple with unit weights.
pub fn cartesian_product(g: &Graph, h: &Graph) -> Result<Graph> {
    if !g.is_plain() || !h.is_plain() {
        return Err(Error::Unsupported(
            "cartesian product needs simple unit-weight factors".into(),
        ));
    }
    let nh = h.n();
    let mut out = Graph::empty(g.n() * nh);
    for e in g.edges() {
        for x in 0..nh {
            out.add_edge(e.u * nh + x, e.v * nh + x, 1.0)?;
        }
    }
    for a in 0..g.n() {
        for e in h.edges() {
            out.add_edge(a * nh + e.u, a * nh + e.v, 1.0)?;
        }
    }
    Ok(out)
}

/// Decode a product vertex id into `(a, x)`.
pub fn product_coords(id: usize, n_h: usize) -> (usize, usize) {
    (id / n_h, id % n_h)
}

/// A random labelled tree (vertex `v` attaches to a uniform earlier vertex)
/// plus up to `extra` random edges, drawn from stream `stream` of `seed`.
///
/// With `multi`, extra edges may be loops or parallel edges; otherwise they
/// are skipped until a new pair turns up. With `weighted`, every weight is
/// uniform in `[0.5, 2)`.
pub fn random_connected(n: usize, extra: usize, multi: bool, weighted: bool, seed: u64, stream: u64) -> Result<Graph> {
    if n == 0 {
        return Err(Error::Parameter("need at least one vertex".into()));
    }
    let mut rng = stream_rng(seed, stream);
    let weight = |rng: &mut crate::rng::WalkRng| if weighted { rng.random_range(0.5..2.0) } else { 1.0 };
    let mut g = Graph::empty(n);
    let mut present = HashSet::new();
    for v in 1..n {
        let u = rng.random_range(0..v);
        let w = weight(&mut rng);
        g.add_edge(u, v, w)?;
        present.insert((u, v));
    }
    let (mut added, mut tries) = (0, 0);
    while added < extra && tries < 50 * (extra + 1) {
        tries += 1;
        let (a, b) = (rng.random_range(0..n), rng.random_range(0..n));
        let key = (a.min(b), a.max(b));
        if !multi && (a == b || present.contains(&key)) {
            continue;
        }
        let w = weight(&mut rng);
        g.add_edge(a, b, w)?;
        present.insert(key);
        added += 1;
    }
    Ok(g)
}
