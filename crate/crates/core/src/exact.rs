//! Exact linear-algebra computations on transition kernels.
//!
//! Everything here is dense: kernels are `n × n` matrices and every solve is an
//! LU factorization with partial pivoting. Solves are capped at
//! [`DENSE_CAP`](crate::linalg::DENSE_CAP) vertices and the cover-time oracle at
//! [`COVER_DP_CAP`].

use std::collections::VecDeque;
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::linalg;
use crate::par::Executor;
use crate::tol;
use crate::weighting::{apply_scheme, Scheme};

/// Largest graph accepted by [`exact_cover_time`].
pub const COVER_DP_CAP: usize = 13;

/// Largest mixing time [`mixing_time`] will report.
pub const MIXING_CAP: u64 = 1_000_000;

/// A row-stochastic transition matrix.
#[derive(Debug, Clone)]
pub struct TransitionKernel {
    p: DMatrix<f64>,
    lazy: bool,
    scheme: Scheme,
    /// Vertex conductances `c(v)` when built from a graph.
    conductance: Option<Vec<f64>>,
}

impl TransitionKernel {
    /// Walk kernel of `g` using its stored weights: `P[u][v] = Σ c(e) / c(u)`.
    /// A loop at `u` contributes `2c(e)/c(u)` to `P[u][u]`.
    pub fn from_graph(g: &Graph, lazy: bool) -> Result<Self> {
        let n = g.n();
        if n == 0 {
            return Err(Error::Parameter("graph has no vertices".into()));
        }
        linalg::check_cap("transition kernel", n)?;
        if let Some(v) = (0..n).find(|&v| g.degrees()[v] == 0) {
            return Err(Error::ZeroDegree(v));
        }
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        let c = g.weighted_degrees().to_vec();
        let mut p = DMatrix::zeros(n, n);
        for u in 0..n {
            for (v, w) in g.edge_ends(u) {
                p[(u, v)] += w / c[u];
            }
        }
        let k = TransitionKernel {
            p,
            lazy: false,
            scheme: Scheme::Uniform,
            conductance: Some(c),
        };
        Ok(if lazy { k.lazy() } else { k })
    }

    /// Kernel of `g` under `scheme`. The uniform scheme keeps `g`'s weights;
    /// the others reweight the (simple) graph first.
    pub fn build(g: &Graph, scheme: Scheme, lazy: bool) -> Result<Self> {
        let mut k = match scheme {
            Scheme::Uniform => Self::from_graph(g, lazy)?,
            s => Self::from_graph(&apply_scheme(g, s)?, lazy)?,
        };
        k.scheme = scheme;
        Ok(k)
    }

    /// Wrap an arbitrary matrix, checking that it is square and row-stochastic.
    pub fn from_matrix(p: DMatrix<f64>) -> Result<Self> {
        if p.nrows() != p.ncols() || p.nrows() == 0 {
            return Err(Error::Parameter(format!("kernel must be square and nonempty, got {}x{}", p.nrows(), p.ncols())));
        }
        linalg::check_cap("transition kernel", p.nrows())?;
        for u in 0..p.nrows() {
            let row = p.row(u);
            if row.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
                return Err(Error::Parameter(format!("row {u} has a negative or non-finite entry")));
            }
            let s: f64 = row.iter().sum();
            if (s - 1.0).abs() > tol::CONSTRUCTION {
                return Err(Error::Parameter(format!("row {u} sums to {s}")));
            }
        }
        Ok(TransitionKernel {
            p,
            lazy: false,
            scheme: Scheme::Uniform,
            conductance: None,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Parameter("kernel rows must all have length n".into()));
        }
        Self::from_matrix(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    /// `½P + ½I`.
    pub fn lazy(&self) -> Self {
        let n = self.n();
        TransitionKernel {
            p: (&self.p + DMatrix::identity(n, n)) * 0.5,
            lazy: true,
            scheme: self.scheme,
            conductance: self.conductance.clone(),
        }
    }

    pub fn with_scheme_tag(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn n(&self) -> usize {
        self.p.nrows()
    }

    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.p[(u, v)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.p
    }

    pub fn is_lazy(&self) -> bool {
        self.lazy
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn conductances(&self) -> Option<&[f64]> {
        self.conductance.as_deref()
    }

    pub fn max_abs_diff(&self, other: &TransitionKernel) -> f64 {
        if self.n() != other.n() {
            return f64::INFINITY;
        }
        self.p.iter().zip(other.p.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Largest `|Σ_v P[u][v] − 1|`.
    pub fn row_sum_error(&self) -> f64 {
        (0..self.n())
            .map(|u| (self.p.row(u).sum() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Nonzero entries of each row, for sparse vector-matrix products.
    pub fn sparse_rows(&self) -> Vec<Vec<(usize, f64)>> {
        (0..self.n())
            .map(|u| {
                (0..self.n())
                    .filter(|&v| self.p[(u, v)] != 0.0)
                    .map(|v| (v, self.p[(u, v)]))
                    .collect()
            })
            .collect()
    }

    /// Every vertex reaches every other through positive entries.
    pub fn is_irreducible(&self) -> bool {
        let n = self.n();
        let reach = |forward: bool| {
            let mut seen = vec![false; n];
            let mut queue = VecDeque::from([0]);
            seen[0] = true;
            while let Some(u) = queue.pop_front() {
                for v in 0..n {
                    let x = if forward { self.p[(u, v)] } else { self.p[(v, u)] };
                    if x > 0.0 && !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            seen.into_iter().all(|s| s)
        };
        reach(true) && reach(false)
    }

    /// CSV dump: a header comment line then one row per line.
    pub fn to_csv(&self) -> String {
        let mut out = format!(
            "# kernel n={} scheme={} lazy={}\n",
            self.n(),
            self.scheme,
            u8::from(self.lazy)
        );
        for u in 0..self.n() {
            let row: Vec<String> = self.p.row(u).iter().map(|x| format!("{x:?}")).collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "empty kernel file".into(),
        })?;
        let bad_header = |message: String| Error::Parse { line: 1, message };
        let fields = header
            .trim()
            .strip_prefix("# kernel")
            .ok_or_else(|| bad_header("missing `# kernel` header".into()))?;
        let (mut n, mut scheme, mut lazy) = (None, Scheme::Uniform, false);
        for kv in fields.split_whitespace() {
            let (k, v) = kv.split_once('=').ok_or_else(|| bad_header(format!("bad field `{kv}`")))?;
            match k {
                "n" => n = Some(v.parse::<usize>().map_err(|e| bad_header(e.to_string()))?),
                "scheme" => scheme = v.parse().map_err(|_| bad_header(format!("unknown scheme `{v}`")))?,
                "lazy" => lazy = v == "1",
                _ => return Err(bad_header(format!("unknown field `{k}`"))),
            }
        }
        let n = n.ok_or_else(|| bad_header("missing n".into()))?;
        let mut rows = Vec::with_capacity(n);
        for (i, line) in lines {
            let row = line
                .split(',')
                .map(|x| {
                    x.trim().parse::<f64>().map_err(|e| Error::Parse {
                        line: i + 1,
                        message: e.to_string(),
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            if row.len() != n {
                return Err(Error::Parse {
                    line: i + 1,
                    message: format!("expected {n} entries, found {}", row.len()),
                });
            }
            rows.push(row);
        }
        if rows.len() != n {
            return Err(Error::Parse {
                line: 1,
                message: format!("expected {n} rows, found {}", rows.len()),
            });
        }
        let mut k = Self::from_rows(&rows)?;
        k.scheme = scheme;
        k.lazy = lazy;
        Ok(k)
    }
}

/// Convenience wrapper for [`TransitionKernel::build`].
pub fn build_kernel(g: &Graph, scheme: Scheme, lazy: bool) -> Result<TransitionKernel> {
    TransitionKernel::build(g, scheme, lazy)
}

/// Stationary distribution of an irreducible kernel.
///
/// Graph kernels use the closed form `c(v)/c(G)`; other kernels solve
/// `π(P − I) = 0, Σπ = 1`. Either way `πP = π` is verified to 1e-10.
pub fn stationary(k: &TransitionKernel) -> Result<Vec<f64>> {
    if !k.is_irreducible() {
        return Err(Error::Reducible);
    }
    let n = k.n();
    let pi: Vec<f64> = match k.conductances() {
        Some(c) => {
            let total: f64 = c.iter().sum();
            c.iter().map(|x| x / total).collect()
        }
        None => {
            let mut a = k.matrix().transpose() - DMatrix::identity(n, n);
            a.row_mut(n - 1).fill(1.0);
            let mut b = DVector::zeros(n);
            b[n - 1] = 1.0;
            linalg::solve(a, &b, "stationary distribution")?.iter().copied().collect()
        }
    };
    let residual = stationarity_residual(k, &pi);
    if residual > 1e-10 {
        return Err(Error::Numeric(format!("stationary residual {residual:e}")));
    }
    Ok(pi)
}

/// `max_v |(πP)_v − π_v|`.
pub fn stationarity_residual(k: &TransitionKernel, pi: &[f64]) -> f64 {
    let row = DVector::from_column_slice(pi).transpose() * k.matrix();
    row.iter().zip(pi).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

/// `H[u][v]`: expected steps for the walk from `u` to first reach `v`.
#[derive(Debug, Clone)]
pub struct HittingMatrix {
    h: DMatrix<f64>,
}

impl HittingMatrix {
    pub fn n(&self) -> usize {
        self.h.nrows()
    }

    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.h[(u, v)]
    }

    pub fn max(&self) -> f64 {
        self.h.iter().copied().fold(0.0, f64::max)
    }

    /// Commute time `H[u][v] + H[v][u]`.
    pub fn commute(&self, u: usize, v: usize) -> f64 {
        self.h[(u, v)] + self.h[(v, u)]
    }

    /// `min_{u ≠ v} H[u][v]` over a vertex subset (at least two vertices).
    pub fn min_within(&self, set: &[usize]) -> f64 {
        let mut best = f64::INFINITY;
        for &u in set {
            for &v in set {
                if u != v {
                    best = best.min(self.h[(u, v)]);
                }
            }
        }
        best
    }

    /// `max_{u, v} H[u][v]` over a vertex subset.
    pub fn max_within(&self, set: &[usize]) -> f64 {
        let mut best = 0.0f64;
        for &u in set {
            for &v in set {
                best = best.max(self.h[(u, v)]);
            }
        }
        best
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.h
    }
}

/// All hitting times, one `(n−1) × (n−1)` solve per target.
pub fn exact_hitting(k: &TransitionKernel, exec: Executor) -> Result<HittingMatrix> {
    let n = k.n();
    if !k.is_irreducible() {
        return Err(Error::Reducible);
    }
    let columns = exec.map_indexed(n, |v| hitting_column(k, v));
    let mut h = DMatrix::zeros(n, n);
    for (v, col) in columns.into_iter().enumerate() {
        let col = col?;
        for u in 0..n {
            h[(u, v)] = col[u];
        }
    }
    Ok(HittingMatrix { h })
}

/// `H[·][target]`.
pub fn hitting_column(k: &TransitionKernel, target: usize) -> Result<Vec<f64>> {
    let n = k.n();
    if target >= n {
        return Err(Error::VertexOutOfRange { vertex: target, n });
    }
    let values = vec![(target, 0.0)];
    boundary_value_problem(k, &values, &vec![1.0; n])
}

/// `1/π_v`, the expected first-return time to `v`.
pub fn first_return(k: &TransitionKernel, v: usize) -> Result<f64> {
    let pi = stationary(k)?;
    pi.get(v)
        .map(|p| 1.0 / p)
        .ok_or(Error::VertexOutOfRange { vertex: v, n: k.n() })
}

/// `1 + Σ_w P[v][w] H[w][v]`, the first-return time computed from hitting times.
pub fn first_return_via_hitting(k: &TransitionKernel, h: &HittingMatrix, v: usize) -> f64 {
    1.0 + (0..k.n()).map(|w| k.get(v, w) * h.get(w, v)).sum::<f64>()
}

/// Extend `boundary` to a function harmonic on the remaining vertices.
pub fn harmonic_extension(k: &TransitionKernel, boundary: &[(usize, f64)]) -> Result<Vec<f64>> {
    boundary_value_problem(k, boundary, &vec![0.0; k.n()])
}

/// Solve `f(u) = source(u) + Σ_w P[u][w] f(w)` off the boundary with `f`
/// fixed on it. A zero source gives the harmonic extension, a unit source
/// gives expected hitting times of the boundary.
pub fn boundary_value_problem(k: &TransitionKernel, boundary: &[(usize, f64)], source: &[f64]) -> Result<Vec<f64>> {
    let n = k.n();
    if boundary.is_empty() {
        return Err(Error::Parameter("boundary must be nonempty".into()));
    }
    if source.len() != n {
        return Err(Error::Parameter(format!("source has length {}, expected {n}", source.len())));
    }
    let mut f = vec![0.0; n];
    let mut on_boundary = vec![false; n];
    for &(v, x) in boundary {
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
        on_boundary[v] = true;
        f[v] = x;
    }
    let interior: Vec<usize> = (0..n).filter(|&v| !on_boundary[v]).collect();
    if interior.is_empty() {
        return Ok(f);
    }
    let m = interior.len();
    let p = k.matrix();
    let a = DMatrix::from_fn(m, m, |i, j| f64::from(u8::from(i == j)) - p[(interior[i], interior[j])]);
    let b = DVector::from_fn(m, |i, _| {
        let u = interior[i];
        source[u] + boundary.iter().map(|&(v, x)| p[(u, v)] * x).sum::<f64>()
    });
    let x = linalg::solve(a, &b, "boundary value problem")?;
    for (i, &u) in interior.iter().enumerate() {
        f[u] = x[i];
    }
    Ok(f)
}

/// Eigenvalues and right eigenvectors of a reversible kernel.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// `λ_1 ≥ λ_2 ≥ … ≥ λ_n`.
    pub values: Vec<f64>,
    /// Column `i` is a right eigenvector of `P` for `values[i]`.
    pub vectors: DMatrix<f64>,
}

/// Diagonalize `N = D^{1/2} P D^{-1/2}` with `D = diag(π)`.
pub fn spectrum(k: &TransitionKernel) -> Result<Spectrum> {
    let n = k.n();
    let pi = stationary(k)?;
    let violation = detailed_balance_violation(k, &pi);
    if violation > 1e-9 {
        return Err(Error::NotReversible(violation));
    }
    let s: Vec<f64> = pi.iter().map(|x| x.sqrt()).collect();
    let p = k.matrix();
    let raw = DMatrix::from_fn(n, n, |i, j| s[i] * p[(i, j)] / s[j]);
    let sym = (&raw + raw.transpose()) * 0.5;
    let eig = SymmetricEigen::try_new(sym.clone(), f64::EPSILON, 10_000 * n.max(1)).ok_or_else(|| {
        Error::Numeric(format!(
            "symmetric eigensolver did not converge (n={n}, asymmetry {:e})",
            (&raw - raw.transpose()).amax()
        ))
    })?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])] / s[r]);
    if (values[0] - 1.0).abs() > 1e-10 {
        let residual = (&sym * eig.eigenvectors.clone() - &eig.eigenvectors * DMatrix::from_diagonal(&eig.eigenvalues)).amax();
        return Err(Error::Numeric(format!(
            "top eigenvalue {} differs from 1 (residual {residual:e})",
            values[0]
        )));
    }
    Ok(Spectrum { values, vectors })
}

/// `λ_1 ≥ … ≥ λ_n`.
pub fn eigenvalues(k: &TransitionKernel) -> Result<Vec<f64>> {
    Ok(spectrum(k)?.values)
}

/// `max_{u,x} |M[u][x] − π_x|`.
fn deviation(m: &DMatrix<f64>, pi: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for x in 0..m.ncols() {
        for u in 0..m.nrows() {
            worst = worst.max((m[(u, x)] - pi[x]).abs());
        }
    }
    worst
}

/// Smallest `t` with `max_{u,x} |P^t[u][x] − π_x| ≤ threshold`
/// (default `n⁻³`), by repeated squaring then binary search.
///
/// The deviation never increases with `t` because
/// `P^{t+1} − Π = P(P^t − Π)` and `P` is stochastic, so the search is exact.
pub fn mixing_time(k: &TransitionKernel, threshold: Option<f64>) -> Result<u64> {
    let n = k.n();
    let threshold = threshold.unwrap_or((n as f64).powi(-3));
    if !(threshold > 0.0) {
        return Err(Error::Parameter(format!("threshold must be positive, got {threshold}")));
    }
    let pi = stationary(k)?;
    if deviation(&DMatrix::identity(n, n), &pi) <= threshold {
        return Ok(0);
    }
    // powers[j] = P^{2^j}
    let mut powers = vec![k.matrix().clone()];
    while deviation(powers.last().unwrap(), &pi) > threshold {
        if 1u64 << (powers.len() - 1) >= MIXING_CAP {
            return Err(Error::MixingTimeout { cap: MIXING_CAP });
        }
        let last = powers.last().unwrap();
        powers.push(last * last);
    }
    let top = powers.len() - 1;
    if top == 0 {
        return Ok(1);
    }
    // Largest t with deviation above threshold, built bit by bit.
    let mut acc = powers[top - 1].clone();
    let mut t = 1u64 << (top - 1);
    for j in (0..top - 1).rev() {
        let cand = &acc * &powers[j];
        if deviation(&cand, &pi) > threshold {
            acc = cand;
            t += 1 << j;
        }
    }
    let t = t + 1;
    if t > MIXING_CAP {
        return Err(Error::MixingTimeout { cap: MIXING_CAP });
    }
    Ok(t)
}

/// `R_v(T) = Σ_{t<T} P^t[v][v]`, the expected number of visits to `v` in the
/// first `T` steps of a walk started there (counting time 0).
pub fn return_count(k: &TransitionKernel, v: usize, steps: usize) -> Result<f64> {
    let n = k.n();
    if v >= n {
        return Err(Error::VertexOutOfRange { vertex: v, n });
    }
    if steps == 0 {
        return Err(Error::Parameter("return count needs T ≥ 1".into()));
    }
    let rows = k.sparse_rows();
    let mut x = vec![0.0; n];
    let mut y = vec![0.0; n];
    x[v] = 1.0;
    let mut total = 0.0;
    for t in 0..steps {
        total += x[v];
        if t + 1 == steps {
            break;
        }
        y.iter_mut().for_each(|e| *e = 0.0);
        for (u, row) in rows.iter().enumerate() {
            if x[u] != 0.0 {
                for &(w, p) in row {
                    y[w] += x[u] * p;
                }
            }
        }
        std::mem::swap(&mut x, &mut y);
    }
    Ok(total)
}

/// Expected cover time from each start, by backward induction over visited
/// sets. `E[v, S]` for `v ∈ S` satisfies
/// `E[v, S] = 1 + Σ_{w ∈ S} P[v][w] E[w, S] + Σ_{w ∉ S} P[v][w] E[w, S ∪ {w}]`,
/// which is one `|S| × |S|` solve per set once all larger sets are known.
pub fn exact_cover_times(k: &TransitionKernel, exec: Executor) -> Result<Vec<f64>> {
    let n = k.n();
    if n > COVER_DP_CAP {
        return Err(Error::TooLarge {
            what: "exact cover-time oracle",
            size: n,
            cap: COVER_DP_CAP,
        });
    }
    if !k.is_irreducible() {
        return Err(Error::Reducible);
    }
    let full = (1usize << n) - 1;
    let mut table = vec![0.0f64; (full + 1) * n];
    let p = k.matrix();
    let mut layers: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for s in 1..=full {
        layers[s.count_ones() as usize].push(s);
    }
    for size in (1..n).rev() {
        let solved = exec.map_slice(&layers[size], |&s| {
            let members: Vec<usize> = (0..n).filter(|&v| s >> v & 1 == 1).collect();
            let m = members.len();
            let a = DMatrix::from_fn(m, m, |i, j| f64::from(u8::from(i == j)) - p[(members[i], members[j])]);
            let b = DVector::from_fn(m, |i, _| {
                let v = members[i];
                1.0 + (0..n)
                    .filter(|&w| s >> w & 1 == 0)
                    .map(|w| p[(v, w)] * table[(s | 1 << w) * n + w])
                    .sum::<f64>()
            });
            linalg::solve(a, &b, "cover-time subsystem").map(|x| (members, x))
        });
        for (&s, res) in layers[size].iter().zip(solved) {
            let (members, x) = res?;
            for (i, &v) in members.iter().enumerate() {
                table[s * n + v] = x[i];
            }
        }
    }
    Ok((0..n).map(|v| table[(1 << v) * n + v]).collect())
}

/// Expected time for the walk from `start` to visit every vertex.
pub fn exact_cover_time(k: &TransitionKernel, start: usize) -> Result<f64> {
    if start >= k.n() {
        return Err(Error::VertexOutOfRange { vertex: start, n: k.n() });
    }
    Ok(exact_cover_times(k, Executor::Sequential)?[start])
}

/// `max_{u,v} |π_u P[u][v] − π_v P[v][u]|` for a given `π`.
pub fn detailed_balance_violation(k: &TransitionKernel, pi: &[f64]) -> f64 {
    let n = k.n();
    let mut worst = 0.0f64;
    for u in 0..n {
        for v in u + 1..n {
            worst = worst.max((pi[u] * k.get(u, v) - pi[v] * k.get(v, u)).abs());
        }
    }
    worst
}

/// Detailed-balance violation against the kernel's own stationary distribution.
pub fn detailed_balance_check(k: &TransitionKernel) -> Result<f64> {
    Ok(detailed_balance_violation(k, &stationary(k)?))
}

/// Weighted graph with `c(i,j) = π_i P[i][j]` whose walk is the given chain.
/// Self-transitions become loops of weight `π_i P[i][i] / 2`.
pub fn chain_to_graph(k: &TransitionKernel, pi: &[f64]) -> Result<Graph> {
    let n = k.n();
    if pi.len() != n {
        return Err(Error::Parameter(format!("π has length {}, expected {n}", pi.len())));
    }
    let violation = detailed_balance_violation(k, pi);
    if violation > 1e-9 {
        return Err(Error::NotReversible(violation));
    }
    let mut g = Graph::empty(n);
    for i in 0..n {
        if k.get(i, i) > 0.0 {
            g.add_edge(i, i, pi[i] * k.get(i, i) / 2.0)?;
        }
        for j in i + 1..n {
            if k.get(i, j) > 0.0 {
                g.add_edge(i, j, pi[i] * k.get(i, j))?;
            }
        }
    }
    Ok(g)
}

/// The ball of radius `radius` around `v` induces a tree with no loops or
/// parallel edges.
pub fn is_locally_tree_like(g: &Graph, v: usize, radius: usize) -> Result<bool> {
    let dist = g.bfs_distances(v)?;
    let inside = |x: usize| dist[x].is_some_and(|d| d <= radius);
    let vertices = (0..g.n()).filter(|&x| inside(x)).count();
    let mut edges = 0;
    for e in g.edges() {
        if inside(e.u) && inside(e.v) {
            if e.is_loop() {
                return Ok(false);
            }
            edges += 1;
        }
    }
    Ok(edges + 1 == vertices)
}
