//! Conductance of a reversible chain, exactly by subset enumeration and as an
//! upper bound by a spectral sweep.
//!
//! `Φ = min_{π(S) ≤ 1/2} Q(S, S̄) / π(S)` with `Q(x, y) = π(x) P[x][y]`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{detailed_balance_violation, spectrum, stationary, TransitionKernel};
use crate::graph::Graph;
use crate::par::Executor;
use crate::weighting::Scheme;

/// Largest chain accepted by [`conductance_exact`].
pub const EXACT_CAP: usize = 22;

/// Subsets are split into `2^CHUNK_BITS` independent Gray-code runs.
const CHUNK_BITS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ExactEnumeration,
    SweepUpperBound,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConductanceResult {
    pub phi: f64,
    /// The minimizing set, on the side with `π(S) ≤ 1/2`.
    pub subset: Vec<usize>,
    pub method: Method,
    pub lazy: bool,
    pub scheme: Scheme,
}

/// Symmetric flow matrix `F[x][y] = π_x P[x][y]`, row-major.
fn flows(k: &TransitionKernel) -> Result<(Vec<f64>, Vec<f64>)> {
    let pi = stationary(k)?;
    let violation = detailed_balance_violation(k, &pi);
    if violation > 1e-9 {
        return Err(Error::NotReversible(violation));
    }
    let n = k.n();
    let mut f = vec![0.0; n * n];
    for x in 0..n {
        for y in 0..n {
            f[x * n + y] = pi[x] * k.get(x, y);
        }
    }
    Ok((pi, f))
}

/// `Q(S, S̄) / min(π(S), π(S̄))` from scratch, for a bitmask over all vertices.
fn ratio_of(mask: u64, n: usize, pi: &[f64], f: &[f64]) -> f64 {
    let inside = |v: usize| mask >> v & 1 == 1;
    let mut q = 0.0;
    let mut mass = 0.0;
    for x in 0..n {
        if inside(x) {
            mass += pi[x];
            for y in 0..n {
                if !inside(y) {
                    q += f[x * n + y];
                }
            }
        }
    }
    q / mass.min(1.0 - mass)
}

fn side_of(mask: u64, n: usize, pi: &[f64]) -> Vec<usize> {
    let mass: f64 = (0..n).filter(|&v| mask >> v & 1 == 1).map(|v| pi[v]).sum();
    let keep = mass <= 0.5;
    (0..n).filter(|&v| (mask >> v & 1 == 1) == keep).collect()
}

/// Best `(value, mask)` among sets `{0} ∪ T` where `T`'s top bits are `chunk`.
fn scan_chunk(chunk: u64, n: usize, low_bits: usize, pi: &[f64], f: &[f64]) -> (f64, u64) {
    // Bit i of a Gray word corresponds to vertex i + 1.
    let full = (1u64 << n) - 1;
    let mut mask = 1 | chunk << (low_bits + 1);
    let inside = |m: u64, v: usize| m >> v & 1 == 1;
    // a[v] = Σ_{x ∈ S, x ≠ v} F[x][v]
    let mut a = vec![0.0; n];
    let mut q = 0.0;
    let mut mass = 0.0;
    for x in 0..n {
        if inside(mask, x) {
            mass += pi[x];
            for y in 0..n {
                if y != x {
                    a[y] += f[x * n + y];
                }
                if !inside(mask, y) {
                    q += f[x * n + y];
                }
            }
        }
    }
    let mut best = (f64::INFINITY, 0u64);
    let mut consider = |mask: u64, q: f64, mass: f64| {
        if mask != full {
            let value = q / mass.min(1.0 - mass);
            if value < best.0 {
                best = (value, mask);
            }
        }
    };
    consider(mask, q, mass);
    for step in 1u64..1 << low_bits {
        let v = step.trailing_zeros() as usize + 1;
        let out_of_s = pi[v] - f[v * n + v] - a[v];
        if inside(mask, v) {
            q += a[v] - out_of_s;
            mass -= pi[v];
            mask &= !(1 << v);
            for y in 0..n {
                if y != v {
                    a[y] -= f[v * n + y];
                }
            }
        } else {
            q += out_of_s - a[v];
            mass += pi[v];
            mask |= 1 << v;
            for y in 0..n {
                if y != v {
                    a[y] += f[v * n + y];
                }
            }
        }
        consider(mask, q, mass);
    }
    best
}

/// Exact conductance by enumerating every set containing vertex 0 (its
/// complement covers the rest), `n ≤ 22`.
pub fn conductance_exact(k: &TransitionKernel, exec: Executor) -> Result<ConductanceResult> {
    let n = k.n();
    if n > EXACT_CAP {
        return Err(Error::TooLarge {
            what: "exact conductance",
            size: n,
            cap: EXACT_CAP,
        });
    }
    if n < 2 {
        return Err(Error::Parameter("conductance needs at least two vertices".into()));
    }
    let (pi, f) = flows(k)?;
    let free = n - 1;
    let high = free.min(CHUNK_BITS);
    let low = free - high;
    let results = exec.map_indexed(1 << high, |c| scan_chunk(c as u64, n, low, &pi, &f));
    let mut best = (f64::INFINITY, 0u64);
    for r in results {
        if r.0 < best.0 {
            best = r;
        }
    }
    Ok(ConductanceResult {
        phi: ratio_of(best.1, n, &pi, &f),
        subset: side_of(best.1, n, &pi),
        method: Method::ExactEnumeration,
        lazy: k.is_lazy(),
        scheme: k.scheme(),
    })
}

/// Upper bound on `Φ`: the best prefix cut of the vertices ordered by the
/// second right eigenvector (ties by label).
pub fn conductance_sweep(k: &TransitionKernel) -> Result<ConductanceResult> {
    let n = k.n();
    if n < 2 {
        return Err(Error::Parameter("conductance needs at least two vertices".into()));
    }
    let (pi, f) = flows(k)?;
    let s = spectrum(k)?;
    let v2 = s.vectors.column(1);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| v2[a].total_cmp(&v2[b]).then(a.cmp(&b)));
    let mut in_set = vec![false; n];
    let (mut q, mut mass) = (0.0, 0.0);
    let mut best = (f64::INFINITY, 0usize);
    for (i, &v) in order.iter().enumerate().take(n - 1) {
        let to_set: f64 = (0..n).filter(|&x| in_set[x]).map(|x| f[v * n + x]).sum();
        let to_rest: f64 = (0..n).filter(|&x| !in_set[x] && x != v).map(|x| f[v * n + x]).sum();
        q += to_rest - to_set;
        mass += pi[v];
        in_set[v] = true;
        let value = q / mass.min(1.0 - mass);
        if value < best.0 {
            best = (value, i + 1);
        }
    }
    let prefix = &order[..best.1];
    let mass: f64 = prefix.iter().map(|&v| pi[v]).sum();
    let mut subset: Vec<usize> = if mass <= 0.5 {
        prefix.to_vec()
    } else {
        order[best.1..].to_vec()
    };
    subset.sort_unstable();
    Ok(ConductanceResult {
        phi: best.0,
        subset,
        method: Method::SweepUpperBound,
        lazy: k.is_lazy(),
        scheme: k.scheme(),
    })
}

/// Exact conductance of the walk on `g` under `scheme`.
pub fn graph_conductance(g: &Graph, scheme: Scheme, lazy: bool, exec: Executor) -> Result<ConductanceResult> {
    conductance_exact(&TransitionKernel::build(g, scheme, lazy)?, exec)
}

/// Margins of `Φ²/2 ≤ 1 − λ₂ ≤ 2Φ` for the lazy walk on `g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SandwichMargins {
    pub phi: f64,
    pub gap: f64,
    /// `(1 − λ₂) − Φ²/2`
    pub lower: f64,
    /// `2Φ − (1 − λ₂)`
    pub upper: f64,
}

impl SandwichMargins {
    pub fn holds(&self) -> bool {
        self.lower >= -1e-9 && self.upper >= -1e-9
    }
}

pub fn jerrum_sinclair_check(g: &Graph, exec: Executor) -> Result<SandwichMargins> {
    let k = TransitionKernel::from_graph(g, true)?;
    let phi = conductance_exact(&k, exec)?.phi;
    let gap = 1.0 - spectrum(&k)?.values[1];
    Ok(SandwichMargins {
        phi,
        gap,
        lower: gap - phi * phi / 2.0,
        upper: 2.0 * phi - gap,
    })
}

/// Smallest `t` with `√(π_max/π_min) (1 − Φ²/2)^t ≤ n⁻³`.
pub fn mixing_from_conductance(k: &TransitionKernel, phi: f64) -> Result<u64> {
    if !(phi > 0.0 && phi <= 1.0) {
        return Err(Error::Parameter(format!("Φ must lie in (0, 1], got {phi}")));
    }
    let pi = stationary(k)?;
    let (lo, hi) = pi.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &p| (a.min(p), b.max(p)));
    let n = k.n() as f64;
    let lead = (hi / lo).sqrt();
    let rate = 1.0 - phi * phi / 2.0;
    let target = n.powi(-3);
    let holds = |t: u64| lead * rate.powf(t as f64) <= target;
    let mut t = ((target / lead).ln() / rate.ln()).ceil().max(0.0) as u64;
    while t > 0 && holds(t - 1) {
        t -= 1;
    }
    while !holds(t) {
        t += 1;
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::mixing_time;
    use crate::graph::GraphFamily;

    fn fam(f: GraphFamily) -> Graph {
        f.generate().unwrap()
    }

    /// Direct minimum over every subset with `π(S) ≤ 1/2`.
    fn brute(g: &Graph, lazy: bool) -> f64 {
        let k = TransitionKernel::from_graph(g, lazy).unwrap();
        let pi = stationary(&k).unwrap();
        let n = g.n();
        let mut best = f64::INFINITY;
        for mask in 1u64..(1 << n) - 1 {
            let s: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            let mass: f64 = s.iter().map(|&v| pi[v]).sum();
            if mass > 0.5 + 1e-15 {
                continue;
            }
            let q: f64 = s
                .iter()
                .flat_map(|&x| (0..n).filter(move |&y| mask >> y & 1 == 0).map(move |y| (x, y)))
                .map(|(x, y)| pi[x] * k.get(x, y))
                .sum();
            best = best.min(q / mass);
        }
        best
    }

    #[test]
    fn small_values() {
        let k4 = TransitionKernel::from_graph(&fam(GraphFamily::Complete(4)), false).unwrap();
        let r = conductance_exact(&k4, Executor::Sequential).unwrap();
        assert!((r.phi - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(r.subset.len(), 2);
        for n in [4, 6, 8, 10, 12] {
            let k = TransitionKernel::from_graph(&fam(GraphFamily::Cycle(n)), false).unwrap();
            let r = conductance_exact(&k, Executor::Parallel).unwrap();
            assert!((r.phi - 2.0 / n as f64).abs() < 1e-12, "Z_{n}");
        }
        let p2 = TransitionKernel::from_graph(&fam(GraphFamily::Path(2)), false).unwrap();
        assert!((conductance_exact(&p2, Executor::Sequential).unwrap().phi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lazy_halves_the_cut() {
        let g = fam(GraphFamily::Lollipop(9));
        let a = graph_conductance(&g, Scheme::Uniform, false, Executor::Sequential).unwrap();
        let b = graph_conductance(&g, Scheme::Uniform, true, Executor::Sequential).unwrap();
        assert!((a.phi - 2.0 * b.phi).abs() < 1e-12);
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for f in [GraphFamily::Lollipop(10), GraphFamily::Grid2d(3, 3), GraphFamily::Star(6), GraphFamily::BinaryTree(9)] {
            let g = fam(f);
            for lazy in [false, true] {
                let k = TransitionKernel::from_graph(&g, lazy).unwrap();
                let exact = conductance_exact(&k, Executor::Parallel).unwrap();
                assert!((exact.phi - brute(&g, lazy)).abs() < 1e-12, "{f}");
                let s: f64 = exact.subset.iter().map(|&v| stationary(&k).unwrap()[v]).sum();
                assert!(s <= 0.5 + 1e-12);
            }
        }
    }

    #[test]
    fn workers_do_not_change_the_answer() {
        let g = fam(GraphFamily::Torus2d(3, 5));
        let k = TransitionKernel::from_graph(&g, false).unwrap();
        let a = conductance_exact(&k, Executor::Sequential).unwrap();
        let b = conductance_exact(&k, Executor::Threads(3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sweep_upper_bounds_exact() {
        let z = TransitionKernel::from_graph(&fam(GraphFamily::Cycle(12)), false).unwrap();
        let s = conductance_sweep(&z).unwrap();
        assert!((s.phi - 2.0 / 12.0).abs() < 1e-12);
        for f in [GraphFamily::Complete(7), GraphFamily::Lollipop(12), GraphFamily::Grid2d(3, 4)] {
            let k = TransitionKernel::from_graph(&fam(f), true).unwrap();
            let e = conductance_exact(&k, Executor::Parallel).unwrap().phi;
            assert!(conductance_sweep(&k).unwrap().phi >= e - 1e-12);
        }
    }

    #[test]
    fn sandwich_examples() {
        for f in [GraphFamily::Complete(4), GraphFamily::Cycle(8)] {
            assert!(jerrum_sinclair_check(&fam(f), Executor::Sequential).unwrap().holds());
        }
        let m = jerrum_sinclair_check(&fam(GraphFamily::Complete(4)), Executor::Sequential).unwrap();
        assert!((m.phi - 1.0 / 3.0).abs() < 1e-12);
        // lazy single edge: spectrum {1, 0}, Φ = 1/2
        let m = jerrum_sinclair_check(&fam(GraphFamily::Path(2)), Executor::Sequential).unwrap();
        assert!((m.phi - 0.5).abs() < 1e-12);
        assert!((m.gap - 1.0).abs() < 1e-12);
        assert!((m.lower - 0.875).abs() < 1e-12);
        assert!(m.upper.abs() < 1e-12);
    }

    #[test]
    fn conductance_mixing_bound_dominates() {
        for f in [GraphFamily::Complete(8), GraphFamily::Cycle(16), GraphFamily::Lollipop(12)] {
            let k = TransitionKernel::from_graph(&fam(f), true).unwrap();
            let phi = conductance_exact(&k, Executor::Parallel).unwrap().phi;
            assert!(mixing_from_conductance(&k, phi).unwrap() >= mixing_time(&k, None).unwrap(), "{f}");
        }
        let k = TransitionKernel::from_graph(&fam(GraphFamily::Cycle(16)), true).unwrap();
        let t = mixing_from_conductance(&k, 1.0).unwrap();
        assert_eq!(t, (3.0 * 16f64.ln() / 2f64.ln()).ceil() as u64);
    }
}
