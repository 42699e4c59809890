//! Command-line flags and the resolved experiment spec.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;

use walklab::config_model::DegreeSequence;
use walklab::{cartesian_product, Graph, GraphFamily, Scheme};

use crate::catalog::Experiment;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Graph in the `n m` / `u v w` text format.
    #[arg(long, value_name = "FILE")]
    pub graph_file: Option<PathBuf>,
    /// Named family, e.g. `cycle:12`, `grid2d:4x5`, `lollipop:90`.
    #[arg(long, value_name = "NAME:PARAMS", value_parser = parse_family)]
    pub family: Option<GraphFamily>,
    /// Cartesian product of two families, e.g. `cycle:4,cycle:16`.
    #[arg(long, value_name = "A,B", value_parser = parse_product)]
    pub product: Option<(GraphFamily, GraphFamily)>,
    /// Degree sequence: a file with one degree per line, or `regular:r`.
    #[arg(long, value_name = "FILE|regular:r")]
    pub degseq: Option<String>,
    /// Edge weighting scheme.
    #[arg(long, default_value = "uniform", value_parser = parse_scheme)]
    pub scheme: Scheme,
    /// Use the lazy walk.
    #[arg(long)]
    pub lazy: bool,
    /// Monte Carlo trials, sampled graphs or attempts, depending on the experiment.
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub seed: u64,
    /// Directory for `<experiment>.csv` and `<experiment>.json`.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// What to print on stdout when `--out` is absent.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Worker threads; 0 uses every core. Results do not depend on it.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Sizes: `k`, `a..b` (inclusive) or `a,b,c`.
    #[arg(long, value_name = "SIZES", value_parser = parse_sizes)]
    pub n: Option<Sizes>,
    /// Degree of a regular sequence.
    #[arg(long, value_name = "R")]
    pub regular: Option<usize>,
    /// Path length for the connectivity demo.
    #[arg(long, value_name = "N")]
    pub path: Option<usize>,
    /// Independent runs of the connectivity demo.
    #[arg(long)]
    pub runs: Option<u64>,
}

fn parse_family(s: &str) -> Result<GraphFamily, String> {
    s.parse().map_err(|e: walklab::Error| e.to_string())
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    s.parse().map_err(|e: walklab::Error| e.to_string())
}

/// Split `A,B` at the first comma followed by a letter, so `grid2d:4,5` stays whole.
fn parse_product(s: &str) -> Result<(GraphFamily, GraphFamily), String> {
    let cut = s
        .char_indices()
        .find(|&(i, c)| c == ',' && s[i + 1..].starts_with(|x: char| x.is_ascii_alphabetic()))
        .map(|(i, _)| i)
        .ok_or_else(|| format!("product `{s}` must look like A,B"))?;
    Ok((parse_family(&s[..cut])?, parse_family(&s[cut + 1..])?))
}

/// A list of sizes given as one flag value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sizes(pub Vec<usize>);

fn parse_sizes(s: &str) -> Result<Sizes, String> {
    sizes(s).map(Sizes)
}

fn sizes(s: &str) -> Result<Vec<usize>, String> {
    let num = |x: &str| x.trim().parse::<usize>().map_err(|_| format!("bad size `{x}`"));
    if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (num(a)?, num(b)?);
        if a > b {
            return Err(format!("empty range `{s}`"));
        }
        Ok((a..=b).collect())
    } else {
        s.split(',').map(num).collect()
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GraphSource {
    Family { family: String },
    File { path: String },
    Product { g: String, h: String },
}

impl GraphSource {
    pub fn load(&self) -> Result<(String, Graph), CliError> {
        match self {
            GraphSource::Family { family } => {
                let f: GraphFamily = family.parse().map_err(CliError::from)?;
                Ok((family.clone(), f.generate()?))
            }
            GraphSource::File { path } => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::spec("--graph-file", e))?;
                let g = Graph::from_text(&text).map_err(|e| CliError::spec("--graph-file", e))?;
                Ok((path.clone(), g))
            }
            GraphSource::Product { g, h } => {
                let (a, b): (GraphFamily, GraphFamily) = (g.parse()?, h.parse()?);
                Ok((format!("{g}*{h}"), cartesian_product(&a.generate()?, &b.generate()?)?))
            }
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DegSeqSource {
    Regular { r: usize },
    File { path: String },
}

impl DegSeqSource {
    /// The sequence at size `n`; files carry their own size.
    pub fn sequence(&self, n: usize) -> Result<DegreeSequence, CliError> {
        match self {
            DegSeqSource::Regular { r } => DegreeSequence::regular(n, *r).map_err(|e| CliError::spec("--degseq", e)),
            DegSeqSource::File { path } => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::spec("--degseq", e))?;
                DegreeSequence::from_text(&text).map_err(|e| CliError::spec("--degseq", e))
            }
        }
    }
}

/// Every input of a run after defaults are filled in; embedded in the summary.
#[derive(Debug, Clone, Serialize)]
pub struct ResolvedSpec {
    pub experiment: Experiment,
    pub graph: Option<GraphSource>,
    pub degseq: Option<DegSeqSource>,
    pub scheme: Scheme,
    pub lazy: bool,
    pub trials: u64,
    pub seed: u64,
    pub n: Vec<usize>,
    pub path: Option<usize>,
    pub runs: Option<u64>,
    pub workers: usize,
    pub format: Format,
    pub out: Option<String>,
    pub generator: &'static str,
}

fn in_range(field: &str, sizes: &[usize], lo: usize, hi: usize) -> Result<(), CliError> {
    match sizes.iter().find(|&&k| k < lo || k > hi) {
        Some(k) => Err(CliError::spec(field, format!("size {k} outside {lo}..={hi}"))),
        None => Ok(()),
    }
}

impl ResolvedSpec {
    pub fn resolve(experiment: Experiment, a: RunArgs) -> Result<Self, CliError> {
        use Experiment::*;
        let sources = [a.graph_file.is_some(), a.family.is_some(), a.product.is_some()];
        if sources.iter().filter(|&&x| x).count() > 1 {
            return Err(CliError::spec(
                "--graph-file/--family/--product",
                "give at most one graph source",
            ));
        }
        let graph = if let Some(p) = &a.graph_file {
            Some(GraphSource::File {
                path: p.display().to_string(),
            })
        } else if let Some(f) = a.family {
            Some(GraphSource::Family { family: f.to_string() })
        } else {
            a.product.map(|(g, h)| GraphSource::Product {
                g: g.to_string(),
                h: h.to_string(),
            })
        };
        let degseq = match (&a.degseq, a.regular) {
            (Some(_), Some(_)) => return Err(CliError::spec("--degseq/--regular", "give only one")),
            (Some(s), None) => Some(match s.strip_prefix("regular:") {
                Some(r) => DegSeqSource::Regular {
                    r: r.parse().map_err(|_| CliError::spec("--degseq", format!("bad degree `{r}`")))?,
                },
                None => DegSeqSource::File { path: s.clone() },
            }),
            (None, Some(r)) => Some(DegSeqSource::Regular { r }),
            (None, None) => None,
        };
        if a.trials == Some(0) {
            return Err(CliError::spec("--trials", "must be positive"));
        }
        if a.runs == Some(0) {
            return Err(CliError::spec("--runs", "must be positive"));
        }

        let uses_graph = matches!(
            experiment,
            BoundsSandwich | CommuteIdentity | ProductTheorem | ConductanceSurvey | SchemeSpeedup | StConnectDemo
        );
        if graph.is_some() && !uses_graph {
            return Err(CliError::spec("graph source", format!("{experiment} takes no graph")));
        }
        if experiment == ProductTheorem && matches!(graph, Some(GraphSource::Family { .. } | GraphSource::File { .. })) {
            return Err(CliError::spec("--product", "product-theorem needs --product A,B"));
        }
        if degseq.is_some() && !matches!(experiment, DegseqCover | PSimple) {
            return Err(CliError::spec("--degseq", format!("{experiment} takes no degree sequence")));
        }
        if a.path.is_some() && (experiment != StConnectDemo || graph.is_some()) {
            return Err(CliError::spec("--path", "only for st-connect-demo without another graph source"));
        }

        let default_trials = match experiment {
            BoundsSandwich => 30,
            CommuteIdentity => 200,
            ProductTheorem | DegseqCover => 200,
            ConductanceSurvey => 50,
            PSimple => 10_000,
            SchemeSpeedup => 1000,
            ClosedForms | GridResistance | StConnectDemo => 0,
        };
        let trials = a.trials.unwrap_or(default_trials);

        let n = match experiment {
            ClosedForms => {
                let n = a.n.clone().map(|s| s.0).unwrap_or_else(|| (2..=10).collect());
                in_range("--n", &n, 2, walklab::exact::COVER_DP_CAP)?;
                n
            }
            GridResistance => {
                let n = a.n.clone().map(|s| s.0).unwrap_or_else(|| (2..=20).collect());
                in_range("--n", &n, 1, walklab::electrical::GRID_MONITOR_CAP)?;
                n
            }
            CommuteIdentity if graph.is_none() => {
                let n = a.n.clone().map(|s| s.0).unwrap_or_else(|| (2..=40).collect());
                in_range("--n", &n, 2, walklab::linalg::DENSE_CAP)?;
                n
            }
            BoundsSandwich if graph.is_none() => {
                let n = a.n.clone().map(|s| s.0).unwrap_or_else(|| (3..=13).collect());
                in_range("--n", &n, 2, walklab::exact::COVER_DP_CAP)?;
                n
            }
            ConductanceSurvey if graph.is_none() => {
                let n = a.n.clone().map(|s| s.0).unwrap_or_else(|| vec![20]);
                in_range("--n", &n, 4, 100_000)?;
                n
            }
            DegseqCover | PSimple => match (&degseq, a.n.map(|s| s.0)) {
                (Some(DegSeqSource::File { .. }), Some(_)) => {
                    return Err(CliError::spec("--n", "a degree-sequence file fixes n"));
                }
                (Some(DegSeqSource::File { .. }), None) => Vec::new(),
                (_, n) => {
                    let n = n.unwrap_or_else(|| if experiment == DegseqCover { vec![500, 1000, 2000] } else { vec![50, 100] });
                    in_range("--n", &n, 1, 10_000_000)?;
                    n
                }
            },
            _ => match a.n {
                Some(_) => return Err(CliError::spec("--n", format!("{experiment} takes no --n with this input"))),
                None => Vec::new(),
            },
        };

        let (path, runs) = match experiment {
            StConnectDemo => (
                if graph.is_none() { Some(a.path.unwrap_or(32)) } else { None },
                Some(a.runs.unwrap_or(200)),
            ),
            _ => {
                if a.runs.is_some() {
                    return Err(CliError::spec("--runs", "only for st-connect-demo"));
                }
                (None, None)
            }
        };
        if path.is_some_and(|p| p < 2) {
            return Err(CliError::spec("--path", "need at least 2 vertices"));
        }

        Ok(ResolvedSpec {
            experiment,
            graph,
            degseq,
            scheme: a.scheme,
            lazy: a.lazy,
            trials,
            seed: a.seed,
            n,
            path,
            runs,
            workers: a.workers,
            format: a.format,
            out: a.out.map(|p| p.display().to_string()),
            generator: walklab::rng::GENERATOR,
        })
    }
}
