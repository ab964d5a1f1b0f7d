//! Reproducible experiment runs: graph sources, per-trial seeds, one CSV row
//! per trial and a JSON summary.
//!
//! Trial `i` plays with seed `derive_seed(master, "trial", i)`; random graph
//! sources draw from `derive_seed(master, "graph", 0)`, or from
//! `derive_seed(master, "graph", i)` when the graph is resampled per trial.
//! Rows are collected in trial order, so the CSV does not depend on the
//! number of worker threads.

use std::fmt;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{girth5_lower_bound, gnp_lower_formula, gnp_upper_formula};
use crate::error::{invalid, Error, Result};
use crate::game::{play, Outcome, Rules};
use crate::generators::{
    choose_construction_params, fixture, gen_gnp, gen_subdivided_hypercube, GnpParams,
    SubdividedHypercube,
};
use crate::graph::Graph;
use crate::rng::derive_seed;
use crate::solver::SolverBudget;
use crate::strategies::{build_cops, build_robber, cop_count_hint, StrategySpec};

/// First line of every results CSV.
pub const CSV_SCHEMA_LINE: &str = "# cops-results v1";

/// Where a graph comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphSource {
    File { path: PathBuf },
    Fixture { name: String },
    Gnp { n: usize, p: f64 },
    Subdivided { d: usize, s: usize, l: usize },
    Construction { n: usize },
}

/// A built graph, with its cube structure when it has one.
#[derive(Clone, Debug)]
pub struct BuiltGraph {
    pub graph: Graph,
    pub cube: Option<SubdividedHypercube>,
}

fn numbers<T: std::str::FromStr>(kind: &str, arg: &str, count: usize) -> Result<Vec<T>> {
    let parts: Vec<&str> = arg.split(',').map(str::trim).collect();
    if parts.len() != count {
        return invalid(format!("`{kind}` expects {count} comma-separated values"));
    }
    parts
        .iter()
        .map(|p| {
            p.parse()
                .map_err(|_| Error::InvalidParameter(format!("`{kind}`: bad value `{p}`")))
        })
        .collect()
}

impl GraphSource {
    /// `gnp:N,P`, `subdivided:D,S,L`, `construction:N`, `file:PATH`, an
    /// existing file path, or a fixture name.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let (kind, arg) = text.split_once(':').unwrap_or((text, ""));
        match kind {
            "gnp" => {
                let n: Vec<f64> = numbers(kind, arg, 2)?;
                if n[0] < 1.0 || n[0].fract() != 0.0 {
                    return invalid("`gnp` needs an integer n >= 1");
                }
                Ok(Self::Gnp {
                    n: n[0] as usize,
                    p: n[1],
                })
            }
            "subdivided" => {
                let v: Vec<usize> = numbers(kind, arg, 3)?;
                Ok(Self::Subdivided {
                    d: v[0],
                    s: v[1],
                    l: v[2],
                })
            }
            "construction" => Ok(Self::Construction {
                n: numbers::<usize>(kind, arg, 1)?[0],
            }),
            "file" => Ok(Self::File { path: arg.into() }),
            _ if std::path::Path::new(text).is_file() => Ok(Self::File { path: text.into() }),
            _ => {
                fixture(text)?;
                Ok(Self::Fixture { name: text.into() })
            }
        }
    }

    /// Whether [`GraphSource::build`] depends on the seed.
    pub fn is_random(&self) -> bool {
        matches!(
            self,
            Self::Gnp { .. } | Self::Subdivided { .. } | Self::Construction { .. }
        )
    }

    pub fn build(&self, seed: u64) -> Result<BuiltGraph> {
        let plain = |graph| BuiltGraph { graph, cube: None };
        match self {
            Self::File { path } => Ok(plain(Graph::parse_text(&std::fs::read_to_string(path)?)?)),
            Self::Fixture { name } => Ok(plain(fixture(name)?)),
            Self::Gnp { n, p } => Ok(plain(gen_gnp(GnpParams { n: *n, p: *p, seed })?)),
            Self::Subdivided { d, s, l } => {
                let cube = gen_subdivided_hypercube(*d, *s, *l, seed)?;
                Ok(BuiltGraph {
                    graph: cube.graph().clone(),
                    cube: Some(cube),
                })
            }
            Self::Construction { n } => {
                let cube = choose_construction_params(*n, seed)?.build()?;
                Ok(BuiltGraph {
                    graph: cube.graph().clone(),
                    cube: Some(cube),
                })
            }
        }
    }
}

impl fmt::Display for GraphSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::File { path } => write!(f, "file:{}", path.display()),
            Self::Fixture { name } => write!(f, "{name}"),
            Self::Gnp { n, p } => write!(f, "gnp:{n},{p}"),
            Self::Subdivided { d, s, l } => write!(f, "subdivided:{d},{s},{l}"),
            Self::Construction { n } => write!(f, "construction:{n}"),
        }
    }
}

fn default_eps() -> f64 {
    0.5
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    /// Graph source text, see [`GraphSource::parse`].
    pub graph: String,
    pub cops: String,
    pub robber: String,
    pub trials: usize,
    /// Defaults to `n³`.
    #[serde(default)]
    pub max_rounds: Option<usize>,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub robber_places_first: bool,
    #[serde(default)]
    pub cops_must_move: bool,
    /// Draw a fresh random graph for every trial.
    #[serde(default)]
    pub resample_graph: bool,
    /// `ε` for the `G(n, p)` upper bound column.
    #[serde(default = "default_eps")]
    pub eps: f64,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(GraphSource, StrategySpec, StrategySpec)> {
        if self.trials == 0 {
            return invalid("an experiment needs at least one trial");
        }
        Ok((
            GraphSource::parse(&self.graph)?,
            StrategySpec::parse(&self.cops)?,
            StrategySpec::parse(&self.robber)?,
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub trial: usize,
    pub seed: u64,
    pub graph_seed: u64,
    /// `caught`, `evaded` or `aborted`.
    pub outcome: String,
    pub capture_round: Option<usize>,
    pub rounds: usize,
    pub cops: usize,
    pub n: usize,
    pub m: usize,
    pub girth: Option<usize>,
    pub min_degree: usize,
    pub girth5_bound: Option<usize>,
    pub gnp_lower: Option<f64>,
    pub gnp_upper: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub trials: usize,
    pub captures: usize,
    pub evasions: usize,
    pub aborts: usize,
    pub capture_rate: f64,
    pub median_capture_round: Option<f64>,
    pub mean_capture_round: Option<f64>,
    /// Trials whose cop count is below the girth bound; such a team cannot
    /// have a winning strategy.
    pub cops_below_girth_bound: usize,
    pub girth5_bound: Option<usize>,
    pub gnp_lower: Option<f64>,
    pub gnp_upper: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct ExperimentResult {
    pub rows: Vec<ResultRow>,
    pub summary: Summary,
    /// Strategy names as reported by the first trial.
    pub cop_strategy: String,
    pub robber_strategy: String,
}

struct GraphStats {
    n: usize,
    m: usize,
    girth: Option<usize>,
    min_degree: usize,
    girth5_bound: Option<usize>,
    gnp_lower: Option<f64>,
    gnp_upper: Option<f64>,
}

fn stats(g: &Graph, source: &GraphSource, eps: f64) -> GraphStats {
    let (gnp_lower, gnp_upper) = match source {
        GraphSource::Gnp { n, p } => (
            gnp_lower_formula(*n as f64, *p).ok().map(|b| b.value),
            gnp_upper_formula(*n as f64, *p, eps).ok().map(|b| b.value),
        ),
        _ => (None, None),
    };
    GraphStats {
        n: g.n(),
        m: g.m(),
        girth: g.girth(),
        min_degree: g.min_degree(),
        girth5_bound: girth5_lower_bound(g),
        gnp_lower,
        gnp_upper,
    }
}

fn median(sorted: &[usize]) -> Option<f64> {
    match sorted.len() {
        0 => None,
        k if k % 2 == 1 => Some(sorted[k / 2] as f64),
        k => Some((sorted[k / 2 - 1] + sorted[k / 2]) as f64 / 2.0),
    }
}

/// Runs every trial, `jobs` at a time (all cores when `None`).
pub fn run(
    spec: &ExperimentSpec,
    budget: &SolverBudget,
    jobs: Option<usize>,
) -> Result<ExperimentResult> {
    let (source, cop_spec, robber_spec) = spec.validate()?;
    let fixed_seed = derive_seed(spec.master_seed, "graph", 0);
    let fixed = if spec.resample_graph && source.is_random() {
        None
    } else {
        let built = source.build(fixed_seed)?;
        let s = stats(&built.graph, &source, spec.eps);
        Some((built.graph, s))
    };
    let trial = |i: usize| -> Result<(ResultRow, String, String)> {
        let seed = derive_seed(spec.master_seed, "trial", i as u64);
        let own;
        let (g, st, graph_seed) = match &fixed {
            Some((g, s)) => (g, s, fixed_seed),
            None => {
                let graph_seed = derive_seed(spec.master_seed, "graph", i as u64);
                let g = source.build(graph_seed)?.graph;
                let s = stats(&g, &source, spec.eps);
                own = (g, s);
                (&own.0, &own.1, graph_seed)
            }
        };
        let mut cops = build_cops(&cop_spec, g, seed, budget)?;
        let cop_count = cop_count_hint(&cop_spec).unwrap_or(0);
        let mut robber = build_robber(&robber_spec, g, seed, cop_count, budget)?;
        let rules = Rules {
            max_rounds: spec
                .max_rounds
                .unwrap_or_else(|| Rules::for_graph(g).max_rounds),
            cops_must_move: spec.cops_must_move,
            robber_places_first: spec.robber_places_first,
        };
        let t = play(g, &mut cops, &mut robber, &rules);
        let (outcome, rounds) = match &t.outcome {
            Outcome::Caught { round, .. } => ("caught", *round),
            Outcome::Evaded { cutoff } => ("evaded", *cutoff),
            Outcome::Aborted { round, .. } => ("aborted", *round),
        };
        Ok((
            ResultRow {
                trial: i,
                seed,
                graph_seed,
                outcome: outcome.into(),
                capture_round: t.outcome.capture_round(),
                rounds,
                cops: t.cop_count(),
                n: st.n,
                m: st.m,
                girth: st.girth,
                min_degree: st.min_degree,
                girth5_bound: st.girth5_bound,
                gnp_lower: st.gnp_lower,
                gnp_upper: st.gnp_upper,
            },
            t.cop_strategy,
            t.robber_strategy,
        ))
    };
    let run_all = || {
        (0..spec.trials)
            .into_par_iter()
            .map(trial)
            .collect::<Result<Vec<_>>>()
    };
    let results = match jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?
            .install(run_all)?,
        None => run_all()?,
    };
    let cop_strategy = results[0].1.clone();
    let robber_strategy = results[0].2.clone();
    let rows: Vec<ResultRow> = results.into_iter().map(|r| r.0).collect();
    Ok(ExperimentResult {
        summary: summarize(&rows),
        rows,
        cop_strategy,
        robber_strategy,
    })
}

fn summarize(rows: &[ResultRow]) -> Summary {
    let mut rounds: Vec<usize> = rows.iter().filter_map(|r| r.capture_round).collect();
    rounds.sort_unstable();
    let count = |o: &str| rows.iter().filter(|r| r.outcome == o).count();
    let first = rows.first();
    Summary {
        trials: rows.len(),
        captures: rounds.len(),
        evasions: count("evaded"),
        aborts: count("aborted"),
        capture_rate: rounds.len() as f64 / rows.len().max(1) as f64,
        median_capture_round: median(&rounds),
        mean_capture_round: (!rounds.is_empty())
            .then(|| rounds.iter().sum::<usize>() as f64 / rounds.len() as f64),
        cops_below_girth_bound: rows
            .iter()
            .filter(|r| r.girth5_bound.is_some_and(|b| r.cops < b))
            .count(),
        girth5_bound: first.and_then(|r| r.girth5_bound),
        gnp_lower: first.and_then(|r| r.gnp_lower),
        gnp_upper: first.and_then(|r| r.gnp_upper),
    }
}

/// Serializes rows as CSV, preceded by [`CSV_SCHEMA_LINE`].
pub fn rows_to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(csv_error)?;
    }
    let body = w
        .into_inner()
        .map_err(|e| Error::InvalidParameter(format!("csv: {e}")))?;
    Ok(format!(
        "{CSV_SCHEMA_LINE}\n{}",
        String::from_utf8_lossy(&body)
    ))
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::InvalidParameter(format!("csv: {other:?}")),
    }
}

/// Provenance block for a JSON summary; the only place a timestamp
/// appears.
#[derive(Clone, Debug, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub created_unix: u64,
}

impl Metadata {
    pub fn now() -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            created_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }
}

#[derive(Serialize)]
struct SummaryDoc<'a> {
    metadata: Metadata,
    spec: &'a ExperimentSpec,
    seeds: SeedRecord,
    cop_strategy: &'a str,
    robber_strategy: &'a str,
    summary: &'a Summary,
}

#[derive(Serialize)]
struct SeedRecord {
    master: u64,
    derivation: &'static str,
    graph: Option<u64>,
}

pub fn summary_json(spec: &ExperimentSpec, result: &ExperimentResult) -> Result<String> {
    let doc = SummaryDoc {
        metadata: Metadata::now(),
        spec,
        seeds: SeedRecord {
            master: spec.master_seed,
            derivation: "derive_seed(master, tag, index) = splitmix(splitmix(master ^ fnv1a64(tag)) ^ index); tags: trial, graph",
            graph: (!spec.resample_graph).then(|| derive_seed(spec.master_seed, "graph", 0)),
        },
        cop_strategy: &result.cop_strategy,
        robber_strategy: &result.robber_strategy,
        summary: &result.summary,
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(graph: &str, cops: &str, robber: &str, trials: usize) -> ExperimentSpec {
        ExperimentSpec {
            graph: graph.into(),
            cops: cops.into(),
            robber: robber.into(),
            trials,
            max_rounds: None,
            master_seed: 7,
            robber_places_first: false,
            cops_must_move: false,
            resample_graph: false,
            eps: 0.5,
        }
    }

    #[test]
    fn sources_parse_and_print() {
        for text in [
            "gnp:100,0.05",
            "subdivided:2,3,12",
            "construction:1000",
            "petersen",
            "grid:3x4",
        ] {
            assert_eq!(GraphSource::parse(text).unwrap().to_string(), text);
        }
        assert!(GraphSource::parse("gnp:100").is_err());
        assert!(GraphSource::parse("nonsense").is_err());
        assert!(GraphSource::parse("gnp:1.5,0.1").is_err());
    }

    #[test]
    fn tree_is_always_caught() {
        let r = run(
            &spec("path:3", "greedy:k=1", "random", 10),
            &SolverBudget::default(),
            Some(2),
        )
        .unwrap();
        assert_eq!(r.summary.capture_rate, 1.0);
        assert_eq!(r.rows.len(), 10);
        assert!(r.rows.iter().enumerate().all(|(i, row)| row.trial == i));
    }

    #[test]
    fn optimal_robber_beats_one_cop_on_c4() {
        let mut s = spec("cycle:4", "greedy:k=1", "optimal", 5);
        s.max_rounds = Some(100);
        let r = run(&s, &SolverBudget::default(), None).unwrap();
        assert_eq!(r.summary.capture_rate, 0.0);
        assert_eq!(r.summary.evasions, 5);
    }

    #[test]
    fn csv_is_reproducible_across_job_counts() {
        let mut s = spec("gnp:40,0.1", "greedy:k=2", "random", 12);
        s.resample_graph = true;
        let budget = SolverBudget::default();
        let a = rows_to_csv(&run(&s, &budget, Some(1)).unwrap().rows).unwrap();
        let b = rows_to_csv(&run(&s, &budget, Some(4)).unwrap().rows).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with(CSV_SCHEMA_LINE));
        assert_eq!(a.lines().count(), 14);
    }

    #[test]
    fn bad_specs_are_rejected() {
        let budget = SolverBudget::default();
        assert!(run(&spec("petersen", "greedy", "random", 0), &budget, None).is_err());
        assert!(matches!(
            run(&spec("petersen", "teleport", "random", 1), &budget, None),
            Err(Error::UnknownName(_))
        ));
    }
}
