use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cops_core::acceptance::{run_criterion, CRITERIA};
use cops_core::bounds::checks::{lemma_sweep, LemmaCheck, SweepConfig};
use cops_core::bounds::BoundReport;
use cops_core::experiment::{self, rows_to_csv, summary_json, ExperimentSpec, GraphSource};
use cops_core::game::{play, Rules};
use cops_core::generators::{gen_subdivided_hypercube, SubdividedHypercube};
use cops_core::retracts::{
    config_probabilities_text, find_largest_proper_retract, find_retraction_onto, is_nonexpansive,
    is_retraction, map_to_text, parse_map, DEFAULT_NODE_BUDGET,
};
use cops_core::solver::{cop_number_with_game, SolvedGame, SolverBudget};
use cops_core::strategies::{build_cops, build_robber, cop_count_hint, StrategySpec};
use cops_core::{Error, Graph, Result, VertexSet};

#[derive(Parser)]
#[command(name = "cops", version, about = "Cops and robbers laboratory")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Master seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for parallel work (all cores by default).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Build a graph and write it as an edge list.
    Generate {
        /// gnp:N,P | subdivided:D,S,L | construction:N | fixture name
        source: String,
        /// Also write the hypercube structure of subdivided graphs here.
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
    /// Play one game and print the transcript.
    Play {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        cops: String,
        #[arg(long)]
        robber: String,
        /// Round cutoff; n³ by default.
        #[arg(long)]
        max_rounds: Option<usize>,
        #[arg(long)]
        robber_first: bool,
        #[arg(long)]
        cops_must_move: bool,
    },
    /// Compute the cop number exactly.
    Solve {
        #[arg(long)]
        graph: String,
        #[arg(long, default_value_t = 4)]
        kmax: usize,
        /// Write the solved strategy table here.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Evaluate lower and upper bound formulas.
    Bounds {
        /// Graph for the girth and walk-count bounds.
        #[arg(long, conflicts_with = "gnp")]
        graph: Option<String>,
        /// `N,P` for the random-graph formulas.
        #[arg(long)]
        gnp: Option<String>,
        #[arg(long, default_value_t = 3)]
        d: usize,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
    },
    /// Run the empirical G(n, p) lemma checks.
    LemmaCheck {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        pn: f64,
        #[arg(long, default_value_t = 0.25)]
        eps: f64,
        #[arg(long, default_value_t = 10)]
        seeds: usize,
        #[arg(long, default_value_t = 100)]
        pairs: usize,
        #[arg(long = "check", value_enum, default_values_t = [CheckArg::BallGrowth, CheckArg::TreeExcess, CheckArg::PathCount])]
        checks: Vec<CheckArg>,
    },
    /// Retraction tools.
    #[command(subcommand)]
    Retract(RetractCommand),
    /// Run many seeded games and write per-trial rows and a summary.
    Experiment(ExperimentArgs),
    /// Run the acceptance suite.
    Acceptance {
        /// Comma-separated criterion numbers; all by default.
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckArg {
    BallGrowth,
    TreeExcess,
    PathCount,
}

impl From<CheckArg> for LemmaCheck {
    fn from(c: CheckArg) -> Self {
        match c {
            CheckArg::BallGrowth => LemmaCheck::BallGrowth,
            CheckArg::TreeExcess => LemmaCheck::TreeExcess,
            CheckArg::PathCount => LemmaCheck::PathCount,
        }
    }
}

#[derive(Subcommand)]
enum RetractCommand {
    /// Check that a map file is a retraction.
    Verify {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        map: PathBuf,
    },
    /// Search for a retraction onto the vertices listed in a file.
    Search {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        image: PathBuf,
        #[arg(long, env = "COPS_RETRACT_BUDGET", default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Build a subdivided hypercube and search for its largest proper retract.
    Scan {
        /// Pick the construction for exactly this many vertices.
        #[arg(long, conflicts_with = "cube")]
        n: Option<usize>,
        /// `D,S,L` with random labels from the seed.
        #[arg(long)]
        cube: Option<String>,
        /// Node budget per candidate.
        #[arg(long, env = "COPS_RETRACT_BUDGET", default_value_t = 200_000)]
        budget: u64,
    },
    /// Print the two configuration probabilities as exact fractions.
    ConfigProbabilities,
}

#[derive(Args)]
struct ExperimentArgs {
    /// JSON experiment spec; the flags below are ignored when given.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long, required_unless_present = "spec")]
    graph: Option<String>,
    #[arg(long, required_unless_present = "spec")]
    cops: Option<String>,
    #[arg(long, required_unless_present = "spec")]
    robber: Option<String>,
    #[arg(long, default_value_t = 10)]
    trials: usize,
    #[arg(long)]
    max_rounds: Option<usize>,
    #[arg(long)]
    robber_first: bool,
    #[arg(long)]
    cops_must_move: bool,
    /// Draw a fresh random graph for every trial.
    #[arg(long)]
    resample_graph: bool,
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn emit(global: &Global, text: &str) -> Result<()> {
    match &global.out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            let written = stdout.write_all(text.as_bytes()).and_then(|()| {
                if text.ends_with('\n') {
                    Ok(())
                } else {
                    stdout.write_all(b"\n")
                }
            });
            match written {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                other => other?,
            }
        }
    }
    Ok(())
}

/// Writes `record` in the chosen format; `text` renders the plain form.
fn report<T: Serialize>(global: &Global, record: &T, text: impl FnOnce() -> String) -> Result<()> {
    let out = match global.format {
        Format::Text => text(),
        Format::Json => serde_json::to_string_pretty(record)?,
        Format::Csv => rows_to_csv(std::slice::from_ref(record))?,
    };
    emit(global, &out)
}

fn load_graph(source: &str, seed: u64) -> Result<Graph> {
    Ok(GraphSource::parse(source)?.build(seed)?.graph)
}

fn run(cli: Cli) -> Result<ExitCode> {
    let g = &cli.global;
    let budget = SolverBudget::from_env();
    match cli.command {
        Command::Generate { source, sidecar } => {
            let built = GraphSource::parse(&source)?.build(g.seed)?;
            if let Some(path) = sidecar {
                let cube = built.cube.as_ref().ok_or_else(|| {
                    Error::InvalidParameter(format!("`{source}` has no hypercube structure"))
                })?;
                std::fs::write(path, cube.to_sidecar())?;
            }
            emit(g, &built.graph.to_text())?;
        }
        Command::Play {
            graph,
            cops,
            robber,
            max_rounds,
            robber_first,
            cops_must_move,
        } => {
            let graph = load_graph(&graph, g.seed)?;
            let cop_spec = StrategySpec::parse(&cops)?;
            let mut cop_side = build_cops(&cop_spec, &graph, g.seed, &budget)?;
            let mut robber_side = build_robber(
                &StrategySpec::parse(&robber)?,
                &graph,
                g.seed,
                cop_count_hint(&cop_spec).unwrap_or(0),
                &budget,
            )?;
            let rules = Rules {
                max_rounds: max_rounds.unwrap_or_else(|| Rules::for_graph(&graph).max_rounds),
                cops_must_move,
                robber_places_first: robber_first,
            };
            let mut t = play(&graph, &mut cop_side, &mut robber_side, &rules);
            t.seed = Some(g.seed);
            match g.format {
                Format::Text => {
                    println!("{:?}", t.outcome);
                    if let Some(path) = &g.out {
                        std::fs::write(path, t.to_json()?)?;
                    }
                }
                _ => emit(g, &t.to_json()?)?,
            }
        }
        Command::Solve {
            graph: source,
            kmax,
            table,
        } => {
            let graph = load_graph(&source, g.seed)?;
            let (k, game) = cop_number_with_game(&graph, kmax, &budget)?;
            if let Some(path) = table {
                let game = match game {
                    Some(game) => game,
                    None => SolvedGame::solve(&graph, k, &budget)?,
                };
                game.write_strategy_table(std::io::BufWriter::new(std::fs::File::create(path)?))?;
            }
            #[derive(Serialize)]
            struct Solved {
                graph: String,
                n: usize,
                m: usize,
                cop_number: usize,
            }
            let rec = Solved {
                graph: source,
                n: graph.n(),
                m: graph.m(),
                cop_number: k,
            };
            report(g, &rec, || k.to_string())?;
        }
        Command::Bounds {
            graph,
            gnp,
            d,
            r,
            eps,
        } => {
            let rep = match (graph, gnp) {
                (Some(source), None) => BoundReport::for_graph(&load_graph(&source, g.seed)?, d, r),
                (None, Some(np)) => match GraphSource::parse(&format!("gnp:{np}"))? {
                    GraphSource::Gnp { n, p } => BoundReport::for_gnp(n as f64, p, eps),
                    _ => unreachable!("gnp source"),
                },
                _ => return Err(Error::InvalidParameter("give --graph or --gnp".into())),
            };
            let out = match g.format {
                Format::Text => bounds_text(&rep),
                Format::Json => serde_json::to_string_pretty(&rep)?,
                Format::Csv => {
                    #[derive(Serialize)]
                    struct Row<'a> {
                        formula: &'a str,
                        value: Option<f64>,
                        flags: String,
                        error: Option<&'a str>,
                    }
                    let rows: Vec<Row> = rep
                        .values
                        .iter()
                        .map(|v| Row {
                            formula: &v.formula,
                            value: v.value,
                            flags: v.flags.join("; "),
                            error: v.error.as_deref(),
                        })
                        .collect();
                    rows_to_csv(&rows)?
                }
            };
            emit(g, &out)?;
        }
        Command::LemmaCheck {
            n,
            pn,
            eps,
            seeds,
            pairs,
            checks,
        } => {
            let rows = lemma_sweep(&SweepConfig {
                n,
                pn,
                eps,
                seeds,
                pairs,
                master_seed: g.seed,
                checks: checks.into_iter().map(LemmaCheck::from).collect(),
            })?;
            let failures = rows.iter().filter(|r| !r.pass).count();
            let out = match g.format {
                Format::Json => serde_json::to_string_pretty(&rows)?,
                Format::Csv => rows_to_csv(&rows)?,
                Format::Text => {
                    let mut s = String::new();
                    for r in &rows {
                        s.push_str(&format!(
                            "{} seed={} {} value={:.4} bound={:.4}\n",
                            if r.pass { "pass" } else { "FAIL" },
                            r.seed,
                            r.check,
                            r.value,
                            r.bound
                        ));
                    }
                    s.push_str(&format!("{} rows, {failures} failures\n", rows.len()));
                    s
                }
            };
            emit(g, &out)?;
        }
        Command::Retract(cmd) => retract(g, cmd)?,
        Command::Experiment(args) => experiment_cmd(g, args, &budget)?,
        Command::Acceptance { only } => {
            let ids: Vec<usize> = if only.is_empty() {
                CRITERIA.iter().map(|(i, _)| *i).collect()
            } else {
                only
            };
            let mut all = true;
            for id in ids {
                let rep = run_criterion(id);
                all &= rep.pass;
                match g.format {
                    Format::Json => println!("{}", serde_json::to_string(&rep)?),
                    _ => println!("{}", rep.line()),
                }
            }
            if !all {
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn bounds_text(rep: &BoundReport) -> String {
    let mut s = String::new();
    for v in &rep.values {
        let name = match v.formula.as_str() {
            "girth5-min-degree" => "girth5 bound",
            "walkcount-necessary-condition" => "walkcount bound",
            "gnp-lower" => "gnp lower",
            "gnp-upper" => "gnp upper",
            other => other,
        };
        let value = match (v.value, &v.error) {
            (Some(x), _) if x.fract() == 0.0 && x.abs() < 1e15 => format!("{x:.0}"),
            (Some(x), _) => format!("{x:.6e}"),
            (None, Some(e)) => format!("n/a ({e})"),
            (None, None) => "n/a".into(),
        };
        s.push_str(&format!("{name} {value}"));
        if !v.flags.is_empty() {
            s.push_str(&format!(" [{}]", v.flags.join("; ")));
        }
        s.push('\n');
    }
    s
}

fn read_vertex_list(path: &Path, n: usize) -> Result<VertexSet> {
    let text = std::fs::read_to_string(path)?;
    let mut vs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        for tok in line.split('#').next().unwrap_or("").split_whitespace() {
            vs.push(tok.parse().map_err(|_| Error::Parse {
                line: i + 1,
                msg: format!("bad vertex `{tok}`"),
            })?);
        }
    }
    VertexSet::from_vertices(n, vs)
}

fn retract(g: &Global, cmd: RetractCommand) -> Result<()> {
    match cmd {
        RetractCommand::Verify { graph, map } => {
            let graph = load_graph(&graph, g.seed)?;
            let f = parse_map(&std::fs::read_to_string(map)?, graph.n())?;
            #[derive(Serialize)]
            struct Verified {
                retraction: bool,
                nonexpansive: bool,
                image_size: usize,
            }
            let rec = Verified {
                retraction: is_retraction(&graph, &f),
                nonexpansive: is_nonexpansive(&graph, &f),
                image_size: cops_core::retracts::image(&f).len(),
            };
            report(g, &rec, || {
                format!(
                    "retraction {}\nnonexpansive {}\nimage size {}",
                    rec.retraction, rec.nonexpansive, rec.image_size
                )
            })?;
        }
        RetractCommand::Search {
            graph,
            image,
            budget,
        } => {
            let graph = load_graph(&graph, g.seed)?;
            let h = read_vertex_list(&image, graph.n())?;
            match find_retraction_onto(&graph, &h, budget)? {
                Some(f) => emit(g, &map_to_text(&f))?,
                None => emit(g, "none")?,
            }
        }
        RetractCommand::Scan { n, cube, budget } => {
            let sq: SubdividedHypercube = match (n, cube) {
                (Some(n), None) => {
                    cops_core::generators::choose_construction_params(n, g.seed)?.build()?
                }
                (None, Some(spec)) => match GraphSource::parse(&format!("subdivided:{spec}"))? {
                    GraphSource::Subdivided { d, s, l } => {
                        gen_subdivided_hypercube(d, s, l, g.seed)?
                    }
                    _ => unreachable!("subdivided source"),
                },
                _ => return Err(Error::InvalidParameter("give --n or --cube".into())),
            };
            let scan = find_largest_proper_retract(&sq, budget)?;
            #[derive(Serialize)]
            struct ScanRow {
                d: usize,
                s: usize,
                l: usize,
                n: usize,
                size: usize,
                cube_part: String,
                exhaustive: bool,
                candidates: usize,
                checked: usize,
                refuted: usize,
                undecided_larger: usize,
            }
            let row = ScanRow {
                d: sq.d,
                s: sq.s,
                l: sq.l,
                n: scan.n,
                size: scan.size,
                cube_part: scan
                    .cube_part
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(" "),
                exhaustive: scan.exhaustive,
                candidates: scan.candidates,
                checked: scan.checked,
                refuted: scan.refuted,
                undecided_larger: scan.undecided_larger,
            };
            match g.format {
                Format::Json => emit(g, &serde_json::to_string_pretty(&scan)?)?,
                _ => report(g, &row, || {
                    format!(
                        "d={} s={} l={} n={}\nlargest proper retract found: {} vertices (cube vertices {})\n{} candidates, {} checked, {} refuted, {} over budget{}",
                        row.d,
                        row.s,
                        row.l,
                        row.n,
                        row.size,
                        row.cube_part,
                        row.candidates,
                        row.checked,
                        row.refuted,
                        row.undecided_larger,
                        if row.exhaustive { "" } else { " (heuristic candidates)" }
                    )
                })?,
            }
        }
        RetractCommand::ConfigProbabilities => {
            #[derive(Serialize)]
            struct Probabilities {
                config1: String,
                config2: String,
            }
            let rec = Probabilities {
                config1: cops_core::retracts::config1_probability().to_string(),
                config2: cops_core::retracts::config2_probability().to_string(),
            };
            report(g, &rec, config_probabilities_text)?;
        }
    }
    Ok(())
}

fn experiment_cmd(g: &Global, args: ExperimentArgs, budget: &SolverBudget) -> Result<()> {
    let spec = match &args.spec {
        Some(path) => serde_json::from_str::<ExperimentSpec>(&std::fs::read_to_string(path)?)?,
        None => ExperimentSpec {
            graph: args.graph.clone().unwrap_or_default(),
            cops: args.cops.clone().unwrap_or_default(),
            robber: args.robber.clone().unwrap_or_default(),
            trials: args.trials,
            max_rounds: args.max_rounds,
            master_seed: g.seed,
            robber_places_first: args.robber_first,
            cops_must_move: args.cops_must_move,
            resample_graph: args.resample_graph,
            eps: args.eps,
        },
    };
    let result = experiment::run(&spec, budget, g.jobs)?;
    let csv = rows_to_csv(&result.rows)?;
    let summary = summary_json(&spec, &result)?;
    match &g.out {
        // `--out results` writes results.csv and results.json.
        Some(prefix) => {
            std::fs::write(prefix.with_extension("csv"), &csv)?;
            std::fs::write(prefix.with_extension("json"), &summary)?;
        }
        None => match g.format {
            Format::Json => println!("{summary}"),
            _ => {
                print!("{csv}");
                eprintln!("{summary}");
            }
        },
    }
    if g.format == Format::Text && g.out.is_some() {
        let s = &result.summary;
        println!(
            "{} trials: capture rate {:.3}, median capture round {}",
            s.trials,
            s.capture_rate,
            s.median_capture_round.map_or("-".into(), |m| m.to_string())
        );
    }
    Ok(())
}
