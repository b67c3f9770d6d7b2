use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use metric_engine::acceptance::{self, Status};
use metric_engine::apex::{apex_diameter, ApexInput};
use metric_engine::clustering::{build_clustering, cluster_graph};
use metric_engine::engine::{build_engine_with, run_eccentricities, CoresetMode, EngineOptions};
use metric_engine::generators::{generate, Family, GenSpec, Weights};
use metric_engine::graph::{load_graph, sssp, write_edge_list, LoadedGraph};
use metric_engine::reference::exact_apsp;
use metric_engine::scaled::{build_multiplicative_oracle_with, ScaledOptions};
use metric_engine::treewidth::{balance_binary, depth_bound, heuristic_decomposition};
use metric_engine::Error;

const SCHEMA: &str = "v1";

#[derive(Parser)]
#[command(name = "metric-engine", version, about = "Approximate eccentricities, diameter and distance oracles")]
struct Cli {
    /// Wrap the payload in a versioned JSON document.
    #[arg(long, global = true)]
    json: bool,

    /// Write a JSON run report to this file (`-` for stderr).
    #[arg(long, global = true, value_name = "FILE")]
    report: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a test graph.
    Gen(GenArgs),
    /// Exact values by brute force (small graphs only).
    Exact {
        #[arg(long, value_enum)]
        what: ExactWhat,
        graph: PathBuf,
    },
    /// Eccentricity estimate and witness for every vertex (JSON).
    Ecc {
        #[command(flatten)]
        common: EpsArgs,
        #[arg(long, value_enum, default_value = "greedy")]
        coresets: CoresetArg,
        graph: PathBuf,
    },
    /// Diameter within a factor 1 + eps.
    Diameter {
        #[command(flatten)]
        common: EpsArgs,
        graph: PathBuf,
    },
    /// Radius within a factor 1 + eps.
    Radius {
        #[command(flatten)]
        common: EpsArgs,
        graph: PathBuf,
    },
    /// Distances with additive error at most eps * D0 / 8, one per query line.
    OracleQuery {
        #[command(flatten)]
        common: EpsArgs,
        graph: PathBuf,
        queries: PathBuf,
    },
    /// Distances within a factor 1 + eps, one per query line.
    MultOracle {
        #[command(flatten)]
        common: EpsArgs,
        /// Build per-window oracles on first use.
        #[arg(long)]
        lazy: bool,
        /// Stop at the lowest level that answers.
        #[arg(long)]
        first_hit: bool,
        graph: PathBuf,
        queries: PathBuf,
    },
    /// Diameter of a graph with a known apex set (JSON).
    ApexDiameter {
        #[command(flatten)]
        common: EpsArgs,
        /// Comma-separated apex ids; read from an `apices:` comment if absent.
        #[arg(long)]
        apices: Option<String>,
        graph: PathBuf,
    },
    /// Run the acceptance suite.
    Accept {
        /// Only these criteria (1 to 10).
        #[arg(long = "criterion", value_name = "ID")]
        criteria: Vec<u8>,
    },
}

#[derive(Args)]
struct EpsArgs {
    #[arg(long)]
    eps: f64,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExactWhat {
    Diameter,
    Radius,
    Ecc,
}

#[derive(Clone, Copy, ValueEnum)]
enum CoresetArg {
    Greedy,
    Exhaustive,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Grid,
    #[value(alias = "grid_apex")]
    GridApex,
    Path,
    Star,
    #[value(alias = "random_planarish", alias = "planarish")]
    RandomPlanarish,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, default_value_t = 8)]
    rows: usize,
    #[arg(long, default_value_t = 8)]
    cols: usize,
    /// Vertex count for paths.
    #[arg(long, default_value_t = 16)]
    n: usize,
    /// Leaf count for stars.
    #[arg(long, default_value_t = 16)]
    leaves: usize,
    /// Number of apex vertices.
    #[arg(long, default_value_t = 1)]
    apices: usize,
    /// Probability that an apex is joined to a given grid vertex.
    #[arg(long, default_value_t = 0.1)]
    attach: f64,
    /// Probability of deleting a non-tree grid edge.
    #[arg(long, default_value_t = 0.3)]
    delete: f64,
    /// `unit`, `uniform:LO:HI` or `neartie:BASE`.
    #[arg(long, default_value = "unit")]
    weights: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

/// Everything a run measured, for `--report`.
#[derive(Serialize)]
struct RunReport {
    schema: &'static str,
    command: String,
    input: Option<InputInfo>,
    eps: Option<f64>,
    timings: Vec<Timing>,
    stats: Value,
    guarantees: Vec<Guarantee>,
    answers: Value,
}

#[derive(Serialize)]
struct Timing {
    phase: String,
    ms: f64,
}

#[derive(Serialize)]
struct InputInfo {
    path: String,
    sha256: String,
    vertices: usize,
    edges: usize,
    ids_remapped: bool,
}

/// A bound the run checked, with how much room was left.
#[derive(Serialize)]
struct Guarantee {
    name: String,
    bound: f64,
    measured: f64,
    slack: f64,
}

impl Guarantee {
    fn at_most(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Guarantee {
            name: name.into(),
            bound,
            measured,
            slack: bound - measured,
        }
    }
}

impl RunReport {
    fn new(command: &str) -> Self {
        RunReport {
            schema: SCHEMA,
            command: command.to_string(),
            input: None,
            eps: None,
            timings: Vec::new(),
            stats: Value::Null,
            guarantees: Vec::new(),
            answers: Value::Null,
        }
    }

    fn time(&mut self, phase: &str, since: Instant) {
        self.timings.push(Timing {
            phase: phase.to_string(),
            ms: since.elapsed().as_secs_f64() * 1e3,
        });
    }
}

struct Input {
    loaded: LoadedGraph<f64>,
}

impl Input {
    fn read(path: &Path, report: &mut RunReport) -> Result<Self> {
        let start = Instant::now();
        let bytes = fs::read(path)
            .map_err(Error::from)
            .with_context(|| format!("reading {}", path.display()))?;
        let text = String::from_utf8(bytes.clone())
            .map_err(|_| Error::Domain(format!("{} is not UTF-8", path.display())))?;
        let loaded = load_graph::<f64>(&text).with_context(|| format!("parsing {}", path.display()))?;
        report.input = Some(InputInfo {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
            vertices: loaded.graph.vertex_count(),
            edges: loaded.graph.edge_count(),
            ids_remapped: !loaded.is_identity_mapping(),
        });
        report.time("load", start);
        Ok(Input { loaded })
    }

    fn original(&self, v: usize) -> u64 {
        self.loaded.original_ids[v]
    }

    fn dense(&self, id: u64, line: usize) -> Result<usize> {
        self.loaded.dense_id(id).ok_or_else(|| {
            Error::Parse {
                line,
                msg: format!(
                    "vertex {id} is not in the graph ({} vertices)",
                    self.loaded.graph.vertex_count()
                ),
            }
            .into()
        })
    }

    /// Query pairs from a file of `u v` lines; `#` comments and blank lines
    /// are skipped.
    fn queries(&self, path: &Path) -> Result<Vec<(usize, usize)>> {
        let text = fs::read_to_string(path)
            .map_err(Error::from)
            .with_context(|| format!("reading {}", path.display()))?;
        let mut out = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let line_no = k + 1;
            let body = line.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = body.split_whitespace().collect();
            let [u, v] = fields.as_slice() else {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected `u v`, found `{body}`"),
                })
                .with_context(|| format!("in {}", path.display()));
            };
            let parse = |s: &str| {
                s.parse::<u64>().map_err(|_| Error::Parse {
                    line: line_no,
                    msg: format!("bad vertex id `{s}`"),
                })
            };
            let (u, v) = (parse(u)?, parse(v)?);
            out.push((
                self.dense(u, line_no).with_context(|| format!("in {}", path.display()))?,
                self.dense(v, line_no).with_context(|| format!("in {}", path.display()))?,
            ));
        }
        Ok(out)
    }
}

#[allow(clippy::neg_cmp_op_on_partial_ord)]
fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::Domain(format!("eps must be positive, got {eps}")).into());
    }
    Ok(())
}

fn fmt_dist(x: f64) -> String {
    if x.is_infinite() {
        "inf".into()
    } else {
        x.to_string()
    }
}

fn dist_json(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!("inf")
    }
}

struct Out {
    json: bool,
    w: BufWriter<io::Stdout>,
}

impl Out {
    fn line(&mut self, s: impl AsRef<str>) -> Result<()> {
        writeln!(self.w, "{}", s.as_ref())?;
        Ok(())
    }

    fn doc(&mut self, v: Value) -> Result<()> {
        serde_json::to_writer_pretty(&mut self.w, &v)?;
        writeln!(self.w)?;
        Ok(())
    }

    /// A single value: plain text, or `{"schema", key: value}` with `--json`.
    fn scalar(&mut self, key: &str, x: f64) -> Result<()> {
        if self.json {
            self.doc(json!({ "schema": SCHEMA, key: dist_json(x) }))
        } else {
            self.line(fmt_dist(x))
        }
    }

    fn list(&mut self, key: &str, xs: &[f64]) -> Result<()> {
        if self.json {
            self.doc(json!({
                "schema": SCHEMA,
                key: xs.iter().map(|&x| dist_json(x)).collect::<Vec<_>>(),
            }))
        } else {
            for &x in xs {
                self.line(fmt_dist(x))?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Capacity(_)) => 2,
        Some(Error::Invariant(_)) => 3,
        _ => 1,
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let mut out = Out {
        json: cli.json,
        w: BufWriter::new(io::stdout()),
    };
    let name = command_name(&cli.command);
    let mut report = RunReport::new(name);
    let code = dispatch(cli.command, &mut out, &mut report)?;
    out.w.flush()?;
    if let Some(path) = cli.report {
        let text = serde_json::to_string_pretty(&report)?;
        if path.as_os_str() == "-" {
            eprintln!("{text}");
        } else {
            fs::write(&path, text + "\n")
                .map_err(Error::from)
                .with_context(|| format!("writing {}", path.display()))?;
        }
    }
    Ok(code)
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Gen(_) => "gen",
        Command::Exact { .. } => "exact",
        Command::Ecc { .. } => "ecc",
        Command::Diameter { .. } => "diameter",
        Command::Radius { .. } => "radius",
        Command::OracleQuery { .. } => "oracle-query",
        Command::MultOracle { .. } => "mult-oracle",
        Command::ApexDiameter { .. } => "apex-diameter",
        Command::Accept { .. } => "accept",
    }
}

fn dispatch(command: Command, out: &mut Out, report: &mut RunReport) -> Result<ExitCode> {
    match command {
        Command::Gen(args) => gen(args, out)?,
        Command::Exact { what, graph } => exact(what, &graph, out, report)?,
        Command::Ecc {
            common,
            coresets,
            graph,
        } => ecc(common.eps, coresets, &graph, out, report)?,
        Command::Diameter { common, graph } => extreme(common.eps, true, &graph, out, report)?,
        Command::Radius { common, graph } => extreme(common.eps, false, &graph, out, report)?,
        Command::OracleQuery {
            common,
            graph,
            queries,
        } => oracle_query(common.eps, &graph, &queries, out, report)?,
        Command::MultOracle {
            common,
            lazy,
            first_hit,
            graph,
            queries,
        } => mult_oracle(common.eps, ScaledOptions { lazy, first_hit }, &graph, &queries, out, report)?,
        Command::ApexDiameter {
            common,
            apices,
            graph,
        } => apex(common.eps, apices.as_deref(), &graph, out, report)?,
        Command::Accept { criteria } => return accept(&criteria, out, report),
    }
    Ok(ExitCode::SUCCESS)
}

fn gen(args: GenArgs, out: &mut Out) -> Result<()> {
    let weights: Weights = args.weights.parse()?;
    let family = match args.family {
        FamilyArg::Grid => Family::Grid {
            rows: args.rows,
            cols: args.cols,
        },
        FamilyArg::GridApex => Family::GridApex {
            rows: args.rows,
            cols: args.cols,
            apices: args.apices,
            attach: args.attach,
        },
        FamilyArg::Path => Family::Path { n: args.n },
        FamilyArg::Star => Family::Star {
            leaves: args.leaves,
        },
        FamilyArg::RandomPlanarish => Family::RandomPlanarish {
            rows: args.rows,
            cols: args.cols,
            delete: args.delete,
        },
    };
    let spec = GenSpec {
        family,
        weights,
        seed: args.seed,
    };
    let g = generate::<f64>(&spec)?;
    let mut comments = vec![format!("{family:?} weights {weights} seed {}", args.seed)];
    if !g.apices.is_empty() {
        let ids: Vec<String> = g.apices.iter().map(ToString::to_string).collect();
        comments.push(format!("apices: {}", ids.join(",")));
    }
    let text = write_edge_list(&g.graph, &comments);
    match args.output {
        Some(path) => fs::write(&path, text)
            .map_err(Error::from)
            .with_context(|| format!("writing {}", path.display()))?,
        None => out.w.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn exact(what: ExactWhat, path: &Path, out: &mut Out, report: &mut RunReport) -> Result<()> {
    let input = Input::read(path, report)?;
    let start = Instant::now();
    let m = exact_apsp(&input.loaded.graph)?;
    report.time("apsp", start);
    let value = |r: metric_engine::Result<f64>| match r {
        Ok(x) => Ok(x),
        Err(Error::InfiniteDiameter) => Ok(f64::INFINITY),
        Err(e) => Err(e),
    };
    match what {
        ExactWhat::Diameter => out.scalar("diameter", value(m.diameter())?),
        ExactWhat::Radius => out.scalar("radius", value(m.radius())?),
        ExactWhat::Ecc => {
            let n = m.vertex_count();
            let ecc: Vec<f64> = (0..n)
                .map(|u| m.row(u).iter().copied().fold(0.0, f64::max))
                .collect();
            if out.json {
                let rows: Vec<Value> = ecc
                    .iter()
                    .enumerate()
                    .map(|(v, &x)| json!({ "vertex": input.original(v), "value": dist_json(x) }))
                    .collect();
                out.doc(json!({ "schema": SCHEMA, "eccentricities": rows }))
            } else {
                for (v, &x) in ecc.iter().enumerate() {
                    out.line(format!("{} {}", input.original(v), fmt_dist(x)))?;
                }
                Ok(())
            }
        }
    }
}

fn ecc(eps: f64, coresets: CoresetArg, path: &Path, out: &mut Out, report: &mut RunReport) -> Result<()> {
    check_eps(eps)?;
    report.eps = Some(eps);
    let input = Input::read(path, report)?;
    let mode = match coresets {
        CoresetArg::Greedy => CoresetMode::Greedy,
        CoresetArg::Exhaustive => CoresetMode::Exhaustive,
    };
    let start = Instant::now();
    let run = run_eccentricities(
        &input.loaded.graph,
        eps,
        EngineOptions {
            coresets: mode,
            validate: false,
        },
    )?;
    report.time("total", start);
    pipeline_report(report, &run.stats, input.loaded.graph.vertex_count());
    let rows: Vec<Value> = run
        .estimates
        .iter()
        .map(|e| {
            json!({
                "vertex": input.original(e.vertex),
                "value": e.value,
                "witness": input.original(e.witness),
            })
        })
        .collect();
    if out.json {
        out.doc(json!({ "schema": SCHEMA, "eps": eps, "estimates": rows }))
    } else {
        out.doc(Value::Array(rows))
    }
}

fn pipeline_report(report: &mut RunReport, stats: &metric_engine::engine::PipelineStats, n: usize) {
    for (phase, ms) in [
        ("clustering", stats.ms_clustering),
        ("decomposition", stats.ms_decomposition),
        ("engine", stats.ms_engine),
        ("queries", stats.ms_queries),
    ] {
        report.timings.push(Timing {
            phase: phase.to_string(),
            ms,
        });
    }
    if let Some(e) = &stats.engine {
        report.guarantees.push(Guarantee::at_most(
            "sum of |V_t| <= (depth + 1) * n",
            e.sum_vt as f64,
            ((e.depth + 1) * n) as f64,
        ));
        report.guarantees.push(Guarantee::at_most(
            "depth <= 4 * ceil(log2(nodes + 1)) + 4",
            e.depth as f64,
            depth_bound(e.nodes) as f64,
        ));
        report.guarantees.push(Guarantee::at_most(
            "balanced width + 1 <= 4 * (heuristic width + 1)",
            (e.width + 1) as f64,
            (4 * (stats.heuristic_width + 1)) as f64,
        ));
    }
    report.stats = serde_json::to_value(stats).unwrap_or(Value::Null);
}

fn extreme(eps: f64, diameter: bool, path: &Path, out: &mut Out, report: &mut RunReport) -> Result<()> {
    check_eps(eps)?;
    report.eps = Some(eps);
    let input = Input::read(path, report)?;
    let key = if diameter { "diameter" } else { "radius" };
    let start = Instant::now();
    let run = match run_eccentricities(&input.loaded.graph, eps, EngineOptions::default()) {
        Ok(run) => run,
        Err(Error::InfiniteDiameter) => {
            report.answers = json!({ key: "inf" });
            return out.scalar(key, f64::INFINITY);
        }
        Err(e) => return Err(e.into()),
    };
    report.time("total", start);
    pipeline_report(report, &run.stats, input.loaded.graph.vertex_count());
    let x = if diameter { run.diameter() } else { run.radius() };
    report.answers = json!({ key: x });
    out.scalar(key, x)
}

fn oracle_query(eps: f64, path: &Path, queries: &Path, out: &mut Out, report: &mut RunReport) -> Result<()> {
    check_eps(eps)?;
    report.eps = Some(eps);
    let input = Input::read(path, report)?;
    let pairs = input.queries(queries)?;
    let g = &input.loaded.graph;
    let start = Instant::now();
    let d0 = sssp(g, 0)?.eccentricity();
    if d0.is_infinite() {
        return Err(Error::InfiniteDiameter.into());
    }
    let answers: Vec<f64> = if d0 == 0.0 {
        vec![0.0; pairs.len()]
    } else {
        let delta = eps * d0 / 16.0;
        let c = build_clustering(g, delta)?;
        let h = cluster_graph(g, &c)?;
        let td = heuristic_decomposition(&h);
        let bd = balance_binary(&td);
        let engine = build_engine_with(
            g,
            c,
            bd,
            EngineOptions {
                coresets: CoresetMode::Skip,
                validate: false,
            },
        )?;
        report.time("build", start);
        let s = engine.stats();
        report.guarantees.push(Guarantee::at_most(
            "sum of |V_t| <= (depth + 1) * n",
            s.sum_vt as f64,
            ((s.depth + 1) * g.vertex_count()) as f64,
        ));
        report.stats = json!({ "delta": delta, "engine": s, "heuristic_width": td.width() });
        let start = Instant::now();
        let mut worst_cost = 0usize;
        let xs = pairs
            .iter()
            .map(|&(u, v)| {
                let (x, cost) = engine.apx_dist_counted(u, v);
                worst_cost = worst_cost.max(cost);
                x
            })
            .collect();
        report.time("queries", start);
        report.guarantees.push(Guarantee::at_most(
            "table pairs per query <= (depth + 1) * (width + 1)",
            worst_cost as f64,
            ((s.depth + 1) * (s.width + 1)) as f64,
        ));
        xs
    };
    report.answers = json!(answers.iter().map(|&x| dist_json(x)).collect::<Vec<_>>());
    out.list("distances", &answers)
}

fn mult_oracle(
    eps: f64,
    options: ScaledOptions,
    path: &Path,
    queries: &Path,
    out: &mut Out,
    report: &mut RunReport,
) -> Result<()> {
    check_eps(eps)?;
    report.eps = Some(eps);
    let input = Input::read(path, report)?;
    let pairs = input.queries(queries)?;
    let g = &input.loaded.graph;
    let start = Instant::now();
    let oracle = build_multiplicative_oracle_with(g, eps, options)?;
    report.time("build", start);
    let start = Instant::now();
    let answers = pairs
        .iter()
        .map(|&(u, v)| oracle.query(u, v))
        .collect::<metric_engine::Result<Vec<f64>>>()?;
    report.time("queries", start);
    let levels = oracle.report();
    let n = g.vertex_count();
    for l in &levels.levels {
        report.guarantees.push(Guarantee::at_most(
            format!("window vertices <= (2p + 1) * n at cap {}", l.delta_cap),
            l.sum_interval_vertices as f64,
            ((2 * l.p as usize + 1) * n) as f64,
        ));
    }
    report.stats = serde_json::to_value(&levels)?;
    report.answers = json!(answers.iter().map(|&x| dist_json(x)).collect::<Vec<_>>());
    out.list("distances", &answers)
}

fn parse_apices(list: &str, input: &Input) -> Result<Vec<usize>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            let id: u64 = s
                .parse()
                .map_err(|_| Error::Domain(format!("bad apex id `{s}`")))?;
            input
                .loaded
                .dense_id(id)
                .ok_or_else(|| Error::Domain(format!("apex {id} is not in the graph")).into())
        })
        .collect()
}

fn apex(eps: f64, apices: Option<&str>, path: &Path, out: &mut Out, report: &mut RunReport) -> Result<()> {
    check_eps(eps)?;
    report.eps = Some(eps);
    let input = Input::read(path, report)?;
    let list = match apices {
        Some(s) => s.to_string(),
        None => input
            .loaded
            .comments
            .iter()
            .find_map(|c| c.trim().strip_prefix("apices:").map(str::to_string))
            .ok_or_else(|| {
                anyhow!(Error::Domain(
                    "no --apices given and the graph file has no `apices:` comment".into()
                ))
            })?,
    };
    let ids = parse_apices(&list, &input)?;
    let original: Vec<u64> = ids.iter().map(|&v| input.original(v)).collect();
    let apex_input = ApexInput::new(input.loaded.graph.clone(), ids)?;
    let start = Instant::now();
    let doc = match apex_diameter(&apex_input, eps) {
        Ok(res) => {
            report.time("total", start);
            report.answers = json!({ "estimate": res.estimate });
            report.stats = serde_json::to_value(&res.steps)?;
            json!({
                "schema": SCHEMA,
                "eps": eps,
                "apices": original,
                "estimate": res.estimate,
                "D0": res.d0,
                "steps": res.steps.len(),
                "verdicts": res.steps,
            })
        }
        Err(Error::InfiniteDiameter) => json!({
            "schema": SCHEMA,
            "eps": eps,
            "apices": original,
            "estimate": "inf",
            "D0": "inf",
            "steps": 0,
            "verdicts": [],
        }),
        Err(e) => return Err(e.into()),
    };
    out.doc(doc)
}

fn accept(criteria: &[u8], out: &mut Out, report: &mut RunReport) -> Result<ExitCode> {
    let ids: Vec<u8> = if criteria.is_empty() {
        acceptance::CRITERIA.to_vec()
    } else {
        criteria.to_vec()
    };
    if let Some(bad) = ids.iter().find(|id| !acceptance::CRITERIA.contains(id)) {
        bail!(Error::Domain(format!("unknown criterion {bad} (expected 1 to 10)")));
    }
    let mut results = Vec::new();
    for id in ids {
        let r = acceptance::run_criterion(id).unwrap_or_else(|e| acceptance::CriterionResult {
            id,
            name: "error",
            status: Status::Fail,
            checks: 0,
            violations: 1,
            detail: e.to_string(),
            ms: 0.0,
        });
        if !out.json {
            out.line(r.to_string())?;
            out.w.flush()?;
        }
        results.push(r);
    }
    let failed = results.iter().filter(|r| r.status == Status::Fail).count();
    if out.json {
        out.doc(json!({ "schema": SCHEMA, "criteria": results, "failed": failed }))?;
    } else {
        out.line(format!(
            "{} of {} criteria passed",
            results.len() - failed,
            results.len()
        ))?;
    }
    report.answers = serde_json::to_value(&results)?;
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
