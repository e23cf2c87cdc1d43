//! `wsn3d`: shape tables, seeded experiments, cell assignment and routing
//! from the command line.

mod output;

use std::collections::HashSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use wsn3d::config::ExperimentConfig;
use wsn3d::routing::greedy_route_with;
use wsn3d::simulator::{accuracy_experiment_in, accuracy_region, lifetime_simulation};
use wsn3d::tables::{table_rows, Table};
use wsn3d::{CellId, CellShape, Error, LatticeSpec, Point3, RouteOutcome, TieBreak, ORACLE_WINDOW};

use output::Format;

const EXIT_GATE: u8 = 1;
const EXIT_INVALID: u8 = 3;
const EXIT_DEAD_END: u8 = 4;
const EXIT_IO: u8 = 5;

#[derive(Parser, Debug)]
#[command(
    name = "wsn3d",
    version,
    about = "3D sensor network cell tessellations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Computed shape constants next to their quoted decimals.
    Tables {
        /// I (radii, neighbor distances, sensing ranges) or II (active nodes, lifetime).
        #[arg(value_parser = parse_table)]
        which: Table,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Cell id of a point.
    Assign {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point: Point3,
        #[arg(long, value_enum, default_value = "exact")]
        method: Method,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Seeded Monte-Carlo experiments.
    Simulate {
        #[arg(value_enum)]
        kind: SimKind,
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long)]
        seed: u64,
        /// Sample sizes for `accuracy` (overrides the config).
        #[arg(long, num_args = 1..)]
        n: Vec<usize>,
        /// Also write one CSV row per lifetime run to this file.
        #[arg(long)]
        per_run: Option<PathBuf>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Greedy route between two cells.
    Route {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long, value_parser = parse_cell, allow_hyphen_values = true)]
        src: CellId,
        #[arg(long, value_parser = parse_cell, allow_hyphen_values = true)]
        dst: CellId,
        /// File with one dead cell `u,v,w` per line (`#` starts a comment).
        #[arg(long)]
        dead_cells: Option<PathBuf>,
        /// Pick uniformly among improving neighbors with this seed.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Debug)]
struct LatticeArgs {
    /// cb, hp, rd or to.
    #[arg(long, value_parser = parse_shape)]
    shape: Option<CellShape>,
    /// Transmission range in meters.
    #[arg(
        long,
        conflicts_with = "rt_sqrt17_units",
        allow_negative_numbers = true
    )]
    rt: Option<f64>,
    /// Transmission range as a multiple of √17 meters.
    #[arg(long, allow_negative_numbers = true)]
    rt_sqrt17_units: Option<f64>,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    sink: Option<Point3>,
    /// TOML experiment config; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "pretty")]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Exact,
    #[value(name = "nearest_int")]
    NearestInt,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SimKind {
    Accuracy,
    Lifetime,
}

fn parse_table(s: &str) -> Result<Table, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_shape(s: &str) -> Result<CellShape, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_cell(s: &str) -> Result<CellId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_point(s: &str) -> Result<Point3, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected x,y,z but got '{s}'"));
    }
    let mut c = [0.0; 3];
    for (slot, part) in c.iter_mut().zip(&parts) {
        *slot = part
            .parse()
            .map_err(|_| format!("bad number '{part}' in '{s}'"))?;
    }
    Point3::try_new(c[0], c[1], c[2]).map_err(|e| e.to_string())
}

enum Failure {
    Error(Error),
    Gate,
    DeadEnd,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Error(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Error(Error::Io(e))
    }
}

type CmdResult = Result<(), Failure>;

struct Resolved {
    config: ExperimentConfig,
    shapes: Vec<CellShape>,
    r_t: f64,
    sink: Point3,
}

impl LatticeArgs {
    fn resolve(&self) -> Result<Resolved, Error> {
        let config = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::from_toml_str("")?,
        };
        let shapes = match self.shape {
            Some(s) => vec![s],
            None => config.shapes()?,
        };
        let r_t = match (self.rt, self.rt_sqrt17_units) {
            (Some(r), _) => r,
            (None, Some(m)) => m * 17f64.sqrt(),
            (None, None) => config.transmission_range(),
        };
        let sink = match self.sink {
            Some(p) => p,
            None => config.sink()?,
        };
        Ok(Resolved {
            config,
            shapes,
            r_t,
            sink,
        })
    }
}

impl Resolved {
    /// The single shape for commands that act on one lattice; TO unless
    /// chosen by flag or a one-shape config.
    fn one_shape(&self, explicit: Option<CellShape>) -> CellShape {
        match (explicit, self.config.shapes.as_deref()) {
            (Some(s), _) => s,
            (None, Some([_])) => self.shapes[0],
            _ => CellShape::TruncatedOctahedron,
        }
    }

    fn lattice(&self, shape: CellShape) -> Result<LatticeSpec, Error> {
        LatticeSpec::new(shape, self.r_t, self.sink)
    }
}

fn fmt_f(x: f64) -> String {
    format!("{x:.6}")
}

fn cmd_tables(which: Table, out: &OutputArgs) -> CmdResult {
    let rows = table_rows(which);
    let mut w = output::sink(out.out.as_deref())?;
    match out.format {
        Format::Csv => output::csv_rows(&mut w, &rows)?,
        Format::Json => output::json(&mut w, &rows)?,
        Format::Pretty => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.shape.code().to_string(),
                        r.quantity.clone(),
                        r.unit.to_string(),
                        r.exact.clone(),
                        format!("{:.10}", r.computed),
                        r.quoted.to_string(),
                        format!("{:.3e}", r.deviation),
                        if r.pass { "ok" } else { "FAIL" }.to_string(),
                    ]
                })
                .collect();
            writeln!(w, "Table {which}")?;
            output::pretty(
                &mut w,
                &[
                    "shape",
                    "quantity",
                    "unit",
                    "exact",
                    "computed",
                    "quoted",
                    "deviation",
                    "gate",
                ],
                &body,
            )?;
        }
    }
    w.flush()?;
    if rows.iter().all(|r| r.pass) {
        Ok(())
    } else {
        Err(Failure::Gate)
    }
}

#[derive(Serialize)]
struct AssignRow {
    shape: CellShape,
    method: &'static str,
    x: f64,
    y: f64,
    z: f64,
    u: i64,
    v: i64,
    w: i64,
    center_x: f64,
    center_y: f64,
    center_z: f64,
    distance: f64,
    matches_exact: bool,
}

fn cmd_assign(lattice: &LatticeArgs, point: Point3, method: Method, out: &OutputArgs) -> CmdResult {
    let resolved = lattice.resolve()?;
    let spec = resolved.lattice(resolved.one_shape(lattice.shape))?;
    let exact = spec.assign_cell(point);
    let (id, name) = match method {
        Method::Exact => (exact, "exact"),
        Method::NearestInt => (spec.assign_cell_nearest_int(point), "nearest_int"),
        Method::Oracle => (spec.assign_cell_oracle(point, ORACLE_WINDOW)?, "oracle"),
    };
    let c = spec.cell_center(id);
    let row = AssignRow {
        shape: spec.shape(),
        method: name,
        x: point.x,
        y: point.y,
        z: point.z,
        u: id.u,
        v: id.v,
        w: id.w,
        center_x: c.x,
        center_y: c.y,
        center_z: c.z,
        distance: point.distance(c),
        matches_exact: id == exact,
    };
    let mut w = output::sink(out.out.as_deref())?;
    match out.format {
        Format::Csv => output::csv_rows(&mut w, &[row])?,
        Format::Json => output::json(&mut w, &row)?,
        Format::Pretty => {
            writeln!(w, "shape     {}", row.shape.code())?;
            writeln!(w, "method    {name}")?;
            writeln!(w, "point     {point}")?;
            writeln!(w, "cell      {id}")?;
            writeln!(w, "center    {c}")?;
            writeln!(w, "distance  {}", fmt_f(row.distance))?;
            if id != exact {
                writeln!(w, "mismatch  exact assignment is {exact}")?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct AccuracyRow {
    shape: CellShape,
    seed: u64,
    n: usize,
    correct_exact: usize,
    correct_nearest_int: usize,
    exact_fraction: f64,
    nearest_int_fraction: f64,
}

fn cmd_accuracy(resolved: &Resolved, seed: u64, ns: &[usize], out: &OutputArgs) -> CmdResult {
    let ns: Vec<usize> = if ns.is_empty() {
        vec![resolved.config.accuracy.n]
    } else {
        ns.to_vec()
    };
    let mut rows = Vec::new();
    for &shape in &resolved.shapes {
        let spec = resolved.lattice(shape)?;
        let region = match resolved.config.deployment {
            Some(_) => resolved.config.deployment(seed)?.region,
            None => accuracy_region(&spec),
        };
        for &n in &ns {
            let rep = accuracy_experiment_in(&spec, &region, n, seed)?;
            rows.push(AccuracyRow {
                shape,
                seed,
                n,
                correct_exact: rep.correct_exact,
                correct_nearest_int: rep.correct_nearest_int,
                exact_fraction: rep.exact_fraction(),
                nearest_int_fraction: rep.nearest_int_fraction(),
            });
        }
    }
    let mut w = output::sink(out.out.as_deref())?;
    match out.format {
        Format::Csv => output::csv_rows(&mut w, &rows)?,
        Format::Json => output::json(&mut w, &rows)?,
        Format::Pretty => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.shape.code().to_string(),
                        r.n.to_string(),
                        r.correct_exact.to_string(),
                        r.correct_nearest_int.to_string(),
                        format!("{:.4}", r.nearest_int_fraction),
                    ]
                })
                .collect();
            output::pretty(
                &mut w,
                &[
                    "shape",
                    "n",
                    "correct_exact",
                    "correct_nearest_int",
                    "nearest_int_fraction",
                ],
                &body,
            )?;
        }
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize, Clone)]
struct RunRow {
    shape: CellShape,
    seed: u64,
    k: usize,
    battery_capacity: f64,
    node_count: usize,
    interior_cells: usize,
    cells_populated: usize,
    mean_nodes_per_cell: f64,
    network_lifetime: f64,
    first_failed_cell: String,
}

#[derive(Serialize)]
struct LifetimeRow {
    shape: CellShape,
    k: usize,
    battery_capacity: f64,
    node_count: usize,
    runs: usize,
    first_seed: u64,
    mean_nodes_per_cell: f64,
    mean_lifetime: f64,
    min_lifetime: f64,
    max_lifetime: f64,
    /// Mean lifetime over the TO mean lifetime; empty without a TO run.
    lifetime_vs_to: Option<f64>,
    closed_form_vs_to: f64,
}

#[derive(Serialize)]
struct LifetimeReport<'a> {
    summary: &'a [LifetimeRow],
    runs: &'a [RunRow],
}

fn run_lifetimes(resolved: &Resolved, seed: u64) -> Result<Vec<RunRow>, Error> {
    let life = &resolved.config.lifetime;
    let mut jobs = Vec::new();
    for &shape in &resolved.shapes {
        for i in 0..life.runs as u64 {
            jobs.push((shape, seed.wrapping_add(i)));
        }
    }
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get());
    let chunk = jobs.len().div_ceil(threads).max(1);
    std::thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|&(shape, s)| {
                            let spec = resolved.lattice(shape)?;
                            let config = resolved.config.deployment(s)?;
                            let r =
                                lifetime_simulation(&spec, &config, life.battery_capacity, life.k)?;
                            Ok(RunRow {
                                shape,
                                seed: s,
                                k: r.k,
                                battery_capacity: r.battery_capacity,
                                node_count: config.node_count,
                                interior_cells: r.interior_cells,
                                cells_populated: r.cells_populated,
                                mean_nodes_per_cell: r.mean_nodes_per_cell,
                                network_lifetime: r.network_lifetime,
                                first_failed_cell: r.first_failed_cell.to_string(),
                            })
                        })
                        .collect::<Result<Vec<_>, Error>>()
                })
            })
            .collect();
        let mut rows = Vec::with_capacity(jobs.len());
        for h in handles {
            rows.extend(h.join().expect("simulation thread panicked")?);
        }
        Ok(rows)
    })
}

fn summarize(resolved: &Resolved, runs: &[RunRow], seed: u64) -> Vec<LifetimeRow> {
    let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
    let lifetimes = |shape: CellShape| -> Vec<f64> {
        runs.iter()
            .filter(|r| r.shape == shape)
            .map(|r| r.network_lifetime)
            .collect()
    };
    let to_mean = resolved
        .shapes
        .contains(&CellShape::TruncatedOctahedron)
        .then(|| mean(&lifetimes(CellShape::TruncatedOctahedron)));
    let life = &resolved.config.lifetime;
    resolved
        .shapes
        .iter()
        .map(|&shape| {
            let ls = lifetimes(shape);
            let per_cell: Vec<f64> = runs
                .iter()
                .filter(|r| r.shape == shape)
                .map(|r| r.mean_nodes_per_cell)
                .collect();
            let m = mean(&ls);
            LifetimeRow {
                shape,
                k: life.k,
                battery_capacity: life.battery_capacity,
                node_count: runs[0].node_count,
                runs: ls.len(),
                first_seed: seed,
                mean_nodes_per_cell: mean(&per_cell),
                mean_lifetime: m,
                min_lifetime: ls.iter().copied().fold(f64::INFINITY, f64::min),
                max_lifetime: ls.iter().copied().fold(0.0, f64::max),
                lifetime_vs_to: to_mean.map(|t| m / t),
                closed_form_vs_to: wsn3d::planner::lifetime_fraction(shape),
            }
        })
        .collect()
}

fn cmd_lifetime(
    resolved: &Resolved,
    seed: u64,
    per_run: Option<&Path>,
    out: &OutputArgs,
) -> CmdResult {
    if resolved.config.lifetime.runs == 0 {
        return Err(Error::InvalidParameter("lifetime runs must be at least 1".into()).into());
    }
    let runs = run_lifetimes(resolved, seed)?;
    let summary = summarize(resolved, &runs, seed);
    if let Some(path) = per_run {
        let mut w = output::sink(Some(path))?;
        output::csv_rows(&mut w, &runs)?;
        w.flush()?;
    }
    let mut w = output::sink(out.out.as_deref())?;
    match out.format {
        Format::Csv => output::csv_rows(&mut w, &summary)?,
        Format::Json => output::json(
            &mut w,
            &LifetimeReport {
                summary: &summary,
                runs: &runs,
            },
        )?,
        Format::Pretty => {
            let body: Vec<Vec<String>> = summary
                .iter()
                .map(|r| {
                    vec![
                        r.shape.code().to_string(),
                        r.runs.to_string(),
                        format!("{:.2}", r.mean_nodes_per_cell),
                        format!("{:.2}", r.mean_lifetime),
                        r.lifetime_vs_to.map_or("-".into(), |x| format!("{x:.4}")),
                        format!("{:.4}", r.closed_form_vs_to),
                    ]
                })
                .collect();
            output::pretty(
                &mut w,
                &[
                    "shape",
                    "runs",
                    "nodes_per_cell",
                    "mean_lifetime",
                    "vs_to",
                    "closed_form",
                ],
                &body,
            )?;
        }
    }
    w.flush()?;
    Ok(())
}

fn read_dead_cells(path: &Path) -> Result<HashSet<CellId>, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })?;
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(str::parse)
        .collect()
}

#[derive(Serialize)]
struct HopRow {
    step: usize,
    u: i64,
    v: i64,
    w: i64,
    metric: i64,
    outcome: RouteOutcome,
}

#[derive(Serialize)]
struct RouteReport {
    shape: CellShape,
    src: CellId,
    dst: CellId,
    outcome: RouteOutcome,
    hop_count: usize,
    hops: Vec<CellId>,
    metric_trace: Vec<i64>,
}

fn cmd_route(
    lattice: &LatticeArgs,
    src: CellId,
    dst: CellId,
    dead_cells: Option<&Path>,
    seed: Option<u64>,
    out: &OutputArgs,
) -> CmdResult {
    let resolved = lattice.resolve()?;
    let spec = resolved.lattice(resolved.one_shape(lattice.shape))?;
    let dead = match dead_cells {
        Some(p) => read_dead_cells(p)?,
        None => HashSet::new(),
    };
    let tie_break = seed.map_or(TieBreak::MinMetric, |seed| TieBreak::Random { seed });
    let path = greedy_route_with(&spec, src, dst, |c| !dead.contains(&c), tie_break)?;
    let report = RouteReport {
        shape: spec.shape(),
        src,
        dst,
        outcome: path.outcome,
        hop_count: path.hop_count(),
        metric_trace: path.metric_trace(dst),
        hops: path.hops,
    };
    let mut w = output::sink(out.out.as_deref())?;
    match out.format {
        Format::Csv => {
            let rows: Vec<HopRow> = report
                .hops
                .iter()
                .zip(&report.metric_trace)
                .enumerate()
                .map(|(step, (h, m))| HopRow {
                    step,
                    u: h.u,
                    v: h.v,
                    w: h.w,
                    metric: *m,
                    outcome: report.outcome,
                })
                .collect();
            output::csv_rows(&mut w, &rows)?;
        }
        Format::Json => output::json(&mut w, &report)?,
        Format::Pretty => {
            let hops: Vec<String> = report.hops.iter().map(CellId::to_string).collect();
            let trace: Vec<String> = report.metric_trace.iter().map(i64::to_string).collect();
            writeln!(w, "shape    {}", report.shape.code())?;
            writeln!(w, "route    {}", hops.join(" -> "))?;
            writeln!(w, "metric   {}", trace.join(" "))?;
            writeln!(w, "hops     {}", report.hop_count)?;
            let outcome = match report.outcome {
                RouteOutcome::Delivered => "delivered",
                RouteOutcome::DeadEnd => "dead_end",
            };
            writeln!(w, "outcome  {outcome}")?;
        }
    }
    w.flush()?;
    match report.outcome {
        RouteOutcome::Delivered => Ok(()),
        RouteOutcome::DeadEnd => Err(Failure::DeadEnd),
    }
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Tables { which, out } => cmd_tables(which, &out),
        Command::Assign {
            lattice,
            point,
            method,
            out,
        } => cmd_assign(&lattice, point, method, &out),
        Command::Simulate {
            kind,
            lattice,
            seed,
            n,
            per_run,
            out,
        } => {
            let resolved = lattice.resolve()?;
            match kind {
                SimKind::Accuracy => cmd_accuracy(&resolved, seed, &n, &out),
                SimKind::Lifetime => cmd_lifetime(&resolved, seed, per_run.as_deref(), &out),
            }
        }
        Command::Route {
            lattice,
            src,
            dst,
            dead_cells,
            seed,
            out,
        } => cmd_route(&lattice, src, dst, dead_cells.as_deref(), seed, &out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Gate) => {
            eprintln!("wsn3d: some rows fall outside the gate");
            ExitCode::from(EXIT_GATE)
        }
        Err(Failure::DeadEnd) => ExitCode::from(EXIT_DEAD_END),
        Err(Failure::Error(e)) => {
            eprintln!("wsn3d: {e}");
            ExitCode::from(match e {
                Error::InvalidParameter(_) | Error::EmptyRegion => EXIT_INVALID,
                Error::Config(_) | Error::Io(_) => EXIT_IO,
            })
        }
    }
}
