//! Command-line driver. `main` only forwards to [`run`].

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::analysis::{
    benchmark_summary, cross_model_report, csv_string, geometry_stats, histogram, multiplicity_report, sig6, BenchJob,
    GeometryRow, HistogramMode, PairedResult,
};
use crate::error::{Error, Result};
use crate::instance::{generate, parse_instance, write_atomic, write_instance, write_manifest, Family, GeneratorSpec, Instance, ManifestEntry};
use crate::milp::{emit, verify_external, FormulationKind};
use crate::objectives::{eval_maxsum, ObjectiveKind, Solution};
use crate::plot::{histogram_svg, scatter_svg};
use crate::solvers::{solve, solve_bilevel, solve_maxmin_original, BiLevelMode, SolverBudget, Status};

#[derive(Parser, Debug)]
#[command(name = "dispersion", version, about = "Exact solvers, generators and analysis for diversity and dispersion problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct BudgetArgs {
    /// Wall-clock limit per solver call, in seconds.
    #[arg(long, default_value_t = 60.0)]
    time_limit: f64,
    /// Search nodes per backtracking or branch-and-bound call.
    #[arg(long)]
    max_nodes: Option<u64>,
    /// Subinterval exponent for the original MaxMin method.
    #[arg(long)]
    q: Option<u32>,
    /// Exit with status 2 when any solver runs out of budget.
    #[arg(long)]
    strict: bool,
}

impl BudgetArgs {
    fn budget(&self) -> Result<SolverBudget> {
        if !(self.time_limit.is_finite() && self.time_limit > 0.0) {
            return Err(Error::InvalidSpec("--time-limit must be positive".into()));
        }
        let mut b = SolverBudget { time_limit: Duration::from_secs_f64(self.time_limit), q: self.q, ..Default::default() };
        if let Some(n) = self.max_nodes {
            b.max_nodes = n;
        }
        b.validate()?;
        Ok(b)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate instances and a manifest.
    Generate {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// First seed; `--count` consecutive seeds are used.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: u64,
        /// Coordinate dimension for GKD families.
        #[arg(long)]
        dim: Option<usize>,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve one instance.
    Solve {
        input: PathBuf,
        #[arg(long)]
        model: String,
        #[arg(long)]
        m: Option<usize>,
        /// Cap on MaxMin optima enumerated by the bi-level models.
        #[arg(long, default_value_t = 100_000)]
        cap: usize,
        #[arg(long, default_value = "enumerate")]
        mode: String,
        /// Use the original interval-splitting MaxMin method.
        #[arg(long)]
        original: bool,
        /// Include wall time and search statistics.
        #[arg(long)]
        timings: bool,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a given subset under every model.
    Evaluate {
        input: PathBuf,
        /// Comma-separated 0-based node indices.
        #[arg(long)]
        subset: String,
        #[arg(long)]
        model: Option<String>,
    },
    /// Reports over a set of instances, written as CSV.
    Analyze {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// cross | histogram | geometry | multiplicity
        #[arg(long)]
        report: String,
        #[arg(long)]
        m: Option<usize>,
        /// Models for histogram and geometry reports, comma-separated.
        #[arg(long, default_value = "maxmin")]
        model: String,
        /// normalized10 | integer
        #[arg(long, default_value = "normalized10")]
        mode: String,
        #[arg(long, default_value_t = 100_000)]
        cap: usize,
        #[arg(long, default_value = "set")]
        set: String,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a MILP formulation in LP format.
    ExportLp {
        input: PathBuf,
        #[arg(long)]
        kind: String,
        #[arg(long)]
        m: Option<usize>,
        /// Threshold for the packing formulations.
        #[arg(long)]
        l: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check an external solver's solution against a formulation.
    Verify {
        input: PathBuf,
        #[arg(long)]
        kind: String,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        l: Option<f64>,
        /// File with `x_<i> <value>` lines.
        #[arg(long)]
        solution: PathBuf,
    },
    /// SVG figures.
    Plot {
        #[command(subcommand)]
        figure: Figure,
    },
    /// Run models over instances and summarize solved counts and deviations.
    Bench {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, default_value = "maxsum,maxmin,maxminsum,mindiff")]
        models: String,
        #[arg(long)]
        m: Option<usize>,
        /// Set name; defaults to each instance's family.
        #[arg(long)]
        set: Option<String>,
        /// Also run the original MaxMin method as a separate job.
        #[arg(long)]
        original: bool,
        #[arg(long)]
        threads: Option<usize>,
        /// Add a wall-time column to the per-job CSV.
        #[arg(long)]
        timings: bool,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Summary CSV.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Per-job CSV.
        #[arg(long)]
        jobs_out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum Figure {
    /// Points with the selected subsets of one or more models.
    Scatter {
        input: PathBuf,
        #[arg(long, default_value = "maxmin")]
        models: String,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value_t = 100_000)]
        cap: usize,
        /// Axis range `lo,hi`; defaults to the bounding box.
        #[arg(long)]
        range: Option<String>,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Histogram of the pooled pairwise distances of one model's optima.
    Histogram {
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long, default_value = "maxmin")]
        model: String,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value = "normalized10")]
        mode: String,
        #[arg(long, default_value_t = 100_000)]
        cap: usize,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A model as named on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Plain(ObjectiveKind),
    BiLevel(ObjectiveKind),
}

impl Model {
    pub fn label(self) -> String {
        match self {
            Model::Plain(k) => k.as_str().to_string(),
            Model::BiLevel(k) => format!("bilevel-{}", k.as_str()),
        }
    }

    fn kind(self) -> ObjectiveKind {
        match self {
            Model::Plain(k) | Model::BiLevel(k) => k,
        }
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        match s.strip_prefix("bilevel-") {
            Some(rest) => match rest.parse()? {
                k @ (ObjectiveKind::MaxSum | ObjectiveKind::MaxMinSum) => Ok(Model::BiLevel(k)),
                _ => Err(Error::InvalidSpec(format!("unknown model {s:?}"))),
            },
            None => Ok(Model::Plain(s.parse()?)),
        }
    }
}

fn parse_models(list: &str) -> Result<Vec<Model>> {
    list.split(',').filter(|s| !s.trim().is_empty()).map(str::parse).collect()
}

/// Result of one model run, flattened for reporting.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub label: String,
    pub kind: ObjectiveKind,
    pub status: Status,
    pub value: Option<f64>,
    pub solution: Option<Solution>,
    /// Extra `key: value` lines (bi-level details, search statistics).
    pub details: Vec<(String, String)>,
    pub stats: Vec<(String, String)>,
}

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    pub cap: usize,
    pub mode: BiLevelMode,
    pub original: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { cap: 100_000, mode: BiLevelMode::Enumerate, original: false }
    }
}

/// Runs `model` on `inst` with the native exact solver.
pub fn run_model(inst: &Instance, m: usize, model: Model, opts: RunOptions, budget: &SolverBudget) -> Result<Outcome> {
    match model {
        Model::Plain(kind) => {
            let r = if kind == ObjectiveKind::MaxMin && opts.original {
                solve_maxmin_original(inst, m, budget)?
            } else {
                solve(inst, m, kind, budget)?
            };
            let label = if kind == ObjectiveKind::MaxMin && opts.original { "maxmin-original".to_string() } else { model.label() };
            let mut stats = vec![
                ("nodes".to_string(), r.stats.nodes.to_string()),
                ("time_ms".to_string(), format!("{:.3}", r.stats.wall_time.as_secs_f64() * 1e3)),
            ];
            if kind == ObjectiveKind::MaxMin {
                stats.insert(1, ("decision_solves".to_string(), r.stats.decision_solves.to_string()));
            }
            Ok(Outcome { label, kind, status: r.status, value: r.value, solution: r.solution, details: Vec::new(), stats })
        }
        Model::BiLevel(kind) => {
            let r = solve_bilevel(inst, m, kind, opts.cap, budget, opts.mode)?;
            let details = vec![
                ("mode".to_string(), r.mode.to_string()),
                ("d_star".to_string(), r.d_star.to_string()),
                ("optima_enumerated".to_string(), r.optima_enumerated.to_string()),
                ("cap".to_string(), r.cap.to_string()),
                ("truncated".to_string(), r.truncated.to_string()),
            ];
            Ok(Outcome {
                label: model.label(),
                kind,
                status: r.status,
                value: Some(r.upper_value),
                solution: Some(r.chosen),
                details,
                stats: Vec::new(),
            })
        }
    }
}

fn read_instance(path: &Path) -> Result<Instance> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut inst = parse_instance(&text)?;
    if inst.name.is_empty() {
        inst.name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    }
    Ok(inst)
}

fn resolve_m(inst: &Instance, m: Option<usize>) -> Result<usize> {
    m.or(inst.default_m)
        .ok_or_else(|| Error::InvalidSpec(format!("instance {:?} has no default m; pass --m", inst.name)))
}

fn emit_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn fmt_value(v: Option<f64>) -> String {
    v.map_or_else(|| "none".to_string(), |v| v.to_string())
}

/// Exit status of a completed command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Done {
    Ok,
    BudgetExceeded,
}

fn budget_done(any_exceeded: bool, strict: bool) -> Done {
    if any_exceeded && strict {
        Done::BudgetExceeded
    } else {
        Done::Ok
    }
}

/// Parses `args` (program name first) and runs the command. Returns the
/// process exit code: 0 success, 1 usage or input error, 2 budget
/// exhaustion under `--strict`.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(Done::Ok) => 0,
        Ok(Done::BudgetExceeded) => {
            eprintln!("error: solver budget exhausted");
            2
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn dispatch(cmd: Command) -> Result<Done> {
    match cmd {
        Command::Generate { family, n, m, seed, count, dim, out } => {
            let family: Family = family.parse()?;
            if count == 0 {
                return Err(Error::InvalidSpec("--count must be positive".into()));
            }
            std::fs::create_dir_all(&out)?;
            let mut entries = Vec::new();
            for s in seed..seed + count {
                let mut spec = GeneratorSpec::new(family, n, m, s);
                if dim.is_some() {
                    spec.dim = dim;
                }
                let inst = generate(&spec)?;
                let filename = format!("{}.txt", spec.instance_name());
                write_atomic(&out.join(&filename), write_instance(&inst).as_bytes())?;
                entries.push(ManifestEntry { family, n, m, seed: s, filename });
            }
            let mut buf = Vec::new();
            write_manifest(&entries, &mut buf)?;
            write_atomic(&out.join("manifest.csv"), &buf)?;
            Ok(Done::Ok)
        }
        Command::Solve { input, model, m, cap, mode, original, timings, budget, out } => {
            let inst = read_instance(&input)?;
            let model: Model = model.parse()?;
            let m = if model == Model::Plain(ObjectiveKind::MaxMean) { m.unwrap_or(0) } else { resolve_m(&inst, m)? };
            let opts = RunOptions { cap, mode: mode.parse()?, original };
            let b = budget.budget()?;
            let o = run_model(&inst, m, model, opts, &b)?;
            let mut text = String::new();
            let _ = writeln!(text, "instance: {}", inst.name);
            let _ = writeln!(text, "model: {}", o.label);
            if model != Model::Plain(ObjectiveKind::MaxMean) {
                let _ = writeln!(text, "m: {m}");
            }
            let _ = writeln!(text, "status: {}", o.status);
            let _ = writeln!(text, "value: {}", fmt_value(o.value));
            let _ = writeln!(text, "subset: {}", o.solution.as_ref().map_or_else(String::new, |s| s.to_string()));
            for (k, v) in &o.details {
                let _ = writeln!(text, "{k}: {v}");
            }
            if timings {
                for (k, v) in &o.stats {
                    let _ = writeln!(text, "{k}: {v}");
                }
            }
            emit_output(out.as_deref(), &text)?;
            Ok(budget_done(o.status == Status::BudgetExceeded, budget.strict))
        }
        Command::Evaluate { input, subset, model } => {
            let inst = read_instance(&input)?;
            let idx = subset
                .split(',')
                .filter(|s| !s.trim().is_empty())
                .map(|s| s.trim().parse::<usize>().map_err(|_| Error::InvalidSpec(format!("bad index {s:?}"))))
                .collect::<Result<Vec<_>>>()?;
            let sol = Solution::new(&inst, idx)?;
            let kinds: Vec<ObjectiveKind> = match model {
                Some(k) => vec![k.parse()?],
                None => vec![
                    ObjectiveKind::MaxSum,
                    ObjectiveKind::MaxMin,
                    ObjectiveKind::MaxMinSum,
                    ObjectiveKind::MinDiff,
                    ObjectiveKind::MaxMean,
                ],
            };
            let mut text = String::new();
            for k in kinds {
                let _ = writeln!(text, "{}: {}", k.as_str(), k.evaluate(&inst, &sol)?);
            }
            print!("{text}");
            Ok(Done::Ok)
        }
        Command::Analyze { inputs, report, m, model, mode, cap, set, budget, out } => {
            let insts = inputs.iter().map(|p| read_instance(p)).collect::<Result<Vec<_>>>()?;
            let b = budget.budget()?;
            let opts = RunOptions { cap, ..Default::default() };
            let mut exceeded = false;
            let csv = match report.as_str() {
                "cross" => {
                    let mut rows = Vec::new();
                    for inst in &insts {
                        let m = resolve_m(inst, m)?;
                        let ms = run_model(inst, m, Model::Plain(ObjectiveKind::MaxSum), opts, &b)?;
                        let mms = run_model(inst, m, Model::Plain(ObjectiveKind::MaxMinSum), opts, &b)?;
                        let proven = ms.status == Status::Optimal && mms.status == Status::Optimal;
                        exceeded |= !proven;
                        let mms_sol = mms.solution.as_ref().ok_or(Error::Empty("MaxMinSum incumbent"))?;
                        rows.push(PairedResult {
                            instance: inst.name.clone(),
                            maxsum_opt: ms.value.ok_or(Error::Empty("MaxSum incumbent"))?,
                            maxsum_of_mms: eval_maxsum(inst, mms_sol)?,
                            maxminsum_opt: mms.value.ok_or(Error::Empty("MaxMinSum incumbent"))?,
                            proven,
                        });
                    }
                    csv_string(&[cross_model_report(&set, &rows)?])?
                }
                "histogram" => {
                    let hist_mode: HistogramMode = mode.parse()?;
                    let model: Model = model.parse()?;
                    let sols = solve_all(&insts, m, model, opts, &b, &mut exceeded)?;
                    let pairs: Vec<(&Instance, &Solution)> = insts.iter().zip(&sols).collect();
                    let h = histogram(&pairs, hist_mode)?;
                    csv_string(&h.classes())?
                }
                "geometry" => {
                    let mut rows = Vec::new();
                    for inst in &insts {
                        let mm = resolve_m(inst, m)?;
                        for model in parse_models(&model)? {
                            let o = run_model(inst, mm, model, opts, &b)?;
                            exceeded |= o.status == Status::BudgetExceeded;
                            let sol = o.solution.ok_or(Error::Empty("incumbent"))?;
                            rows.push(GeometryRow { instance: inst.name.clone(), model: o.label, stats: geometry_stats(inst, &sol)? });
                        }
                    }
                    csv_string(&rows)?
                }
                "multiplicity" => {
                    let m = match m {
                        Some(m) => m,
                        None => resolve_m(insts.first().ok_or(Error::Empty("instance set"))?, None)?,
                    };
                    let row = multiplicity_report(&set, &insts, m, cap, &b)?;
                    csv_string(&[row])?
                }
                other => return Err(Error::InvalidSpec(format!("unknown report {other:?}"))),
            };
            emit_output(out.as_deref(), &csv)?;
            Ok(budget_done(exceeded, budget.strict))
        }
        Command::ExportLp { input, kind, m, l, out } => {
            let inst = read_instance(&input)?;
            let kind = FormulationKind::parse(&kind, l)?;
            let m = match kind {
                FormulationKind::NodePacking(_) => m.unwrap_or(0),
                _ => resolve_m(&inst, m)?,
            };
            emit_output(out.as_deref(), &emit(&inst, m, kind)?)?;
            Ok(Done::Ok)
        }
        Command::Verify { input, kind, m, l, solution } => {
            let inst = read_instance(&input)?;
            let kind = FormulationKind::parse(&kind, l)?;
            let m = match kind {
                FormulationKind::NodePacking(_) => m.unwrap_or(0),
                _ => resolve_m(&inst, m)?,
            };
            let text = std::fs::read_to_string(&solution).map_err(|e| Error::Io(format!("{}: {e}", solution.display())))?;
            let r = verify_external(&inst, kind, m, &text)?;
            println!("formulation: {}", r.kind);
            println!("subset: {}", r.solution);
            println!("value: {}", r.value);
            println!("valid: {}", r.valid);
            for (i, j) in &r.violated_conflicts {
                println!("violated: {i},{j}");
            }
            if r.valid {
                Ok(Done::Ok)
            } else {
                Err(Error::InvalidSpec("solution violates conflict rows".into()))
            }
        }
        Command::Plot { figure } => match figure {
            Figure::Scatter { input, models, m, cap, range, budget, out } => {
                let inst = read_instance(&input)?;
                let m = resolve_m(&inst, m)?;
                let b = budget.budget()?;
                let range = range.map(|r| parse_range(&r)).transpose()?;
                let opts = RunOptions { cap, ..Default::default() };
                let mut labeled = Vec::new();
                let mut exceeded = false;
                for model in parse_models(&models)? {
                    let o = run_model(&inst, m, model, opts, &b)?;
                    exceeded |= o.status == Status::BudgetExceeded;
                    if let Some(s) = o.solution {
                        labeled.push((o.label, s));
                    }
                }
                emit_output(out.as_deref(), &scatter_svg(&inst, &labeled, range)?)?;
                Ok(budget_done(exceeded, budget.strict))
            }
            Figure::Histogram { inputs, model, m, mode, cap, budget, out } => {
                let insts = inputs.iter().map(|p| read_instance(p)).collect::<Result<Vec<_>>>()?;
                let b = budget.budget()?;
                let mut exceeded = false;
                let sols = solve_all(&insts, m, model.parse()?, RunOptions { cap, ..Default::default() }, &b, &mut exceeded)?;
                let pairs: Vec<(&Instance, &Solution)> = insts.iter().zip(&sols).collect();
                let h = histogram(&pairs, mode.parse()?)?;
                emit_output(out.as_deref(), &histogram_svg(&h))?;
                Ok(budget_done(exceeded, budget.strict))
            }
        },
        Command::Bench { inputs, models, m, set, original, threads, timings, budget, out, jobs_out } => {
            let insts = inputs.iter().map(|p| read_instance(p)).collect::<Result<Vec<_>>>()?;
            let b = budget.budget()?;
            let mut variants: Vec<(Model, bool)> = parse_models(&models)?.into_iter().map(|md| (md, false)).collect();
            if original {
                variants.push((Model::Plain(ObjectiveKind::MaxMin), true));
            }
            let mut tasks = Vec::new();
            for inst in &insts {
                let mm = match m {
                    Some(m) => m,
                    None => resolve_m(inst, None)?,
                };
                for &(model, orig) in &variants {
                    tasks.push((inst, mm, model, orig));
                }
            }
            let run_all = || {
                tasks
                    .par_iter()
                    .map(|&(inst, mm, model, orig)| {
                        let opts = RunOptions { original: orig, ..Default::default() };
                        run_model(inst, mm, model, opts, &b).map(|o| (inst, model, o))
                    })
                    .collect::<Result<Vec<_>>>()
            };
            let results = match threads {
                Some(t) => rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build()
                    .map_err(|e| Error::InvalidSpec(e.to_string()))?
                    .install(run_all)?,
                None => run_all()?,
            };

            // Best known value per (instance, model) over every solver variant.
            let mut best: HashMap<(&str, String), f64> = HashMap::new();
            for (inst, model, o) in &results {
                if let Some(v) = o.value {
                    let key = (inst.name.as_str(), model.label());
                    let e = best.entry(key).or_insert(v);
                    if model.kind().better(v, *e) {
                        *e = v;
                    }
                }
            }
            let mut jobs = Vec::new();
            let mut job_csv = String::from("set,instance,model,status,value,best_known,dev");
            job_csv.push_str(if timings { ",time_ms\n" } else { "\n" });
            let mut exceeded = false;
            for (inst, model, o) in &results {
                exceeded |= o.status == Status::BudgetExceeded;
                let job = BenchJob {
                    set: set.clone().unwrap_or_else(|| inst.family.to_string()),
                    instance: inst.name.clone(),
                    model: o.label.clone(),
                    sense: model.kind().sense(),
                    status: o.status,
                    value: o.value,
                    best_known: best.get(&(inst.name.as_str(), model.label())).copied(),
                };
                let dev = job.deviation()?;
                let _ = write!(
                    job_csv,
                    "{},{},{},{},{},{},{}",
                    job.set,
                    job.instance,
                    job.model,
                    job.status,
                    job.value.map_or_else(String::new, sig6),
                    job.best_known.map_or_else(String::new, sig6),
                    dev.map_or_else(String::new, sig6)
                );
                if timings {
                    let t = o.stats.iter().find(|(k, _)| k == "time_ms").map_or("", |(_, v)| v.as_str());
                    let _ = write!(job_csv, ",{t}");
                }
                job_csv.push('\n');
                jobs.push(job);
            }
            let summary = csv_string(&benchmark_summary(&jobs)?)?;
            if let Some(p) = jobs_out {
                write_atomic(&p, job_csv.as_bytes())?;
            }
            emit_output(out.as_deref(), &summary)?;
            Ok(budget_done(exceeded, budget.strict))
        }
    }
}

fn solve_all(
    insts: &[Instance],
    m: Option<usize>,
    model: Model,
    opts: RunOptions,
    b: &SolverBudget,
    exceeded: &mut bool,
) -> Result<Vec<Solution>> {
    let mut out = Vec::new();
    for inst in insts {
        let m = resolve_m(inst, m)?;
        let o = run_model(inst, m, model, opts, b)?;
        *exceeded |= o.status == Status::BudgetExceeded;
        out.push(o.solution.ok_or(Error::Empty("incumbent"))?);
    }
    Ok(out)
}

fn parse_range(s: &str) -> Result<(f64, f64)> {
    let bad = || Error::InvalidSpec(format!("range must be `lo,hi`, got {s:?}"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let lo: f64 = a.trim().parse().map_err(|_| bad())?;
    let hi: f64 = b.trim().parse().map_err(|_| bad())?;
    if lo >= hi || lo.is_nan() || hi.is_nan() {
        return Err(bad());
    }
    Ok((lo, hi))
}
