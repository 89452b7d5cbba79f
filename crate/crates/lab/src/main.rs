//! `arrhenius` command line.
//!
//! Exit codes: 0 success, 1 configuration error, 2 a bound or moment check
//! failed, 3 runtime error.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use arrhenius_core::trajectory::DEFAULT_MIN_VISITS;
use arrhenius_lab::config::{ConfigError, GraphSpec, GridPoint, Mode, SeparableConfig, SolverChoice, SweepConfig};
use arrhenius_lab::experiments::{self, TrajectoryConfig};
use arrhenius_lab::io;
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

#[derive(Parser)]
#[command(name = "arrhenius", version, about = "Local-global correlation experiments for Arrhenius-like Markov chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build and validate a graph, optionally exporting its edge list.
    Graph(GraphArgs),
    /// Run a single trial and optionally dump its scatter data.
    Trial(TrialArgs),
    /// Run a parameter sweep and write per-trial and aggregate output.
    Sweep(SweepArgs),
    /// Run a sweep and compare mean correlations with the finite-n bounds.
    VerifyBounds(VerifyArgs),
    /// Monte Carlo checks of the moment inequalities behind the bounds.
    Moments(MomentArgs),
    /// Simulate trajectories and compare local and global estimators.
    Trajectory(TrajectoryArgs),
}

#[derive(Args)]
struct GraphArgs {
    /// Graph spec, e.g. hypercube:10 or random-regular:1024:8.
    #[arg(long)]
    graph: GraphSpec,
    /// Seed for random graph families.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the edge list here.
    #[arg(long)]
    edges: Option<PathBuf>,
}

#[derive(Args)]
struct PointArgs {
    #[arg(long)]
    graph: GraphSpec,
    #[arg(long, value_enum, default_value_t = Mode::Iid)]
    mode: Mode,
    #[arg(long, default_value_t = 1.0)]
    sigma_w: f64,
    #[arg(long, default_value_t = 0.0)]
    sigma_b: f64,
    #[arg(long, default_value_t = 0.0)]
    sigma_f: f64,
    #[arg(long)]
    lambda: Option<f64>,
    /// Separable residual scale (separable mode).
    #[arg(long)]
    sep_sigma: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    sep_slope: f64,
    #[arg(long, default_value_t = 0.0)]
    sep_intercept: f64,
    #[arg(long)]
    sep_symmetrize: bool,
}

#[derive(Args)]
struct TrialArgs {
    #[command(flatten)]
    point: PointArgs,
    #[arg(long, default_value_t = 0)]
    trial: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = SolverChoice::Auto)]
    solver: SolverChoice,
    /// Per-state CSV; a JSON sidecar is written next to it.
    #[arg(long)]
    scatter: Option<PathBuf>,
    /// Landscape JSON.
    #[arg(long)]
    landscape: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// JSON config file; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    graphs: Option<Vec<GraphSpec>>,
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    #[arg(long, value_delimiter = ',')]
    sigma_w: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    sigma_b: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    sigma_f: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<f64>>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    solver: Option<SolverChoice>,
    /// Worker threads (0 = all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Per-trial CSV.
    #[arg(long)]
    trials_csv: Option<PathBuf>,
    /// Aggregates JSON.
    #[arg(long)]
    aggregates: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    sweep: SweepArgs,
    /// Bound report JSON.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct MomentArgs {
    #[arg(long)]
    graph: GraphSpec,
    #[arg(long, default_value_t = 1.0)]
    sigma_w: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma_b: f64,
    #[arg(long, default_value_t = 10_000)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TrajectoryArgs {
    #[arg(long)]
    graph: GraphSpec,
    #[arg(long, default_value_t = 0.5)]
    sigma_w: f64,
    #[arg(long, default_value_t = 0.5)]
    sigma_b: f64,
    #[arg(long, default_value_t = 0.0)]
    sigma_f: f64,
    #[arg(long, default_value_t = 1_000_000)]
    jumps: usize,
    #[arg(long, default_value_t = 5)]
    runs: usize,
    #[arg(long, default_value_t = DEFAULT_MIN_VISITS)]
    min_visits: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Dump the first run's trajectory as CSV.
    #[arg(long)]
    dump: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Config(anyhow::Error),
    Check,
    Runtime(anyhow::Error),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.into())
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

type Outcome = Result<(), Failure>;

fn config_err(e: arrhenius_core::Error) -> Failure {
    Failure::Config(e.into())
}

fn print_json(v: &impl serde::Serialize) -> Outcome {
    io::write_json(v, std::io::stdout().lock())?;
    Ok(())
}

fn graph_cmd(a: GraphArgs) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let g = a.graph.build(&mut rng).map_err(config_err)?;
    let d = g.validate();
    if let Some(path) = &a.edges {
        io::write_edge_list(&g, io::create(path)?).with_context(|| format!("writing {}", path.display()))?;
    }
    print_json(&json!({
        "graph": a.graph.to_string(),
        "n": d.n,
        "edges": d.num_edges,
        "degree": d.degree,
        "simple": d.simple,
        "regular": d.regular,
        "connected": d.connected,
        "components": d.components,
    }))
}

fn grid_point(p: &PointArgs) -> Result<GridPoint, Failure> {
    let separable = match (p.mode, p.sep_sigma) {
        (Mode::Separable, None) => {
            return Err(Failure::Config(anyhow::anyhow!("separable mode needs --sep-sigma")));
        }
        (Mode::Separable, Some(sigma)) => Some(SeparableConfig {
            slope: p.sep_slope,
            intercept: p.sep_intercept,
            sigma,
            symmetrize: p.sep_symmetrize,
        }),
        _ => None,
    };
    let cfg = SweepConfig {
        graphs: vec![p.graph.clone()],
        mode: p.mode,
        sigma_w: vec![p.sigma_w],
        sigma_b: vec![p.sigma_b],
        sigma_f: vec![p.sigma_f],
        lambda: p.lambda.into_iter().collect(),
        separable,
        trials: 1,
        master_seed: 0,
        solver: SolverChoice::Auto,
        workers: 1,
        output: Default::default(),
    };
    cfg.validate()?;
    Ok(cfg.grid().remove(0))
}

fn trial_cmd(a: TrialArgs) -> Outcome {
    let point = grid_point(&a.point)?;
    let out = experiments::run_trial(&point, a.trial, a.seed, a.solver);
    if let Some(e) = &out.record.error {
        return Err(Failure::Runtime(anyhow::anyhow!("trial failed: {e}")));
    }
    let sidecar = json!({ "point": point.label(), "record": out.record });
    if let (Some(path), Some(profile)) = (&a.scatter, &out.profile) {
        io::emit_scatter(profile, &sidecar, path).with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = &a.landscape {
        // Re-draw the landscape from the trial's seed.
        let mut rng = ChaCha8Rng::seed_from_u64(out.record.seed);
        let g = point.graph.build(&mut rng).map_err(config_err)?;
        let l = experiments::sample_landscape(&point, &g, &mut rng).map_err(config_err)?.with_seed(out.record.seed);
        io::write_json_file(&io::landscape_json(&l), path).with_context(|| format!("writing {}", path.display()))?;
    }
    print_json(&sidecar)
}

fn load_sweep(a: &SweepArgs) -> Result<SweepConfig, Failure> {
    let mut cfg = match &a.config {
        Some(path) => SweepConfig::from_path(path)?,
        None => SweepConfig {
            graphs: Vec::new(),
            mode: Mode::Iid,
            sigma_w: vec![1.0],
            sigma_b: vec![0.0],
            sigma_f: vec![0.0],
            lambda: Vec::new(),
            separable: None,
            trials: 25,
            master_seed: 0,
            solver: SolverChoice::Auto,
            workers: 0,
            output: Default::default(),
        },
    };
    macro_rules! set {
        ($field:ident, $value:expr) => {
            if let Some(v) = $value.clone() {
                cfg.$field = v;
            }
        };
    }
    set!(graphs, a.graphs);
    set!(mode, a.mode);
    set!(sigma_w, a.sigma_w);
    set!(sigma_b, a.sigma_b);
    set!(sigma_f, a.sigma_f);
    set!(lambda, a.lambda);
    set!(trials, a.trials);
    set!(master_seed, a.seed);
    set!(solver, a.solver);
    set!(workers, a.workers);
    if a.trials_csv.is_some() {
        cfg.output.trials_csv = a.trials_csv.clone();
    }
    if a.aggregates.is_some() {
        cfg.output.aggregates_json = a.aggregates.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn sweep_and_write(cfg: &SweepConfig) -> Result<arrhenius_lab::SweepResult, Failure> {
    let result = experiments::run_sweep(cfg)?;
    if let Some(path) = &cfg.output.trials_csv {
        io::write_trials_csv(&result.records, io::create(path)?).with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = &cfg.output.aggregates_json {
        io::write_json_file(&result.aggregates, path).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(result)
}

fn sweep_cmd(a: SweepArgs) -> Outcome {
    let cfg = load_sweep(&a)?;
    let result = sweep_and_write(&cfg)?;
    if cfg.output.trials_csv.is_none() {
        io::write_trials_csv(&result.records, std::io::stdout().lock())?;
    } else {
        io::write_aggregates_csv(&result.aggregates, std::io::stdout().lock())?;
    }
    if result.has_empty_point() {
        return Err(Failure::Runtime(anyhow::anyhow!("some grid point has no valid trials")));
    }
    Ok(())
}

fn verify_cmd(a: VerifyArgs) -> Outcome {
    let mut cfg = load_sweep(&a.sweep)?;
    if a.report.is_some() {
        cfg.output.bounds_json = a.report.clone();
    }
    let result = sweep_and_write(&cfg)?;
    let report = experiments::verify_bounds(&result);
    if let Some(path) = &cfg.output.bounds_json {
        io::write_json_file(&report, path).with_context(|| format!("writing {}", path.display()))?;
    }
    print_json(&report)?;
    if report.all_pass {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn moments_cmd(a: MomentArgs) -> Outcome {
    let rep = experiments::run_moments(&a.graph, a.sigma_w, a.sigma_b, a.trials, a.seed).map_err(config_err)?;
    let checks: Vec<_> = rep
        .checks
        .iter()
        .map(|c| json!({ "name": c.name, "estimate": c.estimate, "std_error": c.std_error, "bound": c.bound, "pass": c.pass }))
        .collect();
    let out = json!({
        "graph": a.graph.to_string(),
        "n": rep.n,
        "sigma_w": rep.sigma_w,
        "sigma_b": rep.sigma_b,
        "trials": rep.trials,
        "checks": checks,
        "all_pass": rep.all_pass(),
    });
    if let Some(path) = &a.out {
        io::write_json_file(&out, path).with_context(|| format!("writing {}", path.display()))?;
    }
    print_json(&out)?;
    if rep.all_pass() {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn trajectory_cmd(a: TrajectoryArgs) -> Outcome {
    let cfg = TrajectoryConfig {
        graph: a.graph.clone(),
        sigma_w: a.sigma_w,
        sigma_b: a.sigma_b,
        sigma_f: a.sigma_f,
        jumps: a.jumps,
        runs: a.runs,
        min_visits: a.min_visits,
        master_seed: a.seed,
    };
    let rep = experiments::run_trajectory_experiment(&cfg).map_err(config_err)?;
    if let Some(path) = &a.dump {
        let traj = experiments::dump_trajectory(&cfg).map_err(|e| Failure::Runtime(e.into()))?;
        io::write_trajectory_csv(&traj, io::create(path)?).with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = &a.out {
        io::write_json_file(&rep, path).with_context(|| format!("writing {}", path.display()))?;
    }
    print_json(&rep)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Graph(a) => graph_cmd(a),
        Command::Trial(a) => trial_cmd(a),
        Command::Sweep(a) => sweep_cmd(a),
        Command::VerifyBounds(a) => verify_cmd(a),
        Command::Moments(a) => moments_cmd(a),
        Command::Trajectory(a) => trajectory_cmd(a),
    };
    let _ = std::io::stdout().flush();
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("config error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Check) => {
            eprintln!("check failed");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
