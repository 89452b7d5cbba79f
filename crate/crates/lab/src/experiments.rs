//! Seeded Monte Carlo trials, parallel sweeps and the reports built on them.

use std::time::Instant;

use arrhenius_core::bounds::{self, BoundEvaluation, MomentReport};
use arrhenius_core::dynamics::{self, build_rates, SolverOptions};
use arrhenius_core::graph::Graph;
use arrhenius_core::landscape::{sample_iid, sample_rem, sample_separable};
use arrhenius_core::seed::{derive_seed, stable_hash};
use arrhenius_core::stats::{self, CompensatedSum};
use arrhenius_core::trajectory::{self, Trajectory};
use arrhenius_core::{Landscape, StateProfile, StationaryResult};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{ConfigError, GraphSpec, GridPoint, Mode, SolverChoice, SweepConfig};

/// Solver label for trials that failed before a solve.
pub const ERROR_SOLVER: &str = "error";
/// Solver label for degenerate draws, which are not solved.
pub const SKIPPED_SOLVER: &str = "skipped";

/// One Monte Carlo trial. Wall time is kept out of the CSV so that output
/// bytes depend only on the configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialRecord {
    pub graph: String,
    pub n: usize,
    pub degree: Option<usize>,
    pub mode: Mode,
    pub sigma_w: f64,
    pub sigma_b: f64,
    pub sigma_f: f64,
    pub lambda: Option<f64>,
    pub trial: u64,
    pub seed: u64,
    pub rho: Option<f64>,
    pub rho_hat: Option<f64>,
    pub r: Option<f64>,
    pub var_w: Option<f64>,
    pub var_a: Option<f64>,
    pub solver: String,
    pub degenerate: bool,
    pub error: Option<String>,
    pub wall_time_s: f64,
}

impl TrialRecord {
    pub fn is_valid(&self) -> bool {
        self.error.is_none() && !self.degenerate && self.rho.is_some()
    }
}

/// A trial together with the per-state vectors it was computed from.
#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub record: TrialRecord,
    pub profile: Option<StateProfile>,
    pub stationary: Option<StationaryResult>,
}

/// Samples the point's landscape on `graph`.
pub fn sample_landscape<'g>(
    point: &GridPoint,
    graph: &'g Graph,
    rng: &mut ChaCha8Rng,
) -> arrhenius_core::Result<Landscape<'g>> {
    match point.mode {
        Mode::Iid => sample_iid(graph, point.sigma_w, point.sigma_b, point.sigma_f, rng),
        Mode::Rem => sample_rem(graph, point.lambda.unwrap_or(1.0), point.sigma_w, rng),
        Mode::Separable => {
            let spec = point.separable.expect("separable point without a spec");
            sample_separable(graph, point.sigma_w, spec.into(), rng)
        }
    }
}

/// Closed form for reversible chains, otherwise the chosen numerical solver.
pub fn solve(landscape: &Landscape<'_>, solver: SolverChoice) -> arrhenius_core::Result<StationaryResult> {
    if landscape.is_reversible() {
        return dynamics::stationary_reversible(landscape);
    }
    let rm = build_rates(landscape);
    match solver {
        SolverChoice::Auto => dynamics::stationary_general(&rm),
        SolverChoice::Dense => dynamics::stationary_dense(&rm),
        SolverChoice::Power => dynamics::stationary_power(&rm, &SolverOptions::default()),
    }
}

/// Runs one trial with seed `derive_seed(master_seed, point_id, trial)`.
///
/// The graph (for random families) and then the landscape are drawn from a
/// single ChaCha8 stream keyed by that seed.
pub fn run_trial(point: &GridPoint, trial: u64, master_seed: u64, solver: SolverChoice) -> TrialOutcome {
    let seed = derive_seed(master_seed, point.point_id(), trial);
    let start = Instant::now();
    let mut record = TrialRecord {
        graph: point.graph.to_string(),
        n: point.graph.n(),
        degree: None,
        mode: point.mode,
        sigma_w: point.sigma_w,
        sigma_b: point.sigma_b,
        sigma_f: point.sigma_f,
        lambda: point.lambda,
        trial,
        seed,
        rho: None,
        rho_hat: None,
        r: None,
        var_w: None,
        var_a: None,
        solver: ERROR_SOLVER.to_string(),
        degenerate: false,
        error: None,
        wall_time_s: 0.0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut profile = None;
    let mut stationary = None;
    let result = (|| -> arrhenius_core::Result<()> {
        let graph = point.graph.build(&mut rng)?;
        record.degree = graph.regular_degree();
        let landscape = sample_landscape(point, &graph, &mut rng)?.with_seed(seed);
        if !landscape.exit_rate_degeneracy_check() {
            record.degenerate = true;
            record.solver = SKIPPED_SOLVER.to_string();
            record.var_w = Some(stats::population_variance(landscape.wells()));
            record.var_a = Some(stats::population_variance(&dynamics::barrier_functional(&landscape)));
            return Ok(());
        }
        let st = solve(&landscape, solver)?;
        let rm = build_rates(&landscape);
        let p = StateProfile::new(&landscape, &rm, &st);
        let report = p.rho_report();
        record.solver = st.method.as_str().to_string();
        record.rho = report.rho;
        record.rho_hat = report.rho_hat;
        record.r = report.r;
        record.var_w = Some(report.var_w);
        record.var_a = Some(report.var_a);
        record.degenerate = report.degenerate;
        profile = Some(p);
        stationary = Some(st);
        Ok(())
    })();
    if let Err(e) = result {
        record.error = Some(e.to_string());
        record.solver = ERROR_SOLVER.to_string();
    }
    record.wall_time_s = start.elapsed().as_secs_f64();
    TrialOutcome { record, profile, stationary }
}

/// Per-point summary of ρ over valid trials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointAggregate {
    pub label: String,
    pub graph: String,
    pub n: usize,
    pub degree: Option<usize>,
    pub mode: Mode,
    pub sigma_w: f64,
    pub sigma_b: f64,
    pub sigma_f: f64,
    pub lambda: Option<f64>,
    pub trials: usize,
    pub valid_trials: usize,
    pub degenerate_trials: usize,
    pub errored_trials: usize,
    pub mean_rho: Option<f64>,
    /// Sample standard deviation (divisor `valid − 1`).
    pub sd_rho: Option<f64>,
    pub se_rho: Option<f64>,
}

/// Mean, sample SD and standard error; SD and SE need two values.
pub fn summarize(values: &[f64]) -> (Option<f64>, Option<f64>, Option<f64>) {
    if values.is_empty() {
        return (None, None, None);
    }
    let mean = stats::mean(values);
    if values.len() < 2 {
        return (Some(mean), None, None);
    }
    let k = values.len() as f64;
    let ss: CompensatedSum = values.iter().map(|v| (v - mean) * (v - mean)).collect();
    let sd = (ss.value() / (k - 1.0)).sqrt();
    (Some(mean), Some(sd), Some(sd / k.sqrt()))
}

pub fn aggregate(point: &GridPoint, records: &[TrialRecord]) -> PointAggregate {
    let rhos: Vec<f64> = records.iter().filter(|r| r.is_valid()).filter_map(|r| r.rho).collect();
    let errored = records.iter().filter(|r| r.error.is_some()).count();
    let degenerate = records.iter().filter(|r| r.error.is_none() && !r.is_valid()).count();
    let (mean_rho, sd_rho, se_rho) = summarize(&rhos);
    PointAggregate {
        label: point.label(),
        graph: point.graph.to_string(),
        n: point.graph.n(),
        degree: records.iter().find_map(|r| r.degree),
        mode: point.mode,
        sigma_w: point.sigma_w,
        sigma_b: point.sigma_b,
        sigma_f: point.sigma_f,
        lambda: point.lambda,
        trials: records.len(),
        valid_trials: rhos.len(),
        degenerate_trials: degenerate,
        errored_trials: errored,
        mean_rho,
        sd_rho,
        se_rho,
    }
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub points: Vec<GridPoint>,
    /// Point-major, trial-minor order.
    pub records: Vec<TrialRecord>,
    pub aggregates: Vec<PointAggregate>,
}

impl SweepResult {
    pub fn records_for(&self, point_index: usize) -> &[TrialRecord] {
        let t = self.records.len() / self.points.len().max(1);
        &self.records[point_index * t..(point_index + 1) * t]
    }

    /// Whether some point has no valid trial.
    pub fn has_empty_point(&self) -> bool {
        self.aggregates.iter().any(|a| a.valid_trials == 0)
    }
}

/// Runs every (point, trial) pair on a pool of `cfg.workers` threads.
/// Results come back in grid order regardless of scheduling.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepResult, ConfigError> {
    cfg.validate()?;
    let points = cfg.grid();
    let pairs: Vec<(usize, u64)> =
        (0..points.len()).flat_map(|p| (0..cfg.trials as u64).map(move |t| (p, t))).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| ConfigError::Invalid(format!("cannot start worker pool: {e}")))?;
    let records: Vec<TrialRecord> = pool.install(|| {
        pairs
            .par_iter()
            .map(|&(p, t)| run_trial(&points[p], t, cfg.master_seed, cfg.solver).record)
            .collect()
    });
    let aggregates = points
        .iter()
        .enumerate()
        .map(|(i, p)| aggregate(p, &records[i * cfg.trials..(i + 1) * cfg.trials]))
        .collect();
    Ok(SweepResult { points, records, aggregates })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundStatus {
    Pass,
    Fail,
    /// The bound is at most −1 and says nothing.
    NotBinding,
    /// Forced chains, or points too small for the bound.
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundEntry {
    pub label: String,
    pub n: usize,
    pub mean_rho: Option<f64>,
    pub se_rho: Option<f64>,
    pub valid_trials: usize,
    pub c_r: Option<f64>,
    pub bound: Option<f64>,
    /// Large-n bound, for reference only.
    pub asymptotic_bound: Option<f64>,
    pub status: BoundStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub entries: Vec<BoundEntry>,
    pub all_pass: bool,
}

/// Finite-n bound for a point, if one applies.
pub fn bound_for(point: &GridPoint) -> Option<BoundEvaluation> {
    let n = point.graph.n();
    match point.mode {
        Mode::Iid if point.sigma_f == 0.0 => bounds::theorem1_bound(n, point.sigma_b, point.sigma_w).ok(),
        Mode::Iid => None,
        Mode::Rem => bounds::theorem2_bound(n, point.lambda?).ok(),
        Mode::Separable => {
            let c = point.separable?;
            if c.symmetrize {
                return None;
            }
            bounds::theorem1_bound(n, c.sigma, point.sigma_w).ok()
        }
    }
}

/// Compares each point's mean ρ with its bound: pass iff
/// `mean ≥ bound − 3·SE`.
pub fn verify_bounds(result: &SweepResult) -> BoundsReport {
    let entries: Vec<BoundEntry> = result
        .points
        .iter()
        .zip(&result.aggregates)
        .map(|(p, a)| {
            let eval = bound_for(p);
            let status = match (&eval, a.mean_rho) {
                (None, _) => BoundStatus::NotApplicable,
                (Some(b), _) if !b.is_binding() => BoundStatus::NotBinding,
                (Some(_), None) => BoundStatus::Fail,
                (Some(b), Some(m)) => {
                    let se = a.se_rho.unwrap_or(0.0);
                    if m >= b.rho_lower_bound - bounds::STD_ERRORS * se {
                        BoundStatus::Pass
                    } else {
                        BoundStatus::Fail
                    }
                }
            };
            BoundEntry {
                label: a.label.clone(),
                n: a.n,
                mean_rho: a.mean_rho,
                se_rho: a.se_rho,
                valid_trials: a.valid_trials,
                c_r: eval.map(|b| b.c_r),
                bound: eval.map(|b| b.rho_lower_bound),
                asymptotic_bound: eval.map(|b| b.asymptotic_bound()),
                status,
            }
        })
        .collect();
    let all_pass = entries.iter().all(|e| e.status != BoundStatus::Fail);
    BoundsReport { entries, all_pass }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Increasing,
    Decreasing,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendReport {
    pub means: Vec<f64>,
    /// Indices `i` where the pair `(i, i+1)` goes the wrong way.
    pub inversions: Vec<usize>,
    pub pass: bool,
}

/// Monotone trend in the means, up to one adjacent inversion no larger than
/// the pooled SD `sqrt((sd_i² + sd_{i+1}²)/2)`.
pub fn trend_check(means: &[f64], sds: &[f64], direction: Direction) -> TrendReport {
    assert_eq!(means.len(), sds.len(), "means and sds must align");
    let mut inversions = Vec::new();
    let mut within = true;
    for i in 0..means.len().saturating_sub(1) {
        let step = means[i + 1] - means[i];
        let wrong = match direction {
            Direction::Increasing => -step,
            Direction::Decreasing => step,
        };
        if wrong > 0.0 {
            inversions.push(i);
            let pooled = ((sds[i] * sds[i] + sds[i + 1] * sds[i + 1]) / 2.0).sqrt();
            within &= wrong <= pooled;
        }
    }
    let pass = inversions.len() <= 1 && within;
    TrendReport { means: means.to_vec(), inversions, pass }
}

/// Trend over consecutive aggregates; points without a mean fail it.
pub fn aggregate_trend(aggs: &[PointAggregate], direction: Direction) -> TrendReport {
    if aggs.iter().any(|a| a.mean_rho.is_none()) {
        let means = aggs.iter().map(|a| a.mean_rho.unwrap_or(f64::NAN)).collect();
        return TrendReport { means, inversions: Vec::new(), pass: false };
    }
    let means: Vec<f64> = aggs.iter().map(|a| a.mean_rho.unwrap()).collect();
    let sds: Vec<f64> = aggs.iter().map(|a| a.sd_rho.unwrap_or(0.0)).collect();
    trend_check(&means, &sds, direction)
}

/// Spread `max − min` of the aggregate means.
pub fn mean_spread(aggs: &[PointAggregate]) -> Option<f64> {
    let means: Option<Vec<f64>> = aggs.iter().map(|a| a.mean_rho).collect();
    let means = means?;
    let hi = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = means.iter().copied().fold(f64::INFINITY, f64::min);
    Some(hi - lo)
}

/// Monte Carlo moment checks on i.i.d. landscapes, drawn sequentially from
/// one ChaCha8 stream.
pub fn run_moments(
    spec: &GraphSpec,
    sigma_w: f64,
    sigma_b: f64,
    trials: usize,
    master_seed: u64,
) -> arrhenius_core::Result<MomentReport> {
    let label = format!("moments;graph={spec};sigma_w={sigma_w};sigma_b={sigma_b}");
    let seed = derive_seed(master_seed, stable_hash(label.as_bytes()), 0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let graph = spec.build(&mut rng)?;
    bounds::empirical_moment_suite(&graph, sigma_w, sigma_b, trials, &mut rng)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryRun {
    pub seed: u64,
    pub jumps: usize,
    pub reported_states: usize,
    pub median_rel_error_q: f64,
    pub l1_occupation: f64,
    pub rho_estimated: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryReport {
    pub graph: String,
    pub n: usize,
    pub sigma_w: f64,
    pub sigma_b: f64,
    pub sigma_f: f64,
    pub landscape_seed: u64,
    pub rho_exact: Option<f64>,
    pub runs: Vec<TrajectoryRun>,
    pub mean_l1_occupation: f64,
    pub max_median_rel_error_q: f64,
    pub max_rho_gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryConfig {
    pub graph: GraphSpec,
    pub sigma_w: f64,
    pub sigma_b: f64,
    pub sigma_f: f64,
    pub jumps: usize,
    pub runs: usize,
    pub min_visits: usize,
    pub master_seed: u64,
}

impl TrajectoryConfig {
    fn point(&self) -> GridPoint {
        GridPoint {
            graph: self.graph.clone(),
            mode: Mode::Iid,
            sigma_w: self.sigma_w,
            sigma_b: self.sigma_b,
            sigma_f: self.sigma_f,
            lambda: None,
            separable: None,
        }
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        0.5 * (v[k / 2 - 1] + v[k / 2])
    }
}

/// Compares trajectory estimates against the exact chain.
pub fn score_trajectory(
    traj: &Trajectory,
    log_q: &[f64],
    pi: &[f64],
    min_visits: usize,
    seed: u64,
) -> TrajectoryRun {
    let q_hat = trajectory::estimate_exit_rates(traj, min_visits);
    let pi_hat = trajectory::estimate_occupation(traj, min_visits);
    let rel: Vec<f64> = q_hat
        .iter()
        .zip(log_q)
        .filter_map(|(q, lq)| q.map(|q| (q / lq.exp() - 1.0).abs()))
        .collect();
    let (_, time) = traj.tallies();
    let l1: CompensatedSum = time.iter().zip(pi).map(|(t, p)| (t / traj.total_time - p).abs()).collect();
    let mut nlp = Vec::new();
    let mut lq = Vec::new();
    for (q, p) in q_hat.iter().zip(&pi_hat) {
        if let (Some(q), Some(p)) = (q, p) {
            nlp.push(-p.ln());
            lq.push(q.ln());
        }
    }
    TrajectoryRun {
        seed,
        jumps: traj.len(),
        reported_states: rel.len(),
        median_rel_error_q: median(rel),
        l1_occupation: l1.value(),
        rho_estimated: stats::pearson(&nlp, &lq).ok(),
    }
}

/// One landscape, `runs` independent trajectories from state 0 (in parallel).
pub fn run_trajectory_experiment(cfg: &TrajectoryConfig) -> arrhenius_core::Result<TrajectoryReport> {
    if cfg.runs == 0 {
        return Err(arrhenius_core::Error::InvalidArgument("runs must be positive".into()));
    }
    let point = cfg.point();
    let landscape_seed = derive_seed(cfg.master_seed, point.point_id(), 0);
    let mut rng = ChaCha8Rng::seed_from_u64(landscape_seed);
    let graph = cfg.graph.build(&mut rng)?;
    let landscape = sample_landscape(&point, &graph, &mut rng)?.with_seed(landscape_seed);
    let st = solve(&landscape, SolverChoice::Auto)?;
    let rm = build_rates(&landscape);
    let profile = StateProfile::new(&landscape, &rm, &st);
    let rho_exact = profile.rho_report().rho;
    let pi = st.pi();
    let runs: Vec<TrajectoryRun> = (1..=cfg.runs as u64)
        .into_par_iter()
        .map(|k| {
            let seed = derive_seed(cfg.master_seed, point.point_id(), k);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let traj = trajectory::simulate(&rm, 0, cfg.jumps, &mut rng)?;
            Ok(score_trajectory(&traj, &profile.log_q, &pi, cfg.min_visits, seed))
        })
        .collect::<arrhenius_core::Result<_>>()?;
    let mean_l1 = stats::mean(&runs.iter().map(|r| r.l1_occupation).collect::<Vec<_>>());
    let max_q = runs.iter().map(|r| r.median_rel_error_q).fold(0.0, f64::max);
    let max_rho_gap = match rho_exact {
        Some(exact) => runs
            .iter()
            .map(|r| r.rho_estimated.map(|e| (e - exact).abs()))
            .collect::<Option<Vec<_>>>()
            .map(|g| g.into_iter().fold(0.0, f64::max)),
        None => None,
    };
    Ok(TrajectoryReport {
        graph: cfg.graph.to_string(),
        n: graph.n(),
        sigma_w: cfg.sigma_w,
        sigma_b: cfg.sigma_b,
        sigma_f: cfg.sigma_f,
        landscape_seed,
        rho_exact,
        runs,
        mean_l1_occupation: mean_l1,
        max_median_rel_error_q: max_q,
        max_rho_gap,
    })
}

/// The first run's trajectory, regenerated from its seed.
pub fn dump_trajectory(cfg: &TrajectoryConfig) -> arrhenius_core::Result<Trajectory> {
    let point = cfg.point();
    let landscape_seed = derive_seed(cfg.master_seed, point.point_id(), 0);
    let mut rng = ChaCha8Rng::seed_from_u64(landscape_seed);
    let graph = cfg.graph.build(&mut rng)?;
    let landscape = sample_landscape(&point, &graph, &mut rng)?;
    let rm = build_rates(&landscape);
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.master_seed, point.point_id(), 1));
    trajectory::simulate(&rm, 0, cfg.jumps, &mut rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn point(graph: &str, sb: f64, sf: f64) -> GridPoint {
        GridPoint {
            graph: graph.parse().unwrap(),
            mode: Mode::Iid,
            sigma_w: 1.0,
            sigma_b: sb,
            sigma_f: sf,
            lambda: None,
            separable: None,
        }
    }

    #[test]
    fn barrier_free_trial_is_exact() {
        let out = run_trial(&point("hypercube:10", 0.0, 0.0), 0, 7, SolverChoice::Auto);
        assert_eq!(out.record.rho, Some(1.0));
        assert_eq!(out.record.r, Some(0.0));
        assert_eq!(out.record.solver, "closed_form");
    }

    #[test]
    fn trial_is_deterministic() {
        let p = point("hypercube:6", 1.0, 1.0);
        let mut a = run_trial(&p, 3, 11, SolverChoice::Auto).record;
        let mut b = run_trial(&p, 3, 11, SolverChoice::Auto).record;
        a.wall_time_s = 0.0;
        b.wall_time_s = 0.0;
        assert_eq!(a, b);
        assert_eq!(a.solver, "linear_solve");
        assert!(a.rho_hat.is_none() && a.r.is_none());
    }

    #[test]
    fn summarize_uses_sample_sd() {
        let (m, sd, se) = summarize(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, Some(2.5));
        // squared deviations sum to 5, so sd = sqrt(5/3).
        assert!((sd.unwrap() - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((se.unwrap() - (5.0f64 / 3.0).sqrt() / 2.0).abs() < 1e-15);
        assert_eq!(summarize(&[2.0]), (Some(2.0), None, None));
    }

    #[test]
    fn trend_tolerance() {
        let sds = [0.1; 4];
        assert!(trend_check(&[0.9, 0.8, 0.7, 0.6], &sds, Direction::Decreasing).pass);
        assert!(trend_check(&[0.9, 0.8, 0.85, 0.6], &sds, Direction::Decreasing).pass);
        assert!(!trend_check(&[0.9, 0.8, 1.0, 0.6], &sds, Direction::Decreasing).pass);
        assert!(!trend_check(&[0.9, 0.95, 0.85, 0.9], &sds, Direction::Decreasing).pass);
        assert!(trend_check(&[0.6, 0.7, 0.8], &[0.0; 3], Direction::Increasing).pass);
    }

    #[test]
    fn vacuous_and_forced_points() {
        assert!(!bound_for(&point("hypercube:10", 2.0, 0.0)).unwrap().is_binding());
        assert!(bound_for(&point("hypercube:10", 0.5, 1.0)).is_none());
        let b = bound_for(&point("hypercube:10", 0.1, 0.0)).unwrap();
        assert!((b.rho_lower_bound - 0.867644).abs() < 1e-5);
    }
}
