//! Rate matrices and stationary distributions.
//!
//! Rates live in log space: `log Q_ij = W_i − B_ij + F_ij` per slot. Linear
//! rates are only formed inside the general solvers, after a global shift of
//! all log rates (which leaves `π` unchanged).

mod linalg;

use alloc::vec;
use alloc::vec::Vec;

// Inherent float methods exist only when std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::landscape::Landscape;
use crate::stats::{self, lse_iter, CompensatedSum, RhoReport};

/// Largest `n` solved densely by [`stationary_general`].
pub const DENSE_THRESHOLD: usize = 2048;

#[derive(Debug, Clone, PartialEq)]
pub struct RateMatrix<'g> {
    graph: &'g Graph,
    log_rates: Vec<f64>,
}

impl<'g> RateMatrix<'g> {
    /// Wraps per-slot log rates (slot order of `graph`).
    pub fn from_log_rates(graph: &'g Graph, log_rates: Vec<f64>) -> Result<Self> {
        if log_rates.len() != graph.num_slots() {
            return Err(invalid("one log rate per oriented edge required"));
        }
        if !log_rates.iter().all(|v| v.is_finite()) {
            return Err(invalid("log rates must be finite"));
        }
        Ok(Self { graph, log_rates })
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn log_rates(&self) -> &[f64] {
        &self.log_rates
    }

    pub fn log_rate(&self, slot: usize) -> f64 {
        self.log_rates[slot]
    }

    /// `log Q_ij`, or `None` off the graph.
    pub fn log_rate_between(&self, i: usize, j: usize) -> Option<f64> {
        let k = self.graph.neighbors(i).binary_search(&(j as u32)).ok()?;
        Some(self.log_rates[self.graph.slots(i).start + k])
    }

    /// `log q_i` for every state, by log-sum-exp over outgoing slots.
    pub fn exit_log_rates(&self) -> Vec<f64> {
        (0..self.n())
            .map(|i| lse_iter(self.log_rates[self.graph.slots(i)].iter().copied()))
            .collect()
    }
}

pub fn build_rates<'g>(landscape: &Landscape<'g>) -> RateMatrix<'g> {
    let graph = landscape.graph();
    let wells = landscape.wells();
    let mut log_rates = Vec::with_capacity(graph.num_slots());
    for (i, &w) in wells.iter().enumerate() {
        for s in graph.slots(i) {
            log_rates.push(w - landscape.barrier(s) + landscape.force(s));
        }
    }
    RateMatrix { graph, log_rates }
}

pub fn exit_log_rates(rm: &RateMatrix<'_>) -> Vec<f64> {
    rm.exit_log_rates()
}

/// `A_i = log Σ_{j∼i} exp(−B_ij)`.
pub fn barrier_functional(landscape: &Landscape<'_>) -> Vec<f64> {
    let graph = landscape.graph();
    (0..graph.n())
        .map(|i| lse_iter(graph.slots(i).map(|s| -landscape.barrier(s))))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    ClosedForm,
    LinearSolve,
    PowerIteration,
}

impl SolveMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveMethod::ClosedForm => "closed_form",
            SolveMethod::LinearSolve => "linear_solve",
            SolveMethod::PowerIteration => "power_iteration",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationaryResult {
    /// `−log π_i` with `Σ π_i = 1`.
    pub neg_log_pi: Vec<f64>,
    pub method: SolveMethod,
    /// `max_j |(πQ)_j|` in the unshifted rate scale.
    pub residual: f64,
    /// Power iterations used, when applicable.
    pub iterations: Option<usize>,
}

impl StationaryResult {
    pub fn pi(&self) -> Vec<f64> {
        self.neg_log_pi.iter().map(|v| (-v).exp()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub dense_threshold: usize,
    /// Stop once the L1 change between iterates falls below this...
    pub power_tolerance: f64,
    /// ...and the projected remaining relative error per state falls below
    /// this.
    pub power_relative_tolerance: f64,
    pub max_iterations: usize,
    /// Uniformization constant as a multiple of `max_i q_i`.
    pub uniformization: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            dense_threshold: DENSE_THRESHOLD,
            power_tolerance: 1e-13,
            power_relative_tolerance: 1e-12,
            max_iterations: 2_000_000,
            uniformization: 1.01,
        }
    }
}

/// Boltzmann closed form `π_i ∝ exp(−W_i)`, normalized in log space.
pub fn stationary_reversible(landscape: &Landscape<'_>) -> Result<StationaryResult> {
    if !landscape.is_reversible() {
        return Err(Error::InvalidState(
            "closed-form stationary distribution needs zero forces and symmetric barriers",
        ));
    }
    let wells = landscape.wells();
    let log_z = lse_iter(wells.iter().map(|w| -w));
    let neg_log_pi: Vec<f64> = wells.iter().map(|w| w + log_z).collect();
    let rm = build_rates(landscape);
    let residual = stationary_residual(&rm, &neg_log_pi);
    Ok(StationaryResult { neg_log_pi, method: SolveMethod::ClosedForm, residual, iterations: None })
}

/// Numerical stationary distribution: dense solve up to
/// [`DENSE_THRESHOLD`] states, uniformized power iteration above.
pub fn stationary_general(rm: &RateMatrix<'_>) -> Result<StationaryResult> {
    stationary_general_with(rm, &SolverOptions::default())
}

pub fn stationary_general_with(rm: &RateMatrix<'_>, opts: &SolverOptions) -> Result<StationaryResult> {
    if rm.n() <= opts.dense_threshold {
        stationary_dense(rm)
    } else {
        stationary_power(rm, opts)
    }
}

fn rate_shift(rm: &RateMatrix<'_>) -> f64 {
    let (lo, hi) = rm
        .log_rates
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    0.5 * (lo + hi)
}

/// Solves `Qᵀ πᵀ = 0` with the last balance equation replaced by `Σ π = 1`.
pub fn stationary_dense(rm: &RateMatrix<'_>) -> Result<StationaryResult> {
    let n = rm.n();
    let graph = rm.graph;
    let shift = rate_shift(rm);
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        let mut out = CompensatedSum::new();
        for s in graph.slots(i) {
            let rate = (rm.log_rates[s] - shift).exp();
            a[graph.slot_target(s) * n + i] = rate;
            out.add(rate);
        }
        a[i * n + i] = -out.value();
    }
    a[(n - 1) * n..].iter_mut().for_each(|v| *v = 1.0);
    let mut b = vec![0.0; n];
    b[n - 1] = 1.0;
    let pi = linalg::solve_refined(&a, n, &b)?;
    finish(rm, pi, SolveMethod::LinearSolve, None)
}

/// Power iteration on `P = I + Q/Λ`, `Λ = uniformization · max_i q_i`.
pub fn stationary_power(rm: &RateMatrix<'_>, opts: &SolverOptions) -> Result<StationaryResult> {
    const WINDOW: usize = 16;
    // Relative changes this small are rounding noise.
    const NOISE_FLOOR: f64 = 1e-14;

    let n = rm.n();
    let graph = rm.graph;
    let shift = rate_shift(rm);
    let lq: Vec<f64> = rm.exit_log_rates().iter().map(|v| v - shift).collect();
    let log_lambda = lq.iter().copied().fold(f64::NEG_INFINITY, f64::max) + opts.uniformization.ln();
    let stay: Vec<f64> = lq.iter().map(|&l| 1.0 - (l - log_lambda).exp()).collect();
    // Incoming probability along slot s of j, i.e. Q_{target(s), j} / Λ.
    let incoming: Vec<f64> = (0..graph.num_slots())
        .map(|s| (rm.log_rates[graph.reverse_slot(s)] - shift - log_lambda).exp())
        .collect();

    let mut pi = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    let mut history = [0.0f64; WINDOW];
    let mut last_l1 = f64::INFINITY;
    for it in 0..opts.max_iterations {
        for j in 0..n {
            let mut acc = pi[j] * stay[j];
            for s in graph.slots(j) {
                acc += pi[graph.slot_target(s)] * incoming[s];
            }
            next[j] = acc;
        }
        let total = stats::sum(&next);
        next.iter_mut().for_each(|v| *v /= total);
        let mut l1 = 0.0;
        let mut rel = 0.0f64;
        for (new, old) in next.iter().zip(&pi) {
            let d = (new - old).abs();
            l1 += d;
            rel = rel.max(d / new);
        }
        core::mem::swap(&mut pi, &mut next);
        last_l1 = l1;
        let prev = history[it % WINDOW];
        history[it % WINDOW] = rel;
        if l1 < opts.power_tolerance {
            let tail = if rel <= NOISE_FLOOR {
                0.0
            } else if it >= WINDOW && prev > 0.0 && rel < prev {
                let theta = (rel / prev).powf(1.0 / WINDOW as f64);
                rel * theta / (1.0 - theta)
            } else {
                f64::INFINITY
            };
            if tail < opts.power_relative_tolerance {
                return finish(rm, pi, SolveMethod::PowerIteration, Some(it + 1));
            }
        }
    }
    Err(Error::NotConverged { iterations: opts.max_iterations, last_change: last_l1 })
}

fn finish(
    rm: &RateMatrix<'_>,
    mut pi: Vec<f64>,
    method: SolveMethod,
    iterations: Option<usize>,
) -> Result<StationaryResult> {
    if let Some(i) = pi.iter().position(|&p| p.is_nan() || p <= 0.0) {
        return Err(Error::NonPositive(i));
    }
    let total = stats::sum(&pi);
    pi.iter_mut().for_each(|p| *p /= total);
    let neg_log_pi: Vec<f64> = pi.iter().map(|p| -p.ln()).collect();
    let residual = stationary_residual(rm, &neg_log_pi);
    Ok(StationaryResult { neg_log_pi, method, residual, iterations })
}

/// `max_j |Σ_i π_i Q_ij − π_j q_j|`, fluxes formed in log space.
pub fn stationary_residual(rm: &RateMatrix<'_>, neg_log_pi: &[f64]) -> f64 {
    let graph = rm.graph;
    let lq = rm.exit_log_rates();
    (0..rm.n())
        .map(|j| {
            let mut balance = CompensatedSum::new();
            balance.add(-(lq[j] - neg_log_pi[j]).exp());
            for s in graph.slots(j) {
                let i = graph.slot_target(s);
                balance.add((rm.log_rates[graph.reverse_slot(s)] - neg_log_pi[i]).exp());
            }
            balance.value().abs()
        })
        .fold(0.0, f64::max)
}

/// Largest relative flux asymmetry `|π_iQ_ij − π_jQ_ji| / max(π_iQ_ij, π_jQ_ji)`
/// over edges.
pub fn detailed_balance_residual(rm: &RateMatrix<'_>, st: &StationaryResult) -> f64 {
    let graph = rm.graph;
    let mut worst = 0.0f64;
    for i in 0..rm.n() {
        for s in graph.slots(i) {
            let j = graph.slot_target(s);
            if j < i {
                continue;
            }
            let forward = rm.log_rates[s] - st.neg_log_pi[i];
            let backward = rm.log_rates[graph.reverse_slot(s)] - st.neg_log_pi[j];
            worst = worst.max(-(-(forward - backward).abs()).exp_m1());
        }
    }
    worst
}

/// Per-state vectors behind one correlation value.
#[derive(Debug, Clone, PartialEq)]
pub struct StateProfile {
    pub neg_log_pi: Vec<f64>,
    pub log_q: Vec<f64>,
    pub wells: Vec<f64>,
    pub barrier_fn: Vec<f64>,
    pub reversible: bool,
    pub degree: Option<usize>,
}

impl StateProfile {
    pub fn new(landscape: &Landscape<'_>, rm: &RateMatrix<'_>, st: &StationaryResult) -> Self {
        Self {
            neg_log_pi: st.neg_log_pi.clone(),
            log_q: rm.exit_log_rates(),
            wells: landscape.wells().to_vec(),
            barrier_fn: barrier_functional(landscape),
            reversible: landscape.is_reversible(),
            degree: landscape.graph().regular_degree(),
        }
    }

    pub fn rho_report(&self) -> RhoReport {
        stats::rho_report(
            &self.neg_log_pi,
            &self.log_q,
            &self.wells,
            &self.barrier_fn,
            self.reversible,
            self.degree,
        )
    }
}
