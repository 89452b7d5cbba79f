//! Exact event simulation of a rate matrix and trajectory estimators.
//!
//! The exit rate `q_i` is the reciprocal mean holding time at `i`, so it can
//! be estimated from visits to `i` alone; the occupation fraction `π_i` needs
//! the whole trajectory.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

// Inherent float methods exist only when std is linked.
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::Exp1;

use crate::dynamics::RateMatrix;
use crate::error::{invalid, Result};

/// Default minimum number of visits before a state is reported.
pub const DEFAULT_MIN_VISITS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub n: usize,
    /// State of each visit, in order.
    pub states: Vec<u32>,
    /// Holding time of each visit.
    pub holds: Vec<f64>,
    /// State entered by the last jump.
    pub final_state: u32,
    pub total_time: f64,
}

impl Trajectory {
    /// Assembles a trajectory from explicit visits (states need not be
    /// adjacent; used for estimator checks).
    pub fn from_visits(n: usize, states: Vec<u32>, holds: Vec<f64>, final_state: u32) -> Result<Self> {
        if states.len() != holds.len() {
            return Err(invalid("states and holds must have equal length"));
        }
        if states.iter().chain(core::iter::once(&final_state)).any(|&s| s as usize >= n) {
            return Err(invalid("state index out of range"));
        }
        if !holds.iter().all(|&h| h > 0.0 && h.is_finite()) {
            return Err(invalid("holding times must be positive and finite"));
        }
        let total_time = crate::stats::sum(&holds);
        Ok(Self { n, states, holds, final_state, total_time })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Visit counts and total holding time per state.
    pub fn tallies(&self) -> (Vec<usize>, Vec<f64>) {
        let mut visits = vec![0usize; self.n];
        let mut time = vec![0.0; self.n];
        for (&s, &h) in self.states.iter().zip(&self.holds) {
            visits[s as usize] += 1;
            time[s as usize] += h;
        }
        (visits, time)
    }
}

/// Runs exactly `num_jumps` transitions from `start`.
///
/// The holding time at `i` is exponential with rate `q_i`; the next state is
/// `j` with probability `Q_ij / q_i`.
pub fn simulate<R: Rng + ?Sized>(
    rm: &RateMatrix<'_>,
    start: usize,
    num_jumps: usize,
    rng: &mut R,
) -> Result<Trajectory> {
    if num_jumps == 0 {
        return Err(invalid("num_jumps must be positive"));
    }
    let n = rm.n();
    if start >= n {
        return Err(invalid(format!("start state {start} out of range for n = {n}")));
    }
    let graph = rm.graph();
    let log_q = rm.exit_log_rates();
    let mean_hold: Vec<f64> = log_q.iter().map(|l| (-l).exp()).collect();
    // Cumulative jump probabilities per slot.
    let mut cumulative = vec![0.0; graph.num_slots()];
    for (i, &lq) in log_q.iter().enumerate() {
        let mut acc = 0.0;
        for s in graph.slots(i) {
            acc += (rm.log_rate(s) - lq).exp();
            cumulative[s] = acc;
        }
    }

    let mut states = Vec::with_capacity(num_jumps);
    let mut holds = Vec::with_capacity(num_jumps);
    let mut total = crate::stats::CompensatedSum::new();
    let mut current = start;
    for _ in 0..num_jumps {
        let e: f64 = rng.sample(Exp1);
        let hold = e * mean_hold[current];
        states.push(current as u32);
        holds.push(hold);
        total.add(hold);
        let slots = graph.slots(current);
        let u: f64 = rng.random::<f64>() * cumulative[slots.end - 1];
        let run = &cumulative[slots.clone()];
        let k = run.iter().position(|&c| u < c).unwrap_or(run.len() - 1);
        current = graph.slot_target(slots.start + k);
    }
    Ok(Trajectory { n, states, holds, final_state: current as u32, total_time: total.value() })
}

/// `q̂_i = visits_i / (time at i)` for states visited at least `min_visits`
/// times; `None` elsewhere.
pub fn estimate_exit_rates(traj: &Trajectory, min_visits: usize) -> Vec<Option<f64>> {
    let (visits, time) = traj.tallies();
    visits
        .iter()
        .zip(&time)
        .map(|(&v, &t)| (v >= min_visits.max(1)).then(|| v as f64 / t))
        .collect()
}

/// `π̂_i = (time at i) / total time` for states visited at least `min_visits`
/// times; `None` elsewhere.
pub fn estimate_occupation(traj: &Trajectory, min_visits: usize) -> Vec<Option<f64>> {
    let (visits, time) = traj.tallies();
    visits
        .iter()
        .zip(&time)
        .map(|(&v, &t)| (v >= min_visits.max(1)).then(|| t / traj.total_time))
        .collect()
}
