//! File formats: edge lists, landscape JSON, per-state and trajectory CSVs,
//! trial CSVs and JSON reports.
//!
//! Floats are written in Rust's shortest round-trip form, so re-reading a
//! file recovers the exact values and equal inputs give equal bytes.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;

use arrhenius_core::landscape::Barriers;
use arrhenius_core::stats;
use arrhenius_core::trajectory::Trajectory;
use arrhenius_core::{Graph, Landscape, StateProfile};
use serde::Serialize;
use serde_json::{json, Value};

use crate::experiments::{PointAggregate, TrialRecord};

/// Header of the per-trial CSV.
pub const TRIAL_HEADER: [&str; 17] = [
    "graph", "n", "degree", "mode", "sigma_w", "sigma_b", "sigma_f", "lambda", "trial", "seed", "rho",
    "rho_hat", "r", "var_w", "var_a", "solver", "degenerate",
];

/// Header of the per-state CSV.
pub const STATE_HEADER: [&str; 5] = ["state", "neg_log_pi", "log_q", "W", "A"];

fn float(v: f64) -> String {
    format!("{v:?}")
}

fn opt_float(v: Option<f64>) -> String {
    v.map(float).unwrap_or_default()
}

fn csv_err(e: csv::Error) -> io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => e,
        other => io::Error::new(io::ErrorKind::InvalidData, format!("{other:?}")),
    }
}

/// Creates `path` (and its parent directories) for buffered writing.
pub fn create(path: &Path) -> io::Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

/// One `u v` line per edge, `u < v`, in ascending order.
pub fn write_edge_list<W: Write>(graph: &Graph, mut w: W) -> io::Result<()> {
    for &(u, v) in graph.edges() {
        writeln!(w, "{u} {v}")?;
    }
    w.flush()
}

/// Parses an edge list written by [`write_edge_list`].
pub fn read_edge_list<R: Read>(mut r: R, n: usize) -> io::Result<Graph> {
    let mut text = String::new();
    r.read_to_string(&mut text)?;
    let bad = |line: &str| io::Error::new(io::ErrorKind::InvalidData, format!("bad edge line {line:?}"));
    let mut edges = Vec::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let mut it = line.split_whitespace().map(str::parse::<usize>);
        match (it.next(), it.next(), it.next()) {
            (Some(Ok(u)), Some(Ok(v)), None) => edges.push((u, v)),
            _ => return Err(bad(line)),
        }
    }
    Graph::from_edges(n, edges).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e.to_string()))
}

/// `{n, degree, edges, W, B, F, meta}`. `B` and `F` follow the edge order;
/// oriented barriers also carry `B_reverse` for the `v → u` direction.
pub fn landscape_json(l: &Landscape<'_>) -> Value {
    let g = l.graph();
    let edges: Vec<[u32; 2]> = g.edges().iter().map(|&(u, v)| [u, v]).collect();
    let m = l.meta();
    let meta = json!({
        "kind": m.kind.as_str(),
        "sigma_w": m.sigma_w,
        "sigma_b": m.sigma_b,
        "sigma_f": m.sigma_f,
        "lambda": m.lambda,
        "separable": m.separable.map(|s| json!({
            "slope": s.f.slope,
            "intercept": s.f.intercept,
            "sigma": s.sigma,
            "symmetrize": s.symmetrize,
        })),
        "seed": m.seed,
    });
    let mut out = json!({
        "n": g.n(),
        "degree": g.regular_degree(),
        "edges": edges,
        "W": l.wells(),
        "F": l.forces(),
        "meta": meta,
    });
    match l.barriers() {
        Barriers::Symmetric(b) => out["B"] = json!(b),
        Barriers::Oriented(_) => {
            let forward: Vec<f64> = g.edges().iter().map(|&(u, v)| l.barrier_between(u as usize, v as usize).unwrap()).collect();
            let reverse: Vec<f64> = g.edges().iter().map(|&(u, v)| l.barrier_between(v as usize, u as usize).unwrap()).collect();
            out["B"] = json!(forward);
            out["B_reverse"] = json!(reverse);
        }
    }
    out
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize + ?Sized, W: Write>(value: &T, mut w: W) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()
}

pub fn write_json_file<T: Serialize + ?Sized>(value: &T, path: &Path) -> io::Result<()> {
    write_json(value, create(path)?)
}

/// `state,neg_log_pi,log_q,W,A`, one row per state.
pub fn write_state_csv<W: Write>(p: &StateProfile, w: W) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(STATE_HEADER).map_err(csv_err)?;
    for i in 0..p.wells.len() {
        out.write_record([
            i.to_string(),
            float(p.neg_log_pi[i]),
            float(p.log_q[i]),
            float(p.wells[i]),
            float(p.barrier_fn[i]),
        ])
        .map_err(csv_err)?;
    }
    out.flush()
}

/// Per-state columns read back from a state CSV.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct StateColumns {
    pub neg_log_pi: Vec<f64>,
    pub log_q: Vec<f64>,
    pub wells: Vec<f64>,
    pub barrier_fn: Vec<f64>,
}

impl StateColumns {
    /// Direct `Corr(−log π, log q)` on the stored columns.
    pub fn pearson(&self) -> arrhenius_core::Result<f64> {
        stats::pearson(&self.neg_log_pi, &self.log_q)
    }
}

pub fn read_state_csv<R: Read>(r: R) -> io::Result<StateColumns> {
    let mut rd = csv::Reader::from_reader(r);
    let header = rd.headers().map_err(csv_err)?.clone();
    if header.iter().ne(STATE_HEADER) {
        return Err(io::Error::new(io::ErrorKind::InvalidData, "unexpected state CSV header"));
    }
    let mut cols = StateColumns::default();
    for rec in rd.records() {
        let rec = rec.map_err(csv_err)?;
        let f = |k: usize| {
            rec[k].parse::<f64>().map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e.to_string()))
        };
        cols.neg_log_pi.push(f(1)?);
        cols.log_q.push(f(2)?);
        cols.wells.push(f(3)?);
        cols.barrier_fn.push(f(4)?);
    }
    Ok(cols)
}

/// `step,state,hold_time`.
pub fn write_trajectory_csv<W: Write>(t: &Trajectory, w: W) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["step", "state", "hold_time"]).map_err(csv_err)?;
    for (k, (s, h)) in t.states.iter().zip(&t.holds).enumerate() {
        out.write_record([k.to_string(), s.to_string(), float(*h)]).map_err(csv_err)?;
    }
    out.flush()
}

fn trial_row(r: &TrialRecord) -> [String; 17] {
    [
        r.graph.clone(),
        r.n.to_string(),
        r.degree.map(|d| d.to_string()).unwrap_or_default(),
        r.mode.as_str().to_string(),
        float(r.sigma_w),
        float(r.sigma_b),
        float(r.sigma_f),
        opt_float(r.lambda),
        r.trial.to_string(),
        r.seed.to_string(),
        opt_float(r.rho),
        opt_float(r.rho_hat),
        opt_float(r.r),
        opt_float(r.var_w),
        opt_float(r.var_a),
        r.solver.clone(),
        r.degenerate.to_string(),
    ]
}

/// Trial CSV in record order.
pub fn write_trials_csv<W: Write>(records: &[TrialRecord], w: W) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(TRIAL_HEADER).map_err(csv_err)?;
    for r in records {
        out.write_record(trial_row(r)).map_err(csv_err)?;
    }
    out.flush()
}

/// Aggregates as CSV, for plotting tools.
pub fn write_aggregates_csv<W: Write>(aggs: &[PointAggregate], w: W) -> io::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "graph", "n", "degree", "mode", "sigma_w", "sigma_b", "sigma_f", "lambda", "trials", "valid",
        "degenerate", "errored", "mean_rho", "sd_rho", "se_rho",
    ])
    .map_err(csv_err)?;
    for a in aggs {
        out.write_record([
            a.graph.clone(),
            a.n.to_string(),
            a.degree.map(|d| d.to_string()).unwrap_or_default(),
            a.mode.as_str().to_string(),
            float(a.sigma_w),
            float(a.sigma_b),
            float(a.sigma_f),
            opt_float(a.lambda),
            a.trials.to_string(),
            a.valid_trials.to_string(),
            a.degenerate_trials.to_string(),
            a.errored_trials.to_string(),
            opt_float(a.mean_rho),
            opt_float(a.sd_rho),
            opt_float(a.se_rho),
        ])
        .map_err(csv_err)?;
    }
    out.flush()
}

/// Per-state CSV plus a JSON sidecar (`<stem>.json`) with ρ and parameters.
pub fn emit_scatter<T: Serialize>(profile: &StateProfile, sidecar: &T, csv_path: &Path) -> io::Result<()> {
    write_state_csv(profile, create(csv_path)?)?;
    write_json_file(sidecar, &csv_path.with_extension("json"))
}
