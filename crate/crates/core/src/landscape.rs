//! Disordered energy landscapes: wells on vertices, barriers and forces on
//! edges.
//!
//! Draws follow one canonical order so a seed reproduces the same landscape:
//! all wells (vertices ascending), then barriers (edges ascending, or slots
//! ascending for separable barriers), then forces (edges ascending). Every
//! Gaussian is drawn even when its scale is zero; zero scales store exact
//! zeros, so the stream position never depends on the parameters.

use alloc::format;
use alloc::vec::Vec;

// Inherent float methods exist only when std is linked.
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::dynamics;
use crate::error::{invalid, Result};
use crate::graph::Graph;

/// Relative tolerance under which two exit rates count as equal.
pub const EXIT_RATE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LandscapeKind {
    Iid,
    Rem,
    Separable,
    Custom,
}

impl LandscapeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LandscapeKind::Iid => "iid",
            LandscapeKind::Rem => "rem",
            LandscapeKind::Separable => "separable",
            LandscapeKind::Custom => "custom",
        }
    }
}

/// Affine barrier offset `f(x) = slope·x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Affine {
    pub slope: f64,
    pub intercept: f64,
}

impl Affine {
    pub const ZERO: Affine = Affine { slope: 0.0, intercept: 0.0 };

    pub fn eval(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }
}

/// Barriers `B_ij = f(W_i) + ε_ij` with i.i.d. `ε_ij ~ N(0, sigma²)`.
///
/// The residual law holds per orientation, so the raw output is asymmetric.
/// With `symmetrize` the two orientations are averaged into one symmetric
/// barrier, which no longer has exactly that residual law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparableSpec {
    pub f: Affine,
    pub sigma: f64,
    pub symmetrize: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandscapeMeta {
    pub kind: LandscapeKind,
    pub sigma_w: f64,
    /// Marginal barrier scale (`sqrt(2)(1−λ)σ_W` for the random energy model).
    pub sigma_b: f64,
    pub sigma_f: f64,
    pub lambda: Option<f64>,
    pub separable: Option<SeparableSpec>,
    pub seed: Option<u64>,
}

impl LandscapeMeta {
    pub fn custom() -> Self {
        Self {
            kind: LandscapeKind::Custom,
            sigma_w: f64::NAN,
            sigma_b: f64::NAN,
            sigma_f: f64::NAN,
            lambda: None,
            separable: None,
            seed: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Barriers {
    /// One value per undirected edge.
    Symmetric(Vec<f64>),
    /// One value per slot (oriented edge).
    Oriented(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Landscape<'g> {
    graph: &'g Graph,
    wells: Vec<f64>,
    barriers: Barriers,
    forces: Vec<f64>,
    meta: LandscapeMeta,
}

impl<'g> Landscape<'g> {
    /// Assembles a landscape from explicit values; `forces` are given for the
    /// canonical orientation `u -> v`, `u < v`, of each edge.
    pub fn new(
        graph: &'g Graph,
        wells: Vec<f64>,
        barriers: Barriers,
        forces: Vec<f64>,
        meta: LandscapeMeta,
    ) -> Result<Self> {
        if wells.len() != graph.n() {
            return Err(invalid(format!("{} wells for {} vertices", wells.len(), graph.n())));
        }
        let (len, expect) = match &barriers {
            Barriers::Symmetric(b) => (b.len(), graph.num_edges()),
            Barriers::Oriented(b) => (b.len(), graph.num_slots()),
        };
        if len != expect {
            return Err(invalid(format!("{len} barrier values, expected {expect}")));
        }
        if forces.len() != graph.num_edges() {
            return Err(invalid(format!(
                "{} force values for {} edges",
                forces.len(),
                graph.num_edges()
            )));
        }
        let barrier_values = match &barriers {
            Barriers::Symmetric(b) | Barriers::Oriented(b) => b,
        };
        if !wells.iter().chain(barrier_values).chain(&forces).all(|v| v.is_finite()) {
            return Err(invalid("landscape entries must be finite"));
        }
        Ok(Self { graph, wells, barriers, forces, meta })
    }

    /// Reversible landscape with zero barriers: `Q_ij = exp(W_i)`.
    pub fn barrier_free(graph: &'g Graph, wells: Vec<f64>) -> Result<Self> {
        let m = graph.num_edges();
        Self::new(
            graph,
            wells,
            Barriers::Symmetric(alloc::vec![0.0; m]),
            alloc::vec![0.0; m],
            LandscapeMeta::custom(),
        )
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn wells(&self) -> &[f64] {
        &self.wells
    }

    pub fn barriers(&self) -> &Barriers {
        &self.barriers
    }

    /// Forces in canonical orientation, one per edge.
    pub fn forces(&self) -> &[f64] {
        &self.forces
    }

    pub fn meta(&self) -> &LandscapeMeta {
        &self.meta
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.meta.seed = Some(seed);
        self
    }

    /// Barrier on the oriented edge stored in `slot`.
    pub fn barrier(&self, slot: usize) -> f64 {
        match &self.barriers {
            Barriers::Symmetric(b) => b[self.graph.slot_edge(slot)],
            Barriers::Oriented(b) => b[slot],
        }
    }

    /// `F_ij` for the oriented edge in `slot`; negated against the canonical
    /// orientation.
    pub fn force(&self, slot: usize) -> f64 {
        let f = self.forces[self.graph.slot_edge(slot)];
        if self.graph.slot_is_canonical(slot) {
            f
        } else {
            -f
        }
    }

    /// Barrier between `i` and `j` as seen from `i`.
    pub fn barrier_between(&self, i: usize, j: usize) -> Option<f64> {
        self.slot_of(i, j).map(|s| self.barrier(s))
    }

    pub fn force_between(&self, i: usize, j: usize) -> Option<f64> {
        self.slot_of(i, j).map(|s| self.force(s))
    }

    fn slot_of(&self, i: usize, j: usize) -> Option<usize> {
        if i >= self.n() {
            return None;
        }
        let k = self.graph.neighbors(i).binary_search(&(j as u32)).ok()?;
        Some(self.graph.slots(i).start + k)
    }

    pub fn has_symmetric_barriers(&self) -> bool {
        matches!(self.barriers, Barriers::Symmetric(_))
    }

    /// Zero forces and symmetric barriers: the chain satisfies detailed
    /// balance with `π_i ∝ exp(−W_i)`.
    pub fn is_reversible(&self) -> bool {
        self.has_symmetric_barriers() && self.forces.iter().all(|&f| f == 0.0)
    }

    /// True iff the induced exit rates are not all equal.
    pub fn exit_rate_degeneracy_check(&self) -> bool {
        let lq = dynamics::build_rates(self).exit_log_rates();
        let first = lq[0];
        lq.iter().any(|&v| (v - first).abs() > EXIT_RATE_TOLERANCE)
    }
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R, sigma: f64) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    if sigma == 0.0 {
        0.0
    } else {
        sigma * z
    }
}

fn check_scale(name: &str, sigma: f64, strict: bool) -> Result<()> {
    let ok = sigma.is_finite() && if strict { sigma > 0.0 } else { sigma >= 0.0 };
    if ok {
        Ok(())
    } else {
        let rel = if strict { "> 0" } else { ">= 0" };
        Err(invalid(format!("{name} must be finite and {rel}, got {sigma}")))
    }
}

/// Independent `N(0, σ_W²)` wells, `N(0, σ_B²)` symmetric barriers and
/// `N(0, σ_F²)` antisymmetric forces.
pub fn sample_iid<'g, R: Rng + ?Sized>(
    graph: &'g Graph,
    sigma_w: f64,
    sigma_b: f64,
    sigma_f: f64,
    rng: &mut R,
) -> Result<Landscape<'g>> {
    check_scale("sigma_w", sigma_w, true)?;
    check_scale("sigma_b", sigma_b, false)?;
    check_scale("sigma_f", sigma_f, false)?;
    let m = graph.num_edges();
    let wells: Vec<f64> = (0..graph.n()).map(|_| gaussian(rng, sigma_w)).collect();
    let barriers: Vec<f64> = (0..m).map(|_| gaussian(rng, sigma_b)).collect();
    let forces: Vec<f64> = (0..m).map(|_| gaussian(rng, sigma_f)).collect();
    Ok(Landscape {
        graph,
        wells,
        barriers: Barriers::Symmetric(barriers),
        forces,
        meta: LandscapeMeta {
            kind: LandscapeKind::Iid,
            sigma_w,
            sigma_b,
            sigma_f,
            lambda: None,
            separable: None,
            seed: None,
        },
    })
}

/// Random energy model dynamics `exp(λW_i − (1−λ)W_j)` written as the
/// barriers `B_ij = (1−λ)(W_i + W_j)`.
pub fn sample_rem<'g, R: Rng + ?Sized>(
    graph: &'g Graph,
    lambda: f64,
    sigma_w: f64,
    rng: &mut R,
) -> Result<Landscape<'g>> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(invalid(format!("lambda must lie in [0, 1], got {lambda}")));
    }
    check_scale("sigma_w", sigma_w, true)?;
    let wells: Vec<f64> = (0..graph.n()).map(|_| gaussian(rng, sigma_w)).collect();
    let coupling = 1.0 - lambda;
    let barriers = graph
        .edges()
        .iter()
        .map(|&(u, v)| coupling * (wells[u as usize] + wells[v as usize]))
        .collect();
    let m = graph.num_edges();
    Ok(Landscape {
        graph,
        wells,
        barriers: Barriers::Symmetric(barriers),
        forces: alloc::vec![0.0; m],
        meta: LandscapeMeta {
            kind: LandscapeKind::Rem,
            sigma_w,
            sigma_b: core::f64::consts::SQRT_2 * coupling * sigma_w,
            sigma_f: 0.0,
            lambda: Some(lambda),
            separable: None,
            seed: None,
        },
    })
}

/// Separable barriers `B_ij = f(W_i) + ε_ij`, one residual per slot.
pub fn sample_separable<'g, R: Rng + ?Sized>(
    graph: &'g Graph,
    sigma_w: f64,
    spec: SeparableSpec,
    rng: &mut R,
) -> Result<Landscape<'g>> {
    check_scale("sigma_w", sigma_w, true)?;
    check_scale("separable sigma", spec.sigma, true)?;
    if !(spec.f.slope.is_finite() && spec.f.intercept.is_finite()) {
        return Err(invalid("separable offset must have finite coefficients"));
    }
    let wells: Vec<f64> = (0..graph.n()).map(|_| gaussian(rng, sigma_w)).collect();
    let mut oriented = Vec::with_capacity(graph.num_slots());
    for (i, &w) in wells.iter().enumerate() {
        let base = spec.f.eval(w);
        for _ in graph.slots(i) {
            oriented.push(base + gaussian(rng, spec.sigma));
        }
    }
    let barriers = if spec.symmetrize {
        let mut sym = alloc::vec![0.0; graph.num_edges()];
        for (s, &b) in oriented.iter().enumerate() {
            if graph.slot_is_canonical(s) {
                sym[graph.slot_edge(s)] = 0.5 * (b + oriented[graph.reverse_slot(s)]);
            }
        }
        Barriers::Symmetric(sym)
    } else {
        Barriers::Oriented(oriented)
    };
    let marginal = (spec.f.slope * spec.f.slope * sigma_w * sigma_w + spec.sigma * spec.sigma).sqrt();
    let m = graph.num_edges();
    Ok(Landscape {
        graph,
        wells,
        barriers,
        forces: alloc::vec![0.0; m],
        meta: LandscapeMeta {
            kind: LandscapeKind::Separable,
            sigma_w,
            sigma_b: marginal,
            sigma_f: 0.0,
            lambda: None,
            separable: Some(spec),
            seed: None,
        },
    })
}
