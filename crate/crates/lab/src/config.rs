//! Sweep configuration: graph specs, landscape modes and parameter grids.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use arrhenius_core::graph::{self, Graph};
use arrhenius_core::landscape::Affine;
use arrhenius_core::seed::stable_hash;
use arrhenius_core::SeparableSpec;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

/// Problems with a configuration, reported before any trial runs.
#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("bad graph spec {spec:?}: {reason}")]
    GraphSpec { spec: String, reason: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot parse {path}: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
}

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid(msg.into())
}

/// A graph family and its size parameters, written `family:param[:param]`.
///
/// `random-regular:N:D` is regenerated for every trial from the degree-`D`
/// circulant on `N` vertices with `10·D` accepted edge swaps.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum GraphSpec {
    Complete(usize),
    Hypercube(u32),
    Cycle(usize),
    Circulant(usize, Vec<usize>),
    RandomRegular(usize, usize),
}

/// Swaps per unit of degree for random regular graphs.
pub const SWAPS_PER_DEGREE: usize = 10;

impl GraphSpec {
    pub fn n(&self) -> usize {
        match self {
            GraphSpec::Complete(n) | GraphSpec::Cycle(n) | GraphSpec::Circulant(n, _) => *n,
            GraphSpec::RandomRegular(n, _) => *n,
            GraphSpec::Hypercube(d) => 1usize << d,
        }
    }

    /// Whether building the graph consumes randomness.
    pub fn is_random(&self) -> bool {
        matches!(self, GraphSpec::RandomRegular(..))
    }

    /// Builds the graph; random families draw from `rng`.
    pub fn build<R: Rng + ?Sized>(&self, rng: &mut R) -> arrhenius_core::Result<Graph> {
        match self {
            GraphSpec::Complete(n) => graph::complete_graph(*n),
            GraphSpec::Hypercube(d) => graph::hypercube(*d),
            GraphSpec::Cycle(n) => graph::cycle(*n),
            GraphSpec::Circulant(n, offsets) => graph::circulant(*n, offsets),
            GraphSpec::RandomRegular(n, d) => {
                let base = graph::circulant_of_degree(*n, *d)?;
                graph::random_regular_by_swaps(&base, SWAPS_PER_DEGREE * d, rng)
            }
        }
    }

    /// Builds a deterministic graph; random families need [`GraphSpec::build`].
    pub fn build_fixed(&self) -> arrhenius_core::Result<Graph> {
        assert!(!self.is_random(), "random graph families need an rng");
        self.build(&mut rand_chacha::ChaCha8Rng::seed_from_u64(0))
    }
}

impl fmt::Display for GraphSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphSpec::Complete(n) => write!(f, "complete:{n}"),
            GraphSpec::Hypercube(d) => write!(f, "hypercube:{d}"),
            GraphSpec::Cycle(n) => write!(f, "cycle:{n}"),
            GraphSpec::Circulant(n, offsets) => {
                let o: Vec<String> = offsets.iter().map(usize::to_string).collect();
                write!(f, "circulant:{n}:{}", o.join("/"))
            }
            GraphSpec::RandomRegular(n, d) => write!(f, "random-regular:{n}:{d}"),
        }
    }
}

impl FromStr for GraphSpec {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |reason: &str| ConfigError::GraphSpec { spec: s.to_string(), reason: reason.to_string() };
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |p: &str| p.parse::<usize>().map_err(|_| bad("expected a nonnegative integer"));
        match parts.as_slice() {
            ["complete", n] => Ok(GraphSpec::Complete(num(n)?)),
            ["hypercube", d] => {
                let d = num(d)?;
                u32::try_from(d).map(GraphSpec::Hypercube).map_err(|_| bad("dimension too large"))
            }
            ["cycle", n] => Ok(GraphSpec::Cycle(num(n)?)),
            ["circulant", n, offsets] => {
                let offsets = offsets.split('/').map(num).collect::<Result<Vec<_>, _>>()?;
                Ok(GraphSpec::Circulant(num(n)?, offsets))
            }
            ["random-regular", n, d] => Ok(GraphSpec::RandomRegular(num(n)?, num(d)?)),
            _ => Err(bad(
                "expected complete:N, hypercube:D, cycle:N, circulant:N:s1/s2/..., or random-regular:N:D",
            )),
        }
    }
}

impl TryFrom<String> for GraphSpec {
    type Error = ConfigError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<GraphSpec> for String {
    fn from(g: GraphSpec) -> String {
        g.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Independent Gaussian wells, barriers and forces.
    Iid,
    /// Random energy model with locality `λ`.
    Rem,
    /// Separable barriers `f(W_i) + N(0, σ²)`.
    Separable,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Iid => "iid",
            Mode::Rem => "rem",
            Mode::Separable => "separable",
        }
    }
}

/// Which numerical solver serves non-reversible chains. Reversible chains
/// always use the closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SolverChoice {
    /// Dense below the size threshold, power iteration above.
    #[default]
    Auto,
    Dense,
    Power,
}

/// Separable landscape description in config files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeparableConfig {
    #[serde(default)]
    pub slope: f64,
    #[serde(default)]
    pub intercept: f64,
    pub sigma: f64,
    #[serde(default)]
    pub symmetrize: bool,
}

impl From<SeparableConfig> for SeparableSpec {
    fn from(c: SeparableConfig) -> Self {
        SeparableSpec { f: Affine { slope: c.slope, intercept: c.intercept }, sigma: c.sigma, symmetrize: c.symmetrize }
    }
}

fn default_trials() -> usize {
    25
}

fn default_sigma_w() -> Vec<f64> {
    vec![1.0]
}

fn default_zero() -> Vec<f64> {
    vec![0.0]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub graphs: Vec<GraphSpec>,
    pub mode: Mode,
    #[serde(default = "default_sigma_w")]
    pub sigma_w: Vec<f64>,
    #[serde(default = "default_zero")]
    pub sigma_b: Vec<f64>,
    #[serde(default = "default_zero")]
    pub sigma_f: Vec<f64>,
    #[serde(default)]
    pub lambda: Vec<f64>,
    #[serde(default)]
    pub separable: Option<SeparableConfig>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub solver: SolverChoice,
    /// Worker threads; 0 uses every available core.
    #[serde(default)]
    pub workers: usize,
    #[serde(default)]
    pub output: OutputPaths,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputPaths {
    /// Per-trial CSV.
    pub trials_csv: Option<PathBuf>,
    /// Per-point aggregates as JSON.
    pub aggregates_json: Option<PathBuf>,
    /// Bound verification report as JSON.
    pub bounds_json: Option<PathBuf>,
}

/// One point of the parameter grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridPoint {
    pub graph: GraphSpec,
    pub mode: Mode,
    pub sigma_w: f64,
    pub sigma_b: f64,
    pub sigma_f: f64,
    pub lambda: Option<f64>,
    pub separable: Option<SeparableConfig>,
}

impl GridPoint {
    /// Canonical text of the point's parameters; its hash keys the seeds.
    pub fn label(&self) -> String {
        let mut s = format!(
            "graph={};mode={};sigma_w={};sigma_b={};sigma_f={}",
            self.graph,
            self.mode.as_str(),
            self.sigma_w,
            self.sigma_b,
            self.sigma_f
        );
        if let Some(l) = self.lambda {
            s.push_str(&format!(";lambda={l}"));
        }
        if let Some(c) = &self.separable {
            s.push_str(&format!(
                ";slope={};intercept={};sigma={};symmetrize={}",
                c.slope, c.intercept, c.sigma, c.symmetrize
            ));
        }
        s
    }

    pub fn point_id(&self) -> u64 {
        stable_hash(self.label().as_bytes())
    }
}

impl SweepConfig {
    /// Reads a JSON config file.
    pub fn from_path(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.into(), source })?;
        serde_json::from_str(&text).map_err(|source| ConfigError::Parse { path: path.into(), source })
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.graphs.is_empty() {
            return Err(invalid("graphs must be nonempty"));
        }
        if self.trials == 0 {
            return Err(invalid("trials must be at least 1"));
        }
        let nonempty = |name: &str, v: &[f64]| {
            if v.is_empty() {
                Err(invalid(format!("{name} grid must be nonempty")))
            } else if v.iter().any(|x| !x.is_finite() || *x < 0.0) {
                Err(invalid(format!("{name} values must be finite and nonnegative")))
            } else {
                Ok(())
            }
        };
        nonempty("sigma_w", &self.sigma_w)?;
        if self.sigma_w.iter().any(|&s| s <= 0.0) {
            return Err(invalid("sigma_w values must be positive"));
        }
        match self.mode {
            Mode::Iid => {
                nonempty("sigma_b", &self.sigma_b)?;
                nonempty("sigma_f", &self.sigma_f)?;
            }
            Mode::Rem => {
                nonempty("lambda", &self.lambda)?;
                if self.lambda.iter().any(|l| *l > 1.0) {
                    return Err(invalid("lambda values must lie in [0, 1]"));
                }
            }
            Mode::Separable => match &self.separable {
                None => return Err(invalid("separable mode needs a separable section")),
                Some(c) if !(c.sigma > 0.0 && c.sigma.is_finite()) => {
                    return Err(invalid("separable sigma must be positive"))
                }
                Some(_) => {}
            },
        }
        for g in &self.graphs {
            self.check_graph(g)?;
        }
        Ok(())
    }

    fn check_graph(&self, spec: &GraphSpec) -> Result<(), ConfigError> {
        let reason = |e: arrhenius_core::Error| ConfigError::GraphSpec { spec: spec.to_string(), reason: e.to_string() };
        let g = match spec {
            GraphSpec::RandomRegular(n, d) => graph::circulant_of_degree(*n, *d).map_err(reason)?,
            _ => spec.build_fixed().map_err(reason)?,
        };
        let diag = g.validate();
        if !diag.is_valid() {
            return Err(ConfigError::GraphSpec { spec: spec.to_string(), reason: format!("{diag:?}") });
        }
        Ok(())
    }

    /// Expands the grids in a fixed order: graph, then σ_W, then the
    /// mode's own parameters.
    pub fn grid(&self) -> Vec<GridPoint> {
        let mut points = Vec::new();
        for g in &self.graphs {
            for &sw in &self.sigma_w {
                let base = GridPoint {
                    graph: g.clone(),
                    mode: self.mode,
                    sigma_w: sw,
                    sigma_b: 0.0,
                    sigma_f: 0.0,
                    lambda: None,
                    separable: None,
                };
                match self.mode {
                    Mode::Iid => {
                        for &sb in &self.sigma_b {
                            for &sf in &self.sigma_f {
                                points.push(GridPoint { sigma_b: sb, sigma_f: sf, ..base.clone() });
                            }
                        }
                    }
                    Mode::Rem => {
                        for &l in &self.lambda {
                            let sb = std::f64::consts::SQRT_2 * (1.0 - l) * sw;
                            points.push(GridPoint { sigma_b: sb, lambda: Some(l), ..base.clone() });
                        }
                    }
                    Mode::Separable => {
                        let c = self.separable.expect("validated");
                        let sb = (c.slope * c.slope * sw * sw + c.sigma * c.sigma).sqrt();
                        points.push(GridPoint { sigma_b: sb, separable: Some(c), ..base });
                    }
                }
            }
        }
        points
    }
}
