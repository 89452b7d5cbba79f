//! Finite-n lower bounds on the expected local–global correlation, and the
//! Monte Carlo checks of the moment inequalities they are assembled from.
//!
//! With `n` states, `E(1/Var W_I)` and `Var(1/Var W_I)` are inverse-gamma
//! moments, while `E(Var A_I) ≤ 4σ_B²` and `E((Var A_I)²) ≤ 1720σ_B⁴`.
//! Combining them through Cauchy–Schwarz gives
//!
//! ```text
//! E(r²) ≤ c_r(n) (σ_B/σ_W)²,   c_r(n) = 4n/(n−3) + 2·sqrt(1720)·n / ((n−3)·sqrt(n−5)),
//! ```
//!
//! and `E(ρ) ≥ 1 − 2 E(r²)`. `c_r(n) → 4` as `n → ∞`, which recovers the
//! asymptotic coefficient 8 (16 for the random energy model, whose barriers
//! have `σ_B = sqrt(2)(1−λ)σ_W`).

use alloc::format;
use alloc::vec::Vec;

// Inherent float methods exist only when std is linked.
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::dynamics::barrier_functional;
use crate::error::{invalid, Result};
use crate::graph::Graph;
use crate::landscape::sample_iid;
use crate::stats::{population_variance, CompensatedSum};

/// Second-moment constant in `E((Var A_I)²) ≤ 1720 σ_B⁴`.
pub const VAR_A_SECOND_MOMENT: f64 = 1720.0;
/// Constant in `E(Var A_I) ≤ 4 σ_B²`.
pub const VAR_A_FIRST_MOMENT: f64 = 4.0;
/// Monte Carlo checks allow this many standard errors.
pub const STD_ERRORS: f64 = 3.0;

fn check_n(n: usize) -> Result<()> {
    if n < 6 {
        return Err(invalid(format!(
            "bounds need n >= 6 (inverse-gamma variance is infinite below), got {n}"
        )));
    }
    Ok(())
}

/// `c_r(n)`, the finite-n multiplier of `(σ_B/σ_W)²` in the bound on `E(r²)`.
pub fn finite_n_coefficient(n: usize) -> Result<f64> {
    check_n(n)?;
    let n = n as f64;
    Ok(4.0 * n / (n - 3.0) + 2.0 * VAR_A_SECOND_MOMENT.sqrt() * n / ((n - 3.0) * (n - 5.0).sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundFamily {
    /// Separable landscapes; parameter is `σ_B/σ_W`.
    SigmaRatio(f64),
    /// Random energy model; parameter is `λ`.
    Locality(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundEvaluation {
    pub n: usize,
    pub family: BoundFamily,
    pub c_r: f64,
    pub rho_lower_bound: f64,
    /// Large-n coefficient (8 or 16), reported for reference only.
    pub asymptotic_coefficient: f64,
}

impl BoundEvaluation {
    /// The bound says something only when it exceeds −1.
    pub fn is_binding(&self) -> bool {
        self.rho_lower_bound > -1.0
    }

    /// Asymptotic form `1 − coefficient · x`, with `x = (σ_B/σ_W)²` or
    /// `(1−λ)²`.
    pub fn asymptotic_bound(&self) -> f64 {
        let x = match self.family {
            BoundFamily::SigmaRatio(s) => s * s,
            BoundFamily::Locality(l) => (1.0 - l) * (1.0 - l),
        };
        1.0 - self.asymptotic_coefficient * x
    }
}

/// `E(ρ) ≥ 1 − 2 c_r(n) (σ_B/σ_W)²`.
pub fn theorem1_bound(n: usize, sigma_b: f64, sigma_w: f64) -> Result<BoundEvaluation> {
    if !(sigma_w > 0.0 && sigma_w.is_finite()) || !(sigma_b >= 0.0 && sigma_b.is_finite()) {
        return Err(invalid("need sigma_w > 0 and sigma_b >= 0"));
    }
    let c_r = finite_n_coefficient(n)?;
    let ratio = sigma_b / sigma_w;
    Ok(BoundEvaluation {
        n,
        family: BoundFamily::SigmaRatio(ratio),
        c_r,
        rho_lower_bound: 1.0 - 2.0 * c_r * ratio * ratio,
        asymptotic_coefficient: 8.0,
    })
}

/// `E(ρ) ≥ 1 − 4 c_r(n) (1−λ)²` for the random energy model.
pub fn theorem2_bound(n: usize, lambda: f64) -> Result<BoundEvaluation> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(invalid(format!("lambda must lie in [0, 1], got {lambda}")));
    }
    let c_r = finite_n_coefficient(n)?;
    let gap = 1.0 - lambda;
    Ok(BoundEvaluation {
        n,
        family: BoundFamily::Locality(lambda),
        c_r,
        rho_lower_bound: 1.0 - 4.0 * c_r * gap * gap,
        asymptotic_coefficient: 16.0,
    })
}

/// Mean and variance of `1/Var W_I`, which is inverse gamma with shape
/// `(n−1)/2` and scale `n/(2σ_W²)`.
pub fn invgamma_moments(n: usize, sigma_w: f64) -> Result<(f64, f64)> {
    check_n(n)?;
    if !(sigma_w > 0.0 && sigma_w.is_finite()) {
        return Err(invalid("sigma_w must be positive"));
    }
    let n = n as f64;
    let s2 = sigma_w * sigma_w;
    let mean = n / ((n - 3.0) * s2);
    let var = 2.0 * n * n / ((n - 3.0) * (n - 3.0) * (n - 5.0) * s2 * s2);
    Ok((mean, var))
}

/// `m Γ(m/2) (2σ²)^{m/2}`: bound on the m-th central moment of a 1-Lipschitz
/// function of `N(0, σ² I)`.
pub fn central_moment_bound(m: u32, sigma: f64) -> f64 {
    assert!(m >= 1, "moment order must be at least 1");
    let half = f64::from(m) / 2.0;
    f64::from(m) * libm::tgamma(half) * (2.0 * sigma * sigma).powf(half)
}

/// One landscape's contribution to the moment checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentSample {
    pub var_a: f64,
    pub inv_var_w: f64,
}

/// Draws one i.i.d. landscape (no forces) and records `Var A_I`, `1/Var W_I`.
pub fn moment_sample<R: Rng + ?Sized>(
    graph: &Graph,
    sigma_w: f64,
    sigma_b: f64,
    rng: &mut R,
) -> Result<MomentSample> {
    let l = sample_iid(graph, sigma_w, sigma_b, 0.0, rng)?;
    let var_a = population_variance(&barrier_functional(&l));
    let var_w = population_variance(l.wells());
    Ok(MomentSample { var_a, inv_var_w: 1.0 / var_w })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// Estimate must not exceed the bound by more than the allowance.
    AtMost,
    /// Estimate must match the target within the allowance.
    Equals,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentCheck {
    pub name: &'static str,
    pub estimate: f64,
    pub std_error: f64,
    pub bound: f64,
    pub relation: Relation,
    pub pass: bool,
}

impl MomentCheck {
    fn new(name: &'static str, estimate: f64, std_error: f64, bound: f64, relation: Relation) -> Self {
        let slack = STD_ERRORS * std_error;
        let pass = match relation {
            Relation::AtMost => estimate <= bound + slack,
            Relation::Equals => (estimate - bound).abs() <= slack,
        };
        Self { name, estimate, std_error, bound, relation, pass }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub n: usize,
    pub sigma_w: f64,
    pub sigma_b: f64,
    pub trials: usize,
    pub checks: Vec<MomentCheck>,
}

impl MomentReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&MomentCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Aggregates samples in the given order.
    pub fn from_samples(n: usize, sigma_w: f64, sigma_b: f64, samples: &[MomentSample]) -> Result<Self> {
        if samples.len() < 2 {
            return Err(invalid("moment suite needs at least 2 trials"));
        }
        let (inv_mean, inv_var) = invgamma_moments(n, sigma_w)?;
        let c_r = finite_n_coefficient(n)?;
        let sb2 = sigma_b * sigma_b;
        let ratio2 = sb2 / (sigma_w * sigma_w);

        let var_a: Vec<f64> = samples.iter().map(|s| s.var_a).collect();
        let var_a_sq: Vec<f64> = var_a.iter().map(|v| v * v).collect();
        let inv: Vec<f64> = samples.iter().map(|s| s.inv_var_w).collect();
        let r2: Vec<f64> = samples.iter().map(|s| s.var_a * s.inv_var_w).collect();

        let (m_a, se_a) = mean_and_se(&var_a);
        let (m_a2, se_a2) = mean_and_se(&var_a_sq);
        let (m_inv, se_inv) = mean_and_se(&inv);
        let (v_inv, se_v_inv) = variance_and_se(&inv);
        let (m_r2, se_r2) = mean_and_se(&r2);

        let checks = alloc::vec![
            MomentCheck::new("mean_var_a", m_a, se_a, VAR_A_FIRST_MOMENT * sb2, Relation::AtMost),
            MomentCheck::new("mean_var_a_squared", m_a2, se_a2, VAR_A_SECOND_MOMENT * sb2 * sb2, Relation::AtMost),
            MomentCheck::new("mean_inv_var_w", m_inv, se_inv, inv_mean, Relation::Equals),
            MomentCheck::new("var_inv_var_w", v_inv, se_v_inv, inv_var, Relation::Equals),
            MomentCheck::new("mean_r_squared", m_r2, se_r2, c_r * ratio2, Relation::AtMost),
        ];
        Ok(Self { n, sigma_w, sigma_b, trials: samples.len(), checks })
    }
}

/// Sample mean and its standard error.
pub fn mean_and_se(x: &[f64]) -> (f64, f64) {
    let k = x.len() as f64;
    let m = x.iter().copied().collect::<CompensatedSum>().value() / k;
    let ss = x.iter().map(|v| (v - m) * (v - m)).collect::<CompensatedSum>().value();
    let sd = (ss / (k - 1.0)).sqrt();
    (m, sd / k.sqrt())
}

/// Sample variance (divisor k−1) and its large-sample standard error
/// `sqrt((m4 − s⁴)/k)`.
pub fn variance_and_se(x: &[f64]) -> (f64, f64) {
    let k = x.len() as f64;
    let m = x.iter().copied().collect::<CompensatedSum>().value() / k;
    let ss = x.iter().map(|v| (v - m).powi(2)).collect::<CompensatedSum>().value();
    let m4 = x.iter().map(|v| (v - m).powi(4)).collect::<CompensatedSum>().value() / k;
    let s2 = ss / (k - 1.0);
    let pop2 = ss / k;
    (s2, ((m4 - pop2 * pop2).max(0.0) / k).sqrt())
}

/// Sequential Monte Carlo over `trials` landscapes drawn from `rng`.
pub fn empirical_moment_suite<R: Rng + ?Sized>(
    graph: &Graph,
    sigma_w: f64,
    sigma_b: f64,
    trials: usize,
    rng: &mut R,
) -> Result<MomentReport> {
    if trials < 2 {
        return Err(invalid("moment suite needs at least 2 trials"));
    }
    check_n(graph.n())?;
    let samples = (0..trials)
        .map(|_| moment_sample(graph, sigma_w, sigma_b, rng))
        .collect::<Result<Vec<_>>>()?;
    MomentReport::from_samples(graph.n(), sigma_w, sigma_b, &samples)
}
