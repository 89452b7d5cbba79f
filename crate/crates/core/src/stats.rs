//! Per-state statistics and the local–global correlation.
//!
//! Every variance here is the population form `(1/n) Σ (x_i − x̄)²`, i.e. the
//! variance of `x_I` for a uniformly random state `I`. The ratio `r²` mixes
//! two such variances, so the convention only cancels because it is applied
//! everywhere.

// Inherent float methods exist only when std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{invalid, Error, Result};

/// Variances below this are treated as zero.
pub const DEGENERATE_VARIANCE: f64 = 1e-24;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        iter.into_iter().for_each(|x| s.add(x));
        s
    }
}

pub fn sum(x: &[f64]) -> f64 {
    x.iter().copied().collect::<CompensatedSum>().value()
}

pub fn mean(x: &[f64]) -> f64 {
    sum(x) / x.len() as f64
}

fn is_constant(x: &[f64]) -> bool {
    x.iter().all(|&v| v == x[0])
}

/// Population variance by the corrected two-pass algorithm.
pub fn population_variance(x: &[f64]) -> f64 {
    assert!(!x.is_empty(), "variance of an empty sample");
    if is_constant(x) {
        return 0.0;
    }
    let n = x.len() as f64;
    let m = mean(x);
    let mut sq = CompensatedSum::new();
    let mut lin = CompensatedSum::new();
    for &v in x {
        let d = v - m;
        sq.add(d * d);
        lin.add(d);
    }
    let c = lin.value();
    ((sq.value() - c * c / n) / n).max(0.0)
}

/// Population covariance, two-pass.
pub fn covariance(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len(), "covariance of unequal lengths");
    assert!(!x.is_empty(), "covariance of an empty sample");
    if is_constant(x) || is_constant(y) {
        return 0.0;
    }
    let n = x.len() as f64;
    let (mx, my) = (mean(x), mean(y));
    let mut acc = CompensatedSum::new();
    let (mut lx, mut ly) = (CompensatedSum::new(), CompensatedSum::new());
    for (&a, &b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        acc.add(dx * dy);
        lx.add(dx);
        ly.add(dy);
    }
    (acc.value() - lx.value() * ly.value() / n) / n
}

/// Pearson correlation; [`Error::Degenerate`] when either variance is below
/// [`DEGENERATE_VARIANCE`].
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    let vx = population_variance(x);
    let vy = population_variance(y);
    if vx < DEGENERATE_VARIANCE || vy < DEGENERATE_VARIANCE {
        return Err(Error::Degenerate);
    }
    Ok((covariance(x, y) / (vx * vy).sqrt()).clamp(-1.0, 1.0))
}

/// `log Σ exp(x_i)` with the max shifted out.
pub fn lse(x: &[f64]) -> Result<f64> {
    if x.is_empty() {
        return Err(invalid("log-sum-exp of an empty vector"));
    }
    Ok(lse_iter(x.iter().copied()))
}

/// Log-sum-exp over a nonempty iterator (`-inf` for an empty one).
pub(crate) fn lse_iter<I>(values: I) -> f64
where
    I: Iterator<Item = f64> + Clone,
{
    let max = values.clone().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    let mut s = CompensatedSum::new();
    values.for_each(|v| s.add((v - max).exp()));
    max + s.value().ln()
}

/// `(1 + ρ̂ r) / sqrt(1 + 2 ρ̂ r + r²)`: the correlation of `W` with `W + A`
/// written through `ρ̂ = Corr(W, A)` and `r = sqrt(Var A / Var W)`.
pub fn rho_from_decomposition(rho_hat: f64, r: f64) -> f64 {
    let t = rho_hat * r;
    (1.0 + t) / (1.0 + 2.0 * t + r * r).sqrt()
}

/// Local–global correlation of one chain.
#[derive(Debug, Clone, PartialEq)]
pub struct RhoReport {
    /// `Corr(−log π_I, log q_I)`; `None` when degenerate.
    pub rho: Option<f64>,
    /// `Corr(W_I, A_I)`; reversible chains with nonconstant `A` only.
    pub rho_hat: Option<f64>,
    /// `sqrt(Var A_I / Var W_I)`; reversible chains only.
    pub r: Option<f64>,
    pub var_w: f64,
    pub var_a: f64,
    pub n: usize,
    pub degree: Option<usize>,
    pub degenerate: bool,
    pub reversible: bool,
    /// Reversible chains: `|Corr(−log π, log q) − ρ|` with the left side
    /// evaluated directly on the solved vectors.
    pub direct_gap: Option<f64>,
}

impl RhoReport {
    /// The decomposition value `(1+ρ̂r)/sqrt(1+2ρ̂r+r²)`, with `ρ̂` taken as 0
    /// when `A` is constant (then `r = 0` and the value is 1).
    pub fn decomposition_value(&self) -> Option<f64> {
        let r = self.r?;
        Some(rho_from_decomposition(self.rho_hat.unwrap_or(0.0), r))
    }
}

/// Builds the report from per-state vectors.
///
/// Reversible chains compute `ρ = Corr(W, W + A)` from the moments of `W`
/// and `A` (exact when `A` is constant) and record how far the direct
/// correlation of `(−log π, log q)` lands from it. Non-reversible chains use
/// the direct correlation only.
pub fn rho_report(
    neg_log_pi: &[f64],
    log_q: &[f64],
    wells: &[f64],
    barrier_fn: &[f64],
    reversible: bool,
    degree: Option<usize>,
) -> RhoReport {
    let n = wells.len();
    assert!(
        neg_log_pi.len() == n && log_q.len() == n && barrier_fn.len() == n,
        "per-state vectors must have equal lengths"
    );
    let var_w = population_variance(wells);
    let var_a = population_variance(barrier_fn);
    let mut report = RhoReport {
        rho: None,
        rho_hat: None,
        r: None,
        var_w,
        var_a,
        n,
        degree,
        degenerate: false,
        reversible,
        direct_gap: None,
    };
    if !reversible {
        match pearson(neg_log_pi, log_q) {
            Ok(rho) => report.rho = Some(rho),
            Err(_) => report.degenerate = true,
        }
        return report;
    }

    let cov = covariance(wells, barrier_fn);
    let var_q = var_w + 2.0 * cov + var_a;
    if var_w < DEGENERATE_VARIANCE || var_q < DEGENERATE_VARIANCE {
        report.degenerate = true;
        return report;
    }
    let rho = ((var_w + cov) / (var_w * var_q).sqrt()).clamp(-1.0, 1.0);
    report.rho = Some(rho);
    report.r = Some((var_a / var_w).sqrt());
    if var_a >= DEGENERATE_VARIANCE {
        report.rho_hat = Some((cov / (var_w * var_a).sqrt()).clamp(-1.0, 1.0));
    }
    report.direct_gap = pearson(neg_log_pi, log_q).ok().map(|d| (d - rho).abs());
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn variance_examples() {
        assert_eq!(population_variance(&[1.0, 1.0, 1.0]), 0.0);
        assert_eq!(population_variance(&[0.0, 2.0]), 1.0);
        // mean 2.5, squared deviations 2.25 + 0.25 + 0.25 + 2.25 = 5, / 4.
        assert_eq!(population_variance(&[1.0, 2.0, 3.0, 4.0]), 1.25);
    }

    #[test]
    fn variance_survives_large_offset() {
        let x: Vec<f64> = [1.0, 2.0, 3.0, 4.0].iter().map(|v| v + 1e9).collect();
        assert!((population_variance(&x) - 1.25).abs() < 1e-6);
    }

    #[test]
    fn pearson_examples() {
        let x = [0.0, 1.0, 2.0, 5.0];
        let y: Vec<f64> = x.iter().map(|v| 2.0 * v + 7.0).collect();
        assert!((pearson(&x, &y).unwrap() - 1.0).abs() < 1e-15);
        let y: Vec<f64> = x.iter().map(|v| -v).collect();
        assert!((pearson(&x, &y).unwrap() + 1.0).abs() < 1e-15);
        // cov = (−1)(−1/3) + 0 + (1)(−1/3) = 0.
        assert!(pearson(&[0.0, 1.0, 2.0], &[0.0, 1.0, 0.0]).unwrap().abs() < 1e-15);
        assert_eq!(pearson(&[1.0, 1.0], &[0.0, 1.0]), Err(Error::Degenerate));
    }

    #[test]
    fn lse_examples() {
        assert!((lse(&[0.0, 0.0]).unwrap() - core::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(lse(&[1000.0, 1000.0]).unwrap(), 1000.0 + core::f64::consts::LN_2);
        assert_eq!(lse(&[-3.5]).unwrap(), -3.5);
        assert!(lse(&[]).is_err());
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let s: CompensatedSum = [1e16, 1.0, -1e16].into_iter().collect();
        assert_eq!(s.value(), 1.0);
    }

    #[test]
    fn decomposition_minimizer() {
        for &r in &[0.0, 0.1, 0.5, 0.9, 0.99] {
            let v = rho_from_decomposition(-r, r);
            assert!((v - (1.0 - r * r).sqrt()).abs() < 1e-14);
        }
    }

    #[test]
    fn constant_barrier_fn_gives_unit_rho() {
        let w = [0.3, -1.2, 2.0, 0.7];
        let a = [3f64.ln(); 4];
        let nlp: Vec<f64> = w.to_vec();
        let lq: Vec<f64> = w.iter().zip(&a).map(|(x, y)| x + y).collect();
        let rep = rho_report(&nlp, &lq, &w, &a, true, Some(3));
        assert_eq!(rep.rho, Some(1.0));
        assert_eq!(rep.r, Some(0.0));
        assert_eq!(rep.rho_hat, None);
        assert_eq!(rep.decomposition_value(), Some(1.0));
    }

    #[test]
    fn degenerate_wells_flagged() {
        let w = [1.0; 3];
        let rep = rho_report(&w, &w, &w, &w, true, Some(2));
        assert!(rep.degenerate);
        assert_eq!(rep.rho, None);
    }
}
