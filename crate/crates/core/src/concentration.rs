//! Tail thresholds and goodness-of-fit helpers used to set test tolerances.

use statrs::distribution::{ChiSquared, ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

fn check_nb(r: u64, p: f64) -> Result<()> {
    if r == 0 || !(p > 0.0 && p <= 1.0) {
        return Err(Error::invalid(format!("need r >= 1 and 0 < p <= 1, got r = {r}, p = {p}")));
    }
    Ok(())
}

/// Mean `r/p` of a sum of `r` independent `Geom(p)` trial counts.
pub fn geom_mean_bound(r: u64, p: f64) -> Result<f64> {
    check_nb(r, p)?;
    Ok(r as f64 / p)
}

/// `2r/p`: a negative binomial `NB(r, p)` variable reaches this value with
/// probability at most `1/r`.
pub fn nb_tail_threshold(r: u64, p: f64) -> Result<f64> {
    Ok(2.0 * geom_mean_bound(r, p)?)
}

/// Standard deviation of `Bin(trials, p)`.
pub fn binomial_sigma(trials: f64, p: f64) -> f64 {
    (trials * p * (1.0 - p)).sqrt()
}

/// Is `observed` within `k` standard deviations of `expected`?
pub fn within_sigmas(observed: f64, expected: f64, sigma: f64, k: f64) -> bool {
    (observed - expected).abs() <= k * sigma
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

impl ChiSquareTest {
    /// True when the test does not reject at level `alpha`.
    pub fn passes(&self, alpha: f64) -> bool {
        self.p_value >= alpha
    }
}

/// Pearson's chi-square test of `observed` counts against cell
/// probabilities `probs` (which must sum to 1).
pub fn chi_square_fit(observed: &[u64], probs: &[f64]) -> Result<ChiSquareTest> {
    if observed.len() != probs.len() || observed.len() < 2 {
        return Err(Error::invalid("need at least two cells with matching probabilities"));
    }
    if probs.iter().any(|&q| q <= 0.0) || (probs.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(Error::invalid("cell probabilities must be positive and sum to 1"));
    }
    let total: u64 = observed.iter().sum();
    let statistic = observed
        .iter()
        .zip(probs)
        .map(|(&o, &q)| {
            let e = total as f64 * q;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    let dof = observed.len() - 1;
    let dist = ChiSquared::new(dof as f64).expect("dof >= 1");
    Ok(ChiSquareTest { statistic, dof, p_value: 1.0 - dist.cdf(statistic) })
}

/// Chi-square test of `observed` against the uniform distribution.
pub fn chi_square_uniform(observed: &[u64]) -> Result<ChiSquareTest> {
    let k = observed.len().max(1);
    chi_square_fit(observed, &vec![1.0 / k as f64; k])
}

/// Least-squares line through `(x, y)` with a two-sided confidence
/// interval for the slope.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_ci_low: f64,
    pub slope_ci_high: f64,
    pub points: usize,
}

pub fn fit_line(x: &[f64], y: &[f64], confidence: f64) -> Result<LineFit> {
    let k = x.len();
    if k != y.len() || k < 3 {
        return Err(Error::invalid("a line fit with an interval needs at least 3 points"));
    }
    let kf = k as f64;
    let mx = x.iter().sum::<f64>() / kf;
    let my = y.iter().sum::<f64>() / kf;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("x values must not all be equal"));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let se = (rss / (kf - 2.0) / sxx).sqrt();
    let t = StudentsT::new(0.0, 1.0, kf - 2.0)
        .expect("dof >= 1")
        .inverse_cdf(0.5 + confidence / 2.0);
    Ok(LineFit { slope, intercept, slope_ci_low: slope - t * se, slope_ci_high: slope + t * se, points: k })
}
