//! Exponential-rate and polynomial-degree fitting for count series.
//!
//! All logarithms are base 2 and `log+ := max{0, log}` with zero counts
//! dropped; asymptotic rates are approximated by a least-squares fit over the
//! top half of the index range, and the fit window is recorded so downstream
//! checks can pin it.

use crate::error::Error;
use serde::{Deserialize, Serialize};

/// A sequence of nonnegative counts indexed by time k or action s.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GrowthSeries {
    pub index: Vec<f64>,
    pub counts: Vec<f64>,
}

impl GrowthSeries {
    pub fn new(index: Vec<f64>, counts: Vec<f64>) -> Result<Self, Error> {
        if index.len() != counts.len() {
            return Err(Error::Input("growth series index/count length mismatch".into()));
        }
        if index.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Input("growth series index must be strictly increasing".into()));
        }
        if counts.iter().any(|&c| c < 0.0 || !c.is_finite()) {
            return Err(Error::Input("growth series counts must be finite and nonnegative".into()));
        }
        Ok(GrowthSeries { index, counts })
    }

    pub fn from_integers(start: i64, counts: &[f64]) -> Self {
        let index = (0..counts.len()).map(|i| (start + i as i64) as f64).collect();
        GrowthSeries { index, counts: counts.to_vec() }
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }
}

/// Outcome of a rate or degree fit.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RateFit {
    /// Base-2 exponential rate, or polynomial degree for `poly_degree_fit`.
    pub rate: f64,
    /// Index window actually used by the least-squares fit.
    pub window: (f64, f64),
    /// Root-mean-square residual of the fit in log2 space.
    pub residual: f64,
    pub kind: FitKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FitKind {
    Exponential,
    Polynomial,
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    let intercept = my - slope * mx;
    let mut rss = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        let e = y - (slope * x + intercept);
        rss += e * e;
    }
    (slope, intercept, (rss / n).sqrt())
}

/// Least-squares slope of log2(count) against index over the top half of the
/// range. Zero counts are dropped (log+ convention); an all-zero tail fits
/// rate 0.
pub fn exp_growth_rate(series: &GrowthSeries) -> Result<RateFit, Error> {
    let pts: Vec<(f64, f64)> = series
        .index
        .iter()
        .zip(&series.counts)
        .filter(|(_, &c)| c > 0.0)
        .map(|(&i, &c)| (i, c.log2()))
        .collect();
    if pts.is_empty() {
        return Ok(RateFit { rate: 0.0, window: (0.0, 0.0), residual: 0.0, kind: FitKind::Exponential });
    }
    let lo = pts[0].0;
    let hi = pts[pts.len() - 1].0;
    let cut = hi - (hi - lo) / 2.0;
    let tail: Vec<(f64, f64)> = pts.iter().copied().filter(|&(x, _)| x >= cut).collect();
    let tail = if tail.len() >= 4 { tail } else { pts.clone() };
    if tail.len() < 4 {
        return Err(Error::Input(format!(
            "exp_growth_rate needs at least 4 positive points, got {}",
            tail.len()
        )));
    }
    let xs: Vec<f64> = tail.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = tail.iter().map(|p| p.1).collect();
    let (slope, _, residual) = least_squares(&xs, &ys);
    Ok(RateFit {
        rate: slope.max(0.0),
        window: (xs[0], xs[xs.len() - 1]),
        residual,
        kind: FitKind::Exponential,
    })
}

/// Slope of log2(count) against log2(index) over the tail; nonpositive counts
/// in the tail are dropped.
pub fn poly_degree_fit(series: &GrowthSeries) -> Result<RateFit, Error> {
    if series.len() < 6 {
        return Err(Error::Input("poly_degree_fit needs at least 6 points".into()));
    }
    let pts: Vec<(f64, f64)> = series
        .index
        .iter()
        .zip(&series.counts)
        .filter(|(&i, &c)| i > 0.0 && c > 0.0)
        .map(|(&i, &c)| (i.log2(), c.log2()))
        .collect();
    if pts.len() < 4 {
        // constant-or-sparser series: degree 0
        return Ok(RateFit { rate: 0.0, window: (0.0, 0.0), residual: 0.0, kind: FitKind::Polynomial });
    }
    let lo = pts[0].0;
    let hi = pts[pts.len() - 1].0;
    let cut = hi - (hi - lo) / 2.0;
    let tail: Vec<(f64, f64)> = pts.iter().copied().filter(|&(x, _)| x >= cut).collect();
    let tail = if tail.len() >= 4 { tail } else { pts };
    let xs: Vec<f64> = tail.iter().map(|p| p.0).collect();
    let ys: Vec<f64> = tail.iter().map(|p| p.1).collect();
    let (slope, _, residual) = least_squares(&xs, &ys);
    Ok(RateFit {
        rate: slope,
        window: (xs[0].exp2(), xs[xs.len() - 1].exp2()),
        residual,
        kind: FitKind::Polynomial,
    })
}

/// Certificate that a count series stays under `C_n * k^n + C_0`.
///
/// Constants are fitted on the first half of the series and the bound is then
/// checked on the whole range with 10% multiplicative headroom plus a small
/// additive slack; a genuinely exponential series blows through the verified
/// tail while any degree-n series stays inside.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub degree: u32,
    pub c_n: f64,
    pub c_0: f64,
    pub pass: bool,
    pub max_violation: f64,
}

pub fn certify_poly_bound(series: &GrowthSeries, degree: u32) -> Result<BoundCertificate, Error> {
    if series.len() < 6 {
        return Err(Error::Input("certify_poly_bound needs at least 6 points".into()));
    }
    let mid = series.len() / 2;
    let powers: Vec<f64> = series.index.iter().map(|&k| k.powi(degree as i32)).collect();
    // least squares on the training prefix
    let (slope, intercept, _) = least_squares(&powers[..mid], &series.counts[..mid]);
    let c_n = slope.max(0.0);
    let mut c_0 = intercept.max(0.0);
    // inflate so the prefix itself is covered exactly
    let prefix_gap = (0..mid)
        .map(|i| series.counts[i] - (c_n * powers[i] + c_0))
        .fold(0.0f64, f64::max);
    c_0 += prefix_gap.max(0.0);
    if c_n == 0.0 && c_0 == 0.0 {
        c_0 = 1.0;
    }
    let mut max_violation = 0.0f64;
    for i in 0..series.len() {
        let bound = 1.10 * (c_n * powers[i] + c_0) + 2.0;
        max_violation = max_violation.max(series.counts[i] - bound);
    }
    Ok(BoundCertificate { degree, c_n, c_0, pass: max_violation <= 0.0, max_violation })
}

/// Per-epsilon barcode growth rates plus the smallest-epsilon extrapolation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BarcodeEntropyReport {
    /// (epsilon, fitted rate) sorted by decreasing epsilon.
    pub per_eps: Vec<(f64, RateFit)>,
    /// Estimate at the smallest grid epsilon; the eps -> 0 limit is
    /// extrapolated by this convention and flagged as such.
    pub value: f64,
    pub monotone: bool,
    pub diagnostics: Vec<String>,
}

/// Fit the growth rate of `b_eps` over a family of barcode counting functions.
///
/// `counts(eps) -> series` abstracts over pinned and unpinned barcodes; the
/// caller supplies the counting closure.
pub fn barcode_entropy_from_counts(
    index: &[f64],
    eps_grid: &[f64],
    mut counts: impl FnMut(f64) -> Vec<f64>,
) -> Result<BarcodeEntropyReport, Error> {
    if index.len() < 4 {
        return Err(Error::Input("barcode entropy needs at least 4 barcodes".into()));
    }
    let mut eps_sorted: Vec<f64> = eps_grid.to_vec();
    eps_sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut per_eps = Vec::new();
    for &eps in &eps_sorted {
        if eps <= 0.0 {
            return Err(Error::Input("epsilon grid must be positive".into()));
        }
        let series = GrowthSeries::new(index.to_vec(), counts(eps))?;
        per_eps.push((eps, exp_growth_rate(&series)?));
    }
    let mut monotone = true;
    for w in per_eps.windows(2) {
        // rate must be nondecreasing as eps decreases, up to fit slack
        if w[1].1.rate + 1e-6 + w[1].1.residual + w[0].1.residual < w[0].1.rate {
            monotone = false;
        }
    }
    let value = per_eps.last().map(|p| p.1.rate).unwrap_or(0.0);
    Ok(BarcodeEntropyReport {
        per_eps,
        value,
        monotone,
        diagnostics: vec!["extrapolation: value taken at smallest grid epsilon".into()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_exponential_recovered() {
        let counts: Vec<f64> = (0..20).map(|k| 3.0 * (2.0f64).powi(k)).collect();
        let fit = exp_growth_rate(&GrowthSeries::from_integers(0, &counts)).unwrap();
        assert!((fit.rate - 1.0).abs() < 1e-9, "rate {}", fit.rate);
        assert!(fit.residual < 1e-9);
    }

    #[test]
    fn polynomial_series_fits_rate_near_zero() {
        let counts: Vec<f64> = (1..=200).map(|k| (k * k) as f64).collect();
        let fit = exp_growth_rate(&GrowthSeries::from_integers(1, &counts)).unwrap();
        assert!(fit.rate <= 0.05, "rate {}", fit.rate);
    }

    #[test]
    fn planted_rates_recovered_within_5_percent() {
        for &rho in &[0.5, 1.0, 1.5] {
            let counts: Vec<f64> =
                (1..=40).map(|k| (1.7 * (2.0f64).powf(rho * k as f64)).floor()).collect();
            let fit = exp_growth_rate(&GrowthSeries::from_integers(1, &counts)).unwrap();
            assert!((fit.rate - rho).abs() / rho < 0.05, "rho {rho} got {}", fit.rate);
        }
    }

    #[test]
    fn degrees_recovered() {
        let lin: Vec<f64> = (1..=100).map(|k| (2 * k + 1) as f64).collect();
        let fit = poly_degree_fit(&GrowthSeries::from_integers(1, &lin)).unwrap();
        assert!((fit.rate - 1.0).abs() < 0.05, "degree {}", fit.rate);

        let pis: Vec<f64> = (1..=100).map(|k| (std::f64::consts::PI * k as f64).floor()).collect();
        let fit = poly_degree_fit(&GrowthSeries::from_integers(1, &pis)).unwrap();
        assert!((fit.rate - 1.0).abs() < 0.05);

        let con: Vec<f64> = (1..=100).map(|_| 7.0).collect();
        let fit = poly_degree_fit(&GrowthSeries::from_integers(1, &con)).unwrap();
        assert!(fit.rate.abs() < 0.05);
    }

    #[test]
    fn all_zero_series_rate_zero() {
        let fit = exp_growth_rate(&GrowthSeries::from_integers(0, &[0.0; 10])).unwrap();
        assert_eq!(fit.rate, 0.0);
    }

    #[test]
    fn scaling_doubles_rate() {
        // count(2k) has twice the rate of count(k) for exact exponentials
        let counts: Vec<f64> = (0..24).map(|k| (2.0f64).powf(0.5 * k as f64)).collect();
        let base = exp_growth_rate(&GrowthSeries::from_integers(0, &counts)).unwrap();
        let sub: Vec<f64> = (0..12).map(|k| counts[2 * k]).collect();
        let dbl = exp_growth_rate(&GrowthSeries::from_integers(0, &sub)).unwrap();
        assert!((dbl.rate - 2.0 * base.rate).abs() < 1e-9);
    }

    #[test]
    fn certificate_accepts_linear_rejects_exponential() {
        let lin: Vec<f64> = (1..=60).map(|k| (2 * k + 1) as f64).collect();
        let cert = certify_poly_bound(&GrowthSeries::from_integers(1, &lin), 1).unwrap();
        assert!(cert.pass);

        let exp: Vec<f64> = (1..=60).map(|k| (2.0f64).powi(k)).collect();
        for n in [0, 1, 2, 3] {
            let cert = certify_poly_bound(&GrowthSeries::from_integers(1, &exp), n).unwrap();
            assert!(!cert.pass, "degree {n} certificate should fail on 2^k");
        }
    }

    #[test]
    fn too_few_points_is_an_error() {
        let s = GrowthSeries::from_integers(0, &[1.0, 2.0, 4.0]);
        assert!(exp_growth_rate(&s).is_err());
    }

    #[test]
    fn constant_barcode_family_has_zero_entropy() {
        let index: Vec<f64> = (1..=10).map(|k| k as f64).collect();
        let report =
            barcode_entropy_from_counts(&index, &[0.5, 0.25], |_| vec![7.0; 10]).unwrap();
        assert_eq!(report.value, 0.0);
        assert!(report.monotone);
    }

    #[test]
    fn synthetic_doubling_family_has_unit_entropy() {
        // 2^k bars of length 1 at index k
        let index: Vec<f64> = (1..=12).map(|k| k as f64).collect();
        let report = barcode_entropy_from_counts(&index, &[0.5], |eps| {
            index.iter().map(|&k| if eps < 1.0 { (2.0f64).powf(k) } else { 0.0 }).collect()
        })
        .unwrap();
        assert!((report.value - 1.0).abs() < 0.05, "value {}", report.value);
    }
}
