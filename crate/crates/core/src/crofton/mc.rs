//! Monte Carlo Crofton integral with the inequality check.

use super::density::pushforward_density;
use super::{curve_intersections, Polyline, Tomograph};
use crate::error::Error;
use crate::rng::Stream;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CroftonReport {
    /// Monte Carlo estimate of the parameter integral of N(xi).
    pub integral: f64,
    pub stderr: f64,
    /// Computed bound constant: the maximum of the estimated push-forward
    /// density over the tomograph support, with discretization headroom.
    #[serde(rename = "const")]
    pub constant: f64,
    /// Length of the target curve.
    pub volume: f64,
    /// Both checks together.
    pub pass: bool,
    /// integral <= constant * volume within 3 standard errors.
    pub inequality_pass: bool,
    /// |MC integral - density integral| <= 3 combined standard errors.
    pub formula_gap: f64,
    pub formula_tolerance: f64,
    pub formula_pass: bool,
    pub nontransverse_rate: f64,
    pub samples: usize,
}

/// Monte Carlo estimate of the Crofton integral of a tomograph against a
/// target polyline, with the inequality constant computed from the estimated
/// push-forward density (never assumed). Sampling is sharded with per-shard
/// substreams and folded in shard order, so results are reproducible under
/// any parallel schedule.
pub fn crofton_mc(
    t: &Tomograph,
    target: &Polyline,
    samples: usize,
    seed: u64,
) -> Result<CroftonReport, Error> {
    if samples < 1000 {
        return Err(Error::Input("crofton_mc needs at least 1000 samples".into()));
    }
    if target.space != t.space {
        return Err(Error::Input("target must live in the tomograph's model space".into()));
    }
    let shards = 64usize;
    let per = samples.div_ceil(shards);
    let measure = t.param.measure();

    struct Shard {
        sum: f64,
        sum2: f64,
        n: usize,
        rejected: usize,
    }
    let results: Vec<Shard> = (0..shards)
        .into_par_iter()
        .map(|s| {
            let mut rng = Stream::named(seed, &format!("crofton.mc.shard{s}"));
            let mut sum = 0.0;
            let mut sum2 = 0.0;
            let mut n = 0usize;
            let mut rejected = 0usize;
            for _ in 0..per {
                let xi = t.param.sample(&mut rng);
                match curve_intersections(&t.curve_at(&xi), target) {
                    Ok(c) => {
                        sum += c as f64;
                        sum2 += (c * c) as f64;
                        n += 1;
                    }
                    Err(_) => rejected += 1,
                }
            }
            Shard { sum, sum2, n, rejected }
        })
        .collect();

    let mut sum = 0.0;
    let mut sum2 = 0.0;
    let mut n = 0usize;
    let mut rejected = 0usize;
    for s in &results {
        sum += s.sum;
        sum2 += s.sum2;
        n += s.n;
        rejected += s.rejected;
    }
    let total = n + rejected;
    let nontransverse_rate = rejected as f64 / total.max(1) as f64;
    if nontransverse_rate > 0.01 {
        return Err(Error::Input(format!(
            "family violates almost-everywhere transversality: {:.2}% of samples rejected",
            nontransverse_rate * 100.0
        )));
    }
    let mean = sum / n as f64;
    let var = (sum2 / n as f64 - mean * mean).max(0.0);
    let integral = mean * measure;
    let stderr = (var / n as f64).sqrt() * measure;

    // density on the support, reused for the bound constant and the formula
    let density = pushforward_density(t, 40, 16, (samples / 4).max(10_000), seed ^ 0x9e37)?;
    let volume = target.length();
    let constant = density.max_value() * 1.25 + 1e-9;
    let inequality_pass = integral <= constant * volume + 3.0 * stderr;

    let (den_integral, den_stderr) = density.integrate_with_error(target);
    let formula_gap = (integral - den_integral).abs();
    let formula_tolerance = 3.0 * (stderr + den_stderr) + 1e-3 * integral.abs().max(1.0);
    let formula_pass = formula_gap <= formula_tolerance;

    Ok(CroftonReport {
        integral,
        stderr,
        constant,
        volume,
        pass: inequality_pass && formula_pass,
        inequality_pass,
        formula_gap,
        formula_tolerance,
        formula_pass,
        nontransverse_rate,
        samples: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crofton::{circle_polyline, Space};

    #[test]
    fn cauchy_crofton_for_a_unit_segment() {
        // integral of N over lines = 2 * length
        let t = Tomograph::lines(2.0, 4.0);
        let target = Polyline::open(Space::Plane, vec![[-0.5, 0.0], [0.5, 0.0]]);
        let r = crofton_mc(&t, &target, 200_000, 42).unwrap();
        assert!((r.integral - 2.0).abs() < 0.03, "integral {}", r.integral);
        assert!(r.inequality_pass);
        assert!(r.formula_pass, "gap {} tol {}", r.formula_gap, r.formula_tolerance);
    }

    #[test]
    fn cauchy_crofton_for_the_unit_circle() {
        let t = Tomograph::lines(2.0, 4.0);
        let target = circle_polyline([0.0, 0.0], 1.0, 512);
        let r = crofton_mc(&t, &target, 400_000, 7).unwrap();
        let expect = 4.0 * std::f64::consts::PI;
        assert!((r.integral - expect).abs() / expect < 0.02, "integral {}", r.integral);
        assert!(r.inequality_pass);
    }

    #[test]
    fn linearity_in_target_length() {
        let t = Tomograph::lines(2.0, 4.0);
        let one = Polyline::open(Space::Plane, vec![[-0.5, 0.3], [0.5, 0.3]]);
        let two = Polyline::open(Space::Plane, vec![[-1.0, 0.3], [1.0, 0.3]]);
        let r1 = crofton_mc(&t, &one, 120_000, 3).unwrap();
        let r2 = crofton_mc(&t, &two, 120_000, 3).unwrap();
        let ratio = r2.integral / r1.integral;
        assert!((ratio - 2.0).abs() < 0.05, "ratio {ratio}");
    }

    #[test]
    fn degenerate_family_is_rejected() {
        // all family members coincide with the target line: every sample is a
        // collinear overlap
        let core = Polyline::open(Space::Plane, vec![[-2.0, 0.0], [2.0, 0.0]]);
        let fam = core.clone();
        let t = Tomograph::custom(
            Space::Plane,
            crate::crofton::ParamDomain::Ball { dim: 2, radius: 0.5 },
            core,
            move |_| fam.clone(),
        );
        let target = Polyline::open(Space::Plane, vec![[-1.0, 0.0], [1.0, 0.0]]);
        assert!(crofton_mc(&t, &target, 2000, 1).is_err());
    }

    #[test]
    fn zero_length_target() {
        let t = Tomograph::lines(2.0, 4.0);
        let target = Polyline::open(Space::Plane, vec![[0.25, 0.25]]);
        let r = crofton_mc(&t, &target, 2000, 1).unwrap();
        assert_eq!(r.integral, 0.0);
        assert_eq!(r.volume, 0.0);
    }
}
