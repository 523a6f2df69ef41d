//! Arclength growth of iterated curves, with adaptive refinement.

use super::{circle_dist, DynamicalSystem, Point};
use crate::error::Error;
use crate::growth::{exp_growth_rate, GrowthSeries, RateFit};

#[derive(Clone, Debug)]
pub struct VolumeGrowth {
    pub lengths: GrowthSeries,
    pub rate: RateFit,
    /// true when the refinement budget was exhausted and the lengths are
    /// lower bounds
    pub budget_exhausted: bool,
}

fn t2(p: &Point) -> [f64; 2] {
    match p {
        Point::T2(v) => *v,
        _ => panic!("volume growth works on torus curves"),
    }
}

fn seg_len(a: [f64; 2], b: [f64; 2]) -> f64 {
    let dx = circle_dist(a[0], b[0]);
    let dy = circle_dist(a[1], b[1]);
    (dx * dx + dy * dy).sqrt()
}

fn torus_midpoint(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    let mx = a[0] + super::wrapped_diff(b[0], a[0]) / 2.0;
    let my = a[1] + super::wrapped_diff(b[1], a[1]) / 2.0;
    [super::wrap(mx), super::wrap(my)]
}

/// The system acting on the curve's ambient torus: 2D systems act directly,
/// 1D systems act on graphs (x, y) -> (x, phi(y)).
fn apply_ambient(sys: &DynamicalSystem, p: [f64; 2]) -> [f64; 2] {
    match sys.space_dim() {
        2 => t2(&sys.apply(&Point::T2(p))),
        1 => {
            let Point::S1(y) = sys.apply(&Point::S1(p[1])) else { unreachable!() };
            [p[0], y]
        }
        _ => panic!("volume growth is defined for circle and torus systems"),
    }
}

/// Arclength of phi^k(curve) for k over the range, with adaptive subdivision:
/// a segment is split while its image chord deviates from the imaged midpoint
/// or stays longer than the sampling scale. 1D systems are measured in graph
/// mode, so the identity curve yields the graph volume of eq-style growth.
pub fn volume_growth(
    sys: &DynamicalSystem,
    curve: &[[f64; 2]],
    k_max: usize,
    tol: f64,
    max_points: usize,
) -> Result<VolumeGrowth, Error> {
    if curve.len() < 2 {
        return Err(Error::Input("volume growth needs a curve with at least 2 points".into()));
    }
    if k_max < 4 {
        return Err(Error::Input("volume growth needs k_max >= 4".into()));
    }
    let mut pts: Vec<[f64; 2]> = curve.to_vec();
    let mut lengths = Vec::with_capacity(k_max + 1);
    let mut exhausted = false;
    lengths.push(pts.windows(2).map(|w| seg_len(w[0], w[1])).sum::<f64>());
    for _k in 1..=k_max {
        // refine until every image segment is short and midpoint-accurate
        loop {
            let mut refined = Vec::with_capacity(pts.len() * 2);
            let mut inserted = 0usize;
            for w in pts.windows(2) {
                let (a, b) = (w[0], w[1]);
                refined.push(a);
                if refined.len() + inserted >= max_points {
                    continue;
                }
                let ia = apply_ambient(sys, a);
                let ib = apply_ambient(sys, b);
                let mid = torus_midpoint(a, b);
                let imid = apply_ambient(sys, mid);
                let chord_mid = torus_midpoint(ia, ib);
                let too_long = seg_len(ia, ib) > 0.2;
                let bent = seg_len(imid, chord_mid) > tol;
                if (too_long || bent) && seg_len(a, b) > 1e-9 {
                    refined.push(mid);
                    inserted += 1;
                }
            }
            refined.push(*pts.last().unwrap());
            let done = inserted == 0;
            if refined.len() >= max_points {
                exhausted = true;
            }
            pts = refined;
            if done || exhausted {
                break;
            }
        }
        pts = pts.iter().map(|&p| apply_ambient(sys, p)).collect();
        lengths.push(pts.windows(2).map(|w| seg_len(w[0], w[1])).sum::<f64>());
    }
    let series = GrowthSeries::from_integers(0, &lengths);
    let rate = exp_growth_rate(&series)?;
    Ok(VolumeGrowth { lengths: series, rate, budget_exhausted: exhausted })
}

/// The diagonal-like parameter curve used for graph volume of 1D systems.
pub fn graph_curve(samples: usize) -> Vec<[f64; 2]> {
    (0..=samples).map(|i| [i as f64 / samples as f64 * (1.0 - 1e-9), i as f64 / samples as f64 * (1.0 - 1e-9)]).collect()
}

/// A segment through the origin in the given direction, for unstable-manifold
/// sweeps of linear maps.
pub fn segment(dir: [f64; 2], len: f64, samples: usize) -> Vec<[f64; 2]> {
    let n = (dir[0] * dir[0] + dir[1] * dir[1]).sqrt();
    (0..=samples)
        .map(|i| {
            let t = len * i as f64 / samples as f64;
            [super::wrap(t * dir[0] / n), super::wrap(t * dir[1] / n)]
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isometry_lengths_stay_constant() {
        let rot = DynamicalSystem::Rotation { alpha: 0.137 };
        let curve = graph_curve(64);
        let vg = volume_growth(&rot, &curve, 8, 1e-4, 1 << 16).unwrap();
        let first = vg.lengths.counts[0];
        for &l in &vg.lengths.counts {
            assert!((l - first).abs() < 1e-6);
        }
        assert!(vg.rate.rate.abs() < 1e-6);
    }

    #[test]
    fn doubling_graph_grows_at_rate_one() {
        let dbl = DynamicalSystem::Doubling { m: 2 };
        let vg = volume_growth(&dbl, &graph_curve(256), 9, 1e-3, 1 << 18).unwrap();
        assert!((vg.rate.rate - 1.0).abs() < 0.06, "rate {}", vg.rate.rate);
    }

    #[test]
    fn exhausted_budget_is_flagged_as_lower_bound() {
        let dbl = DynamicalSystem::Doubling { m: 2 };
        let vg = volume_growth(&dbl, &graph_curve(16), 10, 1e-4, 64).unwrap();
        assert!(vg.budget_exhausted);
        assert!(vg.lengths.counts.iter().all(|&l| l > 0.0));
    }

    #[test]
    fn cat_unstable_segment_grows_at_log_lambda() {
        let cat = DynamicalSystem::cat_map();
        let lam = (3.0 + 5.0f64.sqrt()) / 2.0;
        // unstable direction of [[2,1],[1,1]]
        let dir = [1.0, lam - 2.0];
        let vg = volume_growth(&cat, &segment(dir, 0.3, 64), 8, 1e-3, 1 << 18).unwrap();
        let expect = lam.log2();
        assert!(
            (vg.rate.rate - expect).abs() / expect < 0.1,
            "rate {} expected {expect}",
            vg.rate.rate
        );
    }
}
