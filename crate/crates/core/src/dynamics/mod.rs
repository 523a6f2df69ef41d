//! Concrete dynamical systems with metrics: linear torus maps, circle
//! doubling and rotations, full shifts, and tabulated circle maps.
//!
//! Every builtin evaluator is deterministic; systems with exact structure
//! (integer matrices, degrees, alphabets) expose exact periodic counts next
//! to the generic estimators.

mod orbits;
mod packing;
mod volume;

pub use orbits::{periodic_count, periodic_count_brute, pseudo_orbit_defect, shadow_linear, ShadowResult};
pub use packing::{htop_estimate, orbit_growth_entropy, packing_numbers, EntropyEstimate, PackingPair};
pub use volume::{graph_curve, segment, volume_growth, VolumeGrowth};

use crate::error::Error;
use serde::{Deserialize, Serialize};

/// Circle distance on R/Z.
pub fn circle_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Wrap to [0, 1).
pub fn wrap(x: f64) -> f64 {
    x.rem_euclid(1.0)
}

/// Signed representative of a - b in [-1/2, 1/2).
pub fn wrapped_diff(a: f64, b: f64) -> f64 {
    let mut d = (a - b).rem_euclid(1.0);
    if d >= 0.5 {
        d -= 1.0;
    }
    d
}

/// A point of one of the model spaces.
#[derive(Clone, Debug, PartialEq)]
pub enum Point {
    S1(f64),
    T2([f64; 2]),
    /// Finite window of a two-sided sequence: letter at index i (relative to
    /// the origin position) is `letters[origin + i]`.
    Word { letters: Vec<u8>, origin: usize },
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DynamicalSystem {
    /// x -> A x on the flat 2-torus, A an integer matrix.
    LinearTorus { matrix: [[i64; 2]; 2] },
    /// x -> m x on the circle.
    Doubling { m: u32 },
    /// x -> x + alpha on the circle.
    Rotation { alpha: f64 },
    /// Two-sided full shift on the given alphabet, metric 2^(-first
    /// disagreement); points are finite windows, truncation below 2^-32.
    Shift { alphabet: u32 },
    /// Circle map tabulated at uniformly spaced sample points with linear
    /// interpolation of the lift.
    CustomGrid { samples: Vec<f64> },
}

impl DynamicalSystem {
    pub fn cat_map() -> Self {
        DynamicalSystem::LinearTorus { matrix: [[2, 1], [1, 1]] }
    }

    pub fn space_dim(&self) -> usize {
        match self {
            DynamicalSystem::LinearTorus { .. } => 2,
            DynamicalSystem::Shift { .. } => 0,
            _ => 1,
        }
    }

    pub fn apply(&self, p: &Point) -> Point {
        match (self, p) {
            (DynamicalSystem::LinearTorus { matrix }, Point::T2([x, y])) => {
                let m = matrix;
                Point::T2([
                    wrap(m[0][0] as f64 * x + m[0][1] as f64 * y),
                    wrap(m[1][0] as f64 * x + m[1][1] as f64 * y),
                ])
            }
            (DynamicalSystem::Doubling { m }, Point::S1(x)) => Point::S1(wrap(*m as f64 * x)),
            (DynamicalSystem::Rotation { alpha }, Point::S1(x)) => Point::S1(wrap(x + alpha)),
            (DynamicalSystem::Shift { .. }, Point::Word { letters, origin }) => {
                // the letter at index i of the image is the letter at i-1 of
                // the source, so the origin moves one slot to the right
                Point::Word { letters: letters.clone(), origin: origin + 1 }
            }
            (DynamicalSystem::CustomGrid { samples }, Point::S1(x)) => {
                Point::S1(wrap(interp_lift(samples, *x)))
            }
            _ => panic!("point does not belong to this system's space"),
        }
    }

    pub fn dist(&self, p: &Point, q: &Point) -> f64 {
        match (p, q) {
            (Point::S1(a), Point::S1(b)) => circle_dist(*a, *b),
            (Point::T2(a), Point::T2(b)) => {
                let dx = circle_dist(a[0], b[0]);
                let dy = circle_dist(a[1], b[1]);
                (dx * dx + dy * dy).sqrt()
            }
            (Point::Word { letters: la, origin: oa }, Point::Word { letters: lb, origin: ob }) => {
                // first disagreement around the origins, windows truncated
                let reach = 64usize;
                for j in 0..reach {
                    for s in [j as i64, -(j as i64)] {
                        let ia = *oa as i64 + s;
                        let ib = *ob as i64 + s;
                        let a = la.get(ia.max(0) as usize).copied();
                        let b = lb.get(ib.max(0) as usize).copied();
                        let (a, b) = match (ia >= 0, ib >= 0) {
                            (true, true) => (a, b),
                            _ => (None, None),
                        };
                        match (a, b) {
                            (Some(x), Some(y)) if x != y => {
                                return (2.0f64).powi(-(j as i32));
                            }
                            (None, _) | (_, None) => {
                                // outside both windows: treated as agreement
                            }
                            _ => {}
                        }
                    }
                }
                0.0
            }
            _ => panic!("points from different spaces"),
        }
    }

    /// Shadowing metric d_k = max over 0 <= i < k of d(phi^i x, phi^i y).
    pub fn dk_distance(&self, x: &Point, y: &Point, k: usize) -> Result<f64, Error> {
        if k < 1 {
            return Err(Error::Input("dk_distance needs k >= 1".into()));
        }
        let mut a = x.clone();
        let mut b = y.clone();
        let mut best = self.dist(&a, &b);
        for _ in 1..k {
            a = self.apply(&a);
            b = self.apply(&b);
            best = best.max(self.dist(&a, &b));
        }
        Ok(best)
    }

    /// Exact structure marker used by periodic counting.
    pub fn has_exact_structure(&self) -> bool {
        !matches!(self, DynamicalSystem::CustomGrid { .. } | DynamicalSystem::Rotation { .. })
    }
}

/// Piecewise-linear interpolation of the lift of a tabulated circle map.
fn interp_lift(samples: &[f64], x: f64) -> f64 {
    let n = samples.len();
    assert!(n >= 2, "custom grid needs at least 2 samples");
    let t = wrap(x) * n as f64;
    let i = (t as usize).min(n - 1);
    let frac = t - i as f64;
    let a = samples[i];
    let b = if i + 1 < n { samples[i + 1] } else { samples[0] + 1.0 };
    a + (b - a) * frac
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_metric() {
        assert!((circle_dist(0.1, 0.9) - 0.2).abs() < 1e-12);
        assert_eq!(circle_dist(0.25, 0.25), 0.0);
    }

    #[test]
    fn dk_for_identity_like_isometry_is_d() {
        let rot = DynamicalSystem::Rotation { alpha: 0.3127 };
        let (x, y) = (Point::S1(0.1), Point::S1(0.4));
        let d1 = rot.dist(&x, &y);
        for k in 1..6 {
            assert!((rot.dk_distance(&x, &y, k).unwrap() - d1).abs() < 1e-12);
        }
    }

    #[test]
    fn doubling_dk_hand_computation() {
        // x = 0, y = 1/8, k = 3: distances 1/8, 1/4, 1/2
        let dbl = DynamicalSystem::Doubling { m: 2 };
        let d = dbl.dk_distance(&Point::S1(0.0), &Point::S1(0.125), 3).unwrap();
        assert!((d - 0.5).abs() < 1e-12);
    }

    #[test]
    fn dk_nondecreasing_in_k() {
        let cat = DynamicalSystem::cat_map();
        let x = Point::T2([0.123, 0.456]);
        let y = Point::T2([0.125, 0.457]);
        let mut prev = 0.0;
        for k in 1..14 {
            let d = cat.dk_distance(&x, &y, k).unwrap();
            assert!(d >= prev - 1e-15);
            prev = d;
        }
    }

    #[test]
    fn exact_structure_agrees_with_numeric_evaluation() {
        // f64 evaluation matches exact rational arithmetic on 10^4 points
        let cat = DynamicalSystem::cat_map();
        let dbl = DynamicalSystem::Doubling { m: 2 };
        let mut rng = crate::rng::Stream::named(9, "test.exact.structure");
        let q = 1 << 20;
        for _ in 0..10_000 {
            let (i, j) = (rng.below(q) as i64, rng.below(q) as i64);
            let p = Point::T2([i as f64 / q as f64, j as f64 / q as f64]);
            let Point::T2([x, y]) = cat.apply(&p) else { unreachable!() };
            let ex = (2 * i + j).rem_euclid(q as i64) as f64 / q as f64;
            let ey = (i + j).rem_euclid(q as i64) as f64 / q as f64;
            assert!((x - ex).abs() < 1e-12 && (y - ey).abs() < 1e-12);

            let Point::S1(d) = dbl.apply(&Point::S1(i as f64 / q as f64)) else { unreachable!() };
            assert!((d - (2 * i).rem_euclid(q as i64) as f64 / q as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn shift_metric_and_dynamics() {
        let shift = DynamicalSystem::Shift { alphabet: 2 };
        let w = |letters: Vec<u8>, origin: usize| Point::Word { letters, origin };
        // differ at relative index 0
        let a = w(vec![0, 1, 0, 1], 1);
        let b = w(vec![0, 0, 0, 1], 1);
        assert_eq!(shift.dist(&a, &b), 1.0);
        // differ first at relative index +2
        let c = w(vec![0, 1, 0, 1], 1);
        let d = w(vec![0, 1, 0, 0], 1);
        assert_eq!(shift.dist(&c, &d), 0.25);
        // shifting moves the disagreement closer
        let c1 = shift.apply(&c);
        let d1 = shift.apply(&d);
        assert_eq!(shift.dist(&c1, &d1), 0.5);
    }
}
