//! Tomographs and Crofton-type computations at desk scale.
//!
//! A tomograph is a measured family of embedded curves; Monte Carlo
//! integration of the intersection count N(xi) against the parameter measure
//! gives the left side of Crofton's inequality and formula, and binned
//! Jacobian-free accumulation of the sampled curves estimates the
//! push-forward density on the right side.

mod density;
mod geometry;
mod mc;

pub use density::{pushforward_density, Density2D};
pub use geometry::{circle_polyline, curve_intersections, Polyline, Space};
pub use mc::{crofton_mc, CroftonReport};

use crate::error::Error;
use crate::rng::Stream;

/// Parameter domain with its uniform measure.
#[derive(Clone, Debug)]
pub enum ParamDomain {
    Ball { dim: usize, radius: f64 },
    Rect { ranges: Vec<(f64, f64)> },
}

impl ParamDomain {
    pub fn dim(&self) -> usize {
        match self {
            ParamDomain::Ball { dim, .. } => *dim,
            ParamDomain::Rect { ranges } => ranges.len(),
        }
    }

    pub fn measure(&self) -> f64 {
        match self {
            ParamDomain::Ball { dim, radius } => ball_volume(*dim, *radius),
            ParamDomain::Rect { ranges } => ranges.iter().map(|(a, b)| b - a).product(),
        }
    }

    pub fn sample(&self, rng: &mut Stream) -> Vec<f64> {
        match self {
            ParamDomain::Ball { dim, radius } => loop {
                let xi: Vec<f64> = (0..*dim).map(|_| rng.range_f64(-radius, *radius)).collect();
                if xi.iter().map(|x| x * x).sum::<f64>() <= radius * radius {
                    return xi;
                }
            },
            ParamDomain::Rect { ranges } => {
                ranges.iter().map(|&(a, b)| rng.range_f64(a, b)).collect()
            }
        }
    }
}

fn ball_volume(dim: usize, r: f64) -> f64 {
    match dim {
        0 => 1.0,
        1 => 2.0 * r,
        2 => std::f64::consts::PI * r * r,
        n => ball_volume(n - 2, r) * std::f64::consts::TAU * r * r / n as f64,
    }
}

/// A measured family of embedded curves over a parameter domain.
pub struct Tomograph {
    pub space: Space,
    pub param: ParamDomain,
    pub core: Polyline,
    family: Box<dyn Fn(&[f64]) -> Polyline + Sync + Send>,
}

impl Tomograph {
    pub fn custom(
        space: Space,
        param: ParamDomain,
        core: Polyline,
        family: impl Fn(&[f64]) -> Polyline + Sync + Send + 'static,
    ) -> Tomograph {
        Tomograph { space, param, core, family: Box::new(family) }
    }

    pub fn curve_at(&self, xi: &[f64]) -> Polyline {
        (self.family)(xi)
    }

    /// Classical line family in the plane: parameters (p, theta) with the
    /// line {x cos(theta) + y sin(theta) = p} clipped to a long segment.
    pub fn lines(p_max: f64, clip: f64) -> Tomograph {
        let core = Polyline::open(Space::Plane, vec![[-clip, 0.0], [clip, 0.0]]);
        Tomograph {
            space: Space::Plane,
            param: ParamDomain::Rect {
                ranges: vec![(-p_max, p_max), (0.0, std::f64::consts::PI)],
            },
            core,
            family: Box::new(move |xi| {
                let (p, th) = (xi[0], xi[1]);
                let (c, s) = (th.cos(), th.sin());
                Polyline::open(
                    Space::Plane,
                    vec![
                        [p * c - clip * s, p * s + clip * c],
                        [p * c + clip * s, p * s - clip * c],
                    ],
                )
            }),
        }
    }

    /// Translates of a core curve on the torus over a small disk of offsets.
    pub fn translations(core: Polyline, radius: f64) -> Tomograph {
        assert_eq!(core.space, Space::Torus);
        let c = core.clone();
        Tomograph {
            space: Space::Torus,
            param: ParamDomain::Ball { dim: 2, radius },
            core,
            family: Box::new(move |xi| c.translate([xi[0], xi[1]])),
        }
    }

    /// Graphs of derivatives of trigonometric functions on the cylinder
    /// T*S^1: the core is the zero section and the family comes from the
    /// standard immersion of the circle extended by higher harmonics.
    pub fn cylinder_graphs(d: usize, radius: f64, theta_samples: usize) -> Result<Tomograph, Error> {
        if d < 2 {
            return Err(Error::Input(
                "the circle admits no suitable immersion into R^1; need d >= 2".into(),
            ));
        }
        let graph = move |xi: &[f64]| -> Polyline {
            let pts = (0..theta_samples)
                .map(|i| {
                    let th = std::f64::consts::TAU * i as f64 / theta_samples as f64;
                    let mut p = 0.0;
                    for (j, &c) in xi.iter().enumerate() {
                        // basis g = (cos th, sin th, cos 2th, sin 2th, ...)
                        let h = (j / 2 + 1) as f64;
                        p += if j % 2 == 0 { -c * h * (h * th).sin() } else { c * h * (h * th).cos() };
                    }
                    [th, p]
                })
                .collect();
            Polyline::closed(Space::Cylinder, pts)
        };
        let t = Tomograph {
            space: Space::Cylinder,
            param: ParamDomain::Ball { dim: d, radius },
            core: graph(&vec![0.0; d]),
            family: Box::new(graph),
        };
        t.check_submersion()?;
        Ok(t)
    }

    /// Sampled rank check of the parameter-to-curve variation: at every theta
    /// of the core some parameter direction must move the curve transversally.
    fn check_submersion(&self) -> Result<(), Error> {
        let dim = self.param.dim();
        let h = 1e-5;
        let base = self.curve_at(&vec![0.0; dim]);
        for pi in 0..base.points.len() {
            let mut norm2 = 0.0;
            for j in 0..dim {
                let mut xi = vec![0.0; dim];
                xi[j] = h;
                let moved = self.curve_at(&xi);
                let dp = moved.points[pi][1] - base.points[pi][1];
                norm2 += (dp / h) * (dp / h);
            }
            if norm2 < 1e-12 {
                return Err(Error::Input(format!(
                    "family is not a submersion: curve point {pi} is immobile"
                )));
            }
        }
        Ok(())
    }
}

/// Graph of p = amp * sin(harmonic * theta) on the cylinder.
pub fn cylinder_sin_graph(amp: f64, harmonic: u32, samples: usize) -> Polyline {
    let pts = (0..samples)
        .map(|i| {
            let th = std::f64::consts::TAU * i as f64 / samples as f64;
            [th, amp * (harmonic as f64 * th).sin()]
        })
        .collect();
    Polyline::closed(Space::Cylinder, pts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_volumes() {
        assert!((ball_volume(2, 1.0) - std::f64::consts::PI).abs() < 1e-12);
        assert!((ball_volume(3, 2.0) - 4.0 / 3.0 * std::f64::consts::PI * 8.0).abs() < 1e-9);
    }

    #[test]
    fn cylinder_family_needs_two_parameters() {
        assert!(Tomograph::cylinder_graphs(1, 0.5, 64).is_err());
        let t = Tomograph::cylinder_graphs(2, 0.5, 64).unwrap();
        // core is the zero section
        assert!(t.core.points.iter().all(|p| p[1] == 0.0));
        // family members are graphs of -xi1 sin + xi2 cos
        let c = t.curve_at(&[0.3, -0.2]);
        for (i, p) in c.points.iter().enumerate() {
            let th = std::f64::consts::TAU * i as f64 / 64.0;
            let expect = -0.3 * th.sin() - 0.2 * th.cos();
            assert!((p[1] - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn even_intersection_counts_with_transverse_graphs() {
        // graphs over the same circle intersect an even number of times when
        // transverse (difference of graphs winds around zero)
        let t = Tomograph::cylinder_graphs(2, 0.6, 256).unwrap();
        let target = cylinder_sin_graph(0.3, 2, 256);
        let mut rng = crate::rng::Stream::named(5, "test.cylinder.even");
        let mut seen_positive = false;
        for _ in 0..60 {
            let xi = t.param.sample(&mut rng);
            if let Ok(n) = curve_intersections(&t.curve_at(&xi), &target) {
                assert_eq!(n % 2, 0, "odd intersection count {n}");
                seen_positive |= n >= 2;
            }
        }
        assert!(seen_positive);
    }
}
