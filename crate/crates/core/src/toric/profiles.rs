//! Convex moment-map profiles and semi-admissible radial Hamiltonians.

use crate::error::Error;

/// Smooth convex function on an interval, with its derivative; the convexity
/// certificate is a sampled second-difference check.
pub struct ConvexProfile1D {
    pub domain: (f64, f64),
    h: Box<dyn Fn(f64) -> f64 + Sync + Send>,
    dh: Box<dyn Fn(f64) -> f64 + Sync + Send>,
}

impl ConvexProfile1D {
    pub fn new(
        domain: (f64, f64),
        h: impl Fn(f64) -> f64 + Sync + Send + 'static,
        dh: impl Fn(f64) -> f64 + Sync + Send + 'static,
    ) -> Result<Self, Error> {
        if !(domain.0 < domain.1) {
            return Err(Error::Input("profile domain must be a nonempty interval".into()));
        }
        let p = ConvexProfile1D { domain, h: Box::new(h), dh: Box::new(dh) };
        p.certify_convexity(1000)?;
        Ok(p)
    }

    pub fn power(coef: f64, exponent: i32, domain: (f64, f64)) -> Result<Self, Error> {
        ConvexProfile1D::new(
            domain,
            move |x| coef * x.powi(exponent),
            move |x| coef * exponent as f64 * x.powi(exponent - 1),
        )
    }

    pub fn h(&self, x: f64) -> f64 {
        (self.h)(x)
    }

    pub fn dh(&self, x: f64) -> f64 {
        (self.dh)(x)
    }

    fn certify_convexity(&self, samples: usize) -> Result<(), Error> {
        let (a, b) = self.domain;
        let step = (b - a) / samples as f64;
        for i in 1..samples {
            let x = a + i as f64 * step;
            let dd = self.h(x - step) - 2.0 * self.h(x) + self.h(x + step);
            if dd < -1e-9 * step.max(1.0) {
                return Err(Error::Input(format!(
                    "convexity certificate failed at x = {x} (second difference {dd})"
                )));
            }
        }
        Ok(())
    }

    /// Rational tori per face for the k-th iterate: integers p with
    /// p/k in the closed gradient range for the interior face, plus one fixed
    /// torus per endpoint vertex. Returns (interior, vertex_count, total).
    pub fn rational_tori_count(&self, k: u32) -> Result<(u64, u64, u64), Error> {
        if k == 0 {
            return Err(Error::Input("rational tori need k >= 1".into()));
        }
        let lo = self.dh(self.domain.0);
        let hi = self.dh(self.domain.1);
        if lo > hi {
            return Err(Error::Input("gradient is not monotone; profile not convex".into()));
        }
        let kf = k as f64;
        let pmin = (kf * lo - 1e-9).ceil() as i64;
        let pmax = (kf * hi + 1e-9).floor() as i64;
        let interior = (pmax - pmin + 1).max(0) as u64;
        Ok((interior, 2, interior + 2))
    }

    /// Sum over faces of 2^dim(F) * count_F(k): the Morse-Bott splitting
    /// bound on nondegenerate fixed points of the k-th iterate.
    pub fn fixed_point_bound(&self, k: u32) -> Result<u64, Error> {
        let (interior, vertices, _) = self.rational_tori_count(k)?;
        Ok(2 * interior + vertices)
    }

    /// Per-k brute scan of the gradient over a fine grid; counts the integer
    /// slopes reached, within one count of ties.
    pub fn rational_tori_brute(&self, k: u32, grid: usize) -> u64 {
        let (a, b) = self.domain;
        let kf = k as f64;
        let mut hits = std::collections::BTreeSet::new();
        for i in 0..=grid {
            let x = a + (b - a) * i as f64 / grid as f64;
            let v = kf * self.dh(x);
            let r = v.round();
            if (v - r).abs() < 0.51 * kf * (self.dh(b) - self.dh(a)).abs() / grid as f64
                || (v - r).abs() < 1e-9
            {
                if r >= kf * self.dh(a) - 1e-9 && r <= kf * self.dh(b) + 1e-9 {
                    hits.insert(r as i64);
                }
            }
        }
        hits.len() as u64
    }
}

/// Convex profile on an axis-aligned rectangle (the n = 2 moment polytope
/// kept exactly countable).
pub struct ConvexProfile2D {
    pub domain: ((f64, f64), (f64, f64)),
    grad: Box<dyn Fn([f64; 2]) -> [f64; 2] + Sync + Send>,
}

impl ConvexProfile2D {
    pub fn new(
        domain: ((f64, f64), (f64, f64)),
        grad: impl Fn([f64; 2]) -> [f64; 2] + Sync + Send + 'static,
    ) -> Self {
        ConvexProfile2D { domain, grad: Box::new(grad) }
    }

    /// Count of rational tori by face dimension: (interior, edges, vertices).
    /// Interior counting assumes a separable monotone gradient (each
    /// component depends monotonically on its own coordinate), which holds
    /// for the rectangle models used here.
    pub fn rational_tori_count(&self, k: u32) -> Result<(u64, u64, u64), Error> {
        if k == 0 {
            return Err(Error::Input("rational tori need k >= 1".into()));
        }
        let ((x0, x1), (y0, y1)) = self.domain;
        let kf = k as f64;
        let g00 = (self.grad)([x0, y0]);
        let g11 = (self.grad)([x1, y1]);
        let count_axis = |lo: f64, hi: f64| -> u64 {
            let (lo, hi) = (lo.min(hi), lo.max(hi));
            (((kf * hi + 1e-9).floor() - (kf * lo - 1e-9).ceil() + 1.0).max(0.0)) as u64
        };
        let nx = count_axis(g00[0], g11[0]);
        let ny = count_axis(g00[1], g11[1]);
        let interior = nx * ny;
        // four edges: 1D counts along the free coordinate
        let edges = 2 * nx + 2 * ny;
        Ok((interior, edges, 4))
    }

    pub fn fixed_point_bound(&self, k: u32) -> Result<u64, Error> {
        let (interior, edges, vertices) = self.rational_tori_count(k)?;
        Ok(4 * interior + 2 * edges + vertices)
    }
}

/// Radial profile of a semi-admissible Hamiltonian: h(1) = 0, convex and
/// increasing on [1, r_max], linear of the given slope beyond.
pub struct SemiAdmissibleProfile {
    pub r_max: f64,
    pub slope: f64,
    h: Box<dyn Fn(f64) -> f64 + Sync + Send>,
    dh: Box<dyn Fn(f64) -> f64 + Sync + Send>,
}

impl SemiAdmissibleProfile {
    pub fn new(
        r_max: f64,
        h: impl Fn(f64) -> f64 + Sync + Send + 'static,
        dh: impl Fn(f64) -> f64 + Sync + Send + 'static,
    ) -> Result<Self, Error> {
        if r_max <= 1.0 {
            return Err(Error::Input("semi-admissible profile needs r_max > 1".into()));
        }
        let slope = dh(r_max);
        let p = SemiAdmissibleProfile { r_max, slope, h: Box::new(h), dh: Box::new(dh) };
        if p.h(1.0).abs() > 1e-12 {
            return Err(Error::Input("semi-admissible profile must have h(1) = 0".into()));
        }
        // sampled checks: h' >= 0, h'' >= 0, and the action function is
        // monotone nondecreasing
        let samples = 10_000;
        let mut prev_a = 0.0;
        for i in 0..=samples {
            let r = 1.0 + (p.r_max - 1.0) * i as f64 / samples as f64;
            if p.dh(r) < -1e-12 {
                return Err(Error::Input(format!("h' < 0 at r = {r}")));
            }
            let a = p.action(r);
            if a < prev_a - 1e-9 {
                return Err(Error::Input(format!("action function decreases at r = {r}")));
            }
            prev_a = a;
        }
        Ok(p)
    }

    /// h(r) = (r - 1)^p scaled, the standard power collar.
    pub fn power(coef: f64, exponent: i32, r_max: f64) -> Result<Self, Error> {
        SemiAdmissibleProfile::new(
            r_max,
            move |r| coef * (r - 1.0).powi(exponent),
            move |r| coef * exponent as f64 * (r - 1.0).powi(exponent - 1),
        )
    }

    pub fn h(&self, r: f64) -> f64 {
        if r <= self.r_max {
            (self.h)(r)
        } else {
            (self.h)(self.r_max) + self.slope * (r - self.r_max)
        }
    }

    pub fn dh(&self, r: f64) -> f64 {
        if r <= self.r_max {
            (self.dh)(r)
        } else {
            self.slope
        }
    }

    /// A_h(r) = r h'(r) - h(r).
    pub fn action(&self, r: f64) -> f64 {
        r * self.dh(r) - self.h(r)
    }

    /// Level r_* with h'(r_*) = T for a Reeb period T in (0, slope), solved by
    /// bisection to 1e-12; returns (r_*, action at r_*).
    pub fn reeb_orbit_level(&self, period: f64) -> Result<(f64, f64), Error> {
        if !(period > 0.0 && period < self.slope) {
            return Err(Error::Input(format!(
                "no orbit level: period {period} outside (0, {})",
                self.slope
            )));
        }
        let (mut lo, mut hi) = (1.0, self.r_max);
        if self.dh(lo) > period {
            return Err(Error::Input("h' not strictly increasing from 0".into()));
        }
        for _ in 0..200 {
            let mid = (lo + hi) / 2.0;
            if self.dh(mid) < period {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-13 {
                break;
            }
        }
        let r = (lo + hi) / 2.0;
        Ok((r, self.action(r)))
    }
}
