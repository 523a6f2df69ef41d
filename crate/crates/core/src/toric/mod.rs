//! Exact combinatorial models for toric growth: rational-tori counts of
//! convex moment profiles, ellipsoid Reeb spectra, and the flat-torus
//! loop-space barcode. All counts here are exact enumeration; the polynomial
//! bound certificates come from [`crate::growth`].

mod profiles;

pub use profiles::{ConvexProfile1D, ConvexProfile2D, SemiAdmissibleProfile};

use crate::error::Error;
use crate::persistence::{Bar, Barcode};
use serde::{Deserialize, Serialize};

/// Ellipsoid E(a_1, ..., a_n) through its Reeb period data.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EllipsoidSpec {
    pub a: Vec<f64>,
}

impl EllipsoidSpec {
    pub fn new(a: Vec<f64>) -> Result<Self, Error> {
        if a.is_empty() || a.iter().any(|&x| !(x > 0.0)) {
            return Err(Error::Input("ellipsoid needs positive axis periods".into()));
        }
        Ok(EllipsoidSpec { a })
    }

    /// True when no ratio a_i/a_j is a rational p/q with q up to 10^6.
    pub fn rationally_independent(&self) -> bool {
        for (i, &x) in self.a.iter().enumerate() {
            for &y in &self.a[i + 1..] {
                let r = x / y;
                for q in 1..=1000u64 {
                    let p = (r * q as f64).round();
                    if p > 0.0 && (r - p / q as f64).abs() < 1e-9 / q as f64 {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Sorted multiset of Reeb actions m * a_i <= s (m >= 1).
    pub fn spectrum(&self, s: f64) -> Vec<f64> {
        let mut out = Vec::new();
        for &ai in &self.a {
            let mut m = 1.0;
            while m * ai <= s {
                out.push(m * ai);
                m += 1.0;
            }
        }
        out.sort_by(|x, y| x.partial_cmp(y).unwrap());
        out
    }

    /// Exact generator count sum_i floor(s / a_i); each Reeb orbit of period
    /// below the slope yields two generators in the perturbed complex, so
    /// 2 * count bounds b_eps(s) of the model.
    pub fn generator_count(&self, s: f64) -> u64 {
        if s < 0.0 {
            return 0;
        }
        self.a.iter().map(|&ai| (s / ai + 1e-12).floor() as u64).sum()
    }

    /// Brute enumeration of (axis, multiple) pairs, as an independent count.
    pub fn generator_count_brute(&self, s: f64) -> u64 {
        let mut count = 0u64;
        for &ai in &self.a {
            let mut m = 1.0f64;
            while m * ai <= s * (1.0 + 1e-15) {
                count += 1;
                m += 1.0;
            }
        }
        count
    }
}

/// Two independent plane vectors spanning a lattice.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeBasis {
    pub v1: [f64; 2],
    pub v2: [f64; 2],
}

impl LatticeBasis {
    pub fn new(v1: [f64; 2], v2: [f64; 2]) -> Result<Self, Error> {
        if (v1[0] * v2[1] - v1[1] * v2[0]).abs() < 1e-12 {
            return Err(Error::Input("lattice basis vectors must be independent".into()));
        }
        Ok(LatticeBasis { v1, v2 })
    }

    pub fn det(&self) -> f64 {
        (self.v1[0] * self.v2[1] - self.v1[1] * self.v2[0]).abs()
    }

    fn norm2(&self, m: i64, n: i64) -> f64 {
        let x = m as f64 * self.v1[0] + n as f64 * self.v2[0];
        let y = m as f64 * self.v1[1] + n as f64 * self.v2[1];
        x * x + y * y
    }

    /// Nonzero classes with squared length < s, enumerated over a provably
    /// sufficient box.
    pub fn classes_below(&self, s: f64) -> Vec<(i64, i64, f64)> {
        if s <= 0.0 {
            return Vec::new();
        }
        // |m v1 + n v2| >= sigma_min * |(m, n)|; box by the smallest singular
        // value of the basis matrix
        let g = [
            self.v1[0] * self.v1[0] + self.v1[1] * self.v1[1],
            self.v1[0] * self.v2[0] + self.v1[1] * self.v2[1],
            self.v2[0] * self.v2[0] + self.v2[1] * self.v2[1],
        ];
        let tr = g[0] + g[2];
        let det2 = g[0] * g[2] - g[1] * g[1];
        let sigma2_min = (tr - (tr * tr - 4.0 * det2).max(0.0).sqrt()) / 2.0;
        let bound = (s / sigma2_min).sqrt().ceil() as i64 + 1;
        let mut out = Vec::new();
        for m in -bound..=bound {
            for n in -bound..=bound {
                if (m, n) == (0, 0) {
                    continue;
                }
                let l2 = self.norm2(m, n);
                if l2 < s {
                    out.push((m, n, l2));
                }
            }
        }
        out
    }
}

/// Loop-space barcode of the flat torus below energy s: every nonzero class
/// (m, n) with squared length below s contributes a Morse-Bott circle of
/// geodesics, i.e. two infinite bars born at the energy; the constant loops
/// contribute the homology of the torus itself at energy 0.
pub fn flat_torus_loop_barcode(basis: &LatticeBasis, s: f64) -> Result<Barcode, Error> {
    let mut bars = Vec::new();
    if s > 0.0 {
        for degree in [0, 1, 1, 2] {
            bars.push(Bar {
                start: 0.0,
                end: f64::INFINITY,
                multiplicity: 1,
                degree: Some(degree),
            });
        }
    }
    for (_, _, l2) in basis.classes_below(s) {
        for degree in [0, 1] {
            bars.push(Bar { start: l2, end: f64::INFINITY, multiplicity: 1, degree: Some(degree) });
        }
    }
    Barcode::from_bars(bars)
}

/// Independent census of infinite bars born strictly below s: a wider
/// brute-force box with naive filtering.
pub fn flat_torus_count_brute(basis: &LatticeBasis, s: f64) -> u64 {
    if s <= 0.0 {
        return 0;
    }
    let reach = (basis.v1[0].hypot(basis.v1[1]) + basis.v2[0].hypot(basis.v2[1])) / basis.det();
    let bound = (s.sqrt() * reach).ceil() as i64 + 2;
    let mut count = 4u64; // constant loops
    for m in -bound..=bound {
        for n in -bound..=bound {
            if (m, n) != (0, 0) && basis.norm2(m, n) < s {
                count += 2;
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::persistence::barcode_function;

    #[test]
    fn ellipsoid_count_at_ten() {
        let e = EllipsoidSpec::new(vec![1.0, 2.0f64.sqrt()]).unwrap();
        assert_eq!(e.generator_count(10.0), 17);
        assert!(e.rationally_independent());
        let rational = EllipsoidSpec::new(vec![1.0, 1.5]).unwrap();
        assert!(!rational.rationally_independent());
    }

    #[test]
    fn ellipsoid_below_min_period_is_empty() {
        let e = EllipsoidSpec::new(vec![1.0, 2.0f64.sqrt()]).unwrap();
        assert_eq!(e.generator_count(0.5), 0);
        assert!(e.spectrum(0.5).is_empty());
    }

    #[test]
    fn ellipsoid_matches_brute_enumeration() {
        let e = EllipsoidSpec::new(vec![1.0, 2.0f64.sqrt(), std::f64::consts::PI]).unwrap();
        for s in [1.0, 10.0, 313.7, 10_000.0] {
            assert_eq!(e.generator_count(s), e.generator_count_brute(s));
        }
    }

    #[test]
    fn ellipsoid_slope_is_sum_of_reciprocals() {
        let e = EllipsoidSpec::new(vec![1.0, 2.0f64.sqrt()]).unwrap();
        let ss: Vec<f64> = (0..=90).map(|i| 100.0 + 10.0 * i as f64).collect();
        let counts: Vec<f64> = ss.iter().map(|&s| e.generator_count(s) as f64).collect();
        // least squares slope
        let n = ss.len() as f64;
        let mx = ss.iter().sum::<f64>() / n;
        let my = counts.iter().sum::<f64>() / n;
        let sxy: f64 = ss.iter().zip(&counts).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = ss.iter().map(|x| (x - mx) * (x - mx)).sum();
        let slope = sxy / sxx;
        let expect = 1.0 + 1.0 / 2.0f64.sqrt();
        assert!((slope - expect).abs() / expect < 0.01, "slope {slope}");
    }

    #[test]
    fn square_lattice_loop_barcode() {
        let basis = LatticeBasis::new([1.0, 0.0], [0.0, 1.0]).unwrap();
        // s = 1.5: classes (+-1, 0), (0, +-1) of length^2 = 1
        let b = flat_torus_loop_barcode(&basis, 1.5).unwrap();
        assert_eq!(b.total_multiplicity(), 4 + 8);
        // s = 0.5: only the constant loops
        let b = flat_torus_loop_barcode(&basis, 0.5).unwrap();
        assert_eq!(b.total_multiplicity(), 4);
        // b_inf(s) through the counting function equals the brute census
        for s in [0.5, 1.5, 10.0, 123.0] {
            let bc = flat_torus_loop_barcode(&basis, s).unwrap();
            let counted = barcode_function(&bc, 1.0, s).unwrap();
            assert_eq!(counted as u64, flat_torus_count_brute(&basis, s));
        }
    }

    #[test]
    fn skew_lattice_gauss_count() {
        let basis = LatticeBasis::new([1.0, 0.25], [0.125, 0.75]).unwrap();
        let s = 4000.0;
        let b = flat_torus_loop_barcode(&basis, s).unwrap();
        let total = b.total_multiplicity() as f64;
        let gauss = 2.0 * std::f64::consts::PI * s / basis.det();
        assert!((total - gauss).abs() / gauss < 0.05, "total {total} vs gauss {gauss}");
    }
}
