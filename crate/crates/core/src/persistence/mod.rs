//! Filtered chain complexes over F2 and their barcodes.
//!
//! A complex carries generators with real actions and an F2 boundary
//! operator that never raises action. Barcodes come out of two independent
//! routes: column reduction ([`reduce_filtered_complex`]) and the
//! rank-formula multiplicities of sampled persistence modules
//! ([`sampled::barcode_multiplicity`]); the test suite holds the two equal.

mod bottleneck;
mod reduction;
mod sampled;
mod sublevel;

pub use bottleneck::{bottleneck_distance, bottleneck_distance_brute};
pub use reduction::{reduce_filtered_complex, Reduction};
pub use sampled::{barcode_multiplicity, rank_formula_barcode, sampled_from_complex, SampledModule};
pub use sublevel::{sublevel_filtration, SimplicialComplex};

use crate::error::Error;
use crate::rng::Stream;
use serde::{Deserialize, Serialize};

/// Half-open interval (start, end] with multiplicity; `end` may be infinite.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Bar {
    pub start: f64,
    pub end: f64,
    pub multiplicity: usize,
    pub degree: Option<i64>,
}

impl Bar {
    pub fn new(start: f64, end: f64) -> Self {
        Bar { start, end, multiplicity: 1, degree: None }
    }

    pub fn length(&self) -> f64 {
        self.end - self.start
    }

    pub fn is_finite(&self) -> bool {
        self.end.is_finite()
    }
}

/// Multiset of bars plus the sorted set of finite endpoints (the spectrum).
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Barcode {
    pub bars: Vec<Bar>,
}

impl Barcode {
    pub fn from_bars(mut bars: Vec<Bar>) -> Result<Self, Error> {
        for b in &bars {
            if !(b.start < b.end) {
                return Err(Error::Input(format!(
                    "bar ({}, {}] is empty or inverted",
                    b.start, b.end
                )));
            }
            if b.start < 0.0 {
                return Err(Error::Input(format!("bar start {} < 0", b.start)));
            }
            if b.multiplicity == 0 {
                return Err(Error::Input("bar multiplicity must be positive".into()));
            }
        }
        bars.sort_by(|a, b| {
            (a.start, a.end, a.degree).partial_cmp(&(b.start, b.end, b.degree)).unwrap()
        });
        // merge equal bars into multiplicity
        let mut merged: Vec<Bar> = Vec::new();
        for b in bars {
            match merged.last_mut() {
                Some(m) if m.start == b.start && m.end == b.end && m.degree == b.degree => {
                    m.multiplicity += b.multiplicity
                }
                _ => merged.push(b),
            }
        }
        Ok(Barcode { bars: merged })
    }

    /// Sorted distinct finite endpoints.
    pub fn spectrum(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self
            .bars
            .iter()
            .flat_map(|b| [b.start, b.end])
            .filter(|x| x.is_finite())
            .collect();
        s.sort_by(|a, b| a.partial_cmp(b).unwrap());
        s.dedup();
        s
    }

    pub fn total_multiplicity(&self) -> usize {
        self.bars.iter().map(|b| b.multiplicity).sum()
    }

    /// Multiset of (start, end, multiplicity) triples, canonical order,
    /// degree forgotten. Used for oracle comparisons.
    pub fn multiset(&self) -> Vec<(f64, f64, usize)> {
        let mut v: Vec<(f64, f64, usize)> =
            self.bars.iter().map(|b| (b.start, b.end, b.multiplicity)).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        // re-merge across degrees
        let mut out: Vec<(f64, f64, usize)> = Vec::new();
        for (s, e, m) in v {
            match out.last_mut() {
                Some(t) if t.0 == s && t.1 == e => t.2 += m,
                _ => out.push((s, e, m)),
            }
        }
        out
    }
}

/// b_eps(s): bars (a, b] with a < s and b - a > eps, multiplicities included.
/// Both inequalities are strict; `s` may be +infinity.
pub fn barcode_function(b: &Barcode, eps: f64, s: f64) -> Result<usize, Error> {
    if eps <= 0.0 {
        return Err(Error::Input(format!("barcode function needs eps > 0, got {eps}")));
    }
    Ok(b.bars
        .iter()
        .filter(|bar| bar.start < s && bar.length() > eps)
        .map(|bar| bar.multiplicity)
        .sum())
}

/// Length of the longest finite bar; 0 when there is none.
pub fn beta_max(b: &Barcode) -> f64 {
    b.bars
        .iter()
        .filter(|bar| bar.is_finite())
        .map(|bar| bar.length())
        .fold(0.0, f64::max)
}

/// A generator of a filtered complex.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Generator {
    pub id: String,
    pub action: f64,
    pub degree: Option<i64>,
}

/// Filtered complex over F2. Boundaries are stored as index sets into
/// `generators`; the action of a chain is the max action over its support.
#[derive(Clone, Debug)]
pub struct FilteredComplexF2 {
    pub generators: Vec<Generator>,
    pub boundary: Vec<Vec<usize>>,
}

impl FilteredComplexF2 {
    pub fn new(generators: Vec<Generator>, boundary: Vec<Vec<usize>>) -> Result<Self, Error> {
        let c = FilteredComplexF2 { generators, boundary };
        c.validate()?;
        Ok(c)
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.boundary.len() != self.generators.len() {
            return Err(Error::Input("boundary table length mismatch".into()));
        }
        for g in &self.generators {
            if !g.action.is_finite() {
                return Err(Error::complex(&g.id, "non-finite action"));
            }
            // actions are normalized to start at 0 (bars must have start >= 0)
            if g.action < 0.0 {
                return Err(Error::complex(&g.id, format!("negative action {}", g.action)));
            }
        }
        for (i, b) in self.boundary.iter().enumerate() {
            let mut seen = b.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != b.len() {
                return Err(Error::complex(
                    &self.generators[i].id,
                    "duplicate boundary entry (coefficients are F2)",
                ));
            }
            for &j in b {
                if j >= self.generators.len() {
                    return Err(Error::complex(&self.generators[i].id, "boundary index out of range"));
                }
                // filtration monotonicity: F(dv) <= F(v), action of a chain
                // being the max over its support
                if self.generators[j].action > self.generators[i].action {
                    return Err(Error::complex(
                        &self.generators[i].id,
                        format!(
                            "boundary raises action: contains `{}` at {} > {}",
                            self.generators[j].id, self.generators[j].action, self.generators[i].action
                        ),
                    ));
                }
            }
        }
        // d(d(v)) = 0 over F2
        for (i, b) in self.boundary.iter().enumerate() {
            let mut acc: Vec<usize> = Vec::new();
            for &j in b {
                for &k in &self.boundary[j] {
                    acc.push(k);
                }
            }
            acc.sort_unstable();
            let mut odd = false;
            let mut run = 0;
            for w in 0..acc.len() {
                run += 1;
                if w + 1 == acc.len() || acc[w + 1] != acc[w] {
                    if run % 2 == 1 {
                        odd = true;
                        break;
                    }
                    run = 0;
                }
            }
            if odd {
                return Err(Error::complex(&self.generators[i].id, "d∘d ≠ 0"));
            }
        }
        Ok(())
    }

    /// Shift every action by an independent uniform value in [-bound, bound].
    /// Assignments that break filtration monotonicity are resampled, up to
    /// 1000 attempts.
    pub fn perturb_actions(&self, bound: f64, rng: &mut Stream) -> Result<(Self, f64), Error> {
        if bound < 0.0 {
            return Err(Error::Input("perturbation bound must be >= 0".into()));
        }
        for attempt in 0..1000 {
            let _ = attempt;
            let mut c = self.clone();
            let mut max_shift = 0.0f64;
            for g in c.generators.iter_mut() {
                let shift = rng.range_f64(-bound, bound.max(f64::MIN_POSITIVE));
                let shift = if bound == 0.0 { 0.0 } else { shift };
                g.action += shift;
                max_shift = max_shift.max(shift.abs());
            }
            if c.validate().is_ok() {
                return Ok((c, max_shift));
            }
        }
        Err(Error::Input(format!(
            "could not restore filtration monotonicity after 1000 resamples at bound {bound}"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bars(v: &[(f64, f64)]) -> Barcode {
        Barcode::from_bars(v.iter().map(|&(s, e)| Bar::new(s, e)).collect()).unwrap()
    }

    #[test]
    fn barcode_function_counts_strictly() {
        let b = bars(&[(0.0, 1.0), (0.0, 3.0), (2.0, f64::INFINITY)]);
        assert_eq!(barcode_function(&b, 0.5, 2.5).unwrap(), 3);
        assert_eq!(barcode_function(&b, 1.5, 1.0).unwrap(), 1);
        let single = bars(&[(0.0, 1.0)]);
        assert_eq!(barcode_function(&single, 1.0, f64::INFINITY).unwrap(), 0);
        assert!(barcode_function(&single, 0.0, 1.0).is_err());
    }

    #[test]
    fn barcode_function_monotone_and_semicontinuous() {
        let b = bars(&[(0.0, 1.0), (0.5, 2.0), (1.0, f64::INFINITY), (0.25, 0.75)]);
        let spectrum = b.spectrum();
        for &eps in &[0.1, 0.3, 0.6, 1.2] {
            for &s in &[0.4, 0.9, 1.7, f64::INFINITY] {
                let v = barcode_function(&b, eps, s).unwrap();
                // nonincreasing in eps, nondecreasing in s
                assert!(barcode_function(&b, eps + 0.05, s).unwrap() <= v);
                assert!(barcode_function(&b, eps, s + 0.05).unwrap() >= v);
                // right semicontinuity in eps away from the difference set
                let mut eta = 1e-3;
                let diffs: Vec<f64> = spectrum
                    .iter()
                    .flat_map(|a| spectrum.iter().map(move |b| (a - b).abs()))
                    .collect();
                while diffs.iter().any(|d| (d - eps).abs() > 0.0 && (d - eps - eta / 2.0).abs() < eta) {
                    eta /= 2.0;
                }
                assert_eq!(barcode_function(&b, eps + eta / 4.0, s).unwrap(), v);
            }
        }
    }

    #[test]
    fn beta_max_cases() {
        assert_eq!(beta_max(&bars(&[(0.0, 2.0), (1.0, f64::INFINITY)])), 2.0);
        assert_eq!(beta_max(&bars(&[(0.0, f64::INFINITY)])), 0.0);
    }

    #[test]
    fn validation_rejects_bad_complexes() {
        // boundary raising action
        let bad = FilteredComplexF2::new(
            vec![
                Generator { id: "a".into(), action: 0.0, degree: None },
                Generator { id: "b".into(), action: 1.0, degree: None },
            ],
            vec![vec![1], vec![]],
        );
        match bad {
            Err(Error::Complex { generator, .. }) => assert_eq!(generator, "a"),
            other => panic!("expected complex error, got {other:?}"),
        }
        // d^2 != 0: d(c) = a + b, d(a) = z, d(b) = 0
        let bad2 = FilteredComplexF2::new(
            vec![
                Generator { id: "z".into(), action: 0.0, degree: None },
                Generator { id: "a".into(), action: 1.0, degree: None },
                Generator { id: "b".into(), action: 1.0, degree: None },
                Generator { id: "c".into(), action: 2.0, degree: None },
            ],
            vec![vec![], vec![0], vec![], vec![1, 2]],
        );
        assert!(matches!(bad2, Err(Error::Complex { .. })));
    }

    #[test]
    fn perturb_zero_bound_is_identity() {
        let c = FilteredComplexF2::new(
            vec![
                Generator { id: "b".into(), action: 0.0, degree: None },
                Generator { id: "a".into(), action: 5.0, degree: None },
            ],
            vec![vec![], vec![0]],
        )
        .unwrap();
        let mut rng = Stream::named(1, "test.perturb");
        let (p, max_shift) = c.perturb_actions(0.0, &mut rng).unwrap();
        assert_eq!(max_shift, 0.0);
        assert_eq!(p.generators[0].action, 0.0);
        assert_eq!(p.generators[1].action, 5.0);
    }
}
