//! Polylines in the plane, the unit torus, and the cylinder, with exact
//! segment-pair intersection counting.

use crate::error::Error;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    Plane,
    /// unit square with both coordinates wrapped
    Torus,
    /// first coordinate wrapped with period 2*pi, second free (T*S^1)
    Cylinder,
}

impl Space {
    pub fn periods(&self) -> [Option<f64>; 2] {
        match self {
            Space::Plane => [None, None],
            Space::Torus => [Some(1.0), Some(1.0)],
            Space::Cylinder => [Some(std::f64::consts::TAU), None],
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Polyline {
    pub space: Space,
    pub points: Vec<[f64; 2]>,
    pub closed: bool,
}

impl Polyline {
    pub fn open(space: Space, points: Vec<[f64; 2]>) -> Self {
        Polyline { space, points, closed: false }
    }

    pub fn closed(space: Space, points: Vec<[f64; 2]>) -> Self {
        Polyline { space, points, closed: true }
    }

    /// Segments as (base point, displacement); displacements on wrapped
    /// coordinates take the shortest representative.
    pub fn segments(&self) -> Vec<([f64; 2], [f64; 2])> {
        let n = self.points.len();
        if n < 2 {
            return Vec::new();
        }
        let count = if self.closed { n } else { n - 1 };
        let periods = self.space.periods();
        let mut out = Vec::with_capacity(count);
        for i in 0..count {
            let a = self.points[i];
            let b = self.points[(i + 1) % n];
            let mut d = [b[0] - a[0], b[1] - a[1]];
            for (c, p) in periods.iter().enumerate() {
                if let Some(p) = p {
                    d[c] = d[c].rem_euclid(*p);
                    if d[c] >= p / 2.0 {
                        d[c] -= p;
                    }
                }
            }
            out.push((a, d));
        }
        out
    }

    /// Total length under the space metric.
    pub fn length(&self) -> f64 {
        self.segments().iter().map(|(_, d)| (d[0] * d[0] + d[1] * d[1]).sqrt()).sum()
    }

    pub fn translate(&self, offset: [f64; 2]) -> Polyline {
        let periods = self.space.periods();
        let points = self
            .points
            .iter()
            .map(|p| {
                let mut q = [p[0] + offset[0], p[1] + offset[1]];
                for (c, per) in periods.iter().enumerate() {
                    if let Some(per) = per {
                        q[c] = q[c].rem_euclid(*per);
                    }
                }
                q
            })
            .collect();
        Polyline { space: self.space, points, closed: self.closed }
    }
}

fn cross(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

enum SegHit {
    None,
    Proper,
    Degenerate,
    Overlap,
}

/// Exact proper-crossing test for two segments given as (base, displacement).
fn segment_hit(p: [f64; 2], r: [f64; 2], q: [f64; 2], s: [f64; 2]) -> SegHit {
    let qp = [q[0] - p[0], q[1] - p[1]];
    let rxs = cross(r, s);
    let qpxr = cross(qp, r);
    if rxs == 0.0 {
        if qpxr == 0.0 {
            // collinear: overlap iff the parameter ranges intersect
            let rr = r[0] * r[0] + r[1] * r[1];
            if rr == 0.0 {
                return SegHit::None;
            }
            let t0 = (qp[0] * r[0] + qp[1] * r[1]) / rr;
            let t1 = t0 + (s[0] * r[0] + s[1] * r[1]) / rr;
            let (lo, hi) = (t0.min(t1), t0.max(t1));
            if hi < 0.0 || lo > 1.0 {
                return SegHit::None;
            }
            if hi == 0.0 || lo == 1.0 {
                return SegHit::Degenerate;
            }
            return SegHit::Overlap;
        }
        return SegHit::None;
    }
    let t = cross(qp, s) / rxs;
    let u = qpxr / rxs;
    if t > 0.0 && t < 1.0 && u > 0.0 && u < 1.0 {
        SegHit::Proper
    } else if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
        SegHit::Degenerate
    } else {
        SegHit::None
    }
}

fn count_once(a: &Polyline, b: &Polyline) -> Result<usize, DegenerateContact> {
    assert_eq!(a.space, b.space, "polylines must live in the same model space");
    let periods = a.space.periods();
    let offsets: Vec<[f64; 2]> = {
        let xs: Vec<f64> = match periods[0] {
            Some(p) => vec![-p, 0.0, p],
            None => vec![0.0],
        };
        let ys: Vec<f64> = match periods[1] {
            Some(p) => vec![-p, 0.0, p],
            None => vec![0.0],
        };
        xs.iter().flat_map(|&x| ys.iter().map(move |&y| [x, y])).collect()
    };
    let sa = a.segments();
    let sb = b.segments();
    let mut count = 0usize;
    for &(p, r) in &sa {
        for &(q0, s) in &sb {
            for off in &offsets {
                let q = [q0[0] + off[0], q0[1] + off[1]];
                match segment_hit(p, r, q, s) {
                    SegHit::None => {}
                    SegHit::Proper => count += 1,
                    SegHit::Degenerate => return Err(DegenerateContact::Touch),
                    SegHit::Overlap => return Err(DegenerateContact::Overlap),
                }
            }
        }
    }
    Ok(count)
}

#[derive(Debug, Clone, Copy)]
enum DegenerateContact {
    Touch,
    Overlap,
}

/// Exact intersection count of two polylines, torus/cylinder wrap included.
/// Tangential and endpoint contacts are resolved by a deterministic symbolic
/// perturbation of the second curve; genuinely overlapping collinear segments
/// are an error ("non-transverse family member") that callers handle by
/// resampling the parameter.
pub fn curve_intersections(a: &Polyline, b: &Polyline) -> Result<usize, Error> {
    match count_once(a, b) {
        Ok(c) => return Ok(c),
        Err(DegenerateContact::Overlap) => {
            return Err(Error::Input(
                "non-transverse family member: collinear overlap".into(),
            ))
        }
        Err(DegenerateContact::Touch) => {}
    }
    // fixed, scale-free perturbation directions for tangential contacts
    const NUDGES: [[f64; 2]; 2] = [[1.043e-9, 2.791e-9], [-2.113e-9, 0.937e-9]];
    for nudge in NUDGES {
        if let Ok(c) = count_once(a, &b.translate(nudge)) {
            return Ok(c);
        }
    }
    Err(Error::Input("non-transverse family member: persistent tangential contact".into()))
}

/// Regular n-gon approximation of a circle.
pub fn circle_polyline(center: [f64; 2], radius: f64, n: usize) -> Polyline {
    let pts = (0..n)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / n as f64;
            [center[0] + radius * t.cos(), center[1] + radius * t.sin()]
        })
        .collect();
    Polyline::closed(Space::Plane, pts)
}
