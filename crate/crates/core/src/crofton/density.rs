//! Push-forward density of a tomograph, estimated by binned accumulation of
//! sampled family members.
//!
//! The density is a 1-density: at a point and unit direction v it measures
//! the parameter volume of curves crossing a short transverse segment. Each
//! sampled curve deposits weight * chord_length into (cell, direction) bins;
//! evaluation against a direction v applies the |sin| crossing kernel.

use super::{Polyline, Space, Tomograph};
use crate::error::Error;
use crate::rng::Stream;
use rayon::prelude::*;

#[derive(Clone, Debug)]
pub struct Density2D {
    space: Space,
    origin: [f64; 2],
    cell: f64,
    nx: usize,
    ny: usize,
    nbins: usize,
    /// per-shard accumulators for error estimates: shard -> cell -> bin
    shards: Vec<Vec<f64>>,
}

impl Density2D {
    fn cell_index(&self, p: [f64; 2]) -> Option<usize> {
        let periods = self.space.periods();
        let mut q = p;
        for (c, per) in periods.iter().enumerate() {
            if let Some(per) = per {
                q[c] = q[c].rem_euclid(*per);
            }
        }
        let ix = ((q[0] - self.origin[0]) / self.cell).floor();
        let iy = ((q[1] - self.origin[1]) / self.cell).floor();
        if ix < 0.0 || iy < 0.0 {
            return None;
        }
        let (ix, iy) = (ix as usize, iy as usize);
        if ix >= self.nx || iy >= self.ny {
            return None;
        }
        Some(iy * self.nx + ix)
    }

    fn bin_of(&self, dir: [f64; 2]) -> usize {
        let mut th = dir[1].atan2(dir[0]);
        if th < 0.0 {
            th += std::f64::consts::PI;
        }
        if th >= std::f64::consts::PI {
            th -= std::f64::consts::PI;
        }
        ((th / std::f64::consts::PI * self.nbins as f64) as usize).min(self.nbins - 1)
    }

    fn bin_angle(&self, b: usize) -> f64 {
        (b as f64 + 0.5) * std::f64::consts::PI / self.nbins as f64
    }

    /// Density at a point against a unit direction, from one shard set.
    fn eval_shard(&self, shard: &[f64], p: [f64; 2], dir: [f64; 2]) -> f64 {
        let Some(ci) = self.cell_index(p) else { return 0.0 };
        let vth = dir[1].atan2(dir[0]);
        let area = self.cell * self.cell;
        let mut acc = 0.0;
        for b in 0..self.nbins {
            let w = shard[ci * self.nbins + b];
            if w != 0.0 {
                acc += w * (self.bin_angle(b) - vth).sin().abs();
            }
        }
        acc / area
    }

    pub fn eval(&self, p: [f64; 2], dir: [f64; 2]) -> f64 {
        self.shards.iter().map(|s| self.eval_shard(s, p, dir)).sum()
    }

    /// Supremum of the density over covered cells and all directions,
    /// evaluated on the bin directions.
    pub fn max_value(&self) -> f64 {
        let area = self.cell * self.cell;
        let mut totals = vec![0.0f64; self.nx * self.ny * self.nbins];
        for s in &self.shards {
            for (i, v) in s.iter().enumerate() {
                totals[i] += v;
            }
        }
        let mut best = 0.0f64;
        for c in 0..self.nx * self.ny {
            for probe in 0..self.nbins {
                let vth = self.bin_angle(probe) + 0.5 * std::f64::consts::PI;
                let mut acc = 0.0;
                for b in 0..self.nbins {
                    acc += totals[c * self.nbins + b] * (self.bin_angle(b) - vth).sin().abs();
                }
                best = best.max(acc / area);
            }
        }
        best
    }

    /// Integral of the density along a polyline, with a shard-variance
    /// standard error.
    pub fn integrate_with_error(&self, target: &Polyline) -> (f64, f64) {
        let step = self.cell / 2.0;
        let mut per_shard = vec![0.0f64; self.shards.len()];
        for (base, d) in target.segments() {
            let len = (d[0] * d[0] + d[1] * d[1]).sqrt();
            if len == 0.0 {
                continue;
            }
            let dir = [d[0] / len, d[1] / len];
            let pieces = (len / step).ceil().max(1.0) as usize;
            let plen = len / pieces as f64;
            for i in 0..pieces {
                let t = (i as f64 + 0.5) / pieces as f64;
                let p = [base[0] + t * d[0], base[1] + t * d[1]];
                for (s, shard) in self.shards.iter().enumerate() {
                    per_shard[s] += plen * self.eval_shard(shard, p, dir);
                }
            }
        }
        let total: f64 = per_shard.iter().sum();
        let ns = per_shard.len() as f64;
        let mean = total / ns;
        let var = per_shard.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / ns;
        // shards are independent halves of the estimator; the error of the sum
        // is sqrt(ns * var)
        (total, (ns * var).sqrt())
    }
}

/// Estimate the push-forward density of a tomograph on a grid of the given
/// resolution (cells per axis) with direction bins.
pub fn pushforward_density(
    t: &Tomograph,
    resolution: usize,
    nbins: usize,
    samples: usize,
    seed: u64,
) -> Result<Density2D, Error> {
    if resolution < 4 || nbins < 4 {
        return Err(Error::Input("density grid needs resolution >= 4 and bins >= 4".into()));
    }
    // bounding box: periodic axes span their period, free axes from samples
    let periods = t.space.periods();
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    {
        let mut rng = Stream::named(seed, "crofton.density.bbox");
        for _ in 0..64 {
            let xi = t.param.sample(&mut rng);
            for p in t.curve_at(&xi).points {
                for c in 0..2 {
                    lo[c] = lo[c].min(p[c]);
                    hi[c] = hi[c].max(p[c]);
                }
            }
        }
    }
    for c in 0..2 {
        if let Some(per) = periods[c] {
            lo[c] = 0.0;
            hi[c] = per;
        } else {
            let pad = 0.05 * (hi[c] - lo[c]).max(1e-6);
            lo[c] -= pad;
            hi[c] += pad;
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]);
    let cell = span / resolution as f64;
    let nx = ((hi[0] - lo[0]) / cell).ceil() as usize;
    let ny = ((hi[1] - lo[1]) / cell).ceil() as usize;

    let nshards = 16usize;
    let per = samples.div_ceil(nshards);
    let weight = t.param.measure() / (per * nshards) as f64;
    let proto = Density2D {
        space: t.space,
        origin: lo,
        cell,
        nx,
        ny,
        nbins,
        shards: Vec::new(),
    };
    let shards: Vec<Vec<f64>> = (0..nshards)
        .into_par_iter()
        .map(|s| {
            let mut rng = Stream::named(seed, &format!("crofton.density.shard{s}"));
            let mut acc = vec![0.0f64; nx * ny * nbins];
            for _ in 0..per {
                let xi = t.param.sample(&mut rng);
                let curve = t.curve_at(&xi);
                for (base, d) in curve.segments() {
                    let len = (d[0] * d[0] + d[1] * d[1]).sqrt();
                    if len == 0.0 {
                        continue;
                    }
                    let bin = proto.bin_of([d[0] / len, d[1] / len]);
                    let pieces = (len / (cell / 2.0)).ceil().max(1.0) as usize;
                    let plen = len / pieces as f64;
                    for i in 0..pieces {
                        let tt = (i as f64 + 0.5) / pieces as f64;
                        let p = [base[0] + tt * d[0], base[1] + tt * d[1]];
                        if let Some(ci) = proto.cell_index(p) {
                            acc[ci * nbins + bin] += weight * plen;
                        }
                    }
                }
            }
            acc
        })
        .collect();
    Ok(Density2D { shards, ..proto })
}
