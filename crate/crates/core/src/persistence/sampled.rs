//! Persistence modules sampled on a finite grid, and the rank-formula
//! multiplicity n_I = dim(A/(B+C)).
//!
//! The grid of a module built from a complex contains every generator action
//! plus midpoints between consecutive distinct actions, one point below the
//! minimum and one beyond the maximum; the module is locally constant between
//! grid points, so births and deaths are pinned down exactly.

use super::{Bar, Barcode, FilteredComplexF2};
use crate::error::Error;
use crate::f2::{F2Matrix, Subspace};

/// Vector spaces and structure maps over a sorted parameter grid.
#[derive(Clone, Debug)]
pub struct SampledModule {
    pub grid: Vec<f64>,
    pub dims: Vec<usize>,
    /// maps[i]: V_{grid[i]} -> V_{grid[i+1]}, dims (dims[i+1] x dims[i]).
    pub maps: Vec<F2Matrix>,
}

impl SampledModule {
    pub fn new(grid: Vec<f64>, dims: Vec<usize>, maps: Vec<F2Matrix>) -> Result<Self, Error> {
        if grid.len() != dims.len() || maps.len() + 1 != grid.len() {
            return Err(Error::Input("sampled module shape mismatch".into()));
        }
        if grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Input("grid must be strictly increasing".into()));
        }
        for (i, m) in maps.iter().enumerate() {
            if m.rows != dims[i + 1] || m.cols != dims[i] {
                return Err(Error::Input(format!("map {i} has wrong shape")));
            }
        }
        Ok(SampledModule { grid, dims, maps })
    }

    /// Composite structure map grid[i] -> grid[j], i <= j.
    pub fn map_between(&self, i: usize, j: usize) -> F2Matrix {
        assert!(i <= j);
        let mut m = F2Matrix::identity(self.dims[i]);
        for k in i..j {
            m = self.maps[k].mul(&m);
        }
        m
    }

    /// Interval module F_(a, b] sampled on the given grid.
    pub fn interval(grid: Vec<f64>, a: f64, b: f64) -> Result<SampledModule, Error> {
        let dims: Vec<usize> =
            grid.iter().map(|&s| usize::from(s > a && s <= b)).collect();
        let mut maps = Vec::new();
        for i in 0..grid.len() - 1 {
            let mut m = F2Matrix::zero(dims[i + 1], dims[i]);
            if dims[i] == 1 && dims[i + 1] == 1 {
                m.set(0, 0, true);
            }
            maps.push(m);
        }
        SampledModule::new(grid, dims, maps)
    }

    /// Direct sum, matching grids required.
    pub fn direct_sum(&self, other: &SampledModule) -> Result<SampledModule, Error> {
        if self.grid != other.grid {
            return Err(Error::Input("direct sum needs identical grids".into()));
        }
        let dims: Vec<usize> = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let mut maps = Vec::new();
        for i in 0..self.maps.len() {
            let mut m = F2Matrix::zero(dims[i + 1], dims[i]);
            for r in 0..self.maps[i].rows {
                for c in 0..self.maps[i].cols {
                    if self.maps[i].get(r, c) {
                        m.set(r, c, true);
                    }
                }
            }
            for r in 0..other.maps[i].rows {
                for c in 0..other.maps[i].cols {
                    if other.maps[i].get(r, c) {
                        m.set(self.dims[i + 1] + r, self.dims[i] + c, true);
                    }
                }
            }
            maps.push(m);
        }
        SampledModule::new(self.grid.clone(), dims, maps)
    }
}

/// Homology data of the strict sublevel subcomplex at one level: a basis of
/// representative cycles extending a basis of boundaries.
struct LevelHomology {
    /// supports over the full generator index set
    boundary_basis: Vec<Vec<usize>>,
    class_reps: Vec<Vec<usize>>,
}

fn level_homology(c: &FilteredComplexF2, level: f64) -> LevelHomology {
    let n = c.len();
    let present: Vec<usize> = (0..n).filter(|&i| c.generators[i].action < level).collect();
    // boundaries of present generators
    let b_rows: Vec<Vec<usize>> = present.iter().map(|&i| c.boundary[i].clone()).collect();
    let bnd = Subspace::from_spanning(n, &b_rows);
    // cycle space: kernel of boundary restricted to present generators
    // set up matrix with columns = present gens, rows = all gens
    let mut m = F2Matrix::zero(n, present.len());
    for (j, &g) in present.iter().enumerate() {
        for &t in &c.boundary[g] {
            m.set(t, j, true);
        }
    }
    // kernel via column reduction of m
    let kernel = {
        let mt = m.transpose(); // rows = present gens
        // augment with identity to track combinations
        let k = present.len();
        let mut aug = F2Matrix::zero(k, n + k);
        for i in 0..k {
            for j in 0..n {
                if mt.get(i, j) {
                    aug.set(i, j, true);
                }
            }
            aug.set(i, n + i, true);
        }
        aug.row_reduce();
        let mut out = Vec::new();
        for i in 0..k {
            let lhs_zero = (0..n).all(|j| !aug.get(i, j));
            if lhs_zero {
                let combo: Vec<usize> =
                    (0..k).filter(|&j| aug.get(i, n + j)).map(|j| present[j]).collect();
                if !combo.is_empty() {
                    out.push(combo);
                }
            }
        }
        out
    };
    // extend boundary basis to cycle space: greedily add kernel vectors not in span
    let mut span_rows = bnd.basis_rows();
    let mut reps = Vec::new();
    let mut span = Subspace::from_spanning(n, &span_rows);
    for z in kernel {
        if !span.contains(&z) {
            reps.push(z.clone());
            span_rows.push(z);
            span = Subspace::from_spanning(n, &span_rows);
        }
    }
    LevelHomology { boundary_basis: bnd.basis_rows(), class_reps: reps }
}

/// Build the sampled homology persistence module of a filtered complex.
pub fn sampled_from_complex(c: &FilteredComplexF2) -> Result<SampledModule, Error> {
    c.validate()?;
    let mut actions: Vec<f64> = c.generators.iter().map(|g| g.action).collect();
    actions.sort_by(|a, b| a.partial_cmp(b).unwrap());
    actions.dedup();
    let mut grid = Vec::new();
    if let (Some(&lo), Some(&hi)) = (actions.first(), actions.last()) {
        grid.push(lo - 1.0);
        for w in 0..actions.len() {
            grid.push(actions[w]);
            if w + 1 < actions.len() {
                grid.push((actions[w] + actions[w + 1]) / 2.0);
            }
        }
        grid.push(hi + 1.0);
    } else {
        grid = vec![0.0, 1.0];
    }

    let n = c.len();
    let levels: Vec<LevelHomology> = grid.iter().map(|&s| level_homology(c, s)).collect();
    let dims: Vec<usize> = levels.iter().map(|l| l.class_reps.len()).collect();
    let mut maps = Vec::new();
    for i in 0..grid.len() - 1 {
        let src = &levels[i];
        let dst = &levels[i + 1];
        let mut m = F2Matrix::zero(dst.class_reps.len(), src.class_reps.len());
        // express each source representative in the target's (boundary, reps) basis
        let mut cols: Vec<Vec<usize>> = dst.boundary_basis.clone();
        cols.extend(dst.class_reps.iter().cloned());
        for (j, rep) in src.class_reps.iter().enumerate() {
            let sol = crate::f2::solve_columns(n, &cols, rep).unwrap_or_else(|| {
                panic!("structure map: cycle not expressible at next level")
            });
            for &k in &sol {
                if k >= dst.boundary_basis.len() {
                    m.set(k - dst.boundary_basis.len(), j, true);
                }
            }
        }
        maps.push(m);
    }
    SampledModule::new(grid, dims, maps)
}

/// Multiplicity n_I of the interval (a, b] (b may be infinite) at a probe
/// point c strictly inside, per the birth/death rank formula.
///
/// The grid must contain the spectrum and extend strictly past it on both
/// sides (modules built by [`sampled_from_complex`] do); under left
/// semicontinuity the strict birth/death conditions then discretize as
/// membership at the first grid point at or above the cut.
pub fn barcode_multiplicity(m: &SampledModule, a: f64, b: f64, c: f64) -> Result<usize, Error> {
    let lo = *m.grid.first().unwrap();
    let hi = *m.grid.last().unwrap();
    if a < lo || (b.is_finite() && b > hi) || a >= b {
        return Err(Error::Input(format!("interval ({a}, {b}] outside grid range [{lo}, {hi}]")));
    }
    if !(c > a && (c < b || !b.is_finite()) && c >= lo && c <= hi) {
        return Err(Error::Input(format!("probe {c} not strictly inside ({a}, {b}]")));
    }
    // snap c to a grid index strictly inside (a, b)
    let ci = m
        .grid
        .iter()
        .enumerate()
        .filter(|&(_, &g)| g > a && (!b.is_finite() || g < b))
        .min_by(|x, y| (x.1 - c).abs().partial_cmp(&(y.1 - c).abs()).unwrap())
        .map(|(i, _)| i)
        .ok_or_else(|| Error::Input("no grid point inside interval".into()))?;

    let first_above = |x: f64| m.grid.iter().position(|&g| g > x);
    let first_at_or_above = |x: f64| m.grid.iter().position(|&g| g >= x);

    let nv = m.dims[ci];
    let full = Subspace::from_spanning(nv, &(0..nv).map(|i| vec![i]).collect::<Vec<_>>());

    // image of pi_{s, c} as a subspace of V_c
    let image_from = |si: Option<usize>| -> Subspace {
        match si {
            Some(si) if si <= ci => {
                let map = m.map_between(si, ci);
                let rows: Vec<Vec<usize>> =
                    (0..map.cols).map(|j| (0..map.rows).filter(|&i| map.get(i, j)).collect()).collect();
                Subspace::from_spanning(nv, &rows)
            }
            Some(_) => full.clone(),
            None => Subspace::from_spanning(nv, &[]),
        }
    };
    // kernel of pi_{c, t}
    let kernel_to = |ti: Option<usize>| -> Subspace {
        match ti {
            Some(ti) if ti >= ci => {
                let map = m.map_between(ci, ti);
                let mut aug = F2Matrix::zero(nv, map.rows + nv);
                for i in 0..nv {
                    for r in 0..map.rows {
                        if map.get(r, i) {
                            aug.set(i, r, true);
                        }
                    }
                    aug.set(i, map.rows + i, true);
                }
                aug.row_reduce();
                let mut rows = Vec::new();
                for i in 0..nv {
                    if (0..map.rows).all(|r| !aug.get(i, r)) {
                        let combo: Vec<usize> =
                            (0..nv).filter(|&j| aug.get(i, map.rows + j)).collect();
                        if !combo.is_empty() {
                            rows.push(combo);
                        }
                    }
                }
                Subspace::from_spanning(nv, &rows)
            }
            Some(_) => Subspace::from_spanning(nv, &[]),
            None => full.clone(),
        }
    };

    // By left semicontinuity, images and kernels at a grid point t are the
    // unions of their counterparts over s < t, so:
    //   alpha(v) <= a  <=>  v in im(pi_{t,c}),  t = first grid point  > a
    //   alpha(v) <  a  <=>  v in im(pi_{t,c}),  t = first grid point >= a
    //   beta(v)  <= b  <=>  v in ker(pi_{c,t}), t = first grid point  > b
    //                       (clamped to the final index when b ends the grid)
    //   beta(v)  <  b  <=>  v in ker(pi_{c,t}), t = first grid point >= b
    let im_le = image_from(first_above(a));
    let im_lt = image_from(first_at_or_above(a));
    let (ker_le, ker_lt) = if b.is_finite() {
        let above = first_above(b).or(Some(m.grid.len() - 1));
        (kernel_to(above), kernel_to(first_at_or_above(b).map(|t| t.max(ci))))
    } else {
        // beta < inf: dies eventually, i.e. by the last grid point
        (full.clone(), kernel_to(Some(m.grid.len() - 1)))
    };

    let a_space = im_le.intersect(&ker_le);
    let b_space = im_lt.intersect(&ker_le);
    let c_space = im_le.intersect(&ker_lt);
    let bc = b_space.sum(&c_space);
    Ok(a_space.dim() - bc.dim())
}

/// Reassemble a full barcode from rank-formula multiplicities: candidate
/// endpoints are the generator actions of the underlying complex.
pub fn rank_formula_barcode(c: &FilteredComplexF2) -> Result<Barcode, Error> {
    let m = sampled_from_complex(c)?;
    let mut actions: Vec<f64> = c.generators.iter().map(|g| g.action).collect();
    actions.sort_by(|a, b| a.partial_cmp(b).unwrap());
    actions.dedup();
    let mut bars = Vec::new();
    for (i, &a) in actions.iter().enumerate() {
        for &b in actions.iter().skip(i + 1) {
            let cpt = (a + b) / 2.0;
            let n = barcode_multiplicity(&m, a, b, cpt)?;
            if n > 0 {
                bars.push(Bar { start: a, end: b, multiplicity: n, degree: None });
            }
        }
        // infinite bars starting at a
        let cpt = a + 0.75; // grid extends one beyond the max action
        let n = barcode_multiplicity(&m, a, f64::INFINITY, cpt)?;
        if n > 0 {
            bars.push(Bar { start: a, end: f64::INFINITY, multiplicity: n, degree: None });
        }
    }
    Barcode::from_bars(bars)
}
