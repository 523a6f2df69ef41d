//! Lower-star filtration of an abstract simplicial complex.

use super::{FilteredComplexF2, Generator};
use crate::error::Error;
use std::collections::HashMap;

/// Abstract simplicial complex given by its simplices as sorted vertex lists.
#[derive(Clone, Debug, Default)]
pub struct SimplicialComplex {
    pub simplices: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    pub fn new(mut simplices: Vec<Vec<usize>>) -> Result<Self, Error> {
        for s in simplices.iter_mut() {
            s.sort_unstable();
            let before = s.len();
            s.dedup();
            if s.is_empty() || s.len() != before {
                return Err(Error::Input(format!("non-simplicial input: bad simplex {s:?}")));
            }
        }
        simplices.sort_by(|x, y| (x.len(), x.clone()).cmp(&(y.len(), y.clone())));
        simplices.dedup();
        let have: std::collections::HashSet<&Vec<usize>> = simplices.iter().collect();
        for s in &simplices {
            if s.len() > 1 {
                for drop in 0..s.len() {
                    let mut face: Vec<usize> = s.clone();
                    face.remove(drop);
                    if !have.contains(&face) {
                        return Err(Error::Input(format!(
                            "non-simplicial input: face {face:?} of {s:?} missing"
                        )));
                    }
                }
            }
        }
        Ok(SimplicialComplex { simplices })
    }

    /// Triangulated circle on n >= 3 vertices.
    pub fn circle(n: usize) -> Self {
        let mut simplices: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
        for v in 0..n {
            let mut e = vec![v, (v + 1) % n];
            e.sort_unstable();
            simplices.push(e);
        }
        SimplicialComplex::new(simplices).unwrap()
    }

    /// Triangulated sphere realizing the four-critical-point height model:
    /// a minimum, a saddle, a local maximum and a global maximum, with the
    /// auxiliary ring vertices homologically silent.
    pub fn sphere_model() -> (Self, Vec<f64>) {
        // vertices: 0 = bottom, 1..=6 = ring, 7 = saddle, 8 = local max, 9 = global max
        let mut s: Vec<Vec<usize>> = (0..10).map(|v| vec![v]).collect();
        let mut add = |mut v: Vec<usize>| {
            v.sort_unstable();
            s.push(v);
        };
        let ring = |i: usize| 1 + (i % 6);
        for i in 0..6 {
            add(vec![ring(i), ring(i + 1)]);
            add(vec![0, ring(i)]);
            add(vec![0, ring(i), ring(i + 1)]);
        }
        // saddle 7 bridges ring vertices 1 and 4
        add(vec![7, 1]);
        add(vec![7, 4]);
        // pocket capped by local max 8 over ring 1-2-3-4 and the saddle
        for e in [vec![8, 1], vec![8, 2], vec![8, 3], vec![8, 4], vec![8, 7]] {
            add(e);
        }
        for t in [vec![8, 1, 2], vec![8, 2, 3], vec![8, 3, 4], vec![8, 4, 7], vec![8, 7, 1]] {
            add(t);
        }
        // pocket capped by global max 9 over ring 4-5-6-1 and the saddle
        for e in [vec![9, 4], vec![9, 5], vec![9, 6], vec![9, 1], vec![9, 7]] {
            add(e);
        }
        for t in [vec![9, 4, 5], vec![9, 5, 6], vec![9, 6, 1], vec![9, 1, 7], vec![9, 7, 4]] {
            add(t);
        }
        let values = vec![0.0, 0.5, 0.5, 0.5, 0.5, 0.5, 0.5, 1.0, 2.0, 3.0];
        (SimplicialComplex::new(s).unwrap(), values)
    }
}

/// Lower-star filtration: each simplex enters at the max of its vertex values.
pub fn sublevel_filtration(
    complex: &SimplicialComplex,
    values: &[f64],
) -> Result<FilteredComplexF2, Error> {
    for &v in values {
        if !v.is_finite() {
            return Err(Error::Input("vertex values must be finite".into()));
        }
    }
    let index: HashMap<&Vec<usize>, usize> =
        complex.simplices.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut generators = Vec::new();
    let mut boundary = Vec::new();
    for s in &complex.simplices {
        for &v in s {
            if v >= values.len() {
                return Err(Error::Input(format!("vertex {v} has no value")));
            }
        }
        let action = s.iter().map(|&v| values[v]).fold(f64::NEG_INFINITY, f64::max);
        let id = s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(".");
        generators.push(Generator { id, action, degree: Some(s.len() as i64 - 1) });
        let mut faces = Vec::new();
        if s.len() > 1 {
            for drop in 0..s.len() {
                let mut face = s.clone();
                face.remove(drop);
                faces.push(index[&face]);
            }
        }
        boundary.push(faces);
    }
    FilteredComplexF2::new(generators, boundary)
}
