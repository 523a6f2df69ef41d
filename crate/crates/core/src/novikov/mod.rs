//! Filtered complexes over the Novikov field with F2 coefficients.
//!
//! Generators carry real actions; differential entries are finite Novikov
//! scalars and every term must strictly decrease action (positive arrow
//! length). Barcodes here are unpinned: multiplication by T^a shifts a whole
//! bar, so only lengths survive.

mod scalar;
mod svd;

pub use scalar::NovikovScalar;
pub use svd::{orthogonalize, NovikovSvd, PivotOrder};

use crate::error::Error;
use crate::rng::Stream;

/// Multiset of bar lengths in (0, inf]; infinite bars counted separately.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct UnpinnedBarcode {
    /// finite lengths, sorted ascending
    pub lengths: Vec<f64>,
    pub infinite: usize,
}

impl UnpinnedBarcode {
    pub fn new(mut lengths: Vec<f64>, infinite: usize) -> Result<Self, Error> {
        if lengths.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
            return Err(Error::Input("unpinned bar lengths must be finite and positive".into()));
        }
        lengths.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(UnpinnedBarcode { lengths, infinite })
    }

    pub fn total(&self) -> usize {
        self.lengths.len() + self.infinite
    }

    /// Number of bars of length strictly greater than eps, infinite included.
    pub fn b_eps(&self, eps: f64) -> Result<usize, Error> {
        if eps <= 0.0 {
            return Err(Error::Input(format!("b_eps needs eps > 0, got {eps}")));
        }
        Ok(self.lengths.iter().filter(|&&l| l > eps).count() + self.infinite)
    }

    /// Multiset equality up to a per-length tolerance.
    pub fn approx_eq(&self, other: &UnpinnedBarcode, tol: f64) -> bool {
        self.infinite == other.infinite
            && self.lengths.len() == other.lengths.len()
            && self
                .lengths
                .iter()
                .zip(&other.lengths)
                .all(|(a, b)| (a - b).abs() <= tol)
    }
}

#[derive(Clone, Debug)]
pub struct NovikovGenerator {
    pub id: String,
    pub action: f64,
}

/// Finitely generated filtered complex over the Novikov field.
#[derive(Clone, Debug)]
pub struct NovikovComplex {
    pub generators: Vec<NovikovGenerator>,
    /// differential[i][j]: coefficient of generator j in d(generator i)
    pub differential: Vec<Vec<NovikovScalar>>,
}

impl NovikovComplex {
    pub fn new(
        generators: Vec<NovikovGenerator>,
        differential: Vec<Vec<NovikovScalar>>,
    ) -> Result<Self, Error> {
        let c = NovikovComplex { generators, differential };
        c.validate()?;
        Ok(c)
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn zero_differential(generators: Vec<NovikovGenerator>) -> Self {
        let n = generators.len();
        NovikovComplex {
            generators,
            differential: vec![vec![NovikovScalar::zero(); n]; n],
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        let n = self.generators.len();
        if self.differential.len() != n || self.differential.iter().any(|r| r.len() != n) {
            return Err(Error::Input(
                "differential must be a square matrix over the generators".into(),
            ));
        }
        for (i, row) in self.differential.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                for &a in entry.terms() {
                    let len = self.generators[i].action - self.generators[j].action + a;
                    if !(len > 0.0) {
                        return Err(Error::complex(
                            &self.generators[i].id,
                            format!(
                                "differential term T^{a} toward `{}` has arrow length {len} <= 0",
                                self.generators[j].id
                            ),
                        ));
                    }
                }
            }
        }
        // d^2 = 0 over the Novikov field
        for i in 0..n {
            for k in 0..n {
                let mut acc = NovikovScalar::zero();
                for j in 0..n {
                    if !self.differential[i][j].is_zero() && !self.differential[j][k].is_zero() {
                        acc = acc.add(&self.differential[i][j].mul(&self.differential[j][k]));
                    }
                }
                if !acc.is_zero() {
                    return Err(Error::complex(
                        &self.generators[i].id,
                        format!("d∘d ≠ 0: lands on `{}` with {acc:?}", self.generators[k].id),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Action of a chain sum(lambda_i x_i): max over i of A(x_i) - nu(lambda_i).
    /// Errors on the zero chain.
    pub fn chain_action(&self, coeffs: &[NovikovScalar]) -> Result<f64, Error> {
        if coeffs.len() != self.len() {
            return Err(Error::Input("chain coefficient count mismatch".into()));
        }
        let mut best = f64::NEG_INFINITY;
        for (i, c) in coeffs.iter().enumerate() {
            if let Some(v) = c.valuation() {
                best = best.max(self.generators[i].action - v);
            }
        }
        if best == f64::NEG_INFINITY {
            return Err(Error::Input("zero chain has action -infinity; callers must branch".into()));
        }
        Ok(best)
    }

    /// d applied to a coefficient vector.
    pub fn apply_differential(&self, coeffs: &[NovikovScalar]) -> Vec<NovikovScalar> {
        let n = self.len();
        let mut out = vec![NovikovScalar::zero(); n];
        for (i, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for j in 0..n {
                if !self.differential[i][j].is_zero() {
                    out[j] = out[j].add(&c.mul(&self.differential[i][j]));
                }
            }
        }
        out
    }

    /// Dual complex: transposed differential, negated actions. Arrow lengths
    /// are preserved, hence so is the unpinned barcode.
    pub fn dual(&self) -> NovikovComplex {
        let n = self.len();
        let generators = self
            .generators
            .iter()
            .map(|g| NovikovGenerator { id: format!("{}*", g.id), action: -g.action })
            .collect();
        let mut differential = vec![vec![NovikovScalar::zero(); n]; n];
        for (i, row) in self.differential.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                differential[j][i] = entry.clone();
            }
        }
        NovikovComplex { generators, differential }
    }

    /// Tensor product over the Novikov field: generators pair up, actions add,
    /// and the differential follows the Leibniz rule (signs vanish in
    /// characteristic two).
    pub fn tensor(&self, other: &NovikovComplex) -> NovikovComplex {
        let (na, nb) = (self.len(), other.len());
        let idx = |i: usize, j: usize| i * nb + j;
        let mut generators = Vec::with_capacity(na * nb);
        for i in 0..na {
            for j in 0..nb {
                generators.push(NovikovGenerator {
                    id: format!("{}⊗{}", self.generators[i].id, other.generators[j].id),
                    action: self.generators[i].action + other.generators[j].action,
                });
            }
        }
        let mut differential = vec![vec![NovikovScalar::zero(); na * nb]; na * nb];
        for i in 0..na {
            for j in 0..nb {
                // entries may collide at (i,j) -> (i,j) when both factors have
                // a diagonal term, so accumulate
                for k in 0..na {
                    if !self.differential[i][k].is_zero() {
                        let cell = &mut differential[idx(i, j)][idx(k, j)];
                        *cell = cell.add(&self.differential[i][k]);
                    }
                }
                for l in 0..nb {
                    if !other.differential[j][l].is_zero() {
                        let cell = &mut differential[idx(i, j)][idx(i, l)];
                        *cell = cell.add(&other.differential[j][l]);
                    }
                }
            }
        }
        NovikovComplex { generators, differential }
    }

    /// Shift every action by an independent uniform value in [-bound, bound],
    /// resampling until strict action decrease survives (up to 1000 draws).
    pub fn perturb_actions(&self, bound: f64, rng: &mut Stream) -> Result<(Self, f64), Error> {
        if bound < 0.0 {
            return Err(Error::Input("perturbation bound must be >= 0".into()));
        }
        for _ in 0..1000 {
            let mut c = self.clone();
            let mut max_shift = 0.0f64;
            for g in c.generators.iter_mut() {
                let shift = if bound == 0.0 { 0.0 } else { rng.range_f64(-bound, bound) };
                g.action += shift;
                max_shift = max_shift.max(shift.abs());
            }
            if c.validate().is_ok() {
                return Ok((c, max_shift));
            }
        }
        Err(Error::Input(format!(
            "could not restore strict action decrease after 1000 resamples at bound {bound}"
        )))
    }

    /// Unpinned barcode via orthogonalization; see [`orthogonalize`].
    pub fn unpinned_barcode(&self) -> Result<UnpinnedBarcode, Error> {
        Ok(orthogonalize(self, PivotOrder::Forward)?.barcode)
    }
}

/// Directed graph of differential terms: one arrow per monomial, labelled by
/// its exponent, with length the action difference A(from) - A(to) + a.
#[derive(Clone, Debug)]
pub struct FloerGraph {
    pub vertices: Vec<NovikovGenerator>,
    /// (from, to, exponent, length)
    pub arrows: Vec<(usize, usize, f64, f64)>,
}

pub fn floer_graph(c: &NovikovComplex) -> FloerGraph {
    let mut arrows = Vec::new();
    for (i, row) in c.differential.iter().enumerate() {
        for (j, entry) in row.iter().enumerate() {
            for &a in entry.terms() {
                let len = c.generators[i].action - c.generators[j].action + a;
                arrows.push((i, j, a, len));
            }
        }
    }
    FloerGraph { vertices: c.generators.clone(), arrows }
}

/// Vertices all of whose incident arrows (incoming or outgoing) are strictly
/// longer than eps. Returns (count, vertex indices).
pub fn isolated_count(g: &FloerGraph, eps: f64) -> Result<(usize, Vec<usize>), Error> {
    if eps <= 0.0 {
        return Err(Error::Input(format!("isolated_count needs eps > 0, got {eps}")));
    }
    let mut blocked = vec![false; g.vertices.len()];
    for &(from, to, _, len) in &g.arrows {
        if len <= eps {
            blocked[from] = true;
            blocked[to] = true;
        }
    }
    let ids: Vec<usize> = (0..g.vertices.len()).filter(|&v| !blocked[v]).collect();
    Ok((ids.len(), ids))
}

/// Barcode of a tensor product predicted from the factors' bars: a pair of
/// finite bars contributes two bars of the smaller length, a pair with at
/// least one infinite bar contributes a single bar of the smaller length.
pub fn tensor_pairing_law(a: &UnpinnedBarcode, b: &UnpinnedBarcode) -> UnpinnedBarcode {
    let mut lengths = Vec::new();
    let mut infinite = 0usize;
    for &la in &a.lengths {
        for &lb in &b.lengths {
            let m = la.min(lb);
            lengths.push(m);
            lengths.push(m);
        }
        // finite x infinite: one bar of the finite length
        lengths.extend(std::iter::repeat_n(la, b.infinite));
    }
    for &lb in &b.lengths {
        lengths.extend(std::iter::repeat_n(lb, a.infinite));
    }
    infinite += a.infinite * b.infinite;
    UnpinnedBarcode::new(lengths, infinite).unwrap()
}

/// Ground truth of a planted instance: the barcode is known by construction.
#[derive(Clone, Debug)]
pub struct PlantedComplex {
    pub complex: NovikovComplex,
    pub truth: UnpinnedBarcode,
}

/// Build a complex with a known barcode: start from a normal form (matched
/// pairs with chosen lengths plus cycles) and conjugate by random elementary
/// action-compatible basis changes, which preserve the barcode exactly.
pub fn plant_random(pairs: usize, cycles: usize, ops: usize, rng: &mut Stream) -> PlantedComplex {
    let n = 2 * pairs + cycles;
    let mut generators = Vec::with_capacity(n);
    let mut lengths = Vec::with_capacity(pairs);
    let mut differential = vec![vec![NovikovScalar::zero(); n]; n];
    for p in 0..pairs {
        let ax = rng.dyadic(0.0, 4.0, 8);
        let ay = rng.dyadic(0.0, 4.0, 8);
        let len = rng.dyadic(0.0, 3.0, 8) + 1.0 / 256.0;
        lengths.push(len);
        generators.push(NovikovGenerator { id: format!("x{p}"), action: ax });
        generators.push(NovikovGenerator { id: format!("y{p}"), action: ay });
        let e = len - ax + ay;
        differential[2 * p][2 * p + 1] = NovikovScalar::monomial(e);
    }
    for z in 0..cycles {
        generators.push(NovikovGenerator { id: format!("z{z}"), action: rng.dyadic(0.0, 4.0, 8) });
    }
    let mut complex = NovikovComplex { generators, differential };

    for _ in 0..ops {
        if n < 2 {
            break;
        }
        let i = rng.below(n);
        let mut j = rng.below(n);
        if i == j {
            j = (j + 1) % n;
        }
        let gamma = (complex.generators[j].action - complex.generators[i].action).max(0.0)
            + rng.dyadic(0.0, 2.0, 8);
        let mut trial = complex.clone();
        elementary_conjugate(&mut trial, i, j, &NovikovScalar::monomial(gamma));
        if trial.validate().is_ok() {
            complex = trial;
        }
    }
    let truth = UnpinnedBarcode::new(lengths, cycles).unwrap();
    PlantedComplex { complex, truth }
}

/// Basis change x_i := x_i + c x_j (i != j), conjugating the differential.
pub fn elementary_conjugate(c: &mut NovikovComplex, i: usize, j: usize, coeff: &NovikovScalar) {
    assert_ne!(i, j);
    let n = c.len();
    let old = c.differential.clone();
    // B' = (I + cE_ij) B (I + cE_ij)
    for l in 0..n {
        let add = coeff.mul(&old[j][l]);
        if !add.is_zero() {
            c.differential[i][l] = c.differential[i][l].add(&add);
        }
    }
    for k in 0..n {
        let add = coeff.mul(&old[k][i]);
        if !add.is_zero() {
            c.differential[k][j] = c.differential[k][j].add(&add);
        }
    }
    let corner = coeff.mul(coeff).mul(&old[j][i]);
    if !corner.is_zero() {
        c.differential[i][j] = c.differential[i][j].add(&corner);
    }
}
