//! Python bindings for the bardyn toolkit. The classes mirror the Rust API
//! surface: filtered complexes in and barcodes out, plus the entropy,
//! Crofton, and toric entry points.

use bardyn::crofton::{Polyline, Space, Tomograph};
use bardyn::dynamics::{self, DynamicalSystem};
use bardyn::io::{self, ParsedComplex};
use bardyn::novikov;
use bardyn::persistence::{self, SimplicialComplex};
use bardyn::toric;
use bardyn::verify;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: bardyn::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Multiset of bars (start, end, multiplicity); end is None for infinite bars.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Barcode {
    inner: persistence::Barcode,
}

#[pymethods]
impl Barcode {
    fn bars(&self) -> Vec<(f64, Option<f64>, usize)> {
        self.inner
            .bars
            .iter()
            .map(|b| (b.start, b.end.is_finite().then_some(b.end), b.multiplicity))
            .collect()
    }

    /// Number of bars longer than eps born strictly below s.
    #[pyo3(signature = (eps, s = f64::INFINITY))]
    fn b_eps(&self, eps: f64, s: f64) -> PyResult<usize> {
        persistence::barcode_function(&self.inner, eps, s).map_err(err)
    }

    fn beta_max(&self) -> f64 {
        persistence::beta_max(&self.inner)
    }

    fn bottleneck(&self, other: &Barcode) -> f64 {
        persistence::bottleneck_distance(&self.inner, &other.inner)
    }

    fn to_csv(&self) -> String {
        io::barcode_to_csv(&self.inner)
    }

    fn __len__(&self) -> usize {
        self.inner.total_multiplicity()
    }

    fn __repr__(&self) -> String {
        format!("Barcode({} bars)", self.inner.total_multiplicity())
    }
}

/// Filtered chain complex over F2.
#[pyclass]
struct F2Complex {
    inner: persistence::FilteredComplexF2,
}

#[pymethods]
impl F2Complex {
    /// Parse the complex JSON format (coefficients = "F2").
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        match io::parse_complex(text).map_err(err)? {
            ParsedComplex::F2(c) => Ok(F2Complex { inner: c }),
            ParsedComplex::Novikov(_) => {
                Err(PyValueError::new_err("complex has Novikov coefficients"))
            }
        }
    }

    /// Lower-star filtration of a simplicial complex with vertex values.
    #[staticmethod]
    fn sublevel(simplices: Vec<Vec<usize>>, values: Vec<f64>) -> PyResult<Self> {
        let sc = SimplicialComplex::new(simplices).map_err(err)?;
        Ok(F2Complex { inner: persistence::sublevel_filtration(&sc, &values).map_err(err)? })
    }

    /// The four-critical-value sphere model.
    #[staticmethod]
    fn sphere_demo() -> Self {
        let (sc, values) = SimplicialComplex::sphere_model();
        F2Complex { inner: persistence::sublevel_filtration(&sc, &values).unwrap() }
    }

    fn barcode(&self) -> PyResult<Barcode> {
        Ok(Barcode {
            inner: persistence::reduce_filtered_complex(&self.inner).map_err(err)?.barcode,
        })
    }

    /// Barcode through the sampled-module rank formula (the independent
    /// route; equal to `barcode()` on every valid complex).
    fn rank_formula_barcode(&self) -> PyResult<Barcode> {
        Ok(Barcode { inner: persistence::rank_formula_barcode(&self.inner).map_err(err)? })
    }

    #[pyo3(signature = (bound, seed = 17))]
    fn perturb_actions(&self, bound: f64, seed: u64) -> PyResult<(F2Complex, f64)> {
        let mut rng = bardyn::rng::Stream::named(seed, "python.perturb");
        let (c, shift) = self.inner.perturb_actions(bound, &mut rng).map_err(err)?;
        Ok((F2Complex { inner: c }, shift))
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

/// Unpinned barcode: finite lengths plus a count of infinite bars.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct UnpinnedBarcode {
    inner: novikov::UnpinnedBarcode,
}

#[pymethods]
impl UnpinnedBarcode {
    fn lengths(&self) -> Vec<f64> {
        self.inner.lengths.clone()
    }

    #[getter]
    fn infinite(&self) -> usize {
        self.inner.infinite
    }

    fn b_eps(&self, eps: f64) -> PyResult<usize> {
        self.inner.b_eps(eps).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("UnpinnedBarcode({:?} + {} infinite)", self.inner.lengths, self.inner.infinite)
    }
}

/// Filtered complex over the Novikov field with F2 coefficients.
#[pyclass]
struct NovikovComplex {
    inner: novikov::NovikovComplex,
}

#[pymethods]
impl NovikovComplex {
    /// Parse the complex JSON format (coefficients = "Novikov-F2").
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        match io::parse_complex(text).map_err(err)? {
            ParsedComplex::Novikov(c) => Ok(NovikovComplex { inner: c }),
            ParsedComplex::F2(_) => Err(PyValueError::new_err("complex has F2 coefficients")),
        }
    }

    fn unpinned_barcode(&self) -> PyResult<UnpinnedBarcode> {
        Ok(UnpinnedBarcode { inner: self.inner.unpinned_barcode().map_err(err)? })
    }

    fn dual(&self) -> NovikovComplex {
        NovikovComplex { inner: self.inner.dual() }
    }

    fn tensor(&self, other: &NovikovComplex) -> NovikovComplex {
        NovikovComplex { inner: self.inner.tensor(&other.inner) }
    }

    /// Count of eps-isolated vertices of the Floer graph.
    fn isolated_count(&self, eps: f64) -> PyResult<usize> {
        let g = novikov::floer_graph(&self.inner);
        Ok(novikov::isolated_count(&g, eps).map_err(err)?.0)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

fn parse_system(spec: &str) -> PyResult<DynamicalSystem> {
    serde_json::from_str(spec).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Topological entropy estimate; returns (value, [(eps, rate), ...]).
#[pyfunction]
#[pyo3(signature = (system_json, eps_grid, k_max = 10, budget = 1 << 16, seed = 17))]
fn htop_estimate(
    system_json: &str,
    eps_grid: Vec<f64>,
    k_max: usize,
    budget: usize,
    seed: u64,
) -> PyResult<(f64, Vec<(f64, f64)>)> {
    let sys = parse_system(system_json)?;
    let est = dynamics::htop_estimate(&sys, &eps_grid, (1, k_max), budget, seed).map_err(err)?;
    let per: Vec<(f64, f64)> = est.per_eps_rates.iter().map(|(e, f)| (*e, f.rate)).collect();
    Ok((est.value, per))
}

/// Exact count of fixed points of the k-th iterate (second value false when
/// the count is a grid approximation).
#[pyfunction]
fn periodic_count(system_json: &str, k: u32) -> PyResult<(f64, bool)> {
    dynamics::periodic_count(&parse_system(system_json)?, k).map_err(err)
}

/// Crofton integral of the (p, theta) line family against a plane polyline.
#[pyfunction]
#[pyo3(signature = (points, closed = false, samples = 100_000, seed = 17))]
fn crofton_lines(
    points: Vec<[f64; 2]>,
    closed: bool,
    samples: usize,
    seed: u64,
) -> PyResult<(f64, f64, bool)> {
    let t = Tomograph::lines(2.0, 4.0);
    let target = Polyline { space: Space::Plane, points, closed };
    let r = bardyn::crofton::crofton_mc(&t, &target, samples, seed).map_err(err)?;
    Ok((r.integral, r.stderr, r.inequality_pass && r.formula_pass))
}

/// Reeb generator count sum_i floor(s / a_i) of the ellipsoid E(a).
#[pyfunction]
fn ellipsoid_generator_count(a: Vec<f64>, s: f64) -> PyResult<u64> {
    Ok(toric::EllipsoidSpec::new(a).map_err(err)?.generator_count(s))
}

/// Infinite loop-space bars of the flat torus born below energy s.
#[pyfunction]
fn flat_torus_count(v1: [f64; 2], v2: [f64; 2], s: f64) -> PyResult<usize> {
    let basis = toric::LatticeBasis::new(v1, v2).map_err(err)?;
    let b = toric::flat_torus_loop_barcode(&basis, s).map_err(err)?;
    persistence::barcode_function(&b, 1.0, s).map_err(err)
}

/// Run an acceptance suite ("all" or "fast"); returns (id, name, pass,
/// details) per criterion.
#[pyfunction]
#[pyo3(signature = (suite = "fast", seed = 17))]
fn run_verify(suite: &str, seed: u64) -> PyResult<Vec<(u32, String, bool, String)>> {
    let ids = verify::criterion_ids(suite)
        .ok_or_else(|| PyValueError::new_err(format!("unknown suite `{suite}`")))?;
    Ok(ids
        .into_iter()
        .map(|id| {
            let o = verify::run_criterion(id, seed);
            (o.id, o.name.to_string(), o.pass, o.details)
        })
        .collect())
}

#[pymodule]
fn _bardyn(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Barcode>()?;
    m.add_class::<F2Complex>()?;
    m.add_class::<NovikovComplex>()?;
    m.add_class::<UnpinnedBarcode>()?;
    m.add_function(wrap_pyfunction!(htop_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(periodic_count, m)?)?;
    m.add_function(wrap_pyfunction!(crofton_lines, m)?)?;
    m.add_function(wrap_pyfunction!(ellipsoid_generator_count, m)?)?;
    m.add_function(wrap_pyfunction!(flat_torus_count, m)?)?;
    m.add_function(wrap_pyfunction!(run_verify, m)?)?;
    Ok(())
}
