//! Python bindings. Points are `(x, y, z)` float tuples and cell ids are
//! `(u, v, w)` int tuples.

use std::collections::HashSet;

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use wsn3d::routing::greedy_route_with;
use wsn3d::simulator::lifetime_simulation;
use wsn3d::tables::{table_rows, Table};
use wsn3d::{planner, Aabb, CellId, CellShape, DeploymentConfig, Point3, RouteOutcome, TieBreak};

type Triple = (f64, f64, f64);
type Id = (i64, i64, i64);

fn err(e: wsn3d::Error) -> PyErr {
    match e {
        wsn3d::Error::Io(io) => PyOSError::new_err(io.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn shape(s: &str) -> PyResult<CellShape> {
    s.parse().map_err(err)
}

fn point(p: Triple) -> PyResult<Point3> {
    Point3::try_new(p.0, p.1, p.2).map_err(err)
}

fn triple(p: Point3) -> Triple {
    (p.x, p.y, p.z)
}

fn cell(id: Id) -> CellId {
    CellId::new(id.0, id.1, id.2)
}

fn id(c: CellId) -> Id {
    (c.u, c.v, c.w)
}

/// A tessellation: shape, transmission range and sink.
#[pyclass(name = "LatticeSpec", module = "wsn3d", frozen)]
struct PyLatticeSpec {
    inner: wsn3d::LatticeSpec,
}

#[pymethods]
impl PyLatticeSpec {
    #[new]
    #[pyo3(signature = (shape_code, r_t, sink = (0.0, 0.0, 0.0)))]
    fn new(shape_code: &str, r_t: f64, sink: Triple) -> PyResult<Self> {
        let inner = wsn3d::LatticeSpec::new(shape(shape_code)?, r_t, point(sink)?).map_err(err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn shape(&self) -> &'static str {
        self.inner.shape().code()
    }

    #[getter]
    fn r_t(&self) -> f64 {
        self.inner.transmission_range()
    }

    #[getter]
    fn sink(&self) -> Triple {
        triple(self.inner.sink())
    }

    /// Cell circumradius.
    #[getter]
    fn radius(&self) -> f64 {
        self.inner.radius()
    }

    fn assign_cell(&self, p: Triple) -> PyResult<Id> {
        Ok(id(self.inner.assign_cell(point(p)?)))
    }

    fn assign_cell_nearest_int(&self, p: Triple) -> PyResult<Id> {
        Ok(id(self.inner.assign_cell_nearest_int(point(p)?)))
    }

    #[pyo3(signature = (p, window = wsn3d::ORACLE_WINDOW))]
    fn assign_cell_oracle(&self, p: Triple, window: u32) -> PyResult<Id> {
        self.inner
            .assign_cell_oracle(point(p)?, window)
            .map(id)
            .map_err(err)
    }

    fn cell_center(&self, c: Id) -> Triple {
        triple(self.inner.cell_center(cell(c)))
    }

    fn vertices(&self, c: Id) -> Vec<Triple> {
        self.inner
            .polyhedron(cell(c))
            .vertices
            .into_iter()
            .map(triple)
            .collect()
    }

    fn neighbors(&self, c: Id) -> Vec<Id> {
        self.inner.neighbors(cell(c)).into_iter().map(id).collect()
    }

    /// `(max_neighbor_distance, binding_class, ok)`.
    fn verify_connectivity(&self) -> (f64, &'static str, bool) {
        let r = planner::verify_connectivity(&self.inner);
        (r.max_neighbor_distance, r.binding_class, r.ok)
    }

    fn verify_coverage(&self, sensing_range: f64) -> PyResult<bool> {
        planner::verify_coverage(&self.inner, sensing_range).map_err(err)
    }

    fn accuracy_experiment<'py>(
        &self,
        py: Python<'py>,
        n: usize,
        seed: u64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let rep = wsn3d::simulator::accuracy_experiment(&self.inner, n, seed).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("n", rep.n)?;
        d.set_item("correct_exact", rep.correct_exact)?;
        d.set_item("correct_nearest_int", rep.correct_nearest_int)?;
        Ok(d)
    }

    #[pyo3(signature = (box_min, box_max, node_count, seed, battery_capacity = 1.0, k = 1))]
    #[allow(clippy::too_many_arguments)]
    fn lifetime_simulation<'py>(
        &self,
        py: Python<'py>,
        box_min: Triple,
        box_max: Triple,
        node_count: usize,
        seed: u64,
        battery_capacity: f64,
        k: usize,
    ) -> PyResult<Bound<'py, PyDict>> {
        let region = Aabb::new(point(box_min)?, point(box_max)?).map_err(err)?;
        let config = DeploymentConfig::new(region, node_count, seed).map_err(err)?;
        let r = py
            .detach(|| lifetime_simulation(&self.inner, &config, battery_capacity, k))
            .map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("shape", r.shape.code())?;
        d.set_item("k", r.k)?;
        d.set_item("battery_capacity", r.battery_capacity)?;
        d.set_item("interior_cells", r.interior_cells)?;
        d.set_item("cells_populated", r.cells_populated)?;
        d.set_item("mean_nodes_per_cell", r.mean_nodes_per_cell)?;
        d.set_item("network_lifetime", r.network_lifetime)?;
        d.set_item("first_failed_cell", id(r.first_failed_cell))?;
        d.set_item("active_count_over_time", r.active_count_over_time)?;
        Ok(d)
    }

    /// Greedy route; returns `(hops, outcome)` with outcome `"delivered"`
    /// or `"dead_end"`. `seed` switches to random choice among improving
    /// neighbors.
    #[pyo3(signature = (src, dst, dead_cells = Vec::new(), seed = None))]
    fn greedy_route(
        &self,
        src: Id,
        dst: Id,
        dead_cells: Vec<Id>,
        seed: Option<u64>,
    ) -> PyResult<(Vec<Id>, &'static str)> {
        let dead: HashSet<CellId> = dead_cells.into_iter().map(cell).collect();
        let tie_break = seed.map_or(TieBreak::MinMetric, |seed| TieBreak::Random { seed });
        let path = greedy_route_with(
            &self.inner,
            cell(src),
            cell(dst),
            |c| !dead.contains(&c),
            tie_break,
        )
        .map_err(err)?;
        let outcome = match path.outcome {
            RouteOutcome::Delivered => "delivered",
            RouteOutcome::DeadEnd => "dead_end",
        };
        Ok((path.hops.into_iter().map(id).collect(), outcome))
    }

    fn __repr__(&self) -> String {
        format!(
            "LatticeSpec('{}', r_t={}, sink={})",
            self.inner.shape().code().to_lowercase(),
            self.inner.transmission_range(),
            self.inner.sink()
        )
    }
}

#[pyfunction]
fn max_cell_radius(shape_code: &str, r_t: f64) -> PyResult<f64> {
    wsn3d::max_cell_radius(shape(shape_code)?, r_t).map_err(err)
}

#[pyfunction]
fn min_sensing_range(shape_code: &str, r_t: f64) -> PyResult<f64> {
    planner::min_sensing_range(shape(shape_code)?, r_t).map_err(err)
}

#[pyfunction]
fn cell_volume(shape_code: &str, radius: f64) -> PyResult<f64> {
    wsn3d::cell_volume(shape(shape_code)?, radius).map_err(err)
}

#[pyfunction]
fn shape_report<'py>(py: Python<'py>, shape_code: &str) -> PyResult<Bound<'py, PyDict>> {
    let r = planner::shape_report(shape(shape_code)?);
    let d = PyDict::new(py);
    d.set_item("shape", r.shape.code())?;
    d.set_item("neighbor_count", r.neighbor_count)?;
    d.set_item("max_radius_coeff", r.max_radius_coeff)?;
    d.set_item("min_sensing_coeff", r.min_sensing_coeff)?;
    d.set_item("cell_volume_coeff", r.cell_volume_coeff)?;
    d.set_item("active_node_ratio_vs_to", r.active_node_ratio_vs_to)?;
    d.set_item("lifetime_fraction_vs_to", r.lifetime_fraction_vs_to)?;
    Ok(d)
}

/// Rows of table `"I"` or `"II"` as dicts.
#[pyfunction]
fn table<'py>(py: Python<'py>, which: &str) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let which: Table = which.parse().map_err(err)?;
    table_rows(which)
        .into_iter()
        .map(|r| {
            let d = PyDict::new(py);
            d.set_item("shape", r.shape.code())?;
            d.set_item("quantity", r.quantity)?;
            d.set_item("unit", r.unit)?;
            d.set_item("exact", r.exact)?;
            d.set_item("computed", r.computed)?;
            d.set_item("cross_check", r.cross_check)?;
            d.set_item("quoted", r.quoted)?;
            d.set_item("deviation", r.deviation)?;
            d.set_item("pass", r.pass)?;
            Ok(d)
        })
        .collect()
}

#[pymodule(name = "wsn3d")]
fn wsn3d_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyLatticeSpec>()?;
    m.add_function(wrap_pyfunction!(max_cell_radius, m)?)?;
    m.add_function(wrap_pyfunction!(min_sensing_range, m)?)?;
    m.add_function(wrap_pyfunction!(cell_volume, m)?)?;
    m.add_function(wrap_pyfunction!(shape_report, m)?)?;
    m.add_function(wrap_pyfunction!(table, m)?)?;
    m.add("SHAPES", ["CB", "HP", "RD", "TO"])?;
    Ok(())
}
