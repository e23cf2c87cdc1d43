//! Analytical shape comparison: radii, sensing ranges, cell volumes,
//! active-node ratios and lifetime fractions, plus connectivity and
//! coverage checks for a concrete lattice.

use serde::Serialize;

use crate::error::{require_positive, Result};
use crate::geometry::{
    max_cell_radius, max_vertex_pair_distance, neighbor_classes, CellShape, NeighborClass, Point3,
    Polyhedron,
};
use crate::lattice::{CellId, LatticeSpec};

/// Relative tolerance for geometric identities.
pub const GEOMETRIC_RTOL: f64 = 1e-9;

/// Absolute tolerance, in units of `r_t`, for ranges quoted as six-digit
/// decimals (a quoted `0.542326·r_t` sensing range must count as covering).
pub const QUOTED_ATOL: f64 = 1e-6;

/// Minimum sensing range: the cell diameter `2R` at the largest connected
/// radius.
pub fn min_sensing_range(shape: CellShape, r_t: f64) -> Result<f64> {
    Ok(2.0 * max_cell_radius(shape, r_t)?)
}

/// Cell volume per `r_t³` at the largest connected radius.
pub fn cell_volume_coeff(shape: CellShape) -> f64 {
    let s17 = 17.0_f64.sqrt();
    match shape {
        CellShape::Cube => 1.0 / (24.0 * 3.0_f64.sqrt()),
        CellShape::HexagonalPrism => 1.0 / (7.0 * 14.0_f64.sqrt()),
        CellShape::RhombicDodecahedron => 1.0 / 32.0,
        CellShape::TruncatedOctahedron => 4.0 / (17.0 * s17),
    }
}

/// Active nodes needed relative to the TO tessellation (cells per volume).
pub fn active_node_ratio(shape: CellShape) -> f64 {
    let s17x17 = 17.0 * 17.0_f64.sqrt();
    match shape {
        CellShape::Cube => 96.0 * 3.0_f64.sqrt() / s17x17,
        CellShape::HexagonalPrism => 28.0 * 14.0_f64.sqrt() / s17x17,
        CellShape::RhombicDodecahedron => 128.0 / s17x17,
        CellShape::TruncatedOctahedron => 1.0,
    }
}

/// Network lifetime relative to TO: nodes per cell scale with cell volume.
pub fn lifetime_fraction(shape: CellShape) -> f64 {
    let s17x17 = 17.0 * 17.0_f64.sqrt();
    match shape {
        CellShape::Cube => s17x17 / (96.0 * 3.0_f64.sqrt()),
        CellShape::HexagonalPrism => s17x17 / (28.0 * 14.0_f64.sqrt()),
        CellShape::RhombicDodecahedron => s17x17 / 128.0,
        CellShape::TruncatedOctahedron => 1.0,
    }
}

/// Closed-form expressions backing the decimal report values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactForms {
    pub max_radius_coeff: &'static str,
    pub min_sensing_coeff: &'static str,
    pub cell_volume_coeff: &'static str,
    pub active_node_ratio_vs_to: &'static str,
    pub lifetime_fraction_vs_to: &'static str,
}

fn exact_forms(shape: CellShape) -> ExactForms {
    match shape {
        CellShape::Cube => ExactForms {
            max_radius_coeff: "1/4",
            min_sensing_coeff: "1/2",
            cell_volume_coeff: "1/(24*sqrt(3))",
            active_node_ratio_vs_to: "96*sqrt(3)/(17*sqrt(17))",
            lifetime_fraction_vs_to: "17*sqrt(17)/(96*sqrt(3))",
        },
        CellShape::HexagonalPrism => ExactForms {
            max_radius_coeff: "1/sqrt(14)",
            min_sensing_coeff: "2/sqrt(14)",
            cell_volume_coeff: "1/(7*sqrt(14))",
            active_node_ratio_vs_to: "28*sqrt(14)/(17*sqrt(17))",
            lifetime_fraction_vs_to: "17*sqrt(17)/(28*sqrt(14))",
        },
        CellShape::RhombicDodecahedron => ExactForms {
            max_radius_coeff: "1/4",
            min_sensing_coeff: "1/2",
            cell_volume_coeff: "1/32",
            active_node_ratio_vs_to: "128/(17*sqrt(17))",
            lifetime_fraction_vs_to: "17*sqrt(17)/128",
        },
        CellShape::TruncatedOctahedron => ExactForms {
            max_radius_coeff: "sqrt(5)/(2*sqrt(17))",
            min_sensing_coeff: "sqrt(5)/sqrt(17)",
            cell_volume_coeff: "4/(17*sqrt(17))",
            active_node_ratio_vs_to: "1",
            lifetime_fraction_vs_to: "1",
        },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShapeReport {
    pub shape: CellShape,
    pub neighbor_count: usize,
    /// `R / r_t`
    pub max_radius_coeff: f64,
    /// `r_s / r_t`
    pub min_sensing_coeff: f64,
    /// `V / r_t³`
    pub cell_volume_coeff: f64,
    pub active_node_ratio_vs_to: f64,
    pub lifetime_fraction_vs_to: f64,
    pub exact: ExactForms,
}

pub fn shape_report(shape: CellShape) -> ShapeReport {
    let radius = max_cell_radius(shape, 1.0).expect("unit range");
    ShapeReport {
        shape,
        neighbor_count: shape.neighbor_count(),
        max_radius_coeff: radius,
        min_sensing_coeff: 2.0 * radius,
        cell_volume_coeff: cell_volume_coeff(shape),
        active_node_ratio_vs_to: active_node_ratio(shape),
        lifetime_fraction_vs_to: lifetime_fraction(shape),
        exact: exact_forms(shape),
    }
}

pub fn shape_reports() -> Vec<ShapeReport> {
    CellShape::ALL.iter().map(|s| shape_report(*s)).collect()
}

/// Furthest point pair between a cell at the origin and every neighbor of
/// `class`, in units of `R`, found by exhaustive vertex-pair search.
pub fn brute_force_class_coeff(class: &NeighborClass) -> f64 {
    let radius = 1.0;
    let origin = Polyhedron::build(class.shape, Point3::ZERO, radius).expect("unit radius");
    class
        .offsets
        .iter()
        .map(|d| {
            let c = class.shape.lattice_offset(radius, *d);
            let other = Polyhedron::build(class.shape, c, radius).expect("unit radius");
            max_vertex_pair_distance(&origin, &other)
        })
        .fold(0.0, f64::max)
}

/// `R / r_t` recomputed from the vertex search instead of the closed form.
pub fn brute_force_radius_coeff(shape: CellShape) -> f64 {
    let worst = neighbor_classes(shape)
        .iter()
        .map(brute_force_class_coeff)
        .fold(0.0, f64::max);
    1.0 / worst
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConnectivityReport {
    pub max_neighbor_distance: f64,
    /// Label of the neighbor class attaining the maximum.
    pub binding_class: &'static str,
    pub ok: bool,
}

/// Checks that any point of a cell reaches any point of every first-tier
/// neighbor within `r_t`, by vertex-pair search at the spec's radius.
pub fn verify_connectivity(spec: &LatticeSpec) -> ConnectivityReport {
    let origin = spec.polyhedron(CellId::default());
    let mut best = (0.0_f64, "");
    for class in neighbor_classes(spec.shape()) {
        for d in &class.offsets {
            let dist = max_vertex_pair_distance(&origin, &spec.polyhedron(*d));
            if dist > best.0 {
                best = (dist, class.label);
            }
        }
    }
    let r_t = spec.transmission_range();
    ConnectivityReport {
        max_neighbor_distance: best.0,
        binding_class: best.1,
        ok: best.0 <= r_t * (1.0 + GEOMETRIC_RTOL),
    }
}

/// True iff `sensing_range` covers the cell diameter `2R`, up to
/// [`QUOTED_ATOL`]`·r_t`.
pub fn verify_coverage(spec: &LatticeSpec, sensing_range: f64) -> Result<bool> {
    require_positive("sensing range", sensing_range)?;
    Ok(sensing_range >= 2.0 * spec.radius() - QUOTED_ATOL * spec.transmission_range())
}
