//! Side-by-side comparison of the computed shape constants with their
//! commonly quoted decimal values.
//!
//! A row passes when the computed value is within the row tolerance of the
//! quoted one, or when the quoted decimal is exactly the computed value
//! rounded to the same (nonzero) number of places (quoted constants are rounded, so
//! e.g. `1/√14 = 0.2672612…` is correctly quoted as `0.26726`).

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{invalid, Error};
use crate::geometry::{
    cell_volume, max_cell_radius, neighbor_classes, CellShape, Point3, Polyhedron,
};
use crate::planner::{
    active_node_ratio, brute_force_class_coeff, brute_force_radius_coeff, lifetime_fraction,
    shape_report,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Table {
    I,
    II,
}

impl Table {
    /// Absolute tolerance applied to every row of the table.
    pub fn tolerance(self) -> f64 {
        match self {
            Table::I => 1e-6,
            Table::II => 1e-5,
        }
    }
}

impl fmt::Display for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Table::I => "I",
            Table::II => "II",
        })
    }
}

impl FromStr for Table {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "I" | "i" | "1" => Ok(Table::I),
            "II" | "ii" | "2" => Ok(Table::II),
            _ => Err(invalid(format!("unknown table {s:?} (expected I or II)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRow {
    pub table: Table,
    pub shape: CellShape,
    pub quantity: String,
    /// What `computed` is measured in: `R`, `r_t`, `count` or `ratio`.
    pub unit: &'static str,
    pub exact: String,
    pub computed: f64,
    /// The same quantity obtained independently (vertex search or hull
    /// volume); equals `computed` for counts.
    pub cross_check: f64,
    pub quoted: &'static str,
    pub quoted_value: f64,
    pub deviation: f64,
    pub tolerance: f64,
    /// `deviation <= tolerance`.
    pub within_tolerance: bool,
    /// `quoted` equals `computed` rounded to the quoted precision.
    pub rounds_to_quoted: bool,
    pub pass: bool,
}

/// Parses a quoted decimal, `42.154%` style percentages included. Returns
/// the value and its number of decimal places.
fn parse_quoted(q: &str) -> (f64, usize) {
    let (digits, scale) = match q.strip_suffix('%') {
        Some(d) => (d, 2),
        None => (q, 0),
    };
    let places = digits.split_once('.').map_or(0, |(_, f)| f.len()) + scale;
    let value: f64 = digits.parse().expect("well-formed quoted constant");
    (value / 10f64.powi(scale as i32), places)
}

// Whole numbers are quoted exactly, so only decimals get the rounding gate.
fn rounds_to(computed: f64, quoted_value: f64, places: usize) -> bool {
    places > 0 && format!("{computed:.places$}") == format!("{quoted_value:.places$}")
}

#[allow(clippy::too_many_arguments)]
fn row(
    table: Table,
    shape: CellShape,
    quantity: impl Into<String>,
    unit: &'static str,
    exact: impl Into<String>,
    computed: f64,
    cross_check: f64,
    quoted: &'static str,
) -> TableRow {
    let (quoted_value, places) = parse_quoted(quoted);
    let deviation = (computed - quoted_value).abs();
    let tolerance = table.tolerance();
    let within_tolerance = deviation <= tolerance;
    let rounds_to_quoted = rounds_to(computed, quoted_value, places);
    TableRow {
        table,
        shape,
        quantity: quantity.into(),
        unit,
        exact: exact.into(),
        computed,
        cross_check,
        quoted,
        quoted_value,
        deviation,
        tolerance,
        within_tolerance,
        rounds_to_quoted,
        pass: within_tolerance || rounds_to_quoted,
    }
}

fn quoted_neighbor_distance(shape: CellShape, label: &str) -> &'static str {
    match (shape, label) {
        (CellShape::Cube, "shared-face") => "2.828427",
        (CellShape::Cube, "shared-edge") => "3.4641",
        (CellShape::Cube, "shared-point") => "4",
        (CellShape::HexagonalPrism, "shared-square-face") => "3.16227766",
        (CellShape::HexagonalPrism, "shared-hexagonal-face") => "2.828427",
        (CellShape::HexagonalPrism, "shared-line") => "3.741657387",
        (CellShape::RhombicDodecahedron, "shared-point") => "4",
        (CellShape::RhombicDodecahedron, "shared-face") => "3.16227766",
        (CellShape::TruncatedOctahedron, "shared-square-face") => "3.6878177829",
        (CellShape::TruncatedOctahedron, "shared-hexagonal-face") => "3.34664",
        _ => unreachable!("every neighbor class has a quoted distance"),
    }
}

fn quoted_values(shape: CellShape) -> [&'static str; 5] {
    // neighbors, radius, sensing range, active nodes, lifetime
    match shape {
        CellShape::Cube => ["26", "0.25", "0.5", "2.372239", "42.154%"],
        CellShape::HexagonalPrism => ["20", "0.26726", "0.53452", "1.49468", "66.9%"],
        CellShape::RhombicDodecahedron => ["18", "0.25", "0.5", "1.82615", "54.76%"],
        CellShape::TruncatedOctahedron => ["14", "0.271163", "0.542326", "1", "100%"],
    }
}

fn hull_volume_coeff(shape: CellShape) -> f64 {
    let r = max_cell_radius(shape, 1.0).expect("unit range is valid");
    Polyhedron::build(shape, Point3::ZERO, r)
        .expect("valid radius")
        .hull()
        .volume()
}

/// Rows of the selected table, in shape order.
pub fn table_rows(table: Table) -> Vec<TableRow> {
    let mut rows = Vec::new();
    for shape in CellShape::ALL {
        let report = shape_report(shape);
        let quoted = quoted_values(shape);
        match table {
            Table::I => {
                let n = report.neighbor_count as f64;
                rows.push(row(
                    table,
                    shape,
                    "first_tier_neighbors",
                    "count",
                    n.to_string(),
                    n,
                    n,
                    quoted[0],
                ));
                for class in neighbor_classes(shape) {
                    rows.push(row(
                        table,
                        shape,
                        format!("max_pair_distance:{}", class.label),
                        "R",
                        class.exact,
                        class.max_pair_distance_coeff,
                        brute_force_class_coeff(&class),
                        quoted_neighbor_distance(shape, class.label),
                    ));
                }
                let brute_r = brute_force_radius_coeff(shape);
                rows.push(row(
                    table,
                    shape,
                    "max_radius",
                    "r_t",
                    report.exact.max_radius_coeff,
                    report.max_radius_coeff,
                    brute_r,
                    quoted[1],
                ));
                rows.push(row(
                    table,
                    shape,
                    "min_sensing_range",
                    "r_t",
                    report.exact.min_sensing_coeff,
                    report.min_sensing_coeff,
                    2.0 * brute_r,
                    quoted[2],
                ));
            }
            Table::II => {
                let to = hull_volume_coeff(CellShape::TruncatedOctahedron);
                let own = hull_volume_coeff(shape);
                rows.push(row(
                    table,
                    shape,
                    "active_nodes_vs_to",
                    "ratio",
                    report.exact.active_node_ratio_vs_to,
                    active_node_ratio(shape),
                    to / own,
                    quoted[3],
                ));
                rows.push(row(
                    table,
                    shape,
                    "lifetime_vs_to",
                    "ratio",
                    report.exact.lifetime_fraction_vs_to,
                    lifetime_fraction(shape),
                    own / to,
                    quoted[4],
                ));
            }
        }
    }
    rows
}

/// Closed-form cell volume per `r_t³` against the hull volume.
pub fn volume_cross_check(shape: CellShape) -> (f64, f64) {
    let r = max_cell_radius(shape, 1.0).expect("unit range is valid");
    (
        cell_volume(shape, r).expect("valid radius"),
        hull_volume_coeff(shape),
    )
}
