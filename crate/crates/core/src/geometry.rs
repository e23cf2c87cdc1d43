//! Cell shapes, their vertex geometry and the neighbor-distance constants
//! that bound the cell radius for a given transmission range.
//!
//! Every shape is parameterised by its circumradius `R`, the largest
//! center-to-vertex distance. Orientation conventions:
//!
//! * cube (CB): axis aligned, side `2R/√3`;
//! * hexagonal prism (HP): hexagon side `a = R·√(2/3)`, height `h = a√2`,
//!   hexagon corners at 0°, 60°, …, 300° in the xy-plane;
//! * rhombic dodecahedron (RD): four-valent vertices at `(±R/√2, ±R/√2, 0)`
//!   and `(0, 0, ±R)`, three-valent vertices at distance `R·√3/2`;
//! * truncated octahedron (TO): all permutations of `(±d, ±d/2, 0)` with
//!   `d = 2R/√5`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, require_positive, Result};
use crate::hull::ConvexHull;
use crate::lattice::CellId;

const SQRT2: f64 = std::f64::consts::SQRT_2;

fn sqrt3() -> f64 {
    3.0_f64.sqrt()
}

/// A location in 3D space, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const ZERO: Point3 = Point3 {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    /// Like [`Point3::new`] but rejects NaN and infinite coordinates.
    pub fn try_new(x: f64, y: f64, z: f64) -> Result<Self> {
        let p = Self::new(x, y, z);
        if p.is_finite() {
            Ok(p)
        } else {
            Err(invalid(format!("non-finite coordinate in ({x}, {y}, {z})")))
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn dot(self, o: Point3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Point3) -> Point3 {
        Point3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn normalized(self) -> Point3 {
        self * (1.0 / self.norm())
    }

    pub fn distance_squared(self, o: Point3) -> f64 {
        (self - o).norm_squared()
    }

    pub fn distance(self, o: Point3) -> f64 {
        self.distance_squared(o).sqrt()
    }

    pub fn centroid(points: &[Point3]) -> Point3 {
        let sum = points.iter().fold(Point3::ZERO, |acc, p| acc + *p);
        sum * (1.0 / points.len() as f64)
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, o: Point3) -> Point3 {
        Point3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, o: Point3) -> Point3 {
        Point3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    fn mul(self, s: f64) -> Point3 {
        Point3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Point3 {
    type Output = Point3;
    fn neg(self) -> Point3 {
        Point3::new(-self.x, -self.y, -self.z)
    }
}

impl fmt::Display for Point3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// Axis-aligned box given by its min and max corners.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aabb {
    pub min: Point3,
    pub max: Point3,
}

impl Aabb {
    /// Fails unless every side has positive, finite length.
    pub fn new(min: Point3, max: Point3) -> Result<Self> {
        if !min.is_finite() || !max.is_finite() {
            return Err(invalid("box corners must be finite"));
        }
        if !(max.x > min.x && max.y > min.y && max.z > min.z) {
            return Err(invalid(format!(
                "box must have positive volume, got min {min} max {max}"
            )));
        }
        Ok(Self { min, max })
    }

    /// Cube of half-side `half` around `center`.
    pub fn cube(center: Point3, half: f64) -> Result<Self> {
        require_positive("half side", half)?;
        let h = Point3::new(half, half, half);
        Self::new(center - h, center + h)
    }

    pub fn size(&self) -> Point3 {
        self.max - self.min
    }

    pub fn volume(&self) -> f64 {
        let s = self.size();
        s.x * s.y * s.z
    }

    pub fn contains(&self, p: Point3) -> bool {
        p.x >= self.min.x
            && p.x <= self.max.x
            && p.y >= self.min.y
            && p.y <= self.max.y
            && p.z >= self.min.z
            && p.z <= self.max.z
    }

    pub fn corners(&self) -> [Point3; 8] {
        let (a, b) = (self.min, self.max);
        [
            Point3::new(a.x, a.y, a.z),
            Point3::new(a.x, a.y, b.z),
            Point3::new(a.x, b.y, a.z),
            Point3::new(a.x, b.y, b.z),
            Point3::new(b.x, a.y, a.z),
            Point3::new(b.x, a.y, b.z),
            Point3::new(b.x, b.y, a.z),
            Point3::new(b.x, b.y, b.z),
        ]
    }
}

/// The four space-filling cell shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CellShape {
    #[serde(rename = "CB")]
    Cube,
    #[serde(rename = "HP")]
    HexagonalPrism,
    #[serde(rename = "RD")]
    RhombicDodecahedron,
    #[serde(rename = "TO")]
    TruncatedOctahedron,
}

impl CellShape {
    pub const ALL: [CellShape; 4] = [
        CellShape::Cube,
        CellShape::HexagonalPrism,
        CellShape::RhombicDodecahedron,
        CellShape::TruncatedOctahedron,
    ];

    pub fn code(self) -> &'static str {
        match self {
            CellShape::Cube => "CB",
            CellShape::HexagonalPrism => "HP",
            CellShape::RhombicDodecahedron => "RD",
            CellShape::TruncatedOctahedron => "TO",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CellShape::Cube => "cube",
            CellShape::HexagonalPrism => "hexagonal prism",
            CellShape::RhombicDodecahedron => "rhombic dodecahedron",
            CellShape::TruncatedOctahedron => "truncated octahedron",
        }
    }

    pub fn vertex_count(self) -> usize {
        match self {
            CellShape::Cube => 8,
            CellShape::HexagonalPrism => 12,
            CellShape::RhombicDodecahedron => 14,
            CellShape::TruncatedOctahedron => 24,
        }
    }

    pub fn neighbor_count(self) -> usize {
        match self {
            CellShape::Cube => 26,
            CellShape::HexagonalPrism => 20,
            CellShape::RhombicDodecahedron => 18,
            CellShape::TruncatedOctahedron => 14,
        }
    }

    /// Displacement of the center of cell `id` from the lattice origin for
    /// cells of circumradius `radius`.
    ///
    /// HP uses axial hexagon coordinates: `x = 1.5·a·u`,
    /// `y = √3·a·(v + u/2)`, `z = h·w`.
    pub fn lattice_offset(self, radius: f64, id: CellId) -> Point3 {
        let (u, v, w) = (id.u as f64, id.v as f64, id.w as f64);
        match self {
            CellShape::Cube => {
                let s = cube_side(radius);
                Point3::new(u * s, v * s, w * s)
            }
            CellShape::HexagonalPrism => {
                let (a, h) = prism_side_height(radius);
                Point3::new(1.5 * a * u, sqrt3() * a * (v + 0.5 * u), h * w)
            }
            CellShape::RhombicDodecahedron => {
                let q = radius / SQRT2;
                Point3::new((2.0 * u + w) * q, (2.0 * v + w) * q, w * radius)
            }
            CellShape::TruncatedOctahedron => {
                let d = octahedron_step(radius);
                Point3::new((2.0 * u + w) * d, (2.0 * v + w) * d, w * d)
            }
        }
    }

    /// Inverse of [`CellShape::lattice_offset`] over the reals: the
    /// fractional `(u, v, w)` whose lattice offset equals `disp`.
    pub fn lattice_coords(self, radius: f64, disp: Point3) -> [f64; 3] {
        match self {
            CellShape::Cube => {
                let s = cube_side(radius);
                [disp.x / s, disp.y / s, disp.z / s]
            }
            CellShape::HexagonalPrism => {
                let (a, h) = prism_side_height(radius);
                let u = disp.x / (1.5 * a);
                let v = disp.y / (sqrt3() * a) - 0.5 * u;
                [u, v, disp.z / h]
            }
            CellShape::RhombicDodecahedron => {
                let w = disp.z / radius;
                let u = 0.5 * (disp.x * SQRT2 / radius - w);
                let v = 0.5 * (disp.y * SQRT2 / radius - w);
                [u, v, w]
            }
            CellShape::TruncatedOctahedron => {
                let d = octahedron_step(radius);
                let w = disp.z / d;
                let u = (disp.x - disp.z) / (2.0 * d);
                let v = (disp.y - disp.z) / (2.0 * d);
                [u, v, w]
            }
        }
    }
}

impl fmt::Display for CellShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for CellShape {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['_', '-'], " ").as_str() {
            "cb" | "cube" => Ok(CellShape::Cube),
            "hp" | "hexagonal prism" => Ok(CellShape::HexagonalPrism),
            "rd" | "rhombic dodecahedron" => Ok(CellShape::RhombicDodecahedron),
            "to" | "truncated octahedron" => Ok(CellShape::TruncatedOctahedron),
            _ => Err(invalid(format!("unknown cell shape '{s}'"))),
        }
    }
}

fn cube_side(radius: f64) -> f64 {
    2.0 * radius / sqrt3()
}

fn prism_side_height(radius: f64) -> (f64, f64) {
    let a = radius * (2.0_f64 / 3.0).sqrt();
    (a, a * SQRT2)
}

fn octahedron_step(radius: f64) -> f64 {
    2.0 * radius / 5.0_f64.sqrt()
}

/// A concrete cell: shape, center, circumradius and explicit vertices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Polyhedron {
    pub shape: CellShape,
    pub center: Point3,
    pub radius: f64,
    pub vertices: Vec<Point3>,
}

impl Polyhedron {
    pub fn build(shape: CellShape, center: Point3, radius: f64) -> Result<Self> {
        require_positive("circumradius", radius)?;
        if !center.is_finite() {
            return Err(invalid("polyhedron center must be finite"));
        }
        let offsets = vertex_offsets(shape, radius);
        debug_assert_eq!(offsets.len(), shape.vertex_count());
        Ok(Self {
            shape,
            center,
            radius,
            vertices: offsets.into_iter().map(|o| center + o).collect(),
        })
    }

    /// Max distance between any two points of the cell: `2R` for CB, RD and
    /// TO (antipodal vertices), and likewise for HP whose twelve vertices
    /// all lie at distance `R`.
    pub fn diameter(&self) -> f64 {
        max_vertex_pair_distance(self, self)
    }

    pub fn hull(&self) -> ConvexHull {
        ConvexHull::from_points(&self.vertices).expect("cell vertices span a solid")
    }

    /// Bounding box of the vertices.
    pub fn bounds(&self) -> Aabb {
        let mut min = self.vertices[0];
        let mut max = self.vertices[0];
        for v in &self.vertices[1..] {
            min = Point3::new(min.x.min(v.x), min.y.min(v.y), min.z.min(v.z));
            max = Point3::new(max.x.max(v.x), max.y.max(v.y), max.z.max(v.z));
        }
        Aabb { min, max }
    }
}

fn vertex_offsets(shape: CellShape, radius: f64) -> Vec<Point3> {
    match shape {
        CellShape::Cube => {
            let h = cube_side(radius) / 2.0;
            let mut out = Vec::with_capacity(8);
            for sx in [-1.0, 1.0] {
                for sy in [-1.0, 1.0] {
                    for sz in [-1.0, 1.0] {
                        out.push(Point3::new(sx * h, sy * h, sz * h));
                    }
                }
            }
            out
        }
        CellShape::HexagonalPrism => {
            let (a, h) = prism_side_height(radius);
            let mut out = Vec::with_capacity(12);
            for z in [h / 2.0, -h / 2.0] {
                for k in 0..6 {
                    let t = (k as f64) * std::f64::consts::FRAC_PI_3;
                    out.push(Point3::new(a * t.cos(), a * t.sin(), z));
                }
            }
            out
        }
        CellShape::RhombicDodecahedron => {
            let q = radius / SQRT2;
            let hr = radius / 2.0;
            vec![
                Point3::new(q, 0.0, hr),
                Point3::new(q, 0.0, -hr),
                Point3::new(q, q, 0.0),
                Point3::new(q, -q, 0.0),
                Point3::new(-q, 0.0, hr),
                Point3::new(-q, 0.0, -hr),
                Point3::new(-q, q, 0.0),
                Point3::new(-q, -q, 0.0),
                Point3::new(0.0, q, hr),
                Point3::new(0.0, q, -hr),
                Point3::new(0.0, -q, hr),
                Point3::new(0.0, -q, -hr),
                Point3::new(0.0, 0.0, radius),
                Point3::new(0.0, 0.0, -radius),
            ]
        }
        CellShape::TruncatedOctahedron => {
            let d = octahedron_step(radius);
            let e = d / 2.0;
            vec![
                Point3::new(-d, e, 0.0),
                Point3::new(-d, -e, 0.0),
                Point3::new(-d, 0.0, e),
                Point3::new(-d, 0.0, -e),
                Point3::new(-e, d, 0.0),
                Point3::new(-e, -d, 0.0),
                Point3::new(-e, 0.0, d),
                Point3::new(-e, 0.0, -d),
                Point3::new(0.0, d, e),
                Point3::new(0.0, -d, e),
                Point3::new(0.0, e, d),
                Point3::new(0.0, e, -d),
                Point3::new(0.0, d, -e),
                Point3::new(0.0, -d, -e),
                Point3::new(0.0, -e, d),
                Point3::new(0.0, -e, -d),
                Point3::new(e, d, 0.0),
                Point3::new(e, -d, 0.0),
                Point3::new(e, 0.0, d),
                Point3::new(e, 0.0, -d),
                Point3::new(d, e, 0.0),
                Point3::new(d, -e, 0.0),
                Point3::new(d, 0.0, e),
                Point3::new(d, 0.0, -e),
            ]
        }
    }
}

/// Largest distance between a vertex of `a` and a vertex of `b`. For convex
/// cells this is also the largest distance between any point of `a` and
/// any point of `b`.
pub fn max_vertex_pair_distance(a: &Polyhedron, b: &Polyhedron) -> f64 {
    let mut best = 0.0_f64;
    for p in &a.vertices {
        for q in &b.vertices {
            best = best.max(p.distance_squared(*q));
        }
    }
    best.sqrt()
}

/// One class of first-tier neighbors (cells sharing a face, edge or vertex
/// of a given kind).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NeighborClass {
    pub shape: CellShape,
    pub label: &'static str,
    pub count: usize,
    /// Cell-id deltas of every neighbor in the class.
    pub offsets: Vec<CellId>,
    /// Furthest point-pair distance between the cell and a neighbor of this
    /// class, divided by `R`.
    pub max_pair_distance_coeff: f64,
    /// The coefficient as a closed-form expression.
    pub exact: &'static str,
}

fn ids(list: &[(i64, i64, i64)]) -> Vec<CellId> {
    list.iter().map(|&(u, v, w)| CellId::new(u, v, w)).collect()
}

fn class(
    shape: CellShape,
    label: &'static str,
    offsets: Vec<CellId>,
    coeff: f64,
    exact: &'static str,
) -> NeighborClass {
    NeighborClass {
        shape,
        label,
        count: offsets.len(),
        offsets,
        max_pair_distance_coeff: coeff,
        exact,
    }
}

const HEX_RING: [(i64, i64); 6] = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)];

pub fn neighbor_classes(shape: CellShape) -> Vec<NeighborClass> {
    match shape {
        CellShape::Cube => {
            let mut face = Vec::new();
            let mut edge = Vec::new();
            let mut corner = Vec::new();
            for u in -1..=1 {
                for v in -1..=1 {
                    for w in -1..=1 {
                        let nz = [u, v, w].iter().filter(|c| **c != 0).count();
                        let id = CellId::new(u, v, w);
                        match nz {
                            1 => face.push(id),
                            2 => edge.push(id),
                            3 => corner.push(id),
                            _ => {}
                        }
                    }
                }
            }
            vec![
                class(shape, "shared-face", face, 2.0 * SQRT2, "2*sqrt(2)"),
                class(shape, "shared-edge", edge, 2.0 * sqrt3(), "2*sqrt(3)"),
                class(shape, "shared-point", corner, 4.0, "4"),
            ]
        }
        CellShape::HexagonalPrism => {
            let ring: Vec<CellId> = HEX_RING
                .iter()
                .map(|&(u, v)| CellId::new(u, v, 0))
                .collect();
            let mut line = Vec::new();
            for dw in [1, -1] {
                for &(u, v) in &HEX_RING {
                    line.push(CellId::new(u, v, dw));
                }
            }
            vec![
                class(
                    shape,
                    "shared-square-face",
                    ring,
                    10.0_f64.sqrt(),
                    "sqrt(10)",
                ),
                class(
                    shape,
                    "shared-hexagonal-face",
                    ids(&[(0, 0, 1), (0, 0, -1)]),
                    8.0_f64.sqrt(),
                    "sqrt(8)",
                ),
                class(shape, "shared-line", line, 14.0_f64.sqrt(), "sqrt(14)"),
            ]
        }
        CellShape::RhombicDodecahedron => vec![
            class(
                shape,
                "shared-point",
                ids(&[
                    (1, 1, 0),
                    (1, -1, 0),
                    (-1, 1, 0),
                    (-1, -1, 0),
                    (-1, -1, 2),
                    (1, 1, -2),
                ]),
                4.0,
                "4",
            ),
            class(
                shape,
                "shared-face",
                ids(&[
                    (1, 0, 0),
                    (-1, 0, 0),
                    (0, 1, 0),
                    (0, -1, 0),
                    (0, 0, 1),
                    (0, 0, -1),
                    (-1, 0, 1),
                    (1, 0, -1),
                    (0, -1, 1),
                    (0, 1, -1),
                    (-1, -1, 1),
                    (1, 1, -1),
                ]),
                10.0_f64.sqrt(),
                "sqrt(10)",
            ),
        ],
        CellShape::TruncatedOctahedron => vec![
            class(
                shape,
                "shared-square-face",
                ids(&[
                    (1, 0, 0),
                    (-1, 0, 0),
                    (0, 1, 0),
                    (0, -1, 0),
                    (-1, -1, 2),
                    (1, 1, -2),
                ]),
                2.0 * 17.0_f64.sqrt() / 5.0_f64.sqrt(),
                "2*sqrt(17)/sqrt(5)",
            ),
            class(
                shape,
                "shared-hexagonal-face",
                ids(&[
                    (0, 0, 1),
                    (0, 0, -1),
                    (-1, 0, 1),
                    (1, 0, -1),
                    (0, -1, 1),
                    (0, 1, -1),
                    (-1, -1, 1),
                    (1, 1, -1),
                ]),
                2.0 * 14.0_f64.sqrt() / 5.0_f64.sqrt(),
                "2*sqrt(14)/sqrt(5)",
            ),
        ],
    }
}

/// Worst-case neighbor coefficient (furthest point pair over all neighbor
/// classes, in units of `R`).
pub fn binding_coeff(shape: CellShape) -> f64 {
    match shape {
        CellShape::Cube | CellShape::RhombicDodecahedron => 4.0,
        CellShape::HexagonalPrism => 14.0_f64.sqrt(),
        CellShape::TruncatedOctahedron => 2.0 * 17.0_f64.sqrt() / 5.0_f64.sqrt(),
    }
}

/// Largest circumradius for which every first-tier neighbor pair stays
/// within transmission range `r_t`.
pub fn max_cell_radius(shape: CellShape, r_t: f64) -> Result<f64> {
    require_positive("transmission range", r_t)?;
    Ok(match shape {
        CellShape::Cube | CellShape::RhombicDodecahedron => r_t / 4.0,
        CellShape::HexagonalPrism => r_t / 14.0_f64.sqrt(),
        CellShape::TruncatedOctahedron => r_t * 5.0_f64.sqrt() / (2.0 * 17.0_f64.sqrt()),
    })
}

pub fn cell_volume(shape: CellShape, radius: f64) -> Result<f64> {
    require_positive("circumradius", radius)?;
    let r3 = radius.powi(3);
    Ok(match shape {
        CellShape::Cube => 8.0 * r3 / (3.0 * sqrt3()),
        CellShape::HexagonalPrism | CellShape::RhombicDodecahedron => 2.0 * r3,
        CellShape::TruncatedOctahedron => 32.0 * r3 / (5.0 * 5.0_f64.sqrt()),
    })
}
