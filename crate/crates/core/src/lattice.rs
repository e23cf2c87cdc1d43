//! Cell ids, cell centers and the constant-time point → cell assignment.
//!
//! A [`LatticeSpec`] fixes the shape, the transmission range `r_t` and the
//! sink location; the circumradius follows as `max_cell_radius(shape, r_t)`.
//! Cell `(u, v, w)` is centered at `sink + shape.lattice_offset(R, id)`, so
//! for TO the centers are `sink + ((2u+w)·d, (2v+w)·d, w·d)` with
//! `d = r_t/√17`.
//!
//! Assignment solves the center equations over the reals, takes the floor
//! and the next integer of each coordinate and keeps the nearest of the
//! resulting eight candidate centers. Ties go to the lexicographically
//! smallest id. Every cell of all four tessellations fits strictly inside
//! the unit box of real coordinates around its center (`|Δw| ≤ 1` with
//! equality only on faces), which is why eight candidates always contain
//! the nearest center.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, require_positive, Result};
use crate::geometry::{max_cell_radius, neighbor_classes, Aabb, CellShape, Point3, Polyhedron};

/// Integer lattice coordinates naming one cell. Ordering is lexicographic
/// on `(u, v, w)`.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize,
)]
pub struct CellId {
    pub u: i64,
    pub v: i64,
    pub w: i64,
}

impl CellId {
    pub const fn new(u: i64, v: i64, w: i64) -> Self {
        Self { u, v, w }
    }

    pub fn offset(self, d: CellId) -> CellId {
        CellId::new(self.u + d.u, self.v + d.v, self.w + d.w)
    }

    /// Squared distance in id space, the greedy routing metric.
    pub fn id_distance_squared(self, o: CellId) -> i64 {
        let (du, dv, dw) = (self.u - o.u, self.v - o.v, self.w - o.w);
        du * du + dv * dv + dw * dw
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.u, self.v, self.w)
    }
}

impl std::str::FromStr for CellId {
    type Err = crate::Error;

    /// Parses `u,v,w`, optionally wrapped in parentheses.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = t.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(invalid(format!("expected u,v,w but got '{s}'")));
        }
        let mut c = [0i64; 3];
        for (slot, part) in c.iter_mut().zip(&parts) {
            *slot = part
                .parse()
                .map_err(|_| invalid(format!("bad integer '{part}' in cell id '{s}'")))?;
        }
        Ok(CellId::new(c[0], c[1], c[2]))
    }
}

/// Default search half-width of [`LatticeSpec::assign_cell_oracle`].
pub const ORACLE_WINDOW: u32 = 3;

/// Shape, transmission range and sink: a complete tessellation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LatticeSpec {
    shape: CellShape,
    r_t: f64,
    sink: Point3,
    radius: f64,
}

impl LatticeSpec {
    pub fn new(shape: CellShape, r_t: f64, sink: Point3) -> Result<Self> {
        require_positive("transmission range", r_t)?;
        if !sink.is_finite() {
            return Err(invalid("sink location must be finite"));
        }
        let radius = max_cell_radius(shape, r_t)?;
        Ok(Self {
            shape,
            r_t,
            sink,
            radius,
        })
    }

    /// Same lattice but with an explicit circumradius instead of the
    /// connectivity-optimal one. Used to probe connectivity margins.
    pub fn with_radius(shape: CellShape, r_t: f64, sink: Point3, radius: f64) -> Result<Self> {
        let mut spec = Self::new(shape, r_t, sink)?;
        require_positive("circumradius", radius)?;
        spec.radius = radius;
        Ok(spec)
    }

    pub fn shape(&self) -> CellShape {
        self.shape
    }

    pub fn transmission_range(&self) -> f64 {
        self.r_t
    }

    pub fn sink(&self) -> Point3 {
        self.sink
    }

    /// Circumradius `R` of every cell.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn cell_center(&self, id: CellId) -> Point3 {
        self.sink + self.shape.lattice_offset(self.radius, id)
    }

    pub fn polyhedron(&self, id: CellId) -> Polyhedron {
        Polyhedron::build(self.shape, self.cell_center(id), self.radius)
            .expect("spec radius is validated")
    }

    /// Real-valued `(u, v, w)` solving `cell_center(id) = p`.
    pub fn real_coords(&self, p: Point3) -> [f64; 3] {
        self.shape.lattice_coords(self.radius, p - self.sink)
    }

    fn key(&self, p: Point3, id: CellId) -> (f64, CellId) {
        (p.distance_squared(self.cell_center(id)), id)
    }

    fn better(a: (f64, CellId), b: (f64, CellId)) -> bool {
        a.0 < b.0 || (a.0 == b.0 && a.1 < b.1)
    }

    /// Cell containing `p`: the id whose center is nearest to `p`.
    ///
    /// CB is separable and rounds each axis directly (halves go down, which
    /// matches the lexicographic tie-break). The other shapes evaluate the
    /// eight floor/next-integer candidates.
    pub fn assign_cell(&self, p: Point3) -> CellId {
        let [u, v, w] = self.real_coords(p);
        if self.shape == CellShape::Cube {
            let r = |x: f64| (x - 0.5).ceil() as i64;
            return CellId::new(r(u), r(v), r(w));
        }
        let (u0, v0, w0) = (u.floor() as i64, v.floor() as i64, w.floor() as i64);
        let mut best: Option<(f64, CellId)> = None;
        for du in 0..2 {
            for dv in 0..2 {
                for dw in 0..2 {
                    let k = self.key(p, CellId::new(u0 + du, v0 + dv, w0 + dw));
                    if best.is_none_or(|b| Self::better(k, b)) {
                        best = Some(k);
                    }
                }
            }
        }
        best.expect("eight candidates").1
    }

    /// Rounds each real coordinate to the nearest integer (halves away from
    /// zero) with no distance check. Fast but wrong for a sizeable fraction
    /// of points; kept for comparison.
    pub fn assign_cell_nearest_int(&self, p: Point3) -> CellId {
        let [u, v, w] = self.real_coords(p);
        CellId::new(u.round() as i64, v.round() as i64, w.round() as i64)
    }

    /// Exhaustive nearest-center search over every id within `±window` of
    /// the rounded real solution. Ground truth for [`Self::assign_cell`].
    pub fn assign_cell_oracle(&self, p: Point3, window: u32) -> Result<CellId> {
        if window < 2 {
            return Err(invalid(format!("oracle window must be >= 2, got {window}")));
        }
        let base = self.assign_cell_nearest_int(p);
        let k = window as i64;
        let mut best = (f64::INFINITY, base);
        for du in -k..=k {
            for dv in -k..=k {
                for dw in -k..=k {
                    let cand = self.key(p, base.offset(CellId::new(du, dv, dw)));
                    if Self::better(cand, best) {
                        best = cand;
                    }
                }
            }
        }
        Ok(best.1)
    }

    /// Relative id offsets of the first-tier neighbors of any cell.
    pub fn neighbor_offsets(&self) -> Vec<CellId> {
        neighbor_offsets(self.shape)
    }

    pub fn neighbors(&self, id: CellId) -> Vec<CellId> {
        neighbor_offsets(self.shape)
            .into_iter()
            .map(|d| id.offset(d))
            .collect()
    }

    /// Ids of every cell whose center lies in `region` (boundary included),
    /// in lexicographic order.
    pub fn cells_with_center_in(&self, region: &Aabb) -> Vec<CellId> {
        let mut lo = [f64::INFINITY; 3];
        let mut hi = [f64::NEG_INFINITY; 3];
        for c in region.corners() {
            let r = self.real_coords(c);
            for i in 0..3 {
                lo[i] = lo[i].min(r[i]);
                hi[i] = hi[i].max(r[i]);
            }
        }
        let range = |i: usize| (lo[i].floor() as i64 - 1)..=(hi[i].ceil() as i64 + 1);
        let mut out = Vec::new();
        for u in range(0) {
            for v in range(1) {
                for w in range(2) {
                    let id = CellId::new(u, v, w);
                    if region.contains(self.cell_center(id)) {
                        out.push(id);
                    }
                }
            }
        }
        out
    }
}

/// Neighbor id offsets for `shape`, in neighbor-class order.
pub fn neighbor_offsets(shape: CellShape) -> Vec<CellId> {
    neighbor_classes(shape)
        .into_iter()
        .flat_map(|c| c.offsets)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn to_spec() -> LatticeSpec {
        LatticeSpec::new(
            CellShape::TruncatedOctahedron,
            17.0_f64.sqrt(),
            Point3::ZERO,
        )
        .unwrap()
    }

    fn near(a: Point3, b: Point3) -> bool {
        a.distance(b) < 1e-12
    }

    #[test]
    fn to_centers() {
        let s = to_spec();
        assert!(near(
            s.cell_center(CellId::new(1, 0, 0)),
            Point3::new(2.0, 0.0, 0.0)
        ));
        assert!(near(
            s.cell_center(CellId::new(0, 0, 1)),
            Point3::new(1.0, 1.0, 1.0)
        ));
    }

    #[test]
    fn rd_center() {
        // R = √2 comes from r_t = 4√2.
        let s = LatticeSpec::new(
            CellShape::RhombicDodecahedron,
            4.0 * std::f64::consts::SQRT_2,
            Point3::ZERO,
        )
        .unwrap();
        assert!((s.radius() - std::f64::consts::SQRT_2).abs() < 1e-15);
        assert!(near(
            s.cell_center(CellId::new(1, 0, 0)),
            Point3::new(2.0, 0.0, 0.0)
        ));
    }

    #[test]
    fn assign_examples() {
        let s = to_spec();
        assert_eq!(
            s.assign_cell(Point3::new(1.0, 1.0, 1.0)),
            CellId::new(0, 0, 1)
        );
        assert_eq!(
            s.assign_cell(Point3::new(0.6, 0.6, 0.6)),
            CellId::new(0, 0, 1)
        );
        assert_eq!(
            s.assign_cell(Point3::new(1.0, 0.2, 0.45)),
            CellId::new(0, 0, 1)
        );
    }

    #[test]
    fn nearest_int_examples() {
        let s = to_spec();
        assert_eq!(
            s.assign_cell_nearest_int(Point3::new(1.0, 1.0, 1.0)),
            CellId::new(0, 0, 1)
        );
        assert_eq!(
            s.assign_cell_nearest_int(Point3::new(2.0, 0.0, 0.0)),
            CellId::new(1, 0, 0)
        );
        let p = Point3::new(1.0, 0.2, 0.45);
        assert_eq!(s.assign_cell_nearest_int(p), CellId::new(0, 0, 0));
        assert_ne!(s.assign_cell_nearest_int(p), s.assign_cell(p));
    }

    #[test]
    fn oracle_examples() {
        let s = to_spec();
        let p = Point3::new(0.6, 0.6, 0.6);
        assert_eq!(s.assign_cell_oracle(p, 2).unwrap(), CellId::new(0, 0, 1));
        assert_eq!(s.assign_cell_oracle(p, 4).unwrap(), CellId::new(0, 0, 1));
        assert!(s.assign_cell_oracle(p, 1).is_err());
    }

    #[test]
    fn cube_ties_go_down() {
        let s = LatticeSpec::new(CellShape::Cube, 4.0, Point3::ZERO).unwrap();
        let side = 2.0 / 3.0_f64.sqrt();
        let p = Point3::new(0.5 * side, -0.5 * side, 0.0);
        assert_eq!(s.assign_cell(p), CellId::new(0, -1, 0));
    }

    #[test]
    fn to_neighbors_match_routing_list() {
        let s = to_spec();
        let n = s.neighbors(CellId::new(0, 0, 0));
        assert_eq!(n.len(), 14);
        assert!(n.contains(&CellId::new(-1, -1, 2)));
        let c = s.cell_center(CellId::new(0, 0, 1));
        assert!((c.norm() - 3.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn neighbor_counts_and_symmetry() {
        for shape in CellShape::ALL {
            let s = LatticeSpec::new(shape, 1.0, Point3::ZERO).unwrap();
            let origin = CellId::new(0, 0, 0);
            let n = s.neighbors(origin);
            assert_eq!(n.len(), shape.neighbor_count());
            let mut dedup = n.clone();
            dedup.sort();
            dedup.dedup();
            assert_eq!(dedup.len(), n.len(), "{shape} duplicate neighbor");
            for id in n {
                assert!(s.neighbors(id).contains(&origin), "{shape} {id}");
            }
        }
    }

    #[test]
    fn neighbors_touch_the_cell() {
        // A first-tier neighbor shares at least one vertex; a non-neighbor
        // shares none.
        for shape in CellShape::ALL {
            let s = LatticeSpec::new(shape, 1.0, Point3::ZERO).unwrap();
            let origin = s.polyhedron(CellId::default());
            let shares = |id: CellId| {
                let other = s.polyhedron(id);
                origin
                    .vertices
                    .iter()
                    .any(|a| other.vertices.iter().any(|b| a.distance(*b) < 1e-9))
            };
            let neighbors = s.neighbors(CellId::default());
            for u in -3..=3 {
                for v in -3..=3 {
                    for w in -3..=3 {
                        let id = CellId::new(u, v, w);
                        if id == CellId::default() {
                            continue;
                        }
                        assert_eq!(shares(id), neighbors.contains(&id), "{shape} {id}");
                    }
                }
            }
        }
    }

    #[test]
    fn parse_cell_id() {
        assert_eq!("1,-2,3".parse::<CellId>().unwrap(), CellId::new(1, -2, 3));
        assert_eq!(
            "( 0, 0 ,5)".parse::<CellId>().unwrap(),
            CellId::new(0, 0, 5)
        );
        assert!("1,2".parse::<CellId>().is_err());
        assert!("a,b,c".parse::<CellId>().is_err());
    }

    #[test]
    fn center_count_in_small_box() {
        let s = to_spec();
        let b = Aabb::cube(s.cell_center(CellId::new(2, -1, 3)), 0.1).unwrap();
        assert_eq!(s.cells_with_center_in(&b), vec![CellId::new(2, -1, 3)]);
    }

    #[test]
    fn invalid_specs() {
        assert!(LatticeSpec::new(CellShape::Cube, 0.0, Point3::ZERO).is_err());
        assert!(LatticeSpec::new(CellShape::Cube, 1.0, Point3::new(f64::NAN, 0.0, 0.0)).is_err());
    }
}
