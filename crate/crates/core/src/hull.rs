//! Facet enumeration for small convex vertex sets.
//!
//! Every vertex triple spanning a supporting plane yields a facet; coplanar
//! triples are merged. Quadratic-cubic in the vertex count, which is fine for
//! the at most 24 vertices a cell ever has.

use crate::geometry::Point3;

/// One facet of a convex hull: outward unit normal, plane offset
/// (`normal · p = offset` on the facet) and the facet's vertices in
/// counter-clockwise order seen from outside.
#[derive(Debug, Clone)]
pub struct Facet {
    pub normal: Point3,
    pub offset: f64,
    pub vertices: Vec<Point3>,
}

impl Facet {
    pub fn area(&self) -> f64 {
        let n = self.vertices.len();
        let mut acc = Point3::ZERO;
        for i in 0..n {
            acc = acc + self.vertices[i].cross(self.vertices[(i + 1) % n]);
        }
        0.5 * acc.dot(self.normal).abs()
    }
}

#[derive(Debug, Clone)]
pub struct ConvexHull {
    pub facets: Vec<Facet>,
    interior: Point3,
    scale: f64,
}

impl ConvexHull {
    /// Builds the hull of `points`. Returns `None` for degenerate input
    /// (fewer than four points or all points coplanar).
    pub fn from_points(points: &[Point3]) -> Option<Self> {
        if points.len() < 4 {
            return None;
        }
        let interior = Point3::centroid(points);
        let scale = points
            .iter()
            .map(|p| p.distance(interior))
            .fold(0.0_f64, f64::max);
        if scale == 0.0 {
            return None;
        }
        let eps = 1e-9 * scale;

        let mut facets: Vec<Facet> = Vec::new();
        let n = points.len();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    let raw = (points[j] - points[i]).cross(points[k] - points[i]);
                    let len = raw.norm();
                    if len <= eps * scale {
                        continue;
                    }
                    let mut normal = raw * (1.0 / len);
                    let mut offset = normal.dot(points[i]);
                    if normal.dot(interior) > offset {
                        normal = -normal;
                        offset = -offset;
                    }
                    if points.iter().any(|p| normal.dot(*p) > offset + eps) {
                        continue;
                    }
                    let duplicate = facets.iter().any(|f| {
                        (f.normal - normal).norm() < 1e-9 && (f.offset - offset).abs() < eps
                    });
                    if duplicate {
                        continue;
                    }
                    let on_plane: Vec<Point3> = points
                        .iter()
                        .copied()
                        .filter(|p| (normal.dot(*p) - offset).abs() <= eps)
                        .collect();
                    facets.push(Facet {
                        normal,
                        offset,
                        vertices: order_ccw(on_plane, normal),
                    });
                }
            }
        }
        if facets.len() < 4 {
            return None;
        }
        Some(Self {
            facets,
            interior,
            scale,
        })
    }

    /// Volume as a sum of pyramids from an interior point to each facet.
    pub fn volume(&self) -> f64 {
        self.facets
            .iter()
            .map(|f| f.area() * (f.offset - f.normal.dot(self.interior)) / 3.0)
            .sum()
    }

    /// Half-space test against every facet plane, with a tolerance relative
    /// to the hull size.
    pub fn contains(&self, p: Point3) -> bool {
        let eps = 1e-9 * self.scale;
        self.facets
            .iter()
            .all(|f| f.normal.dot(p) <= f.offset + eps)
    }
}

fn order_ccw(mut pts: Vec<Point3>, normal: Point3) -> Vec<Point3> {
    let c = Point3::centroid(&pts);
    // In-plane frame.
    let e1 = (pts[0] - c).normalized();
    let e2 = normal.cross(e1);
    pts.sort_by(|a, b| {
        let aa = (*a - c).dot(e2).atan2((*a - c).dot(e1));
        let bb = (*b - c).dot(e2).atan2((*b - c).dot(e1));
        aa.total_cmp(&bb)
    });
    pts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_cube() -> Vec<Point3> {
        let mut v = Vec::new();
        for x in [0.0, 1.0] {
            for y in [0.0, 1.0] {
                for z in [0.0, 1.0] {
                    v.push(Point3::new(x, y, z));
                }
            }
        }
        v
    }

    #[test]
    fn cube_has_six_square_facets() {
        let hull = ConvexHull::from_points(&unit_cube()).unwrap();
        assert_eq!(hull.facets.len(), 6);
        assert!(hull.facets.iter().all(|f| f.vertices.len() == 4));
        assert!((hull.volume() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tetrahedron_volume() {
        let pts = [
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(0.0, 0.0, 1.0),
        ];
        let hull = ConvexHull::from_points(&pts).unwrap();
        assert_eq!(hull.facets.len(), 4);
        assert!((hull.volume() - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn contains_and_rejects() {
        let hull = ConvexHull::from_points(&unit_cube()).unwrap();
        assert!(hull.contains(Point3::new(0.5, 0.5, 0.5)));
        assert!(hull.contains(Point3::new(1.0, 0.5, 0.5)));
        assert!(!hull.contains(Point3::new(1.01, 0.5, 0.5)));
    }

    #[test]
    fn degenerate_input() {
        let flat = [
            Point3::new(0.0, 0.0, 0.0),
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(1.0, 1.0, 0.0),
        ];
        assert!(ConvexHull::from_points(&flat).is_none());
        assert!(ConvexHull::from_points(&flat[..3]).is_none());
    }
}
