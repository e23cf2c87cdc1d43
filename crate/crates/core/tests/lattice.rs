use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wsn3d::*;

/// Independent TO oracle: brute force over the raw center formula
/// `((2u+w)d, (2v+w)d, wd)` with `d = r_t/√17`, window around the origin.
fn to_bruteforce(r_t: f64, p: Point3, half: i64) -> CellId {
    let d = r_t / 17f64.sqrt();
    let mut best = (f64::INFINITY, CellId::default());
    for u in -half..=half {
        for v in -half..=half {
            for w in -half..=half {
                let c = Point3::new((2 * u + w) as f64 * d, (2 * v + w) as f64 * d, w as f64 * d);
                let dist = p.distance_squared(c);
                let id = CellId::new(u, v, w);
                if dist < best.0 || (dist == best.0 && id < best.1) {
                    best = (dist, id);
                }
            }
        }
    }
    best.1
}

#[test]
fn derived_examples_from_bruteforce() {
    let r_t = 17f64.sqrt();
    let spec = LatticeSpec::new(CellShape::TruncatedOctahedron, r_t, Point3::ZERO).unwrap();
    for (p, want) in [
        (Point3::new(0.6, 0.6, 0.6), CellId::new(0, 0, 1)),
        (Point3::new(1.0, 0.2, 0.45), CellId::new(0, 0, 1)),
        (Point3::new(1.0, 1.0, 1.0), CellId::new(0, 0, 1)),
    ] {
        assert_eq!(to_bruteforce(r_t, p, 4), want);
        assert_eq!(spec.assign_cell(p), want);
        assert_eq!(spec.assign_cell_oracle(p, 2).unwrap(), want);
    }
    // Squared distances quoted for (0.6, 0.6, 0.6).
    let p = Point3::new(0.6, 0.6, 0.6);
    assert!((p.distance_squared(Point3::new(1.0, 1.0, 1.0)) - 0.48).abs() < 1e-12);
    assert!((p.distance_squared(Point3::ZERO) - 1.08).abs() < 1e-12);
}

#[test]
fn to_assignment_matches_independent_bruteforce() {
    let r_t = 2.3;
    let spec = LatticeSpec::new(CellShape::TruncatedOctahedron, r_t, Point3::ZERO).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let reach = 2.0 * r_t / 17f64.sqrt();
    for _ in 0..5000 {
        let p = Point3::new(
            rng.random_range(-reach..reach),
            rng.random_range(-reach..reach),
            rng.random_range(-reach..reach),
        );
        assert_eq!(spec.assign_cell(p), to_bruteforce(r_t, p, 6), "{p}");
    }
}

fn random_spec(shape: CellShape, rng: &mut ChaCha8Rng) -> LatticeSpec {
    let r_t = 10f64.powf(rng.random_range(-2.0..3.0));
    let sink = Point3::new(
        rng.random_range(-1e3..1e3),
        rng.random_range(-1e3..1e3),
        rng.random_range(-1e3..1e3),
    );
    LatticeSpec::new(shape, r_t, sink).unwrap()
}

#[test]
fn roundtrip_every_id_in_window() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for shape in CellShape::ALL {
        for _ in 0..3 {
            let spec = random_spec(shape, &mut rng);
            for u in -10..=10 {
                for v in -10..=10 {
                    for w in -10..=10 {
                        let id = CellId::new(u, v, w);
                        assert_eq!(spec.assign_cell(spec.cell_center(id)), id, "{shape}");
                    }
                }
            }
        }
    }
}

#[test]
fn oracle_window_two_equals_four() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for shape in CellShape::ALL {
        let spec = random_spec(shape, &mut rng);
        let region = Aabb::cube(spec.sink(), 4.0 * spec.transmission_range()).unwrap();
        for _ in 0..10_000 {
            let p = simulator::uniform_point(&mut rng, &region);
            assert_eq!(
                spec.assign_cell_oracle(p, 2).unwrap(),
                spec.assign_cell_oracle(p, 4).unwrap()
            );
        }
    }
}

#[test]
fn voronoi_property() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for shape in CellShape::ALL {
        let spec = random_spec(shape, &mut rng);
        let region = Aabb::cube(spec.sink(), 3.0 * spec.transmission_range()).unwrap();
        for _ in 0..5000 {
            let p = simulator::uniform_point(&mut rng, &region);
            let id = spec.assign_cell(p);
            let own = p.distance(spec.cell_center(id));
            assert!(own <= spec.radius() * (1.0 + 1e-9));
            for n in spec.neighbors(id) {
                assert!(own <= p.distance(spec.cell_center(n)) * (1.0 + 1e-12));
            }
        }
    }
}

#[test]
fn distinct_ids_have_distinct_centers() {
    for shape in CellShape::ALL {
        let spec = LatticeSpec::new(shape, 1.0, Point3::ZERO).unwrap();
        // Smallest center spacing is the nearest neighbor distance.
        let spacing = spec
            .neighbors(CellId::default())
            .iter()
            .map(|n| spec.cell_center(*n).norm())
            .fold(f64::INFINITY, f64::min);
        let mut keys: Vec<(i64, i64, i64)> = Vec::with_capacity(21 * 21 * 21);
        let q = spacing / 4.0;
        for u in -10..=10 {
            for v in -10..=10 {
                for w in -10..=10 {
                    let c = spec.cell_center(CellId::new(u, v, w));
                    keys.push((
                        (c.x / q).round() as i64,
                        (c.y / q).round() as i64,
                        (c.z / q).round() as i64,
                    ));
                }
            }
        }
        keys.sort_unstable();
        keys.dedup();
        assert_eq!(keys.len(), 21 * 21 * 21, "{shape}");
    }
}

#[test]
fn tessellation_fills_space() {
    for shape in CellShape::ALL {
        let r_t = 1.0;
        let spec = LatticeSpec::new(shape, r_t, Point3::new(0.3, -0.1, 0.7)).unwrap();
        let region = Aabb::cube(Point3::ZERO, 10.0 * r_t).unwrap();
        let count = spec.cells_with_center_in(&region).len() as f64;
        let covered = count * cell_volume(shape, spec.radius()).unwrap();
        let err = (covered - region.volume()).abs() / region.volume();
        assert!(err < 0.02, "{shape}: {err}");
    }
}

#[test]
fn nearest_int_fraction_is_scale_and_sink_invariant() {
    let mut fractions = Vec::new();
    for (r_t, sink) in [
        (1.0, Point3::ZERO),
        (17f64.sqrt(), Point3::new(5.0, -2.0, 1.0)),
        (250.0, Point3::new(-1e3, 7.0, 3e2)),
    ] {
        let spec = LatticeSpec::new(CellShape::TruncatedOctahedron, r_t, sink).unwrap();
        let rep = simulator::accuracy_experiment(&spec, 40_000, 77).unwrap();
        assert_eq!(rep.correct_exact, rep.n);
        fractions.push(rep.nearest_int_fraction());
    }
    for f in &fractions {
        assert!((f - fractions[0]).abs() < 0.015, "{fractions:?}");
    }
}

proptest! {
    #[test]
    fn assign_agrees_with_oracle(shape in prop::sample::select(CellShape::ALL.to_vec()),
                                 r_t in 0.05f64..50.0,
                                 x in -1.0f64..1.0, y in -1.0f64..1.0, z in -1.0f64..1.0) {
        let spec = LatticeSpec::new(shape, r_t, Point3::new(1.0, 2.0, 3.0)).unwrap();
        let p = Point3::new(x * 20.0 * r_t, y * 20.0 * r_t, z * 20.0 * r_t);
        prop_assert_eq!(spec.assign_cell(p), spec.assign_cell_oracle(p, ORACLE_WINDOW).unwrap());
    }

    #[test]
    fn ids_survive_center_roundtrip(shape in prop::sample::select(CellShape::ALL.to_vec()),
                                    u in -1000i64..1000, v in -1000i64..1000, w in -1000i64..1000) {
        let spec = LatticeSpec::new(shape, 3.0, Point3::new(-4.0, 0.5, 9.0)).unwrap();
        let id = CellId::new(u, v, w);
        prop_assert_eq!(spec.assign_cell(spec.cell_center(id)), id);
    }
}
