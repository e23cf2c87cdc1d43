use std::collections::BTreeMap;

use proptest::prelude::*;
use wsn3d::simulator::{
    active_count, deploy, interior_cells, lifetime_simulation, simulate_lifetime,
};
use wsn3d::*;

fn spec(shape: CellShape) -> LatticeSpec {
    LatticeSpec::new(shape, 1.0, Point3::ZERO).unwrap()
}

fn counts_per_interior_cell(
    spec: &LatticeSpec,
    config: &DeploymentConfig,
) -> BTreeMap<CellId, usize> {
    let mut counts: BTreeMap<CellId, usize> = interior_cells(spec, &config.region)
        .into_iter()
        .map(|c| (c, 0))
        .collect();
    for node in deploy(config, spec).unwrap() {
        if let Some(n) = counts.get_mut(&node.cell) {
            *n += 1;
        }
    }
    counts
}

#[test]
fn cell_counts_look_poisson() {
    let region = Aabb::cube(Point3::ZERO, 2.0).unwrap();
    let lambda = 400.0;
    for shape in CellShape::ALL {
        let s = spec(shape);
        let n = (lambda * region.volume()) as usize;
        let config = DeploymentConfig::new(region, n, 17).unwrap();
        let counts: Vec<f64> = counts_per_interior_cell(&s, &config)
            .values()
            .map(|c| *c as f64)
            .collect();
        let m = counts.len() as f64;
        let mu = lambda * cell_volume(shape, s.radius()).unwrap();
        let mean = counts.iter().sum::<f64>() / m;
        let sigma = (mu / m).sqrt();
        assert!((mean - mu).abs() < 3.0 * sigma, "{shape}: {mean} vs {mu}");
        let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (m - 1.0);
        assert!(
            var > 0.3 * mu && var < 2.0 * mu,
            "{shape}: var {var} mu {mu}"
        );
    }
}

#[test]
fn single_active_lifetime_is_smallest_cell_times_capacity() {
    let region = Aabb::cube(Point3::ZERO, 1.5).unwrap();
    for shape in CellShape::ALL {
        let s = spec(shape);
        let config = DeploymentConfig::new(region, 3000, 4).unwrap();
        let smallest = counts_per_interior_cell(&s, &config)
            .values()
            .copied()
            .filter(|c| *c > 0)
            .min()
            .unwrap() as f64;
        for capacity in [1.0, 2.0, 5.0] {
            let r = lifetime_simulation(&s, &config, capacity, 1).unwrap();
            assert_eq!(r.network_lifetime, smallest * capacity, "{shape}");
        }
    }
}

#[test]
fn k_active_lifetime_matches_pooled_energy() {
    let region = Aabb::cube(Point3::ZERO, 1.5).unwrap();
    let s = spec(CellShape::TruncatedOctahedron);
    let config = DeploymentConfig::new(region, 3000, 8).unwrap();
    let counts = counts_per_interior_cell(&s, &config);
    for k in [1usize, 2, 3] {
        let r = lifetime_simulation(&s, &config, 2.0, k).unwrap();
        let bound = counts
            .values()
            .filter(|c| **c > 0)
            .map(|c| {
                if *c < k {
                    0.0
                } else {
                    (*c as f64 * 2.0 / k as f64).floor()
                }
            })
            .fold(f64::INFINITY, f64::min);
        assert_eq!(r.network_lifetime, bound, "k={k}");
    }
}

#[test]
fn active_count_over_time_is_k_per_populated_cell() {
    let region = Aabb::cube(Point3::ZERO, 1.5).unwrap();
    for shape in CellShape::ALL {
        let s = spec(shape);
        let config = DeploymentConfig::new(region, 4000, 2).unwrap();
        for k in [1, 2] {
            let r = lifetime_simulation(&s, &config, 1.0, k).unwrap();
            assert_eq!(r.active_count_over_time.len() as f64, r.network_lifetime);
            assert!(r
                .active_count_over_time
                .iter()
                .all(|a| *a == k * r.cells_populated));
        }
    }
}

#[test]
fn node_states_after_run() {
    let region = Aabb::cube(Point3::ZERO, 1.5).unwrap();
    let s = spec(CellShape::RhombicDodecahedron);
    let config = DeploymentConfig::new(region, 2000, 6).unwrap();
    let mut nodes = deploy(&config, &s).unwrap();
    let before: f64 = nodes.iter().map(|n| n.battery).sum();
    let r = simulate_lifetime(&s, &region, &mut nodes, 1.0, 1).unwrap();
    let after: f64 = nodes.iter().map(|n| n.battery).sum();
    let drained: usize = r.active_count_over_time.iter().sum();
    assert_eq!(before - after, drained as f64);
    let dead = nodes.iter().filter(|n| n.state == NodeState::Dead).count();
    assert_eq!(dead, drained);
    assert!(nodes.iter().all(|n| n.battery >= 0.0));
}

#[test]
fn cb_needs_more_active_nodes_than_to() {
    let region = Aabb::cube(Point3::ZERO, 10.0).unwrap();
    let cb = active_count(&spec(CellShape::Cube), &region) as f64;
    let to = active_count(&spec(CellShape::TruncatedOctahedron), &region) as f64;
    let ratio = wsn3d::planner::active_node_ratio(CellShape::Cube);
    assert!((cb / to - ratio).abs() / ratio < 0.05, "{}", cb / to);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn deployment_is_seed_deterministic(seed in any::<u64>(), n in 1usize..300) {
        let s = spec(CellShape::HexagonalPrism);
        let config = DeploymentConfig::new(Aabb::cube(Point3::ZERO, 1.0).unwrap(), n, seed).unwrap();
        let a = deploy(&config, &s).unwrap();
        let b = deploy(&config, &s).unwrap();
        prop_assert_eq!(&a, &b);
        for node in &a {
            prop_assert!(config.region.contains(node.position));
            prop_assert_eq!(node.cell, s.assign_cell(node.position));
        }
    }

    #[test]
    fn lifetime_scales_with_capacity(seed in 0u64..1000, capacity in 1u32..6) {
        let s = spec(CellShape::TruncatedOctahedron);
        let config = DeploymentConfig::new(Aabb::cube(Point3::ZERO, 1.0).unwrap(), 800, seed).unwrap();
        let base = lifetime_simulation(&s, &config, 1.0, 1).unwrap();
        let scaled = lifetime_simulation(&s, &config, capacity as f64, 1).unwrap();
        prop_assert_eq!(scaled.network_lifetime, base.network_lifetime * capacity as f64);
    }
}
