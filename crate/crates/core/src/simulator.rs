//! Seeded Monte-Carlo experiments: uniform deployment, cell-id prediction
//! accuracy and a leader-rotation lifetime simulation.
//!
//! All randomness comes from [`ChaCha8Rng`] seeded with a `u64`, so a run is
//! a pure function of its inputs.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, require_positive, Error, Result};
use crate::geometry::{Aabb, CellShape, Point3};
use crate::lattice::{CellId, LatticeSpec, ORACLE_WINDOW};

pub type SimRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_point(rng: &mut SimRng, region: &Aabb) -> Point3 {
    let s = region.size();
    Point3::new(
        region.min.x + rng.random::<f64>() * s.x,
        region.min.y + rng.random::<f64>() * s.y,
        region.min.z + rng.random::<f64>() * s.z,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeState {
    Active,
    Asleep,
    Dead,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Node {
    pub id: usize,
    pub position: Point3,
    pub cell: CellId,
    pub battery: f64,
    pub state: NodeState,
}

impl Node {
    pub fn new(id: usize, position: Point3, spec: &LatticeSpec, battery: f64) -> Self {
        Self {
            id,
            position,
            cell: spec.assign_cell(position),
            battery,
            state: if battery > 0.0 {
                NodeState::Asleep
            } else {
                NodeState::Dead
            },
        }
    }

    pub fn is_alive(&self) -> bool {
        self.state != NodeState::Dead
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeploymentConfig {
    pub region: Aabb,
    pub node_count: usize,
    pub seed: u64,
}

impl DeploymentConfig {
    pub fn new(region: Aabb, node_count: usize, seed: u64) -> Result<Self> {
        let region = Aabb::new(region.min, region.max)?;
        if node_count == 0 {
            return Err(invalid("node_count must be at least 1"));
        }
        Ok(Self {
            region,
            node_count,
            seed,
        })
    }

    pub fn density(&self) -> f64 {
        self.node_count as f64 / self.region.volume()
    }
}

/// Drops `node_count` nodes i.i.d. uniformly in the region, each with one
/// unit of battery, and assigns their cells.
pub fn deploy(config: &DeploymentConfig, spec: &LatticeSpec) -> Result<Vec<Node>> {
    deploy_charged(config, spec, 1.0)
}

pub fn deploy_charged(
    config: &DeploymentConfig,
    spec: &LatticeSpec,
    battery: f64,
) -> Result<Vec<Node>> {
    let config = DeploymentConfig::new(config.region, config.node_count, config.seed)?;
    require_positive("battery capacity", battery)?;
    let mut rng = rng_from_seed(config.seed);
    Ok((0..config.node_count)
        .map(|id| Node::new(id, uniform_point(&mut rng, &config.region), spec, battery))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccuracyReport {
    pub n: usize,
    pub correct_exact: usize,
    pub correct_nearest_int: usize,
}

impl AccuracyReport {
    pub fn exact_fraction(&self) -> f64 {
        self.correct_exact as f64 / self.n as f64
    }

    pub fn nearest_int_fraction(&self) -> f64 {
        self.correct_nearest_int as f64 / self.n as f64
    }
}

/// Sampling region of [`accuracy_experiment`]: a cube of side `10·r_t`
/// centered on the sink. The accuracy fractions do not depend on it.
pub fn accuracy_region(spec: &LatticeSpec) -> Aabb {
    Aabb::cube(spec.sink(), 5.0 * spec.transmission_range()).expect("validated spec")
}

/// Scores the eight-candidate assignment and plain rounding against the
/// exhaustive search on `n` uniform random points.
pub fn accuracy_experiment(spec: &LatticeSpec, n: usize, seed: u64) -> Result<AccuracyReport> {
    accuracy_experiment_in(spec, &accuracy_region(spec), n, seed)
}

pub fn accuracy_experiment_in(
    spec: &LatticeSpec,
    region: &Aabb,
    n: usize,
    seed: u64,
) -> Result<AccuracyReport> {
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    let mut rng = rng_from_seed(seed);
    let mut report = AccuracyReport {
        n,
        correct_exact: 0,
        correct_nearest_int: 0,
    };
    for _ in 0..n {
        let p = uniform_point(&mut rng, region);
        let truth = spec.assign_cell_oracle(p, ORACLE_WINDOW)?;
        if spec.assign_cell(p) == truth {
            report.correct_exact += 1;
        }
        if spec.assign_cell_nearest_int(p) == truth {
            report.correct_nearest_int += 1;
        }
    }
    Ok(report)
}

/// Number of cells whose center lies in `region`: the number of active
/// nodes needed to cover it.
pub fn active_count(spec: &LatticeSpec, region: &Aabb) -> usize {
    spec.cells_with_center_in(region).len()
}

/// Cells whose whole polyhedron lies inside `region`.
pub fn interior_cells(spec: &LatticeSpec, region: &Aabb) -> Vec<CellId> {
    spec.cells_with_center_in(region)
        .into_iter()
        .filter(|id| is_interior(spec, region, *id))
        .collect()
}

fn is_interior(spec: &LatticeSpec, region: &Aabb, id: CellId) -> bool {
    spec.polyhedron(id)
        .vertices
        .iter()
        .all(|v| region.contains(*v))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    pub shape: CellShape,
    pub k: usize,
    pub battery_capacity: f64,
    /// Cells lying entirely inside the region.
    pub interior_cells: usize,
    /// Interior cells holding at least one node.
    pub cells_populated: usize,
    pub mean_nodes_per_cell: f64,
    /// Completed time steps before some populated interior cell had fewer
    /// than `k` live nodes.
    pub network_lifetime: f64,
    /// The cell that failed first (lowest id among those failing together).
    pub first_failed_cell: CellId,
    /// Active node count during each completed step.
    pub active_count_over_time: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Candidate {
    battery: f64,
    node: usize,
}

impl Eq for Candidate {}

impl Ord for Candidate {
    // Max-heap order: highest battery first, then lowest node id.
    fn cmp(&self, other: &Self) -> Ordering {
        self.battery
            .total_cmp(&other.battery)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Deploys nodes per `config` with `battery_capacity` each and runs
/// [`simulate_lifetime`].
pub fn lifetime_simulation(
    spec: &LatticeSpec,
    config: &DeploymentConfig,
    battery_capacity: f64,
    k: usize,
) -> Result<SimResult> {
    let mut nodes = deploy_charged(config, spec, battery_capacity)?;
    simulate_lifetime(spec, &config.region, &mut nodes, battery_capacity, k)
}

/// Runs unit time steps. In each populated interior cell the `k` live
/// nodes with the most battery (ties to the lowest id) are active and drain
/// one unit; sleeping nodes do not drain. Stops as soon as a populated
/// interior cell has fewer than `k` live nodes. Node states in `nodes` are
/// left as of the last completed step.
pub fn simulate_lifetime(
    spec: &LatticeSpec,
    region: &Aabb,
    nodes: &mut [Node],
    battery_capacity: f64,
    k: usize,
) -> Result<SimResult> {
    require_positive("battery capacity", battery_capacity)?;
    if k == 0 {
        return Err(invalid("k must be at least 1"));
    }
    let interior = interior_cells(spec, region);
    let interior_set: HashSet<CellId> = interior.iter().copied().collect();

    let mut members: BTreeMap<CellId, Vec<usize>> = BTreeMap::new();
    for (idx, node) in nodes.iter().enumerate() {
        debug_assert_eq!(node.cell, spec.assign_cell(node.position));
        if interior_set.contains(&node.cell) {
            members.entry(node.cell).or_default().push(idx);
        }
    }
    if members.is_empty() {
        return Err(Error::EmptyRegion);
    }
    let populated = members.len();
    let in_cells: usize = members.values().map(Vec::len).sum();

    let mut cells: Vec<(CellId, BinaryHeap<Candidate>)> = members
        .into_iter()
        .map(|(id, idxs)| {
            let heap = idxs
                .into_iter()
                .filter(|i| nodes[*i].is_alive())
                .map(|i| Candidate {
                    battery: nodes[i].battery,
                    node: i,
                })
                .collect();
            (id, heap)
        })
        .collect();

    let mut timeline = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut picked: Vec<Candidate> = Vec::with_capacity(k);
    let first_failed = loop {
        if let Some((id, _)) = cells.iter().find(|(_, heap)| heap.len() < k) {
            break *id;
        }
        for i in active.drain(..) {
            if nodes[i].state == NodeState::Active {
                nodes[i].state = NodeState::Asleep;
            }
        }
        for (_, heap) in cells.iter_mut() {
            picked.clear();
            for _ in 0..k {
                picked.push(heap.pop().expect("checked heap size"));
            }
            for c in &picked {
                let node = &mut nodes[c.node];
                node.battery -= 1.0;
                active.push(c.node);
                if node.battery > 0.0 {
                    node.state = NodeState::Active;
                    heap.push(Candidate {
                        battery: node.battery,
                        node: c.node,
                    });
                } else {
                    node.state = NodeState::Dead;
                }
            }
        }
        timeline.push(k * cells.len());
    };

    Ok(SimResult {
        shape: spec.shape(),
        k,
        battery_capacity,
        interior_cells: interior.len(),
        cells_populated: populated,
        mean_nodes_per_cell: in_cells as f64 / populated as f64,
        network_lifetime: timeline.len() as f64,
        first_failed_cell: first_failed,
        active_count_over_time: timeline,
    })
}
