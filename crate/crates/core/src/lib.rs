//! Topology control for dense 3D sensor networks.
//!
//! Space is tiled with one of four space-filling cells (cube, hexagonal
//! prism, rhombic dodecahedron, truncated octahedron) sized so that any two
//! points in neighboring cells are within transmission range. One node per
//! cell stays awake; the rest sleep until it runs out of battery.
//!
//! * [`geometry`]: cell shapes, vertices, radii, volumes, neighbor classes
//! * [`lattice`]: cell ids, centers, constant-time point → cell assignment
//! * [`planner`]: shape comparison tables, connectivity/coverage checks
//! * [`simulator`]: seeded deployment, accuracy and lifetime experiments
//! * [`routing`]: greedy forwarding over cell ids
//! * [`tables`]: computed constants against their quoted decimals

pub mod config;
pub mod error;
pub mod geometry;
pub mod hull;
pub mod lattice;
pub mod planner;
pub mod routing;
pub mod simulator;
pub mod tables;

pub use error::{Error, Result};
pub use geometry::{
    cell_volume, max_cell_radius, max_vertex_pair_distance, neighbor_classes, Aabb, CellShape,
    NeighborClass, Point3, Polyhedron,
};
pub use lattice::{CellId, LatticeSpec, ORACLE_WINDOW};
pub use routing::{greedy_route, neighbor_choice_count, RouteOutcome, RoutePath, TieBreak};
pub use simulator::{AccuracyReport, DeploymentConfig, Node, NodeState, SimResult};
