//! Greedy geographic forwarding over cell ids.
//!
//! A packet at cell `c` bound for `dst` moves to an alive neighbor whose
//! squared id-space distance to `dst` is strictly smaller than `c`'s. The
//! metric is a non-negative integer that drops every hop, so a route takes
//! at most `|src - dst|²` hops and never cycles. When no neighbor improves
//! the metric the route stops in a dead end; there is no recovery mode.

use rand::seq::IndexedRandom;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::lattice::{CellId, LatticeSpec};
use crate::simulator::{rng_from_seed, SimRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RouteOutcome {
    Delivered,
    DeadEnd,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoutePath {
    pub hops: Vec<CellId>,
    pub outcome: RouteOutcome,
}

impl RoutePath {
    pub fn hop_count(&self) -> usize {
        self.hops.len() - 1
    }

    /// Id-space metric to `dst` at every cell on the path.
    pub fn metric_trace(&self, dst: CellId) -> Vec<i64> {
        self.hops
            .iter()
            .map(|h| h.id_distance_squared(dst))
            .collect()
    }

    pub fn last(&self) -> CellId {
        *self.hops.last().expect("path holds at least the source")
    }
}

/// How to choose among several neighbors that all make progress.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// Smallest metric, then lexicographically smallest id.
    #[default]
    MinMetric,
    /// Uniformly random among all improving neighbors.
    Random { seed: u64 },
}

fn improving(
    spec: &LatticeSpec,
    current: CellId,
    dst: CellId,
    alive: &impl Fn(CellId) -> bool,
) -> Vec<CellId> {
    let here = current.id_distance_squared(dst);
    spec.neighbors(current)
        .into_iter()
        .filter(|n| n.id_distance_squared(dst) < here && alive(*n))
        .collect()
}

/// Number of alive neighbors of `current` that strictly improve the metric.
pub fn neighbor_choice_count(
    spec: &LatticeSpec,
    current: CellId,
    dst: CellId,
    alive: impl Fn(CellId) -> bool,
) -> usize {
    improving(spec, current, dst, &alive).len()
}

pub fn greedy_route(
    spec: &LatticeSpec,
    src: CellId,
    dst: CellId,
    alive: impl Fn(CellId) -> bool,
) -> Result<RoutePath> {
    greedy_route_with(spec, src, dst, alive, TieBreak::MinMetric)
}

pub fn greedy_route_with(
    spec: &LatticeSpec,
    src: CellId,
    dst: CellId,
    alive: impl Fn(CellId) -> bool,
    tie_break: TieBreak,
) -> Result<RoutePath> {
    if !alive(src) {
        return Err(invalid(format!("source cell {src} is not alive")));
    }
    if !alive(dst) {
        return Err(invalid(format!("destination cell {dst} is not alive")));
    }
    let mut rng: Option<SimRng> = match tie_break {
        TieBreak::MinMetric => None,
        TieBreak::Random { seed } => Some(rng_from_seed(seed)),
    };
    let mut hops = vec![src];
    let mut current = src;
    while current != dst {
        let options = improving(spec, current, dst, &alive);
        let next = match rng.as_mut() {
            None => options
                .iter()
                .copied()
                .min_by_key(|n| (n.id_distance_squared(dst), *n)),
            Some(rng) => options.choose(rng).copied(),
        };
        match next {
            Some(n) => {
                hops.push(n);
                current = n;
            }
            None => {
                return Ok(RoutePath {
                    hops,
                    outcome: RouteOutcome::DeadEnd,
                })
            }
        }
    }
    Ok(RoutePath {
        hops,
        outcome: RouteOutcome::Delivered,
    })
}
