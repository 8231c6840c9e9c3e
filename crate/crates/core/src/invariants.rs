//! Structural checks run on every analysed instance. Each returns a list of
//! human-readable violations; an empty list means the artifact is sound.

use std::collections::VecDeque;

use crate::basin::BasinPartition;
use crate::lon::LocalOptimaNetwork;
use crate::metrics::{Clustering, Disparity, SelfLoops};
use crate::nk::NkInstance;

pub const STOCHASTIC_TOLERANCE: f64 = 1e-9;
const BOUND_SLACK: f64 = 1e-12;

pub fn check_partition(instance: &NkInstance, partition: &BasinPartition) -> Vec<String> {
    let mut out = Vec::new();
    let total: u64 = partition.basins().iter().map(|b| b.size).sum();
    if total != instance.space_size() as u64 {
        out.push(format!(
            "basin sizes sum to {total}, expected 2^{} = {}",
            instance.n,
            instance.space_size()
        ));
    }
    for (idx, b) in partition.basins().iter().enumerate() {
        if partition.basin_of(b.optimum) != idx {
            out.push(format!("optimum {} is not in its own basin", b.optimum));
        }
        let f = instance.fitness_of(b.optimum);
        if let Some(g) = (0..instance.n).find(|&g| instance.fitness_of(b.optimum ^ (1 << g)) >= f) {
            out.push(format!(
                "optimum {} is not a strict local maximum (gene {g})",
                b.optimum
            ));
        }
    }
    let g = partition.global_optimum().fitness;
    if partition.basins().iter().any(|b| b.fitness > g) {
        out.push("global optimum is not the fittest optimum".into());
    }
    out
}

/// Number of nodes reachable from node 0 along `adjacency`.
fn reach_from_zero(lon: &LocalOptimaNetwork, adjacency: &[Vec<u32>]) -> usize {
    let mut seen = vec![false; lon.num_nodes()];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = queue.pop_front() {
        for &v in &adjacency[u] {
            if !seen[v as usize] {
                seen[v as usize] = true;
                count += 1;
                queue.push_back(v as usize);
            }
        }
    }
    count
}

/// True when every node can reach every other through off-diagonal edges.
pub fn is_strongly_connected(lon: &LocalOptimaNetwork) -> bool {
    let nv = lon.num_nodes();
    let forward: Vec<Vec<u32>> = (0..nv).map(|i| lon.out_edges(i).0.to_vec()).collect();
    let mut backward = vec![Vec::new(); nv];
    for (i, t) in forward.iter().enumerate() {
        for &j in t {
            backward[j as usize].push(i as u32);
        }
    }
    reach_from_zero(lon, &forward) == nv && reach_from_zero(lon, &backward) == nv
}

pub fn check_network(lon: &LocalOptimaNetwork) -> Vec<String> {
    let mut out = Vec::new();
    for i in 0..lon.num_nodes() {
        let total = lon.self_weight(i) + lon.strength(i);
        if (total - 1.0).abs() > STOCHASTIC_TOLERANCE {
            out.push(format!("node {i}: outgoing weights sum to {total}"));
        }
        let (targets, weights) = lon.out_edges(i);
        if weights.iter().any(|&w| w.is_nan() || w <= 0.0) {
            out.push(format!("node {i}: non-positive stored weight"));
        }
        for &j in targets {
            if !lon.has_edge(j as usize, i) {
                out.push(format!("edge {i}->{j} has no reverse edge"));
            }
        }
    }
    if !is_strongly_connected(lon) {
        out.push("network is not strongly connected".into());
    }
    out
}

/// Clustering in `[0, 1]` and disparity in `[1/k, 1]`, with `k` counted
/// under the same loop convention the metrics were computed with.
pub fn check_metrics(
    lon: &LocalOptimaNetwork,
    clustering: &Clustering,
    disparity: &Disparity,
    loops: SelfLoops,
) -> Vec<String> {
    let mut out = Vec::new();
    for (i, &c) in clustering.per_node.iter().enumerate() {
        if !(-BOUND_SLACK..=1.0 + BOUND_SLACK).contains(&c) {
            out.push(format!("node {i}: clustering {c} outside [0, 1]"));
        }
    }
    for (i, y) in disparity.per_node.iter().enumerate() {
        if let Some(y) = *y {
            let mut k = lon.degree(i) as f64;
            if loops == SelfLoops::Included && lon.self_weight(i) > 0.0 {
                k += 1.0;
            }
            if y < 1.0 / k - BOUND_SLACK || y > 1.0 + BOUND_SLACK {
                out.push(format!("node {i}: disparity {y} outside [1/{k}, 1]"));
            }
        }
    }
    out
}
