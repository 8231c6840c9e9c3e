//! Weighted-network statistics over a [`LocalOptimaNetwork`].
//!
//! Self-loops only enter through `w_ii`; degree, strength, clustering,
//! disparity, path lengths and the weight histogram all use off-diagonal
//! edges exclusively.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BinaryHeap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basin::{self, BasinPartition, SizeRegression};
use crate::error::{Error, Result};
use crate::invariants;
use crate::lon::LocalOptimaNetwork;

pub const DEFAULT_BINS_PER_DECADE: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct Clustering {
    pub per_node: Vec<f64>,
    pub mean: f64,
}

/// How a node's self-loop enters clustering and disparity.
///
/// `Excluded` follows the textbook definitions over off-diagonal edges.
/// `Included` treats the loop as one more neighbour: it adds one to the
/// degree, `w_ii` to the strength (which becomes 1), and closes a triangle
/// with every neighbour that links back. Published ensemble tables of these
/// two statistics follow the second convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SelfLoops {
    #[default]
    Excluded,
    Included,
}

/// Weighted clustering coefficient of every node, self-loops excluded.
///
/// `c(i) = 1 / (s_i (k_i - 1)) * sum_{j,h} (w_ij + w_ih) / 2 * a_ij a_jh a_hi`,
/// with nodes of degree below two assigned zero.
pub fn weighted_clustering(lon: &LocalOptimaNetwork) -> Clustering {
    weighted_clustering_with(lon, SelfLoops::Excluded)
}

pub fn weighted_clustering_with(lon: &LocalOptimaNetwork, loops: SelfLoops) -> Clustering {
    let nv = lon.num_nodes();
    let incoming = reverse_adjacency(lon);
    let per_node: Vec<f64> = (0..nv)
        .into_par_iter()
        .map_init(
            || (vec![false; nv], vec![0.0f64; nv]),
            |(closes, w_from_i), i| {
                let w_ii = match loops {
                    SelfLoops::Excluded => 0.0,
                    SelfLoops::Included => lon.self_weight(i),
                };
                let k = lon.degree(i) + usize::from(w_ii > 0.0);
                if k < 2 {
                    return 0.0;
                }
                let (targets, weights) = lon.out_edges(i);
                for &h in &incoming[i] {
                    closes[h as usize] = true;
                }
                for (&h, &w) in targets.iter().zip(weights) {
                    w_from_i[h as usize] = w;
                }
                let mut sum = 0.0;
                for (&j, &w_ij) in targets.iter().zip(weights) {
                    for &h in lon.out_edges(j as usize).0 {
                        if closes[h as usize] {
                            sum += (w_ij + w_from_i[h as usize]) / 2.0;
                        }
                    }
                    // Pairs (i, j) and (j, i) through the loop.
                    if w_ii > 0.0 && closes[j as usize] {
                        sum += w_ii + w_ij;
                    }
                }
                for &h in &incoming[i] {
                    closes[h as usize] = false;
                }
                for &h in targets {
                    w_from_i[h as usize] = 0.0;
                }
                sum / ((lon.strength(i) + w_ii) * (k - 1) as f64)
            },
        )
        .collect();
    let mean = per_node.iter().sum::<f64>() / nv as f64;
    Clustering { per_node, mean }
}

fn reverse_adjacency(lon: &LocalOptimaNetwork) -> Vec<Vec<u32>> {
    let mut incoming = vec![Vec::new(); lon.num_nodes()];
    for i in 0..lon.num_nodes() {
        for &j in lon.out_edges(i).0 {
            incoming[j as usize].push(i as u32);
        }
    }
    incoming
}

#[derive(Debug, Clone, PartialEq)]
pub struct Disparity {
    /// `None` for nodes without off-diagonal edges.
    pub per_node: Vec<Option<f64>>,
    pub mean: Option<f64>,
    /// Mean disparity of the nodes of each out-degree.
    pub by_degree: BTreeMap<usize, f64>,
    /// Nodes skipped because their strength is zero.
    pub isolated: usize,
}

/// Disparity `Y2(i) = sum_{j != i} (w_ij / s_i)^2`.
pub fn disparity(lon: &LocalOptimaNetwork) -> Disparity {
    disparity_with(lon, SelfLoops::Excluded)
}

/// Disparity under either loop convention; `by_degree` is keyed by the
/// degree of the same convention.
pub fn disparity_with(lon: &LocalOptimaNetwork, loops: SelfLoops) -> Disparity {
    let per_node: Vec<Option<f64>> = (0..lon.num_nodes())
        .map(|i| {
            let w_ii = match loops {
                SelfLoops::Excluded => 0.0,
                SelfLoops::Included => lon.self_weight(i),
            };
            let s = lon.strength(i) + w_ii;
            (s > 0.0).then(|| {
                lon.out_edges(i)
                    .1
                    .iter()
                    .map(|w| (w / s).powi(2))
                    .sum::<f64>()
                    + (w_ii / s).powi(2)
            })
        })
        .collect();
    let degree = |i: usize| match loops {
        SelfLoops::Excluded => lon.degree(i),
        SelfLoops::Included => lon.degree(i) + usize::from(lon.self_weight(i) > 0.0),
    };
    let present: Vec<(usize, f64)> = per_node
        .iter()
        .enumerate()
        .filter_map(|(i, y)| y.map(|y| (degree(i), y)))
        .collect();
    let mean = (!present.is_empty())
        .then(|| present.iter().map(|p| p.1).sum::<f64>() / present.len() as f64);
    let mut groups: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
    for &(k, y) in &present {
        let g = groups.entry(k).or_default();
        g.0 += y;
        g.1 += 1;
    }
    Disparity {
        isolated: per_node.len() - present.len(),
        per_node,
        mean,
        by_degree: groups
            .into_iter()
            .map(|(k, (s, c))| (k, s / c as f64))
            .collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct HeapEntry {
    dist: f64,
    node: u32,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Single-source shortest distances with edge length `1 / w_ij`.
/// Unreachable nodes get `f64::INFINITY`.
pub fn distances_from(lon: &LocalOptimaNetwork, source: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; lon.num_nodes()];
    let mut done = vec![false; lon.num_nodes()];
    let mut heap = BinaryHeap::new();
    dist[source] = 0.0;
    heap.push(HeapEntry {
        dist: 0.0,
        node: source as u32,
    });
    while let Some(HeapEntry { dist: d, node }) = heap.pop() {
        let u = node as usize;
        if done[u] {
            continue;
        }
        done[u] = true;
        let (targets, weights) = lon.out_edges(u);
        for (&v, &w) in targets.iter().zip(weights) {
            let nd = d + 1.0 / w;
            if nd < dist[v as usize] {
                dist[v as usize] = nd;
                heap.push(HeapEntry { dist: nd, node: v });
            }
        }
    }
    dist
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLengths {
    /// Mean over ordered pairs of distinct nodes.
    pub mean: f64,
    /// Mean distance from every other node to the global optimum.
    pub mean_to_global: f64,
}

/// All-pairs shortest path summary; fails on single-node or disconnected networks.
pub fn shortest_paths(lon: &LocalOptimaNetwork) -> Result<PathLengths> {
    let nv = lon.num_nodes();
    if nv < 2 {
        return Err(Error::Domain("path lengths need at least two nodes".into()));
    }
    let g = lon.global_node();
    let per_source: Vec<(usize, f64, f64)> = (0..nv)
        .into_par_iter()
        .map(|s| {
            let d = distances_from(lon, s);
            let unreachable = d.iter().filter(|x| x.is_infinite()).count();
            (unreachable, d.iter().sum::<f64>(), d[g])
        })
        .collect();
    let mut total = 0.0;
    let mut to_global = 0.0;
    for (s, &(unreachable, sum, dg)) in per_source.iter().enumerate() {
        if unreachable > 0 {
            return Err(Error::Disconnected(format!(
                "{unreachable} nodes unreachable from node {s}"
            )));
        }
        total += sum;
        if s != g {
            to_global += dg;
        }
    }
    Ok(PathLengths {
        mean: total / (nv * (nv - 1)) as f64,
        mean_to_global: to_global / (nv - 1) as f64,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    /// Position on the decade-aligned grid: the bin spans
    /// `[10^(index/b), 10^((index+1)/b))` for `b` bins per decade.
    pub index: i32,
    pub lower: f64,
    pub upper: f64,
    /// Geometric mean of the edges.
    pub center: f64,
    pub count: usize,
    pub pdf: f64,
}

/// Lower edge of bin `index` on the decade-aligned grid.
pub fn bin_edge(index: i32, bins_per_decade: usize) -> f64 {
    10f64.powf(index as f64 / bins_per_decade as f64)
}

/// Grid position of a positive value.
pub fn bin_index(value: f64, bins_per_decade: usize) -> i32 {
    let mut b = (value.log10() * bins_per_decade as f64).floor() as i32;
    while value < bin_edge(b, bins_per_decade) {
        b -= 1;
    }
    while value >= bin_edge(b + 1, bins_per_decade) {
        b += 1;
    }
    b
}

/// Log-binned density of the off-diagonal weights.
///
/// Bins are contiguous from the one holding the smallest weight to the one
/// holding the largest; `pdf = count / (total * width)`.
pub fn weight_histogram(lon: &LocalOptimaNetwork, bins_per_decade: usize) -> Vec<HistogramBin> {
    log_histogram(lon.off_diagonal_weights(), bins_per_decade)
}

pub fn log_histogram(values: &[f64], bins_per_decade: usize) -> Vec<HistogramBin> {
    assert!(bins_per_decade > 0);
    if values.is_empty() {
        return Vec::new();
    }
    let indices: Vec<i32> = values
        .iter()
        .map(|&w| bin_index(w, bins_per_decade))
        .collect();
    let lo = *indices.iter().min().unwrap();
    let hi = *indices.iter().max().unwrap();
    let mut counts = vec![0usize; (hi - lo + 1) as usize];
    for b in indices {
        counts[(b - lo) as usize] += 1;
    }
    let total = values.len() as f64;
    counts
        .into_iter()
        .enumerate()
        .map(|(off, count)| {
            let index = lo + off as i32;
            let lower = bin_edge(index, bins_per_decade);
            let upper = bin_edge(index + 1, bins_per_decade);
            HistogramBin {
                index,
                lower,
                upper,
                center: (lower * upper).sqrt(),
                count,
                pdf: count as f64 / (total * (upper - lower)),
            }
        })
        .collect()
}

/// Mean of `w_ii` over all nodes.
pub fn self_weight_mean(lon: &LocalOptimaNetwork) -> f64 {
    let n = lon.num_nodes();
    (0..n).map(|i| lon.self_weight(i)).sum::<f64>() / n as f64
}

/// Every per-instance scalar and plot array.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkStats {
    pub n_v: usize,
    pub n_e: usize,
    /// Nodes with a nonzero self-loop; `n_e + self_loops` counts every stored edge.
    pub self_loops: usize,
    pub mean_cw: f64,
    pub mean_disparity: Option<f64>,
    /// Clustering and disparity with the self-loop counted as an edge.
    pub mean_cw_with_loops: f64,
    pub mean_disparity_with_loops: Option<f64>,
    pub mean_path_length: Option<f64>,
    pub mean_path_to_global: Option<f64>,
    pub mean_self_weight: f64,
    pub isolated_nodes: usize,
    pub global_fitness: f64,
    pub global_basin_fraction: f64,
    pub mean_interior_fraction: f64,
    pub fitness_size_correlation: Option<f64>,
    pub size_regression: Option<SizeRegression>,
    pub disparity_by_degree: BTreeMap<usize, f64>,
    pub weight_histogram: Vec<HistogramBin>,
}

impl NetworkStats {
    /// Named scalars in a fixed order; `None` marks an undefined statistic.
    pub fn scalars(&self) -> Vec<(&'static str, Option<f64>)> {
        let reg = self.size_regression;
        vec![
            ("n_v", Some(self.n_v as f64)),
            ("n_e", Some(self.n_e as f64)),
            ("n_e_with_loops", Some((self.n_e + self.self_loops) as f64)),
            ("mean_cw", Some(self.mean_cw)),
            ("mean_disparity", self.mean_disparity),
            ("mean_cw_with_loops", Some(self.mean_cw_with_loops)),
            ("mean_disparity_with_loops", self.mean_disparity_with_loops),
            ("mean_path_length", self.mean_path_length),
            ("mean_path_to_global", self.mean_path_to_global),
            ("mean_self_weight", Some(self.mean_self_weight)),
            ("global_fitness", Some(self.global_fitness)),
            ("global_basin_fraction", Some(self.global_basin_fraction)),
            ("mean_interior_fraction", Some(self.mean_interior_fraction)),
            ("fitness_size_correlation", self.fitness_size_correlation),
            ("rho", reg.map(|r| r.rho)),
            ("alpha", reg.map(|r| r.alpha)),
            ("beta", reg.map(|r| r.beta)),
        ]
    }
}

/// Computes all statistics for a network built from `partition`.
pub fn compute_all(
    lon: &LocalOptimaNetwork,
    partition: &BasinPartition,
    bins_per_decade: usize,
) -> Result<NetworkStats> {
    compute_parts(lon, partition, bins_per_decade).map(|(stats, _)| stats)
}

/// [`compute_all`] plus the clustering and disparity bound checks.
pub fn compute_all_checked(
    lon: &LocalOptimaNetwork,
    partition: &BasinPartition,
    bins_per_decade: usize,
) -> Result<(NetworkStats, Vec<String>)> {
    let (stats, checks) = compute_parts(lon, partition, bins_per_decade)?;
    Ok((stats, checks))
}

fn compute_parts(
    lon: &LocalOptimaNetwork,
    partition: &BasinPartition,
    bins_per_decade: usize,
) -> Result<(NetworkStats, Vec<String>)> {
    let paths = if lon.num_nodes() > 1 {
        Some(shortest_paths(lon)?)
    } else {
        None
    };
    let clustering = weighted_clustering(lon);
    let disp = disparity(lon);
    let clustering_loops = weighted_clustering_with(lon, SelfLoops::Included);
    let disp_loops = disparity_with(lon, SelfLoops::Included);
    let mut checks = invariants::check_metrics(lon, &clustering, &disp, SelfLoops::Excluded);
    checks.extend(invariants::check_metrics(
        lon,
        &clustering_loops,
        &disp_loops,
        SelfLoops::Included,
    ));
    let stats = NetworkStats {
        n_v: lon.num_nodes(),
        n_e: lon.num_edges(),
        self_loops: (0..lon.num_nodes())
            .filter(|&i| lon.self_weight(i) > 0.0)
            .count(),
        mean_cw: clustering.mean,
        mean_disparity: disp.mean,
        mean_cw_with_loops: clustering_loops.mean,
        mean_disparity_with_loops: disp_loops.mean,
        mean_path_length: paths.map(|p| p.mean),
        mean_path_to_global: paths.map(|p| p.mean_to_global),
        mean_self_weight: self_weight_mean(lon),
        isolated_nodes: disp.isolated,
        global_fitness: partition.global_optimum().fitness,
        global_basin_fraction: basin::global_optimum_basin_fraction(partition),
        mean_interior_fraction: basin::basin_geometry(partition).mean_interior_fraction(),
        fitness_size_correlation: basin::fitness_size_correlation(partition),
        size_regression: basin::basin_size_regression(partition),
        disparity_by_degree: disp.by_degree,
        weight_histogram: weight_histogram(lon, bins_per_decade),
    };
    Ok((stats, checks))
}
