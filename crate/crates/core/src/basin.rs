//! Exhaustive best-improvement hill climbing and basin-of-attraction statistics.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nk::{Configuration, NkInstance};
use crate::stats;

/// Largest `n` for which [`map_basins`] will allocate the full assignment.
pub const MAX_MAPPED_GENES: usize = 26;

/// Runs best-improvement hill climbing from `start`.
///
/// Each step picks the fittest neighbour (lowest flipped gene on ties) and
/// moves there only if it is strictly fitter than the current configuration.
pub fn hill_climb(instance: &NkInstance, start: &Configuration) -> Result<Configuration> {
    let mut current = *start;
    let mut current_fit = instance.evaluate(&current)?;
    loop {
        let mut best: Option<(Configuration, f64)> = None;
        for candidate in current.neighbors() {
            let f = instance.fitness_of(candidate.index());
            if best.is_none_or(|(_, bf)| f > bf) {
                best = Some((candidate, f));
            }
        }
        match best {
            Some((next, f)) if f > current_fit => {
                current = next;
                current_fit = f;
            }
            _ => return Ok(current),
        }
    }
}

/// Successor of `c` under one hill-climbing step, or `c` itself at an optimum.
#[inline]
fn climb_step(fitness: &[f64], c: usize, n: usize) -> u32 {
    let mut best = c ^ 1;
    let mut best_f = fitness[best];
    for gene in 1..n {
        let s = c ^ (1 << gene);
        if fitness[s] > best_f {
            best = s;
            best_f = fitness[s];
        }
    }
    if best_f > fitness[c] {
        best as u32
    } else {
        c as u32
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Basin {
    /// Encoding of the local optimum.
    pub optimum: u32,
    pub fitness: f64,
    pub size: u64,
}

/// The map from every configuration to the basin of the optimum it climbs to.
#[derive(Debug, Clone, PartialEq)]
pub struct BasinPartition {
    n: usize,
    basin_of: Vec<u32>,
    basins: Vec<Basin>,
    global: usize,
}

impl BasinPartition {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn space_size(&self) -> usize {
        self.basin_of.len()
    }

    /// Basins ordered by optimum encoding.
    pub fn basins(&self) -> &[Basin] {
        &self.basins
    }

    pub fn num_optima(&self) -> usize {
        self.basins.len()
    }

    /// Basin index (position in [`BasinPartition::basins`]) of configuration `c`.
    #[inline]
    pub fn basin_of(&self, c: u32) -> usize {
        self.basin_of[c as usize] as usize
    }

    /// Encoding of the local optimum configuration `c` climbs to.
    pub fn optimum_of(&self, c: u32) -> u32 {
        self.basins[self.basin_of(c)].optimum
    }

    /// Per-configuration basin indices, indexed by encoding.
    pub fn assignment(&self) -> &[u32] {
        &self.basin_of
    }

    /// Index of the fittest basin; the lowest encoding wins exact ties.
    pub fn global_index(&self) -> usize {
        self.global
    }

    pub fn global_optimum(&self) -> &Basin {
        &self.basins[self.global]
    }

    /// Writes `config_index,optimum_index` rows for every configuration.
    pub fn write_assignment_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = BufWriter::new(File::create(path)?);
        writeln!(w, "config_index,optimum_index")?;
        for (c, &b) in self.basin_of.iter().enumerate() {
            writeln!(w, "{c},{}", self.basins[b as usize].optimum)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Climbs from every configuration and partitions the space into basins.
pub fn map_basins(instance: &NkInstance) -> Result<BasinPartition> {
    let n = instance.n;
    if n > MAX_MAPPED_GENES {
        return Err(Error::Capacity {
            n,
            max: MAX_MAPPED_GENES,
        });
    }
    let size = instance.space_size();
    let fitness = instance.fitness_landscape();

    let successor: Vec<u32> = (0..size)
        .into_par_iter()
        .map(|c| climb_step(&fitness, c, n))
        .collect();

    let mut slot = vec![u32::MAX; size];
    let mut basins = Vec::new();
    for (c, &s) in successor.iter().enumerate() {
        if s as usize == c {
            slot[c] = basins.len() as u32;
            basins.push(Basin {
                optimum: c as u32,
                fitness: fitness[c],
                size: 0,
            });
        }
    }

    let basin_of: Vec<u32> = (0..size)
        .into_par_iter()
        .map(|c| {
            let mut x = c;
            loop {
                let s = successor[x] as usize;
                if s == x {
                    return slot[x];
                }
                x = s;
            }
        })
        .collect();
    for &b in &basin_of {
        basins[b as usize].size += 1;
    }

    let mut global = 0;
    for (i, b) in basins.iter().enumerate() {
        if b.fitness > basins[global].fitness {
            global = i;
        }
    }

    Ok(BasinPartition {
        n,
        basin_of,
        basins,
        global,
    })
}

/// Size of the global optimum's basin relative to the whole space.
pub fn global_optimum_basin_fraction(partition: &BasinPartition) -> f64 {
    partition.global_optimum().size as f64 / partition.space_size() as f64
}

/// Interior and boundary sizes of each basin.
///
/// A configuration is interior when all of its neighbours climb to the same
/// optimum it does.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasinGeometry {
    pub interior: Vec<u64>,
    pub boundary: Vec<u64>,
}

impl BasinGeometry {
    pub fn interior_fraction(&self, basin: usize) -> f64 {
        let size = self.interior[basin] + self.boundary[basin];
        self.interior[basin] as f64 / size as f64
    }

    /// Mean over basins of the interior fraction.
    pub fn mean_interior_fraction(&self) -> f64 {
        let n = self.interior.len();
        (0..n).map(|b| self.interior_fraction(b)).sum::<f64>() / n as f64
    }
}

pub fn basin_geometry(partition: &BasinPartition) -> BasinGeometry {
    let n = partition.n;
    let nb = partition.num_optima();
    let mut interior = vec![0u64; nb];
    let mut boundary = vec![0u64; nb];
    for (c, &b) in partition.basin_of.iter().enumerate() {
        let inside = (0..n).all(|g| partition.basin_of[c ^ (1 << g)] == b);
        if inside {
            interior[b as usize] += 1;
        } else {
            boundary[b as usize] += 1;
        }
    }
    BasinGeometry { interior, boundary }
}

/// Pearson correlation between optimum fitness and the log of basin size.
pub fn fitness_size_correlation(partition: &BasinPartition) -> Option<f64> {
    let fit: Vec<f64> = partition.basins.iter().map(|b| b.fitness).collect();
    let log_size: Vec<f64> = partition
        .basins
        .iter()
        .map(|b| (b.size as f64).ln())
        .collect();
    stats::pearson(&fit, &log_size)
}

/// Straight-line fit of the log cumulative basin-size count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SizeRegression {
    pub rho: f64,
    pub alpha: f64,
    pub beta: f64,
}

/// Points `(s, ln C(s))` where `C(s)` counts basins of size at least `s`,
/// taken at each distinct observed size in ascending order.
pub fn cumulative_size_counts(partition: &BasinPartition) -> Vec<(u64, f64)> {
    let mut sizes: Vec<u64> = partition.basins.iter().map(|b| b.size).collect();
    sizes.sort_unstable();
    let total = sizes.len();
    let mut points = Vec::new();
    let mut i = 0;
    while i < total {
        let s = sizes[i];
        points.push((s, ((total - i) as f64).ln()));
        while i < total && sizes[i] == s {
            i += 1;
        }
    }
    points
}

/// Fits `ln C(s) = alpha + beta * s`; needs at least three distinct sizes.
pub fn basin_size_regression(partition: &BasinPartition) -> Option<SizeRegression> {
    let points = cumulative_size_counts(partition);
    if points.len() < 3 {
        return None;
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0 as f64).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1).collect();
    let (alpha, beta) = stats::linear_fit(&xs, &ys)?;
    let rho = stats::pearson(&xs, &ys)?;
    Some(SizeRegression { rho, alpha, beta })
}

#[cfg(test)]
pub(crate) fn partition_from_parts(
    n: usize,
    basin_of: Vec<u32>,
    basins: Vec<Basin>,
) -> BasinPartition {
    let mut global = 0;
    for (i, b) in basins.iter().enumerate() {
        if b.fitness > basins[global].fitness {
            global = i;
        }
    }
    BasinPartition {
        n,
        basin_of,
        basins,
        global,
    }
}
