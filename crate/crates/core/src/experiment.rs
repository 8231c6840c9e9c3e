//! Ensemble experiments: run the full pipeline over many instances per
//! `(n, k)` cell, persist per-instance artifacts, aggregate, and render
//! plot-ready tables.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::basin::{map_basins, BasinPartition};
use crate::error::{Error, Result};
use crate::invariants;
use crate::lon::{build_lon, LocalOptimaNetwork};
use crate::metrics::{self, NetworkStats};
use crate::nk::{NeighborhoodModel, NkInstance};
use crate::stats;

pub const DEFAULT_REPLICATES: usize = 30;

pub const SEED_DERIVATION: &str = "seed = base_seed XOR splitmix64((cell_index << 32) | replicate_index); \
     splitmix64 is a bijection on 64-bit integers, so distinct (cell, replicate) pairs never share a seed";

pub const EDGE_COUNT_CONVENTION: &str =
    "n_e counts directed off-diagonal edges (w_ij > 0, i != j); n_e_with_loops also counts each nonzero self-loop";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub n: usize,
    pub k: usize,
}

impl Cell {
    pub fn label(&self) -> String {
        format!("n{}_k{}", self.n, self.k)
    }
}

/// Even `k` from 2 to `n - 2`, plus `k = n - 1`.
pub fn standard_cells(n: usize) -> Vec<Cell> {
    let mut cells: Vec<Cell> = (2..n.saturating_sub(1))
        .step_by(2)
        .map(|k| Cell { n, k })
        .collect();
    if n >= 2 && cells.last().is_none_or(|c| c.k != n - 1) {
        cells.push(Cell { n, k: n - 1 });
    }
    cells
}

fn default_replicates() -> usize {
    DEFAULT_REPLICATES
}

fn default_bins() -> usize {
    metrics::DEFAULT_BINS_PER_DECADE
}

fn default_model() -> NeighborhoodModel {
    NeighborhoodModel::Random
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentPlan {
    pub cells: Vec<Cell>,
    #[serde(default = "default_replicates")]
    pub instances_per_cell: usize,
    pub base_seed: u64,
    #[serde(default = "default_model")]
    pub model: NeighborhoodModel,
    pub output_dir: PathBuf,
    /// Worker threads; the global pool is used when absent.
    #[serde(default)]
    pub jobs: Option<usize>,
    #[serde(default = "default_bins")]
    pub bins_per_decade: usize,
    /// Also write node/edge CSV and GraphML for every instance.
    #[serde(default)]
    pub export_networks: bool,
}

impl ExperimentPlan {
    pub fn new(cells: Vec<Cell>, base_seed: u64, output_dir: impl Into<PathBuf>) -> Self {
        Self {
            cells,
            instances_per_cell: DEFAULT_REPLICATES,
            base_seed,
            model: NeighborhoodModel::Random,
            output_dir: output_dir.into(),
            jobs: None,
            bins_per_decade: metrics::DEFAULT_BINS_PER_DECADE,
            export_networks: false,
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Format(format!("malformed plan: {e}")))
    }

    pub fn validate(&self) -> Result<()> {
        if self.instances_per_cell == 0 {
            return Err(Error::Domain("instances_per_cell must be positive".into()));
        }
        if self.bins_per_decade == 0 {
            return Err(Error::Domain("bins_per_decade must be positive".into()));
        }
        if self.jobs == Some(0) {
            return Err(Error::Domain("jobs must be positive".into()));
        }
        for (i, c) in self.cells.iter().enumerate() {
            if c.n == 0 || c.k >= c.n || c.n > crate::basin::MAX_MAPPED_GENES {
                return Err(Error::Domain(format!(
                    "cell (n = {}, k = {}) is invalid",
                    c.n, c.k
                )));
            }
            if self.cells[..i].contains(c) {
                return Err(Error::Domain(format!(
                    "cell (n = {}, k = {}) listed twice",
                    c.n, c.k
                )));
            }
        }
        Ok(())
    }

    pub fn seed(&self, cell_index: usize, replicate: usize) -> u64 {
        derive_seed(self.base_seed, cell_index, replicate)
    }

    pub fn instance_dir(&self, cell: Cell) -> PathBuf {
        self.output_dir.join("instances").join(cell.label())
    }

    pub fn report_path(&self) -> PathBuf {
        self.output_dir.join("report.json")
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

pub fn derive_seed(base_seed: u64, cell_index: usize, replicate: usize) -> u64 {
    base_seed ^ splitmix64(((cell_index as u64) << 32) | replicate as u64)
}

/// Everything produced by analysing one instance.
pub struct Analysis {
    pub partition: BasinPartition,
    pub lon: LocalOptimaNetwork,
    pub stats: NetworkStats,
    pub violations: Vec<String>,
}

/// Maps basins, builds the network, computes every statistic and runs the
/// invariant checks.
pub fn analyze(instance: &NkInstance, bins_per_decade: usize) -> Result<Analysis> {
    let partition = map_basins(instance)?;
    let lon = build_lon(&partition);
    let mut violations = invariants::check_partition(instance, &partition);
    violations.extend(invariants::check_network(&lon));
    let (stats, metric_violations) =
        metrics::compute_all_checked(&lon, &partition, bins_per_decade)?;
    violations.extend(metric_violations);
    Ok(Analysis {
        partition,
        lon,
        stats,
        violations,
    })
}

/// Per-instance stats file contents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub n: usize,
    pub k: usize,
    pub model: NeighborhoodModel,
    pub replicate: usize,
    pub seed: u64,
    pub bins_per_decade: usize,
    /// Instance file, relative to the plan's output directory.
    pub instance_file: String,
    pub violations: Vec<String>,
    pub stats: NetworkStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplicateFailure {
    pub replicate: usize,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub name: String,
    pub mean: Option<f64>,
    /// Sample standard deviation; absent with fewer than two values.
    pub std: Option<f64>,
    pub count: usize,
    /// Completed replicates where the statistic was undefined.
    pub excluded: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreePoint {
    pub degree: usize,
    pub mean_disparity: f64,
    pub inverse_degree: f64,
    /// Replicates having at least one node of this degree.
    pub instances: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PdfPoint {
    pub index: i32,
    pub center: f64,
    pub pdf: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub n: usize,
    pub k: usize,
    pub replicates_planned: usize,
    pub replicates_completed: usize,
    pub incomplete: bool,
    pub failures: Vec<ReplicateFailure>,
    /// Completed replicates with at least one invariant violation.
    pub replicates_with_violations: usize,
    /// Stats files, relative to the output directory, in replicate order.
    pub stats_files: Vec<String>,
    pub metrics: Vec<MetricSummary>,
    pub disparity_by_degree: Vec<DegreePoint>,
    /// Pointwise mean of the per-instance weight densities (absent bins count as zero).
    pub weight_histogram: Vec<PdfPoint>,
}

impl CellSummary {
    pub fn metric(&self, name: &str) -> Option<&MetricSummary> {
        self.metrics.iter().find(|m| m.name == name)
    }

    pub fn mean(&self, name: &str) -> Option<f64> {
        self.metric(name).and_then(|m| m.mean)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub seed_derivation: String,
    pub edge_count_convention: String,
    pub base_seed: u64,
    pub model: NeighborhoodModel,
    pub bins_per_decade: usize,
    pub cells: Vec<CellSummary>,
}

impl AggregateReport {
    pub fn cell(&self, n: usize, k: usize) -> Option<&CellSummary> {
        self.cells.iter().find(|c| c.n == n && c.k == k)
    }

    /// True when any replicate failed or violated an invariant.
    pub fn has_problems(&self) -> bool {
        self.cells
            .iter()
            .any(|c| !c.failures.is_empty() || c.replicates_with_violations > 0)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| Error::Format(format!("malformed report: {e}")))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        write_atomic(path.as_ref(), &serde_json::to_string_pretty(self)?)
    }
}

fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn relative(plan: &ExperimentPlan, path: &Path) -> String {
    path.strip_prefix(&plan.output_dir)
        .unwrap_or(path)
        .to_string_lossy()
        .replace('\\', "/")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReplicateKey {
    pub cell: Cell,
    pub cell_index: usize,
    pub replicate: usize,
}

/// How a replicate was obtained, reported to progress callbacks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Computed,
    Resumed,
    Failed,
}

fn stats_path(plan: &ExperimentPlan, cell: Cell, replicate: usize) -> PathBuf {
    plan.instance_dir(cell)
        .join(format!("r{replicate:03}.stats.json"))
}

fn run_replicate(plan: &ExperimentPlan, key: ReplicateKey) -> Result<(InstanceRecord, Outcome)> {
    let dir = plan.instance_dir(key.cell);
    let seed = plan.seed(key.cell_index, key.replicate);
    let stats_file = stats_path(plan, key.cell, key.replicate);
    if let Ok(text) = fs::read_to_string(&stats_file) {
        if let Ok(rec) = serde_json::from_str::<InstanceRecord>(&text) {
            let exports_ready = !plan.export_networks
                || crate::lon::export_paths(&dir, &format!("r{:03}", key.replicate))
                    .2
                    .exists();
            if rec.seed == seed
                && rec.n == key.cell.n
                && rec.k == key.cell.k
                && rec.model == plan.model
                && rec.bins_per_decade == plan.bins_per_decade
                && exports_ready
            {
                return Ok((rec, Outcome::Resumed));
            }
        }
    }

    fs::create_dir_all(&dir)?;
    let instance = NkInstance::generate(key.cell.n, key.cell.k, plan.model, seed)?;
    let instance_file = dir.join(format!("r{:03}.instance.json", key.replicate));
    write_atomic(&instance_file, &instance.to_json()?)?;
    let analysis = analyze(&instance, plan.bins_per_decade)?;
    if plan.export_networks {
        let (np, ep, gp) = crate::lon::export_paths(&dir, &format!("r{:03}", key.replicate));
        crate::lon::export_edge_list(&analysis.lon, np, ep)?;
        crate::lon::export_graphml(&analysis.lon, gp)?;
    }
    let rec = InstanceRecord {
        n: key.cell.n,
        k: key.cell.k,
        model: plan.model,
        replicate: key.replicate,
        seed,
        bins_per_decade: plan.bins_per_decade,
        instance_file: relative(plan, &instance_file),
        violations: analysis.violations,
        stats: analysis.stats,
    };
    write_atomic(&stats_file, &serde_json::to_string_pretty(&rec)?)?;
    Ok((rec, Outcome::Computed))
}

pub fn run_plan(plan: &ExperimentPlan) -> Result<AggregateReport> {
    run_plan_with_progress(plan, |_, _| {})
}

/// Runs every replicate of the plan (skipping ones already on disk), writes
/// `report.json` and returns the report. `progress` is called once per
/// replicate as it finishes.
pub fn run_plan_with_progress<F>(plan: &ExperimentPlan, progress: F) -> Result<AggregateReport>
where
    F: Fn(ReplicateKey, Outcome) + Sync,
{
    plan.validate()?;
    fs::create_dir_all(&plan.output_dir)?;
    let keys: Vec<ReplicateKey> = plan
        .cells
        .iter()
        .enumerate()
        .flat_map(|(cell_index, &cell)| {
            (0..plan.instances_per_cell).map(move |replicate| ReplicateKey {
                cell,
                cell_index,
                replicate,
            })
        })
        .collect();

    let work = || -> Vec<std::result::Result<InstanceRecord, String>> {
        keys.par_iter()
            .map(|&key| match run_replicate(plan, key) {
                Ok((rec, outcome)) => {
                    progress(key, outcome);
                    Ok(rec)
                }
                Err(e) => {
                    progress(key, Outcome::Failed);
                    Err(e.to_string())
                }
            })
            .collect()
    };
    let results = match plan.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| Error::Domain(format!("cannot start worker pool: {e}")))?
            .install(work),
        None => work(),
    };

    let mut cells = Vec::with_capacity(plan.cells.len());
    let per_cell = plan.instances_per_cell;
    for (cell_index, &cell) in plan.cells.iter().enumerate() {
        let slice = &results[cell_index * per_cell..(cell_index + 1) * per_cell];
        let mut records = Vec::new();
        let mut failures = Vec::new();
        for (replicate, r) in slice.iter().enumerate() {
            match r {
                Ok(rec) => records.push(rec.clone()),
                Err(e) => failures.push(ReplicateFailure {
                    replicate,
                    error: e.clone(),
                }),
            }
        }
        let stats_files = records
            .iter()
            .map(|r| relative(plan, &stats_path(plan, cell, r.replicate)))
            .collect();
        cells.push(summarize_cell(
            cell,
            per_cell,
            &records,
            failures,
            stats_files,
            plan.bins_per_decade,
        ));
    }
    let report = AggregateReport {
        seed_derivation: SEED_DERIVATION.into(),
        edge_count_convention: EDGE_COUNT_CONVENTION.into(),
        base_seed: plan.base_seed,
        model: plan.model,
        bins_per_decade: plan.bins_per_decade,
        cells,
    };
    report.save(plan.report_path())?;
    Ok(report)
}

/// Aggregates completed replicates of one cell. Records must be in replicate order.
pub fn summarize_cell(
    cell: Cell,
    planned: usize,
    records: &[InstanceRecord],
    failures: Vec<ReplicateFailure>,
    stats_files: Vec<String>,
    bins_per_decade: usize,
) -> CellSummary {
    let mut columns: Vec<(&'static str, Vec<f64>, usize)> = Vec::new();
    for rec in records {
        for (idx, (name, value)) in rec.stats.scalars().into_iter().enumerate() {
            if columns.len() <= idx {
                columns.push((name, Vec::new(), 0));
            }
            match value {
                Some(v) => columns[idx].1.push(v),
                None => columns[idx].2 += 1,
            }
        }
    }
    let metrics = columns
        .into_iter()
        .map(|(name, values, excluded)| MetricSummary {
            name: name.into(),
            mean: stats::mean(&values),
            std: stats::sample_std(&values),
            count: values.len(),
            excluded,
        })
        .collect();

    let mut by_degree: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    let mut pdf: BTreeMap<i32, f64> = BTreeMap::new();
    for rec in records {
        for (&k, &y) in &rec.stats.disparity_by_degree {
            by_degree.entry(k).or_default().push(y);
        }
        for bin in &rec.stats.weight_histogram {
            *pdf.entry(bin.index).or_default() += bin.pdf;
        }
    }
    let disparity_by_degree = by_degree
        .into_iter()
        .map(|(degree, ys)| DegreePoint {
            degree,
            mean_disparity: stats::mean(&ys).unwrap_or(f64::NAN),
            inverse_degree: 1.0 / degree as f64,
            instances: ys.len(),
        })
        .collect();
    let total = records.len() as f64;
    let weight_histogram = pdf
        .into_iter()
        .map(|(index, sum)| PdfPoint {
            index,
            center: (metrics::bin_edge(index, bins_per_decade)
                * metrics::bin_edge(index + 1, bins_per_decade))
            .sqrt(),
            pdf: sum / total,
        })
        .collect();

    CellSummary {
        n: cell.n,
        k: cell.k,
        replicates_planned: planned,
        replicates_completed: records.len(),
        incomplete: records.len() < planned,
        failures,
        replicates_with_violations: records.iter().filter(|r| !r.violations.is_empty()).count(),
        stats_files,
        metrics,
        disparity_by_degree,
        weight_histogram,
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn fmt_md(m: Option<&MetricSummary>) -> String {
    match m {
        Some(MetricSummary {
            mean: Some(mean),
            std,
            ..
        }) => match std {
            Some(s) => format!("{} ({})", sig(*mean), sig(*s)),
            None => sig(*mean),
        },
        _ => "–".into(),
    }
}

/// Four significant digits, plain notation where it reads well.
fn sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..6).contains(&mag) {
        format!("{:.*}", (3 - mag).max(0) as usize, x)
    } else {
        format!("{x:.3e}")
    }
}

struct TableSpec {
    stem: &'static str,
    title: &'static str,
    metrics: &'static [(&'static str, &'static str)],
}

const TABLES: &[TableSpec] = &[
    TableSpec {
        stem: "table1_basin_size_regression",
        title: "Cumulative basin-size regression",
        metrics: &[("rho", "rho"), ("alpha", "alpha"), ("beta", "beta")],
    },
    TableSpec {
        stem: "table2_network_properties",
        title: "Network properties",
        metrics: &[
            ("n_v", "n_v"),
            ("n_e", "n_e"),
            ("n_e_with_loops", "n_e_loops"),
            ("mean_cw", "C^w"),
            ("mean_disparity", "Y"),
            ("mean_cw_with_loops", "C^w_loops"),
            ("mean_disparity_with_loops", "Y_loops"),
            ("mean_path_length", "d"),
        ],
    },
    TableSpec {
        stem: "table3_basin_interior",
        title: "Mean basin interior fraction",
        metrics: &[("mean_interior_fraction", "interior")],
    },
    TableSpec {
        stem: "fig1_global_basin_fraction",
        title: "Relative size of the global optimum's basin",
        metrics: &[("global_basin_fraction", "global_basin_fraction")],
    },
    TableSpec {
        stem: "fig3_fitness_size_correlation",
        title: "Correlation of optimum fitness with ln(basin size)",
        metrics: &[("fitness_size_correlation", "correlation")],
    },
    TableSpec {
        stem: "fig4_path_lengths",
        title: "Mean shortest path length",
        metrics: &[
            ("mean_path_length", "d"),
            ("mean_path_to_global", "d_to_global"),
        ],
    },
    TableSpec {
        stem: "fig7_self_weight",
        title: "Mean self-loop weight",
        metrics: &[("mean_self_weight", "w_ii")],
    },
];

/// Writes CSV and Markdown mirrors of the summary tables plus the plot data
/// files, with rows in ascending `(n, k)`. Returns the files written.
pub fn render_tables(report: &AggregateReport, dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let mut cells: Vec<&CellSummary> = report.cells.iter().collect();
    cells.sort_by_key(|c| (c.n, c.k));
    let mut written = Vec::new();

    for spec in TABLES {
        let mut csv = String::from("n,k,replicates");
        let mut md = format!("# {}\n\n| N | K | replicates |", spec.title);
        for (_, label) in spec.metrics {
            write!(csv, ",{label}_mean,{label}_std,{label}_excluded").unwrap();
            write!(md, " {label} |").unwrap();
        }
        csv.push('\n');
        md.push_str("\n|---|---|---|");
        for _ in spec.metrics {
            md.push_str("---|");
        }
        md.push('\n');
        for c in &cells {
            write!(csv, "{},{},{}", c.n, c.k, c.replicates_completed).unwrap();
            write!(md, "| {} | {} | {} |", c.n, c.k, c.replicates_completed).unwrap();
            for (name, _) in spec.metrics {
                let m = c.metric(name);
                write!(
                    csv,
                    ",{},{},{}",
                    fmt_opt(m.and_then(|m| m.mean)),
                    fmt_opt(m.and_then(|m| m.std)),
                    m.map_or(0, |m| m.excluded)
                )
                .unwrap();
                write!(md, " {} |", fmt_md(m)).unwrap();
            }
            csv.push('\n');
            md.push('\n');
        }
        if spec.stem.starts_with("table2") {
            writeln!(md, "\n{}.", report.edge_count_convention).unwrap();
            writeln!(
                md,
                "C^w and Y exclude self-loops; the _loops columns count each node's self-loop as one more neighbour."
            )
            .unwrap();
        }
        for (ext, body) in [("csv", &csv), ("md", &md)] {
            let path = dir.join(format!("{}.{ext}", spec.stem));
            fs::write(&path, body)?;
            written.push(path);
        }
    }

    let mut fig5 = String::from("n,k,bin_index,bin_center,pdf\n");
    let mut fig6 = String::from("n,k,degree,mean_disparity,inverse_degree,instances\n");
    for c in &cells {
        for p in &c.weight_histogram {
            writeln!(fig5, "{},{},{},{},{}", c.n, c.k, p.index, p.center, p.pdf).unwrap();
        }
        for p in &c.disparity_by_degree {
            writeln!(
                fig6,
                "{},{},{},{},{},{}",
                c.n, c.k, p.degree, p.mean_disparity, p.inverse_degree, p.instances
            )
            .unwrap();
        }
    }
    for (name, body) in [
        ("fig5_weight_distribution.csv", fig5),
        ("fig6_disparity_by_degree.csv", fig6),
    ] {
        let path = dir.join(name);
        fs::write(&path, body)?;
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_cells_cover_even_k_and_full_epistasis() {
        let ks: Vec<usize> = standard_cells(14).iter().map(|c| c.k).collect();
        assert_eq!(ks, vec![2, 4, 6, 8, 10, 12, 13]);
        let ks: Vec<usize> = standard_cells(18).iter().map(|c| c.k).collect();
        assert_eq!(ks, vec![2, 4, 6, 8, 10, 12, 14, 16, 17]);
        let ks: Vec<usize> = standard_cells(3).iter().map(|c| c.k).collect();
        assert_eq!(ks, vec![2]);
    }

    #[test]
    fn seeds_do_not_collide() {
        let mut seen = std::collections::HashSet::new();
        for cell in 0..20 {
            for rep in 0..100 {
                assert!(seen.insert(derive_seed(12345, cell, rep)));
            }
        }
    }

    #[test]
    fn plan_validation() {
        let mut plan = ExperimentPlan::new(vec![Cell { n: 8, k: 8 }], 1, "/tmp/x");
        assert!(plan.validate().is_err());
        plan.cells = vec![Cell { n: 8, k: 2 }, Cell { n: 8, k: 2 }];
        assert!(plan.validate().is_err());
        plan.cells = vec![Cell { n: 8, k: 2 }];
        plan.instances_per_cell = 0;
        assert!(plan.validate().is_err());
    }

    #[test]
    fn plan_json_defaults() {
        let plan: ExperimentPlan = serde_json::from_str(
            r#"{"cells": [{"n": 8, "k": 2}], "base_seed": 5, "output_dir": "out"}"#,
        )
        .unwrap();
        assert_eq!(plan.instances_per_cell, 30);
        assert_eq!(plan.model, NeighborhoodModel::Random);
        assert_eq!(plan.bins_per_decade, 10);
    }

    #[test]
    fn significant_digits() {
        assert_eq!(sig(0.0025), "0.002500");
        assert_eq!(sig(184.2), "184.2");
        assert_eq!(sig(-0.0003), "-0.0003000");
        assert_eq!(sig(12327.4), "12327");
    }
}
