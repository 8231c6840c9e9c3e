use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use nklon::experiment::{
    analyze, render_tables, run_plan_with_progress, standard_cells, AggregateReport, Cell,
    ExperimentPlan, Outcome,
};
use nklon::lon::{export_edge_list, export_graphml, export_paths};
use nklon::metrics::DEFAULT_BINS_PER_DECADE;
use nklon::{NeighborhoodModel, NkInstance};

/// Exit status when an invariant check fails.
const VIOLATION: u8 = 1;
/// Exit status for usage, I/O and format errors.
const FAILURE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "nklon",
    version,
    about = "Local optima networks of NK landscapes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write one random NK instance as JSON.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = NeighborhoodModel::Random)]
        model: NeighborhoodModel,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Map basins of an instance file, build its network and write the
    /// statistics plus node/edge CSV and GraphML exports.
    Analyze {
        instance: PathBuf,
        /// Output directory; defaults to the instance's directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_BINS_PER_DECADE)]
        bins: usize,
    },
    /// Run an ensemble from a plan file or from flags, resuming finished replicates.
    Batch(BatchArgs),
    /// Render summary tables and plot data from a report.
    Tables {
        report: PathBuf,
        /// Output directory; defaults to `tables/` beside the report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct BatchArgs {
    /// JSON plan file. Flags below override its jobs and output directory.
    #[arg(long)]
    plan: Option<PathBuf>,
    /// Genome lengths, comma separated.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    /// Epistasis values, comma separated. Defaults to even K up to N-2 plus N-1.
    #[arg(long, value_delimiter = ',')]
    k: Vec<usize>,
    #[arg(long, default_value_t = NeighborhoodModel::Random)]
    model: NeighborhoodModel,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = nklon::experiment::DEFAULT_REPLICATES)]
    replicates: usize,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_BINS_PER_DECADE)]
    bins: usize,
    /// Also export every network as CSV and GraphML.
    #[arg(long)]
    export_networks: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate {
            n,
            k,
            model,
            seed,
            out,
        } => generate(n, k, model, seed, &out),
        Command::Analyze {
            instance,
            out,
            bins,
        } => analyze_file(&instance, out, bins),
        Command::Batch(args) => batch(args),
        Command::Tables { report, out } => tables(&report, out),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(VIOLATION),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(FAILURE)
        }
    }
}

fn generate(
    n: usize,
    k: usize,
    model: NeighborhoodModel,
    seed: u64,
    out: &Path,
) -> anyhow::Result<bool> {
    let inst = NkInstance::generate(n, k, model, seed)?;
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    inst.save(out)
        .with_context(|| format!("writing {}", out.display()))?;
    println!("{}", out.display());
    Ok(true)
}

fn instance_id(path: &Path) -> String {
    let stem = path
        .file_stem()
        .map_or("instance".into(), |s| s.to_string_lossy().into_owned());
    stem.strip_suffix(".instance")
        .map(str::to_owned)
        .unwrap_or(stem)
}

fn analyze_file(path: &Path, out: Option<PathBuf>, bins: usize) -> anyhow::Result<bool> {
    if bins == 0 {
        bail!("--bins must be positive");
    }
    let inst = NkInstance::load(path).with_context(|| format!("reading {}", path.display()))?;
    let dir = out.unwrap_or_else(|| path.parent().map(Path::to_path_buf).unwrap_or_default());
    std::fs::create_dir_all(&dir)?;
    let id = instance_id(path);

    let a = analyze(&inst, bins)?;
    let (nodes, edges, graphml) = export_paths(&dir, &id);
    export_edge_list(&a.lon, &nodes, &edges)?;
    export_graphml(&a.lon, &graphml)?;
    a.partition
        .write_assignment_csv(dir.join(format!("{id}.basins.csv")))?;
    let record = serde_json::json!({
        "instance_file": path.to_string_lossy(),
        "n": inst.n,
        "k": inst.k,
        "model": inst.model,
        "seed": inst.seed,
        "bins_per_decade": bins,
        "violations": a.violations,
        "stats": a.stats,
    });
    let stats_path = dir.join(format!("{id}.stats.json"));
    std::fs::write(&stats_path, serde_json::to_string_pretty(&record)?)?;

    println!(
        "optima: {}  edges: {}  stats: {}",
        a.stats.n_v,
        a.stats.n_e,
        stats_path.display()
    );
    for v in &a.violations {
        eprintln!("invariant violated: {v}");
    }
    Ok(a.violations.is_empty())
}

fn batch(args: BatchArgs) -> anyhow::Result<bool> {
    let mut plan = match &args.plan {
        Some(p) => {
            ExperimentPlan::load(p).with_context(|| format!("reading plan {}", p.display()))?
        }
        None => {
            if args.n.is_empty() {
                bail!("either --plan or --n is required");
            }
            let Some(out) = args.out.clone() else {
                bail!("--out is required without --plan");
            };
            let cells = if args.k.is_empty() {
                args.n.iter().flat_map(|&n| standard_cells(n)).collect()
            } else {
                args.n
                    .iter()
                    .flat_map(|&n| args.k.iter().map(move |&k| Cell { n, k }))
                    .collect()
            };
            let mut plan = ExperimentPlan::new(cells, args.seed, out);
            plan.instances_per_cell = args.replicates;
            plan.model = args.model;
            plan.bins_per_decade = args.bins;
            plan
        }
    };
    if args.jobs.is_some() {
        plan.jobs = args.jobs;
    }
    if let (Some(out), Some(_)) = (&args.out, &args.plan) {
        plan.output_dir = out.clone();
    }
    plan.export_networks |= args.export_networks;

    let report = run_plan_with_progress(&plan, |key, outcome| {
        let what = match outcome {
            Outcome::Computed => "done",
            Outcome::Resumed => "resumed",
            Outcome::Failed => "FAILED",
        };
        eprintln!("{} r{:03} {what}", key.cell.label(), key.replicate);
    })?;
    for cell in &report.cells {
        for f in &cell.failures {
            eprintln!(
                "{} r{:03} failed: {}",
                Cell {
                    n: cell.n,
                    k: cell.k
                }
                .label(),
                f.replicate,
                f.error
            );
        }
        if cell.replicates_with_violations > 0 {
            eprintln!(
                "{}: {} replicates violated invariants",
                Cell {
                    n: cell.n,
                    k: cell.k
                }
                .label(),
                cell.replicates_with_violations
            );
        }
    }
    println!("{}", plan.report_path().display());
    Ok(!report.has_problems())
}

fn tables(report_path: &Path, out: Option<PathBuf>) -> anyhow::Result<bool> {
    let report = AggregateReport::load(report_path)
        .with_context(|| format!("reading {}", report_path.display()))?;
    let dir = out.unwrap_or_else(|| {
        report_path
            .parent()
            .unwrap_or(Path::new("."))
            .join("tables")
    });
    for p in render_tables(&report, &dir)? {
        println!("{}", p.display());
    }
    Ok(!report.has_problems())
}
