//! Brute-force reference implementations used to cross-check the library.
//!
//! Everything here works on explicit bit vectors and dense matrices and
//! shares no code with the crate beyond the instance data itself.

#![allow(dead_code, clippy::needless_range_loop)]

use nklon::experiment::analyze;
use nklon::NkInstance;

pub const ORACLE_TOLERANCE: f64 = 1e-9;

pub fn decode(index: usize, n: usize) -> Vec<bool> {
    (0..n).map(|g| index & (1 << g) != 0).collect()
}

pub fn encode(bits: &[bool]) -> usize {
    bits.iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(g, _)| 1 << g)
        .sum()
}

/// Mean of the per-gene lookups, each row built as the gene's own bit
/// followed by its links, most significant first.
pub fn fitness(inst: &NkInstance, bits: &[bool]) -> f64 {
    let mut total = 0.0;
    for gene in 0..inst.n {
        let mut context = vec![bits[gene]];
        context.extend(inst.links[gene].iter().map(|&l| bits[l]));
        let mut row = 0usize;
        for (pos, &b) in context.iter().enumerate() {
            if b {
                row += 1 << (context.len() - 1 - pos);
            }
        }
        total += inst.tables[gene][row];
    }
    total / inst.n as f64
}

/// Best-improvement ascent; equal gains keep the lowest gene.
pub fn climb(inst: &NkInstance, start: &[bool]) -> Vec<bool> {
    let mut x = start.to_vec();
    loop {
        let here = fitness(inst, &x);
        let mut best: Option<(usize, f64)> = None;
        for g in 0..inst.n {
            let mut y = x.clone();
            y[g] = !y[g];
            let f = fitness(inst, &y);
            let better = match best {
                None => f > here,
                Some((_, bf)) => f > bf,
            };
            if better {
                best = Some((g, f));
            }
        }
        match best {
            Some((g, _)) => x[g] = !x[g],
            None => return x,
        }
    }
}

fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len() as f64;
    if xs.len() < 2 || xs.iter().all(|&x| x == xs[0]) || ys.iter().all(|&y| y == ys[0]) {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let cov: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let vx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let vy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    Some(cov / (vx.sqrt() * vy.sqrt()))
}

#[derive(Debug, Clone)]
pub struct Oracle {
    /// Optimum encoding reached from every configuration.
    pub optimum_of: Vec<usize>,
    /// Optima in ascending encoding order.
    pub optima: Vec<usize>,
    pub fitness: Vec<f64>,
    pub sizes: Vec<u64>,
    pub global: usize,
    /// Dense transition matrix including the diagonal.
    pub w: Vec<Vec<f64>>,
    pub clustering: Vec<f64>,
    pub clustering_loops: Vec<f64>,
    pub disparity: Vec<Option<f64>>,
    pub disparity_loops: Vec<Option<f64>>,
    pub mean_path: Option<f64>,
    pub mean_path_to_global: Option<f64>,
    pub mean_self_weight: f64,
    pub global_basin_fraction: f64,
    pub mean_interior_fraction: f64,
    pub fitness_size_correlation: Option<f64>,
    pub regression: Option<(f64, f64, f64)>,
    /// `(grid index, count, pdf)` for every bin between the extremes.
    pub histogram: Vec<(i32, usize, f64)>,
}

pub fn oracle(inst: &NkInstance, bins_per_decade: usize) -> Oracle {
    let n = inst.n;
    let space = 1usize << n;
    let optimum_of: Vec<usize> = (0..space)
        .map(|c| encode(&climb(inst, &decode(c, n))))
        .collect();
    let mut optima = optimum_of.clone();
    optima.sort_unstable();
    optima.dedup();
    let nv = optima.len();
    let node = |c: usize| optima.iter().position(|&o| o == optimum_of[c]).unwrap();
    let node_of: Vec<usize> = (0..space).map(node).collect();
    let fit: Vec<f64> = optima
        .iter()
        .map(|&o| fitness(inst, &decode(o, n)))
        .collect();
    let mut sizes = vec![0u64; nv];
    for &b in &node_of {
        sizes[b] += 1;
    }
    let mut global = 0;
    for i in 1..nv {
        if fit[i] > fit[global] {
            global = i;
        }
    }

    // Integer counts first so weights that land on a bin edge are exact.
    let mut count = vec![vec![0u64; nv]; nv];
    for c in 0..space {
        for g in 0..n {
            count[node_of[c]][node_of[c ^ (1 << g)]] += 1;
        }
    }
    let w: Vec<Vec<f64>> = (0..nv)
        .map(|i| {
            (0..nv)
                .map(|j| count[i][j] as f64 / (n as u64 * sizes[i]) as f64)
                .collect()
        })
        .collect();

    let a = |i: usize, j: usize| w[i][j] > 0.0;
    let clustering_by = |loops: bool| -> Vec<f64> {
        (0..nv)
            .map(|i| {
                let nbr = |j: usize| a(i, j) && (loops || j != i);
                let k = (0..nv).filter(|&j| nbr(j)).count();
                let s: f64 = (0..nv).filter(|&j| nbr(j)).map(|j| w[i][j]).sum();
                if k < 2 {
                    return 0.0;
                }
                let mut sum = 0.0;
                for j in 0..nv {
                    for h in 0..nv {
                        // Literal a_ij a_jh a_hi; with loops counted, j or h may be i.
                        if j != h && nbr(j) && nbr(h) && a(j, h) && a(h, i) {
                            sum += (w[i][j] + w[i][h]) / 2.0;
                        }
                    }
                }
                sum / (s * (k - 1) as f64)
            })
            .collect()
    };
    let disparity_by = |loops: bool| -> Vec<Option<f64>> {
        (0..nv)
            .map(|i| {
                let js: Vec<usize> = (0..nv).filter(|&j| loops || j != i).collect();
                let s: f64 = js.iter().map(|&j| w[i][j]).sum();
                (s > 0.0).then(|| js.iter().map(|&j| (w[i][j] / s).powi(2)).sum())
            })
            .collect()
    };

    // Floyd-Warshall over lengths 1/w.
    let (mean_path, mean_path_to_global) = if nv >= 2 {
        let mut d = vec![vec![f64::INFINITY; nv]; nv];
        for i in 0..nv {
            d[i][i] = 0.0;
            for j in 0..nv {
                if i != j && w[i][j] > 0.0 {
                    d[i][j] = 1.0 / w[i][j];
                }
            }
        }
        for m in 0..nv {
            for i in 0..nv {
                for j in 0..nv {
                    if d[i][m] + d[m][j] < d[i][j] {
                        d[i][j] = d[i][m] + d[m][j];
                    }
                }
            }
        }
        let mut pairs = Vec::new();
        for i in 0..nv {
            for j in 0..nv {
                if i != j {
                    pairs.push(d[i][j]);
                }
            }
        }
        let to_g: Vec<f64> = (0..nv)
            .filter(|&i| i != global)
            .map(|i| d[i][global])
            .collect();
        if pairs.iter().all(|x| x.is_finite()) {
            (
                Some(pairs.iter().sum::<f64>() / pairs.len() as f64),
                Some(to_g.iter().sum::<f64>() / to_g.len() as f64),
            )
        } else {
            (None, None)
        }
    } else {
        (None, None)
    };

    let mut interior = vec![0u64; nv];
    for c in 0..space {
        if (0..n).all(|g| node_of[c ^ (1 << g)] == node_of[c]) {
            interior[node_of[c]] += 1;
        }
    }
    let mean_interior_fraction = (0..nv)
        .map(|i| interior[i] as f64 / sizes[i] as f64)
        .sum::<f64>()
        / nv as f64;

    let log_sizes: Vec<f64> = sizes.iter().map(|&s| (s as f64).ln()).collect();
    let mut distinct = sizes.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let regression = (distinct.len() >= 3).then(|| {
        let xs: Vec<f64> = distinct.iter().map(|&s| s as f64).collect();
        let ys: Vec<f64> = distinct
            .iter()
            .map(|&s| (sizes.iter().filter(|&&t| t >= s).count() as f64).ln())
            .collect();
        let m = xs.len() as f64;
        let (sx, sy) = (xs.iter().sum::<f64>(), ys.iter().sum::<f64>());
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum();
        let sxx: f64 = xs.iter().map(|x| x * x).sum();
        let beta = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        let alpha = (sy - beta * sx) / m;
        (pearson(&xs, &ys).unwrap(), alpha, beta)
    });

    let mut off_diag = Vec::new();
    for i in 0..nv {
        for j in 0..nv {
            if i != j && w[i][j] > 0.0 {
                off_diag.push(w[i][j]);
            }
        }
    }
    let histogram = linear_scan_histogram(&off_diag, bins_per_decade);

    Oracle {
        clustering: clustering_by(false),
        clustering_loops: clustering_by(true),
        disparity: disparity_by(false),
        disparity_loops: disparity_by(true),
        mean_path,
        mean_path_to_global,
        mean_self_weight: (0..nv).map(|i| w[i][i]).sum::<f64>() / nv as f64,
        global_basin_fraction: sizes[global] as f64 / space as f64,
        mean_interior_fraction,
        fitness_size_correlation: pearson(&fit, &log_sizes),
        regression,
        histogram,
        optimum_of,
        fitness: fit,
        sizes,
        global,
        w,
        optima,
    }
}

fn edge(index: i32, bins_per_decade: usize) -> f64 {
    10f64.powf(index as f64 / bins_per_decade as f64)
}

/// Counts each value into the grid cell found by walking up from a floor
/// well below any transition probability.
pub fn linear_scan_histogram(values: &[f64], bins_per_decade: usize) -> Vec<(i32, usize, f64)> {
    if values.is_empty() {
        return Vec::new();
    }
    let floor = -(40 * bins_per_decade as i32);
    let idx: Vec<i32> = values
        .iter()
        .map(|&v| {
            let mut b = floor;
            while edge(b + 1, bins_per_decade) <= v {
                b += 1;
            }
            b
        })
        .collect();
    let lo = *idx.iter().min().unwrap();
    let hi = *idx.iter().max().unwrap();
    (lo..=hi)
        .map(|b| {
            let count = idx.iter().filter(|&&x| x == b).count();
            let width = edge(b + 1, bins_per_decade) - edge(b, bins_per_decade);
            (b, count, count as f64 / (values.len() as f64 * width))
        })
        .collect()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= ORACLE_TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

fn close_opt(a: Option<f64>, b: Option<f64>) -> bool {
    match (a, b) {
        (Some(a), Some(b)) => close(a, b),
        (None, None) => true,
        _ => false,
    }
}

/// Runs the library pipeline and the oracle on `inst` and lists every
/// disagreement. Scalars agree to `ORACLE_TOLERANCE`, relative above one.
pub fn mismatches(inst: &NkInstance, bins_per_decade: usize) -> Vec<String> {
    let o = oracle(inst, bins_per_decade);
    let got = match analyze(inst, bins_per_decade) {
        Ok(a) => a,
        Err(e) => return vec![format!("pipeline failed: {e}")],
    };
    let mut out = Vec::new();
    let mut check = |what: &str, ok: bool| {
        if !ok {
            out.push(what.to_string());
        }
    };

    let p = &got.partition;
    check(
        "optimum assignment",
        (0..o.optimum_of.len()).all(|c| p.optimum_of(c as u32) as usize == o.optimum_of[c]),
    );
    let optima: Vec<usize> = p.basins().iter().map(|b| b.optimum as usize).collect();
    check("optima", optima == o.optima);
    if optima != o.optima {
        return out;
    }
    check(
        "basin sizes",
        p.basins()
            .iter()
            .map(|b| b.size)
            .eq(o.sizes.iter().copied()),
    );
    check(
        "optimum fitness",
        p.basins()
            .iter()
            .zip(&o.fitness)
            .all(|(b, &f)| close(b.fitness, f)),
    );
    check("global optimum", p.global_index() == o.global);

    let lon = &got.lon;
    let nv = o.optima.len();
    let mut weights_ok = lon.num_nodes() == nv;
    for i in 0..nv {
        for j in 0..nv {
            weights_ok &= close(lon.weight(i, j), o.w[i][j]);
            weights_ok &= lon.has_edge(i, j) == (o.w[i][j] > 0.0);
        }
    }
    check("transition weights", weights_ok);
    let n_e = (0..nv)
        .flat_map(|i| (0..nv).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j && o.w[i][j] > 0.0)
        .count();

    let s = &got.stats;
    check("n_v", s.n_v == nv);
    check("n_e", s.n_e == n_e);
    check(
        "self_loops",
        s.self_loops == (0..nv).filter(|&i| o.w[i][i] > 0.0).count(),
    );
    let cw = nklon::metrics::weighted_clustering(lon);
    check(
        "clustering per node",
        cw.per_node
            .iter()
            .zip(&o.clustering)
            .all(|(&a, &b)| close(a, b)),
    );
    let cwl = nklon::metrics::weighted_clustering_with(lon, nklon::metrics::SelfLoops::Included);
    check(
        "loop clustering per node",
        cwl.per_node
            .iter()
            .zip(&o.clustering_loops)
            .all(|(&a, &b)| close(a, b)),
    );
    let dp = nklon::metrics::disparity(lon);
    check(
        "disparity per node",
        dp.per_node
            .iter()
            .zip(&o.disparity)
            .all(|(&a, &b)| close_opt(a, b)),
    );
    let dpl = nklon::metrics::disparity_with(lon, nklon::metrics::SelfLoops::Included);
    check(
        "loop disparity per node",
        dpl.per_node
            .iter()
            .zip(&o.disparity_loops)
            .all(|(&a, &b)| close_opt(a, b)),
    );
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let mean_opt = |v: &[Option<f64>]| {
        let xs: Vec<f64> = v.iter().flatten().copied().collect();
        (!xs.is_empty()).then(|| mean(&xs))
    };
    check("mean_cw", close(s.mean_cw, mean(&o.clustering)));
    check(
        "mean_cw_with_loops",
        close(s.mean_cw_with_loops, mean(&o.clustering_loops)),
    );
    check(
        "mean_disparity",
        close_opt(s.mean_disparity, mean_opt(&o.disparity)),
    );
    check(
        "mean_disparity_with_loops",
        close_opt(s.mean_disparity_with_loops, mean_opt(&o.disparity_loops)),
    );
    check(
        "mean_path_length",
        close_opt(s.mean_path_length, o.mean_path),
    );
    check(
        "mean_path_to_global",
        close_opt(s.mean_path_to_global, o.mean_path_to_global),
    );
    check(
        "mean_self_weight",
        close(s.mean_self_weight, o.mean_self_weight),
    );
    check(
        "global_basin_fraction",
        close(s.global_basin_fraction, o.global_basin_fraction),
    );
    check(
        "mean_interior_fraction",
        close(s.mean_interior_fraction, o.mean_interior_fraction),
    );
    check(
        "fitness_size_correlation",
        close_opt(s.fitness_size_correlation, o.fitness_size_correlation),
    );
    check(
        "size regression",
        match (s.size_regression, o.regression) {
            (Some(r), Some((rho, alpha, beta))) => {
                close(r.rho, rho) && close(r.alpha, alpha) && close(r.beta, beta)
            }
            (None, None) => true,
            _ => false,
        },
    );
    check(
        "weight histogram",
        s.weight_histogram.len() == o.histogram.len()
            && s.weight_histogram
                .iter()
                .zip(&o.histogram)
                .all(|(b, &(i, c, pdf))| b.index == i && b.count == c && close(b.pdf, pdf)),
    );
    out
}
