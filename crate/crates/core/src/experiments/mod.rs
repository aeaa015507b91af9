//! Batch runs over (theta, seed) grids with CSV and SVG artifacts.

use std::fs::File;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::caching::{
    globally_greedy_retrieval, greedy_estimated, greedy_joint, random_proportional_policy, weighted_cost,
    GreedyOutcome, TraceRow,
};
use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::planner::{FlightPlanner, GnTourPlanner, Instance, VbsPlanner};
use crate::scenario::{generate_scenario, SystemParams};
use crate::svg::{scatter_plot, Series};

/// Default weight grid: 0.05, 0.10, ..., 1.00.
pub fn default_thetas() -> Vec<f64> {
    (1..=20).map(|i| i as f64 / 20.0).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Re-plans the flight for every candidate.
    Alg1,
    /// Prices candidates with the overhearing estimate.
    Alg2,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Alg1 => "alg1",
            Algorithm::Alg2 => "alg2",
        }
    }

    pub fn run(self, instance: &Instance, theta: f64) -> Result<GreedyOutcome> {
        match self {
            Algorithm::Alg1 => greedy_joint(instance, theta, &VbsPlanner),
            Algorithm::Alg2 => greedy_estimated(instance, theta, &VbsPlanner),
        }
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alg1" => Ok(Algorithm::Alg1),
            "alg2" => Ok(Algorithm::Alg2),
            other => Err(Error::Config(format!("unknown algorithm {other:?}, expected alg1 or alg2"))),
        }
    }
}

/// Random scenario for one seed.
pub fn instance_for_seed(params: &SystemParams, seed: u64) -> Result<Instance> {
    let p = SystemParams { rng_seed: seed, ..params.clone() };
    Instance::new(generate_scenario(&p)?)
}

fn instances(params: &SystemParams, seeds: &[u64]) -> Result<Vec<(u64, Instance)>> {
    seeds.iter().map(|&s| Ok((s, instance_for_seed(params, s)?))).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub algorithm: Algorithm,
    pub theta: f64,
    pub seed: u64,
    pub caching_cost: f64,
    pub retrieval_cost: f64,
    pub weighted_cost: f64,
    pub iterations: usize,
    pub cached_pairs: usize,
    pub caching_gns: usize,
    pub uncached_files: usize,
    /// Not written to CSV so that files stay reproducible.
    #[serde(skip)]
    pub wall_seconds: f64,
}

fn sweep_row(algorithm: Algorithm, theta: f64, seed: u64, out: &GreedyOutcome, wall_seconds: f64) -> SweepRow {
    SweepRow {
        algorithm,
        theta,
        seed,
        caching_cost: out.report.caching_cost,
        retrieval_cost: out.report.retrieval_cost,
        weighted_cost: out.report.weighted,
        iterations: out.trace.len() - 1,
        cached_pairs: out.policy.len(),
        caching_gns: out.policy.caching_gns().len(),
        uncached_files: out.policy.uncached_files().len(),
        wall_seconds,
    }
}

/// One greedy run per (theta, seed); rows sorted by theta then seed.
pub fn run_sweep(params: &SystemParams, thetas: &[f64], seeds: &[u64], algorithm: Algorithm) -> Result<Vec<SweepRow>> {
    let insts = instances(params, seeds)?;
    let cells: Vec<(f64, usize)> = thetas.iter().flat_map(|&t| (0..insts.len()).map(move |i| (t, i))).collect();
    let mut rows = cells
        .par_iter()
        .map(|&(theta, i)| {
            let (seed, inst) = &insts[i];
            let start = Instant::now();
            let out = algorithm.run(inst, theta)?;
            Ok(sweep_row(algorithm, theta, *seed, &out, start.elapsed().as_secs_f64()))
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.theta.total_cmp(&b.theta).then(a.seed.cmp(&b.seed)));
    Ok(rows)
}

/// Seed-averaged (theta, caching cost, retrieval cost), ascending theta.
pub fn average_by_theta(rows: &[SweepRow]) -> Vec<(f64, f64, f64)> {
    let mut thetas: Vec<f64> = rows.iter().map(|r| r.theta).collect();
    thetas.sort_by(f64::total_cmp);
    thetas.dedup();
    thetas
        .into_iter()
        .map(|t| {
            let sel: Vec<&SweepRow> = rows.iter().filter(|r| r.theta == t).collect();
            let n = sel.len() as f64;
            (
                t,
                sel.iter().map(|r| r.caching_cost).sum::<f64>() / n,
                sel.iter().map(|r| r.retrieval_cost).sum::<f64>() / n,
            )
        })
        .collect()
}

pub fn sweep_svg(rows: &[SweepRow]) -> String {
    let points: Vec<Point> = rows.iter().map(|r| Point::new(r.caching_cost, r.retrieval_cost)).collect();
    let mean: Vec<Point> = average_by_theta(rows).iter().map(|&(_, u, g)| Point::new(u, g)).collect();
    let series = [
        Series { label: "runs", color: "#9ab", points, connect: false },
        Series { label: "seed average", color: "#c22", points: mean, connect: true },
    ];
    scatter_plot(&series, "caching cost (s)", "retrieval cost (s)")
}

/// Per-iteration trace of one run; the final row matches the sweep row for
/// the same theta and seed.
pub fn run_converge(params: &SystemParams, theta: f64, seed: u64, algorithm: Algorithm) -> Result<Vec<TraceRow>> {
    let inst = instance_for_seed(params, seed)?;
    Ok(algorithm.run(&inst, theta)?.trace)
}

pub fn converge_svg(trace: &[TraceRow]) -> String {
    // retrieval cost starts at the uncached sentinel; plot from the first pick
    let g: Vec<Point> =
        trace.iter().skip(1).map(|r| Point::new(r.iteration as f64, r.retrieval_cost.log10())).collect();
    let u: Vec<Point> =
        trace.iter().map(|r| Point::new(r.iteration as f64, r.caching_cost.max(1e-3).log10())).collect();
    let series = [
        Series { label: "log10 retrieval cost (s)", color: "#26a", points: g, connect: true },
        Series { label: "log10 caching cost (s)", color: "#c52", points: u, connect: true },
    ];
    scatter_plot(&series, "iteration", "log10 seconds")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsRow {
    pub file: usize,
    pub popularity: f64,
    pub mean_copies: f64,
}

/// Copies per file averaged over seeds, next to the mean popularity.
pub fn run_stats(params: &SystemParams, theta: f64, seeds: &[u64], algorithm: Algorithm) -> Result<Vec<StatsRow>> {
    let insts = instances(params, seeds)?;
    let counts = insts
        .par_iter()
        .map(|(_, inst)| Ok(algorithm.run(inst, theta)?.policy.repetition_stats()))
        .collect::<Result<Vec<_>>>()?;
    let popularity = insts.first().map(|(_, i)| i.scenario.popularity.mean()).unwrap_or_default();
    let n = counts.len().max(1) as f64;
    Ok(popularity
        .iter()
        .enumerate()
        .map(|(file, &p)| StatsRow {
            file,
            popularity: p,
            mean_copies: counts.iter().map(|c| c[file] as f64).sum::<f64>() / n,
        })
        .collect())
}

pub fn stats_svg(rows: &[StatsRow]) -> String {
    let max_copies = rows.iter().map(|r| r.mean_copies).fold(0.0, f64::max).max(1e-12);
    let max_pop = rows.iter().map(|r| r.popularity).fold(0.0, f64::max).max(1e-12);
    let copies: Vec<Point> = rows.iter().map(|r| Point::new(r.file as f64, r.mean_copies / max_copies)).collect();
    let pop: Vec<Point> = rows.iter().map(|r| Point::new(r.file as f64, r.popularity / max_pop)).collect();
    let series = [
        Series { label: "mean copies (normalized)", color: "#26a", points: copies, connect: true },
        Series { label: "popularity (normalized)", color: "#c52", points: pop, connect: true },
    ];
    scatter_plot(&series, "file index", "relative value")
}

/// Spearman rank correlation, average ranks for ties.
pub fn rank_correlation(a: &[f64], b: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&i, &j| v[i].total_cmp(&v[j]));
        let mut r = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            let avg = (i + j) as f64 / 2.0;
            for &k in &idx[i..=j] {
                r[k] = avg;
            }
            i = j + 1;
        }
        r
    }
    let (ra, rb) = (ranks(a), ranks(b));
    let n = a.len() as f64;
    let ma = ra.iter().sum::<f64>() / n;
    let mb = rb.iter().sum::<f64>() / n;
    let cov: f64 = ra.iter().zip(&rb).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = ra.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = rb.iter().map(|y| (y - mb).powi(2)).sum();
    if va == 0.0 || vb == 0.0 {
        0.0
    } else {
        cov / (va * vb).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Proposed,
    /// Random popularity-proportional caching with the full flight design.
    Benchmark1,
    /// Retrieval-only greedy caching with a tour over the caching nodes.
    Benchmark2,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub scheme: Scheme,
    pub seed: u64,
    /// Empty for the benchmarks.
    pub theta: Option<f64>,
    pub caching_cost: f64,
    pub retrieval_cost: f64,
    /// Files nobody caches; their requests are charged the sentinel cost.
    pub uncached_files: usize,
}

/// The proposed design across `thetas` plus both benchmarks, per seed.
pub fn run_compare(params: &SystemParams, thetas: &[f64], seeds: &[u64]) -> Result<Vec<CompareRow>> {
    let insts = instances(params, seeds)?;
    let per_seed = insts.par_iter().map(|(seed, inst)| compare_one(inst, *seed, thetas)).collect::<Result<Vec<_>>>()?;
    let mut rows: Vec<CompareRow> = per_seed.into_iter().flatten().collect();
    rows.sort_by(|a, b| {
        a.seed
            .cmp(&b.seed)
            .then(a.scheme.name().cmp(b.scheme.name()))
            .then(a.theta.unwrap_or(-1.0).total_cmp(&b.theta.unwrap_or(-1.0)))
    });
    Ok(rows)
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Proposed => "proposed",
            Scheme::Benchmark1 => "benchmark1",
            Scheme::Benchmark2 => "benchmark2",
        }
    }
}

fn compare_one(inst: &Instance, seed: u64, thetas: &[f64]) -> Result<Vec<CompareRow>> {
    let mut rows = Vec::with_capacity(thetas.len() + 2);
    for &theta in thetas {
        let out = greedy_estimated(inst, theta, &VbsPlanner)?;
        rows.push(CompareRow {
            scheme: Scheme::Proposed,
            seed,
            theta: Some(theta),
            caching_cost: out.report.caching_cost,
            retrieval_cost: out.report.retrieval_cost,
            uncached_files: 0,
        });
    }

    // separate stream from the one that placed the nodes
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let random = random_proportional_policy(&inst.scenario, &mut rng);
    rows.push(CompareRow {
        scheme: Scheme::Benchmark1,
        seed,
        theta: None,
        caching_cost: VbsPlanner.plan(inst, &random)?.caching_cost(),
        retrieval_cost: inst.retrieval_cost(&random),
        uncached_files: random.uncached_files().len(),
    });

    let greedy = globally_greedy_retrieval(inst)?;
    rows.push(CompareRow {
        scheme: Scheme::Benchmark2,
        seed,
        theta: None,
        caching_cost: GnTourPlanner.plan(inst, &greedy)?.caching_cost(),
        retrieval_cost: inst.retrieval_cost(&greedy),
        uncached_files: 0,
    });
    Ok(rows)
}

/// For one seed: benchmark 1 next to the proposed point whose caching cost
/// is nearest to it. Returns `(benchmark, matched proposed)`.
pub fn matched_budget(rows: &[CompareRow], seed: u64) -> Option<(&CompareRow, &CompareRow)> {
    let bench = rows.iter().find(|r| r.seed == seed && r.scheme == Scheme::Benchmark1)?;
    let mut best: Option<&CompareRow> = None;
    for r in rows.iter().filter(|r| r.seed == seed && r.scheme == Scheme::Proposed) {
        let d = (r.caching_cost - bench.caching_cost).abs();
        if best.is_none_or(|b| d < (b.caching_cost - bench.caching_cost).abs()) {
            best = Some(r);
        }
    }
    Some((bench, best?))
}

pub fn compare_svg(rows: &[CompareRow]) -> String {
    let pick = |s: Scheme| -> Vec<Point> {
        rows.iter().filter(|r| r.scheme == s).map(|r| Point::new(r.caching_cost, r.retrieval_cost.log10())).collect()
    };
    let (p, b1, b2) = (pick(Scheme::Proposed), pick(Scheme::Benchmark1), pick(Scheme::Benchmark2));
    let series = [
        Series { label: "proposed", color: "#26a", points: p, connect: false },
        Series { label: "benchmark 1 (random proportional)", color: "#c52", points: b1, connect: false },
        Series { label: "benchmark 2 (retrieval greedy + node tour)", color: "#2a4", points: b2, connect: false },
    ];
    scatter_plot(&series, "caching cost (s)", "log10 retrieval cost (s)")
}

/// Checks that every row's weighted cost is recomputed exactly from its own
/// columns.
pub fn weighted_consistent(rows: &[SweepRow]) -> bool {
    rows.iter().all(|r| r.weighted_cost == weighted_cost(r.caching_cost, r.retrieval_cost, r.theta))
}

/// Writes serializable rows as CSV with a header line.
pub fn write_csv<T: Serialize>(rows: &[T], path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_writer(File::create(path)?);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}
