use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use log::info;
use uavcache::experiments::{
    average_by_theta, compare_svg, converge_svg, default_thetas, matched_budget, rank_correlation, run_compare,
    run_converge, run_stats, run_sweep, stats_svg, sweep_svg, write_csv, Algorithm,
};
use uavcache::{load_config, Error, SystemParams};

/// Theta used by single-weight commands when none is given.
const DEFAULT_THETA: f64 = 0.6;

#[derive(Parser)]
#[command(name = "uavcache", version, about = "Caching placement and UAV flight design experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Caching/retrieval trade-off across a theta grid.
    Sweep(Opts),
    /// Per-iteration costs of one greedy run (first theta, first seed).
    Converge(Opts),
    /// Average copies per file against popularity.
    Stats(Opts),
    /// Proposed design against the two benchmark schemes.
    Compare(Opts),
}

#[derive(Args)]
struct Opts {
    /// TOML parameter file; built-in defaults when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Comma-separated weights in [0, 1].
    #[arg(long, value_delimiter = ',')]
    thetas: Option<Vec<f64>>,
    /// Seed range `a..b`, `a..=b`, or a comma-separated list.
    #[arg(long, default_value = "1..=20")]
    seeds: String,
    #[arg(long, default_value = "alg2", value_parser = parse_algorithm)]
    algorithm: Algorithm,
    /// Output directory, created if missing.
    #[arg(long, default_value = "results")]
    out: PathBuf,
    /// Run alg1 at the configured size instead of the reduced desk size
    /// (25 nodes, 10 files, 2 slots).
    #[arg(long)]
    full_scale: bool,
}

fn parse_algorithm(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_seeds(arg: &str) -> anyhow::Result<Vec<u64>> {
    let arg = arg.trim();
    let seeds: Vec<u64> = if let Some((a, b)) = arg.split_once("..=") {
        (a.trim().parse()?..=b.trim().parse()?).collect()
    } else if let Some((a, b)) = arg.split_once("..") {
        (a.trim().parse()?..b.trim().parse()?).collect()
    } else {
        arg.split(',').map(|s| s.trim().parse()).collect::<Result<_, _>>()?
    };
    if seeds.is_empty() {
        bail!(Error::Config(format!("seed set {arg:?} is empty")));
    }
    Ok(seeds)
}

impl Opts {
    fn params(&self) -> anyhow::Result<SystemParams> {
        let mut params = match &self.config {
            Some(path) => load_config(path)?,
            None => SystemParams::default(),
        };
        if self.algorithm == Algorithm::Alg1 && !self.full_scale {
            info!("alg1 at desk size: 25 nodes, 10 files, 2 slots (use --full-scale to keep the config size)");
            params.num_gns = 25;
            params.num_files = 10;
            params.cache_capacity = 2;
        }
        params.validate()?;
        Ok(params)
    }

    fn thetas(&self) -> anyhow::Result<Vec<f64>> {
        let thetas = self.thetas.clone().unwrap_or_else(default_thetas);
        if let Some(t) = thetas.iter().find(|t| !(0.0..=1.0).contains(*t)) {
            bail!(Error::Config(format!("theta {t} is outside [0, 1]")));
        }
        Ok(thetas)
    }

    fn theta(&self) -> anyhow::Result<f64> {
        Ok(match &self.thetas {
            Some(_) => self.thetas()?[0],
            None => DEFAULT_THETA,
        })
    }

    fn output(&self, name: &str, ext: &str) -> anyhow::Result<PathBuf> {
        fs::create_dir_all(&self.out).with_context(|| format!("creating {}", self.out.display()))?;
        Ok(self.out.join(format!("{name}.{ext}")))
    }
}

fn write_svg(path: &Path, svg: String) -> anyhow::Result<()> {
    fs::write(path, svg).with_context(|| format!("writing {}", path.display()))
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Sweep(o) => {
            let params = o.params()?;
            let rows = run_sweep(&params, &o.thetas()?, &parse_seeds(&o.seeds)?, o.algorithm)?;
            write_csv(&rows, &o.output("sweep", "csv")?)?;
            write_svg(&o.output("sweep", "svg")?, sweep_svg(&rows))?;
            println!("theta,mean_caching_cost,mean_retrieval_cost");
            for (t, u, g) in average_by_theta(&rows) {
                println!("{t},{u:.4},{g:.4}");
            }
        }
        Command::Converge(o) => {
            let params = o.params()?;
            let seed = parse_seeds(&o.seeds)?[0];
            let trace = run_converge(&params, o.theta()?, seed, o.algorithm)?;
            write_csv(&trace, &o.output("converge", "csv")?)?;
            write_svg(&o.output("converge", "svg")?, converge_svg(&trace))?;
            if let Some(last) = trace.last() {
                println!(
                    "{} iterations, caching cost {:.4} s, retrieval cost {:.4} s",
                    last.iteration, last.caching_cost, last.retrieval_cost
                );
            }
        }
        Command::Stats(o) => {
            let params = o.params()?;
            let rows = run_stats(&params, o.theta()?, &parse_seeds(&o.seeds)?, o.algorithm)?;
            write_csv(&rows, &o.output("stats", "csv")?)?;
            write_svg(&o.output("stats", "svg")?, stats_svg(&rows))?;
            let copies: Vec<f64> = rows.iter().map(|r| r.mean_copies).collect();
            let pop: Vec<f64> = rows.iter().map(|r| r.popularity).collect();
            println!("rank correlation between copies and popularity: {:.4}", rank_correlation(&copies, &pop));
        }
        Command::Compare(o) => {
            let params = o.params()?;
            let seeds = parse_seeds(&o.seeds)?;
            let rows = run_compare(&params, &o.thetas()?, &seeds)?;
            write_csv(&rows, &o.output("compare", "csv")?)?;
            write_svg(&o.output("compare", "svg")?, compare_svg(&rows))?;
            let wins = seeds
                .iter()
                .filter_map(|&s| matched_budget(&rows, s))
                .filter(|(bench, prop)| prop.retrieval_cost <= bench.retrieval_cost)
                .count();
            println!("proposed retrieval cost no worse than benchmark 1 at matched budget: {wins}/{}", seeds.len());
        }
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::Config(_) | Error::Parse { .. } => 2,
                Error::Infeasible(_) => 3,
                _ => 1,
            };
        }
        if cause.is::<std::num::ParseIntError>() {
            return 2;
        }
    }
    1
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
