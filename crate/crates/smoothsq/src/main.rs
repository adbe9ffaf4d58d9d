use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use smoothsq::config::{self, Config};
use smoothsq::{execute, CliError, Command};

#[derive(Debug, Parser)]
#[command(name = "smoothsq", version, about = "Experiments on smoothed agnostic learning of halfspaces")]
struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (0: one per core).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Gauss–Hermite nodes.
    #[arg(long, global = true)]
    grid_nodes: Option<usize>,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Best L1 and L2 polynomial error of smoothed thresholds by degree.
    ApproxSweep(SweepArgs),
    /// Moment, fractional-mass and density checks of the hard sampler.
    HardCheck(HardArgs),
    /// Nearby-threshold gap under Gaussian and hard inputs.
    Gap(GapArgs),
    /// L1 polynomial regression on planted data.
    Learn(LearnArgs),
    /// Planted vs. null answers of a STAT oracle.
    Distinguish(DistinguishArgs),
    /// All invariant suites at reduced size.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Comma-separated smoothing levels.
    #[arg(long, value_delimiter = ',')]
    sigma: Option<Vec<f64>>,
    #[arg(long)]
    mmax: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    t: Option<f64>,
    /// Also write the LP at this degree.
    #[arg(long)]
    dump_lp: Option<usize>,
}

#[derive(Debug, Args)]
struct HardArgs {
    #[arg(long)]
    k: Option<usize>,
    #[arg(long = "C", alias = "c")]
    c: Option<usize>,
    /// Target set as comma-separated endpoints, e.g. `0.5,1.0`.
    #[arg(long = "S", alias = "set")]
    set: Option<String>,
    #[arg(long)]
    draws: Option<u64>,
    #[arg(long)]
    bins: Option<usize>,
}

#[derive(Debug, Args)]
struct GapArgs {
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long = "C", alias = "c")]
    c: Option<usize>,
    #[arg(long = "S", alias = "set")]
    set: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    t: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t_prime: Option<f64>,
    #[arg(long)]
    draws: Option<u64>,
}

#[derive(Debug, Args)]
struct LearnArgs {
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    d: Option<usize>,
    /// witness, halfspace or coins.
    #[arg(long)]
    labels: Option<String>,
    #[arg(long)]
    witness_degree: Option<usize>,
    #[arg(long)]
    n_train: Option<usize>,
    #[arg(long)]
    n_test: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    seeds: Option<Vec<u64>>,
}

#[derive(Debug, Args)]
struct DistinguishArgs {
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    directions: Option<usize>,
    /// exact or sampled.
    #[arg(long)]
    oracle: Option<String>,
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    learner_degree: Option<usize>,
    #[arg(long)]
    n_train: Option<usize>,
}

#[derive(Debug, Args)]
struct SelftestArgs {
    #[arg(long)]
    draws: Option<u64>,
}

fn set<T: Copy>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

fn set_enum(cfg: Config, section: &str, key: &str, v: Option<String>) -> Result<Config, CliError> {
    match v {
        Some(v) => config::set_key(&cfg, &[section.to_string(), key.to_string()], toml::Value::String(v)),
        None => Ok(cfg),
    }
}

fn resolve(cli: Cli) -> Result<(Command, Config), CliError> {
    let cfg = match &cli.config {
        Some(path) => config::load(path)?,
        None => Config::default(),
    };
    let mut cfg = config::apply_env(cfg, std::env::vars())?;
    set(&mut cfg.seed, cli.seed);
    set(&mut cfg.threads, cli.threads);
    set(&mut cfg.grid_nodes, cli.grid_nodes);
    if let Some(out) = cli.out {
        cfg.out = out;
    }
    let cmd = match cli.command {
        Sub::ApproxSweep(a) => {
            let s = &mut cfg.approx_sweep;
            if let Some(v) = a.sigma {
                s.sigmas = v;
            }
            set(&mut s.m_max, a.mmax);
            set(&mut s.t, a.t);
            if a.dump_lp.is_some() {
                s.dump_lp = a.dump_lp;
            }
            Command::ApproxSweep
        }
        Sub::HardCheck(a) => {
            let h = &mut cfg.hard_check;
            set(&mut h.k, a.k);
            set(&mut h.c, a.c);
            set(&mut h.draws, a.draws);
            set(&mut h.bins, a.bins);
            if let Some(s) = a.set {
                h.set = config::parse_set(&s)?;
            }
            Command::HardCheck
        }
        Sub::Gap(a) => {
            let g = &mut cfg.gap;
            set(&mut g.sigma, a.sigma);
            set(&mut g.k, a.k);
            set(&mut g.c, a.c);
            set(&mut g.t, a.t);
            set(&mut g.draws, a.draws);
            if a.t_prime.is_some() {
                g.t_prime = a.t_prime;
            }
            if let Some(s) = a.set {
                g.set = config::parse_set(&s)?;
            }
            Command::Gap
        }
        Sub::Learn(a) => {
            let l = &mut cfg.learn;
            set(&mut l.sigma, a.sigma);
            set(&mut l.epsilon, a.epsilon);
            set(&mut l.d, a.d);
            set(&mut l.witness_degree, a.witness_degree);
            set(&mut l.n_train, a.n_train);
            set(&mut l.n_test, a.n_test);
            if let Some(s) = a.seeds {
                l.seeds = s;
            }
            cfg = set_enum(cfg, "learn", "labels", a.labels)?;
            Command::Learn
        }
        Sub::Distinguish(a) => {
            let d = &mut cfg.distinguish;
            set(&mut d.d, a.d);
            set(&mut d.m, a.m);
            set(&mut d.sigma, a.sigma);
            set(&mut d.tau, a.tau);
            set(&mut d.directions, a.directions);
            set(&mut d.budget, a.budget);
            set(&mut d.learner_degree, a.learner_degree);
            set(&mut d.n_train, a.n_train);
            cfg = set_enum(cfg, "distinguish", "oracle", a.oracle)?;
            Command::Distinguish
        }
        Sub::Selftest(a) => {
            set(&mut cfg.selftest.draws, a.draws);
            Command::Selftest
        }
    };
    Ok((cmd, cfg))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = resolve(cli).and_then(|(cmd, cfg)| {
        let (files, summary) = execute(cmd, &cfg)?;
        println!("{}: {summary}", cmd.name());
        println!("wrote {} file(s) and a manifest to {}", files.len(), cfg.out.display());
        Ok(())
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("smoothsq: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
