//! One module per subcommand. Each `run` writes its artifacts into a
//! [`RunOutput`] and returns a typed report.

pub mod approx_sweep;
pub mod distinguish;
pub mod gap;
pub mod hard_check;
pub mod learn;
pub mod selftest;

use smoothsq_core::approx::l1_best_approx;
use smoothsq_core::gaussian::{QuadratureGrid, SmoothedThreshold};
use smoothsq_core::hard::{
    build_labeled, default_thresholds, opt_sigma, IntervalSet, LabeledHardDistribution, OptSigma, WitnessForm,
};

use crate::artifacts::{FileEntry, RunOutput};
use crate::config::Config;
use crate::error::{CliError, Context};
use crate::parallel::with_threads;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    ApproxSweep,
    HardCheck,
    Gap,
    Learn,
    Distinguish,
    Selftest,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::ApproxSweep => "approx-sweep",
            Command::HardCheck => "hard-check",
            Command::Gap => "gap",
            Command::Learn => "learn",
            Command::Distinguish => "distinguish",
            Command::Selftest => "selftest",
        }
    }
}

/// Validates `cfg`, runs `cmd` in `cfg.out` and writes the manifest.
/// Returns the files written and a one-line summary.
pub fn execute(cmd: Command, cfg: &Config) -> Result<(Vec<FileEntry>, String), CliError> {
    cfg.validate()?;
    let mut out = RunOutput::create(&cfg.out)?;
    let (summary, failed) = with_threads(cfg.threads, || -> Result<(String, usize), CliError> {
        let out = &mut out;
        Ok(match cmd {
            Command::ApproxSweep => (approx_sweep::run(cfg, out)?.summary(), 0),
            Command::HardCheck => (hard_check::run(cfg, out)?.summary(), 0),
            Command::Gap => (gap::run(cfg, out)?.summary(), 0),
            Command::Learn => (learn::run(cfg, out)?.summary(), 0),
            Command::Distinguish => (distinguish::run(cfg, out)?.summary(), 0),
            Command::Selftest => {
                let report = selftest::run(cfg, out)?;
                (report.summary(), report.failures())
            }
        })
    })?;
    let files = out.finish(cmd.name(), cfg)?;
    if failed > 0 {
        return Err(CliError::Acceptance(failed));
    }
    Ok((files, summary))
}

pub(crate) fn grid(nodes: usize) -> Result<QuadratureGrid, CliError> {
    QuadratureGrid::gauss_hermite(nodes).within("gaussian-analysis")
}

pub(crate) fn interval_set(set: &[[f64; 2]]) -> Result<IntervalSet, CliError> {
    IntervalSet::new(set.iter().map(|[a, b]| (*a, *b)).collect()).map_err(|e| CliError::Config(e.to_string()))
}

/// Labeled distribution whose labels follow the moment-matching witness of
/// `T_σ sign` at degree `m`.
#[derive(Debug, Clone)]
pub(crate) struct Witness {
    pub dist: LabeledHardDistribution,
    /// `E[g·T_σ sign]`, the continuous L1 error of the best degree-`m` fit.
    pub l1: f64,
    pub opt: OptSigma,
}

pub(crate) fn witness(sigma: f64, m: usize, grid: &QuadratureGrid) -> Result<Witness, CliError> {
    let f = SmoothedThreshold::new(0.0, sigma).within("poly-approx")?;
    let res = l1_best_approx(&f, m, grid).within("poly-approx")?;
    let dist = build_labeled(&res, &f, sigma, WitnessForm::Refined).within("hard-instance")?;
    let l1 = dist.correlation(|x| f.eval(x), &[]);
    let opt = opt_sigma(&dist, &default_thresholds());
    Ok(Witness { dist, l1, opt })
}
