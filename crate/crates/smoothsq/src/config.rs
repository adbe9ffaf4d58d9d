//! Experiment configuration: TOML file, `SMOOTHSQ_*` environment
//! overrides, then command-line flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Prefix of environment overrides. `SMOOTHSQ_SEED=3` sets `seed`,
/// `SMOOTHSQ_HARD_CHECK__K=6` sets `hard_check.k`.
pub const ENV_PREFIX: &str = "SMOOTHSQ_";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub seed: u64,
    pub out: PathBuf,
    /// Worker threads; 0 lets the pool decide.
    pub threads: usize,
    /// Gauss–Hermite nodes for approximation problems.
    pub grid_nodes: usize,
    pub approx_sweep: ApproxSweepConfig,
    pub hard_check: HardCheckConfig,
    pub gap: GapConfig,
    pub learn: LearnConfig,
    pub distinguish: DistinguishConfig,
    pub selftest: SelftestConfig,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            seed: 1,
            out: PathBuf::from("smoothsq-out"),
            threads: 0,
            grid_nodes: 200,
            approx_sweep: ApproxSweepConfig::default(),
            hard_check: HardCheckConfig::default(),
            gap: GapConfig::default(),
            learn: LearnConfig::default(),
            distinguish: DistinguishConfig::default(),
            selftest: SelftestConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ApproxSweepConfig {
    pub sigmas: Vec<f64>,
    pub m_max: usize,
    /// Threshold location of the smoothed step `T_σ sign(x − t)`.
    pub t: f64,
    /// Write the approximation LP at this degree as text.
    pub dump_lp: Option<usize>,
}

impl Default for ApproxSweepConfig {
    fn default() -> Self {
        Self { sigmas: vec![0.5, 1.0], m_max: 20, t: 0.0, dump_lp: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct HardCheckConfig {
    pub k: usize,
    pub c: usize,
    /// Target set for the fractional part, as `[lo, hi]` pairs in `[0, 1]`.
    pub set: Vec<[f64; 2]>,
    pub draws: u64,
    pub hist_lo: f64,
    pub hist_hi: f64,
    pub bins: usize,
    /// Bins with fewer expected draws are left out of the ratio check.
    pub min_bin_count: u64,
    pub kwise_cells: usize,
}

impl Default for HardCheckConfig {
    fn default() -> Self {
        Self {
            k: 4,
            c: 20,
            set: vec![[0.5, 1.0]],
            draws: 1_000_000,
            hist_lo: -3.5,
            hist_hi: 3.5,
            bins: 140,
            min_bin_count: 100,
            kwise_cells: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GapConfig {
    pub sigma: f64,
    pub k: usize,
    pub c: usize,
    pub set: Vec<[f64; 2]>,
    pub t: f64,
    /// Defaults to `t + 1/(2√(Ck))`.
    pub t_prime: Option<f64>,
    pub draws: u64,
}

impl Default for GapConfig {
    fn default() -> Self {
        Self { sigma: 0.01, k: 9, c: 20, set: vec![[0.5, 1.0]], t: 0.0, t_prime: None, draws: 10_000_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelKind {
    /// Labels from the moment-matching witness of `T_σ sign`.
    Witness,
    /// `sign(v·x)`.
    Halfspace,
    /// Independent fair coins.
    Coins,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyKind {
    /// Hermite products over all coordinates.
    Full,
    /// Hermite polynomials of the planted direction.
    Known,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LearnRun {
    /// Omitted: `⌈4·ln(2/ε)/σ²⌉`.
    #[serde(default)]
    pub degree: Option<usize>,
    pub policy: PolicyKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LearnConfig {
    pub sigma: f64,
    pub epsilon: f64,
    pub d: usize,
    pub labels: LabelKind,
    pub witness_degree: usize,
    pub runs: Vec<LearnRun>,
    pub n_train: usize,
    pub n_test: usize,
    pub seeds: Vec<u64>,
}

impl Default for LearnConfig {
    fn default() -> Self {
        Self {
            sigma: 0.5,
            epsilon: 0.1,
            d: 4,
            labels: LabelKind::Witness,
            witness_degree: 8,
            runs: vec![
                LearnRun { degree: Some(4), policy: PolicyKind::Full },
                LearnRun { degree: Some(16), policy: PolicyKind::Known },
            ],
            n_train: 100_000,
            n_test: 100_000,
            seeds: vec![0, 1, 2],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleKind {
    Exact,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DistinguishConfig {
    pub d: usize,
    /// Witness degree and battery degree.
    pub m: usize,
    pub sigma: f64,
    pub tau: f64,
    /// Random directions in the low-degree battery.
    pub directions: usize,
    pub oracle: OracleKind,
    pub failure_prob: f64,
    pub budget: usize,
    /// Degree of the learner whose hypothesis is asked as one extra query.
    pub learner_degree: usize,
    pub n_train: usize,
}

impl Default for DistinguishConfig {
    fn default() -> Self {
        Self {
            d: 16,
            m: 4,
            sigma: 0.5,
            tau: 1e-3,
            directions: 8,
            oracle: OracleKind::Exact,
            failure_prob: 1e-6,
            budget: 10_000,
            learner_degree: 12,
            n_train: 20_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SelftestConfig {
    /// Draws for the Monte Carlo checks.
    pub draws: u64,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        Self { draws: 200_000 }
    }
}

/// Line and column (both 1-based) of a byte offset.
fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

fn parse_error(origin: &str, text: &str, e: toml::de::Error) -> CliError {
    let msg = e.message().trim().to_string();
    match e.span() {
        Some(span) => {
            let (line, col) = line_col(text, span.start);
            CliError::Config(format!("{origin}: line {line}, column {col}: {msg}"))
        }
        None => CliError::Config(format!("{origin}: {msg}")),
    }
}

/// Parses and validates TOML text.
pub fn parse(text: &str, origin: &str) -> Result<Config, CliError> {
    let cfg: Config = toml::from_str(text).map_err(|e| parse_error(origin, text, e))?;
    Ok(cfg)
}

pub fn load(path: &Path) -> Result<Config, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    parse(&text, &path.display().to_string())
}

/// Parses an override value as a TOML literal, or as a bare string.
fn literal(raw: &str) -> toml::Value {
    let wrapped = format!("v = {raw}");
    match toml::from_str::<toml::Table>(&wrapped) {
        Ok(mut t) => t.remove("v").unwrap_or_else(|| toml::Value::String(raw.to_string())),
        Err(_) => toml::Value::String(raw.to_string()),
    }
}

/// Sets `path` (dotted keys) to `value` in a config.
pub fn set_key(cfg: &Config, path: &[String], value: toml::Value) -> Result<Config, CliError> {
    let mut root = toml::Value::try_from(cfg).map_err(|e| CliError::Config(e.to_string()))?;
    let mut node = &mut root;
    for (i, key) in path.iter().enumerate() {
        let table = node
            .as_table_mut()
            .ok_or_else(|| CliError::Config(format!("`{}` is not a table", path[..i].join("."))))?;
        if i + 1 == path.len() {
            table.insert(key.clone(), value);
            break;
        }
        node = table.entry(key.clone()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
    }
    let name = path.join(".");
    root.try_into().map_err(|e: toml::de::Error| CliError::Config(format!("override `{name}`: {}", e.message().trim())))
}

/// Applies `SMOOTHSQ_*` variables from `vars`; `__` separates a section
/// from its key.
pub fn apply_env<I>(mut cfg: Config, vars: I) -> Result<Config, CliError>
where
    I: IntoIterator<Item = (String, String)>,
{
    let mut overrides: Vec<(String, String)> =
        vars.into_iter().filter(|(k, _)| k.starts_with(ENV_PREFIX)).collect();
    overrides.sort();
    for (key, raw) in overrides {
        let path: Vec<String> = key[ENV_PREFIX.len()..].split("__").map(|s| s.to_ascii_lowercase()).collect();
        if path.iter().any(String::is_empty) {
            return Err(CliError::Config(format!("malformed override variable {key}")));
        }
        cfg = set_key(&cfg, &path, literal(&raw)).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{key}: {msg}")),
            other => other,
        })?;
    }
    Ok(cfg)
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Config(msg()))
    }
}

impl Config {
    /// Range checks that serde cannot express.
    pub fn validate(&self) -> Result<(), CliError> {
        check(self.grid_nodes >= 2, || "grid_nodes must be at least 2".into())?;
        let a = &self.approx_sweep;
        check(a.sigmas.iter().all(|s| *s > 0.0 && s.is_finite()), || "approx_sweep.sigmas must be positive".into())?;
        check(2 * a.m_max + 2 <= 2 * self.grid_nodes - 1, || {
            format!("approx_sweep.m_max = {} needs more than {} grid nodes", a.m_max, self.grid_nodes)
        })?;
        let h = &self.hard_check;
        check(h.k >= 1 && h.c >= 1 && h.draws > 0 && h.bins > 0 && h.hist_hi > h.hist_lo, || {
            "hard_check needs k, c, draws, bins >= 1 and hist_hi > hist_lo".into()
        })?;
        check(self.gap.sigma >= 0.0 && self.gap.draws > 0, || "gap needs sigma >= 0 and draws > 0".into())?;
        let l = &self.learn;
        check(l.sigma > 0.0 && l.epsilon > 0.0 && l.epsilon < 1.0 && l.d >= 1, || {
            "learn needs sigma > 0, epsilon in (0, 1) and d >= 1".into()
        })?;
        check(l.n_train > 0 && l.n_test > 0 && !l.seeds.is_empty(), || {
            "learn needs n_train, n_test > 0 and at least one seed".into()
        })?;
        let d = &self.distinguish;
        check(d.d >= 1 && d.tau > 0.0 && d.tau < 1.0 && d.failure_prob > 0.0 && d.failure_prob < 1.0, || {
            "distinguish needs d >= 1, tau and failure_prob in (0, 1)".into()
        })?;
        check(self.selftest.draws >= 1, || "selftest.draws must be positive".into())?;
        Ok(())
    }
}

/// `"0.5,1.0,0.1,0.2"` as `[[0.5, 1.0], [0.1, 0.2]]`.
pub fn parse_set(text: &str) -> Result<Vec<[f64; 2]>, CliError> {
    let values = parse_list(text)?;
    if values.len() % 2 != 0 || values.is_empty() {
        return Err(CliError::Config(format!("set `{text}` needs an even number of endpoints")));
    }
    Ok(values.chunks(2).map(|c| [c[0], c[1]]).collect())
}

pub fn parse_list(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| CliError::Config(format!("`{s}` in `{text}`: {e}"))))
        .collect()
}
