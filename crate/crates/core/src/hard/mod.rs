//! Moment-matching hard instances.
//!
//! [`HardSampler`] draws a one-dimensional `X` whose first `k` moments are
//! Gaussian while `frac(X·√(Ck))` lies in a prescribed set `S` with
//! probability at least `1 − 2^{−k}`. [`LabeledHardDistribution`] attaches
//! labels `Y` with `E[Y | X = x] = g(x)` for a moment-matching witness `g`.

mod checks;
mod gap;
mod labeled;
mod sampler;
mod split;

pub use checks::{
    density_ratio_bound, frac_in_set, tv_to_conditioned_gaussian, DensityRatioReport,
    FractionalMass, KwiseTable, RatioBin,
};
pub use gap::{default_t_prime, threshold_gap_chunk, ThresholdGapReport};
pub use labeled::{
    build_labeled, default_thresholds, opt_sigma, LabelProfile, LabeledHardDistribution, OptSigma,
    WitnessForm,
};
pub use sampler::{Draw, HardSampler, HardSamplerConfig, IntervalSet, DEFAULT_C};
pub use split::{split_gaussian, GaussianMixtureSplit};
