//! L1 polynomial regression followed by a threshold, evaluated against
//! the smoothed optimum `OPT_σ`.

mod data;
mod features;
mod regression;

pub use data::Dataset;
pub use features::{feature_count, FeatureMap, FeaturePolicy, MAX_FEATURES};
pub use regression::{
    best_threshold, default_degree, l1_poly_regression, l1_poly_regression_targets, learn_smoothed, Hypothesis, LearnReport,
    LearnerConfig, Polynomial, RegressionFit,
};
