//! Constructors for the paradigm empirical problems.

mod classification;
mod coin;
mod raven;

pub use classification::{binary_classification, binary_classification_seeded, risk, Classifier, ClassificationTask, ExcessRiskLoss};
pub use coin::{coin_bias, coin_bias_seeded, default_theta_grid, fair_coin, fair_coin_seeded};
pub use raven::{easy_raven, easy_raven_literal, easy_raven_with, fine_grained_raven, fine_grained_raven_seeded, raven_truth};

pub const EASY_RAVEN: &str = "easy-raven";
pub const FINE_GRAINED_RAVEN: &str = "fine-grained-raven";
pub const FAIR_COIN: &str = "fair-coin";
pub const COIN_BIAS: &str = "coin-bias";
pub const BINARY_CLASSIFICATION: &str = "binary-classification";

/// Master seed used to realize the branches of stochastic worlds when the
/// caller does not supply one.
pub const DEFAULT_WORLD_SEED: u64 = 0x005E_ED0F_0A7A;

/// Upper bound on tokens scanned when resolving a branch's truth.
pub const TRUTH_SCAN_LIMIT: u64 = 1 << 28;
