//! Concrete inference methods: the raven rule, the fair-coin test, the
//! frequency estimator, and empirical risk minimization.

mod erm;
mod frequency;
mod raven;
mod test_fair;

use crate::error::Result;
use crate::model::{apply_method, Alphabet, DataSequence, InferenceMethod, MethodOutput, Observation};

pub use erm::{erm, Erm, ErmConfig};
pub use frequency::{frequency_estimator, FrequencyEstimator};
pub use raven::{raven_rule, RavenRule};
pub use test_fair::{fair_coin_test, on_threshold, FairCoinTest};

pub const RAVEN_RULE: &str = "raven-rule";
pub const FAIR_COIN_TEST: &str = "fair-coin-test";
pub const FREQUENCY_ESTIMATOR: &str = "frequency-estimator";
pub const ERM: &str = "erm";

/// A method that ignores its input.
#[derive(Debug, Clone)]
pub struct ConstantMethod {
    pub output: MethodOutput,
    pub alphabet: Alphabet,
}

impl ConstantMethod {
    pub fn new(output: MethodOutput, alphabet: Alphabet) -> Self {
        Self { output, alphabet }
    }
}

impl InferenceMethod for ConstantMethod {
    fn name(&self) -> &str {
        "constant"
    }

    fn alphabet(&self) -> Alphabet {
        self.alphabet.clone()
    }

    fn decide(&self, _seq: &[Observation]) -> MethodOutput {
        self.output.clone()
    }

    fn count_symmetric(&self) -> bool {
        true
    }

    fn decide_counts(&self, _n: u64, _ones: u64) -> Option<MethodOutput> {
        Some(self.output.clone())
    }
}

fn apply(method: &dyn InferenceMethod, seq: &DataSequence) -> Result<MethodOutput> {
    apply_method(method, seq)
}
