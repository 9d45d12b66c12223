use crate::error::Result;
use crate::model::{count_ones, Alphabet, DataSequence, Hypothesis, InferenceMethod, MethodOutput, Observation};
use crate::rational::ratio;

/// Outputs the observed frequency of `1`s as an exact rational; suspends
/// on no data.
#[derive(Debug, Clone, Copy, Default)]
pub struct FrequencyEstimator;

impl InferenceMethod for FrequencyEstimator {
    fn name(&self) -> &str {
        super::FREQUENCY_ESTIMATOR
    }

    fn alphabet(&self) -> Alphabet {
        Alphabet::Binary
    }

    fn decide(&self, seq: &[Observation]) -> MethodOutput {
        self.decide_counts(seq.len() as u64, count_ones(seq) as u64).unwrap()
    }

    fn count_symmetric(&self) -> bool {
        true
    }

    fn decide_counts(&self, n: u64, ones: u64) -> Option<MethodOutput> {
        Some(if n == 0 {
            MethodOutput::Suspend
        } else {
            Hypothesis::Real(ratio(ones as i64, n as i64)).into()
        })
    }
}

pub fn frequency_estimator(seq: &DataSequence) -> Result<MethodOutput> {
    super::apply(&FrequencyEstimator, seq)
}
