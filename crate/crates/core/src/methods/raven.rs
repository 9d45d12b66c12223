use crate::error::Result;
use crate::model::{Alphabet, DataSequence, Hypothesis, InferenceMethod, MethodOutput, Observation};

/// Answers `Yes` exactly when no `0` has been observed.
#[derive(Debug, Clone, Copy, Default)]
pub struct RavenRule;

impl InferenceMethod for RavenRule {
    fn name(&self) -> &str {
        super::RAVEN_RULE
    }

    fn alphabet(&self) -> Alphabet {
        Alphabet::Binary
    }

    fn decide(&self, seq: &[Observation]) -> MethodOutput {
        if seq.contains(&Observation::ZERO) {
            Hypothesis::NO.into()
        } else {
            Hypothesis::YES.into()
        }
    }

    fn count_symmetric(&self) -> bool {
        true
    }

    fn decide_counts(&self, n: u64, ones: u64) -> Option<MethodOutput> {
        Some(if ones == n { Hypothesis::YES } else { Hypothesis::NO }.into())
    }
}

pub fn raven_rule(seq: &DataSequence) -> Result<MethodOutput> {
    super::apply(&RavenRule, seq)
}
