use std::any::Any;

use super::hypothesis::MethodOutput;
use super::observation::{Alphabet, DataSequence, Observation};
use super::world::World;
use crate::error::Result;

/// A deterministic map from finite data sequences to a hypothesis or
/// suspension.
pub trait InferenceMethod: Any + Send + Sync {
    fn name(&self) -> &str;

    /// Token set the method is defined on.
    fn alphabet(&self) -> Alphabet;

    /// Output on a sequence already checked against [`Self::alphabet`].
    fn decide(&self, seq: &[Observation]) -> MethodOutput;

    /// For binary alphabets: whether the output depends only on the
    /// length and the number of `1` tokens.
    fn count_symmetric(&self) -> bool {
        false
    }

    /// Output from `(n, ones)` alone; `Some` exactly when count-symmetric.
    fn decide_counts(&self, _n: u64, _ones: u64) -> Option<MethodOutput> {
        None
    }
}

/// Applies `method` to `seq` after checking its tokens.
pub fn apply_method(method: &dyn InferenceMethod, seq: &[Observation]) -> Result<MethodOutput> {
    method.alphabet().check(seq)?;
    Ok(method.decide(seq))
}

/// The output of `method` on the first `n` observations of `w`.
pub fn output_at(method: &dyn InferenceMethod, w: &World, n: usize) -> Result<MethodOutput> {
    let prefix: DataSequence = w.branch().prefix(n);
    apply_method(method, &prefix)
}

/// Outputs at every stage `0..=horizon` along `w`'s branch.
pub fn outputs_along(method: &dyn InferenceMethod, w: &World, horizon: usize) -> Result<Vec<MethodOutput>> {
    let prefix = w.branch().prefix(horizon);
    method.alphabet().check(&prefix)?;
    Ok((0..=horizon).map(|n| method.decide(&prefix[..n])).collect())
}
