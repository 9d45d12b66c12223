use rayon::prelude::*;
use serde::Serialize;

use super::criterion::SuccessCriterion;
use crate::error::{Error, Result};
use crate::model::{apply_method, loss_of, EmpiricalProblem, InferenceMethod, World};
use crate::rng::stream_key;

/// A Monte Carlo success-probability estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub estimate: f64,
    /// `sqrt(p̂(1 - p̂)/trials)`.
    pub stderr: f64,
    pub successes: u64,
    pub trials: u64,
}

impl McEstimate {
    pub fn from_counts(successes: u64, trials: u64) -> Self {
        let p = successes as f64 / trials as f64;
        Self {
            estimate: p,
            stderr: (p * (1.0 - p) / trials as f64).sqrt(),
            successes,
            trials,
        }
    }

    /// A zero standard error carries no information about the spread,
    /// as with a single trial or an estimate of exactly 0 or 1.
    pub fn degenerate(&self) -> bool {
        self.stderr == 0.0
    }
}

/// Estimates the success probability at stage `n` from `trials` sampled
/// branches. Trial `t` draws from the stream keyed by
/// `(seed, world key, n, t)`, so the estimate does not depend on how the
/// trials are scheduled.
pub fn mc_success_prob(
    problem: &EmpiricalProblem,
    method: &dyn InferenceMethod,
    w: &World,
    n: u64,
    crit: &SuccessCriterion,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    if trials == 0 {
        return Err(Error::InputDomain("Monte Carlo needs at least one trial".into()));
    }
    let measure = w
        .measure()
        .ok_or_else(|| Error::Precondition(format!("world {} carries no measure", w.id())))?;
    let wkey = w.key();
    let successes = (0..trials)
        .into_par_iter()
        .map_init(Vec::new, |buf, t| -> Result<u64> {
            measure.fill_sample(stream_key(&[seed, wkey, n, t]), n as usize, buf);
            let out = apply_method(method, buf)?;
            Ok(u64::from(crit.met(&loss_of(problem, &out, w)?)))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(McEstimate::from_counts(successes, trials))
}
