//! Lock times and success sets.
//!
//! A branch is in `Success(M, n)` when by stage n the method has output
//! the truth and keeps doing so. Deciding "keeps doing so" needs the whole
//! future, so in general the check is relative to a horizon T. For the
//! raven rule it is exact: the rule locks on at the first 0, or at stage 0
//! on the all-1 branch.

use std::any::Any;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::criterion::SuccessCriterion;
use super::mc::McEstimate;
use crate::error::{Error, Result};
use crate::methods::RavenRule;
use crate::model::{loss_of, outputs_along, Alphabet, EmpiricalProblem, InferenceMethod, Measure, Observation, Search, World};
use crate::problems::TRUTH_SCAN_LIMIT;
use crate::rational::{self, Rational};
use crate::rng::stream_key;

/// Smallest `n <= T` from which the output has zero loss at every stage
/// through `T`.
pub fn horizon_lock_time(problem: &EmpiricalProblem, method: &dyn InferenceMethod, w: &World, horizon: u64) -> Result<Option<u64>> {
    let outputs = outputs_along(method, w, horizon as usize)?;
    let mut lock = None;
    for (n, out) in outputs.iter().enumerate().rev() {
        if SuccessCriterion::Exact.met(&loss_of(problem, out, w)?) {
            lock = Some(n as u64);
        } else {
            break;
        }
    }
    Ok(lock)
}

fn is_raven_rule(method: &dyn InferenceMethod) -> bool {
    let any: &dyn Any = method;
    any.is::<RavenRule>()
}

/// Lock time of `method` in `w`. The raven rule on binary data gets an
/// exact answer independent of `T`; other methods are judged through `T`.
pub fn lock_time(problem: &EmpiricalProblem, method: &dyn InferenceMethod, w: &World, horizon: u64) -> Result<Option<u64>> {
    if horizon < 1 {
        return Err(Error::InputDomain("horizon must be at least 1".into()));
    }
    if is_raven_rule(method) && *problem.alphabet() == Alphabet::Binary {
        let lock = match w.branch().find(|o| *o == Observation::ZERO, TRUTH_SCAN_LIMIT) {
            Search::Found(k) => k,
            Search::Never => 0,
            Search::Unknown => return horizon_lock_time(problem, method, w, horizon),
        };
        // The rule locks only onto a truth that agrees with the branch.
        let out = crate::model::output_at(method, w, lock as usize)?;
        if SuccessCriterion::Exact.met(&loss_of(problem, &out, w)?) {
            return Ok(Some(lock));
        }
        return Ok(None);
    }
    horizon_lock_time(problem, method, w, horizon)
}

/// `P(Success(M, n))` under the measure of `w`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuccessSetEstimate {
    pub n: u64,
    pub estimate: f64,
    pub stderr: f64,
    #[serde(skip)]
    pub exact: Option<Rational>,
    pub trials: u64,
}

fn check_measure<'a>(problem: &EmpiricalProblem, w: &'a World) -> Result<&'a Measure> {
    let m = w
        .measure()
        .ok_or_else(|| Error::Precondition(format!("world {} carries no measure", w.id())))?;
    if !m.countably_additive() {
        return Err(Error::Precondition(format!("measure of world {} is not countably additive", w.id())));
    }
    if problem.truth_of_branch(w.branch()).is_none() {
        return Err(Error::Precondition(format!(
            "problem {} does not map each branch to one truth",
            problem.name()
        )));
    }
    Ok(m)
}

fn exact_success_set(method: &dyn InferenceMethod, measure: &Measure, problem: &EmpiricalProblem, w: &World, n: u64, horizon: u64) -> Result<Option<Rational>> {
    match measure {
        Measure::Bernoulli(b) if is_raven_rule(method) => {
            let p = b.theta();
            Ok(Some(if p.is_one() {
                Rational::one()
            } else {
                Rational::one() - num_traits::pow(p.clone(), n as usize)
            }))
        }
        Measure::PointMass(branch) => {
            let world = problem.world_for_branch(w.id(), branch.clone(), Some(measure.clone()))?;
            let lock = lock_time(problem, method, &world, horizon.max(n).max(1))?;
            Ok(Some(if lock.is_some_and(|l| l <= n) { Rational::one() } else { Rational::zero() }))
        }
        _ => Ok(None),
    }
}

/// Closed form where one is known, sampling otherwise.
pub fn success_set_prob(
    problem: &EmpiricalProblem,
    method: &dyn InferenceMethod,
    w: &World,
    n: u64,
    horizon: u64,
    trials: u64,
    seed: u64,
) -> Result<SuccessSetEstimate> {
    let measure = check_measure(problem, w)?;
    if let Some(exact) = exact_success_set(method, measure, problem, w, n, horizon)? {
        return Ok(SuccessSetEstimate {
            n,
            estimate: rational::to_f64(&exact),
            stderr: 0.0,
            exact: Some(exact),
            trials: 0,
        });
    }
    Ok(success_set_prob_mc(problem, method, w, &[n], horizon, trials, seed)?.remove(0))
}

/// Lock times of `trials` branches sampled from `w`'s measure. Trial `t`
/// uses the stream `(seed, world key, t)` for every n, so the samples are
/// shared across stages. The truth of each sample is fixed by its whole
/// branch, not by the prefix seen up to `T`.
pub fn sample_lock_times(
    problem: &EmpiricalProblem,
    method: &dyn InferenceMethod,
    w: &World,
    horizon: u64,
    trials: u64,
    seed: u64,
) -> Result<Vec<Option<u64>>> {
    let measure = check_measure(problem, w)?;
    if trials == 0 {
        return Err(Error::InputDomain("Monte Carlo needs at least one trial".into()));
    }
    let wkey = w.key();
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let branch = measure.sampler(stream_key(&[seed, wkey, t]));
            let world = problem.world_for_branch(w.id(), branch, Some(measure.clone()))?;
            horizon_lock_time(problem, method, &world, horizon)
        })
        .collect()
}

/// Sampled `P(Success(M, n))` for each of `ns`, all on one shared sample.
pub fn success_set_prob_mc(
    problem: &EmpiricalProblem,
    method: &dyn InferenceMethod,
    w: &World,
    ns: &[u64],
    horizon: u64,
    trials: u64,
    seed: u64,
) -> Result<Vec<SuccessSetEstimate>> {
    if let Some(&n) = ns.iter().find(|&&n| n > horizon) {
        return Err(Error::InputDomain(format!("stage {n} lies beyond the horizon {horizon}")));
    }
    let locks = sample_lock_times(problem, method, w, horizon, trials, seed)?;
    Ok(ns
        .iter()
        .map(|&n| {
            let hits = locks.iter().filter(|l| l.is_some_and(|l| l <= n)).count() as u64;
            let est = McEstimate::from_counts(hits, trials);
            SuccessSetEstimate {
                n,
                estimate: est.estimate,
                stderr: est.stderr,
                exact: None,
                trials,
            }
        })
        .collect())
}

/// `P(Success(M, n))` for `n = 0..=T`.
pub fn success_set_curve(
    problem: &EmpiricalProblem,
    method: &dyn InferenceMethod,
    w: &World,
    horizon: u64,
    trials: u64,
    seed: u64,
) -> Result<Vec<SuccessSetEstimate>> {
    let measure = check_measure(problem, w)?;
    if exact_success_set(method, measure, problem, w, 0, horizon)?.is_some() {
        return (0..=horizon)
            .map(|n| success_set_prob(problem, method, w, n, horizon, trials, seed))
            .collect();
    }
    let ns: Vec<u64> = (0..=horizon).collect();
    success_set_prob_mc(problem, method, w, &ns, horizon, trials, seed)
}

/// Whether every sampled branch in `Success(M, n)` is also in
/// `Success(M, n')`, checked branch by branch on shared samples.
#[allow(clippy::too_many_arguments)]
pub fn success_set_monotone(
    problem: &EmpiricalProblem,
    method: &dyn InferenceMethod,
    w: &World,
    n: u64,
    n_prime: u64,
    horizon: u64,
    trials: u64,
    seed: u64,
) -> Result<bool> {
    if !(n <= n_prime && n_prime <= horizon) {
        return Err(Error::InputDomain(format!("need n <= n' <= T, got {n}, {n_prime}, {horizon}")));
    }
    let locks = sample_lock_times(problem, method, w, horizon, trials, seed)?;
    Ok(locks
        .iter()
        .all(|l| !l.is_some_and(|l| l <= n) || l.is_some_and(|l| l <= n_prime)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::methods::{FairCoinTest, RavenRule};
    use crate::model::{Branch, Hypothesis};
    use crate::problems::{easy_raven, fair_coin, fine_grained_raven};
    use crate::rational::ratio;

    #[test]
    fn raven_lock_examples() {
        let problem = easy_raven();
        let ones = problem.world("ones").unwrap();
        assert_eq!(lock_time(&problem, &RavenRule, ones, 50).unwrap(), Some(0));
        let five = problem.world("first-0-at-5").unwrap();
        assert_eq!(lock_time(&problem, &RavenRule, five, 50).unwrap(), Some(5));
        assert_eq!(horizon_lock_time(&problem, &RavenRule, five, 50).unwrap(), Some(5));
    }

    #[test]
    fn fair_test_never_locks_on_all_ones() {
        let problem = fair_coin(&[0.5, 0.9]).unwrap();
        let w = problem.world("ones/theta=0.5").unwrap();
        assert_eq!(lock_time(&problem, &FairCoinTest, w, 64).unwrap(), None);
    }

    #[test]
    fn success_set_examples() {
        let problem = fine_grained_raven(&[0.3, 0.5, 1.0]).unwrap();
        let half = problem.world("p=0.5").unwrap();
        let est = success_set_prob(&problem, &RavenRule, half, 3, 10, 100, 0).unwrap();
        assert_eq!(est.exact.unwrap(), ratio(7, 8));
        let one = problem.world("p=1").unwrap();
        assert_eq!(success_set_prob(&problem, &RavenRule, one, 4, 10, 100, 0).unwrap().estimate, 1.0);
        let low = problem.world("p=0.3").unwrap();
        assert_eq!(success_set_prob(&problem, &RavenRule, low, 1, 10, 100, 0).unwrap().exact.unwrap(), ratio(7, 10));
    }

    #[test]
    fn success_set_needs_branch_truths() {
        let problem = fair_coin(&[0.5, 0.9]).unwrap();
        let w = problem.world("theta=0.5").unwrap();
        assert!(matches!(
            success_set_prob(&problem, &FairCoinTest, w, 3, 10, 10, 0),
            Err(Error::Precondition(_))
        ));
        let bare = World::new("bare", Branch::all_ones(), Hypothesis::YES);
        assert!(matches!(
            success_set_prob(&easy_raven(), &RavenRule, &bare, 3, 10, 10, 0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn monotone_on_shared_samples() {
        let problem = fine_grained_raven(&[0.5]).unwrap();
        let w = problem.world("p=0.5").unwrap();
        assert!(success_set_monotone(&problem, &RavenRule, w, 2, 7, 20, 500, 1).unwrap());
        assert!(success_set_monotone(&problem, &RavenRule, w, 7, 2, 20, 5, 1).is_err());
    }
}
