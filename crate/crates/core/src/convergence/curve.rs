use rayon::prelude::*;
use serde::Serialize;

use super::bounds::analytic_lower_bound;
use super::criterion::{Budget, SuccessCriterion};
use super::exact::{exact_route, exact_success_prob_with, ExactProbability};
use super::mc::mc_success_prob;
use crate::error::Result;
use crate::model::{EmpiricalProblem, InferenceMethod, World};
use crate::rational::Rational;

/// One point of a success-probability curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePoint {
    pub world_id: String,
    pub n: u64,
    pub estimate: f64,
    /// Zero for exact points.
    pub stderr: f64,
    pub exact: bool,
    #[serde(skip)]
    pub exact_value: Option<Rational>,
    /// Analytic lower bound at this stage, when one is known.
    pub bound: Option<f64>,
}

impl CurvePoint {
    /// Clearly above `threshold`: exactly, or by three standard errors.
    pub fn clearly_above(&self, threshold: &Rational) -> bool {
        match (&self.exact_value, self.exact) {
            (Some(v), _) => v > threshold,
            (None, true) => self.estimate > crate::rational::to_f64(threshold),
            (None, false) => self.estimate - 3.0 * self.stderr > crate::rational::to_f64(threshold),
        }
    }

    /// Clearly at or below `threshold`.
    pub fn clearly_at_most(&self, threshold: &Rational) -> bool {
        match (&self.exact_value, self.exact) {
            (Some(v), _) => v <= threshold,
            (None, true) => self.estimate <= crate::rational::to_f64(threshold),
            (None, false) => self.estimate + 3.0 * self.stderr <= crate::rational::to_f64(threshold),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuccessCurve {
    pub problem: String,
    pub method: String,
    pub criterion: String,
    pub points: Vec<CurvePoint>,
}

impl SuccessCurve {
    pub fn world_points<'a>(&'a self, world_id: &'a str) -> impl Iterator<Item = &'a CurvePoint> + 'a {
        self.points.iter().filter(move |p| p.world_id == world_id)
    }
}

fn point(
    problem: &EmpiricalProblem,
    method: &dyn InferenceMethod,
    w: &World,
    n: u64,
    crit: &SuccessCriterion,
    budget: &Budget,
    seed: u64,
) -> Result<CurvePoint> {
    let bound = analytic_lower_bound(problem, method, w, n, crit);
    if exact_route(problem, method, w, n, budget).is_some() {
        let ExactProbability { value, rational, .. } = exact_success_prob_with(problem, method, w, n, crit, budget)?;
        return Ok(CurvePoint {
            world_id: w.id().to_string(),
            n,
            estimate: value,
            stderr: 0.0,
            exact: true,
            exact_value: rational,
            bound,
        });
    }
    let est = mc_success_prob(problem, method, w, n, crit, budget.trials, seed)?;
    Ok(CurvePoint {
        world_id: w.id().to_string(),
        n,
        estimate: est.estimate,
        stderr: est.stderr,
        exact: false,
        exact_value: None,
        bound,
    })
}

/// Success probabilities at each of `stages` in each of `worlds`, exact
/// where the budget allows and sampled otherwise. Points are ordered by
/// world, then stage.
pub fn success_curve(
    problem: &EmpiricalProblem,
    method: &dyn InferenceMethod,
    worlds: &[&World],
    crit: &SuccessCriterion,
    stages: &[u64],
    budget: &Budget,
    seed: u64,
) -> Result<SuccessCurve> {
    let jobs: Vec<(&World, u64)> = worlds.iter().flat_map(|w| stages.iter().map(move |&n| (*w, n))).collect();
    let points = jobs
        .par_iter()
        .map(|&(w, n)| point(problem, method, w, n, crit, budget, seed))
        .collect::<Result<Vec<_>>>()?;
    Ok(SuccessCurve {
        problem: problem.name().to_string(),
        method: method.name().to_string(),
        criterion: crit.to_string(),
        points,
    })
}
