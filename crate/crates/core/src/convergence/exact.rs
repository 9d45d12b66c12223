//! Exact success probabilities `P_w(loss(M(D_n), w) meets the criterion)`.
//!
//! Three routes, tried in order:
//! * point masses: the probability is the indicator of success on the
//!   one branch;
//! * count-symmetric methods under a Bernoulli measure: sum over the
//!   number of ones, with binomial weights;
//! * everything else: enumerate the `|X|^n` sequences with their prefix
//!   probabilities, pruning zero-probability subtrees.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::criterion::{Budget, SuccessCriterion};
use crate::error::{Error, Result};
use crate::model::{apply_method, loss_of, EmpiricalProblem, InferenceMethod, Measure, Observation, World};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExactRoute {
    PointMass,
    Binomial,
    /// Binomial weights summed in compensated floating point.
    BinomialFloat,
    Enumeration,
}

/// An exactly computed success probability. `rational` is present unless
/// the route summed in floating point.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactProbability {
    pub value: f64,
    pub rational: Option<Rational>,
    pub route: ExactRoute,
}

impl ExactProbability {
    fn from_rational(r: Rational, route: ExactRoute) -> Self {
        Self {
            value: rational::to_f64(&r),
            rational: Some(r),
            route,
        }
    }

    /// `self > threshold`, exactly when possible.
    pub fn exceeds(&self, threshold: &Rational) -> bool {
        match &self.rational {
            Some(r) => r > threshold,
            None => self.value > rational::to_f64(threshold),
        }
    }
}

fn measure_of(w: &World) -> Result<&Measure> {
    w.measure()
        .ok_or_else(|| Error::Precondition(format!("world {} carries no measure", w.id())))
}

/// The route [`exact_success_prob_with`] would take, if any fits `budget`.
pub fn exact_route(
    problem: &EmpiricalProblem,
    method: &dyn InferenceMethod,
    w: &World,
    n: u64,
    budget: &Budget,
) -> Option<ExactRoute> {
    let measure = w.measure()?;
    if matches!(measure, Measure::PointMass(_)) && budget.enumeration_cap > 0 {
        return Some(ExactRoute::PointMass);
    }
    if matches!(measure, Measure::Bernoulli(_)) && method.count_symmetric() && n <= budget.symmetric_cap {
        return Some(if n <= budget.rational_cap {
            ExactRoute::Binomial
        } else {
            ExactRoute::BinomialFloat
        });
    }
    let size = problem.alphabet().size();
    let count = u32::try_from(n).ok().and_then(|n| size.checked_pow(n));
    match count {
        Some(c) if c <= budget.enumeration_cap => Some(ExactRoute::Enumeration),
        _ => None,
    }
}

pub fn exact_success_prob(
    problem: &EmpiricalProblem,
    method: &dyn InferenceMethod,
    w: &World,
    n: u64,
    crit: &SuccessCriterion,
) -> Result<ExactProbability> {
    exact_success_prob_with(problem, method, w, n, crit, &Budget::default())
}

pub fn exact_success_prob_with(
    problem: &EmpiricalProblem,
    method: &dyn InferenceMethod,
    w: &World,
    n: u64,
    crit: &SuccessCriterion,
    budget: &Budget,
) -> Result<ExactProbability> {
    let measure = measure_of(w)?;
    let route = exact_route(problem, method, w, n, budget).ok_or_else(|| {
        Error::Resource(format!(
            "no exact route for world {} at n = {n} within the enumeration budget",
            w.id()
        ))
    })?;
    match (route, measure) {
        (ExactRoute::PointMass, Measure::PointMass(branch)) => {
            let prefix = branch.prefix(n as usize);
            let out = apply_method(method, &prefix)?;
            let hit = crit.met(&loss_of(problem, &out, w)?);
            Ok(ExactProbability::from_rational(
                if hit { Rational::one() } else { Rational::zero() },
                route,
            ))
        }
        (ExactRoute::Binomial, Measure::Bernoulli(bias)) => {
            binomial_exact(problem, method, w, n, crit, bias.theta()).map(|r| ExactProbability::from_rational(r, route))
        }
        (ExactRoute::BinomialFloat, Measure::Bernoulli(bias)) => Ok(ExactProbability {
            value: binomial_float(problem, method, w, n, crit, bias.theta())?,
            rational: None,
            route,
        }),
        _ => exact_success_prob_enumerated(problem, method, w, n, crit)
            .map(|r| ExactProbability::from_rational(r, ExactRoute::Enumeration)),
    }
}

fn count_success(
    problem: &EmpiricalProblem,
    method: &dyn InferenceMethod,
    w: &World,
    n: u64,
    k: u64,
    crit: &SuccessCriterion,
) -> Result<bool> {
    let out = method
        .decide_counts(n, k)
        .ok_or_else(|| Error::Precondition(format!("{} claims count symmetry but has no count rule", method.name())))?;
    Ok(crit.met(&loss_of(problem, &out, w)?))
}

fn binomial_exact(
    problem: &EmpiricalProblem,
    method: &dyn InferenceMethod,
    w: &World,
    n: u64,
    crit: &SuccessCriterion,
    theta: &Rational,
) -> Result<Rational> {
    if theta.is_zero() || theta.is_one() {
        let k = if theta.is_one() { n } else { 0 };
        let hit = count_success(problem, method, w, n, k, crit)?;
        return Ok(if hit { Rational::one() } else { Rational::zero() });
    }
    let a = theta.numer().clone();
    let b = theta.denom().clone();
    let c = &b - &a;
    // term_k = C(n, k) a^k c^(n-k); every step divides exactly.
    let mut term = num_traits::pow(c.clone(), n as usize);
    let mut total = BigInt::zero();
    for k in 0..=n {
        if count_success(problem, method, w, n, k, crit)? {
            total += &term;
        }
        if k < n {
            term = term * BigInt::from(n - k) * &a / (BigInt::from(k + 1) * &c);
        }
    }
    Ok(Rational::new(total, num_traits::pow(b, n as usize)))
}

#[derive(Default)]
struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Binomial weights relative to the mode, built outward by the ratio
/// recurrence and normalized by their compensated total. Tail weights that
/// underflow are dropped.
fn binomial_float(
    problem: &EmpiricalProblem,
    method: &dyn InferenceMethod,
    w: &World,
    n: u64,
    crit: &SuccessCriterion,
    theta: &Rational,
) -> Result<f64> {
    if theta.is_zero() || theta.is_one() {
        let k = if theta.is_one() { n } else { 0 };
        return Ok(if count_success(problem, method, w, n, k, crit)? { 1.0 } else { 0.0 });
    }
    let p = rational::to_f64(theta);
    let r = p / (1.0 - p);
    let mode = (((n + 1) as f64 * p).floor() as u64).min(n);
    let mut weights = vec![0.0f64; n as usize + 1];
    weights[mode as usize] = 1.0;
    let mut x = 1.0;
    for k in mode..n {
        x *= (n - k) as f64 / (k + 1) as f64 * r;
        if x < f64::MIN_POSITIVE {
            break;
        }
        weights[k as usize + 1] = x;
    }
    x = 1.0;
    for k in (1..=mode).rev() {
        x *= k as f64 / (n - k + 1) as f64 / r;
        if x < f64::MIN_POSITIVE {
            break;
        }
        weights[k as usize - 1] = x;
    }
    let mut total = Neumaier::default();
    let mut hit = Neumaier::default();
    for (k, &wk) in weights.iter().enumerate() {
        if wk == 0.0 {
            continue;
        }
        total.add(wk);
        if count_success(problem, method, w, n, k as u64, crit)? {
            hit.add(wk);
        }
    }
    Ok((hit.total() / total.total()).clamp(0.0, 1.0))
}

/// Full enumeration of the length-`n` sequences, independent of any
/// symmetry the method may have.
pub fn exact_success_prob_enumerated(
    problem: &EmpiricalProblem,
    method: &dyn InferenceMethod,
    w: &World,
    n: u64,
    crit: &SuccessCriterion,
) -> Result<Rational> {
    let measure = measure_of(w)?;
    let tokens = problem.alphabet().tokens();
    let mut total = Rational::zero();
    let mut prefix: Vec<Observation> = Vec::with_capacity(n as usize);
    enumerate(problem, method, w, crit, measure, &tokens, n as usize, &mut prefix, &Rational::one(), &mut total)?;
    if total.is_negative() {
        return Err(Error::Precondition("measure produced negative mass".into()));
    }
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    problem: &EmpiricalProblem,
    method: &dyn InferenceMethod,
    w: &World,
    crit: &SuccessCriterion,
    measure: &Measure,
    tokens: &[Observation],
    n: usize,
    prefix: &mut Vec<Observation>,
    mass: &Rational,
    total: &mut Rational,
) -> Result<()> {
    if prefix.len() == n {
        let out = apply_method(method, prefix)?;
        if crit.met(&loss_of(problem, &out, w)?) {
            *total += mass;
        }
        return Ok(());
    }
    for tok in tokens {
        let p = measure.child_prob(prefix, tok);
        if p.is_zero() {
            continue;
        }
        let child = mass * p;
        prefix.push(*tok);
        enumerate(problem, method, w, crit, measure, tokens, n, prefix, &child, total)?;
        prefix.pop();
    }
    Ok(())
}
