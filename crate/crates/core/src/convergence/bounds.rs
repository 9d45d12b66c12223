//! Law-of-large-numbers bounds for the coin problems.
//!
//! For IID Bernoulli data, `P(|X̄_n - θ| < ε) >= 1 - 1/(4nε²)` for every θ.
//! Specializing `ε = n^(-1/4)` gives `1 - 1/(4√n)`, which lower-bounds the
//! fair-coin test's success probability on `Fair` worlds, and on `Unfair`
//! worlds once `n^(-1/4) < |θ - 1/2| / 2`.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::criterion::{Mode, SuccessCriterion};
use crate::error::{Error, Result};
use crate::methods::{FairCoinTest, FrequencyEstimator};
use crate::model::{EmpiricalProblem, Extras, InferenceMethod, World};
use crate::rational::{self, ratio, Rational};

/// `max(0, 1 - 1/(4 n ε²))`.
pub fn bernoulli_bound(n: u64, eps: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InputDomain("sample size must be at least 1".into()));
    }
    if eps.is_nan() || eps <= 0.0 || eps.is_infinite() {
        return Err(Error::InputDomain(format!("ε must be positive and finite, got {eps}")));
    }
    Ok((1.0 - 1.0 / (4.0 * n as f64 * eps * eps)).max(0.0))
}

/// [`bernoulli_bound`] in exact arithmetic.
pub fn bernoulli_bound_exact(n: u64, eps: &Rational) -> Result<Rational> {
    if n == 0 {
        return Err(Error::InputDomain("sample size must be at least 1".into()));
    }
    if !eps.is_positive() {
        return Err(Error::InputDomain("ε must be positive".into()));
    }
    let raw = Rational::one() - (Rational::from_integer(BigInt::from(4u64) * BigInt::from(n)) * eps * eps).recip();
    Ok(if raw.is_negative() { Rational::zero() } else { raw })
}

/// `max(0, 1 - 1/(4√n))`.
pub fn fair_test_bound(n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    (1.0 - 1.0 / (4.0 * (n as f64).sqrt())).max(0.0)
}

/// Smallest n with `1 - 1/(4nε²) > 1 - δ`, i.e. `floor(1/(4δε²)) + 1`.
pub fn required_sample_size(eps: f64, delta: f64) -> Result<u64> {
    required_sample_size_exact(&rational::from_f64(eps)?, &rational::from_f64(delta)?)
}

pub fn required_sample_size_exact(eps: &Rational, delta: &Rational) -> Result<u64> {
    if !eps.is_positive() {
        return Err(Error::InputDomain("ε must be positive".into()));
    }
    if !delta.is_positive() || *delta >= Rational::one() {
        return Err(Error::InputDomain("δ must lie in (0, 1)".into()));
    }
    let x = (Rational::from_integer(4.into()) * delta * eps * eps).recip();
    floor_plus_one(&x)
}

fn floor_plus_one(x: &Rational) -> Result<u64> {
    (x.floor().to_integer() + 1u32)
        .to_u64()
        .ok_or_else(|| Error::Resource("sample size exceeds u64".into()))
}

fn world_bias(world: &World) -> Option<&Rational> {
    match world.extras() {
        Extras::Bias(theta) => Some(theta),
        _ => None,
    }
}

fn as_frequency(method: &dyn InferenceMethod) -> bool {
    let any: &dyn std::any::Any = method;
    any.is::<FrequencyEstimator>()
}

fn as_fair_test(method: &dyn InferenceMethod) -> bool {
    let any: &dyn std::any::Any = method;
    any.is::<FairCoinTest>()
}

/// Smallest n with `n^(-1/4) < d/2`, i.e. `n > 16/d^4`.
fn fair_test_separation(d: &Rational) -> Result<u64> {
    let d4 = d * d * d * d;
    floor_plus_one(&(Rational::from_integer(16.into()) / d4))
}

/// A known lower bound on the success probability at stage `n`, for the
/// method/problem pairs the Bernoulli bound covers.
pub fn analytic_lower_bound(
    problem: &EmpiricalProblem,
    method: &dyn InferenceMethod,
    world: &World,
    n: u64,
    crit: &SuccessCriterion,
) -> Option<f64> {
    if n == 0 {
        return None;
    }
    let theta = world_bias(world)?;
    if as_frequency(method) && problem.loss().name() == "absolute-bias" {
        if let SuccessCriterion::Within(eps) = crit {
            return bernoulli_bound(n, rational::to_f64(eps)).ok();
        }
        return None;
    }
    if as_fair_test(method) && problem.loss().name() == "identification" && crit.is_identification_like() {
        let half = ratio(1, 2);
        if *theta == half {
            return Some(fair_test_bound(n));
        }
        let gap = rational::abs_diff(theta, &half);
        let from = fair_test_separation(&gap).ok()?;
        return (n >= from).then(|| fair_test_bound(n));
    }
    None
}

/// Stage from which the analytic bound alone guarantees success
/// probability above `1 - δ` in `world`, when one is known.
pub fn analytic_certificate(
    problem: &EmpiricalProblem,
    method: &dyn InferenceMethod,
    world: &World,
    mode: Mode,
    epsilon: Option<&Rational>,
    delta: &Rational,
) -> Option<u64> {
    let theta = world_bias(world)?;
    if as_frequency(method) && problem.loss().name() == "absolute-bias" && mode == Mode::III {
        return required_sample_size_exact(epsilon?, delta).ok();
    }
    if as_fair_test(method) && problem.loss().name() == "identification" && mode != Mode::I {
        if mode == Mode::III && epsilon.is_some_and(|e| *e > Rational::one()) {
            return None;
        }
        // 1 - 1/(4√n) > 1 - δ  <=>  n > 1/(16δ²)
        let base = floor_plus_one(&(Rational::from_integer(16.into()) * delta * delta).recip()).ok()?;
        let half = ratio(1, 2);
        if *theta == half {
            return Some(base);
        }
        let gap = rational::abs_diff(theta, &half);
        return Some(base.max(fair_test_separation(&gap).ok()?));
    }
    None
}
