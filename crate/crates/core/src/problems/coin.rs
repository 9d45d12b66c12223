use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::model::{
    AbsoluteBiasLoss, Alphabet, Branch, EmpiricalProblem, Extras, Hypothesis, HypothesisSpace, IdentificationLoss,
    Measure, World, WorldFamily,
};
use crate::rational::{self, ratio, Rational};
use crate::rng;

use super::{COIN_BIAS, DEFAULT_WORLD_SEED, FAIR_COIN};

/// `{0, 0.1, ..., 1} ∪ {0.45, 0.55}`.
pub fn default_theta_grid() -> Vec<f64> {
    let mut g: Vec<f64> = (0..=10).map(|i| f64::from(i) / 10.0).collect();
    g.extend([0.45, 0.55]);
    g
}

fn half() -> Rational {
    ratio(1, 2)
}

fn coin_world(id: String, branch: Branch, theta: &Rational, truth: &impl Fn(&Rational) -> Hypothesis) -> Result<World> {
    Ok(World::new(id, branch, truth(theta))
        .with_measure(Measure::bernoulli(theta.clone())?)
        .with_extras(Extras::Bias(theta.clone())))
}

/// Worlds shared by the fair-coin and coin-bias problems: one world per
/// grid bias with a branch realized from `P_θ`, plus the fixed-pattern
/// worlds `(1010..., 0.5)`, `(111..., 0.5)` and `(1010..., θ*)` where θ*
/// is the first grid bias other than 0, 0.5 and 1.
fn coin_family(grid: &[f64], seed: u64, truth: impl Fn(&Rational) -> Hypothesis) -> Result<WorldFamily> {
    let thetas = grid
        .iter()
        .map(|&t| {
            let r = rational::from_f64(t)?;
            if !rational::is_probability(&r) {
                return Err(Error::InputDomain(format!("bias {t} outside [0, 1]")));
            }
            Ok((t, r))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut fixed = vec![
        coin_world("alt/theta=0.5".into(), Branch::alternating(), &half(), &truth)?,
    ];
    if let Some((t, r)) = thetas.iter().find(|(_, r)| *r != half() && !r.is_zero() && !r.is_one()) {
        fixed.push(coin_world(format!("alt/theta={t}"), Branch::alternating(), r, &truth)?);
    }
    fixed.push(coin_world("ones/theta=0.5".into(), Branch::all_ones(), &half(), &truth)?);

    let sampled = WorldFamily::generated(grid, |t| {
        let id = format!("theta={t}");
        let theta = rational::from_f64(t)?;
        let measure = Measure::bernoulli(theta.clone())?;
        let branch = measure
            .sampler(rng::stream_key(&[seed, rng::label_key(&id)]))
            .with_id(format!("{id}/realized"));
        Ok(vec![coin_world(id, branch, &theta, &truth)?])
    })?;
    fixed.extend(sampled.worlds().iter().cloned());
    Ok(WorldFamily::with_grid(fixed, grid))
}

pub fn fair_coin(theta_grid: &[f64]) -> Result<EmpiricalProblem> {
    fair_coin_seeded(theta_grid, DEFAULT_WORLD_SEED)
}

/// Is the coin fair? `H = {Fair, Unfair}`, with `Fair` true exactly when
/// θ = 0.5. The grid must contain 0.5 and some other bias.
pub fn fair_coin_seeded(theta_grid: &[f64], seed: u64) -> Result<EmpiricalProblem> {
    if !theta_grid.contains(&0.5) || theta_grid.iter().all(|&t| t == 0.5) {
        return Err(Error::Config(
            "fair-coin grid must contain 0.5 and at least one other bias".into(),
        ));
    }
    let family = coin_family(theta_grid, seed, |theta| {
        if *theta == half() {
            Hypothesis::FAIR
        } else {
            Hypothesis::UNFAIR
        }
    })?;
    EmpiricalProblem::new(
        FAIR_COIN,
        HypothesisSpace::Labels(vec!["Fair", "Unfair"]),
        Alphabet::Binary,
        family,
        Arc::new(IdentificationLoss),
    )
}

pub fn coin_bias(theta_grid: &[f64]) -> Result<EmpiricalProblem> {
    coin_bias_seeded(theta_grid, DEFAULT_WORLD_SEED)
}

/// What is the coin's bias? `H = [0, 1]`, `Loss(h, w) = |h - θ_w|`.
pub fn coin_bias_seeded(theta_grid: &[f64], seed: u64) -> Result<EmpiricalProblem> {
    if theta_grid.is_empty() {
        return Err(Error::Config("empty bias grid".into()));
    }
    let family = coin_family(theta_grid, seed, |theta| Hypothesis::Real(theta.clone()))?;
    let mut probes: Vec<Hypothesis> = family
        .worlds()
        .iter()
        .map(|w| w.truth().clone())
        .collect();
    probes.extend([ratio(1, 4), ratio(1, 2), ratio(3, 4)].map(Hypothesis::Real));
    probes.dedup();
    Ok(EmpiricalProblem::new(
        COIN_BIAS,
        HypothesisSpace::Interval {
            lo: Rational::zero(),
            hi: Rational::one(),
        },
        Alphabet::Binary,
        family,
        Arc::new(AbsoluteBiasLoss),
    )?
    .with_probes(probes))
}
