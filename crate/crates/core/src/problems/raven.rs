use std::ops::RangeInclusive;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::{
    Alphabet, Branch, EmpiricalProblem, Hypothesis, HypothesisSpace, IdentificationLoss, Measure, Observation, Search,
    World, WorldFamily,
};
use crate::rational;
use crate::rng;

use super::{DEFAULT_WORLD_SEED, EASY_RAVEN, FINE_GRAINED_RAVEN, TRUTH_SCAN_LIMIT};

/// Coherent truth of a raven branch: `No` iff a `0` ever appears.
pub fn raven_truth(branch: &Branch) -> Result<Hypothesis> {
    match branch.find(|o| *o == Observation::ZERO, TRUTH_SCAN_LIMIT) {
        Search::Found(_) => Ok(Hypothesis::NO),
        Search::Never => Ok(Hypothesis::YES),
        Search::Unknown => Err(Error::Resource(format!(
            "no 0 within {TRUTH_SCAN_LIMIT} tokens of branch {}; truth unresolved",
            branch.id()
        ))),
    }
}

fn raven_space() -> HypothesisSpace {
    HypothesisSpace::Labels(vec!["Yes", "No"])
}

/// The easy raven problem with first-`0` positions `1..=20`.
pub fn easy_raven() -> EmpiricalProblem {
    easy_raven_with(1..=20)
}

/// The easy raven problem over worlds whose first `0` sits at each
/// position in `first_zero`, plus the all-`1` world `(111..., Yes)`.
/// The world `(111..., No)` is excluded.
pub fn easy_raven_with(first_zero: RangeInclusive<u64>) -> EmpiricalProblem {
    let mut worlds: Vec<World> = first_zero
        .filter(|k| *k >= 1)
        .map(|k| World::new(format!("first-0-at-{k}"), Branch::first_zero_at(k), Hypothesis::NO))
        .collect();
    worlds.push(World::new("ones", Branch::all_ones(), Hypothesis::YES));
    EmpiricalProblem::new(
        EASY_RAVEN,
        raven_space(),
        Alphabet::Binary,
        WorldFamily::listed(worlds),
        Arc::new(IdentificationLoss),
    )
    .expect("raven worlds are well-formed")
    .with_branch_truth(raven_truth)
}

/// The literal reading: every branch paired with either answer, except
/// `(111..., No)`. Branches no longer determine truths.
pub fn easy_raven_literal(first_zero: RangeInclusive<u64>) -> EmpiricalProblem {
    let mut worlds = Vec::new();
    for k in first_zero.filter(|k| *k >= 1) {
        worlds.push(World::new(format!("first-0-at-{k}"), Branch::first_zero_at(k), Hypothesis::NO));
        worlds.push(World::new(format!("first-0-at-{k}/yes"), Branch::first_zero_at(k), Hypothesis::YES));
    }
    worlds.push(World::new("ones", Branch::all_ones(), Hypothesis::YES));
    EmpiricalProblem::new(
        format!("{EASY_RAVEN}-literal"),
        raven_space(),
        Alphabet::Binary,
        WorldFamily::listed(worlds),
        Arc::new(IdentificationLoss),
    )
    .expect("raven worlds are well-formed")
}

pub fn fine_grained_raven(p_grid: &[f64]) -> Result<EmpiricalProblem> {
    fine_grained_raven_seeded(p_grid, DEFAULT_WORLD_SEED)
}

/// A fine-grained version of the easy raven problem: one world per `p`,
/// whose data are IID with `P(1) = p`. For `p = 1` the world is the
/// point-mass extension of `(111..., Yes)`; otherwise the branch is
/// realized from the measure and its truth read off the branch.
pub fn fine_grained_raven_seeded(p_grid: &[f64], seed: u64) -> Result<EmpiricalProblem> {
    if p_grid.is_empty() {
        return Err(Error::Config("empty p grid".into()));
    }
    let family = WorldFamily::generated(p_grid, |p| {
        let id = format!("p={p}");
        let prob = rational::from_f64(p)?;
        if !rational::is_probability(&prob) {
            return Err(Error::InputDomain(format!("p = {p} outside [0, 1]")));
        }
        if p == 1.0 {
            let branch = Branch::all_ones();
            return Ok(vec![World::new(id, branch.clone(), Hypothesis::YES).with_measure(Measure::PointMass(branch))]);
        }
        let measure = Measure::bernoulli(prob)?;
        let branch = measure
            .sampler(rng::stream_key(&[seed, rng::label_key(&id)]))
            .with_id(format!("{id}/realized"));
        let truth = raven_truth(&branch)?;
        Ok(vec![World::new(id, branch, truth).with_measure(measure)])
    })?;
    Ok(EmpiricalProblem::new(
        FINE_GRAINED_RAVEN,
        raven_space(),
        Alphabet::Binary,
        family,
        Arc::new(IdentificationLoss),
    )?
    .with_branch_truth(raven_truth))
}
