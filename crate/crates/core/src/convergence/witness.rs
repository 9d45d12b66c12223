//! Unachievability witnesses.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde::Serialize;

use super::criterion::SuccessCriterion;
use crate::error::{Error, Result};
use crate::model::{loss_of, outputs_along, Alphabet, DataSequence, EmpiricalProblem, InferenceMethod, MethodOutput, World};
use crate::rational::{self, Rational};

/// Largest enumeration depth for [`cardinality_witness`].
pub const MAX_CARDINALITY_DEPTH: u32 = 20;

pub(crate) fn pair_among<'a>(problem: &EmpiricalProblem, worlds: &[&'a World]) -> Result<Option<(&'a World, &'a World)>> {
    for (i, a) in worlds.iter().enumerate() {
        for b in &worlds[i + 1..] {
            if a.truth() == b.truth() || !a.branch().provably_equal(b.branch()) {
                continue;
            }
            if problem.loss().eval(a.truth(), b)?.is_positive() {
                return Ok(Some((a, b)));
            }
        }
    }
    Ok(None)
}

/// The first pair of worlds, in family order, whose branches are provably
/// identical while their truths differ. No method can succeed in both at
/// any stage, so mode I is out of reach.
pub fn underdetermination_witness(problem: &EmpiricalProblem) -> Result<Option<(World, World)>> {
    let worlds: Vec<&World> = problem.worlds().worlds().iter().collect();
    Ok(pair_among(problem, &worlds)?.map(|(a, b)| (a.clone(), b.clone())))
}

/// Stage-by-stage confirmation of an underdetermination pair for one
/// method.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnderdeterminationCheck {
    pub first: String,
    pub second: String,
    /// Largest `n <= horizon` through which the two prefixes agree.
    pub prefix_equal_through: u64,
    /// Stages at which the method succeeds in both worlds at once.
    pub both_succeed: Vec<u64>,
}

impl UnderdeterminationCheck {
    pub fn holds(&self, horizon: u64) -> bool {
        self.prefix_equal_through == horizon && self.both_succeed.is_empty()
    }
}

pub fn verify_underdetermination(
    problem: &EmpiricalProblem,
    method: &dyn InferenceMethod,
    pair: (&World, &World),
    horizon: u64,
) -> Result<UnderdeterminationCheck> {
    let (a, b) = pair;
    let pa = a.branch().prefix(horizon as usize);
    let pb = b.branch().prefix(horizon as usize);
    let agree = pa.iter().zip(pb.iter()).take_while(|(x, y)| x == y).count() as u64;
    let oa = outputs_along(method, a, horizon as usize)?;
    let ob = outputs_along(method, b, horizon as usize)?;
    let mut both = Vec::new();
    for (n, (x, y)) in oa.iter().zip(&ob).enumerate() {
        let sa = SuccessCriterion::Exact.met(&loss_of(problem, x, a)?);
        let sb = SuccessCriterion::Exact.met(&loss_of(problem, y, b)?);
        if sa && sb {
            both.push(n as u64);
        }
    }
    Ok(UnderdeterminationCheck {
        first: a.id().to_string(),
        second: b.id().to_string(),
        prefix_equal_through: agree,
        both_succeed: both,
    })
}

/// A value in `[0, 1]` the method never outputs on binary inputs up to
/// the enumerated depth.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CardinalityWitness {
    #[serde(serialize_with = "as_f64")]
    pub value: Rational,
    #[serde(serialize_with = "as_f64")]
    pub gap_lo: Rational,
    #[serde(serialize_with = "as_f64")]
    pub gap_hi: Rational,
    pub depth: u32,
    /// Number of enumerated inputs, `2^(d+1) - 1`.
    pub inputs: u64,
    pub distinct_outputs: usize,
}

fn as_f64<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(rational::to_f64(r))
}

/// Enumerates every binary input of length `0..=depth`, collects the
/// method's real outputs together with the endpoints 0 and 1, and returns
/// the midpoint of the widest gap between consecutive values (the lowest
/// such gap on ties).
pub fn cardinality_witness(method: &dyn InferenceMethod, depth: u32) -> Result<CardinalityWitness> {
    if depth > MAX_CARDINALITY_DEPTH {
        return Err(Error::Resource(format!(
            "depth {depth} exceeds the enumeration budget of {MAX_CARDINALITY_DEPTH}"
        )));
    }
    if method.alphabet() != Alphabet::Binary {
        return Err(Error::Type(format!("{} is not defined on binary data", method.name())));
    }
    let mut values: BTreeSet<Rational> = BTreeSet::new();
    let mut inputs = 0u64;
    for n in 0..=depth {
        for code in 0..(1u64 << n) {
            inputs += 1;
            let seq = DataSequence::from_code(code, n as usize);
            match method.decide(&seq) {
                MethodOutput::Suspend => {}
                MethodOutput::Hypothesis(h) => {
                    let v = h
                        .as_real()
                        .ok_or_else(|| Error::Type(format!("{} outputs the non-real hypothesis {h}", method.name())))?;
                    values.insert(v.clone());
                }
            }
        }
    }
    let distinct_outputs = values.len();
    values.insert(Rational::zero());
    values.insert(rational::int(1));
    let sorted: Vec<&Rational> = values.iter().collect();
    let mut best: Option<(Rational, usize)> = None;
    for (i, pair) in sorted.windows(2).enumerate() {
        let gap = pair[1] - pair[0];
        if best.as_ref().is_none_or(|(g, _)| gap > *g) {
            best = Some((gap, i));
        }
    }
    let (_, i) = best.expect("the endpoints give at least one gap");
    let (lo, hi) = (sorted[i].clone(), sorted[i + 1].clone());
    Ok(CardinalityWitness {
        value: (&lo + &hi) / rational::int(2),
        gap_lo: lo,
        gap_hi: hi,
        depth,
        inputs,
        distinct_outputs,
    })
}
