//! Finite-horizon mode checks.
//!
//! Convergence is a limit property, so a run can only support it up to
//! the horizon T or refute it with a witness. A world is refuted when
//! success fails throughout the second half of the horizon; a whole
//! problem is refuted in mode I when two evaluated worlds share their
//! entire data stream but disagree on the truth.

use std::fmt;

use num_traits::One;
use serde::Serialize;

use super::bounds::analytic_certificate;
use super::criterion::{Mode, ModeParams, SuccessCriterion};
use super::curve::{success_curve, CurvePoint, SuccessCurve};
use super::witness::pair_among;
use crate::error::{Error, Result};
use crate::model::{loss_of, outputs_along, EmpiricalProblem, InferenceMethod, World};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    SupportedAtHorizon,
    RefutedAtHorizon,
    Inconclusive,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::SupportedAtHorizon => "SUPPORTED_AT_HORIZON",
            Self::RefutedAtHorizon => "REFUTED_AT_HORIZON",
            Self::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum WorldStatus {
    Supported,
    Refuted,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorldVerdict {
    pub world_id: String,
    pub status: WorldStatus,
    /// Smallest evaluated stage from which every later evaluated stage
    /// succeeds.
    pub threshold: Option<u64>,
    /// Stage from which an analytic bound guarantees success, if known.
    pub certified_from: Option<u64>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdict {
    pub problem: String,
    pub method: String,
    pub mode: Mode,
    pub horizon: u64,
    pub status: Status,
    pub worlds: Vec<WorldVerdict>,
    pub witness: Option<String>,
    pub notes: Vec<String>,
    #[serde(skip)]
    pub curve: Option<SuccessCurve>,
}

impl Verdict {
    pub fn world(&self, id: &str) -> Option<&WorldVerdict> {
        self.worlds.iter().find(|w| w.world_id == id)
    }
}

fn selected_worlds<'a>(problem: &'a EmpiricalProblem, params: &ModeParams) -> Result<Vec<&'a World>> {
    match &params.worlds {
        Some(ids) => ids.iter().map(|id| problem.world(id)).collect(),
        None => Ok(problem.worlds().worlds().iter().collect()),
    }
}

/// Index of the first element of the maximal all-`pred` suffix.
fn suffix_start<T>(items: &[T], pred: impl Fn(&T) -> bool) -> usize {
    items.iter().rposition(|x| !pred(x)).map_or(0, |i| i + 1)
}

pub fn check_mode(problem: &EmpiricalProblem, method: &dyn InferenceMethod, params: &ModeParams) -> Result<Verdict> {
    params.validate()?;
    let worlds = selected_worlds(problem, params)?;
    if worlds.is_empty() {
        return Err(Error::InputDomain("no worlds selected".into()));
    }
    let (worlds_out, witness, mut notes, curve) = match params.mode {
        Mode::I => {
            let (v, w, n) = check_nonstochastic(problem, method, &worlds, params.horizon)?;
            (v, w, n, None)
        }
        Mode::II | Mode::III => {
            let (v, w, n, c) = check_stochastic(problem, method, &worlds, params)?;
            (v, w, n, Some(c))
        }
    };
    let status = if witness.is_some() {
        Status::RefutedAtHorizon
    } else if worlds_out.iter().all(|w| w.status == WorldStatus::Supported) {
        Status::SupportedAtHorizon
    } else {
        Status::Inconclusive
    };
    if status == Status::SupportedAtHorizon {
        notes.push(format!(
            "success holds in every evaluated world from its threshold through T = {}; this is evidence, not proof, of convergence",
            params.horizon
        ));
    }
    Ok(Verdict {
        problem: problem.name().to_string(),
        method: method.name().to_string(),
        mode: params.mode,
        horizon: params.horizon,
        status,
        worlds: worlds_out,
        witness,
        notes,
        curve,
    })
}

type Checked = (Vec<WorldVerdict>, Option<String>, Vec<String>);

fn check_nonstochastic(
    problem: &EmpiricalProblem,
    method: &dyn InferenceMethod,
    worlds: &[&World],
    horizon: u64,
) -> Result<Checked> {
    let half = horizon.div_ceil(2) as usize;
    let mut out = Vec::with_capacity(worlds.len());
    let mut witness = None;
    for w in worlds {
        let outputs = outputs_along(method, w, horizon as usize)?;
        let hits = outputs
            .iter()
            .map(|o| Ok(SuccessCriterion::Exact.met(&loss_of(problem, o, w)?)))
            .collect::<Result<Vec<bool>>>()?;
        let lock = suffix_start(&hits, |h| *h);
        let fail_from = suffix_start(&hits, |h| !*h);
        let verdict = if lock <= horizon as usize {
            WorldVerdict {
                world_id: w.id().to_string(),
                status: WorldStatus::Supported,
                threshold: Some(lock as u64),
                certified_from: None,
                note: None,
            }
        } else if fail_from <= half {
            if witness.is_none() {
                witness = Some(format!("world {} fails at every stage {fail_from}..={horizon}", w.id()));
            }
            WorldVerdict {
                world_id: w.id().to_string(),
                status: WorldStatus::Refuted,
                threshold: None,
                certified_from: None,
                note: Some(format!("positive loss at every stage {fail_from}..={horizon}")),
            }
        } else {
            WorldVerdict {
                world_id: w.id().to_string(),
                status: WorldStatus::Inconclusive,
                threshold: None,
                certified_from: None,
                note: Some("output still changing near the horizon".into()),
            }
        };
        out.push(verdict);
    }
    let mut notes = Vec::new();
    if let Some((a, b)) = pair_among(problem, worlds)? {
        let pair = format!(
            "worlds {} and {} share the data stream {} but have truths {} and {}; no method identifies both",
            a.id(),
            b.id(),
            a.branch().id(),
            a.truth(),
            b.truth()
        );
        notes.push(pair.clone());
        witness = Some(pair);
    }
    Ok((out, witness, notes))
}

fn classify_world(w: &World, points: &[&CurvePoint], threshold: &Rational, horizon: u64) -> WorldVerdict {
    let pass_from = suffix_start(points, |p| p.clearly_above(threshold));
    let fail_from = suffix_start(points, |p| p.clearly_at_most(threshold));
    let half = horizon.div_ceil(2);
    let (status, stage, note) = if pass_from < points.len() {
        (WorldStatus::Supported, Some(points[pass_from].n), None)
    } else if fail_from < points.len() && points[fail_from].n <= half {
        (
            WorldStatus::Refuted,
            None,
            Some(format!(
                "success probability at most 1-δ at every evaluated stage {}..={horizon}",
                points[fail_from].n
            )),
        )
    } else {
        let last = points.last();
        let note = match last {
            Some(p) if !p.clearly_above(threshold) && !p.clearly_at_most(threshold) => {
                "final stage within sampling error of 1-δ"
            }
            _ => "success not sustained through the horizon",
        };
        (WorldStatus::Inconclusive, None, Some(note.to_string()))
    };
    WorldVerdict {
        world_id: w.id().to_string(),
        status,
        threshold: stage,
        certified_from: None,
        note,
    }
}

/// Per-world verdicts, refutation witness, notes, and the curve behind them.
type StochasticCheck = (Vec<WorldVerdict>, Option<String>, Vec<String>, SuccessCurve);

fn check_stochastic(
    problem: &EmpiricalProblem,
    method: &dyn InferenceMethod,
    worlds: &[&World],
    params: &ModeParams,
) -> Result<StochasticCheck> {
    let delta = params.delta.as_ref().expect("validated");
    let threshold = Rational::one() - delta;
    for w in worlds {
        if w.measure().is_none() {
            return Err(Error::Precondition(format!(
                "mode {} needs a measure on world {}",
                params.mode,
                w.id()
            )));
        }
    }
    let stages = params.stages.stages(params.horizon);
    let crit = params.criterion();
    let curve = success_curve(problem, method, worlds, &crit, &stages, &params.budget, params.seed)?;
    let mut out = Vec::with_capacity(worlds.len());
    let mut witness = None;
    for w in worlds {
        let points: Vec<&CurvePoint> = curve.world_points(w.id()).collect();
        let mut v = classify_world(w, &points, &threshold, params.horizon);
        v.certified_from = analytic_certificate(problem, method, w, params.mode, params.epsilon.as_ref(), delta);
        if v.status == WorldStatus::Refuted && witness.is_none() {
            witness = Some(format!("world {}: {}", w.id(), v.note.as_deref().unwrap_or_default()));
        }
        out.push(v);
    }
    let mut notes = Vec::new();
    if let Some(first) = out.iter().filter_map(|v| v.certified_from).max() {
        notes.push(format!(
            "analytic bound guarantees success probability above 1-δ in every evaluated world for n >= {first}"
        ));
    }
    Ok((out, witness, notes, curve))
}
