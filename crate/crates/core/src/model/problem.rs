use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::branch::Branch;
use super::hypothesis::{Hypothesis, HypothesisSpace, LossValue, MethodOutput};
use super::measure::Measure;
use super::observation::Alphabet;
use super::world::{Extras, World, WorldFamily};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Number of leading branch tokens inspected by validation.
pub const VALIDATION_DEPTH: usize = 64;

/// Inaccuracy of a hypothesis in a world.
pub trait LossFunction: Send + Sync {
    fn name(&self) -> &str;
    fn eval(&self, h: &Hypothesis, w: &World) -> Result<Rational>;
}

/// `1 - truth value`: zero for the world's truth, one for anything else.
#[derive(Debug, Clone, Copy, Default)]
pub struct IdentificationLoss;

impl LossFunction for IdentificationLoss {
    fn name(&self) -> &str {
        "identification"
    }

    fn eval(&self, h: &Hypothesis, w: &World) -> Result<Rational> {
        Ok(if h == w.truth() { Rational::zero() } else { Rational::one() })
    }
}

/// `|h - θ_w|` for real-valued guesses of a coin bias.
#[derive(Debug, Clone, Copy, Default)]
pub struct AbsoluteBiasLoss;

impl LossFunction for AbsoluteBiasLoss {
    fn name(&self) -> &str {
        "absolute-bias"
    }

    fn eval(&self, h: &Hypothesis, w: &World) -> Result<Rational> {
        let Extras::Bias(theta) = w.extras() else {
            return Err(Error::Precondition(format!("world {} carries no bias", w.id())));
        };
        let guess = h
            .as_real()
            .ok_or_else(|| Error::InputDomain(format!("{h} is not a real-valued guess")))?;
        Ok(rational::abs_diff(guess, theta))
    }
}

type BranchTruth = dyn Fn(&Branch) -> Result<Hypothesis> + Send + Sync;

/// An empirical problem `(H, E, W, Loss)`.
#[derive(Clone)]
pub struct EmpiricalProblem {
    name: String,
    hypothesis_space: HypothesisSpace,
    alphabet: Alphabet,
    worlds: WorldFamily,
    loss: Arc<dyn LossFunction>,
    probes: Vec<Hypothesis>,
    branch_truth: Option<Arc<BranchTruth>>,
}

impl EmpiricalProblem {
    pub fn new(
        name: impl Into<String>,
        hypothesis_space: HypothesisSpace,
        alphabet: Alphabet,
        worlds: WorldFamily,
        loss: Arc<dyn LossFunction>,
    ) -> Result<Self> {
        let name = name.into();
        if worlds.is_empty() {
            return Err(Error::Config(format!("problem {name} has no worlds")));
        }
        if let Some(w) = worlds.worlds().iter().find(|w| !hypothesis_space.contains(w.truth())) {
            return Err(Error::Config(format!("truth {} of world {} lies outside H", w.truth(), w.id())));
        }
        Ok(Self {
            name,
            hypothesis_space,
            alphabet,
            worlds,
            loss,
            probes: Vec::new(),
            branch_truth: None,
        })
    }

    /// Extra hypotheses used to spot-check uniqueness of the zero-loss
    /// hypothesis when H is infinite.
    pub fn with_probes(mut self, probes: Vec<Hypothesis>) -> Self {
        self.probes = probes;
        self
    }

    /// Declares that each branch determines its world's truth, i.e. worlds
    /// and branches are in one-to-one correspondence.
    pub fn with_branch_truth(mut self, f: impl Fn(&Branch) -> Result<Hypothesis> + Send + Sync + 'static) -> Self {
        self.branch_truth = Some(Arc::new(f));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn hypothesis_space(&self) -> &HypothesisSpace {
        &self.hypothesis_space
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn worlds(&self) -> &WorldFamily {
        &self.worlds
    }

    pub fn world(&self, id: &str) -> Result<&World> {
        self.worlds
            .get(id)
            .ok_or_else(|| Error::Config(format!("problem {} has no world {id:?}", self.name)))
    }

    pub fn loss(&self) -> &dyn LossFunction {
        self.loss.as_ref()
    }

    pub fn probes(&self) -> &[Hypothesis] {
        &self.probes
    }

    /// The truth fixed by `branch`, when the problem declares that
    /// branches determine truths.
    pub fn truth_of_branch(&self, branch: &Branch) -> Option<Result<Hypothesis>> {
        self.branch_truth.as_ref().map(|f| f(branch))
    }

    /// The world a branch corresponds to, carrying `measure`.
    pub fn world_for_branch(&self, id: impl Into<String>, branch: Branch, measure: Option<Measure>) -> Result<World> {
        let truth = self.truth_of_branch(&branch).ok_or_else(|| {
            Error::Precondition(format!("problem {} does not map branches to truths", self.name))
        })??;
        let mut w = World::new(id, branch, truth);
        if let Some(m) = measure {
            w = w.with_measure(m);
        }
        Ok(w)
    }
}

impl fmt::Debug for EmpiricalProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EmpiricalProblem")
            .field("name", &self.name)
            .field("hypothesis_space", &self.hypothesis_space)
            .field("alphabet", &self.alphabet)
            .field("worlds", &self.worlds.len())
            .field("loss", &self.loss.name())
            .finish()
    }
}

/// Loss of a method output in a world; suspension scores `+∞`.
pub fn loss_of(problem: &EmpiricalProblem, out: &MethodOutput, w: &World) -> Result<LossValue> {
    match out {
        MethodOutput::Suspend => Ok(LossValue::Infinite),
        MethodOutput::Hypothesis(h) => {
            if !problem.hypothesis_space.contains(h) {
                return Err(Error::InputDomain(format!("{h} is not in the hypothesis space of {}", problem.name)));
            }
            Ok(LossValue::Finite(problem.loss.eval(h, w)?))
        }
    }
}

/// Per-world outcome of [`validate_problem`].
#[derive(Debug, Clone, Serialize)]
pub struct WorldCheck {
    pub world_id: String,
    pub truth_in_space: bool,
    pub truth_zero_loss: bool,
    /// Other probed hypotheses that also attain zero loss.
    pub rival_zero_loss: Vec<String>,
    pub negative_loss: bool,
    pub alphabet_ok: bool,
    pub measure_consistent: bool,
    pub notes: Vec<String>,
}

impl WorldCheck {
    pub fn passed(&self) -> bool {
        self.truth_in_space
            && self.truth_zero_loss
            && self.rival_zero_loss.is_empty()
            && !self.negative_loss
            && self.alphabet_ok
            && self.measure_consistent
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub problem: String,
    pub worlds: Vec<WorldCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.worlds.iter().all(WorldCheck::passed)
    }

    pub fn uniqueness_violations(&self) -> impl Iterator<Item = &WorldCheck> {
        self.worlds.iter().filter(|w| !w.rival_zero_loss.is_empty())
    }

    pub fn alphabet_violations(&self) -> impl Iterator<Item = &WorldCheck> {
        self.worlds.iter().filter(|w| !w.alphabet_ok)
    }
}

/// Spot-checks zero-loss uniqueness, branch tokens, and measure
/// consistency on `witness_worlds`. Violations are reported, not raised.
pub fn validate_problem(problem: &EmpiricalProblem, witness_worlds: &[World]) -> ValidationReport {
    let mut probes = problem.hypothesis_space.enumerate().unwrap_or_default();
    for p in &problem.probes {
        if !probes.contains(p) {
            probes.push(p.clone());
        }
    }
    let worlds = witness_worlds
        .iter()
        .map(|w| {
            let mut notes = Vec::new();
            let truth_in_space = problem.hypothesis_space.contains(w.truth());
            let truth_loss = problem.loss.eval(w.truth(), w);
            let truth_zero_loss = matches!(&truth_loss, Ok(l) if l.is_zero());
            if let Err(e) = &truth_loss {
                notes.push(format!("truth loss failed: {e}"));
            }
            let mut negative_loss = false;
            let mut rival_zero_loss = Vec::new();
            for h in &probes {
                match problem.loss.eval(h, w) {
                    Ok(l) => {
                        negative_loss |= l.is_negative();
                        if l.is_zero() && h != w.truth() {
                            rival_zero_loss.push(h.to_string());
                        }
                    }
                    Err(e) => notes.push(format!("loss of {h} failed: {e}")),
                }
            }
            let head = w.branch().prefix(VALIDATION_DEPTH);
            let alphabet_ok = problem.alphabet.check(&head).is_ok();
            let measure_consistent = match w.measure() {
                None => true,
                Some(Measure::PointMass(b)) => b.shares_prefix(w.branch(), VALIDATION_DEPTH),
                Some(m) => {
                    let ok = !m.prefix_prob(&head).is_zero();
                    if !ok {
                        notes.push("branch prefix has probability zero under the world's measure".into());
                    }
                    ok
                }
            };
            WorldCheck {
                world_id: w.id().to_string(),
                truth_in_space,
                truth_zero_loss,
                rival_zero_loss,
                negative_loss,
                alphabet_ok,
                measure_consistent,
                notes,
            }
        })
        .collect();
    ValidationReport {
        problem: problem.name.clone(),
        worlds,
    }
}
