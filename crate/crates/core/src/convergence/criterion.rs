use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::LossValue;
use crate::rational::{self, Rational};

/// When an output counts as a success.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SuccessCriterion {
    /// Loss exactly zero.
    Exact,
    /// Loss strictly below ε.
    Within(Rational),
}

impl SuccessCriterion {
    pub fn within(eps: f64) -> Result<Self> {
        let r = rational::from_f64(eps)?;
        Self::within_exact(r)
    }

    pub fn within_exact(eps: Rational) -> Result<Self> {
        if eps <= Rational::zero() {
            return Err(Error::InputDomain(format!("ε must be positive, got {}", rational::to_f64(&eps))));
        }
        Ok(Self::Within(eps))
    }

    pub fn met(&self, loss: &LossValue) -> bool {
        match self {
            Self::Exact => loss.is_zero(),
            Self::Within(eps) => loss.below(eps),
        }
    }

    /// Whether success coincides with zero loss for 0/1 losses.
    pub(crate) fn is_identification_like(&self) -> bool {
        match self {
            Self::Exact => true,
            Self::Within(eps) => *eps <= Rational::one(),
        }
    }
}

impl fmt::Display for SuccessCriterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Exact => f.write_str("exact"),
            Self::Within(eps) => write!(f, "within({})", rational::to_f64(eps)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// Nonstochastic identification.
    I,
    /// Stochastic identification.
    II,
    /// Stochastic approximation.
    III,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::I => "I",
            Self::II => "II",
            Self::III => "III",
        })
    }
}

/// Computation limits for the success-probability engine.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Largest number of length-n sequences enumerated outright.
    pub enumeration_cap: u64,
    /// Largest n for the count-symmetric binomial route.
    pub symmetric_cap: u64,
    /// Largest n for which the binomial route stays in exact rationals;
    /// above it, terms are summed in compensated floating point.
    pub rational_cap: u64,
    /// Monte Carlo trials per (world, stage) when no exact route applies.
    pub trials: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            enumeration_cap: 1 << 20,
            symmetric_cap: 1_000_000,
            rational_cap: 4096,
            trials: 10_000,
        }
    }
}

impl Budget {
    /// A budget that always samples.
    pub fn monte_carlo(trials: u64) -> Self {
        Self {
            enumeration_cap: 0,
            symmetric_cap: 0,
            rational_cap: 0,
            trials,
        }
    }
}

/// Which sample sizes a stochastic mode check evaluates.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StageGrid {
    /// Every n in `1..=T`.
    #[default]
    All,
    /// `k, 2k, ...` up to `T`, always including `T`.
    Every(u64),
    /// An explicit list, clipped to `1..=T`.
    List(Vec<u64>),
}

impl StageGrid {
    pub fn stages(&self, horizon: u64) -> Vec<u64> {
        let mut out: Vec<u64> = match self {
            Self::All => (1..=horizon).collect(),
            Self::Every(k) => {
                let k = (*k).max(1);
                (1..=horizon / k).map(|i| i * k).collect()
            }
            Self::List(ns) => ns.iter().copied().filter(|n| (1..=horizon).contains(n)).collect(),
        };
        if !matches!(self, Self::List(_)) && out.last() != Some(&horizon) && horizon >= 1 {
            out.push(horizon);
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Parameters of a finite-horizon mode check.
#[derive(Debug, Clone)]
pub struct ModeParams {
    pub mode: Mode,
    /// Probability margin δ (modes II and III).
    pub delta: Option<Rational>,
    /// Loss bound ε (mode III).
    pub epsilon: Option<Rational>,
    pub horizon: u64,
    /// World ids to check; `None` means the whole family.
    pub worlds: Option<Vec<String>>,
    pub stages: StageGrid,
    pub budget: Budget,
    pub seed: u64,
}

impl ModeParams {
    pub fn mode_one(horizon: u64) -> Self {
        Self {
            mode: Mode::I,
            delta: None,
            epsilon: None,
            horizon,
            worlds: None,
            stages: StageGrid::All,
            budget: Budget::default(),
            seed: 0,
        }
    }

    pub fn mode_two(delta: f64, horizon: u64) -> Result<Self> {
        Ok(Self {
            mode: Mode::II,
            delta: Some(rational::from_f64(delta)?),
            ..Self::mode_one(horizon)
        })
    }

    pub fn mode_three(epsilon: f64, delta: f64, horizon: u64) -> Result<Self> {
        Ok(Self {
            mode: Mode::III,
            delta: Some(rational::from_f64(delta)?),
            epsilon: Some(rational::from_f64(epsilon)?),
            ..Self::mode_one(horizon)
        })
    }

    pub fn with_worlds(mut self, ids: Vec<String>) -> Self {
        self.worlds = Some(ids);
        self
    }

    pub fn with_stages(mut self, stages: StageGrid) -> Self {
        self.stages = stages;
        self
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon < 1 {
            return Err(Error::InputDomain("horizon must be at least 1".into()));
        }
        if self.mode != Mode::I {
            let delta = self
                .delta
                .as_ref()
                .ok_or_else(|| Error::InputDomain(format!("mode {} needs δ", self.mode)))?;
            if *delta <= Rational::zero() || *delta >= Rational::one() {
                return Err(Error::InputDomain("δ must lie in (0, 1)".into()));
            }
        }
        if self.mode == Mode::III {
            let eps = self
                .epsilon
                .as_ref()
                .ok_or_else(|| Error::InputDomain("mode III needs ε".into()))?;
            if *eps <= Rational::zero() {
                return Err(Error::InputDomain("ε must be positive".into()));
            }
        }
        Ok(())
    }

    /// The success criterion the mode evaluates.
    pub fn criterion(&self) -> SuccessCriterion {
        match (self.mode, &self.epsilon) {
            (Mode::III, Some(eps)) => SuccessCriterion::Within(eps.clone()),
            _ => SuccessCriterion::Exact,
        }
    }
}
