//! Finite-horizon convergence checks for empirical problems.
//!
//! An empirical problem is a set of candidate hypotheses, a family of
//! possible worlds (each an infinite data stream plus the hypothesis it
//! makes true, optionally with a probability measure over streams), and a
//! loss. An inference method maps finite data prefixes to hypotheses. The
//! [`convergence`] engine measures how often, and from which sample size
//! on, a method attains zero or ε-small loss, and produces witnesses when
//! a mode of convergence is out of reach.

pub mod convergence;
pub mod error;
pub mod methods;
pub mod model;
pub mod problems;
pub mod rational;
pub mod rng;

pub use convergence::{check_mode, Budget, Mode, ModeParams, StageGrid, Status, SuccessCriterion, Verdict};
pub use error::{Error, Result};
pub use model::{EmpiricalProblem, Hypothesis, InferenceMethod, MethodOutput, World};
pub use rational::Rational;
