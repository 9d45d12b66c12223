//! The evaluative engine: success probabilities, mode checks, analytic
//! bounds, success sets, and unachievability witnesses.

mod bounds;
mod criterion;
mod curve;
mod exact;
mod lock;
mod mc;
mod mode;
mod witness;

pub use bounds::{
    analytic_certificate, analytic_lower_bound, bernoulli_bound, bernoulli_bound_exact, fair_test_bound,
    required_sample_size, required_sample_size_exact,
};
pub use criterion::{Budget, Mode, ModeParams, StageGrid, SuccessCriterion};
pub use curve::{success_curve, CurvePoint, SuccessCurve};
pub use exact::{exact_success_prob, exact_success_prob_enumerated, exact_success_prob_with, ExactRoute};
pub use lock::{
    horizon_lock_time, lock_time, sample_lock_times, success_set_curve, success_set_monotone, success_set_prob,
    success_set_prob_mc, SuccessSetEstimate,
};
pub use mc::{mc_success_prob, McEstimate};
pub use mode::{check_mode, Status, Verdict, WorldStatus, WorldVerdict};
pub use witness::{
    cardinality_witness, underdetermination_witness, verify_underdetermination, CardinalityWitness,
    UnderdeterminationCheck, MAX_CARDINALITY_DEPTH,
};
