//! Domain vocabulary: observations, branches, measures, worlds, problems,
//! and inference methods.

pub mod branch;
pub mod hypothesis;
pub mod measure;
pub mod method;
pub mod observation;
pub mod problem;
pub mod world;

pub use branch::{Branch, Search};
pub use hypothesis::{Hypothesis, HypothesisSpace, LossValue, MethodOutput};
pub use measure::{Bias, CustomMeasure, ExampleDistribution, Measure, MeasureKind};
pub use method::{apply_method, output_at, outputs_along, InferenceMethod};
pub use observation::{count_ones, Alphabet, DataSequence, Observation};
pub use problem::{
    loss_of, validate_problem, AbsoluteBiasLoss, EmpiricalProblem, IdentificationLoss, LossFunction, ValidationReport,
    WorldCheck,
};
pub use world::{Extras, World, WorldFamily};
