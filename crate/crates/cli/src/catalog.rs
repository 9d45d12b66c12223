//! Name-to-constructor catalogs for problems and methods.

use std::sync::Arc;

use convlab_core::methods::{self, ErmConfig, FairCoinTest, FrequencyEstimator, RavenRule};
use convlab_core::model::{Alphabet, ExampleDistribution, InferenceMethod};
use convlab_core::problems::{self, Classifier, ClassificationTask};
use convlab_core::EmpiricalProblem;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::config::{LoadedConfig, NamedBlock};
use crate::error::CliResult;

pub const PROBLEMS: [&str; 5] = [
    problems::EASY_RAVEN,
    problems::FINE_GRAINED_RAVEN,
    problems::FAIR_COIN,
    problems::COIN_BIAS,
    problems::BINARY_CLASSIFICATION,
];

pub const METHODS: [&str; 4] = [methods::RAVEN_RULE, methods::FAIR_COIN_TEST, methods::FREQUENCY_ESTIMATOR, methods::ERM];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RavenParams {
    #[serde(default = "default_first_zero")]
    first_zero: [u64; 2],
    #[serde(default)]
    literal: bool,
}

fn default_first_zero() -> [u64; 2] {
    [1, 20]
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FineGrainedParams {
    p_grid: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoinParams {
    #[serde(default = "problems::default_theta_grid")]
    theta_grid: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassifierSpec {
    name: String,
    labels: Vec<u8>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassificationParams {
    features: Vec<String>,
    classifiers: Vec<ClassifierSpec>,
    /// One table per world, rows indexed by feature, columns by label.
    distributions: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ErmParams {
    hypothesis_order: Option<Vec<usize>>,
}

fn params<T: DeserializeOwned>(cfg: &LoadedConfig, block: &NamedBlock) -> CliResult<T> {
    let value = if block.params.is_null() {
        serde_json::Value::Object(Default::default())
    } else {
        block.params.clone()
    };
    serde_json::from_value(value).map_err(|e| cfg.error_at(&block.name, format!("bad params for {}: {e}", block.name)))
}

fn classification_task(cfg: &LoadedConfig, p: &ClassificationParams) -> CliResult<ClassificationTask> {
    let classifiers = p
        .classifiers
        .iter()
        .map(|c| {
            if c.labels.iter().any(|&l| l > 1) {
                return Err(cfg.error_at(&c.name, format!("labels of {} must be 0 or 1", c.name)));
            }
            Ok(Classifier::new(c.name.clone(), c.labels.iter().map(|&l| l == 1).collect()))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let dists = p
        .distributions
        .iter()
        .map(|rows| ExampleDistribution::from_f64_rows(rows).map_err(|e| cfg.error_at("distributions", e.to_string())))
        .collect::<CliResult<Vec<_>>>()?;
    ClassificationTask::new(p.features.clone(), classifiers, dists).map_err(|e| cfg.error_at("classifiers", e.to_string()))
}

/// The problem named in `cfg`, with stochastic worlds realized from the
/// experiment seed.
pub fn build_problem(cfg: &LoadedConfig) -> CliResult<EmpiricalProblem> {
    let block = &cfg.experiment.problem;
    let seed = cfg.experiment.seed;
    let bad = |e: convlab_core::Error| cfg.error_at(&block.name, e.to_string());
    match block.name.as_str() {
        problems::EASY_RAVEN => {
            let p: RavenParams = params(cfg, block)?;
            let range = p.first_zero[0]..=p.first_zero[1];
            Ok(if p.literal {
                problems::easy_raven_literal(range)
            } else {
                problems::easy_raven_with(range)
            })
        }
        problems::FINE_GRAINED_RAVEN => {
            let p: FineGrainedParams = params(cfg, block)?;
            problems::fine_grained_raven_seeded(&p.p_grid, seed).map_err(bad)
        }
        problems::FAIR_COIN => {
            let p: CoinParams = params(cfg, block)?;
            problems::fair_coin_seeded(&p.theta_grid, seed).map_err(bad)
        }
        problems::COIN_BIAS => {
            let p: CoinParams = params(cfg, block)?;
            problems::coin_bias_seeded(&p.theta_grid, seed).map_err(bad)
        }
        problems::BINARY_CLASSIFICATION => {
            let p: ClassificationParams = params(cfg, block)?;
            let task = classification_task(cfg, &p)?;
            problems::binary_classification_seeded(&task, seed).map_err(bad)
        }
        other => Err(cfg.error_at(other, format!("unknown problem {other:?}; known: {}", PROBLEMS.join(", ")))),
    }
}

/// The method named in `cfg`, checked against the problem's alphabet.
pub fn build_method(cfg: &LoadedConfig, problem: &EmpiricalProblem) -> CliResult<Arc<dyn InferenceMethod>> {
    let block = &cfg.experiment.method;
    let method: Arc<dyn InferenceMethod> = match block.name.as_str() {
        methods::RAVEN_RULE => Arc::new(RavenRule),
        methods::FAIR_COIN_TEST => Arc::new(FairCoinTest),
        methods::FREQUENCY_ESTIMATOR => Arc::new(FrequencyEstimator),
        methods::ERM => {
            let p: ErmParams = params(cfg, block)?;
            if cfg.experiment.problem.name != problems::BINARY_CLASSIFICATION {
                return Err(cfg.error_at(&block.name, "erm needs a binary-classification problem"));
            }
            let task_params: ClassificationParams = params(cfg, &cfg.experiment.problem)?;
            let task = classification_task(cfg, &task_params)?;
            let order = p
                .hypothesis_order
                .unwrap_or_else(|| (0..task.classifiers().len()).collect());
            let erm = task
                .erm(ErmConfig { hypothesis_order: order })
                .map_err(|e| cfg.error_at("hypothesis_order", e.to_string()))?;
            Arc::new(erm)
        }
        other => {
            return Err(cfg.error_at(other, format!("unknown method {other:?}; known: {}", METHODS.join(", "))));
        }
    };
    if !alphabet_fits(&method.alphabet(), problem.alphabet()) {
        return Err(cfg.error_at(
            &block.name,
            format!("{} is not defined on the data of {}", method.name(), problem.name()),
        ));
    }
    Ok(method)
}

fn alphabet_fits(method: &Alphabet, problem: &Alphabet) -> bool {
    problem.tokens().iter().all(|t| method.contains(t))
}

/// A problem by name with its default parameters.
pub fn default_problem(name: &str) -> Option<EmpiricalProblem> {
    match name {
        problems::EASY_RAVEN => Some(problems::easy_raven()),
        problems::FINE_GRAINED_RAVEN => problems::fine_grained_raven(&[0.3, 0.5, 0.9, 1.0]).ok(),
        problems::FAIR_COIN => problems::fair_coin(&problems::default_theta_grid()).ok(),
        problems::COIN_BIAS => problems::coin_bias(&problems::default_theta_grid()).ok(),
        _ => None,
    }
}

/// A parameter-free method by name.
pub fn default_method(name: &str) -> Option<Arc<dyn InferenceMethod>> {
    match name {
        methods::RAVEN_RULE => Some(Arc::new(RavenRule)),
        methods::FAIR_COIN_TEST => Some(Arc::new(FairCoinTest)),
        methods::FREQUENCY_ESTIMATOR => Some(Arc::new(FrequencyEstimator)),
        _ => None,
    }
}
