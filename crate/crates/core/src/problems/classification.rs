use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::methods::{Erm, ErmConfig};
use crate::model::{
    Alphabet, EmpiricalProblem, ExampleDistribution, Extras, Hypothesis, HypothesisSpace, LossFunction, Measure, World,
    WorldFamily,
};
use crate::rational::Rational;
use crate::rng;

use super::{BINARY_CLASSIFICATION, DEFAULT_WORLD_SEED};

/// A total map from the feature list to `{0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classifier {
    name: String,
    labels: Vec<bool>,
}

impl Classifier {
    /// `labels[x]` is the predicted category of feature `x`.
    pub fn new(name: impl Into<String>, labels: Vec<bool>) -> Self {
        Self {
            name: name.into(),
            labels,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn labels(&self) -> &[bool] {
        &self.labels
    }

    pub fn predict(&self, feature: u32) -> bool {
        self.labels[feature as usize]
    }
}

/// Misclassification probability `D{(x, y) : h(x) != y}`, summed exactly.
pub fn risk(h: &Classifier, d: &ExampleDistribution) -> Rational {
    h.labels
        .iter()
        .enumerate()
        .map(|(x, &predicted)| d.prob(x as u32, !predicted))
        .sum()
}

/// A task `(X, H)` together with the grid of distributions that stands in
/// for "every distribution over the example space".
#[derive(Debug, Clone)]
pub struct ClassificationTask {
    features: Vec<String>,
    classifiers: Arc<[Classifier]>,
    distributions: Vec<Arc<ExampleDistribution>>,
}

impl ClassificationTask {
    pub fn new(features: Vec<String>, classifiers: Vec<Classifier>, distributions: Vec<ExampleDistribution>) -> Result<Self> {
        if features.is_empty() {
            return Err(Error::Config("empty feature list".into()));
        }
        if classifiers.is_empty() {
            return Err(Error::Config("empty classifier pool".into()));
        }
        if let Some(c) = classifiers.iter().find(|c| c.labels.len() != features.len()) {
            return Err(Error::Config(format!(
                "classifier {} labels {} features, expected {}",
                c.name,
                c.labels.len(),
                features.len()
            )));
        }
        if distributions.is_empty() {
            return Err(Error::Config("empty distribution grid".into()));
        }
        if let Some((i, _)) = distributions
            .iter()
            .enumerate()
            .find(|(_, d)| d.features() as usize != features.len())
        {
            return Err(Error::Config(format!("distribution {i} does not cover the feature list")));
        }
        Ok(Self {
            features,
            classifiers: classifiers.into(),
            distributions: distributions.into_iter().map(Arc::new).collect(),
        })
    }

    pub fn features(&self) -> &[String] {
        &self.features
    }

    pub fn classifiers(&self) -> &Arc<[Classifier]> {
        &self.classifiers
    }

    pub fn distributions(&self) -> &[Arc<ExampleDistribution>] {
        &self.distributions
    }

    pub fn risks(&self, d: &ExampleDistribution) -> Vec<Rational> {
        self.classifiers.iter().map(|h| risk(h, d)).collect()
    }

    /// ERM over this task's pool with the given tie-break order.
    pub fn erm(&self, config: ErmConfig) -> Result<Erm> {
        Erm::new(self.classifiers.clone(), self.features.len() as u32, config)
    }
}

/// `Risk(h, D_w) - min_{h' in H} Risk(h', D_w)`.
#[derive(Debug, Clone)]
pub struct ExcessRiskLoss {
    classifiers: Arc<[Classifier]>,
}

impl ExcessRiskLoss {
    pub fn new(classifiers: Arc<[Classifier]>) -> Self {
        Self { classifiers }
    }
}

impl LossFunction for ExcessRiskLoss {
    fn name(&self) -> &str {
        "excess-risk"
    }

    fn eval(&self, h: &Hypothesis, w: &World) -> Result<Rational> {
        let Extras::Distribution(d) = w.extras() else {
            return Err(Error::Precondition(format!("world {} carries no distribution", w.id())));
        };
        let Hypothesis::Classifier(i) = h else {
            return Err(Error::InputDomain(format!("{h} is not a classifier")));
        };
        let h = self
            .classifiers
            .get(*i)
            .ok_or_else(|| Error::InputDomain(format!("classifier index {i} out of range")))?;
        let best = self
            .classifiers
            .iter()
            .map(|c| risk(c, d))
            .min()
            .unwrap_or_else(Rational::zero);
        Ok(risk(h, d) - best)
    }
}

/// Which classifier in the pool is best for prediction? One world per grid
/// distribution D, with IID data drawn from D. When several classifiers tie
/// at minimum risk the lowest-index one is recorded as the world's truth.
pub fn binary_classification(task: &ClassificationTask) -> Result<EmpiricalProblem> {
    binary_classification_seeded(task, DEFAULT_WORLD_SEED)
}

pub fn binary_classification_seeded(task: &ClassificationTask, seed: u64) -> Result<EmpiricalProblem> {
    let worlds = task
        .distributions
        .iter()
        .enumerate()
        .map(|(j, d)| {
            let id = format!("D{j}");
            let risks = task.risks(d);
            let best = risks.iter().min().expect("nonempty pool");
            let truth = risks.iter().position(|r| r == best).expect("minimum is attained");
            let measure = Measure::Examples(d.clone());
            let branch = measure
                .sampler(rng::stream_key(&[seed, rng::label_key(&id)]))
                .with_id(format!("{id}/realized"));
            World::new(id, branch, Hypothesis::Classifier(truth))
                .with_measure(measure)
                .with_extras(Extras::Distribution(d.clone()))
        })
        .collect();
    EmpiricalProblem::new(
        BINARY_CLASSIFICATION,
        HypothesisSpace::Classifiers {
            count: task.classifiers.len(),
        },
        Alphabet::Examples {
            features: task.features.len() as u32,
        },
        WorldFamily::listed(worlds),
        Arc::new(ExcessRiskLoss::new(task.classifiers.clone())),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{loss_of, validate_problem, MethodOutput};
    use crate::rational::{int, ratio};

    fn pool() -> Vec<Classifier> {
        vec![
            Classifier::new("all-0", vec![false, false]),
            Classifier::new("all-1", vec![true, true]),
            Classifier::new("identity", vec![true, false]),
        ]
    }

    fn split() -> ExampleDistribution {
        // D uniform on {(a,1), (b,0)}
        ExampleDistribution::from_f64_rows(&[[0.0, 0.5], [0.5, 0.0]]).unwrap()
    }

    #[test]
    fn risk_examples() {
        let d = split();
        let [all0, all1, id] = <[Classifier; 3]>::try_from(pool()).unwrap();
        assert_eq!(risk(&id, &d), int(0));
        assert_eq!(risk(&all0, &d), ratio(1, 2));
        assert_eq!(risk(&all1, &d), ratio(1, 2));
        let only_correct = ExampleDistribution::from_f64_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap();
        assert_eq!(risk(&id, &only_correct), int(0));
    }

    #[test]
    fn excess_risk_world() {
        let task = ClassificationTask::new(vec!["a".into(), "b".into()], pool(), vec![split()]).unwrap();
        let p = binary_classification(&task).unwrap();
        let w = &p.worlds().worlds()[0];
        assert_eq!(w.truth(), &Hypothesis::Classifier(2));
        let out = MethodOutput::Hypothesis(Hypothesis::Classifier(0));
        assert_eq!(loss_of(&p, &out, w).unwrap().to_f64(), 0.5);
        assert!(loss_of(&p, &Hypothesis::Classifier(2).into(), w).unwrap().is_zero());
        assert!(matches!(w.measure(), Some(Measure::Examples(_))));
        assert!(validate_problem(&p, p.worlds().worlds()).passed());
    }

    #[test]
    fn ties_pick_the_lowest_index_and_fail_uniqueness() {
        let uniform = ExampleDistribution::from_f64_rows(&[[0.25, 0.25], [0.25, 0.25]]).unwrap();
        let task = ClassificationTask::new(vec!["a".into(), "b".into()], pool(), vec![uniform]).unwrap();
        let p = binary_classification(&task).unwrap();
        let w = &p.worlds().worlds()[0];
        assert_eq!(w.truth(), &Hypothesis::Classifier(0));
        let report = validate_problem(&p, p.worlds().worlds());
        assert_eq!(report.uniqueness_violations().count(), 1);
    }

    #[test]
    fn configuration_errors() {
        let d = split();
        assert!(ClassificationTask::new(vec![], pool(), vec![d.clone()]).is_err());
        assert!(ClassificationTask::new(vec!["a".into(), "b".into()], vec![], vec![d.clone()]).is_err());
        assert!(ClassificationTask::new(vec!["a".into()], pool(), vec![d]).is_err());
    }
}
