use std::sync::Arc;

use crate::error::{Error, Result};
use crate::model::{Alphabet, DataSequence, Hypothesis, InferenceMethod, MethodOutput, Observation};
use crate::problems::Classifier;

/// Fixed enumeration of the candidate pool used to break ties.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErmConfig {
    pub hypothesis_order: Vec<usize>,
}

impl ErmConfig {
    /// The identity order `0..count`.
    pub fn natural(count: usize) -> Self {
        Self {
            hypothesis_order: (0..count).collect(),
        }
    }

    fn validate(&self, count: usize) -> Result<()> {
        let mut seen = vec![false; count];
        for &i in &self.hypothesis_order {
            if i >= count || std::mem::replace(&mut seen[i], true) {
                return Err(Error::Config(format!(
                    "hypothesis order {:?} is not a permutation of 0..{count}",
                    self.hypothesis_order
                )));
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Config(format!(
                "hypothesis order {:?} does not cover all {count} classifiers",
                self.hypothesis_order
            )));
        }
        Ok(())
    }
}

/// Empirical risk minimization over a finite classifier pool.
#[derive(Debug, Clone)]
pub struct Erm {
    classifiers: Arc<[Classifier]>,
    features: u32,
    config: ErmConfig,
}

impl Erm {
    pub fn new(classifiers: Arc<[Classifier]>, features: u32, config: ErmConfig) -> Result<Self> {
        if classifiers.is_empty() {
            return Err(Error::Config("ERM needs a nonempty classifier pool".into()));
        }
        config.validate(classifiers.len())?;
        if let Some(c) = classifiers.iter().find(|c| c.labels().len() != features as usize) {
            return Err(Error::Config(format!("classifier {} is not total on the feature list", c.name())));
        }
        Ok(Self {
            classifiers,
            features,
            config,
        })
    }

    pub fn config(&self) -> &ErmConfig {
        &self.config
    }

    /// Misclassification count of each classifier, indexed by pool position.
    pub fn empirical_errors(&self, seq: &[Observation]) -> Vec<usize> {
        let mut counts = vec![[0usize; 2]; self.features as usize];
        for obs in seq {
            if let Observation::Example { feature, label } = obs {
                counts[*feature as usize][usize::from(*label)] += 1;
            }
        }
        self.classifiers
            .iter()
            .map(|c| {
                c.labels()
                    .iter()
                    .zip(&counts)
                    .map(|(&predicted, cell)| cell[usize::from(!predicted)])
                    .sum()
            })
            .collect()
    }
}

impl InferenceMethod for Erm {
    fn name(&self) -> &str {
        super::ERM
    }

    fn alphabet(&self) -> Alphabet {
        Alphabet::Examples { features: self.features }
    }

    fn decide(&self, seq: &[Observation]) -> MethodOutput {
        let errors = self.empirical_errors(seq);
        let best = self
            .config
            .hypothesis_order
            .iter()
            .copied()
            .min_by_key(|&i| errors[i])
            .expect("validated nonempty order");
        Hypothesis::Classifier(best).into()
    }
}

pub fn erm(seq: &DataSequence, method: &Erm) -> Result<MethodOutput> {
    super::apply(method, seq)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pool() -> Erm {
        let cs: Arc<[Classifier]> = vec![
            Classifier::new("all-0", vec![false, false]),
            Classifier::new("all-1", vec![true, true]),
            Classifier::new("identity", vec![true, false]),
        ]
        .into();
        Erm::new(cs, 2, ErmConfig::natural(3)).unwrap()
    }

    fn data(pairs: &[(u32, bool)]) -> DataSequence {
        pairs.iter().map(|&(x, y)| Observation::example(x, y)).collect()
    }

    #[test]
    fn examples() {
        let m = pool();
        let d = data(&[(0, true), (1, false)]);
        assert_eq!(m.empirical_errors(&d), vec![1, 1, 0]);
        assert_eq!(erm(&d, &m).unwrap(), Hypothesis::Classifier(2).into());
        let d = data(&[(0, true), (0, true), (1, true)]);
        assert_eq!(erm(&d, &m).unwrap(), Hypothesis::Classifier(1).into());
        assert_eq!(erm(&DataSequence::empty(), &m).unwrap(), Hypothesis::Classifier(0).into());
        assert!(erm(&data(&[(2, true)]), &m).is_err());
    }

    #[test]
    fn tie_break_follows_declared_order() {
        let cs = pool().classifiers.clone();
        let m = Erm::new(cs, 2, ErmConfig { hypothesis_order: vec![2, 1, 0] }).unwrap();
        assert_eq!(erm(&DataSequence::empty(), &m).unwrap(), Hypothesis::Classifier(2).into());
    }

    #[test]
    fn rejects_bad_orders() {
        let cs = pool().classifiers.clone();
        assert!(Erm::new(cs.clone(), 2, ErmConfig { hypothesis_order: vec![0, 0, 1] }).is_err());
        assert!(Erm::new(cs.clone(), 2, ErmConfig { hypothesis_order: vec![0, 1] }).is_err());
        assert!(Erm::new(cs, 3, ErmConfig::natural(3)).is_err());
    }
}
