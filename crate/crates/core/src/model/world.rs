use std::sync::Arc;

use super::branch::Branch;
use super::hypothesis::Hypothesis;
use super::measure::{ExampleDistribution, Measure};
use crate::error::Result;
use crate::rational::Rational;
use crate::rng;

/// Truth-determining parameters a world carries besides its branch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extras {
    None,
    /// The coin's true bias θ.
    Bias(Rational),
    /// The example distribution D.
    Distribution(Arc<ExampleDistribution>),
}

/// A possible world: the data stream it produces, the hypothesis true in
/// it, and optionally the chance measure that generates the data.
#[derive(Debug, Clone)]
pub struct World {
    id: String,
    branch: Branch,
    truth: Hypothesis,
    measure: Option<Measure>,
    extras: Extras,
}

impl World {
    pub fn new(id: impl Into<String>, branch: Branch, truth: Hypothesis) -> Self {
        Self {
            id: id.into(),
            branch,
            truth,
            measure: None,
            extras: Extras::None,
        }
    }

    pub fn with_measure(mut self, measure: Measure) -> Self {
        self.measure = Some(measure);
        self
    }

    pub fn with_extras(mut self, extras: Extras) -> Self {
        self.extras = extras;
        self
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn branch(&self) -> &Branch {
        &self.branch
    }

    pub fn truth(&self) -> &Hypothesis {
        &self.truth
    }

    pub fn measure(&self) -> Option<&Measure> {
        self.measure.as_ref()
    }

    pub fn extras(&self) -> &Extras {
        &self.extras
    }

    /// Stream key derived from the id; combined with a master seed it
    /// addresses this world's random draws.
    pub fn key(&self) -> u64 {
        rng::label_key(&self.id)
    }
}

/// The admissible worlds W of a problem, materialized over a finite
/// parameter grid when W is a continuum.
#[derive(Debug, Clone)]
pub struct WorldFamily {
    worlds: Vec<World>,
    grid: Vec<f64>,
}

impl WorldFamily {
    pub fn listed(worlds: Vec<World>) -> Self {
        Self { worlds, grid: Vec::new() }
    }

    /// Runs `generator` over each grid point and concatenates the worlds.
    pub fn generated(grid: &[f64], mut generator: impl FnMut(f64) -> Result<Vec<World>>) -> Result<Self> {
        let mut worlds = Vec::new();
        for &g in grid {
            worlds.extend(generator(g)?);
        }
        Ok(Self {
            worlds,
            grid: grid.to_vec(),
        })
    }

    /// An explicit list that also records the grid it was built from.
    pub fn with_grid(worlds: Vec<World>, grid: &[f64]) -> Self {
        Self {
            worlds,
            grid: grid.to_vec(),
        }
    }

    pub fn push(&mut self, world: World) {
        self.worlds.push(world);
    }

    pub fn worlds(&self) -> &[World] {
        &self.worlds
    }

    /// Parameter grid the family was generated from (empty for lists).
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn get(&self, id: &str) -> Option<&World> {
        self.worlds.iter().find(|w| w.id == id)
    }

    pub fn len(&self) -> usize {
        self.worlds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.worlds.is_empty()
    }
}
