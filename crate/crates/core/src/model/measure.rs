//! Probability measures over the evidence tree.
//!
//! Only tree measures of a few declared kinds are supported. Every kind
//! exposes exact conditional child probabilities, so `prefix_prob` is an
//! exact rational, and a sampler that turns 64-bit uniforms into tokens.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand_core::RngCore;
use serde::Serialize;

use super::branch::Branch;
use super::observation::{Alphabet, Observation};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

const TWO_POW_64: u128 = 1 << 64;

/// `floor(p * 2^64)` for a probability `p`; a uniform `u64` falls below it
/// with probability `p` up to `2^-64`.
fn scaled_threshold(p: &Rational) -> u128 {
    let scaled = (p * Rational::from_integer(BigInt::from(TWO_POW_64))).floor();
    scaled.to_integer().to_u128().unwrap_or(TWO_POW_64).min(TWO_POW_64)
}

/// A coin bias θ, with its sampling threshold precomputed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bias {
    theta: Rational,
    threshold: u128,
}

impl Bias {
    pub fn new(theta: Rational) -> Result<Self> {
        if !rational::is_probability(&theta) {
            return Err(Error::InputDomain(format!("bias {} outside [0, 1]", rational::to_f64(&theta))));
        }
        let threshold = scaled_threshold(&theta);
        Ok(Self { theta, threshold })
    }

    pub fn from_f64(theta: f64) -> Result<Self> {
        Self::new(rational::from_f64(theta)?)
    }

    pub fn theta(&self) -> &Rational {
        &self.theta
    }

    pub fn sample(&self, u: u64) -> Observation {
        Observation::bit(u128::from(u) < self.threshold)
    }
}

/// A distribution D over the example space `X × {0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExampleDistribution {
    /// `mass[2x + y] = D(x, y)`.
    mass: Vec<Rational>,
    cumulative: Vec<u128>,
}

impl ExampleDistribution {
    /// Builds D from rows `[D(x, 0), D(x, 1)]`. The table must be
    /// nonnegative and sum to 1 within `1e-12`; it is then renormalized
    /// so the stored masses sum to exactly 1.
    pub fn new(rows: Vec<[Rational; 2]>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Config("distribution over an empty feature list".into()));
        }
        let mass: Vec<Rational> = rows.into_iter().flatten().collect();
        if mass.iter().any(|m| *m < Rational::zero()) {
            return Err(Error::Config("negative probability mass".into()));
        }
        let total: Rational = mass.iter().sum();
        if (rational::to_f64(&total) - 1.0).abs() > 1e-12 {
            return Err(Error::Config(format!(
                "distribution sums to {}, not 1",
                rational::to_f64(&total)
            )));
        }
        let mass: Vec<Rational> = mass.into_iter().map(|m| m / &total).collect();
        let mut acc = Rational::zero();
        let mut cumulative: Vec<u128> = mass
            .iter()
            .map(|m| {
                acc += m;
                scaled_threshold(&acc)
            })
            .collect();
        *cumulative.last_mut().unwrap() = TWO_POW_64;
        Ok(Self { mass, cumulative })
    }

    pub fn from_f64_rows(rows: &[[f64; 2]]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|[a, b]| Ok([rational::from_f64(*a)?, rational::from_f64(*b)?]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(rows)
    }

    pub fn features(&self) -> u32 {
        (self.mass.len() / 2) as u32
    }

    /// `D(x, y)`; zero outside the example space.
    pub fn prob(&self, feature: u32, label: bool) -> Rational {
        self.mass
            .get(2 * feature as usize + usize::from(label))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    fn prob_of(&self, obs: &Observation) -> Rational {
        match obs {
            Observation::Example { feature, label } => self.prob(*feature, *label),
            Observation::Symbol(_) => Rational::zero(),
        }
    }

    pub fn sample(&self, u: u64) -> Observation {
        let j = self.cumulative.partition_point(|&c| c <= u128::from(u));
        Observation::example((j / 2) as u32, j % 2 == 1)
    }
}

/// A user-supplied tree measure.
pub trait CustomMeasure: Send + Sync + fmt::Debug {
    fn name(&self) -> String;
    /// `P(next = token | prefix)`.
    fn child_prob(&self, prefix: &[Observation], token: &Observation) -> Rational;
    /// Turns a uniform `u64` into the next token given `prefix`.
    fn draw(&self, prefix: &[Observation], u: u64) -> Observation;
    fn countably_additive(&self) -> bool {
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MeasureKind {
    IidBernoulli,
    IidExamples,
    PointMass,
    Custom,
}

/// A probability measure over infinite branches, given by its values on
/// the finite prefixes.
#[derive(Clone)]
pub enum Measure {
    Bernoulli(Bias),
    Examples(Arc<ExampleDistribution>),
    PointMass(Branch),
    Custom(Arc<dyn CustomMeasure>),
}

impl Measure {
    pub fn bernoulli(theta: Rational) -> Result<Self> {
        Ok(Self::Bernoulli(Bias::new(theta)?))
    }

    pub fn kind(&self) -> MeasureKind {
        match self {
            Self::Bernoulli(_) => MeasureKind::IidBernoulli,
            Self::Examples(_) => MeasureKind::IidExamples,
            Self::PointMass(_) => MeasureKind::PointMass,
            Self::Custom(_) => MeasureKind::Custom,
        }
    }

    pub fn is_iid(&self) -> bool {
        matches!(self, Self::Bernoulli(_) | Self::Examples(_))
    }

    pub fn countably_additive(&self) -> bool {
        match self {
            Self::Custom(c) => c.countably_additive(),
            _ => true,
        }
    }

    /// The token set the measure lives on.
    pub fn alphabet_hint(&self) -> Option<Alphabet> {
        match self {
            Self::Bernoulli(_) => Some(Alphabet::Binary),
            Self::Examples(d) => Some(Alphabet::Examples { features: d.features() }),
            _ => None,
        }
    }

    /// `P(next = token | prefix)`.
    pub fn child_prob(&self, prefix: &[Observation], token: &Observation) -> Rational {
        match self {
            Self::Bernoulli(b) => match token.as_bit() {
                Some(true) => b.theta.clone(),
                Some(false) => Rational::one() - &b.theta,
                None => Rational::zero(),
            },
            Self::Examples(d) => d.prob_of(token),
            Self::PointMass(branch) => {
                let on_branch = prefix.iter().zip(branch.iter()).all(|(a, b)| *a == b);
                if on_branch && branch.token(prefix.len() as u64 + 1) == *token {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }
            Self::Custom(c) => c.child_prob(prefix, token),
        }
    }

    /// Probability of the cylinder set of branches extending `seq`.
    pub fn prefix_prob(&self, seq: &[Observation]) -> Rational {
        match self {
            Self::PointMass(branch) => {
                if seq.iter().zip(branch.iter()).all(|(a, b)| *a == b) {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }
            _ => {
                let mut p = Rational::one();
                for (i, tok) in seq.iter().enumerate() {
                    p *= self.child_prob(&seq[..i], tok);
                    if p.is_zero() {
                        break;
                    }
                }
                p
            }
        }
    }

    /// Next token given `prefix` and a uniform draw.
    pub fn draw(&self, prefix: &[Observation], u: u64) -> Observation {
        match self {
            Self::Bernoulli(b) => b.sample(u),
            Self::Examples(d) => d.sample(u),
            Self::PointMass(branch) => branch.token(prefix.len() as u64 + 1),
            Self::Custom(c) => c.draw(prefix, u),
        }
    }

    /// A branch distributed according to this measure, realized from the
    /// stream `key`.
    pub fn sampler(&self, key: u64) -> Branch {
        match self {
            Self::PointMass(branch) => branch.clone(),
            Self::Bernoulli(b) if b.theta.is_one() => Branch::all_ones(),
            Self::Bernoulli(b) if b.theta.is_zero() => Branch::constant("zeros", Observation::ZERO),
            _ => Branch::sampled(self.clone(), key),
        }
    }

    /// Writes the first `n` tokens of the branch realized from stream
    /// `key` into `buf`. Agrees with `self.sampler(key).prefix(n)`.
    pub fn fill_sample(&self, key: u64, n: usize, buf: &mut Vec<Observation>) {
        buf.clear();
        let mut rng = crate::rng::stream(key);
        for _ in 0..n {
            let tok = self.draw(buf, rng.next_u64());
            buf.push(tok);
        }
    }

    /// Short human-readable description, also used as an identity tag.
    pub fn describe(&self) -> String {
        match self {
            Self::Bernoulli(b) => format!("iid-bernoulli({})", b.theta),
            Self::Examples(d) => {
                let cells: Vec<String> = d.mass.iter().map(|m| m.to_string()).collect();
                format!("iid-examples[{}]", cells.join(","))
            }
            Self::PointMass(branch) => format!("point-mass({})", branch.id()),
            Self::Custom(c) => format!("custom({})", c.name()),
        }
    }
}

impl fmt::Debug for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}
