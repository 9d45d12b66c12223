use std::fmt;
use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One data point of an evidence stream.
///
/// Binary problems use `Symbol(0)` and `Symbol(1)`. Classification problems
/// observe labelled examples `(x, y)` with `x` an index into the feature list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Observation {
    Symbol(u32),
    Example { feature: u32, label: bool },
}

impl Observation {
    pub const ZERO: Observation = Observation::Symbol(0);
    pub const ONE: Observation = Observation::Symbol(1);

    pub fn bit(b: bool) -> Self {
        if b {
            Self::ONE
        } else {
            Self::ZERO
        }
    }

    pub fn example(feature: u32, label: bool) -> Self {
        Self::Example { feature, label }
    }

    /// `Some(true)` for `1`, `Some(false)` for `0`, `None` otherwise.
    pub fn as_bit(&self) -> Option<bool> {
        match self {
            Self::Symbol(0) => Some(false),
            Self::Symbol(1) => Some(true),
            _ => None,
        }
    }
}

impl fmt::Display for Observation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Symbol(s) => write!(f, "{s}"),
            Self::Example { feature, label } => write!(f, "(x{feature},{})", u8::from(*label)),
        }
    }
}

/// The token set that spans an evidence tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Alphabet {
    /// `{0, 1}`.
    Binary,
    /// `{0, .., size-1}`.
    Symbols { size: u32 },
    /// `X × {0, 1}` for a feature list of the given length.
    Examples { features: u32 },
}

impl Alphabet {
    pub fn contains(&self, obs: &Observation) -> bool {
        match (self, obs) {
            (Self::Binary, Observation::Symbol(s)) => *s < 2,
            (Self::Symbols { size }, Observation::Symbol(s)) => s < size,
            (Self::Examples { features }, Observation::Example { feature, .. }) => feature < features,
            _ => false,
        }
    }

    /// Number of tokens.
    pub fn size(&self) -> u64 {
        match self {
            Self::Binary => 2,
            Self::Symbols { size } => u64::from(*size),
            Self::Examples { features } => 2 * u64::from(*features),
        }
    }

    /// All tokens in a fixed order.
    pub fn tokens(&self) -> Vec<Observation> {
        match self {
            Self::Binary => vec![Observation::ZERO, Observation::ONE],
            Self::Symbols { size } => (0..*size).map(Observation::Symbol).collect(),
            Self::Examples { features } => (0..*features)
                .flat_map(|x| [Observation::example(x, false), Observation::example(x, true)])
                .collect(),
        }
    }

    /// Checks every token of `seq`, reporting the first offender.
    pub fn check(&self, seq: &[Observation]) -> Result<()> {
        match seq.iter().position(|o| !self.contains(o)) {
            None => Ok(()),
            Some(i) => Err(Error::InputDomain(format!(
                "token {} at position {} is outside the {:?} alphabet",
                seq[i],
                i + 1,
                self
            ))),
        }
    }
}

/// A finite data sequence `e_1 .. e_n`, i.e. a node of the evidence tree.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DataSequence(Vec<Observation>);

impl DataSequence {
    pub fn new(items: Vec<Observation>) -> Self {
        Self(items)
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// Parses a string of `0`/`1` characters.
    pub fn from_bits(bits: &str) -> Result<Self> {
        bits.chars()
            .map(|c| match c {
                '0' => Ok(Observation::ZERO),
                '1' => Ok(Observation::ONE),
                _ => Err(Error::InputDomain(format!("not a bit: {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Self)
    }

    /// The `n`-bit sequence whose `i`-th token is bit `i` of `code`.
    pub fn from_code(code: u64, n: usize) -> Self {
        Self((0..n).map(|i| Observation::bit(code >> i & 1 == 1)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, obs: Observation) {
        self.0.push(obs);
    }

    /// The first `n` items (or the whole sequence when shorter).
    pub fn truncate(&self, n: usize) -> DataSequence {
        Self(self.0[..n.min(self.0.len())].to_vec())
    }

    pub fn into_inner(self) -> Vec<Observation> {
        self.0
    }
}

impl Deref for DataSequence {
    type Target = [Observation];

    fn deref(&self) -> &[Observation] {
        &self.0
    }
}

impl From<Vec<Observation>> for DataSequence {
    fn from(items: Vec<Observation>) -> Self {
        Self(items)
    }
}

impl FromIterator<Observation> for DataSequence {
    fn from_iter<I: IntoIterator<Item = Observation>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl fmt::Display for DataSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.0 {
            write!(f, "{o}")?;
        }
        Ok(())
    }
}

/// Number of `1` tokens in a binary slice.
pub fn count_ones(seq: &[Observation]) -> usize {
    seq.iter().filter(|o| **o == Observation::ONE).count()
}
