//! Infinite data streams.
//!
//! A branch is a total function from 1-based indices to observations.
//! Deterministic streams are stored as a canonical "lasso" (a finite prefix
//! followed by a repeating cycle), which makes equality of two infinite
//! streams decidable. Stochastic streams are realized lazily from a measure
//! and a stream key.

use std::fmt;
use std::sync::Arc;

use rand_chacha::ChaCha8Rng;
use rand_core::RngCore;

use super::measure::Measure;
use super::observation::{DataSequence, Observation};
use crate::rng;

/// Outcome of scanning a branch for a token.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Search {
    /// First matching 1-based index.
    Found(u64),
    /// Provably absent from the whole stream.
    Never,
    /// Not found within the scan limit and absence cannot be proven.
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Lasso {
    prefix: Vec<Observation>,
    cycle: Vec<Observation>,
}

impl Lasso {
    fn canonical(mut prefix: Vec<Observation>, mut cycle: Vec<Observation>) -> Self {
        assert!(!cycle.is_empty(), "a lasso needs a nonempty cycle");
        let len = cycle.len();
        if let Some(p) = (1..=len).find(|p| len.is_multiple_of(*p) && (0..len).all(|i| cycle[i] == cycle[i % p])) {
            cycle.truncate(p);
        }
        while prefix.last().is_some_and(|o| o == cycle.last().unwrap()) {
            prefix.pop();
            cycle.rotate_right(1);
        }
        Self { prefix, cycle }
    }

    fn token(&self, index: u64) -> Observation {
        let i = (index - 1) as usize;
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }
}

type TokenFn = dyn Fn(u64) -> Observation + Send + Sync;

#[derive(Clone)]
enum Source {
    Lasso(Arc<Lasso>),
    Sampled { measure: Arc<Measure>, key: u64 },
    Func(Arc<TokenFn>),
}

/// An infinite data sequence with a stable identifier.
#[derive(Clone)]
pub struct Branch {
    id: Arc<str>,
    source: Source,
}

impl Branch {
    /// `prefix` followed by `cycle` repeated forever.
    pub fn lasso(id: impl Into<Arc<str>>, prefix: Vec<Observation>, cycle: Vec<Observation>) -> Self {
        Self {
            id: id.into(),
            source: Source::Lasso(Arc::new(Lasso::canonical(prefix, cycle))),
        }
    }

    pub fn constant(id: impl Into<Arc<str>>, token: Observation) -> Self {
        Self::lasso(id, Vec::new(), vec![token])
    }

    pub fn periodic(id: impl Into<Arc<str>>, pattern: Vec<Observation>) -> Self {
        Self::lasso(id, Vec::new(), pattern)
    }

    /// `1^(k-1) 0 1 1 1 ...`: the first `0` sits at position `k`.
    pub fn first_zero_at(k: u64) -> Self {
        assert!(k >= 1, "positions are 1-based");
        let mut prefix = vec![Observation::ONE; (k - 1) as usize];
        prefix.push(Observation::ZERO);
        Self::lasso(format!("first-0-at-{k}"), prefix, vec![Observation::ONE])
    }

    pub fn all_ones() -> Self {
        Self::constant("ones", Observation::ONE)
    }

    pub fn alternating() -> Self {
        Self::periodic("alt-10", vec![Observation::ONE, Observation::ZERO])
    }

    /// A stream realized from `measure` under stream `key`.
    pub(crate) fn sampled(measure: Measure, key: u64) -> Self {
        Self {
            id: format!("sample-{key:016x}").into(),
            source: Source::Sampled { measure: Arc::new(measure), key },
        }
    }

    /// Arbitrary generator; it must be a pure function of the index.
    pub fn from_fn(id: impl Into<Arc<str>>, f: impl Fn(u64) -> Observation + Send + Sync + 'static) -> Self {
        Self {
            id: id.into(),
            source: Source::Func(Arc::new(f)),
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn with_id(mut self, id: impl Into<Arc<str>>) -> Self {
        self.id = id.into();
        self
    }

    /// The token at 1-based `index`.
    pub fn token(&self, index: u64) -> Observation {
        assert!(index >= 1, "branch indices are 1-based");
        match &self.source {
            Source::Lasso(l) => l.token(index),
            Source::Func(f) => f(index),
            Source::Sampled { measure, key } => {
                if measure.is_iid() {
                    let mut rng = rng::stream(*key);
                    rng.set_word_pos(2 * u128::from(index - 1));
                    measure.draw(&[], rng.next_u64())
                } else {
                    *self.prefix(index as usize).last().unwrap()
                }
            }
        }
    }

    /// The first `n` observations.
    pub fn prefix(&self, n: usize) -> DataSequence {
        let mut out = Vec::with_capacity(n);
        self.fill_prefix(n, &mut out);
        out.into()
    }

    /// Overwrites `buf` with the first `n` observations.
    pub fn fill_prefix(&self, n: usize, buf: &mut Vec<Observation>) {
        buf.clear();
        buf.extend(self.iter().take(n));
    }

    pub fn iter(&self) -> BranchIter<'_> {
        let rng = match &self.source {
            Source::Sampled { key, .. } => Some(rng::stream(*key)),
            _ => None,
        };
        BranchIter {
            branch: self,
            next_index: 1,
            rng,
            history: Vec::new(),
        }
    }

    /// Scans for the first token satisfying `pred`, up to `limit` tokens
    /// for streams whose structure cannot settle the question outright.
    pub fn find(&self, pred: impl Fn(&Observation) -> bool, limit: u64) -> Search {
        if let Source::Lasso(l) = &self.source {
            return match l.prefix.iter().chain(&l.cycle).position(&pred) {
                Some(i) => Search::Found(i as u64 + 1),
                None => Search::Never,
            };
        }
        match self.iter().take(limit as usize).position(|o| pred(&o)) {
            Some(i) => Search::Found(i as u64 + 1),
            None => Search::Unknown,
        }
    }

    /// Equality of the two infinite streams when it can be decided
    /// structurally; `false` means "not proven equal".
    pub fn provably_equal(&self, other: &Branch) -> bool {
        match (&self.source, &other.source) {
            (Source::Lasso(a), Source::Lasso(b)) => a == b,
            (Source::Sampled { measure: ma, key: ka }, Source::Sampled { measure: mb, key: kb }) => {
                ka == kb && ma.describe() == mb.describe()
            }
            (Source::Func(a), Source::Func(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }

    /// Whether the first `n` tokens agree.
    pub fn shares_prefix(&self, other: &Branch, n: usize) -> bool {
        self.iter().take(n).eq(other.iter().take(n))
    }

    pub fn is_deterministic_pattern(&self) -> bool {
        matches!(self.source, Source::Lasso(_))
    }
}

impl fmt::Debug for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head: String = self.iter().take(8).map(|o| o.to_string()).collect();
        write!(f, "Branch({}: {head}...)", self.id)
    }
}

/// Infinite iterator over a branch's tokens.
pub struct BranchIter<'a> {
    branch: &'a Branch,
    next_index: u64,
    rng: Option<ChaCha8Rng>,
    history: Vec<Observation>,
}

impl Iterator for BranchIter<'_> {
    type Item = Observation;

    fn next(&mut self) -> Option<Observation> {
        let index = self.next_index;
        self.next_index += 1;
        let obs = match &self.branch.source {
            Source::Lasso(l) => l.token(index),
            Source::Func(f) => f(index),
            Source::Sampled { measure, .. } => {
                let u = self.rng.as_mut().expect("sampled branches carry a stream").next_u64();
                if measure.is_iid() {
                    measure.draw(&[], u)
                } else {
                    let o = measure.draw(&self.history, u);
                    self.history.push(o);
                    o
                }
            }
        };
        Some(obs)
    }
}
