use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::rational::{self, Rational};

/// An answer to an empirical question.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Hypothesis {
    /// A categorical answer such as `Yes` or `Fair`.
    Label(&'static str),
    /// A point of a real interval, held exactly.
    Real(Rational),
    /// Index of a classifier in the problem's candidate pool.
    Classifier(usize),
}

impl Hypothesis {
    pub const YES: Hypothesis = Hypothesis::Label("Yes");
    pub const NO: Hypothesis = Hypothesis::Label("No");
    pub const FAIR: Hypothesis = Hypothesis::Label("Fair");
    pub const UNFAIR: Hypothesis = Hypothesis::Label("Unfair");

    pub fn as_real(&self) -> Option<&Rational> {
        match self {
            Self::Real(r) => Some(r),
            _ => None,
        }
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Label(l) => f.write_str(l),
            Self::Real(r) => write!(f, "{}", rational::to_f64(r)),
            Self::Classifier(i) => write!(f, "h{i}"),
        }
    }
}

/// The declared hypothesis set H.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HypothesisSpace {
    Labels(Vec<&'static str>),
    /// Closed interval `[lo, hi]`.
    Interval { lo: Rational, hi: Rational },
    /// Classifiers `0..count` of a classification task.
    Classifiers { count: usize },
}

impl HypothesisSpace {
    pub fn contains(&self, h: &Hypothesis) -> bool {
        match (self, h) {
            (Self::Labels(ls), Hypothesis::Label(l)) => ls.contains(l),
            (Self::Interval { lo, hi }, Hypothesis::Real(r)) => lo <= r && r <= hi,
            (Self::Classifiers { count }, Hypothesis::Classifier(i)) => i < count,
            _ => false,
        }
    }

    /// Every member when H is finite.
    pub fn enumerate(&self) -> Option<Vec<Hypothesis>> {
        match self {
            Self::Labels(ls) => Some(ls.iter().map(|l| Hypothesis::Label(l)).collect()),
            Self::Classifiers { count } => Some((0..*count).map(Hypothesis::Classifier).collect()),
            Self::Interval { .. } => None,
        }
    }

    pub fn is_real(&self) -> bool {
        matches!(self, Self::Interval { .. })
    }
}

/// What an inference method returns: a hypothesis, or suspension (`?`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MethodOutput {
    Hypothesis(Hypothesis),
    Suspend,
}

impl MethodOutput {
    pub fn hypothesis(&self) -> Option<&Hypothesis> {
        match self {
            Self::Hypothesis(h) => Some(h),
            Self::Suspend => None,
        }
    }

    pub fn is_suspend(&self) -> bool {
        matches!(self, Self::Suspend)
    }
}

impl From<Hypothesis> for MethodOutput {
    fn from(h: Hypothesis) -> Self {
        Self::Hypothesis(h)
    }
}

impl fmt::Display for MethodOutput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Hypothesis(h) => h.fmt(f),
            Self::Suspend => f.write_str("?"),
        }
    }
}

/// An extended nonnegative real: an exact finite loss or `+∞`.
///
/// Suspension is scored `+∞`, so it satisfies no success criterion.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LossValue {
    Finite(Rational),
    Infinite,
}

impl LossValue {
    pub fn zero() -> Self {
        Self::Finite(Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Self::Finite(r) if r.is_zero())
    }

    pub fn is_nonnegative(&self) -> bool {
        match self {
            Self::Finite(r) => !r.is_negative(),
            Self::Infinite => true,
        }
    }

    /// Strictly below `bound`.
    pub fn below(&self, bound: &Rational) -> bool {
        match self {
            Self::Finite(r) => r < bound,
            Self::Infinite => false,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Self::Finite(r) => rational::to_f64(r),
            Self::Infinite => f64::INFINITY,
        }
    }
}

impl PartialOrd for LossValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LossValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Self::Finite(a), Self::Finite(b)) => a.cmp(b),
            (Self::Finite(_), Self::Infinite) => Ordering::Less,
            (Self::Infinite, Self::Finite(_)) => Ordering::Greater,
            (Self::Infinite, Self::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for LossValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Finite(r) => write!(f, "{}", rational::to_f64(r)),
            Self::Infinite => f.write_str("inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn interval_membership_is_closed() {
        let h = HypothesisSpace::Interval { lo: int(0), hi: int(1) };
        assert!(h.contains(&Hypothesis::Real(int(0))));
        assert!(h.contains(&Hypothesis::Real(int(1))));
        assert!(!h.contains(&Hypothesis::Real(ratio(11, 10))));
        assert!(!h.contains(&Hypothesis::YES));
        assert!(h.enumerate().is_none());
    }

    #[test]
    fn infinite_loss_is_never_below_anything() {
        assert!(!LossValue::Infinite.below(&int(1_000_000)));
        assert!(LossValue::Infinite > LossValue::Finite(int(5)));
        assert!(LossValue::zero().is_zero());
        assert!(LossValue::Finite(ratio(1, 5)).below(&ratio(3, 10)));
    }
}
