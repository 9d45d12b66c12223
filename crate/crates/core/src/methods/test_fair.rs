use crate::error::Result;
use crate::model::{count_ones, Alphabet, DataSequence, Hypothesis, InferenceMethod, MethodOutput, Observation};

/// Answers `Fair` when the observed frequency of `1`s is within `n^(-1/4)`
/// of one half (strictly), `Unfair` otherwise, and suspends on no data.
///
/// With `k` ones, `|k/n - 1/2| < n^(-1/4)` is equivalent to
/// `|2k - n|^4 < 16 n^3`, which is decided in integer arithmetic.
#[derive(Debug, Clone, Copy, Default)]
pub struct FairCoinTest;

fn deviation_terms(n: u64, ones: u64) -> Option<(u128, u128)> {
    let d = u128::from((2 * ones).abs_diff(n));
    let n = u128::from(n);
    let lhs = d.checked_mul(d)?.checked_mul(d)?.checked_mul(d);
    let rhs = n.checked_mul(n)?.checked_mul(n)?.checked_mul(16)?;
    // a deviation too large to represent is certainly past the threshold
    Some((lhs.unwrap_or(u128::MAX), rhs))
}

/// Whether `|k/n - 1/2|` equals `n^(-1/4)` exactly.
pub fn on_threshold(n: u64, ones: u64) -> bool {
    n > 0 && matches!(deviation_terms(n, ones), Some((l, r)) if l == r)
}

impl InferenceMethod for FairCoinTest {
    fn name(&self) -> &str {
        super::FAIR_COIN_TEST
    }

    fn alphabet(&self) -> Alphabet {
        Alphabet::Binary
    }

    fn decide(&self, seq: &[Observation]) -> MethodOutput {
        self.decide_counts(seq.len() as u64, count_ones(seq) as u64).unwrap()
    }

    fn count_symmetric(&self) -> bool {
        true
    }

    fn decide_counts(&self, n: u64, ones: u64) -> Option<MethodOutput> {
        if n == 0 {
            return Some(MethodOutput::Suspend);
        }
        let fair = match deviation_terms(n, ones) {
            Some((lhs, rhs)) => lhs < rhs,
            None => {
                let dev = (ones as f64 / n as f64 - 0.5).abs();
                dev < (n as f64).powf(-0.25)
            }
        };
        Some(if fair { Hypothesis::FAIR } else { Hypothesis::UNFAIR }.into())
    }
}

pub fn fair_coin_test(seq: &DataSequence) -> Result<MethodOutput> {
    super::apply(&FairCoinTest, seq)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let s = DataSequence::from_bits("1010").unwrap();
        assert_eq!(fair_coin_test(&s).unwrap(), Hypothesis::FAIR.into());
        let ones16 = DataSequence::from_bits(&"1".repeat(16)).unwrap();
        assert_eq!(fair_coin_test(&ones16).unwrap(), Hypothesis::UNFAIR.into());
        assert!(on_threshold(16, 16));
        assert_eq!(fair_coin_test(&DataSequence::empty()).unwrap(), MethodOutput::Suspend);
    }

    #[test]
    fn integer_rule_matches_float_rule_away_from_the_boundary() {
        for n in 1..400u64 {
            for k in 0..=n {
                let dev = (k as f64 / n as f64 - 0.5).abs();
                let thr = (n as f64).powf(-0.25);
                if (dev - thr).abs() < 1e-12 {
                    continue;
                }
                let want = if dev < thr { Hypothesis::FAIR } else { Hypothesis::UNFAIR };
                assert_eq!(FairCoinTest.decide_counts(n, k).unwrap(), want.into(), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn threshold_strictly_decreases() {
        let mut prev = f64::INFINITY;
        for n in 1..=1_000_000u64 {
            let t = (n as f64).powf(-0.25);
            assert!(t < prev, "n={n}");
            prev = t;
        }
    }

    #[test]
    fn boundary_cases_follow_strict_inequality() {
        // Equality needs n to be a perfect fourth power; scan small n for every hit.
        let hits: Vec<(u64, u64)> = (1..=256u64)
            .flat_map(|n| (0..=n).map(move |k| (n, k)))
            .filter(|&(n, k)| on_threshold(n, k))
            .collect();
        assert!(hits.contains(&(16, 16)) && hits.contains(&(16, 0)));
        for (n, k) in hits {
            assert_eq!(FairCoinTest.decide_counts(n, k).unwrap(), Hypothesis::UNFAIR.into());
        }
    }
}
