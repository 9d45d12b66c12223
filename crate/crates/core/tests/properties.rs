mod common;

use std::sync::Arc;

use common::{binomial_sum, brute_bernoulli, fair_by_float, q};
use convlab_core::convergence::{
    bernoulli_bound_exact, cardinality_witness, exact_success_prob, exact_success_prob_enumerated,
    required_sample_size_exact, SuccessCriterion,
};
use convlab_core::methods::{ConstantMethod, Erm, ErmConfig, FairCoinTest, FrequencyEstimator, RavenRule};
use convlab_core::model::{
    apply_method, loss_of, output_at, Alphabet, Branch, DataSequence, ExampleDistribution, Hypothesis, InferenceMethod,
    LossValue, Measure, MethodOutput, Observation, World,
};
use convlab_core::problems::{
    coin_bias, default_theta_grid, easy_raven, fair_coin, fine_grained_raven, risk, Classifier, ClassificationTask,
    binary_classification,
};
use convlab_core::Rational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn binary_methods() -> Vec<Box<dyn InferenceMethod>> {
    vec![Box::new(RavenRule), Box::new(FairCoinTest), Box::new(FrequencyEstimator)]
}

fn to_seq(bits: &[bool]) -> DataSequence {
    bits.iter().map(|&b| Observation::bit(b)).collect()
}

/// Rationals in [0, 1] with small denominators.
fn small_prob() -> impl Strategy<Value = Rational> {
    (1i64..=12).prop_flat_map(|d| (0..=d).prop_map(move |n| q(n, d)))
}

/// Interior probabilities with terminating decimal expansions, so they
/// survive a trip through an `f64` grid.
fn decimal_prob() -> impl Strategy<Value = Rational> {
    prop::sample::select(vec![2i64, 4, 5, 8, 10, 20, 25]).prop_flat_map(|d| (1..d).prop_map(move |n| q(n, d)))
}

fn xy() -> [Classifier; 3] {
    [
        Classifier::new("all-0", vec![false, false]),
        Classifier::new("all-1", vec![true, true]),
        Classifier::new("identity", vec![true, false]),
    ]
}

#[test]
fn count_symmetry_is_exhaustive_to_length_twelve() {
    for m in binary_methods() {
        assert!(m.count_symmetric());
        for n in 0..=12usize {
            for code in 0..(1u64 << n) {
                let seq = DataSequence::from_code(code, n);
                let ones = code.count_ones() as u64;
                assert_eq!(m.decide(&seq), m.decide_counts(n as u64, ones).unwrap(), "{} on {seq}", m.name());
            }
        }
    }
}

#[test]
fn fair_rule_matches_float_oracle_off_threshold() {
    for n in 1..=2000u64 {
        for k in 0..=n {
            let dev = (k as f64 / n as f64 - 0.5).abs();
            let t = (n as f64).powf(-0.25);
            if (dev - t).abs() < 1e-9 {
                continue;
            }
            let fair = FairCoinTest.decide_counts(n, k).unwrap() == Hypothesis::FAIR.into();
            assert_eq!(fair, fair_by_float(n, k), "n={n} k={k}");
        }
    }
}

#[test]
fn symmetric_route_equals_enumeration_to_twelve() {
    let bias = coin_bias(&[0.3, 0.5]).unwrap();
    let fair = fair_coin(&[0.3, 0.5]).unwrap();
    let crit = SuccessCriterion::within(0.15).unwrap();
    for n in 0..=12 {
        for id in ["theta=0.3", "theta=0.5"] {
            let w = bias.world(id).unwrap();
            let fast = exact_success_prob(&bias, &FrequencyEstimator, w, n, &crit).unwrap();
            let slow = exact_success_prob_enumerated(&bias, &FrequencyEstimator, w, n, &crit).unwrap();
            assert_eq!(fast.rational.unwrap(), slow);
            let w = fair.world(id).unwrap();
            let fast = exact_success_prob(&fair, &FairCoinTest, w, n, &SuccessCriterion::Exact).unwrap();
            let slow = exact_success_prob_enumerated(&fair, &FairCoinTest, w, n, &SuccessCriterion::Exact).unwrap();
            assert_eq!(fast.rational.unwrap(), slow);
        }
    }
}

#[test]
fn excess_risk_has_zero_minimum_and_nonnegative_values() {
    let grid = [[0.1, 0.4, 0.4, 0.1], [0.25, 0.25, 0.25, 0.25], [0.0, 0.5, 0.5, 0.0], [0.4, 0.1, 0.4, 0.1]];
    let ds = grid
        .iter()
        .map(|r| ExampleDistribution::from_f64_rows(&[[r[0], r[1]], [r[2], r[3]]]).unwrap())
        .collect();
    let task = ClassificationTask::new(vec!["a".into(), "b".into()], xy().to_vec(), ds).unwrap();
    let problem = binary_classification(&task).unwrap();
    for w in problem.worlds().worlds() {
        let losses: Vec<LossValue> =
            (0..3).map(|i| loss_of(&problem, &Hypothesis::Classifier(i).into(), w).unwrap()).collect();
        assert!(losses.iter().all(LossValue::is_nonnegative));
        assert_eq!(losses.iter().min().unwrap(), &LossValue::zero());
        assert_eq!(loss_of(&problem, &w.truth().clone().into(), w).unwrap(), LossValue::zero());
    }
}

#[test]
fn coin_problems_share_their_worlds() {
    let grid = default_theta_grid();
    let fair = fair_coin(&grid).unwrap();
    let bias = coin_bias(&grid).unwrap();
    assert_eq!(fair.alphabet(), bias.alphabet());
    assert_eq!(fair.worlds().len(), bias.worlds().len());
    for (a, b) in fair.worlds().worlds().iter().zip(bias.worlds().worlds()) {
        assert_eq!(a.id(), b.id());
        assert_eq!(a.branch().prefix(200), b.branch().prefix(200));
        assert_eq!(a.measure().unwrap().describe(), b.measure().unwrap().describe());
    }
}

#[test]
fn point_mass_raven_world_reproduces_the_all_ones_world() {
    let fg = fine_grained_raven(&[1.0]).unwrap();
    let coarse = easy_raven();
    let a = fg.world("p=1").unwrap().branch();
    let b = coarse.world("ones").unwrap().branch();
    for i in (1..=10_000u64).chain([1 << 20, 1 << 40, u64::MAX]) {
        assert_eq!(a.token(i), b.token(i));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn methods_are_deterministic(bits in prop::collection::vec(any::<bool>(), 0..60)) {
        let seq = to_seq(&bits);
        for m in binary_methods() {
            prop_assert_eq!(apply_method(m.as_ref(), &seq).unwrap(), apply_method(m.as_ref(), &seq).unwrap());
        }
    }

    #[test]
    fn outputs_depend_only_on_the_prefix(
        prefix in prop::collection::vec(any::<bool>(), 0..40),
        tail_a in prop::collection::vec(any::<bool>(), 1..8),
        tail_b in prop::collection::vec(any::<bool>(), 1..8),
    ) {
        let toks = |v: &[bool]| v.iter().map(|&b| Observation::bit(b)).collect::<Vec<_>>();
        let a = World::new("a", Branch::lasso("a", toks(&prefix), toks(&tail_a)), Hypothesis::YES);
        let b = World::new("b", Branch::lasso("b", toks(&prefix), toks(&tail_b)), Hypothesis::NO);
        for m in binary_methods() {
            for n in 0..=prefix.len() {
                prop_assert_eq!(output_at(m.as_ref(), &a, n).unwrap(), output_at(m.as_ref(), &b, n).unwrap());
            }
        }
    }

    #[test]
    fn count_symmetry_survives_shuffles(bits in prop::collection::vec(any::<bool>(), 13..80), seed in any::<u64>()) {
        let mut shuffled = bits.clone();
        // Fisher-Yates driven by a SplitMix stream.
        let mut s = seed;
        for i in (1..shuffled.len()).rev() {
            s = convlab_core::rng::stream_key(&[s]);
            shuffled.swap(i, (s % (i as u64 + 1)) as usize);
        }
        for m in binary_methods() {
            prop_assert_eq!(m.decide(&to_seq(&bits)), m.decide(&to_seq(&shuffled)));
        }
    }

    #[test]
    fn raven_rule_never_retracts_no(bits in prop::collection::vec(any::<bool>(), 0..60)) {
        let seq = to_seq(&bits);
        let mut seen_no = false;
        for n in 0..=seq.len() {
            let out = RavenRule.decide(&seq[..n]);
            if seen_no {
                prop_assert_eq!(&out, &MethodOutput::from(Hypothesis::NO));
            }
            seen_no |= out == Hypothesis::NO.into();
        }
    }

    #[test]
    fn frequency_output_is_the_exact_frequency(bits in prop::collection::vec(any::<bool>(), 1..60), theta in small_prob()) {
        let ones = bits.iter().filter(|b| **b).count() as i64;
        let f = q(ones, bits.len() as i64);
        prop_assert_eq!(FrequencyEstimator.decide(&to_seq(&bits)), Hypothesis::Real(f.clone()).into());
        let w = World::new("w", Branch::all_ones(), Hypothesis::Real(theta.clone()))
            .with_extras(convlab_core::model::Extras::Bias(theta.clone()));
        let problem = coin_bias(&[0.5, 0.6]).unwrap();
        let loss = loss_of(&problem, &Hypothesis::Real(f.clone()).into(), &w).unwrap();
        prop_assert_eq!(loss, LossValue::Finite(convlab_core::rational::abs_diff(&f, &theta)));
    }

    #[test]
    fn catalog_losses_are_nonnegative_and_zero_at_truth(idx in 0usize..16, h in small_prob()) {
        let grid = default_theta_grid();
        let bias = coin_bias(&grid).unwrap();
        let fair = fair_coin(&grid).unwrap();
        let w = &bias.worlds().worlds()[idx % bias.worlds().len()];
        prop_assert_eq!(loss_of(&bias, &w.truth().clone().into(), w).unwrap(), LossValue::zero());
        prop_assert!(loss_of(&bias, &Hypothesis::Real(h).into(), w).unwrap().is_nonnegative());
        let w = &fair.worlds().worlds()[idx % fair.worlds().len()];
        prop_assert_eq!(loss_of(&fair, &w.truth().clone().into(), w).unwrap(), LossValue::zero());
        for l in [Hypothesis::FAIR, Hypothesis::UNFAIR] {
            prop_assert!(loss_of(&fair, &l.into(), w).unwrap().is_nonnegative());
        }
    }

    #[test]
    fn bernoulli_measure_is_additive(theta in small_prob(), bits in prop::collection::vec(any::<bool>(), 0..20)) {
        let m = Measure::bernoulli(theta).unwrap();
        let node = to_seq(&bits);
        let mut c0 = node.clone().into_inner();
        c0.push(Observation::ZERO);
        let mut c1 = node.clone().into_inner();
        c1.push(Observation::ONE);
        prop_assert_eq!(m.prefix_prob(&c0) + m.prefix_prob(&c1), m.prefix_prob(&node));
        prop_assert_eq!(m.prefix_prob(&[]), Rational::one());
    }

    #[test]
    fn example_measure_is_additive(
        w in prop::collection::vec(0u32..100, 4),
        path in prop::collection::vec((0u32..2, any::<bool>()), 0..8),
    ) {
        let total: u32 = w.iter().sum();
        prop_assume!(total > 0);
        let rows = vec![[q(w[0] as i64, total as i64), q(w[1] as i64, total as i64)], [q(w[2] as i64, total as i64), q(w[3] as i64, total as i64)]];
        let d = Arc::new(ExampleDistribution::new(rows).unwrap());
        let m = Measure::Examples(d);
        let node: Vec<Observation> = path.iter().map(|&(x, y)| Observation::example(x, y)).collect();
        let children: Rational = Alphabet::Examples { features: 2 }
            .tokens()
            .into_iter()
            .map(|t| {
                let mut c = node.clone();
                c.push(t);
                m.prefix_prob(&c)
            })
            .sum();
        prop_assert_eq!(children, m.prefix_prob(&node));
    }

    #[test]
    fn erm_minimizes_empirical_risk(data in prop::collection::vec((0u32..2, any::<bool>()), 0..40), perm in Just([0usize, 1, 2]).prop_shuffle()) {
        let hs: Arc<[Classifier]> = xy().to_vec().into();
        let m = Erm::new(hs.clone(), 2, ErmConfig { hypothesis_order: perm.to_vec() }).unwrap();
        let seq: DataSequence = data.iter().map(|&(x, y)| Observation::example(x, y)).collect();
        let chosen = match m.decide(&seq) {
            MethodOutput::Hypothesis(Hypothesis::Classifier(i)) => i,
            other => panic!("unexpected output {other}"),
        };
        let errors = |i: usize| data.iter().filter(|&&(x, y)| hs[i].predict(x) != y).count();
        for i in 0..3 {
            prop_assert!(errors(chosen) <= errors(i));
        }
        // Ties go to the earliest classifier in the declared order.
        let best = (0..3).map(errors).min().unwrap();
        let first = *perm.iter().find(|&&i| errors(i) == best).unwrap();
        prop_assert_eq!(chosen, first);
    }

    #[test]
    fn risk_is_a_probability(w in prop::collection::vec(0u32..50, 4), h in 0usize..3) {
        let total: u32 = w.iter().sum();
        prop_assume!(total > 0);
        let rows = vec![[q(w[0] as i64, total as i64), q(w[1] as i64, total as i64)], [q(w[2] as i64, total as i64), q(w[3] as i64, total as i64)]];
        let d = ExampleDistribution::new(rows).unwrap();
        let r = risk(&xy()[h], &d);
        prop_assert!(r >= Rational::zero() && r <= Rational::one());
        // The misclassification event splits by feature.
        let by_feature: Rational = (0..2u32).map(|x| d.prob(x, !xy()[h].predict(x))).sum();
        prop_assert_eq!(r, by_feature);
    }

    #[test]
    fn required_sample_size_is_the_least_sufficient_n(en in 1i64..40, ed in 40i64..200, dn in 1i64..20, dd in 20i64..100) {
        let (eps, delta) = (q(en, ed), q(dn, dd));
        let n = required_sample_size_exact(&eps, &delta).unwrap();
        let target = Rational::one() - &delta;
        prop_assert!(bernoulli_bound_exact(n, &eps).unwrap() > target);
        if n > 1 {
            prop_assert!(bernoulli_bound_exact(n - 1, &eps).unwrap() <= target);
        }
    }

    #[test]
    fn exact_routes_match_oracles(theta in decimal_prob(), n in 0u64..=10, en in 1i64..10) {
        let grid = [convlab_core::rational::to_f64(&theta), 0.5];
        let problem = coin_bias(&grid).unwrap();
        let w = problem.worlds().worlds().iter().find(|w| w.truth() == &Hypothesis::Real(theta.clone())).unwrap();
        let eps = q(en, 10);
        let crit = SuccessCriterion::Within(eps.clone());
        let engine = exact_success_prob(&problem, &FrequencyEstimator, w, n, &crit).unwrap().rational.unwrap();
        let ok = |k: u64| n > 0 && convlab_core::rational::abs_diff(&q(k as i64, n as i64), &theta) < eps;
        prop_assert_eq!(&engine, &binomial_sum(&theta, n, ok));
        prop_assert_eq!(&engine, &brute_bernoulli(&theta, n as u32, |b| ok(b.iter().filter(|x| **x).count() as u64)));
        // The analytic bound holds at every stage.
        if n > 0 {
            prop_assert!(engine >= bernoulli_bound_exact(n, &eps).unwrap());
        }
    }

    #[test]
    fn cardinality_witness_is_never_output(d in 0u32..=10, c in small_prob()) {
        let methods: Vec<Box<dyn InferenceMethod>> = vec![
            Box::new(FrequencyEstimator),
            Box::new(ConstantMethod::new(Hypothesis::Real(c).into(), Alphabet::Binary)),
        ];
        for m in methods {
            let wit = cardinality_witness(m.as_ref(), d).unwrap();
            prop_assert!(wit.gap_lo < wit.value && wit.value < wit.gap_hi);
            for n in 0..=d as usize {
                for code in 0..(1u64 << n) {
                    let out = m.decide(&DataSequence::from_code(code, n));
                    prop_assert_ne!(out, Hypothesis::Real(wit.value.clone()).into());
                }
            }
        }
    }
}
