use lowdepth::aggregate::{
    aggregate_type1, aggregate_type2, boost_repetitions, check_lemma1, median_boost, type2_runs, Type1Plan,
};
use lowdepth::blackbox::{SyntheticUqae2, Uqae1Contract, Uqae1Estimator};
use lowdepth::stats;
use lowdepth::{Amplitude, ResourceLedger, Result, SeedSpec, TargetSpec};
use proptest::prelude::*;
use rand::Rng;

/// Bias depends on the run: run `i` has bias `B * PATTERN[i % 4]`.
struct RunDependentBias {
    truth: f64,
}

const PATTERN: [f64; 4] = [1.0, -0.5, 0.25, 1.0];

impl Uqae1Estimator for RunDependentBias {
    fn estimate(&self, c: &Uqae1Contract, seed: SeedSpec, ledger: &mut ResourceLedger) -> Result<f64> {
        ledger.charge(1, 1);
        let bias = c.bias_bound * PATTERN[(seed.stream_index % 4) as usize];
        let r = if seed.rng().random::<bool>() { 1.0 } else { -1.0 };
        Ok(self.truth + bias + c.variance_bound.sqrt() * r)
    }
}

#[test]
fn aggregate_bias_is_the_mean_of_run_biases() {
    // epsilon 0.5 and beta 1 give four runs, one per pattern entry
    let t = TargetSpec::new(0.5, 0.1, 1.0).unwrap();
    let plan = Type1Plan::new(&t, 0.05, 100.0 / 225.0).unwrap();
    assert_eq!(plan.runs, 4);
    let sampler = RunDependentBias { truth: 0.4 };
    let meta = 250_000;
    let mut ledger = ResourceLedger::new();
    let xs: Vec<f64> = (0..meta)
        .map(|i| {
            aggregate_type1(
                &sampler,
                &t,
                0.05,
                100.0 / 225.0,
                SeedSpec::new(7, 0).derive(i),
                &mut ledger,
            )
            .unwrap()
        })
        .collect();
    let expected_bias = plan.bias_bound * PATTERN.iter().sum::<f64>() / 4.0;
    let bias = stats::mean(&xs) - 0.4;
    let se = (plan.variance_bound / 4.0 / meta as f64).sqrt();
    assert!((bias - expected_bias).abs() <= 4.0 * se, "{bias} vs {expected_bias}");
    assert!(bias.abs() <= plan.bias_bound + 4.0 * se);
    assert_eq!(ledger.total_queries(), 4 * meta);
}

#[test]
fn type2_failure_rate_at_worst_case() {
    let t = TargetSpec::new(0.05, 0.1, 0.5).unwrap();
    let sampler = SyntheticUqae2::worst_case(Amplitude::new(0.6).unwrap());
    let trials = 2000;
    let mut fails = 0;
    for i in 0..trials {
        let mut ledger = ResourceLedger::new();
        let est = aggregate_type2(
            &sampler,
            &t,
            0.25,
            0.25,
            1.0,
            SeedSpec::new(8, 0).derive(i),
            &mut ledger,
        )
        .unwrap();
        fails += ((est - 0.6).abs() > 0.05) as u64;
    }
    let bound = 0.1 + 3.0 * (0.09f64 / trials as f64).sqrt();
    assert!(fails as f64 / trials as f64 <= bound);
    // ceil(2 ln 40 * 20 / 0.25) = ceil(590.22)
    assert_eq!(type2_runs(&t, 0.25, 0.25), 591);
}

#[test]
fn median_boost_reaches_target_failure() {
    let floor = check_lemma1(0.05, 100.0 / 225.0).success_floor;
    let reps = boost_repetitions(0.01, floor).unwrap();
    assert_eq!(reps % 2, 1);
    // a coin that is right with exactly the floor probability
    let inner = |seed: SeedSpec, _: &mut ResourceLedger| -> Result<f64> {
        Ok(if seed.rng().random::<f64>() < floor { 0.0 } else { 1.0 })
    };
    let meta = 300;
    let mut wrong = 0;
    for i in 0..meta {
        let mut ledger = ResourceLedger::new();
        let m = median_boost(inner, reps, SeedSpec::new(9, i), &mut ledger).unwrap();
        wrong += (m != 0.0) as u64;
    }
    assert!(wrong as f64 / meta as f64 <= 0.01 + 3.0 * (0.0099f64 / meta as f64).sqrt());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn type1_runs_never_shrink_as_epsilon_shrinks(eps in 0.001..0.5f64, f in 0.1..0.99f64, beta in 0.0..=1.0f64) {
        let a = Type1Plan::new(&TargetSpec::new(eps, 0.1, beta).unwrap(), 0.05, 0.4).unwrap();
        let b = Type1Plan::new(&TargetSpec::new(eps * f, 0.1, beta).unwrap(), 0.05, 0.4).unwrap();
        prop_assert!(b.runs >= a.runs);
    }

    #[test]
    fn lemma1_floor_is_valid_below_the_boundary(r in 0.0..0.9f64, frac in 0.0..0.999f64) {
        let s = frac * (1.0 - r).powi(2) / 2.0;
        let c = check_lemma1(r, s);
        prop_assert!(c.valid);
        prop_assert!(c.success_floor >= 0.5 - 1e-12);
    }
}
