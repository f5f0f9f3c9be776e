use lowdepth::oracle::{poly_sample, PolyOracle};
use lowdepth::poly::Polynomial;
use lowdepth::rallfuller::{
    coin_shots, coin_test, erf_poly, lemma3_check, rall_fuller_estimate, rf_params, semi_pellian, Branch,
    ConfidenceInterval, RallFullerRun,
};
use lowdepth::stats::log_log_slope;
use lowdepth::{Amplitude, ResourceLedger, SeedSpec, TargetSpec};
use proptest::prelude::*;

fn run(a: f64, eps: f64, delta: f64, beta: f64, seed: SeedSpec) -> (RallFullerRun, ResourceLedger) {
    let mut ledger = ResourceLedger::new();
    let t = TargetSpec::new(eps, delta, beta).unwrap();
    let r = rall_fuller_estimate(Amplitude::new(a).unwrap(), &t, seed, &mut ledger).unwrap();
    (r, ledger)
}

#[test]
fn erf_polynomial_at_unit_slope() {
    let p = erf_poly(1.0, 0.1).unwrap();
    assert!(p.sup_error() <= 0.1);
    for i in 0..=400 {
        let x = -2.0 + i as f64 / 100.0;
        assert!((p.eval(x) - libm::erf(x)).abs() <= 0.1);
        assert!((p.eval(x) + p.eval(-x)).abs() < 1e-12);
    }
}

#[test]
fn degree_follows_two_phases() {
    let (r, _) = run(0.3, 0.002, 0.05, 0.5, SeedSpec::new(31, 0));
    let phase = |b: Branch| -> (Vec<f64>, Vec<f64>) {
        r.steps
            .iter()
            .filter(|s| s.params.branch == b)
            .map(|s| (s.width, s.degree as f64))
            .unzip()
    };
    let (w_full, d_full) = phase(Branch::FullDepth);
    let (w_low, d_low) = phase(Branch::LowDepth);
    assert!(w_full.len() >= 10 && w_low.len() >= 10);
    assert!(
        w_full.iter().all(|&w| w > *w_low.first().unwrap()),
        "full-depth phase comes first"
    );
    let slope_full = log_log_slope(&w_full, &d_full).unwrap();
    let slope_low = log_log_slope(&w_low, &d_low).unwrap();
    assert!((slope_full + 1.0).abs() <= 0.15, "full-depth slope {slope_full}");
    assert!((slope_low + 0.5).abs() <= 0.15, "low-depth slope {slope_low}");
}

#[test]
fn resource_exponents_over_epsilon() {
    let eps = [0.05, 0.02, 0.01, 0.005, 0.002];
    let (mut depth, mut queries) = (Vec::new(), Vec::new());
    for &e in &eps {
        let (_, l) = run(0.3, e, 0.05, 0.5, SeedSpec::new(32, 0));
        depth.push(l.max_depth() as f64);
        queries.push(l.total_queries() as f64);
    }
    let sd = log_log_slope(&eps, &depth).unwrap();
    let sn = log_log_slope(&eps, &queries).unwrap();
    assert!((sd + 0.5).abs() <= 0.15, "depth slope {sd}");
    assert!((sn + 1.5).abs() <= 0.2, "query slope {sn}");
}

#[test]
fn truth_stays_in_the_interval() {
    let delta = 0.1;
    let runs = 300;
    let mut lost = 0;
    for i in 0..runs {
        let a = i as f64 / (runs - 1) as f64;
        let (r, _) = run(a, 0.05, delta, 0.5, SeedSpec::new(33, i));
        let kept = r.steps.iter().all(|s| s.a_min - 1e-12 <= a && a <= s.a_max + 1e-12) && r.final_interval.contains(a);
        lost += (!kept) as u64;
        for s in &r.steps {
            assert!(s.certificate.left_max <= 0.5 - s.params.gamma + 1e-9);
            assert!(s.certificate.right_min >= 0.5 + s.params.gamma - 1e-9);
        }
    }
    let rate = lost as f64 / runs as f64;
    assert!(
        rate <= delta + 3.0 * (delta * (1.0 - delta) / runs as f64).sqrt(),
        "{rate}"
    );
}

#[test]
fn coin_test_error_rates() {
    let (gamma, delta) = (0.05, 0.05);
    let m = coin_shots(gamma, delta).unwrap();
    let trials = 10_000;
    for (p, heads_expected) in [(0.5 + gamma, true), (0.5 - gamma, false), (0.9, true), (0.1, false)] {
        let oracle = PolyOracle::new(Polynomial::monomial(vec![p]), Amplitude::new(0.5).unwrap()).unwrap();
        let mut ledger = ResourceLedger::new();
        let wrong = (0..trials)
            .filter(|&i| {
                coin_test(poly_sample(&oracle, m, SeedSpec::new(34, i), &mut ledger), m, gamma) != heads_expected
            })
            .count();
        let rate = wrong as f64 / trials as f64;
        assert!(
            rate <= delta + 3.0 * (delta * (1.0 - delta) / trials as f64).sqrt(),
            "p={p}: {rate}"
        );
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn every_reachable_step_is_certifiable(a_min in 0.0..0.98f64, frac in 0.02..1.0f64, beta in 0.0..=1.0f64) {
        let width = frac * (1.0 - a_min);
        let interval = ConfidenceInterval::new(a_min, a_min + width).unwrap();
        let p = rf_params(&interval, beta).unwrap();
        let check = lemma3_check(&p, &interval).unwrap();
        prop_assert!(check.k_in_range);
        prop_assert!(check.mid_condition || p.branch == Branch::FullDepth);
        let poly = semi_pellian(p.tau, p.eta, p.k, interval.a_mid()).unwrap();
        let cert = poly.gap_certificate(&interval, p.gamma).unwrap();
        prop_assert!(cert.left_max <= cert.left_bound + 1e-9);
        prop_assert!(cert.right_min >= cert.right_bound - 1e-9);
    }
}
