//! Fast invariant suites, runnable from the command line.

use std::f64::consts::{PI, TAU};

use rand::Rng;
use serde::Serialize;

use crate::aggregate::check_lemma1;
use crate::blackbox::{apeldoorn_phase_params, cornelissen_amp_params, cornelissen_phase_params};
use crate::circphase::{arc_map, arc_unmap, circ_diff, Angle, Arc};
use crate::ledger::ResourceLedger;
use crate::rallfuller::{kappa, rf_params, semi_pellian, u, ConfidenceInterval};
use crate::seed::SeedSpec;
use crate::types::TargetSpec;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: impl Into<String>) -> CheckResult {
    CheckResult {
        name,
        passed,
        detail: detail.into(),
    }
}

/// `|theta ⊖ phi|` equals the smallest `|theta - phi + 2 pi k|`, on a
/// one-degree grid. Returns the number of violations.
pub fn circ_diff_grid_violations() -> usize {
    let deg = PI / 180.0;
    let mut bad = 0;
    for i in 0..360 {
        for j in 0..360 {
            let (t, p) = (i as f64 * deg, j as f64 * deg);
            let d = circ_diff(Angle::new(t), Angle::new(p));
            let best = (-2..=2)
                .map(|k| (t - p + TAU * k as f64).abs())
                .fold(f64::INFINITY, f64::min);
            let antisym = d.abs() >= PI - 1e-12 || (d + circ_diff(Angle::new(p), Angle::new(t))).abs() < 1e-12;
            if (d.abs() - best).abs() > 1e-12 || d.abs() > (t - p).abs() + 1e-12 || !antisym {
                bad += 1;
            }
        }
    }
    bad
}

/// Worst round-trip error of `arc_unmap(arc_map(theta))` over `n` random
/// arcs and on-arc angles.
pub fn arc_round_trip_error(n: u64, seed: SeedSpec) -> f64 {
    let mut rng = seed.rng();
    let mut worst = 0.0f64;
    for _ in 0..n {
        let centre = Angle::new(rng.random_range(0.0..TAU));
        let half = rng.random_range(0.001..1.5);
        let arc = Arc::centred(centre, half).expect("half-width below pi/2");
        let theta = Angle::new(centre.value() + rng.random_range(-half..=half));
        let back = arc_map(&arc, theta).and_then(|c| arc_unmap(&arc, c));
        worst = worst.max(back.map_or(f64::INFINITY, |b| circ_diff(b, theta).abs()));
    }
    worst
}

/// Largest relative residual of the parameter-setting identities for the
/// van Apeldoorn estimator (precision, bias, failure probability and the two
/// reduced forms), on the real-valued solution.
pub fn apeldoorn_residual(target: &TargetSpec) -> crate::Result<f64> {
    let p = apeldoorn_phase_params(target)?;
    let (eps, delta) = (target.epsilon, target.delta);
    let l = (4.0 / delta).ln();
    let rhs_bias = eps * eps * delta / (128.0 * l);
    let rhs_exp = eps * eps * delta / (64.0 * l);
    let two_n = 2f64.powf(-p.n_real);
    let bias_lhs = PI * (p.m + 1.0) * two_n;
    let exp_lhs = (-p.m / 4.0).exp();
    let precision_lhs = 10.0 / p.big_m_real * (1.0 + 2f64.powi(-(p.n as i32)));
    let fail_lhs = 4.0 * PI * (p.m + 1.0) * two_n + 2.0 * exp_lhs;
    let gap = 1.0 - p.r - p.s;
    let fail_rhs = eps * eps * (delta * gap * gap / (4.0 * l)).min(p.s / (4.0 * PI));
    let rel = |a: f64, b: f64| ((a - b) / b).abs();
    Ok(rel(bias_lhs, rhs_bias)
        .max(rel(exp_lhs, rhs_exp))
        .max(rel(fail_lhs, fail_rhs))
        .max(rel(precision_lhs, target.hardware_precision())))
}

/// Runs every suite. Each check is deterministic.
pub fn run_all() -> Vec<CheckResult> {
    let mut out = Vec::new();

    let (a, b, c) = (ledger(3, 10), ledger(7, 1), ledger(0, 5));
    out.push(check(
        "ledger merge associative and commutative",
        a.merge(b).merge(c) == a.merge(b.merge(c)) && a.merge(b) == b.merge(a),
        "merge of three ledgers checked both ways",
    ));

    let s = SeedSpec::new(42, 0);
    out.push(check(
        "derive_stream deterministic and injective",
        s.derive(0) == s.derive(0) && s.derive(0) != s.derive(1),
        format!(
            "child 0 of (42, 0) is ({}, {})",
            s.derive(0).master_seed,
            s.derive(0).stream_index
        ),
    ));

    let bad = circ_diff_grid_violations();
    out.push(check(
        "circular difference minimal on degree grid",
        bad == 0,
        format!("{bad} violations"),
    ));

    let worst = arc_round_trip_error(1000, SeedSpec::new(7, 0));
    out.push(check("arc map round trip", worst <= 1e-12, format!("worst {worst:e}")));

    let l1 = check_lemma1(0.05, 100.0 / 225.0);
    out.push(check(
        "type I success floor above one half",
        l1.valid && l1.success_floor > 0.5,
        format!("floor {}", l1.success_floor),
    ));

    let (k, u4) = (kappa(0.01), u(0.004));
    out.push(check(
        "kappa and u constants",
        matches!((&k, &u4), (Ok(k), Ok(u)) if (k - 2.1).abs() <= 0.05 && (u - 0.0092).abs() <= 0.0005),
        match (&k, &u4) {
            (Ok(k), Ok(u)) => format!("kappa(0.01) = {k}, u(0.004) = {u}"),
            _ => format!("{k:?} {u4:?}"),
        },
    ));

    let interval = ConfidenceInterval::unit();
    let cert = rf_params(&interval, 0.5)
        .and_then(|p| semi_pellian(p.tau, p.eta, p.k, interval.a_mid()).map(|poly| (poly, p)))
        .and_then(|(poly, p)| poly.gap_certificate(&interval, p.gamma));
    out.push(check(
        "full-depth gap envelopes",
        matches!(&cert, Ok(c) if (c.left_bound - 0.472).abs() <= 0.002 && (c.right_bound - 0.70541).abs() <= 0.002),
        match &cert {
            Ok(c) => format!("left {}, right {}", c.left_bound, c.right_bound),
            Err(e) => e.to_string(),
        },
    ));

    let mut worst_rel = 0.0f64;
    let mut chains = true;
    for eps in [0.1, 0.05, 0.01, 0.001] {
        for delta in [0.2, 0.1, 0.01] {
            for beta in [0.0, 0.25, 0.5, 0.75, 1.0] {
                let t = TargetSpec::new(eps, delta, beta).expect("grid values are valid");
                match (
                    cornelissen_amp_params(&t),
                    cornelissen_phase_params(&t),
                    apeldoorn_residual(&t),
                ) {
                    (Ok(amp), Ok(ph), Ok(rel)) => {
                        chains &= amp.bias <= 0.05 * eps && ph.bias <= 0.05 * eps;
                        chains &= 1.0 / (ph.k * ph.k) + ph.bias <= ph.implied_variance_bound * (1.0 + 1e-12);
                        worst_rel = worst_rel.max(rel);
                    }
                    _ => chains = false,
                }
            }
        }
    }
    out.push(check(
        "parameter settings",
        chains && worst_rel <= 1e-6,
        format!("worst relative residual {worst_rel:e}"),
    ));

    let mut failures = 0;
    for i in 0..100 {
        for j in 1..=100 {
            let a_min = i as f64 / 100.0;
            let a_max = (a_min + j as f64 / 100.0).min(1.0);
            if a_max <= a_min {
                continue;
            }
            let iv = ConfidenceInterval::new(a_min, a_max).expect("ordered");
            for beta in [0.0, 0.25, 0.5, 0.75, 1.0] {
                failures += usize::from(rf_params(&iv, beta).is_err());
            }
        }
    }
    out.push(check(
        "step parameters meet preconditions",
        failures == 0,
        format!("{failures} failures"),
    ));

    out
}

fn ledger(depth: u64, queries: u64) -> ResourceLedger {
    let mut l = ResourceLedger::new();
    l.charge(depth, queries);
    l
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass() {
        for c in run_all() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
