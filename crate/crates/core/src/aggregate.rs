//! Averaging independent runs of a black-box estimator.
//!
//! A run of depth `eps^{-(1-beta)}` can only be precise to `eps^{1-beta}`.
//! Averaging `T ~ eps^{-2 beta}` such runs brings the spread down to `eps`,
//! provided the bias of each run is already below `eps`; an unbiased black
//! box makes that bias cheap. Total depth times queries stays near `eps^-2`.

use serde::{Deserialize, Serialize};

use crate::blackbox::{Uqae1Contract, Uqae1Estimator, Uqae2Contract, Uqae2Estimator};
use crate::error::{ensure, Result};
use crate::ledger::ResourceLedger;
use crate::seed::SeedSpec;
use crate::stats;
use crate::types::TargetSpec;

/// Whether `(r, s)` admits a success probability above one half for type I
/// aggregation, and the Chebyshev lower bound on that probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Check {
    pub valid: bool,
    pub success_floor: f64,
}

/// `valid` iff `s < (1 - r)^2 / 2`; `success_floor = 1 - s / (1 - r)^2`.
pub fn check_lemma1(r: f64, s: f64) -> Lemma1Check {
    let slack = (1.0 - r) * (1.0 - r);
    Lemma1Check {
        valid: s < slack / 2.0,
        success_floor: 1.0 - s / slack,
    }
}

/// Type I aggregation settings: `T = ceil(eps^{-2 beta})` runs of a black
/// box with bias `r eps` and variance `s eps^{2 - 2 beta}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Type1Plan {
    pub r: f64,
    pub s: f64,
    pub bias_bound: f64,
    pub variance_bound: f64,
    pub runs: u64,
}

impl Type1Plan {
    pub fn new(target: &TargetSpec, r: f64, s: f64) -> Result<Self> {
        target.validate()?;
        ensure(r > 0.0 && r < 1.0, "r", r, "must lie in (0, 1)")?;
        ensure(s > 0.0, "s", s, "must be positive")?;
        let check = check_lemma1(r, s);
        ensure(check.valid, "s", s, "must be below (1 - r)^2 / 2")?;
        let eps = target.epsilon;
        Ok(Self {
            r,
            s,
            bias_bound: r * eps,
            variance_bound: s * eps.powf(2.0 - 2.0 * target.beta),
            runs: eps.powf(-2.0 * target.beta).ceil() as u64,
        })
    }

    pub fn contract(&self) -> Result<Uqae1Contract> {
        Uqae1Contract::new(self.bias_bound, self.variance_bound)
    }

    pub fn success_floor(&self) -> f64 {
        check_lemma1(self.r, self.s).success_floor
    }
}

/// `ceil(2 ln(4/delta) eps^{-2 beta} / (1 - r - s)^2)`.
pub fn type2_runs(target: &TargetSpec, r: f64, s: f64) -> u64 {
    let gap = 1.0 - r - s;
    (2.0 * (4.0 / target.delta).ln() * target.epsilon.powf(-2.0 * target.beta) / (gap * gap)).ceil() as u64
}

/// Type II aggregation settings. The run count is fixed first; the per-run
/// failure probability then keeps both the union bound over runs and the
/// bias contributed by failed runs within budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Type2Plan {
    pub r: f64,
    pub s: f64,
    pub bias_bound: f64,
    pub run_precision: f64,
    pub runs: u64,
    pub run_fail_prob: f64,
    pub output_cap: f64,
}

impl Type2Plan {
    pub fn new(target: &TargetSpec, r: f64, s: f64, output_cap: f64) -> Result<Self> {
        target.validate()?;
        ensure(r > 0.0 && s > 0.0, "r, s", r.min(s), "must be positive")?;
        ensure(r + s < 1.0, "r + s", r + s, "must be below 1")?;
        ensure(output_cap >= 1.0, "output_cap", output_cap, "must be at least 1")?;
        let runs = type2_runs(target, r, s);
        let eps = target.epsilon;
        Ok(Self {
            r,
            s,
            bias_bound: r * eps,
            run_precision: target.hardware_precision(),
            runs,
            run_fail_prob: (target.delta / (2.0 * runs as f64)).min(s * eps / output_cap),
            output_cap,
        })
    }

    pub fn contract(&self) -> Result<Uqae2Contract> {
        Uqae2Contract::new(self.bias_bound, self.run_precision, self.run_fail_prob, self.output_cap)
    }
}

fn mean_of_runs(
    runs: u64,
    seed: SeedSpec,
    ledger: &mut ResourceLedger,
    mut run: impl FnMut(SeedSpec, &mut ResourceLedger) -> Result<f64>,
) -> Result<f64> {
    let xs = (0..runs)
        .map(|i| run(seed.derive(i), ledger))
        .collect::<Result<Vec<f64>>>()?;
    Ok(stats::mean(&xs))
}

/// Mean of `T` runs of `sampler` under [`Type1Plan`]. Run `i` uses child
/// seed `i`. The mean is not clamped to `[0, 1]`.
pub fn aggregate_type1(
    sampler: &dyn Uqae1Estimator,
    target: &TargetSpec,
    r: f64,
    s: f64,
    seed: SeedSpec,
    ledger: &mut ResourceLedger,
) -> Result<f64> {
    let plan = Type1Plan::new(target, r, s)?;
    let contract = plan.contract()?;
    mean_of_runs(plan.runs, seed, ledger, |s, l| sampler.estimate(&contract, s, l))
}

/// Mean of `T` runs of `sampler` under [`Type2Plan`].
pub fn aggregate_type2(
    sampler: &dyn Uqae2Estimator,
    target: &TargetSpec,
    r: f64,
    s: f64,
    output_cap: f64,
    seed: SeedSpec,
    ledger: &mut ResourceLedger,
) -> Result<f64> {
    let plan = Type2Plan::new(target, r, s, output_cap)?;
    let contract = plan.contract()?;
    mean_of_runs(plan.runs, seed, ledger, |s, l| sampler.estimate(&contract, s, l))
}

/// Repetitions so that the median of estimates each correct with
/// probability `success_floor > 1/2` fails with probability at most
/// `delta_target`: `ceil(ln(1/delta) / (2 (p - 1/2)^2))`, made odd.
pub fn boost_repetitions(delta_target: f64, success_floor: f64) -> Result<u64> {
    ensure(
        delta_target > 0.0 && delta_target < 1.0,
        "delta_target",
        delta_target,
        "must lie in (0, 1)",
    )?;
    ensure(
        success_floor > 0.5 && success_floor <= 1.0,
        "success_floor",
        success_floor,
        "must lie in (1/2, 1]",
    )?;
    let gap = success_floor - 0.5;
    let n = ((1.0 / delta_target).ln() / (2.0 * gap * gap)).ceil().max(1.0) as u64;
    Ok(n | 1)
}

/// Median of `repetitions` calls of `runner`, call `i` under child seed `i`.
pub fn median_boost(
    mut runner: impl FnMut(SeedSpec, &mut ResourceLedger) -> Result<f64>,
    repetitions: u64,
    seed: SeedSpec,
    ledger: &mut ResourceLedger,
) -> Result<f64> {
    ensure(repetitions % 2 == 1, "repetitions", repetitions as f64, "must be odd")?;
    let xs = (0..repetitions)
        .map(|i| runner(seed.derive(i), ledger))
        .collect::<Result<Vec<f64>>>()?;
    Ok(stats::median(&xs))
}
