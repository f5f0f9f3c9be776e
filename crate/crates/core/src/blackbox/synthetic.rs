use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{
    SyntheticCostModel, Uqae1Contract, Uqae1Estimator, Uqae2Contract, Uqae2Estimator, Uqpe2Contract, Uqpe2Estimator,
};
use crate::circphase::Angle;
use crate::error::{ensure, Result};
use crate::ledger::ResourceLedger;
use crate::seed::SeedSpec;
use crate::types::Amplitude;

// Slack on the output cap, which is compared against sums of inputs.
const CAP_TOL: f64 = 1e-12;

fn rademacher(rng: &mut impl Rng) -> f64 {
    if rng.random::<bool>() {
        1.0
    } else {
        -1.0
    }
}

/// `a + bias_setting + sqrt(V) * R` with `R = ±1` equiprobable: mean
/// `a + bias_setting`, variance exactly `V`.
pub fn synth_uqae1_sample(
    a: Amplitude,
    contract: &Uqae1Contract,
    bias_setting: f64,
    cost: &SyntheticCostModel,
    seed: SeedSpec,
    ledger: &mut ResourceLedger,
) -> Result<f64> {
    ensure(
        bias_setting.abs() <= contract.bias_bound,
        "bias_setting",
        bias_setting,
        "exceeds the contract bias bound",
    )?;
    let (depth, queries) = cost.uqae1_cost(contract);
    ledger.charge(depth, queries);
    let r = rademacher(&mut seed.rng());
    Ok(a.value() + bias_setting + contract.variance_bound.sqrt() * r)
}

/// Two-component mixture with mean exactly `a + bias_setting`.
///
/// With probability `1 - delta` the output is `a + b ± w`, where
/// `w = min(eps - |b|, C - |a + b|)` keeps it within `eps` of `a` and
/// within the cap. With probability `delta` it is `a + b ± tail_magnitude`.
pub fn synth_uqae2_sample(
    a: Amplitude,
    contract: &Uqae2Contract,
    bias_setting: f64,
    tail_magnitude: f64,
    cost: &SyntheticCostModel,
    seed: SeedSpec,
    ledger: &mut ResourceLedger,
) -> Result<f64> {
    let a = a.value();
    let b = bias_setting;
    ensure(
        b.abs() <= contract.bias_bound,
        "bias_setting",
        b,
        "exceeds the contract bias bound",
    )?;
    ensure(
        b.abs() <= contract.precision,
        "bias_setting",
        b,
        "exceeds the contract precision",
    )?;
    ensure(
        tail_magnitude >= 0.0,
        "tail_magnitude",
        tail_magnitude,
        "must be nonnegative",
    )?;
    ensure(
        (a + b).abs() + tail_magnitude <= contract.output_cap + CAP_TOL,
        "tail_magnitude",
        tail_magnitude,
        "output would exceed the cap C",
    )?;
    let spread = (contract.precision - b.abs())
        .min(contract.output_cap - (a + b).abs())
        .max(0.0);

    let (depth, queries) = cost.uqae2_cost(contract.bias_bound, contract.precision, contract.fail_prob);
    ledger.charge(depth, queries);
    let mut rng = seed.rng();
    let tail = rng.random::<f64>() < contract.fail_prob;
    let r = rademacher(&mut rng);
    Ok(a + b + if tail { tail_magnitude } else { spread } * r)
}

/// Circular version of [`synth_uqae2_sample`]: the offset from `theta` is
/// `b ± (eps - |b|)` or, with probability `delta`, `b ± tail_magnitude`.
/// Requires `|b| + tail_magnitude < pi` so the circular offset has mean `b`.
pub fn synth_uqpe2_sample(
    theta: Angle,
    contract: &Uqpe2Contract,
    bias_setting: f64,
    tail_magnitude: f64,
    cost: &SyntheticCostModel,
    seed: SeedSpec,
    ledger: &mut ResourceLedger,
) -> Result<Angle> {
    let b = bias_setting;
    ensure(
        b.abs() <= contract.bias_bound,
        "bias_setting",
        b,
        "exceeds the contract bias bound",
    )?;
    ensure(
        b.abs() <= contract.precision,
        "bias_setting",
        b,
        "exceeds the contract precision",
    )?;
    ensure(
        tail_magnitude >= 0.0 && b.abs() + tail_magnitude < std::f64::consts::PI,
        "tail_magnitude",
        tail_magnitude,
        "offset must stay inside (-pi, pi)",
    )?;
    let (depth, queries) = cost.uqae2_cost(contract.bias_bound, contract.precision, contract.fail_prob);
    ledger.charge(depth, queries);
    let mut rng = seed.rng();
    let tail = rng.random::<f64>() < contract.fail_prob;
    let r = rademacher(&mut rng);
    let spread = if tail {
        tail_magnitude
    } else {
        contract.precision - b.abs()
    };
    Ok(Angle::new(theta.value() + b + spread * r))
}

/// The estimator that outputs `a - epsilon`, always.
pub fn monkey_sample(a: Amplitude, epsilon: f64) -> f64 {
    a.value() - epsilon
}

/// [`monkey_sample`] behind the black-box interfaces. It ignores whatever
/// contract it is handed and charges one query per call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Monkey {
    pub truth: Amplitude,
    pub epsilon: f64,
}

impl Uqae1Estimator for Monkey {
    fn estimate(&self, _: &Uqae1Contract, _: SeedSpec, ledger: &mut ResourceLedger) -> Result<f64> {
        ledger.charge(1, 1);
        Ok(monkey_sample(self.truth, self.epsilon))
    }
}

impl Uqae2Estimator for Monkey {
    fn estimate(&self, _: &Uqae2Contract, _: SeedSpec, ledger: &mut ResourceLedger) -> Result<f64> {
        ledger.charge(1, 1);
        Ok(monkey_sample(self.truth, self.epsilon))
    }
}

/// Type I sampler whose bias is `bias_fraction * B` for whatever `B` it is asked for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticUqae1 {
    pub truth: Amplitude,
    pub bias_fraction: f64,
    pub cost: SyntheticCostModel,
}

impl SyntheticUqae1 {
    /// Sampler sitting at the edge of its bias bound.
    pub fn worst_bias(truth: Amplitude) -> Self {
        Self {
            truth,
            bias_fraction: 1.0,
            cost: SyntheticCostModel::default(),
        }
    }
}

impl Uqae1Estimator for SyntheticUqae1 {
    fn estimate(&self, contract: &Uqae1Contract, seed: SeedSpec, ledger: &mut ResourceLedger) -> Result<f64> {
        let bias = self.bias_fraction * contract.bias_bound;
        synth_uqae1_sample(self.truth, contract, bias, &self.cost, seed, ledger)
    }
}

/// How far the failure component of a type II sampler lands from its mean.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TailSetting {
    /// As far as the output cap allows: `C - |a + b|`.
    Max,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticUqae2 {
    pub truth: Amplitude,
    pub bias_fraction: f64,
    pub tail: TailSetting,
    pub cost: SyntheticCostModel,
}

impl SyntheticUqae2 {
    /// Maximal allowed bias and maximal tail.
    pub fn worst_case(truth: Amplitude) -> Self {
        Self {
            truth,
            bias_fraction: 1.0,
            tail: TailSetting::Max,
            cost: SyntheticCostModel::default(),
        }
    }
}

impl Uqae2Estimator for SyntheticUqae2 {
    fn estimate(&self, contract: &Uqae2Contract, seed: SeedSpec, ledger: &mut ResourceLedger) -> Result<f64> {
        let a = self.truth.value();
        let mut bias = self.bias_fraction * contract.bias_bound.min(contract.precision);
        // Near the cap the bias points inward so the output stays within C.
        if a + bias > contract.output_cap {
            bias = -bias;
        }
        let tail = match self.tail {
            TailSetting::Max => (contract.output_cap - (a + bias).abs()).max(0.0),
            TailSetting::Fixed(t) => t,
        };
        synth_uqae2_sample(self.truth, contract, bias, tail, &self.cost, seed, ledger)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticUqpe2 {
    pub truth: Angle,
    pub bias_fraction: f64,
    pub tail_magnitude: f64,
    pub cost: SyntheticCostModel,
}

impl SyntheticUqpe2 {
    /// Maximal allowed bias, failures landing a quarter turn away.
    pub fn worst_case(truth: Angle) -> Self {
        Self {
            truth,
            bias_fraction: 1.0,
            tail_magnitude: std::f64::consts::FRAC_PI_2,
            cost: SyntheticCostModel::default(),
        }
    }
}

impl Uqpe2Estimator for SyntheticUqpe2 {
    fn estimate(&self, contract: &Uqpe2Contract, seed: SeedSpec, ledger: &mut ResourceLedger) -> Result<Angle> {
        let bias = self.bias_fraction * contract.bias_bound.min(contract.precision);
        synth_uqpe2_sample(
            self.truth,
            contract,
            bias,
            self.tail_magnitude,
            &self.cost,
            seed,
            ledger,
        )
    }
}
