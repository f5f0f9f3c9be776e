//! Black-box unbiased estimators.
//!
//! An aggregation protocol only sees an estimator through its contract: a
//! bias bound plus either a variance bound (type I) or a precision and
//! failure probability (type II). The traits here are that interface; the
//! synthetic samplers realize each contract exactly with two-point
//! constructions, and [`Monkey`] is the adversarial estimator that honours
//! a precision bound while carrying all of it as bias.

mod conformance;
mod params;
mod synthetic;

pub use conformance::{check_uqae1, check_uqae2, Uqae1Conformance, Uqae2Conformance};
pub use params::{
    apeldoorn_phase_params, cornelissen_amp_params, cornelissen_phase_params, ApeldoornParams, CornelissenParams,
    CORNELISSEN_R, CORNELISSEN_S, CORNELISSEN_S_PRIME,
};
pub use synthetic::{
    monkey_sample, synth_uqae1_sample, synth_uqae2_sample, synth_uqpe2_sample, Monkey, SyntheticUqae1, SyntheticUqae2,
    SyntheticUqpe2, TailSetting,
};

use serde::{Deserialize, Serialize};

use crate::circphase::Angle;
use crate::error::{ensure, Result};
use crate::ledger::ResourceLedger;
use crate::seed::SeedSpec;

/// Bias and variance bounds `(B, V)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Uqae1Contract {
    pub bias_bound: f64,
    pub variance_bound: f64,
}

impl Uqae1Contract {
    pub fn new(bias_bound: f64, variance_bound: f64) -> Result<Self> {
        ensure(bias_bound > 0.0, "bias_bound", bias_bound, "must be positive")?;
        ensure(
            variance_bound >= 0.0,
            "variance_bound",
            variance_bound,
            "must be nonnegative",
        )?;
        Ok(Self {
            bias_bound,
            variance_bound,
        })
    }
}

/// Bias bound `B`, precision `epsilon` reached with probability `1 - delta`,
/// and output cap `C`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Uqae2Contract {
    pub bias_bound: f64,
    pub precision: f64,
    pub fail_prob: f64,
    pub output_cap: f64,
}

impl Uqae2Contract {
    pub fn new(bias_bound: f64, precision: f64, fail_prob: f64, output_cap: f64) -> Result<Self> {
        ensure(bias_bound > 0.0, "bias_bound", bias_bound, "must be positive")?;
        ensure(precision > 0.0, "precision", precision, "must be positive")?;
        ensure(
            (0.0..1.0).contains(&fail_prob),
            "fail_prob",
            fail_prob,
            "must lie in [0, 1)",
        )?;
        ensure(output_cap >= 1.0, "output_cap", output_cap, "must be at least 1")?;
        Ok(Self {
            bias_bound,
            precision,
            fail_prob,
            output_cap,
        })
    }
}

/// Circular analogue of [`Uqae2Contract`]: `|E[est ⊖ theta]| <= B` and
/// `|est ⊖ theta| <= epsilon` with probability `1 - delta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Uqpe2Contract {
    pub bias_bound: f64,
    pub precision: f64,
    pub fail_prob: f64,
}

impl Uqpe2Contract {
    pub fn new(bias_bound: f64, precision: f64, fail_prob: f64) -> Result<Self> {
        ensure(bias_bound > 0.0, "bias_bound", bias_bound, "must be positive")?;
        ensure(
            precision > 0.0 && precision < std::f64::consts::PI,
            "precision",
            precision,
            "must lie in (0, pi)",
        )?;
        ensure(
            (0.0..1.0).contains(&fail_prob),
            "fail_prob",
            fail_prob,
            "must lie in [0, 1)",
        )?;
        Ok(Self {
            bias_bound,
            precision,
            fail_prob,
        })
    }
}

/// Depth and query cost charged by the synthetic samplers.
///
/// Type I: depth `ceil(df / sqrt(V))`, queries `ceil(qf * ln(e/B) / sqrt(V))`.
/// Type II: depth `ceil(df / eps)`, queries `ceil(qf * ln(1/delta) * ln(e/B) / eps)`.
/// Costs that diverge (zero variance, zero failure probability) saturate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticCostModel {
    pub depth_factor: f64,
    pub query_factor: f64,
}

impl Default for SyntheticCostModel {
    fn default() -> Self {
        Self {
            depth_factor: 1.0,
            query_factor: 1.0,
        }
    }
}

impl SyntheticCostModel {
    pub fn uqae1_cost(&self, contract: &Uqae1Contract) -> (u64, u64) {
        let inv_sd = contract.variance_bound.sqrt().recip();
        let log_bias = (std::f64::consts::E / contract.bias_bound).ln();
        (
            ceil_u64(self.depth_factor * inv_sd),
            ceil_u64(self.query_factor * inv_sd * log_bias),
        )
    }

    pub fn uqae2_cost(&self, bias_bound: f64, precision: f64, fail_prob: f64) -> (u64, u64) {
        let inv_eps = precision.recip();
        let log_fail = fail_prob.recip().ln().max(1.0);
        let log_bias = (std::f64::consts::E / bias_bound).ln();
        (
            ceil_u64(self.depth_factor * inv_eps),
            ceil_u64(self.query_factor * inv_eps * log_fail * log_bias),
        )
    }
}

// `as` saturates, so infinite costs become u64::MAX.
fn ceil_u64(x: f64) -> u64 {
    x.ceil() as u64
}

/// A type I unbiased amplitude estimator.
pub trait Uqae1Estimator: Sync {
    fn estimate(&self, contract: &Uqae1Contract, seed: SeedSpec, ledger: &mut ResourceLedger) -> Result<f64>;
}

/// A type II unbiased amplitude estimator.
pub trait Uqae2Estimator: Sync {
    fn estimate(&self, contract: &Uqae2Contract, seed: SeedSpec, ledger: &mut ResourceLedger) -> Result<f64>;
}

/// A type II unbiased phase estimator.
pub trait Uqpe2Estimator: Sync {
    fn estimate(&self, contract: &Uqpe2Contract, seed: SeedSpec, ledger: &mut ResourceLedger) -> Result<Angle>;
}
