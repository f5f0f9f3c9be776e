//! Parameter settings that make specific unbiased estimators honour the
//! aggregation contracts.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{ensure, Result};
use crate::types::TargetSpec;

/// Variance budget `s` shared by both Cornelissen-style settings.
pub const CORNELISSEN_S: f64 = 100.0 / 225.0;
/// Part of the variance budget spent on bias in the amplitude setting.
pub const CORNELISSEN_S_PRIME: f64 = 9.0 / 225.0;
/// Bias budget as a fraction of the precision.
pub const CORNELISSEN_R: f64 = 0.05;

/// `(K, B)` for a Cornelissen-style unbiased estimator, with the bias and
/// variance bounds the setting guarantees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CornelissenParams {
    pub k: f64,
    pub bias: f64,
    pub implied_bias_bound: f64,
    pub implied_variance_bound: f64,
}

/// `K = 15 eps^{-(1-beta)}`, `B = min(9/225 eps^{2-2beta}, 0.05 eps)`.
/// Variance is then at most `91/K^2 + B <= 4/9 eps^{2-2beta}`.
pub fn cornelissen_amp_params(target: &TargetSpec) -> Result<CornelissenParams> {
    target.validate()?;
    let (eps, beta) = (target.epsilon, target.beta);
    let var_scale = eps.powf(2.0 - 2.0 * beta);
    Ok(CornelissenParams {
        k: 15.0 * eps.powf(-(1.0 - beta)),
        bias: (CORNELISSEN_S_PRIME * var_scale).min(CORNELISSEN_R * eps),
        implied_bias_bound: CORNELISSEN_R * eps,
        implied_variance_bound: CORNELISSEN_S * var_scale,
    })
}

/// `K = sqrt(3) eps^{-(1-beta)}`, `B = min(1/9 eps^{2-2beta}, 0.05 eps)`.
/// Variance is then at most `1/K^2 + B <= 4/9 eps^{2-2beta}`.
pub fn cornelissen_phase_params(target: &TargetSpec) -> Result<CornelissenParams> {
    target.validate()?;
    let (eps, beta) = (target.epsilon, target.beta);
    let var_scale = eps.powf(2.0 - 2.0 * beta);
    Ok(CornelissenParams {
        k: 3f64.sqrt() * eps.powf(-(1.0 - beta)),
        bias: (var_scale / 9.0).min(CORNELISSEN_R * eps),
        implied_bias_bound: CORNELISSEN_R * eps,
        implied_variance_bound: CORNELISSEN_S * var_scale,
    })
}

/// Parameters `(m, n, M)` of the van Apeldoorn phase estimator.
///
/// The real-valued system is solved first (`m`, `n_real`, `big_m_real`),
/// then rounded: `m_int = ceil(m)` and `n` is recomputed from `m_int` so
/// both the bias and failure bounds keep holding, and `M` is rounded up.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApeldoornParams {
    pub m: f64,
    pub m_int: u64,
    pub n_real: f64,
    pub n: u32,
    pub big_m_real: f64,
    pub big_m: u64,
    pub r: f64,
    pub s: f64,
}

/// `ln(4/delta)`.
fn log_four_over(delta: f64) -> f64 {
    (4.0 / delta).ln()
}

fn n_for(m: f64, eps: f64, delta: f64) -> f64 {
    (128.0 * PI * (m + 1.0) * log_four_over(delta) / (delta * eps * eps)).log2()
}

pub fn apeldoorn_phase_params(target: &TargetSpec) -> Result<ApeldoornParams> {
    target.validate()?;
    let (eps, delta, beta) = (target.epsilon, target.delta, target.beta);
    let log4 = log_four_over(delta);
    let m = -4.0 * (eps * eps * delta / (64.0 * log4)).ln();
    let n_real = n_for(m, eps, delta);
    let m_int = m.ceil() as u64;
    let n = n_for(m_int as f64, eps, delta).ceil() as u32;
    let big_m_real = 10.0 * (1.0 + 2f64.powi(-(n as i32))) * eps.powf(-(1.0 - beta));
    let big_m = big_m_real.ceil() as u64;
    ensure(
        n as f64 >= (PI * m_int as f64).log2(),
        "n",
        n as f64,
        "must be at least log2(pi m)",
    )?;
    let r = delta / (4.0 * log4);
    Ok(ApeldoornParams {
        m,
        m_int,
        n_real,
        n,
        big_m_real,
        big_m,
        r,
        s: 0.5 - r,
    })
}

impl ApeldoornParams {
    fn two_pow_neg_n(&self) -> f64 {
        2f64.powi(-(self.n as i32))
    }

    /// `32 pi (m + 1) 2^-n` at the rounded parameters.
    pub fn bias_bound(&self) -> f64 {
        32.0 * PI * (self.m_int as f64 + 1.0) * self.two_pow_neg_n()
    }

    /// `4 pi (m + 1) 2^-n + 2 e^{-m/4}` at the rounded parameters.
    pub fn failure_bound(&self) -> f64 {
        4.0 * PI * (self.m_int as f64 + 1.0) * self.two_pow_neg_n() + 2.0 * (-(self.m_int as f64) / 4.0).exp()
    }

    /// `10 / M (1 + 2^-n)` at the rounded parameters.
    pub fn precision(&self) -> f64 {
        10.0 / self.big_m as f64 * (1.0 + self.two_pow_neg_n())
    }

    /// `M / 2`, rounded up.
    pub fn max_depth(&self) -> u64 {
        self.big_m.div_ceil(2)
    }

    /// `(2m + 1) M`.
    pub fn total_queries(&self) -> u64 {
        (2 * self.m_int + 1).saturating_mul(self.big_m)
    }
}
