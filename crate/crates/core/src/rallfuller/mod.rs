//! Interval-shrinking amplitude estimation with even bounded polynomials.
//!
//! Starting from `[0, 1]`, each step builds an even polynomial `P` that sits
//! below `1/2 - gamma` on the left tenth of the current interval and above
//! `1/2 + gamma` on the right tenth, tosses a coin with head probability
//! `P(a)^2`, and discards the tenth the coin rules out. After
//! `T = ceil(log_0.9 eps)` steps the interval is shorter than `eps`.
//!
//! While the interval midpoint is small compared to `Delta^{1-beta}` the
//! polynomial must have degree of order `1/Delta` (full depth); once the
//! midpoint is large enough, degree `Delta^{-(1-beta)}` suffices (low depth).

mod erf;
mod pellian;

pub use erf::{erf_poly, erf_poly_cached, ErfPoly, ERF_DEGREE_CAP, ERF_DOMAIN};
pub use pellian::{semi_pellian, GapCertificate, SemiPellianPoly};

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::ledger::ResourceLedger;
use crate::oracle::{poly_sample, PolyOracle};
use crate::seed::SeedSpec;
use crate::types::{Amplitude, TargetSpec};

/// Per-step shrink factor of the confidence interval.
pub const SHRINK: f64 = 0.9;

/// Tolerance on the parameter preconditions, which hold with equality at
/// branch boundaries.
const PRECONDITION_TOL: f64 = 1e-12;

/// `[a_min, a_min + width]` inside `[0, 1]`.
///
/// The width is stored rather than `a_max`, so each step multiplies it by
/// exactly [`SHRINK`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    a_min: f64,
    width: f64,
}

/// The end of the interval a step discards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl ConfidenceInterval {
    pub fn unit() -> Self {
        Self { a_min: 0.0, width: 1.0 }
    }

    pub fn new(a_min: f64, a_max: f64) -> Result<Self> {
        ensure(a_min >= 0.0, "a_min", a_min, "must be nonnegative")?;
        ensure(a_max <= 1.0, "a_max", a_max, "must be at most 1")?;
        ensure(a_min < a_max, "a_max", a_max, "must exceed a_min")?;
        Ok(Self {
            a_min,
            width: a_max - a_min,
        })
    }

    pub fn a_min(&self) -> f64 {
        self.a_min
    }

    pub fn a_max(&self) -> f64 {
        self.a_min + self.width
    }

    /// `Delta`.
    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn a_mid(&self) -> f64 {
        self.a_min + 0.5 * self.width
    }

    pub fn contains(&self, a: f64) -> bool {
        (self.a_min..=self.a_max()).contains(&a)
    }

    /// Drops a tenth of the interval from `side`, re-clipped into `[0, 1]`.
    pub fn shrink(&self, side: Side) -> Self {
        let width = SHRINK * self.width;
        let a_min = match side {
            Side::Left => self.a_min + (1.0 - SHRINK) * self.width,
            Side::Right => self.a_min,
        };
        Self {
            a_min: a_min.clamp(0.0, 1.0 - width),
            width,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    LowDepth,
    FullDepth,
}

/// Polynomial and coin-test settings for one step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RfStepParams {
    pub tau: f64,
    pub eta: f64,
    pub gamma: f64,
    pub k: f64,
    pub branch: Branch,
}

/// `kappa(tau) = 1/2 sqrt(2 ln(2 / (pi tau^2)))`, for `0 < tau <= sqrt(2/pi)`.
pub fn kappa(tau: f64) -> Result<f64> {
    let tau_max = (2.0 / std::f64::consts::PI).sqrt();
    ensure(tau > 0.0 && tau <= tau_max, "tau", tau, "must lie in (0, sqrt(2/pi)]")?;
    // the log argument can round just below 1 at the upper end
    let log = (2.0 / (std::f64::consts::PI * tau * tau)).ln().max(0.0);
    Ok(0.5 * (2.0 * log).sqrt())
}

/// `tau kappa(tau)`; at most 0.01 whenever `tau <= 0.004`.
pub fn u(tau: f64) -> Result<f64> {
    Ok(tau * kappa(tau)?)
}

/// Whether a setting meets the polynomial-construction preconditions
/// `k in [1, 2/Delta]` and `a_mid >= kappa(tau)/k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lemma3Check {
    pub k_in_range: bool,
    pub mid_condition: bool,
}

pub fn lemma3_check(params: &RfStepParams, interval: &ConfidenceInterval) -> Result<Lemma3Check> {
    let k = params.k;
    let hi = 2.0 / interval.width();
    Ok(Lemma3Check {
        k_in_range: k >= 1.0 - PRECONDITION_TOL && k <= hi * (1.0 + PRECONDITION_TOL),
        mid_condition: interval.a_mid() >= kappa(params.tau)? / k * (1.0 - PRECONDITION_TOL),
    })
}

/// Step parameters.
///
/// Low depth, when `a_mid >= Delta^{1-beta}/2` and `Delta^beta <= 0.4`:
/// `tau = eta = gamma = 0.01 Delta^beta`, `k = 2 kappa Delta^{-(1-beta)}`.
/// Full depth otherwise: `tau = eta = gamma = 0.01`, `k = kappa / (2 Delta)`.
///
/// `k in [1, 2/Delta]` is checked on both branches and `a_mid >= kappa/k`
/// on the low-depth branch; the full-depth polynomial separates the
/// segments without the latter.
pub fn rf_params(interval: &ConfidenceInterval, beta: f64) -> Result<RfStepParams> {
    ensure((0.0..=1.0).contains(&beta), "beta", beta, "must lie in [0, 1]")?;
    let delta = interval.width();
    let low = interval.a_mid() >= 0.5 * delta.powf(1.0 - beta) && delta.powf(beta) <= 0.4;
    let params = if low {
        let tau = 0.01 * delta.powf(beta);
        RfStepParams {
            tau,
            eta: tau,
            gamma: tau,
            k: 2.0 * kappa(tau)? * delta.powf(-(1.0 - beta)),
            branch: Branch::LowDepth,
        }
    } else {
        RfStepParams {
            tau: 0.01,
            eta: 0.01,
            gamma: 0.01,
            k: 0.5 * kappa(0.01)? / delta,
            branch: Branch::FullDepth,
        }
    };
    let check = lemma3_check(&params, interval)?;
    if !check.k_in_range || (params.branch == Branch::LowDepth && !check.mid_condition) {
        return Err(Error::StepPrecondition(format!(
            "{:?} branch at [{}, {}]: k = {}, {:?}",
            params.branch,
            interval.a_min(),
            interval.a_max(),
            params.k,
            check
        )));
    }
    Ok(params)
}

/// The uncorrected setting: no `Delta^beta <= 0.4` condition and
/// `k = kappa/2 * Delta^{-(1-beta)}` or `kappa/2 * Delta^{-1}`. Not checked.
pub fn rf_params_original(interval: &ConfidenceInterval, beta: f64) -> Result<RfStepParams> {
    ensure((0.0..=1.0).contains(&beta), "beta", beta, "must lie in [0, 1]")?;
    let delta = interval.width();
    if interval.a_mid() >= 0.5 * delta.powf(1.0 - beta) {
        let tau = 0.01 * delta.powf(beta);
        Ok(RfStepParams {
            tau,
            eta: tau,
            gamma: tau,
            k: 0.5 * kappa(tau)? * delta.powf(-(1.0 - beta)),
            branch: Branch::LowDepth,
        })
    } else {
        Ok(RfStepParams {
            tau: 0.01,
            eta: 0.01,
            gamma: 0.01,
            k: 0.5 * kappa(0.01)? / delta,
            branch: Branch::FullDepth,
        })
    }
}

/// Tosses needed for [`coin_test`] to err with probability at most `delta`:
/// `ceil(ln(1/delta) / (2 gamma^2))`.
pub fn coin_shots(gamma: f64, delta: f64) -> Result<u64> {
    ensure(gamma > 0.0, "gamma", gamma, "must be positive")?;
    ensure(delta > 0.0 && delta < 1.0, "delta", delta, "must lie in (0, 1)")?;
    Ok((0.5 / (gamma * gamma) * (1.0 / delta).ln()).ceil() as u64)
}

/// `heads >= m (1/4 + gamma^2)`: the coin's amplitude is judged to be at
/// least `1/2 + gamma` rather than at most `1/2 - gamma`.
pub fn coin_test(heads: u64, m: u64, gamma: f64) -> bool {
    heads as f64 >= m as f64 * (0.25 + gamma * gamma)
}

/// When the low-depth branch becomes available for amplitude `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseThreshold {
    /// `ceil(ceil(log_0.9 a) / (1 - beta))`.
    pub t_star: u64,
    /// `a^{1/(1-beta)}`: runs targeting a coarser precision finish before
    /// reaching the low-depth phase.
    pub epsilon_threshold: f64,
}

pub fn phase_threshold(a: f64, beta: f64) -> Result<PhaseThreshold> {
    ensure(a > 0.0 && a <= 1.0, "a", a, "must lie in (0, 1]")?;
    ensure((0.0..1.0).contains(&beta), "beta", beta, "must lie in [0, 1)")?;
    let steps = log_shrink(a).ceil().max(0.0);
    Ok(PhaseThreshold {
        t_star: (steps / (1.0 - beta)).ceil() as u64,
        epsilon_threshold: a.powf(1.0 / (1.0 - beta)),
    })
}

/// `log_0.9 x`.
pub fn log_shrink(x: f64) -> f64 {
    x.ln() / SHRINK.ln()
}

/// Number of steps to get below `epsilon`.
pub fn step_count(epsilon: f64) -> Result<u64> {
    ensure(epsilon > 0.0 && epsilon < 1.0, "epsilon", epsilon, "must lie in (0, 1)")?;
    Ok(log_shrink(epsilon).ceil() as u64)
}

/// One iteration of the main loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: u64,
    pub a_min: f64,
    pub a_max: f64,
    pub width: f64,
    pub params: RfStepParams,
    pub degree: u64,
    pub shots: u64,
    pub heads: u64,
    pub discarded: Side,
    pub certificate: GapCertificate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RallFullerRun {
    pub estimate: f64,
    pub final_interval: ConfidenceInterval,
    pub steps: Vec<StepRecord>,
}

/// Runs the main loop against the simulated amplitude `truth`. Step `t`
/// samples under child seed `t`; the estimate is the final midpoint.
pub fn rall_fuller_estimate(
    truth: Amplitude,
    target: &TargetSpec,
    seed: SeedSpec,
    ledger: &mut ResourceLedger,
) -> Result<RallFullerRun> {
    target.validate()?;
    let steps_total = step_count(target.epsilon)?;
    let step_delta = target.delta / steps_total as f64;
    let mut interval = ConfidenceInterval::unit();
    let mut steps = Vec::with_capacity(steps_total as usize);
    for t in 0..steps_total {
        let params = rf_params(&interval, target.beta)?;
        let poly = semi_pellian(params.tau, params.eta, params.k, interval.a_mid())?;
        let certificate = poly.gap_certificate(&interval, params.gamma)?;
        let oracle = PolyOracle::from_semi_pellian(&poly, truth);
        let shots = coin_shots(params.gamma, step_delta)?;
        let heads = poly_sample(&oracle, shots, seed.derive(t), ledger);
        let discarded = if coin_test(heads, shots, params.gamma) {
            Side::Left
        } else {
            Side::Right
        };
        steps.push(StepRecord {
            t,
            a_min: interval.a_min(),
            a_max: interval.a_max(),
            width: interval.width(),
            params,
            degree: oracle.degree(),
            shots,
            heads,
            discarded,
            certificate,
        });
        interval = interval.shrink(discarded);
    }
    Ok(RallFullerRun {
        estimate: interval.a_mid(),
        final_interval: interval,
        steps,
    })
}
