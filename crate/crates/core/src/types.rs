use serde::{Deserialize, Serialize};

use crate::error::{ensure, Result};

/// An amplitude `a` in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Amplitude(f64);

impl Amplitude {
    pub fn new(value: f64) -> Result<Self> {
        ensure((0.0..=1.0).contains(&value), "amplitude", value, "must lie in [0, 1]")?;
        Ok(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Amplitude {
    type Error = crate::Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

impl From<Amplitude> for f64 {
    fn from(a: Amplitude) -> f64 {
        a.0
    }
}

/// Target precision `epsilon`, failure probability `delta` and depth knob `beta`.
///
/// `beta = 0` allows full-depth circuits; `beta = 1` restricts the estimator
/// to constant depth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetSpec {
    pub epsilon: f64,
    pub delta: f64,
    pub beta: f64,
}

impl TargetSpec {
    pub fn new(epsilon: f64, delta: f64, beta: f64) -> Result<Self> {
        let t = Self { epsilon, delta, beta };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(
            self.epsilon > 0.0 && self.epsilon < 1.0,
            "epsilon",
            self.epsilon,
            "must lie in (0, 1)",
        )?;
        ensure(
            self.delta > 0.0 && self.delta < 1.0,
            "delta",
            self.delta,
            "must lie in (0, 1)",
        )?;
        ensure(
            (0.0..=1.0).contains(&self.beta),
            "beta",
            self.beta,
            "must lie in [0, 1]",
        )
    }

    /// Precision the hardware can reach on its own, `epsilon^(1 - beta)`.
    pub fn hardware_precision(&self) -> f64 {
        self.epsilon.powf(1.0 - self.beta)
    }
}

/// Best precision reachable by a device of depth `hardware_depth` when a
/// standard estimator needs depth `depth_constant / eps` for precision `eps`.
pub fn hardware_precision(hardware_depth: u64, depth_constant: f64) -> Result<f64> {
    ensure(
        hardware_depth >= 1,
        "hardware_depth",
        hardware_depth as f64,
        "must be at least 1",
    )?;
    ensure(
        depth_constant > 0.0,
        "depth_constant",
        depth_constant,
        "must be positive",
    )?;
    Ok(depth_constant / hardware_depth as f64)
}

/// Depth knob matching a device: the `beta` with `eps_hw = epsilon^(1 - beta)`,
/// clamped to `[0, 1]`.
pub fn beta_from_hardware(hardware_depth: u64, depth_constant: f64, epsilon: f64) -> Result<f64> {
    ensure(epsilon > 0.0 && epsilon < 1.0, "epsilon", epsilon, "must lie in (0, 1)")?;
    let eps_hw = hardware_precision(hardware_depth, depth_constant)?;
    Ok((1.0 - eps_hw.ln() / epsilon.ln()).clamp(0.0, 1.0))
}
