//! Empirical contract checks. Each one draws `n` samples under child seeds
//! and compares the sample moments against the contract at four standard
//! errors.

use serde::Serialize;

use super::{Uqae1Contract, Uqae1Estimator, Uqae2Contract, Uqae2Estimator};
use crate::error::Result;
use crate::ledger::ResourceLedger;
use crate::seed::SeedSpec;
use crate::stats;
use crate::types::Amplitude;

const SIGMAS: f64 = 4.0;
const VARIANCE_SLACK: f64 = 1.05;
const ABS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Uqae1Conformance {
    pub samples: usize,
    pub mean: f64,
    pub variance: f64,
    pub bias_ok: bool,
    pub variance_ok: bool,
}

impl Uqae1Conformance {
    pub fn passes(&self) -> bool {
        self.bias_ok && self.variance_ok
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Uqae2Conformance {
    pub samples: usize,
    pub mean: f64,
    pub out_of_precision_rate: f64,
    pub max_abs_output: f64,
    pub bias_ok: bool,
    pub precision_ok: bool,
    pub cap_ok: bool,
}

impl Uqae2Conformance {
    pub fn passes(&self) -> bool {
        self.bias_ok && self.precision_ok && self.cap_ok
    }
}

fn draw(n: usize, seed: SeedSpec, mut f: impl FnMut(SeedSpec, &mut ResourceLedger) -> Result<f64>) -> Result<Vec<f64>> {
    let mut ledger = ResourceLedger::new();
    (0..n as u64).map(|i| f(seed.derive(i), &mut ledger)).collect()
}

/// `|mean - a| <= B + 4 sqrt(V/n)` and `variance <= 1.05 V`.
pub fn check_uqae1(
    estimator: &dyn Uqae1Estimator,
    contract: &Uqae1Contract,
    truth: Amplitude,
    n: usize,
    seed: SeedSpec,
) -> Result<Uqae1Conformance> {
    let xs = draw(n, seed, |s, l| estimator.estimate(contract, s, l))?;
    let mean = stats::mean(&xs);
    let variance = stats::variance(&xs);
    let v = contract.variance_bound;
    Ok(Uqae1Conformance {
        samples: n,
        mean,
        variance,
        bias_ok: (mean - truth.value()).abs() <= contract.bias_bound + SIGMAS * (v / n as f64).sqrt() + ABS_TOL,
        variance_ok: variance <= v * VARIANCE_SLACK + ABS_TOL,
    })
}

/// `|mean - a| <= B + 4 sd/sqrt(n)`, out-of-precision rate at most
/// `delta + 4 sqrt(delta/n)`, and every output within the cap.
pub fn check_uqae2(
    estimator: &dyn Uqae2Estimator,
    contract: &Uqae2Contract,
    truth: Amplitude,
    n: usize,
    seed: SeedSpec,
) -> Result<Uqae2Conformance> {
    let xs = draw(n, seed, |s, l| estimator.estimate(contract, s, l))?;
    let a = truth.value();
    let mean = stats::mean(&xs);
    let sd = stats::variance(&xs).sqrt();
    let bad = xs
        .iter()
        .filter(|x| (*x - a).abs() > contract.precision + ABS_TOL)
        .count();
    let rate = bad as f64 / n as f64;
    let max_abs_output = xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let delta = contract.fail_prob;
    Ok(Uqae2Conformance {
        samples: n,
        mean,
        out_of_precision_rate: rate,
        max_abs_output,
        bias_ok: (mean - a).abs() <= contract.bias_bound + SIGMAS * sd / (n as f64).sqrt() + ABS_TOL,
        precision_ok: rate <= delta + SIGMAS * (delta / n as f64).sqrt(),
        cap_ok: max_abs_output <= contract.output_cap + ABS_TOL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blackbox::{Monkey, SyntheticUqae1, SyntheticUqae2};

    fn amp(a: f64) -> Amplitude {
        Amplitude::new(a).unwrap()
    }

    #[test]
    fn synthetic_uqae1_conforms() {
        let c = Uqae1Contract::new(0.02, 0.01).unwrap();
        let est = SyntheticUqae1::worst_bias(amp(0.4));
        let r = check_uqae1(&est, &c, amp(0.4), 100_000, SeedSpec::new(1, 0)).unwrap();
        assert!(r.passes(), "{r:?}");
    }

    #[test]
    fn monkey_fails_type1_with_small_bias_bound() {
        let monkey = Monkey {
            truth: amp(0.5),
            epsilon: 0.1,
        };
        let c = Uqae1Contract::new(0.05, 0.01).unwrap();
        let r = check_uqae1(&monkey, &c, amp(0.5), 10_000, SeedSpec::new(1, 0)).unwrap();
        assert!(!r.bias_ok && r.variance_ok);
    }

    #[test]
    fn monkey_conforms_to_type2_with_full_bias() {
        let monkey = Monkey {
            truth: amp(0.5),
            epsilon: 0.1,
        };
        let c = Uqae2Contract::new(0.1, 0.1, 0.0, 1.0).unwrap();
        let r = check_uqae2(&monkey, &c, amp(0.5), 10_000, SeedSpec::new(1, 0)).unwrap();
        assert!(r.passes(), "{r:?}");
    }

    #[test]
    fn worst_case_uqae2_conforms() {
        let c = Uqae2Contract::new(0.01, 0.05, 0.02, 1.0).unwrap();
        let est = SyntheticUqae2::worst_case(amp(0.3));
        let r = check_uqae2(&est, &c, amp(0.3), 200_000, SeedSpec::new(2, 0)).unwrap();
        assert!(r.passes(), "{r:?}");
    }
}
