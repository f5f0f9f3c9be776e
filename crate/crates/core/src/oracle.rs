//! Bernoulli samplers standing in for quantum circuits.
//!
//! The simulator knows the true amplitude and draws measurement outcomes
//! from the exact outcome probability, charging each call to a ledger in
//! units of one oracle application.

use rand_distr::{Binomial, Distribution};

use crate::error::Result;
use crate::ledger::ResourceLedger;
use crate::poly::Polynomial;
use crate::rallfuller::SemiPellianPoly;
use crate::seed::SeedSpec;
use crate::types::Amplitude;

/// Amplitude amplification with `k` Grover iterates. Measuring after `k`
/// iterates gives heads with probability `sin^2((2k + 1) asin(a))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroverOracle {
    amplitude: Amplitude,
    theta: f64,
}

impl GroverOracle {
    pub fn new(amplitude: Amplitude) -> Self {
        Self {
            amplitude,
            theta: amplitude.value().asin(),
        }
    }

    pub fn amplitude(&self) -> Amplitude {
        self.amplitude
    }

    /// `asin(a)`, in `[0, pi/2]`.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn head_probability(&self, k: u64) -> f64 {
        let s = ((2 * k + 1) as f64 * self.theta).sin();
        (s * s).clamp(0.0, 1.0)
    }
}

/// Samples `shots` measurements after `k` Grover iterates and returns the
/// head count. Depth `k`; each shot costs `max(k, 1)` queries since even a
/// bare measurement consumes one state preparation.
pub fn grover_sample(oracle: &GroverOracle, k: u64, shots: u64, seed: SeedSpec, ledger: &mut ResourceLedger) -> u64 {
    ledger.charge(k, shots.saturating_mul(k.max(1)));
    binomial(shots, oracle.head_probability(k), seed)
}

/// Measurement whose head probability is `P(a)^2` for a bounded polynomial `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyOracle {
    poly: Polynomial,
    amplitude: Amplitude,
}

impl PolyOracle {
    /// Checks `|P| <= 1` on the certification grid before accepting `poly`.
    pub fn new(poly: Polynomial, amplitude: Amplitude) -> Result<Self> {
        poly.certify_unit_bound()?;
        Ok(Self { poly, amplitude })
    }

    /// Oracle for a semi-Pellian polynomial, which carries its own bound
    /// certificate from the same grid.
    pub fn from_semi_pellian(poly: &SemiPellianPoly, amplitude: Amplitude) -> Self {
        Self {
            poly: poly.polynomial().clone(),
            amplitude,
        }
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.poly
    }

    pub fn degree(&self) -> u64 {
        self.poly.degree() as u64
    }

    pub fn head_probability(&self) -> f64 {
        let v = self.poly.eval(self.amplitude.value());
        (v * v).clamp(0.0, 1.0)
    }
}

/// Samples `shots` draws of Bernoulli(`P(a)^2`). Depth `deg P`, and
/// `deg P` queries per shot.
pub fn poly_sample(oracle: &PolyOracle, shots: u64, seed: SeedSpec, ledger: &mut ResourceLedger) -> u64 {
    let degree = oracle.degree();
    ledger.charge(degree, shots.saturating_mul(degree));
    binomial(shots, oracle.head_probability(), seed)
}

fn binomial(shots: u64, p: f64, seed: SeedSpec) -> u64 {
    // p is clamped to [0, 1] by every caller, which is all Binomial::new checks.
    let dist = Binomial::new(shots, p).expect("probability in [0, 1]");
    dist.sample(&mut seed.rng())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn amp(a: f64) -> Amplitude {
        Amplitude::new(a).unwrap()
    }

    #[test]
    fn certain_and_impossible_outcomes() {
        let seed = SeedSpec::new(1, 0);
        let mut ledger = ResourceLedger::new();
        assert_eq!(
            grover_sample(&GroverOracle::new(amp(1.0)), 0, 100, seed, &mut ledger),
            100
        );
        for k in [0, 1, 5, 17] {
            assert_eq!(
                grover_sample(&GroverOracle::new(amp(0.0)), k, 100, seed, &mut ledger),
                0
            );
        }
    }

    #[test]
    fn one_iterate_rotates_half_to_certainty() {
        let o = GroverOracle::new(amp(0.5));
        assert!((o.theta() - std::f64::consts::FRAC_PI_6).abs() < 1e-15);
        assert!((o.head_probability(1) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn grover_charges() {
        let o = GroverOracle::new(amp(0.3));
        let mut ledger = ResourceLedger::new();
        grover_sample(&o, 0, 10, SeedSpec::new(0, 0), &mut ledger);
        assert_eq!((ledger.max_depth(), ledger.total_queries()), (0, 10));
        grover_sample(&o, 4, 10, SeedSpec::new(0, 1), &mut ledger);
        assert_eq!((ledger.max_depth(), ledger.total_queries()), (4, 50));
        grover_sample(&o, 2, 3, SeedSpec::new(0, 2), &mut ledger);
        assert_eq!((ledger.max_depth(), ledger.total_queries()), (4, 56));
    }

    #[test]
    fn constant_polynomial_always_heads() {
        let o = PolyOracle::new(Polynomial::monomial(vec![1.0]), amp(0.7)).unwrap();
        let mut ledger = ResourceLedger::new();
        assert_eq!(poly_sample(&o, 50, SeedSpec::new(3, 0), &mut ledger), 50);
        assert_eq!(ledger.total_queries(), 0);
    }

    #[test]
    fn identity_polynomial_gives_square() {
        let o = PolyOracle::new(Polynomial::monomial(vec![0.0, 1.0]), amp(0.6)).unwrap();
        assert!((o.head_probability() - 0.36).abs() < 1e-15);
        let mut ledger = ResourceLedger::new();
        let shots = 1_000_000;
        let heads = poly_sample(&o, shots, SeedSpec::new(5, 0), &mut ledger);
        let frac = heads as f64 / shots as f64;
        let sigma = (0.36f64 * 0.64 / shots as f64).sqrt();
        assert!((frac - 0.36).abs() < 5.0 * sigma);
        assert_eq!((ledger.max_depth(), ledger.total_queries()), (1, shots));
    }

    #[test]
    fn unbounded_polynomial_rejected() {
        let p = Polynomial::monomial(vec![0.0, 0.0, 1.5]);
        assert!(PolyOracle::new(p, amp(0.1)).is_err());
    }
}
