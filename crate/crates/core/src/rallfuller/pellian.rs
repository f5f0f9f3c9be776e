use serde::{Deserialize, Serialize};
use std::sync::Arc;

use super::erf::{erf_poly_cached, ErfPoly};
use super::ConfidenceInterval;
use crate::error::{ensure, Error, Result};
use crate::poly::{chebyshev_interpolate, uniform_grid, Polynomial, CERT_TOL, GRID_PER_UNIT};

/// Odd Chebyshev coefficients larger than this mean the expansion is not even.
const PARITY_TOL: f64 = 1e-9;

/// Fewest grid points on a segment, however short.
const MIN_SEGMENT_POINTS: usize = 101;

/// Values of `P` on the two outer tenths of a confidence interval.
///
/// `left_max` and `right_min` are the polynomial itself; `left_bound` and
/// `right_bound` are the erf-based envelopes of it, which only use that the
/// erf approximation is within `eta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapCertificate {
    pub left_max: f64,
    pub right_min: f64,
    pub left_bound: f64,
    pub right_bound: f64,
    pub gamma: f64,
}

/// `P(a) = f0(a - a_mid) + f0(-a - a_mid)` with
/// `f0(x) = (1 + eta + P_erf(x)) / (2 + 4 eta + tau)`, an even polynomial
/// bounded by one on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct SemiPellianPoly {
    tau: f64,
    eta: f64,
    k: f64,
    a_mid: f64,
    erf: Arc<ErfPoly>,
    poly: Polynomial,
}

impl SemiPellianPoly {
    pub fn polynomial(&self) -> &Polynomial {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    pub fn coefficients(&self) -> &[f64] {
        self.poly.coefficients()
    }

    pub fn eval(&self, a: f64) -> f64 {
        self.poly.eval(a)
    }

    pub fn erf_polynomial(&self) -> &ErfPoly {
        &self.erf
    }

    fn norm(&self) -> f64 {
        2.0 + 4.0 * self.eta + self.tau
    }

    /// Evaluates the defining expression directly instead of the expansion.
    pub fn eval_direct(&self, a: f64) -> f64 {
        let f0 = |x: f64| (1.0 + self.eta + self.erf.eval(x)) / self.norm();
        f0(a - self.a_mid) + f0(-a - self.a_mid)
    }

    /// Checks `P <= 1/2 - gamma` on `[a_min, a_min + 0.1 Delta]` and
    /// `P >= 1/2 + gamma` on `[a_max - 0.1 Delta, a_max]`.
    pub fn gap_certificate(&self, interval: &ConfidenceInterval, gamma: f64) -> Result<GapCertificate> {
        let segment = 0.1 * interval.width();
        let points = ((segment * GRID_PER_UNIT as f64).ceil() as usize + 1).max(MIN_SEGMENT_POINTS);
        let erf = |x: f64| libm::erf(self.k * x);
        let norm = self.norm();

        let (mut left_max, mut left_bound) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for a in uniform_grid(interval.a_min(), interval.a_min() + segment, points) {
            left_max = left_max.max(self.eval(a));
            let f = erf(a - self.a_mid) + erf(-a - self.a_mid);
            left_bound = left_bound.max((2.0 + 4.0 * self.eta + f) / norm);
        }
        let (mut right_min, mut right_bound) = (f64::INFINITY, f64::INFINITY);
        for a in uniform_grid(interval.a_max() - segment, interval.a_max(), points) {
            right_min = right_min.min(self.eval(a));
            right_bound = right_bound.min((1.0 + erf(a - self.a_mid)) / norm);
        }

        if left_max > 0.5 - gamma + CERT_TOL {
            return Err(Error::GapViolation {
                segment: "left",
                value: left_max,
                required: 0.5 - gamma,
            });
        }
        if right_min < 0.5 + gamma - CERT_TOL {
            return Err(Error::GapViolation {
                segment: "right",
                value: right_min,
                required: 0.5 + gamma,
            });
        }
        Ok(GapCertificate {
            left_max,
            right_min,
            left_bound,
            right_bound,
            gamma,
        })
    }
}

/// Builds the even polynomial in `a` by exact Chebyshev interpolation of the
/// defining expression, then certifies parity and `|P| <= 1`.
pub fn semi_pellian(tau: f64, eta: f64, k: f64, a_mid: f64) -> Result<SemiPellianPoly> {
    ensure(tau > 0.0 && tau < 1.0, "tau", tau, "must lie in (0, 1)")?;
    ensure(a_mid > 0.0 && a_mid <= 1.0, "a_mid", a_mid, "must lie in (0, 1]")?;
    let erf = erf_poly_cached(k, eta)?;
    let mut sp = SemiPellianPoly {
        tau,
        eta,
        k,
        a_mid,
        erf,
        poly: Polynomial::chebyshev(vec![0.0]),
    };
    let mut coeffs = chebyshev_interpolate(|a| sp.eval_direct(a), sp.erf.degree().max(2));
    let scale = coeffs.iter().fold(1.0f64, |m, c| m.max(c.abs()));
    for (index, c) in coeffs.iter_mut().enumerate().skip(1).step_by(2) {
        if c.abs() > PARITY_TOL * scale {
            return Err(Error::Parity { index, value: *c });
        }
        *c = 0.0;
    }
    sp.poly = Polynomial::chebyshev(coeffs);
    sp.poly.certify_unit_bound()?;
    Ok(sp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Parity;
    use crate::rallfuller::kappa;

    #[test]
    fn even_and_matches_definition() {
        let p = semi_pellian(0.01, 0.01, 4.0, 0.4).unwrap();
        assert_eq!(p.polynomial().parity(), Some(Parity::Even));
        for a in [-0.9, -0.3, 0.0, 0.25, 0.8, 1.0] {
            assert!((p.eval(a) - p.eval_direct(a)).abs() < 1e-10, "a = {a}");
            assert_eq!(p.eval(a), p.eval(-a));
        }
    }

    #[test]
    fn full_depth_envelopes_at_the_origin() {
        let interval = ConfidenceInterval::unit();
        let k = 0.5 * kappa(0.01).unwrap() / interval.width();
        let p = semi_pellian(0.01, 0.01, k, interval.a_mid()).unwrap();
        let cert = p.gap_certificate(&interval, 0.01).unwrap();
        assert!((cert.left_bound - 0.472_455_189_543_938_56).abs() < 1e-9, "{cert:?}");
        assert!((cert.right_bound - 0.705_407_367_350_196_9).abs() < 1e-9, "{cert:?}");
        assert!(cert.left_max <= cert.left_bound && cert.right_min >= cert.right_bound);
    }

    #[test]
    fn violated_gap_is_an_error() {
        // gentle slope cannot separate the segments by 0.2
        let interval = ConfidenceInterval::unit();
        let p = semi_pellian(0.01, 0.01, 1.0, 0.5).unwrap();
        assert!(matches!(
            p.gap_certificate(&interval, 0.2),
            Err(Error::GapViolation { .. })
        ));
    }
}
