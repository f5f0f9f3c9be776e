use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};

use crate::error::{ensure, Error, Result};
use crate::poly::{chebyshev_interpolate, grid_points, uniform_grid, Polynomial};

/// Largest degree [`erf_poly`] will try before giving up.
pub const ERF_DEGREE_CAP: usize = 1 << 14;

/// Half-width of the interval the approximation is certified on.
pub const ERF_DOMAIN: f64 = 2.0;

/// An odd polynomial within `eta` of `erf(k x)` on `[-2, 2]`.
///
/// Stored as a Chebyshev series in `t = x / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErfPoly {
    k: f64,
    eta: f64,
    poly: Polynomial,
    sup_error: f64,
}

impl ErfPoly {
    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }

    /// Largest `|P(x) - erf(k x)|` seen on the certification grid.
    pub fn sup_error(&self) -> f64 {
        self.sup_error
    }

    /// Chebyshev series in `x / 2`.
    pub fn scaled_polynomial(&self) -> &Polynomial {
        &self.poly
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.poly.eval(x / ERF_DOMAIN)
    }
}

// Chebyshev coefficients of erf(K t) decay like exp(-n^2 / (4 K^2)).
fn interpolation_degree_guess(k: f64, eta: f64) -> usize {
    let big_k = ERF_DOMAIN * k;
    let n = 2.0 * big_k * (1.0 / eta).ln().max(1.0).sqrt() * 1.5 + 16.0;
    (n.ceil() as usize) | 1
}

/// Smallest odd `n` such that the coefficients above `n` sum to at most `budget`.
fn truncation_degree(coeffs: &[f64], budget: f64) -> usize {
    let mut tail = 0.0;
    for n in (0..coeffs.len()).rev() {
        if tail + coeffs[n].abs() > budget {
            return n | 1;
        }
        tail += coeffs[n].abs();
    }
    1
}

fn sup_error(poly: &Polynomial, k: f64) -> f64 {
    uniform_grid(-ERF_DOMAIN, ERF_DOMAIN, grid_points(2.0 * ERF_DOMAIN))
        .map(|x| (poly.eval(x / ERF_DOMAIN) - libm::erf(k * x)).abs())
        .fold(0.0, f64::max)
}

/// Truncated Chebyshev expansion of `erf(k x)`, projected onto odd terms and
/// certified against `libm::erf` on a grid over `[-2, 2]`.
pub fn erf_poly(k: f64, eta: f64) -> Result<ErfPoly> {
    ensure(k > 0.0 && k.is_finite(), "k", k, "must be positive")?;
    ensure(eta > 0.0 && eta < 1.0, "eta", eta, "must lie in (0, 1)")?;
    let big_k = ERF_DOMAIN * k;
    let mut n = interpolation_degree_guess(k, eta);
    let mut budget = eta / 4.0;
    let mut achieved = f64::INFINITY;
    while n <= ERF_DEGREE_CAP {
        let mut coeffs = chebyshev_interpolate(|t| libm::erf(big_k * t), n);
        for c in coeffs.iter_mut().step_by(2) {
            *c = 0.0;
        }
        let degree = truncation_degree(&coeffs, budget);
        // an expansion that has not decayed within its last quarter is too short
        let converged = degree < n - n / 4;
        if converged {
            coeffs.truncate(degree + 1);
            let poly = Polynomial::chebyshev(coeffs);
            achieved = sup_error(&poly, k);
            if achieved <= eta {
                return Ok(ErfPoly {
                    k,
                    eta,
                    poly,
                    sup_error: achieved,
                });
            }
            budget /= 4.0;
        }
        n = (n + n / 2) | 1;
    }
    Err(Error::DegreeCap {
        k,
        eta,
        cap: ERF_DEGREE_CAP,
        achieved,
    })
}

type CacheKey = (u64, u64);

static CACHE: LazyLock<Mutex<HashMap<CacheKey, Arc<ErfPoly>>>> = LazyLock::new(Default::default);

/// [`erf_poly`], memoised on the exact bits of `(k, eta)`.
pub fn erf_poly_cached(k: f64, eta: f64) -> Result<Arc<ErfPoly>> {
    let key = (k.to_bits(), eta.to_bits());
    if let Some(p) = CACHE.lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return Ok(Arc::clone(p));
    }
    // built outside the lock; a racing thread may build the same polynomial
    let p = Arc::new(erf_poly(k, eta)?);
    let mut cache = CACHE.lock().unwrap_or_else(|e| e.into_inner());
    Ok(Arc::clone(cache.entry(key).or_insert(p)))
}
