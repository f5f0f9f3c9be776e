//! Real polynomials on `[-1, 1]` in the monomial or Chebyshev basis.
//!
//! High-degree polynomials (hundreds of terms) are kept in the Chebyshev
//! basis and evaluated with Clenshaw's recurrence; the monomial basis is
//! only numerically sane for low degrees and uses Horner's scheme.

use crate::error::{Error, Result};

/// Grid points per unit length used by every sup-norm certificate.
pub const GRID_PER_UNIT: usize = 10_000;

/// Slack allowed beyond a certified bound.
pub const CERT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Monomial,
    Chebyshev,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    basis: Basis,
    coeffs: Vec<f64>,
    // Even Chebyshev series: c_{2j} as a series in T_j(2x^2 - 1).
    even_half: Option<Vec<f64>>,
}

impl Polynomial {
    pub fn monomial(coeffs: Vec<f64>) -> Self {
        Self::build(Basis::Monomial, coeffs)
    }

    pub fn chebyshev(coeffs: Vec<f64>) -> Self {
        Self::build(Basis::Chebyshev, coeffs)
    }

    fn build(basis: Basis, mut coeffs: Vec<f64>) -> Self {
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(0.0);
        }
        let even_half = (basis == Basis::Chebyshev && coeffs.len() > 2 && has_parity(&coeffs, Parity::Even))
            .then(|| coeffs.iter().step_by(2).copied().collect());
        Self {
            basis,
            coeffs,
            even_half,
        }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// Index of the highest nonzero coefficient.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Parity read off the coefficients. Both bases share the property that
    /// an even (odd) polynomial has vanishing odd (even) coefficients.
    pub fn parity(&self) -> Option<Parity> {
        if has_parity(&self.coeffs, Parity::Even) {
            Some(Parity::Even)
        } else if has_parity(&self.coeffs, Parity::Odd) {
            Some(Parity::Odd)
        } else {
            None
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match (self.basis, &self.even_half) {
            (Basis::Monomial, _) => horner(&self.coeffs, x),
            (Basis::Chebyshev, Some(half)) => clenshaw(half, 2.0 * x * x - 1.0),
            (Basis::Chebyshev, None) => clenshaw(&self.coeffs, x),
        }
    }

    /// Largest `|P(x)|` on a uniform grid of `points` over `[lo, hi]`,
    /// returned as `(x, |P(x)|)`.
    pub fn max_abs_on_grid(&self, lo: f64, hi: f64, points: usize) -> (f64, f64) {
        uniform_grid(lo, hi, points)
            .map(|x| (x, self.eval(x).abs()))
            .fold(
                (lo, f64::NEG_INFINITY),
                |best, cur| {
                    if cur.1 > best.1 {
                        cur
                    } else {
                        best
                    }
                },
            )
    }

    /// Fails unless `|P| <= 1 + CERT_TOL` on the certification grid over `[-1, 1]`.
    pub fn certify_unit_bound(&self) -> Result<()> {
        let (at, value) = self.max_abs_on_grid(-1.0, 1.0, grid_points(2.0));
        if value > 1.0 + CERT_TOL {
            return Err(Error::Unbounded { at, value });
        }
        Ok(())
    }
}

fn has_parity(coeffs: &[f64], parity: Parity) -> bool {
    let skip = match parity {
        Parity::Even => 1,
        Parity::Odd => 0,
    };
    coeffs.iter().skip(skip).step_by(2).all(|&c| c == 0.0)
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Clenshaw's recurrence for `sum_k c_k T_k(x)`.
pub fn clenshaw(coeffs: &[f64], x: f64) -> f64 {
    let two_x = 2.0 * x;
    let (mut b1, mut b2) = (0.0, 0.0);
    for &c in coeffs.iter().skip(1).rev() {
        let b0 = c + two_x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    coeffs[0] + x * b1 - b2
}

/// Number of grid points covering an interval of `length` at [`GRID_PER_UNIT`].
pub fn grid_points(length: f64) -> usize {
    (length * GRID_PER_UNIT as f64).ceil() as usize + 1
}

/// `points` equally spaced values from `lo` to `hi` inclusive.
pub fn uniform_grid(lo: f64, hi: f64, points: usize) -> impl Iterator<Item = f64> {
    let last = points.saturating_sub(1).max(1) as f64;
    (0..points).map(move |i| {
        if i + 1 == points {
            hi
        } else {
            lo + (hi - lo) * (i as f64 / last)
        }
    })
}

/// Chebyshev coefficients of the degree-`degree` interpolant of `f` at the
/// Chebyshev points of the first kind. Exact (up to rounding) when `f` is
/// itself a polynomial of at most that degree.
pub fn chebyshev_interpolate(f: impl Fn(f64) -> f64, degree: usize) -> Vec<f64> {
    let n = degree + 1;
    let quarter = 4 * n;
    // cos(pi * m / (2n)) for m in 0..4n
    let table: Vec<f64> = (0..quarter)
        .map(|m| (std::f64::consts::PI * m as f64 / (2 * n) as f64).cos())
        .collect();
    let values: Vec<f64> = (0..n).map(|j| f(table[2 * j + 1])).collect();
    let scale = 2.0 / n as f64;
    (0..n)
        .map(|k| {
            let sum: f64 = values
                .iter()
                .enumerate()
                .map(|(j, v)| v * table[(k * (2 * j + 1)) % quarter])
                .sum();
            if k == 0 {
                0.5 * scale * sum
            } else {
                scale * sum
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horner_matches_direct() {
        let p = Polynomial::monomial(vec![1.0, -2.0, 3.0]);
        assert_eq!(p.eval(2.0), 1.0 - 4.0 + 12.0);
        assert_eq!(p.degree(), 2);
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let p = Polynomial::monomial(vec![0.0, 1.0, 0.0, 0.0]);
        assert_eq!(p.degree(), 1);
        assert_eq!(Polynomial::monomial(vec![]).degree(), 0);
    }

    #[test]
    fn clenshaw_matches_cosine_form() {
        let coeffs = [0.3, -0.2, 0.5, 0.1, -0.05];
        let p = Polynomial::chebyshev(coeffs.to_vec());
        for &x in &[-0.9, -0.3, 0.0, 0.4, 0.99] {
            let t = f64::acos(x);
            let direct: f64 = coeffs.iter().enumerate().map(|(k, c)| c * (k as f64 * t).cos()).sum();
            assert!((p.eval(x) - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn even_fast_path_matches_full_clenshaw() {
        let coeffs: Vec<f64> = (0..41)
            .map(|k| if k % 2 == 0 { 1.0 / (1.0 + k as f64) } else { 0.0 })
            .collect();
        let p = Polynomial::chebyshev(coeffs.clone());
        assert_eq!(p.parity(), Some(Parity::Even));
        for &x in &[-1.0, -0.7, 0.1, 0.5, 1.0] {
            assert!((p.eval(x) - clenshaw(&coeffs, x)).abs() < 1e-13);
        }
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        // T_3 = 4x^3 - 3x
        let c = chebyshev_interpolate(|x| 4.0 * x * x * x - 3.0 * x, 5);
        for (k, v) in c.iter().enumerate() {
            let want = if k == 3 { 1.0 } else { 0.0 };
            assert!((v - want).abs() < 1e-13, "c[{k}] = {v}");
        }
    }

    #[test]
    fn unit_bound_certificate() {
        assert!(Polynomial::monomial(vec![0.0, 1.0]).certify_unit_bound().is_ok());
        let err = Polynomial::monomial(vec![0.0, 1.1]).certify_unit_bound().unwrap_err();
        assert!(matches!(err, Error::Unbounded { .. }));
    }

    #[test]
    fn grid_hits_endpoints() {
        let g: Vec<f64> = uniform_grid(-1.0, 1.0, grid_points(2.0)).collect();
        assert_eq!(g.len(), 20_001);
        assert_eq!(g[0], -1.0);
        assert_eq!(*g.last().unwrap(), 1.0);
    }
}
