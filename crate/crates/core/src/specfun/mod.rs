//! Scalar special functions and Gaussian quadrature rules.
//!
//! Everything here is real-valued and pure. The Bessel routine works with the
//! scaled form `i_nu(z) = z^{-nu} I_nu(z)`, which is entire in `z` and is the
//! exact combination appearing in the Laguerre heat kernel.

mod bessel;
mod quadrature;

pub use bessel::{bessel_jet, bessel_ratio, BesselJet, scaled_bessel_i, scaled_bessel_i_parts, Scaled, BESSEL_SWITCH};
pub use quadrature::{
    gauss_jacobi_ab, gauss_jacobi_rule, gauss_laguerre_rule, gauss_legendre_rule, QuadratureRule,
    RuleKind,
};

use crate::error::{domain, Result};

/// Euler's gamma function for positive arguments.
pub fn gamma_fn(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return domain(format!("gamma_fn requires z > 0, got {z}"));
    }
    Ok(statrs::function::gamma::gamma(z))
}

/// `ln Γ(z)` for positive arguments.
pub fn ln_gamma(z: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return domain(format!("ln_gamma requires z > 0, got {z}"));
    }
    Ok(statrs::function::gamma::ln_gamma(z))
}

/// Generalized Laguerre polynomial `L_k^a(x)` by upward three-term recurrence.
pub fn laguerre_poly(k: usize, a: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut cur = 1.0 + a - x;
    for n in 1..k {
        let nf = n as f64;
        let next = ((2.0 * nf + 1.0 + a - x) * cur - (nf + a) * prev) / (nf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Double-double value `hi + lo`, enough to keep the alternating series exact.
    #[derive(Clone, Copy)]
    struct Dd(f64, f64);

    impl Dd {
        fn from(x: f64) -> Self {
            Dd(x, 0.0)
        }
        fn two_sum(a: f64, b: f64) -> (f64, f64) {
            let s = a + b;
            let bb = s - a;
            (s, (a - (s - bb)) + (b - bb))
        }
        fn add(self, o: Dd) -> Dd {
            let (s, e) = Self::two_sum(self.0, o.0);
            let e = e + self.1 + o.1;
            let (hi, lo) = Self::two_sum(s, e);
            Dd(hi, lo)
        }
        fn mul(self, o: Dd) -> Dd {
            let p = self.0 * o.0;
            let e = self.0.mul_add(o.0, -p) + self.0 * o.1 + self.1 * o.0;
            let (hi, lo) = Self::two_sum(p, e);
            Dd(hi, lo)
        }
        fn div_f(self, d: f64) -> Dd {
            let q = self.0 / d;
            let r = self.add(Dd::from(q).mul(Dd::from(-d)));
            Dd(q, 0.0).add(Dd::from(r.0 / d))
        }
    }

    /// Explicit series sum_{i<=k} binom(k+a, k-i) (-x)^i / i!, in double-double.
    fn laguerre_series(k: usize, a: f64, x: f64) -> f64 {
        let binom = |m: usize| -> Dd {
            // binom(k + a, m) = prod_{r<m} (k + a - r) / (r + 1)
            (0..m).fold(Dd::from(1.0), |acc, r| {
                acc.mul(Dd::from(k as f64 - r as f64).add(Dd::from(a))).div_f(r as f64 + 1.0)
            })
        };
        let mut sum = Dd::from(0.0);
        let mut pow = Dd::from(1.0);
        for i in 0..=k {
            if i > 0 {
                pow = pow.mul(Dd::from(-x)).div_f(i as f64);
            }
            sum = sum.add(binom(k - i).mul(pow));
        }
        sum.0 + sum.1
    }

    #[test]
    fn gamma_values() {
        assert!((gamma_fn(1.0).unwrap() - 1.0).abs() < 1e-14);
        assert!((gamma_fn(0.5).unwrap() - std::f64::consts::PI.sqrt()).abs() < 1e-13 * 1.78);
        assert!((gamma_fn(5.0).unwrap() - 24.0).abs() < 24.0 * 1e-13);
        assert!(gamma_fn(0.0).is_err());
        assert!(gamma_fn(-1.5).is_err());
    }

    #[test]
    fn laguerre_small_cases() {
        assert_eq!(laguerre_poly(0, 3.3, 7.0), 1.0);
        assert!((laguerre_poly(1, 0.7, 2.0) + 0.3).abs() < 1e-15);
        assert!((laguerre_poly(2, 0.0, 1.0) + 0.5).abs() < 1e-15);
        assert!((laguerre_series(2, 0.0, 1.0) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn laguerre_recurrence_matches_series() {
        for &a in &[-0.5, 0.0, 0.7, 3.0] {
            for k in 0..=12 {
                for s in 0..100 {
                    let x = 20.0 * s as f64 / 99.0;
                    let r = laguerre_poly(k, a, x);
                    let o = laguerre_series(k, a, x);
                    assert!((r - o).abs() <= 1e-9 * (1.0 + o.abs()), "k={k} a={a} x={x}: {r} vs {o}");
                }
            }
        }
    }
}
