use crate::error::{domain, Result};
use crate::specfun::laguerre_poly;
use nalgebra::{DMatrix, SymmetricEigen};
use statrs::function::gamma::ln_gamma;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RuleKind {
    /// Weight `u^a e^{-u}` on `(0, inf)`.
    GaussLaguerre { order: usize, a: f64 },
    /// Weight `(1 - s^2)^{b - 1/2}` on `(-1, 1)`.
    GaussJacobi { order: usize, b: f64 },
    /// Weight `(1 - s)^a (1 + s)^b` on `(-1, 1)`.
    GaussJacobiAb { order: usize, a: f64, b: f64 },
    /// Unit weight on `(-1, 1)`.
    GaussLegendre { order: usize },
    /// Composite graded rule on `zeta in (0, 1)`.
    ZetaTimeGrid { order: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub kind: RuleKind,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Node/weight pairs of a `(-1, 1)` rule affinely mapped onto `(lo, hi)`.
    pub fn mapped(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        self.nodes.iter().zip(&self.weights).map(move |(&s, &w)| (mid + half * s, half * w))
    }
}

/// Golub-Welsch: eigen-decomposition of the symmetric Jacobi matrix.
fn golub_welsch(diag: &[f64], off: &[f64], mu0: f64) -> (Vec<f64>, Vec<f64>) {
    let n = diag.len();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = diag[i];
        if i + 1 < n {
            m[(i, i + 1)] = off[i];
            m[(i + 1, i)] = off[i];
        }
    }
    let eig = SymmetricEigen::new(m);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// Generalized Gauss-Laguerre rule for the weight `u^a e^{-u}` on `(0, inf)`.
///
/// Nodes from Golub-Welsch are polished by Newton steps on `L_n^a`, and the
/// weights are recomputed from `L_{n+1}^a` so that the small tail weights keep
/// full relative accuracy.
pub fn gauss_laguerre_rule(n: usize, a: f64) -> Result<QuadratureRule> {
    if n == 0 {
        return domain("quadrature order must be >= 1");
    }
    if !(a > -1.0) {
        return domain(format!("Gauss-Laguerre parameter must exceed -1, got {a}"));
    }
    let diag: Vec<f64> = (0..n).map(|i| 2.0 * i as f64 + a + 1.0).collect();
    let off: Vec<f64> = (1..n).map(|i| (i as f64 * (i as f64 + a)).sqrt()).collect();
    let mu0 = ln_gamma(a + 1.0).exp();
    let (mut nodes, gw_weights) = golub_welsch(&diag, &off, mu0);

    let nf = n as f64;
    let log_pref = ln_gamma(nf + a + 1.0) - ln_gamma(nf + 1.0);
    let mut weights = Vec::with_capacity(n);
    for (x, &w_gw) in nodes.iter_mut().zip(&gw_weights) {
        for _ in 0..3 {
            // x L_n' = n L_n - (n + a) L_{n-1}
            let ln = laguerre_poly(n, a, *x);
            let lnm1 = laguerre_poly(n - 1, a, *x);
            let deriv = (nf * ln - (nf + a) * lnm1) / *x;
            if deriv == 0.0 || !deriv.is_finite() {
                break;
            }
            let step = ln / deriv;
            if !step.is_finite() || step.abs() > 0.1 * x.abs() {
                break;
            }
            *x -= step;
        }
        let lnp1 = laguerre_poly(n + 1, a, *x);
        let w = (log_pref + x.ln() - 2.0 * ((nf + 1.0) * lnp1).abs().ln()).exp();
        weights.push(if w.is_finite() && w > 0.0 { w } else { w_gw });
    }
    Ok(QuadratureRule { nodes, weights, kind: RuleKind::GaussLaguerre { order: n, a } })
}

/// Gauss-Jacobi rule for `(1 - s)^a (1 + s)^b` on `(-1, 1)`, `a, b > -1`.
pub fn gauss_jacobi_ab(n: usize, a: f64, b: f64) -> Result<QuadratureRule> {
    if n == 0 {
        return domain("quadrature order must be >= 1");
    }
    if !(a > -1.0 && b > -1.0) {
        return domain(format!("Jacobi exponents must exceed -1, got ({a}, {b})"));
    }
    let ab = a + b;
    let diag: Vec<f64> = (0..n)
        .map(|i| {
            if i == 0 {
                (b - a) / (ab + 2.0)
            } else {
                let s = 2.0 * i as f64 + ab;
                (b * b - a * a) / (s * (s + 2.0))
            }
        })
        .collect();
    let off: Vec<f64> = (0..n.saturating_sub(1))
        .map(|i| {
            let k = i as f64 + 1.0;
            let s = 2.0 * k + ab;
            if i == 0 {
                (4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))).sqrt()
            } else {
                (4.0 * k * (k + a) * (k + b) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0))).sqrt()
            }
        })
        .collect();
    let mu0 = ((ab + 1.0) * std::f64::consts::LN_2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0)
        - ln_gamma(ab + 2.0))
    .exp();
    let (nodes, weights) = golub_welsch(&diag, &off, mu0);
    Ok(QuadratureRule { nodes, weights, kind: RuleKind::GaussJacobiAb { order: n, a, b } })
}

/// Symmetric Gauss-Jacobi rule for the weight `(1 - s^2)^{b - 1/2}`, `b > -1/2`.
pub fn gauss_jacobi_rule(n: usize, b: f64) -> Result<QuadratureRule> {
    if !(b > -0.5) {
        return domain(format!("Gauss-Jacobi parameter must exceed -1/2, got {b}"));
    }
    let mut rule = gauss_jacobi_ab(n, b - 0.5, b - 0.5)?;
    rule.kind = RuleKind::GaussJacobi { order: n, b };
    Ok(rule)
}

pub fn gauss_legendre_rule(n: usize) -> Result<QuadratureRule> {
    let mut rule = gauss_jacobi_ab(n, 0.0, 0.0)?;
    rule.kind = RuleKind::GaussLegendre { order: n };
    Ok(rule)
}
