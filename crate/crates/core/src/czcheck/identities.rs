//! Exact spectral identities: the vertical isometries, the horizontal sums,
//! the Riesz identity, and the profile of the square function built from the
//! swapped adjoint derivative.

use crate::basis::{delta_apply, ell, ell_1d, riesz_transform, BasisFamily, Expansion, MultiIndex};
use crate::error::{domain, Error, Result};
use crate::gfunctions::{
    gfun_l2_norm, horizontal_family, horizontal_heat_spectral, horizontal_modified_poisson_spectral, l2_order_for,
    GFunctionKind,
};
use crate::kernels::{bnorm, TimeMeasure, ZetaGridSpec};
use crate::measure::{AlphaParam, Point};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// One evaluated identity on one random expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityRecord {
    pub index: usize,
    /// `isometry:<g-function>`, `horizontal_heat` or `horizontal_modified_poisson(j)`.
    pub identity: String,
    pub norm_f: f64,
    pub value: f64,
    pub expected: f64,
    pub rel_deviation: f64,
    /// For horizontal sums: `value / ||f||^2` lies in `(0, 1/2]`.
    pub bound_ok: bool,
}

fn record(index: usize, identity: String, norm_f: f64, value: f64, expected: f64, bound_ok: bool) -> IdentityRecord {
    IdentityRecord { index, identity, norm_f, value, expected, rel_deviation: (value - expected).abs() / expected, bound_ok }
}

/// The isometries `||g(f)||_2 = ||f||_2 / 2` of the four vertical square
/// functions (every modified coordinate) and the horizontal sums, on `count`
/// random expansions with `modes` terms of order `<= max_order`. Expansions
/// entering horizontal sums have no `|k| = 0` term.
pub fn identity_suite(
    alpha: &AlphaParam,
    count: usize,
    modes: usize,
    max_order: usize,
    seed: u64,
) -> Result<Vec<IdentityRecord>> {
    if modes == 0 {
        return domain("expansions need at least one mode");
    }
    let d = alpha.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for n in 0..count {
        let plain = Expansion::random(&mut rng, alpha, BasisFamily::Plain, modes, max_order)?;
        for kind in [GFunctionKind::VT, GFunctionKind::VP] {
            let g = gfun_l2_norm(kind, &plain, l2_order_for(&plain))?;
            out.push(record(n, format!("isometry:{kind}"), plain.norm(), g, 0.5 * plain.norm(), true));
        }
        let diffs = (0..d)
            .map(|j| Expansion::random(&mut rng, alpha, BasisFamily::Differentiated(j), modes, max_order))
            .collect::<Result<Vec<_>>>()?;
        for (j, e) in diffs.iter().enumerate() {
            for kind in [GFunctionKind::VTmod(j), GFunctionKind::VPmod(j)] {
                let g = gfun_l2_norm(kind, e, l2_order_for(e))?;
                out.push(record(n, format!("isometry:{kind}"), e.norm(), g, 0.5 * e.norm(), true));
            }
        }
        let centered = Expansion::from_terms(
            alpha.clone(),
            BasisFamily::Plain,
            plain.terms().filter(|(k, _)| k.order() > 0).map(|(k, c)| (k.clone(), c)),
        )?;
        if !centered.is_empty() {
            out.push(horizontal(n, "horizontal_heat".into(), &centered, horizontal_heat_spectral(&centered))?);
        }
        for (j, e) in diffs.iter().enumerate() {
            let name = format!("horizontal_modified_poisson({})", j + 1);
            out.push(horizontal(n, name, e, horizontal_modified_poisson_spectral(e))?);
        }
    }
    Ok(out)
}

fn horizontal(index: usize, name: String, e: &Expansion, expected: f64) -> Result<IdentityRecord> {
    let order = l2_order_for(e);
    let mut value = 0.0;
    for kind in horizontal_family(e.alpha().dim(), e.family()) {
        value += gfun_l2_norm(kind, e, order)?.powi(2);
    }
    let ratio = value / e.norm().powi(2);
    Ok(record(index, name, e.norm(), value, expected, ratio > 0.0 && ratio <= 0.5 + 1e-12))
}

/// `max |d/dt P~_t^{j} R_j f + delta_j P_t f|` over `ts x xs`, both sides
/// evaluated from their spectral forms.
pub fn riesz_identity_check(e: &Expansion, j: usize, ts: &[f64], xs: &[Point]) -> Result<f64> {
    let alpha = e.alpha();
    let r = riesz_transform(e, j)?;
    let de = delta_apply(e, j)?;
    if let Some(t) = ts.iter().find(|t| !(**t > 0.0)) {
        return domain(format!("t must be positive, got {t}"));
    }
    let sqrt_lambda = |k: &MultiIndex| crate::basis::eigenvalue(alpha, k.order()).sqrt();
    let mut worst = 0.0f64;
    for x in xs {
        let (rv, dv) = (r.basis_values(x), de.basis_values(x));
        for &t in ts {
            let lhs: f64 =
                r.terms().zip(&rv).map(|((k, c), b)| -sqrt_lambda(k) * (-t * sqrt_lambda(k)).exp() * c * b).sum();
            let rhs: f64 = de.terms().zip(&dv).map(|((k, c), b)| (-t * sqrt_lambda(k)).exp() * c * b).sum();
            worst = worst.max((lhs + rhs).abs());
        }
    }
    Ok(worst)
}

/// `|2x - (2 alpha + 1)/x| ell_0^alpha(x) / sqrt(4 alpha + 4)`.
pub fn counterexample_closed(alpha: f64, x: f64) -> f64 {
    (2.0 * x - (2.0 * alpha + 1.0) / x).abs() * ell_1d(0, alpha, x) / (4.0 * alpha + 4.0).sqrt()
}

/// Sampled `x -> ||delta^* T_t ell_0^alpha(x)||_{L^2(dt)}` in one dimension, by
/// quadrature and by the closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleProfile {
    pub alpha: f64,
    pub x: Vec<f64>,
    pub quadrature: Vec<f64>,
    pub closed: Vec<f64>,
    pub max_deviation: f64,
}

impl CounterexampleProfile {
    /// `profile(x) / (x ell_0^alpha(x))` from the quadrature route, which tends
    /// to `2 / sqrt(4 alpha + 4)`.
    pub fn growth_ratios(&self) -> Vec<f64> {
        self.x.iter().zip(&self.quadrature).map(|(x, v)| v / (x * ell_1d(0, self.alpha, *x))).collect()
    }

    pub fn growth_limit(&self) -> f64 {
        2.0 / (4.0 * self.alpha + 4.0).sqrt()
    }
}

/// The quadrature route applies `delta^* = -d/dx + x - (2 alpha + 1)/x` by a
/// fourth-order central difference to `T_t ell_0 = e^{-t lambda_0} ell_0` and
/// integrates the square over `t` on the zeta grid.
pub fn counterexample_profile(alpha: f64, xs: &[f64], spec: &ZetaGridSpec) -> Result<CounterexampleProfile> {
    let a = AlphaParam::new(vec![alpha])?;
    if let Some(x) = xs.iter().find(|x| !(**x > 0.0)) {
        return Err(Error::Domain(format!("x must be positive, got {x}")));
    }
    let lambda0 = crate::basis::eigenvalue(&a, 0);
    let grid = spec.build(None)?;
    let zero = MultiIndex::zero(1);
    let ell0 = |x: f64| ell(&a, &zero, &Point::new(vec![x]).expect("positive"));
    let mut quadrature = Vec::with_capacity(xs.len());
    for &x in xs {
        let h = 1e-3 * x.min(1.0);
        let deriv = (8.0 * (ell0(x + h) - ell0(x - h)) - (ell0(x + 2.0 * h) - ell0(x - 2.0 * h))) / (12.0 * h);
        let star = -deriv + (x - (2.0 * alpha + 1.0) / x) * ell0(x);
        let profile = grid.sample(TimeMeasure::Dt, |t| (-t * lambda0).exp() * star);
        quadrature.push(bnorm(&profile));
    }
    let closed: Vec<f64> = xs.iter().map(|&x| counterexample_closed(alpha, x)).collect();
    let max_deviation = quadrature.iter().zip(&closed).map(|(q, c)| (q - c).abs()).fold(0.0, f64::max);
    Ok(CounterexampleProfile { alpha, x: xs.to_vec(), quadrature, closed, max_deviation })
}
