use crate::basis::{eigenvalue, ell_table, MultiIndex};
use crate::error::{domain, Result};
use crate::measure::{AlphaParam, PiRule, Point};
use crate::specfun::bessel_jet;

/// Functions of `t` entering the kernel, finite for every `t > 0`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct TimeFns {
    pub coth2: f64,
    pub csch2: f64,
    pub ln_sinh2: f64,
    pub tanh1: f64,
    pub sech1_sq: f64,
    /// `coth(2t) - 1`
    pub coth2_m1: f64,
    /// `1 - tanh t`
    pub tanh1_c: f64,
}

impl TimeFns {
    pub fn new(t: f64) -> Self {
        let e4 = (-4.0 * t).exp();
        let a = -(-4.0 * t).exp_m1(); // 1 - e^{-4t}
        let e2 = (-2.0 * t).exp();
        Self {
            coth2: (2.0 - a) / a,
            csch2: 2.0 * e2 / a,
            ln_sinh2: 2.0 * t + a.ln() - std::f64::consts::LN_2,
            tanh1: t.tanh(),
            sech1_sq: 4.0 * e2 / ((1.0 + e2) * (1.0 + e2)),
            coth2_m1: 2.0 * e4 / a,
            tanh1_c: 2.0 * e2 / (1.0 + e2),
        }
    }
}

/// Log-value and first derivatives of `G_t^alpha(x, y)` or of the modified
/// kernel `e^{-2t} x_j y_j G_t^{alpha+e_j}(x, y)`, all in `x`.
#[derive(Debug, Clone)]
pub(crate) struct KernelJet {
    pub ln_g: f64,
    /// `d/dt ln K`
    pub dt: f64,
    /// `(delta_i K) / K = d/dx_i ln K + x_i`
    pub delta: Vec<f64>,
    /// `(delta_i^* K) / K = -d/dx_i ln K + x_i - (2 alpha_i + 1)/x_i`
    pub delta_star: Vec<f64>,
}

pub(crate) fn kernel_jet(
    alpha: &[f64],
    modified: Option<usize>,
    t: f64,
    x: &[f64],
    y: &[f64],
) -> Result<KernelJet> {
    let tf = TimeFns::new(t);
    let d = alpha.len();
    let mut nu = alpha.to_vec();
    if let Some(j) = modified {
        nu[j] += 1.0;
    }
    let weight: f64 = d as f64 + nu.iter().sum::<f64>();
    let mut dist_sq = 0.0;
    let mut dot = 0.0;
    let mut ln_g = -weight * tf.ln_sinh2;
    let mut dt = -2.0 * weight * tf.coth2;
    let mut delta = Vec::with_capacity(d);
    let mut delta_star = Vec::with_capacity(d);
    for i in 0..d {
        let (xi, yi) = (x[i], y[i]);
        let z = xi * yi * tf.csch2;
        let jet = bessel_jet(nu[i], z)?;
        dist_sq += (xi - yi) * (xi - yi);
        dot += xi * yi;
        ln_g += jet.ln_exp_scaled;
        dt += 2.0 * jet.defect * z * tf.coth2;
        // d/dx_i ln G = -coth(2t)(x_i - y_i) - y_i tanh t - (1 - rho_i) y_i csch(2t)
        let tail = jet.defect * yi * tf.csch2;
        let mut dl = -tf.coth2_m1 * (xi - yi) + yi * tf.tanh1_c - tail;
        let mut ds = tf.coth2 * (xi - yi) + yi * tf.tanh1 + tail + xi;
        if modified == Some(i) {
            dl += 1.0 / xi;
            ds -= 1.0 / xi;
        }
        delta.push(dl);
        delta_star.push(ds - (2.0 * alpha[i] + 1.0) / xi);
    }
    ln_g += -0.5 * tf.coth2 * dist_sq - tf.tanh1 * dot;
    dt += dist_sq * tf.csch2 * tf.csch2 - tf.sech1_sq * dot;
    if let Some(j) = modified {
        ln_g += -2.0 * t + x[j].ln() + y[j].ln();
        dt -= 2.0;
    }
    Ok(KernelJet { ln_g, dt, delta, delta_star })
}

fn check_args(alpha: &AlphaParam, t: f64, x: &Point, y: &Point) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return domain(format!("t must be positive and finite, got {t}"));
    }
    alpha.check_dim(x.dim())?;
    alpha.check_dim(y.dim())
}

/// `G_t^alpha(x, y)` from the modified Bessel closed form, assembled in log space.
pub fn heat_kernel_closed(alpha: &AlphaParam, t: f64, x: &Point, y: &Point) -> Result<f64> {
    check_args(alpha, t, x, y)?;
    Ok(kernel_jet(alpha.components(), None, t, x.coords(), y.coords())?.ln_g.exp())
}

/// `ln G_t^alpha(x, y)`; finite even where the value itself underflows.
pub fn heat_kernel_ln(alpha: &AlphaParam, t: f64, x: &Point, y: &Point) -> Result<f64> {
    check_args(alpha, t, x, y)?;
    Ok(kernel_jet(alpha.components(), None, t, x.coords(), y.coords())?.ln_g)
}

/// `G~_t^{alpha,j}(x, y) = e^{-2t} x_j y_j G_t^{alpha+e_j}(x, y)`.
pub fn modified_heat_kernel(alpha: &AlphaParam, j: usize, t: f64, x: &Point, y: &Point) -> Result<f64> {
    check_args(alpha, t, x, y)?;
    if j >= alpha.dim() {
        return domain(format!("coordinate {j} out of range for d = {}", alpha.dim()));
    }
    Ok(kernel_jet(alpha.components(), Some(j), t, x.coords(), y.coords())?.ln_g.exp())
}

/// Partial sum `sum_{|k| <= n} e^{-t lambda_|k|} ell_k(x) ell_k(y)`.
pub fn heat_kernel_spectral(alpha: &AlphaParam, t: f64, x: &Point, y: &Point, n: usize) -> Result<f64> {
    check_args(alpha, t, x, y)?;
    let tables: Vec<(Vec<f64>, Vec<f64>)> = alpha
        .components()
        .iter()
        .enumerate()
        .map(|(i, &a)| (ell_table(n, a, x[i]), ell_table(n, a, y[i])))
        .collect();
    let mut total = 0.0;
    for k in MultiIndex::all_up_to(alpha.dim(), n) {
        let prod: f64 = k.entries().iter().zip(&tables).map(|(&ki, (tx, ty))| tx[ki] * ty[ki]).product();
        total += (-t * eigenvalue(alpha, k.order())).exp() * prod;
    }
    Ok(total)
}

/// Graded-rule depth resolving `exp(-c (1 + s))` at `s = -1`.
pub(crate) fn layer_depth(c: f64) -> usize {
    if c <= 0.125 {
        0
    } else {
        ((8.0 * c).log2().ceil() as usize).min(60)
    }
}

/// `G_t^alpha(x, y)` through the Schläfli integral over `Pi_alpha`.
///
/// The exponent `-q_+/(4 zeta) - zeta q_-/4` is linear in `s` with slope
/// `-x_i y_i / sinh 2t` per coordinate; the constant part is pulled out and
/// the remaining `exp(-c_i (1 + s_i))` is integrated on a rule graded toward
/// `s_i = -1`. `order` is the number of nodes per panel.
pub fn heat_kernel_schlafli(alpha: &AlphaParam, t: f64, x: &Point, y: &Point, order: usize) -> Result<f64> {
    check_args(alpha, t, x, y)?;
    alpha.require_cz()?;
    let tf = TimeFns::new(t);
    let c: Vec<f64> = (0..alpha.dim()).map(|i| x[i] * y[i] * tf.csch2).collect();
    let depths: Vec<usize> = c.iter().map(|&ci| layer_depth(ci)).collect();
    let rule = PiRule::graded(alpha.components(), order, &depths)?;
    let integral = rule.integrate(|s| (-s.iter().zip(&c).map(|(si, ci)| ci * (1.0 + si)).sum::<f64>()).exp());
    let dist_sq = x.dist(y).powi(2);
    let dot: f64 = x.coords().iter().zip(y.coords()).map(|(a, b)| a * b).sum();
    let weight = alpha.dim() as f64 + alpha.sum();
    let ln_g = -weight * tf.ln_sinh2 - 0.5 * tf.coth2 * dist_sq - tf.tanh1 * dot + integral.ln();
    Ok(ln_g.exp())
}

/// `q_pm(x, y, s) = |x|^2 + |y|^2 pm 2 sum x_i y_i s_i`.
pub fn q_pm(x: &[f64], y: &[f64], s: &[f64]) -> (f64, f64) {
    let base: f64 = x.iter().chain(y).map(|v| v * v).sum();
    let cross: f64 = x.iter().zip(y).zip(s).map(|((a, b), c)| 2.0 * a * b * c).sum();
    (base + cross, base - cross)
}
