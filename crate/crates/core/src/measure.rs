//! The homogeneous space `(R_+^d, mu_alpha, |.|)` and the product measure
//! `Pi_alpha` on `[-1, 1]^d` used by the Schläfli form of the heat kernel.

use crate::error::{domain, Result};
use crate::specfun::{gauss_jacobi_ab, gauss_jacobi_rule, gauss_legendre_rule, ln_gamma};
use std::f64::consts::{FRAC_PI_2, PI};

/// Type multi-index `alpha in (-1, inf)^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaParam {
    components: Vec<f64>,
    cz_eligible: bool,
}

impl AlphaParam {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return domain("alpha must have at least one component");
        }
        if let Some(a) = components.iter().find(|a| !(**a > -1.0) || !a.is_finite()) {
            return domain(format!("every alpha_i must exceed -1, got {a}"));
        }
        let cz_eligible = components.iter().all(|&a| a >= -0.5);
        Ok(Self { components, cz_eligible })
    }

    pub fn uniform(dim: usize, value: f64) -> Result<Self> {
        Self::new(vec![value; dim])
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    /// `|alpha| = alpha_1 + ... + alpha_d` (may be negative).
    pub fn sum(&self) -> f64 {
        self.components.iter().sum()
    }

    /// True iff `alpha in [-1/2, inf)^d`.
    pub fn cz_eligible(&self) -> bool {
        self.cz_eligible
    }

    pub fn require_cz(&self) -> Result<()> {
        if self.cz_eligible {
            Ok(())
        } else {
            domain(format!(
                "alpha = {:?} must lie in [-1/2, inf)^d for this operation",
                self.components
            ))
        }
    }

    /// `alpha + e_j` with a zero-based coordinate `j`.
    pub fn shifted(&self, j: usize) -> Self {
        let mut c = self.components.clone();
        c[j] += 1.0;
        Self::new(c).expect("shifting up keeps alpha in range")
    }

    pub(crate) fn check_dim(&self, d: usize) -> Result<()> {
        if d == self.dim() {
            Ok(())
        } else {
            domain(format!("dimension mismatch: alpha has {} components, got {d}", self.dim()))
        }
    }
}

/// A point of the open orthant `(0, inf)^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return domain("a point needs at least one coordinate");
        }
        if let Some(c) = coords.iter().find(|c| !(**c > 0.0) || !c.is_finite()) {
            return domain(format!("point coordinates must be positive, got {c}"));
        }
        Ok(Self(coords))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn dist(&self, other: &Point) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt()
    }

    pub fn norm_sq(&self) -> f64 {
        self.0.iter().map(|a| a * a).sum()
    }
}

impl std::ops::Index<usize> for Point {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// `int_lo^hi x^{2a+1} dx` without cancellation for short intervals far from 0.
fn interval_mass(a: f64, lo: f64, hi: f64) -> f64 {
    let p = 2.0 * a + 2.0;
    if lo <= 0.0 {
        hi.powf(p) / p
    } else {
        lo.powf(p) * (p * ((hi - lo) / lo).ln_1p()).exp_m1() / p
    }
}

/// `mu_alpha` of the box `prod [lo_i, hi_i]`, `0 <= lo_i < hi_i`.
pub fn mu_box(alpha: &AlphaParam, lo: &[f64], hi: &[f64]) -> Result<f64> {
    alpha.check_dim(lo.len())?;
    alpha.check_dim(hi.len())?;
    let mut prod = 1.0;
    for ((&a, &l), &h) in alpha.components().iter().zip(lo).zip(hi) {
        if !(l >= 0.0 && l < h && h.is_finite()) {
            return domain(format!("malformed box side [{l}, {h}]"));
        }
        prod *= interval_mass(a, l, h);
    }
    Ok(prod)
}

/// `mu_alpha(B(center, r) ∩ R_+^d)`.
///
/// Exact for `d = 1`. For `d >= 2` the leading coordinates are integrated with
/// adaptive Gauss-Legendre and the innermost chord is measured exactly.
pub fn mu_ball(alpha: &AlphaParam, center: &Point, r: f64) -> Result<f64> {
    alpha.check_dim(center.dim())?;
    if !(r > 0.0) || !r.is_finite() {
        return domain(format!("ball radius must be positive, got {r}"));
    }
    Ok(ball_rec(alpha.components(), center.coords(), r * r))
}

pub fn doubling_ratio(alpha: &AlphaParam, center: &Point, r: f64) -> Result<f64> {
    Ok(mu_ball(alpha, center, 2.0 * r)? / mu_ball(alpha, center, r)?)
}

fn ball_rec(alpha: &[f64], c: &[f64], r2: f64) -> f64 {
    if r2 <= 0.0 {
        return 0.0;
    }
    let r = r2.sqrt();
    let (a, c0) = (alpha[0], c[0]);
    if alpha.len() == 1 {
        return interval_mass(a, (c0 - r).max(0.0), c0 + r);
    }
    let rest = |x: f64| ball_rec(&alpha[1..], &c[1..], r2 - (x - c0) * (x - c0));
    let tol = 1e-11;
    // Upper half: x = c0 + r sin(theta), weight is smooth there.
    let upper = |th: f64| {
        let x = c0 + r * th.sin();
        x.powf(2.0 * a + 1.0) * rest(x) * r * th.cos()
    };
    let mut total = adaptive_gl(&upper, 0.0, FRAC_PI_2, tol);
    if c0 > r {
        total += adaptive_gl(&upper, -FRAC_PI_2, 0.0, tol);
    } else {
        // [0, c0] in the variable u = (x / c0)^{2a+2}, which absorbs x^{2a+1} dx.
        let p = 2.0 * a + 2.0;
        let scale = c0.powf(p) / p;
        let lower = |u: f64| rest(c0 * u.powf(1.0 / p)) * scale;
        total += adaptive_gl(&lower, 0.0, 1.0, tol);
    }
    total
}

fn adaptive_gl(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, tol: f64) -> f64 {
    thread_local! {
        static GL: crate::specfun::QuadratureRule = gauss_legendre_rule(12).expect("order > 0");
    }
    fn panel(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
        GL.with(|r| r.mapped(lo, hi).map(|(x, w)| w * f(x)).sum())
    }
    fn rec(f: &dyn Fn(f64) -> f64, lo: f64, hi: f64, whole: f64, tol: f64, floor: f64, depth: u32) -> f64 {
        let mid = 0.5 * (lo + hi);
        let left = panel(f, lo, mid);
        let right = panel(f, mid, hi);
        let both = left + right;
        if depth == 0 || (both - whole).abs() <= (tol * both.abs()).max(floor) {
            return both;
        }
        rec(f, lo, mid, left, tol, floor, depth - 1) + rec(f, mid, hi, right, tol, floor, depth - 1)
    }
    if hi <= lo {
        return 0.0;
    }
    let whole = panel(f, lo, hi);
    // panels far below the total need not meet the relative tolerance on their own
    let floor = 1e-3 * tol * whole.abs().max(f64::MIN_POSITIVE);
    rec(f, lo, hi, whole, tol, floor, 40)
}

/// Normalizer `1 / (sqrt(pi) 2^a Γ(a + 1/2))` of the one-dimensional `Pi_a` density.
fn pi_normalizer(a: f64) -> f64 {
    (-(0.5 * PI.ln() + a * std::f64::consts::LN_2 + ln_gamma(a + 0.5).unwrap_or(f64::NAN))).exp()
}

/// Total mass of `Pi_a`: `1 / (2^a Γ(a + 1))`.
pub fn pi_mass(a: f64) -> f64 {
    (-(a * std::f64::consts::LN_2 + statrs::function::gamma::ln_gamma(a + 1.0))).exp()
}

/// A one-dimensional discretization of `Pi_a` (normalization included).
#[derive(Debug, Clone, PartialEq)]
pub struct PiAxis {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl PiAxis {
    /// Gauss-Jacobi for `a > -1/2`, the two point masses for `a = -1/2`.
    pub fn gauss(a: f64, order: usize) -> Result<Self> {
        if a == -0.5 {
            let w = 1.0 / (2.0 * PI).sqrt();
            return Ok(Self { nodes: vec![-1.0, 1.0], weights: vec![w, w] });
        }
        if !(a > -0.5) {
            return domain(format!("Pi_alpha needs alpha_i >= -1/2, got {a}"));
        }
        let rule = gauss_jacobi_rule(order, a)?;
        let c = pi_normalizer(a);
        Ok(Self { nodes: rule.nodes, weights: rule.weights.iter().map(|w| w * c).collect() })
    }

    /// Composite rule refined geometrically toward `s = -1`.
    ///
    /// Integrands such as `exp(-c s)` with large `c`, or `q_+^{-p}` with `x`
    /// close to `y`, concentrate in a layer of width `~1/c` at `s = -1`; `depth`
    /// dyadic panels resolve layers down to width `2^{-depth}`.
    pub fn graded(a: f64, order: usize, depth: usize) -> Result<Self> {
        if a == -0.5 || depth == 0 {
            return Self::gauss(a, order);
        }
        if !(a > -0.5) {
            return domain(format!("Pi_alpha needs alpha_i >= -1/2, got {a}"));
        }
        let beta = a - 0.5;
        let c = pi_normalizer(a);
        let gl = gauss_legendre_rule(order)?;
        let mut nodes = Vec::new();
        let mut weights = Vec::new();

        // innermost layer [-1, -1 + h]: Jacobi weight (1+s)^beta, smooth factor (1-s)^beta
        let h = 0.5f64.powi(depth as i32);
        let jr = gauss_jacobi_ab(order, 0.0, beta)?;
        let scale = (0.5 * h).powf(beta + 1.0);
        for (&sg, &w) in jr.nodes.iter().zip(&jr.weights) {
            let wv = 0.5 * h * (1.0 + sg);
            nodes.push(-1.0 + wv);
            weights.push(c * scale * w * (2.0 - wv).powf(beta));
        }
        // dyadic panels in w = 1 + s up to w = 1 (s = 0)
        for k in (1..=depth).rev() {
            let lo = 0.5f64.powi(k as i32);
            let hi = 2.0 * lo;
            for (wv, w) in gl.mapped(lo, hi) {
                nodes.push(-1.0 + wv);
                weights.push(c * w * (wv * (2.0 - wv)).powf(beta));
            }
        }
        // [0, 1]: Jacobi weight (1-s)^beta, smooth factor (1+s)^beta
        let jr = gauss_jacobi_ab(order, beta, 0.0)?;
        let scale = 0.5f64.powf(beta + 1.0);
        for (&sg, &w) in jr.nodes.iter().zip(&jr.weights) {
            let s = 0.5 * (1.0 + sg);
            nodes.push(s);
            weights.push(c * scale * w * (1.0 + s).powf(beta));
        }
        Ok(Self { nodes, weights })
    }
}

/// Tensor product of one-dimensional `Pi` discretizations.
#[derive(Debug, Clone, PartialEq)]
pub struct PiRule {
    pub axes: Vec<PiAxis>,
}

impl PiRule {
    pub fn gauss(alpha: &[f64], order: usize) -> Result<Self> {
        let axes = alpha.iter().map(|&a| PiAxis::gauss(a, order)).collect::<Result<_>>()?;
        Ok(Self { axes })
    }

    pub fn graded(alpha: &[f64], order: usize, depths: &[usize]) -> Result<Self> {
        let axes = alpha
            .iter()
            .zip(depths)
            .map(|(&a, &k)| PiAxis::graded(a, order, k))
            .collect::<Result<_>>()?;
        Ok(Self { axes })
    }

    pub fn integrate(&self, mut f: impl FnMut(&[f64]) -> f64) -> f64 {
        let d = self.axes.len();
        let mut idx = vec![0usize; d];
        let mut s = vec![0.0; d];
        let mut total = 0.0;
        loop {
            let mut w = 1.0;
            for i in 0..d {
                s[i] = self.axes[i].nodes[idx[i]];
                w *= self.axes[i].weights[idx[i]];
            }
            total += w * f(&s);
            let mut i = 0;
            loop {
                if i == d {
                    return total;
                }
                idx[i] += 1;
                if idx[i] < self.axes[i].nodes.len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }
}

/// `int f dPi_alpha` by tensor Gauss-Jacobi; coordinates with `alpha_i = -1/2`
/// use the two point masses `(eta_{-1} + eta_1) / sqrt(2 pi)`.
pub fn pi_alpha_integrate(
    alpha: &AlphaParam,
    f: impl FnMut(&[f64]) -> f64,
    order: usize,
) -> Result<f64> {
    if order == 0 {
        return domain("quadrature order must be >= 1");
    }
    Ok(PiRule::gauss(alpha.components(), order)?.integrate(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn alpha(v: &[f64]) -> AlphaParam {
        AlphaParam::new(v.to_vec()).unwrap()
    }

    fn pt(v: &[f64]) -> Point {
        Point::new(v.to_vec()).unwrap()
    }

    #[test]
    fn alpha_validation() {
        assert!(AlphaParam::new(vec![]).is_err());
        assert!(AlphaParam::new(vec![-1.0]).is_err());
        assert!(!alpha(&[-0.7, 0.0]).cz_eligible());
        assert!(alpha(&[-0.5, 3.0]).cz_eligible());
        assert!(alpha(&[-0.7]).require_cz().is_err());
        assert!(Point::new(vec![1.0, 0.0]).is_err());
    }

    #[test]
    fn box_examples() {
        assert!((mu_box(&alpha(&[-0.5]), &[1.0], &[3.0]).unwrap() - 2.0).abs() < 1e-15);
        assert!((mu_box(&alpha(&[0.0]), &[1.0], &[2.0]).unwrap() - 1.5).abs() < 1e-15);
        let v = mu_box(&alpha(&[0.0, -0.5]), &[0.0, 0.0], &[1.0, 2.0]).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
        assert!(mu_box(&alpha(&[0.0]), &[2.0], &[1.0]).is_err());
    }

    #[test]
    fn ball_examples_one_dim() {
        assert!((mu_ball(&alpha(&[-0.5]), &pt(&[5.0]), 1.0).unwrap() - 2.0).abs() < 1e-14);
        assert!((mu_ball(&alpha(&[0.0]), &pt(&[2.0]), 1.0).unwrap() - 4.0).abs() < 1e-14);
        let a = alpha(&[1.3]);
        for &(x, r) in &[(0.5f64, 2.0f64), (3.0, 1.0), (0.1, 0.05)] {
            let lo = (x - r).max(0.0);
            let want = mu_box(&a, &[lo], &[x + r]).unwrap();
            let got = mu_ball(&a, &pt(&[x]), r).unwrap();
            assert!((got - want).abs() <= 1e-12 * want);
        }
    }

    #[test]
    fn ball_two_dim_against_monte_carlo() {
        let a = alpha(&[0.0, 0.0]);
        let got = mu_ball(&a, &pt(&[3.0, 3.0]), 1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 2_000_000usize;
        let (mut s, mut s2) = (0.0, 0.0);
        for _ in 0..n {
            let (u, v): (f64, f64) = (rng.random_range(2.0..4.0), rng.random_range(2.0..4.0));
            let val = if (u - 3.0).powi(2) + (v - 3.0).powi(2) < 1.0 { 4.0 * u * v } else { 0.0 };
            s += val;
            s2 += val * val;
        }
        let mean = s / n as f64;
        let se = ((s2 / n as f64 - mean * mean) / n as f64).sqrt();
        assert!((got - mean).abs() < 3.0 * se, "{got} vs {mean} +- {se}");
        // symmetric disk: int x y over disk centered (3,3) = 9 pi
        assert!((got - 9.0 * PI).abs() < 1e-9);
    }

    #[test]
    fn ball_clipped_by_the_boundary() {
        // quarter disk of radius 1 at the origin corner, weight x y: int = 1/8
        let a = alpha(&[0.0, 0.0]);
        let got = mu_ball(&a, &pt(&[1e-12, 1e-12]), 1.0).unwrap();
        assert!((got - 0.125).abs() < 1e-8, "{got}");
        // Lebesgue: half disk of radius 2 centered at (0+, 5)
        let a = alpha(&[-0.5, -0.5]);
        let got = mu_ball(&a, &pt(&[1e-14, 5.0]), 2.0).unwrap();
        assert!((got - 2.0 * PI).abs() < 1e-8);
        // singular weight alpha < -1/2 touching the edge
        let a = alpha(&[-0.8, -0.5]);
        let got = mu_ball(&a, &pt(&[0.3, 4.0]), 1.0).unwrap();
        assert!(got.is_finite() && got > 0.0);
    }

    #[test]
    fn doubling_examples() {
        let r = doubling_ratio(&alpha(&[-0.5]), &pt(&[10.0]), 1.0).unwrap();
        assert!((r - 2.0).abs() < 1e-13);
        let r = doubling_ratio(&alpha(&[0.0]), &pt(&[1.0]), 1.0).unwrap();
        assert!((r - 2.25).abs() < 1e-13);
        let r = doubling_ratio(&alpha(&[0.0]), &pt(&[1e6]), 1.0).unwrap();
        assert!((r - 2.0).abs() < 1e-6);
    }

    #[test]
    fn doubling_bound_on_random_balls() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for comps in [vec![0.0], vec![1.5], vec![-0.5, 0.7]] {
            let a = alpha(&comps);
            let bound = 2f64.powf(comps.iter().map(|a| 2.0 * a + 2.0).sum());
            for _ in 0..200 {
                let x: Vec<f64> = (0..a.dim()).map(|_| rng.random_range(0.001..10.0)).collect();
                let r = rng.random_range(0.001..5.0);
                let ratio = doubling_ratio(&a, &pt(&x), r).unwrap();
                assert!(ratio <= bound + 1e-9, "ratio {ratio} > {bound}");
            }
        }
    }

    #[test]
    fn pi_alpha_examples() {
        let one = pi_alpha_integrate(&alpha(&[-0.5]), |_| 1.0, 4).unwrap();
        assert!((one - (2.0 / PI).sqrt()).abs() < 1e-15);
        for &a in &[-0.3, 0.0, 0.5, 2.7] {
            let got = pi_alpha_integrate(&alpha(&[a]), |_| 1.0, 6).unwrap();
            let want = 1.0 / (2f64.powf(a) * statrs::function::gamma::gamma(a + 1.0));
            assert!((got - want).abs() < 1e-12 * want, "a={a}");
            assert!(pi_alpha_integrate(&alpha(&[a]), |s| s[0], 6).unwrap().abs() < 1e-15);
        }
        assert!(pi_alpha_integrate(&alpha(&[-0.7]), |_| 1.0, 6).is_err());
    }

    #[test]
    fn pi_alpha_polynomial_moments() {
        // int s^{2m} dPi_a = Γ(m+1/2) / (sqrt(pi) 2^a Γ(a+m+1))
        let g = statrs::function::gamma::gamma;
        for &a in &[-0.2, 0.4, 1.0] {
            let order = 6;
            for m in 0..order {
                let got = pi_alpha_integrate(&alpha(&[a]), |s| s[0].powi(2 * m as i32), order).unwrap();
                let want = g(m as f64 + 0.5) / (PI.sqrt() * 2f64.powf(a) * g(a + m as f64 + 1.0));
                assert!((got - want).abs() < 1e-10 * want);
            }
        }
    }

    #[test]
    fn tensorization() {
        let a = alpha(&[0.3, -0.5, 1.1]);
        let fs = [|s: f64| (1.0 + s).powi(3), |s: f64| (0.5 * s).exp(), |s: f64| 2.0 - s * s];
        let joint = pi_alpha_integrate(&a, |s| fs[0](s[0]) * fs[1](s[1]) * fs[2](s[2]), 8).unwrap();
        let sep: f64 = (0..3)
            .map(|i| pi_alpha_integrate(&alpha(&[a.components()[i]]), |s| fs[i](s[0]), 8).unwrap())
            .product();
        assert!((joint - sep).abs() < 1e-12 * sep.abs());
    }

    #[test]
    fn graded_axis_matches_plain_on_smooth_and_resolves_layers() {
        for &a in &[-0.3, 0.0, 0.5, 1.7] {
            let plain = PiAxis::gauss(a, 20).unwrap();
            let graded = PiAxis::graded(a, 12, 10).unwrap();
            let f = |s: f64| (0.3 * s).cos();
            let p: f64 = plain.nodes.iter().zip(&plain.weights).map(|(&s, &w)| w * f(s)).sum();
            let g: f64 = graded.nodes.iter().zip(&graded.weights).map(|(&s, &w)| w * f(s)).sum();
            assert!((p - g).abs() < 1e-12, "a={a}: {p} vs {g}");
            // exp(-c(1+s)) with large c: int ~ norm * (2)^beta * Γ(beta+1) c^{-(beta+1)}
            let c = 1e4;
            let beta = a - 0.5;
            let g: f64 = graded.nodes.iter().zip(&graded.weights).map(|(&s, &w)| w * (-c * (1.0 + s)).exp()).sum();
            let fine = PiAxis::graded(a, 24, 20).unwrap();
            let want: f64 = fine.nodes.iter().zip(&fine.weights).map(|(&s, &w)| w * (-c * (1.0 + s)).exp()).sum();
            let approx = pi_normalizer(a) * 2f64.powf(beta) * statrs::function::gamma::gamma(beta + 1.0) * c.powf(-(beta + 1.0));
            assert!((want - approx).abs() < 1e-3 * approx);
            let deep = PiAxis::graded(a, 12, 17).unwrap();
            let d: f64 = deep.nodes.iter().zip(&deep.weights).map(|(&s, &w)| w * (-c * (1.0 + s)).exp()).sum();
            assert!((d - want).abs() < 1e-9 * want, "a={a}: {d} vs {want} ({g})");
        }
    }
}
