//! Time integrals over `t in (0, inf)` carried out in `zeta = tanh t`.

use crate::error::{domain, Result};
use crate::specfun::{gauss_legendre_rule, QuadratureRule, RuleKind};

/// `zeta = tanh t`.
pub fn zeta_of_t(t: f64) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return domain(format!("t must be positive and finite, got {t}"));
    }
    Ok(t.tanh())
}

/// `t = (1/2) ln((1 + zeta)/(1 - zeta))`.
pub fn t_of_zeta(zeta: f64) -> Result<f64> {
    if !(zeta > 0.0 && zeta < 1.0) {
        return domain(format!("zeta must lie in (0, 1), got {zeta}"));
    }
    Ok(zeta.atanh())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeMeasure {
    Dt,
    TDt,
}

/// Composite Gauss-Legendre grid on `zeta in (0, 1)`.
///
/// `(0, 1/2]` is split into dyadic panels `[2^{-k-1}, 2^{-k}]`, `k = 1..lower_depth`,
/// plus `[0, 2^{-lower_depth-1}]`. `[1/2, 1)` is split in `w = 1 - zeta` into
/// panels shrinking by 4 toward `w = 0`, `upper_depth` of them plus an end panel.
/// Each panel carries `order` nodes. With the default upper depth the last
/// panel starts near `t = 12`, so profiles are expected to decay at least
/// like `e^{-t}`; every kernel here decays like `e^{-lambda_0 t}` with `lambda_0 >= 1`
/// on `[-1/2, inf)^d`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ZetaGridSpec {
    pub order: usize,
    /// Fixed dyadic depth toward `zeta = 0`; `None` derives it from `|x - y|`.
    pub lower_depth: Option<usize>,
    pub upper_depth: usize,
}

impl Default for ZetaGridSpec {
    fn default() -> Self {
        Self { order: 16, lower_depth: None, upper_depth: 16 }
    }
}

impl ZetaGridSpec {
    pub fn with_order(order: usize) -> Self {
        Self { order, ..Self::default() }
    }

    /// Same panels, twice the nodes per panel.
    pub fn refined(&self) -> Self {
        Self { order: 2 * self.order, ..*self }
    }

    /// Kernel profiles behave like `exp(-|x-y|^2 / (4 zeta))` near 0; the
    /// dyadic panels must reach below `zeta ~ |x-y|^2 / 160`.
    pub fn lower_depth_for(&self, dist: Option<f64>) -> usize {
        match (self.lower_depth, dist) {
            (Some(k), _) => k,
            (None, Some(r)) if r > 0.0 => ((160.0 / (r * r)).log2().ceil() as i64 + 2).clamp(3, 60) as usize,
            _ => 8,
        }
    }

    pub fn build(&self, dist: Option<f64>) -> Result<TimeGrid> {
        if self.order == 0 {
            return domain("zeta grid order must be >= 1");
        }
        let gl = gauss_legendre_rule(self.order)?;
        let lower = self.lower_depth_for(dist);
        let mut zeta = Vec::new();
        let mut t = Vec::new();
        let mut jac = Vec::new();
        let mut dzeta = Vec::new();
        let mut push_lower = |lo: f64, hi: f64| {
            for (z, w) in gl.mapped(lo, hi) {
                zeta.push(z);
                t.push(z.atanh());
                jac.push(w / (1.0 - z * z));
                dzeta.push(w);
            }
        };
        push_lower(0.0, 0.5f64.powi(lower as i32 + 1));
        for k in (1..=lower).rev() {
            let lo = 0.5f64.powi(k as i32 + 1);
            push_lower(lo, 2.0 * lo);
        }
        // upper half in w = 1 - zeta, from w = 1/2 down to 0
        let mut upper: Vec<(f64, f64, f64, f64, f64)> = Vec::new();
        let mut push_upper = |lo: f64, hi: f64| {
            for (wv, w) in gl.mapped(lo, hi) {
                let two_minus = 2.0 - wv;
                upper.push((1.0 - wv, 0.5 * (two_minus / wv).ln(), w / (wv * two_minus), wv, w));
            }
        };
        for m in 0..self.upper_depth {
            let hi = 0.5 * 0.25f64.powi(m as i32);
            push_upper(0.25 * hi, hi);
        }
        push_upper(0.0, 0.5 * 0.25f64.powi(self.upper_depth as i32));
        upper.sort_by(|a, b| b.3.total_cmp(&a.3));
        for (z, tv, j, _, w) in upper {
            zeta.push(z);
            t.push(tv);
            jac.push(j);
            dzeta.push(w);
        }
        Ok(TimeGrid { zeta, t, jac, dzeta, order: self.order })
    }
}

/// Nodes of a [`ZetaGridSpec`]; `jac` holds the `dt` weights.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    pub zeta: Vec<f64>,
    pub t: Vec<f64>,
    pub jac: Vec<f64>,
    /// Plain `dzeta` weights, for integrals posed in `zeta` itself.
    pub dzeta: Vec<f64>,
    order: usize,
}

impl TimeGrid {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    pub fn weights(&self, measure: TimeMeasure) -> Vec<f64> {
        match measure {
            TimeMeasure::Dt => self.jac.clone(),
            TimeMeasure::TDt => self.jac.iter().zip(&self.t).map(|(j, t)| j * t).collect(),
        }
    }

    /// The grid as a rule for `int_0^inf g(t) dt` in the variable `zeta`.
    pub fn rule(&self) -> QuadratureRule {
        QuadratureRule {
            nodes: self.zeta.clone(),
            weights: self.jac.clone(),
            kind: RuleKind::ZetaTimeGrid { order: self.order },
        }
    }

    pub fn profile(&self, measure: TimeMeasure, values: Vec<f64>) -> TimeProfile {
        debug_assert_eq!(values.len(), self.len());
        TimeProfile {
            measure_kind: measure,
            zeta_nodes: self.zeta.clone(),
            t_nodes: self.t.clone(),
            values,
            weights: self.weights(measure),
        }
    }

    pub fn sample(&self, measure: TimeMeasure, f: impl Fn(f64) -> f64) -> TimeProfile {
        self.profile(measure, self.t.iter().map(|&t| f(t)).collect())
    }
}

/// A function of `t` sampled on a zeta grid, with the weights of its norm.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeProfile {
    pub measure_kind: TimeMeasure,
    pub zeta_nodes: Vec<f64>,
    pub t_nodes: Vec<f64>,
    pub values: Vec<f64>,
    pub weights: Vec<f64>,
}

impl TimeProfile {
    /// Nodewise difference of two profiles on the same grid.
    pub fn minus(&self, other: &TimeProfile) -> Result<TimeProfile> {
        if self.zeta_nodes != other.zeta_nodes || self.measure_kind != other.measure_kind {
            return domain("profiles live on different grids");
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(TimeProfile { values, ..self.clone() })
    }
}

/// `||p||_B = sqrt(sum w v^2)`, `B = L^2(dt)` or `L^2(t dt)`.
pub fn bnorm(p: &TimeProfile) -> f64 {
    p.values.iter().zip(&p.weights).map(|(v, w)| w * v * v).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_maps() {
        assert!((t_of_zeta(zeta_of_t(0.7).unwrap()).unwrap() - 0.7).abs() < 1e-14);
        assert!((zeta_of_t(1e-4).unwrap() - 1e-4).abs() <= 1e-11);
        assert!(zeta_of_t(20.0).unwrap() >= 1.0 - 1e-16);
        assert!(zeta_of_t(0.0).is_err());
        assert!(t_of_zeta(1.0).is_err());
        assert!(t_of_zeta(0.0).is_err());
    }

    #[test]
    fn grid_is_increasing_and_positive() {
        for spec in [ZetaGridSpec::default(), ZetaGridSpec { order: 5, lower_depth: Some(40), upper_depth: 20 }] {
            let g = spec.build(None).unwrap();
            assert!(g.zeta.windows(2).all(|w| w[0] < w[1]));
            assert!(g.zeta[0] > 0.0 && *g.zeta.last().unwrap() < 1.0);
            assert!(g.t.windows(2).all(|w| w[0] < w[1]));
            assert!(g.jac.iter().all(|&w| w > 0.0));
        }
    }

    #[test]
    fn exponential_norms() {
        let g = ZetaGridSpec::default().build(None).unwrap();
        for c in [1.0, 2.0, 7.0, 40.0] {
            let p = g.sample(TimeMeasure::TDt, |t| (-c * t).exp());
            assert!((bnorm(&p) - 1.0 / (2.0 * c)).abs() < 1e-9 / (2.0 * c), "c={c}");
            let p = g.sample(TimeMeasure::Dt, |t| (-c * t).exp());
            assert!((bnorm(&p) - 1.0 / (2.0 * c).sqrt()).abs() < 1e-9 / (2.0 * c).sqrt());
        }
        assert_eq!(bnorm(&g.sample(TimeMeasure::Dt, |_| 0.0)), 0.0);
    }

    #[test]
    fn gaussian_layer_near_zero() {
        // int_0^inf t^{-3/2} e^{-r/t - t} dt = sqrt(pi/r) e^{-2 sqrt r}
        for r in [1e-2f64, 1e-4, 1e-6] {
            let spec = ZetaGridSpec::default();
            let g = spec.build(Some((4.0 * r).sqrt())).unwrap();
            let got = g.rule().integrate(|z| {
                let t = z.atanh();
                (-r / t - t).exp() / t.powf(1.5)
            });
            let want = (std::f64::consts::PI / r).sqrt() * (-2.0 * r.sqrt()).exp();
            assert!((got - want).abs() < 1e-9 * want, "r={r}: {got} vs {want}");
        }
    }
}
