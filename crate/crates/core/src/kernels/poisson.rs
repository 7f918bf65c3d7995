//! Poisson kernels by subordination to the heat kernel.
//!
//! With `tau = t^2/(4u)` the subordination integral reads
//! `P_t = t/(2 sqrt(pi)) int_0^inf tau^{-3/2} e^{-t^2/(4 tau)} G_tau dtau`, and,
//! because `tau^{-1/2} e^{-t^2/(4tau)}` solves the one-dimensional heat equation,
//! `d/dt P_t = 1/sqrt(pi) int_0^inf tau^{-1/2} e^{-t^2/(4 tau)} d/dtau G_tau dtau`.
//! Both are integrated with the trapezoidal rule in `ln tau`, which converges
//! geometrically for these doubly-exponentially decaying integrands.

use super::heat::{kernel_jet, KernelJet};
use crate::error::{domain, Result};
use crate::measure::{AlphaParam, Point};
use std::f64::consts::PI;

/// Trapezoidal grid in `ln tau`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SubordinationGrid {
    pub step: f64,
}

impl Default for SubordinationGrid {
    fn default() -> Self {
        Self { step: 0.125 }
    }
}

impl SubordinationGrid {
    /// `tau` nodes covering both the `e^{-r/tau}` layer (`r = t_min^2 + |x-y|^2`)
    /// and the `e^{-lambda_0 tau}` tail.
    pub fn nodes(&self, r: f64, lambda0: f64) -> Result<Vec<f64>> {
        if !(self.step > 0.0) || !(r > 0.0) || !(lambda0 > 0.0) {
            return domain(format!(
                "bad subordination grid: step {}, layer {r}, bottom eigenvalue {lambda0}",
                self.step
            ));
        }
        let lo = (r / 160.0).ln() - 2.0;
        let hi = (60.0 / lambda0).ln().max(lo + 1.0) + 2.0;
        let n = ((hi - lo) / self.step).ceil() as usize;
        Ok((0..=n).map(|m| (lo + m as f64 * self.step).exp()).collect())
    }
}

/// `(1/sqrt(pi)) int_0^inf e^{-u} u^{-1/2} e^{-(t^2/4u) lambda} du`, which
/// equals `e^{-t sqrt(lambda)}`.
pub fn subordinate_mode(lambda: f64, t: f64, grid: SubordinationGrid) -> Result<f64> {
    if !(t > 0.0) {
        return domain(format!("t must be positive, got {t}"));
    }
    let taus = grid.nodes(t * t, lambda)?;
    let sum: f64 = taus.iter().map(|&tau| (-0.5 * tau.ln() - t * t / (4.0 * tau) - lambda * tau).exp()).sum();
    Ok(t / (2.0 * PI.sqrt()) * grid.step * sum)
}

/// Which function of the heat kernel is subordinated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Quantity {
    Value,
    Time,
    Delta(usize),
    DeltaStar(usize),
}

impl Quantity {
    pub fn factor(self, jet: &KernelJet) -> f64 {
        match self {
            Quantity::Value => 1.0,
            Quantity::Time => jet.dt,
            Quantity::Delta(i) => jet.delta[i],
            Quantity::DeltaStar(i) => jet.delta_star[i],
        }
    }
}

/// Bottom of the spectrum of the (modified) heat semigroup.
fn bottom_eigenvalue(alpha: &[f64], modified: Option<usize>) -> f64 {
    let base = 2.0 * alpha.iter().sum::<f64>() + 2.0 * alpha.len() as f64;
    if modified.is_some() {
        base + 4.0
    } else {
        base
    }
}

/// `q` applied to the Poisson kernel (`Time` meaning `d/dt P_t`) at each `t`.
pub(crate) fn poisson_values(
    alpha: &[f64],
    modified: Option<usize>,
    q: Quantity,
    x: &[f64],
    y: &[f64],
    ts: &[f64],
    grid: SubordinationGrid,
) -> Result<Vec<f64>> {
    let t_min = ts.iter().copied().fold(f64::INFINITY, f64::min);
    if !(t_min > 0.0) {
        return domain("Poisson kernels need t > 0");
    }
    let dist_sq: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    let taus = grid.nodes(t_min * t_min + dist_sq, bottom_eigenvalue(alpha, modified))?;
    // log-magnitude, sign of the subordinated heat quantity, with the ln tau power folded in
    let power = if q == Quantity::Time { 0.5 } else { -0.5 };
    let mut terms = Vec::with_capacity(taus.len());
    for &tau in &taus {
        let jet = kernel_jet(alpha, modified, tau, x, y)?;
        let f = q.factor(&jet);
        if f != 0.0 {
            terms.push((tau, jet.ln_g + f.abs().ln() + power * tau.ln(), f.signum()));
        }
    }
    Ok(ts
        .iter()
        .map(|&t| {
            let s: f64 = terms.iter().map(|&(tau, l, sg)| sg * (l - t * t / (4.0 * tau)).exp()).sum();
            let pre = if q == Quantity::Time { 1.0 / PI.sqrt() } else { t / (2.0 * PI.sqrt()) };
            pre * grid.step * s
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PoissonVariant {
    Plain,
    /// Subordinated to the modified heat kernel in coordinate `j`.
    Modified(usize),
}

/// `P_t^alpha(x, y)` or `P~_t^{alpha,j}(x, y)`.
pub fn poisson_kernel(
    alpha: &AlphaParam,
    variant: PoissonVariant,
    t: f64,
    x: &Point,
    y: &Point,
    grid: SubordinationGrid,
) -> Result<f64> {
    alpha.check_dim(x.dim())?;
    alpha.check_dim(y.dim())?;
    let modified = match variant {
        PoissonVariant::Plain => None,
        PoissonVariant::Modified(j) if j < alpha.dim() => Some(j),
        PoissonVariant::Modified(j) => return domain(format!("coordinate {j} out of range")),
    };
    Ok(poisson_values(alpha.components(), modified, Quantity::Value, x.coords(), y.coords(), &[t], grid)?[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::{eigenvalue, ell, MultiIndex};

    fn pt(v: &[f64]) -> Point {
        Point::new(v.to_vec()).unwrap()
    }

    #[test]
    fn per_mode_subordination() {
        let g = SubordinationGrid::default();
        let mut worst: f64 = 0.0;
        for lambda in 1..=50 {
            for t in [0.1, 1.0, 5.0] {
                let l = lambda as f64;
                let got = subordinate_mode(l, t, g).unwrap();
                let want = (-t * l.sqrt()).exp();
                worst = worst.max((got - want).abs() / want);
            }
        }
        assert!(worst < 1e-10, "{worst}");
    }

    #[test]
    fn poisson_matches_spectral_series() {
        let a = AlphaParam::new(vec![0.0]).unwrap();
        let (x, y) = (pt(&[1.0]), pt(&[2.0]));
        let mut s = 0.0;
        for n in 0..400 {
            let k = MultiIndex::new(vec![n]);
            s += (-eigenvalue(&a, n).sqrt()).exp() * ell(&a, &k, &x) * ell(&a, &k, &y);
        }
        let p = poisson_kernel(&a, PoissonVariant::Plain, 1.0, &x, &y, SubordinationGrid::default()).unwrap();
        assert!((p - s).abs() < 1e-6 * s.abs(), "{p} vs {s}");
        let q = poisson_kernel(&a, PoissonVariant::Plain, 1.0, &y, &x, SubordinationGrid::default()).unwrap();
        assert!((p - q).abs() <= 1e-15 * p);
    }

    #[test]
    fn modified_poisson_matches_spectral_series() {
        let a = AlphaParam::new(vec![0.4, -0.5]).unwrap();
        let (x, y) = (pt(&[0.8, 1.3]), pt(&[1.5, 0.6]));
        let t = 1.5;
        for j in 0..2 {
            let aj = a.shifted(j);
            let mut s = 0.0;
            for k in MultiIndex::all_up_to(2, 150) {
                if let Some(km) = k.lowered(j) {
                    s += (-t * eigenvalue(&a, k.order()).sqrt()).exp() * x[j] * y[j] * ell(&aj, &km, &x) * ell(&aj, &km, &y);
                }
            }
            let p = poisson_kernel(&a, PoissonVariant::Modified(j), t, &x, &y, SubordinationGrid::default()).unwrap();
            assert!((p - s).abs() < 1e-7 * s.abs(), "j={j}: {p} vs {s}");
        }
    }
}
