//! The ten Littlewood-Paley square functions evaluated on finite expansions.
//!
//! On a finite expansion every time integrand is an exponential sum
//! `sum_m a_m(x) e^{-t nu_m}` (`nu = lambda` for heat, `sqrt(lambda)` for
//! Poisson), so its `L^2(t dt)` and `L^2(dt)` norms are the quadratic forms
//! `sum a a' / (nu + nu')^2` and `sum a a' / (nu + nu')`.

use crate::basis::{delta_apply, delta_star_apply, eigenvalue, ell, BasisFamily, Expansion, MuRule};
use crate::error::{domain, Error, Result};
use crate::kernels::{bnorm, KernelKind, TimeMeasure, ZetaGridSpec};
use crate::measure::Point;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

/// Square-function kinds with zero-based coordinates `i`, `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GFunctionKind {
    VT,
    HT(usize),
    VTmod(usize),
    HTmod { j: usize, i: usize },
    HTmodStar(usize),
    VP,
    HP(usize),
    VPmod(usize),
    HPmod { j: usize, i: usize },
    HPmodStar(usize),
}

impl GFunctionKind {
    /// The vector-valued kernel associated with this square function.
    pub fn kernel(self) -> KernelKind {
        match self {
            GFunctionKind::VT => KernelKind::DT,
            GFunctionKind::HT(i) => KernelKind::HT(i),
            GFunctionKind::VTmod(j) => KernelKind::DTmod(j),
            GFunctionKind::HTmod { j, i } => KernelKind::HTmod { j, i },
            GFunctionKind::HTmodStar(j) => KernelKind::HTmodStar(j),
            GFunctionKind::VP => KernelKind::DP,
            GFunctionKind::HP(i) => KernelKind::HP(i),
            GFunctionKind::VPmod(j) => KernelKind::DPmod(j),
            GFunctionKind::HPmod { j, i } => KernelKind::HPmod { j, i },
            GFunctionKind::HPmodStar(j) => KernelKind::HPmodStar(j),
        }
    }

    pub fn measure(self) -> TimeMeasure {
        self.kernel().measure()
    }

    pub fn is_poisson(self) -> bool {
        self.kernel().is_poisson()
    }

    /// Family of the expansions the square function acts on.
    pub fn family(self) -> BasisFamily {
        match self.kernel().modified() {
            Some(j) => BasisFamily::Differentiated(j),
            None => BasisFamily::Plain,
        }
    }

    pub fn validate(self, d: usize) -> Result<()> {
        self.kernel().validate(d)
    }

    pub fn verticals(d: usize) -> Vec<GFunctionKind> {
        let mut v = vec![GFunctionKind::VT, GFunctionKind::VP];
        for j in 0..d {
            v.push(GFunctionKind::VTmod(j));
            v.push(GFunctionKind::VPmod(j));
        }
        v
    }

    /// One square function per kernel of [`KernelKind::representatives`].
    pub fn representatives(d: usize) -> Vec<GFunctionKind> {
        KernelKind::representatives(d).into_iter().map(GFunctionKind::from_kernel).collect()
    }

    fn from_kernel(k: KernelKind) -> Self {
        match k {
            KernelKind::DT => GFunctionKind::VT,
            KernelKind::HT(i) => GFunctionKind::HT(i),
            KernelKind::DTmod(j) => GFunctionKind::VTmod(j),
            KernelKind::HTmod { j, i } => GFunctionKind::HTmod { j, i },
            KernelKind::HTmodStar(j) => GFunctionKind::HTmodStar(j),
            KernelKind::DP => GFunctionKind::VP,
            KernelKind::HP(i) => GFunctionKind::HP(i),
            KernelKind::DPmod(j) => GFunctionKind::VPmod(j),
            KernelKind::HPmod { j, i } => GFunctionKind::HPmod { j, i },
            KernelKind::HPmodStar(j) => GFunctionKind::HPmodStar(j),
        }
    }
}

/// Labels mirror the kernel labels with a `g` prefix and `V`/`H` in place of `d`/`h`,
/// e.g. `gVT`, `gHTmod(1,2)`, with one-based coordinates.
impl fmt::Display for GFunctionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.kernel().to_string();
        let (head, tail) = k.split_at(1);
        let head = if head == "d" { "V" } else { "H" };
        write!(f, "g{head}{tail}")
    }
}

impl FromStr for GFunctionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let rest = s.strip_prefix('g').ok_or_else(|| Error::Usage(format!("unknown g-function '{s}'")))?;
        let kernel = if let Some(r) = rest.strip_prefix('V') {
            format!("d{r}")
        } else if let Some(r) = rest.strip_prefix('H') {
            format!("h{r}")
        } else {
            return Err(Error::Usage(format!("unknown g-function '{s}'")));
        };
        Ok(Self::from_kernel(kernel.parse()?))
    }
}

/// `(nu_n, A_n(x))` with modes of equal `|k| = n` merged.
fn amplitudes(kind: GFunctionKind, e: &Expansion, x: &Point) -> Result<Vec<(f64, f64)>> {
    let alpha = e.alpha();
    kind.validate(alpha.dim())?;
    alpha.check_dim(x.dim())?;
    if e.family() != kind.family() {
        return Err(Error::Usage(format!(
            "{kind} acts on the {:?} family, got {:?}",
            kind.family(),
            e.family()
        )));
    }
    let nu = |n: usize| {
        let l = eigenvalue(alpha, n);
        if kind.is_poisson() {
            l.sqrt()
        } else {
            l
        }
    };
    let mut merged: BTreeMap<usize, f64> = BTreeMap::new();
    let mut add = |n: usize, a: f64| *merged.entry(n).or_insert(0.0) += a;
    match kind {
        GFunctionKind::VT | GFunctionKind::VP | GFunctionKind::VTmod(_) | GFunctionKind::VPmod(_) => {
            for ((k, c), b) in e.terms().zip(e.basis_values(x)) {
                add(k.order(), -nu(k.order()) * c * b);
            }
        }
        GFunctionKind::HT(i) | GFunctionKind::HP(i) => {
            let de = delta_apply(e, i)?;
            for ((k, c), b) in de.terms().zip(de.basis_values(x)) {
                add(k.order(), c * b);
            }
        }
        GFunctionKind::HTmodStar(j) | GFunctionKind::HPmodStar(j) => {
            let ds = delta_star_apply(e, j)?;
            for ((k, c), b) in ds.terms().zip(ds.basis_values(x)) {
                add(k.order(), c * b);
            }
        }
        GFunctionKind::HTmod { j, i } | GFunctionKind::HPmod { j, i } => {
            // delta_i (x_j ell_{k-e_j}^{alpha+e_j}) = -2 sqrt(k_i) x_i x_j ell_{k-e_j-e_i}^{alpha+e_j+e_i}
            let shifted = alpha.shifted(j).shifted(i);
            for (k, c) in e.terms() {
                let Some(km) = k.lowered(j).and_then(|m| m.lowered(i)) else { continue };
                let b = x[i] * x[j] * ell(&shifted, &km, x);
                add(k.order(), -2.0 * (k[i] as f64).sqrt() * c * b);
            }
        }
    }
    Ok(merged.into_iter().map(|(n, a)| (nu(n), a)).collect())
}

/// `g(f)(x)` from the closed-form quadratic form.
pub fn gfun_exact(kind: GFunctionKind, e: &Expansion, x: &Point) -> Result<f64> {
    let modes = amplitudes(kind, e, x)?;
    let power = match kind.measure() {
        TimeMeasure::TDt => 2,
        TimeMeasure::Dt => 1,
    };
    let mut sq = 0.0;
    for &(nu, a) in &modes {
        for &(nu2, a2) in &modes {
            sq += a * a2 / (nu + nu2).powi(power);
        }
    }
    Ok(sq.max(0.0).sqrt())
}

/// `g(f)(x)` by sampling the time integrand on a zeta grid and taking its norm.
pub fn gfun_quadrature(kind: GFunctionKind, e: &Expansion, x: &Point, spec: &ZetaGridSpec) -> Result<f64> {
    let modes = amplitudes(kind, e, x)?;
    let grid = spec.build(None)?;
    let profile = grid.sample(kind.measure(), |t| modes.iter().map(|&(nu, a)| a * (-t * nu).exp()).sum());
    Ok(bnorm(&profile))
}

/// `||g(f)||_{L^2(dmu_alpha)}` by Gauss-Laguerre quadrature of `g(f)^2`, exact
/// for finite expansions once `order > max |k| + 1`.
pub fn gfun_l2_norm(kind: GFunctionKind, e: &Expansion, order: usize) -> Result<f64> {
    if order == 0 {
        return domain("quadrature order must be >= 1");
    }
    let rule = MuRule::new(e.alpha(), order)?;
    let mut total = 0.0;
    for (p, w) in rule.points.iter().zip(&rule.weights) {
        total += w * gfun_exact(kind, e, p)?.powi(2);
    }
    Ok(total.sqrt())
}

/// Default quadrature order for [`gfun_l2_norm`] on `e`.
pub fn l2_order_for(e: &Expansion) -> usize {
    e.max_order() + 4
}

/// `sum_k (2|k| / lambda_|k|) c_k^2`, the value of `sum_i ||g_HT^i(f)||^2`.
pub fn horizontal_heat_spectral(e: &Expansion) -> f64 {
    e.terms()
        .map(|(k, c)| 2.0 * k.order() as f64 / eigenvalue(e.alpha(), k.order()) * c * c)
        .sum()
}

/// `sum_n (n / lambda_n) sum_{|k|=n} c_k^2`, the value of
/// `sum_{i != j} ||g_HPmod^{j,i}(f)||^2 + ||g_HPmodStar^j(f)||^2`.
pub fn horizontal_modified_poisson_spectral(e: &Expansion) -> f64 {
    e.terms()
        .map(|(k, c)| k.order() as f64 / eigenvalue(e.alpha(), k.order()) * c * c)
        .sum()
}

/// The horizontal square functions whose squared norms add up to
/// [`horizontal_heat_spectral`] (plain `e`) or
/// [`horizontal_modified_poisson_spectral`] (differentiated `e`).
pub fn horizontal_family(d: usize, family: BasisFamily) -> Vec<GFunctionKind> {
    match family {
        BasisFamily::Plain => (0..d).map(GFunctionKind::HT).collect(),
        BasisFamily::Differentiated(j) => (0..d)
            .map(|i| if i == j { GFunctionKind::HPmodStar(j) } else { GFunctionKind::HPmod { j, i } })
            .collect(),
    }
}
