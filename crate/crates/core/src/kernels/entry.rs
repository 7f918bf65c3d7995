//! The ten vector-valued kernels `{K_t(x, y)}_{t>0}` of the square functions,
//! sampled on a zeta time grid.

use super::heat::kernel_jet;
use super::poisson::{poisson_values, Quantity, SubordinationGrid};
use super::time_grid::{TimeGrid, TimeMeasure, TimeProfile, ZetaGridSpec};
use crate::error::{domain, Error, Result};
use crate::measure::{AlphaParam, Point};
use std::fmt;
use std::str::FromStr;

/// Kernel kinds with zero-based coordinates `i`, `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KernelKind {
    /// `d/dt G_t`
    DT,
    /// `d/dt P_t`
    DP,
    /// `delta_i G_t`
    HT(usize),
    /// `delta_i P_t`
    HP(usize),
    /// `d/dt G~_t^{j}`
    DTmod(usize),
    /// `d/dt P~_t^{j}`
    DPmod(usize),
    /// `delta_i G~_t^{j}`, `i != j`
    HTmod { j: usize, i: usize },
    /// `delta_i P~_t^{j}`, `i != j`
    HPmod { j: usize, i: usize },
    /// `delta_j^* G~_t^{j}`
    HTmodStar(usize),
    /// `delta_j^* P~_t^{j}`
    HPmodStar(usize),
}

impl KernelKind {
    /// `L^2(dt)` for the horizontal heat kernels, `L^2(t dt)` otherwise.
    pub fn measure(self) -> TimeMeasure {
        match self {
            KernelKind::HT(_) | KernelKind::HTmod { .. } | KernelKind::HTmodStar(_) => TimeMeasure::Dt,
            _ => TimeMeasure::TDt,
        }
    }

    pub fn is_poisson(self) -> bool {
        matches!(
            self,
            KernelKind::DP | KernelKind::HP(_) | KernelKind::DPmod(_) | KernelKind::HPmod { .. } | KernelKind::HPmodStar(_)
        )
    }

    pub fn modified(self) -> Option<usize> {
        match self {
            KernelKind::DTmod(j)
            | KernelKind::DPmod(j)
            | KernelKind::HTmod { j, .. }
            | KernelKind::HPmod { j, .. }
            | KernelKind::HTmodStar(j)
            | KernelKind::HPmodStar(j) => Some(j),
            _ => None,
        }
    }

    pub(crate) fn quantity(self) -> Quantity {
        match self {
            KernelKind::DT | KernelKind::DP | KernelKind::DTmod(_) | KernelKind::DPmod(_) => Quantity::Time,
            KernelKind::HT(i) | KernelKind::HP(i) | KernelKind::HTmod { i, .. } | KernelKind::HPmod { i, .. } => {
                Quantity::Delta(i)
            }
            KernelKind::HTmodStar(j) | KernelKind::HPmodStar(j) => Quantity::DeltaStar(j),
        }
    }

    pub fn validate(self, d: usize) -> Result<()> {
        let bad = |c: usize| c >= d;
        let ok = match self {
            KernelKind::DT | KernelKind::DP => true,
            KernelKind::HT(i) | KernelKind::HP(i) => !bad(i),
            KernelKind::DTmod(j) | KernelKind::DPmod(j) | KernelKind::HTmodStar(j) | KernelKind::HPmodStar(j) => !bad(j),
            KernelKind::HTmod { j, i } | KernelKind::HPmod { j, i } => !bad(i) && !bad(j) && i != j,
        };
        if ok {
            Ok(())
        } else {
            domain(format!("kernel kind {self} is not valid in dimension {d}"))
        }
    }

    /// One representative of each of the ten kinds, using coordinates
    /// `j = 0` and `i = 1` (or `i = 0` when `d = 1`, where the mixed kinds do not exist).
    pub fn representatives(d: usize) -> Vec<KernelKind> {
        let i = if d > 1 { 1 } else { 0 };
        let mut v = vec![
            KernelKind::DT,
            KernelKind::DP,
            KernelKind::HT(i),
            KernelKind::HP(i),
            KernelKind::DTmod(0),
            KernelKind::DPmod(0),
            KernelKind::HTmodStar(0),
            KernelKind::HPmodStar(0),
        ];
        if d > 1 {
            v.insert(6, KernelKind::HTmod { j: 0, i: 1 });
            v.insert(7, KernelKind::HPmod { j: 0, i: 1 });
        }
        v
    }
}

/// Labels use one-based coordinates: `hTmod(1,2)` is `delta_2 G~^{alpha,1}`.
impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            KernelKind::DT => write!(f, "dT"),
            KernelKind::DP => write!(f, "dP"),
            KernelKind::HT(i) => write!(f, "hT({})", i + 1),
            KernelKind::HP(i) => write!(f, "hP({})", i + 1),
            KernelKind::DTmod(j) => write!(f, "dTmod({})", j + 1),
            KernelKind::DPmod(j) => write!(f, "dPmod({})", j + 1),
            KernelKind::HTmod { j, i } => write!(f, "hTmod({},{})", j + 1, i + 1),
            KernelKind::HPmod { j, i } => write!(f, "hPmod({},{})", j + 1, i + 1),
            KernelKind::HTmodStar(j) => write!(f, "hTmodStar({})", j + 1),
            KernelKind::HPmodStar(j) => write!(f, "hPmodStar({})", j + 1),
        }
    }
}

impl FromStr for KernelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, args) = match s.find('(') {
            Some(p) if s.ends_with(')') => (&s[..p], &s[p + 1..s.len() - 1]),
            _ => (s, ""),
        };
        let nums: Vec<usize> = if args.is_empty() {
            Vec::new()
        } else {
            args.split(',')
                .map(|a| match a.trim().parse::<usize>() {
                    Ok(n) if n >= 1 => Ok(n - 1),
                    _ => Err(Error::Usage(format!("bad coordinate '{a}' in kernel kind '{s}'"))),
                })
                .collect::<Result<_>>()?
        };
        let kind = match (name, nums.as_slice()) {
            ("dT", []) => KernelKind::DT,
            ("dP", []) => KernelKind::DP,
            ("hT", [i]) => KernelKind::HT(*i),
            ("hP", [i]) => KernelKind::HP(*i),
            ("dTmod", [j]) => KernelKind::DTmod(*j),
            ("dPmod", [j]) => KernelKind::DPmod(*j),
            ("hTmod", [j, i]) => KernelKind::HTmod { j: *j, i: *i },
            ("hPmod", [j, i]) => KernelKind::HPmod { j: *j, i: *i },
            ("hTmodStar", [j]) => KernelKind::HTmodStar(*j),
            ("hPmodStar", [j]) => KernelKind::HPmodStar(*j),
            _ => return Err(Error::Usage(format!("unknown kernel kind '{s}'"))),
        };
        Ok(kind)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DerivativeMode {
    /// Derivatives from the closed Bessel form.
    #[default]
    Analytic,
    /// Central differences of kernel values; a cross-check only.
    FiniteDifference,
}

fn values(
    alpha: &[f64],
    kind: KernelKind,
    q: Quantity,
    x: &[f64],
    y: &[f64],
    ts: &[f64],
    sub: SubordinationGrid,
) -> Result<Vec<f64>> {
    if kind.is_poisson() {
        return poisson_values(alpha, kind.modified(), q, x, y, ts, sub);
    }
    ts.iter()
        .map(|&t| {
            let jet = kernel_jet(alpha, kind.modified(), t, x, y)?;
            Ok(jet.ln_g.exp() * q.factor(&jet))
        })
        .collect()
}

fn check_entry(alpha: &AlphaParam, kind: KernelKind, x: &Point, y: &Point) -> Result<()> {
    alpha.require_cz()?;
    alpha.check_dim(x.dim())?;
    alpha.check_dim(y.dim())?;
    kind.validate(alpha.dim())?;
    if x == y {
        return Err(Error::SingularInput);
    }
    Ok(())
}

/// `{K_t(x, y)}` for one of the ten kernels on the grid `spec`, whose depth
/// toward `t = 0` adapts to `|x - y|` unless fixed in the spec.
pub fn kernel_entry(
    alpha: &AlphaParam,
    kind: KernelKind,
    x: &Point,
    y: &Point,
    spec: &ZetaGridSpec,
) -> Result<TimeProfile> {
    check_entry(alpha, kind, x, y)?;
    let grid = spec.build(Some(x.dist(y)))?;
    kernel_entry_on(alpha, kind, x, y, &grid, DerivativeMode::Analytic)
}

/// As [`kernel_entry`] on an explicit grid, so that several entries can share nodes.
pub fn kernel_entry_on(
    alpha: &AlphaParam,
    kind: KernelKind,
    x: &Point,
    y: &Point,
    grid: &TimeGrid,
    mode: DerivativeMode,
) -> Result<TimeProfile> {
    check_entry(alpha, kind, x, y)?;
    let a = alpha.components();
    let sub = SubordinationGrid::default();
    let (xc, yc) = (x.coords(), y.coords());
    let vals = match mode {
        DerivativeMode::Analytic => values(a, kind, kind.quantity(), xc, yc, &grid.t, sub)?,
        DerivativeMode::FiniteDifference => {
            let plain = |xs: &[f64], ts: &[f64]| values(a, kind, Quantity::Value, xs, yc, ts, sub);
            match kind.quantity() {
                Quantity::Time => {
                    let h = 1e-5;
                    let tp: Vec<f64> = grid.t.iter().map(|t| t * (1.0 + h)).collect();
                    let tm: Vec<f64> = grid.t.iter().map(|t| t * (1.0 - h)).collect();
                    let (fp, fm) = (plain(xc, &tp)?, plain(xc, &tm)?);
                    (0..grid.len()).map(|m| (fp[m] - fm[m]) / (2.0 * h * grid.t[m])).collect()
                }
                Quantity::Delta(i) | Quantity::DeltaStar(i) => {
                    let h = 1e-5 * xc[i];
                    let (mut xp, mut xm) = (xc.to_vec(), xc.to_vec());
                    xp[i] += h;
                    xm[i] -= h;
                    let (fp, fm, f0) = (plain(&xp, &grid.t)?, plain(&xm, &grid.t)?, plain(xc, &grid.t)?);
                    let star = matches!(kind.quantity(), Quantity::DeltaStar(_));
                    (0..grid.len())
                        .map(|m| {
                            let d = (fp[m] - fm[m]) / (2.0 * h);
                            if star {
                                -d + (xc[i] - (2.0 * a[i] + 1.0) / xc[i]) * f0[m]
                            } else {
                                d + xc[i] * f0[m]
                            }
                        })
                        .collect()
                }
                Quantity::Value => unreachable!("kernel kinds are derivatives"),
            }
        }
    };
    Ok(grid.profile(kind.measure(), vals))
}
