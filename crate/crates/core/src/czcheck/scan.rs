//! Growth and smoothness scans of the vector-valued kernels.
//!
//! Growth: `||K(x, y)||_B mu_alpha(B(x, |x - y|))`.
//! Smoothness in `x`: `||K(x, y) - K(x', y)||_B mu_alpha(B(x, |x - y|)) |x - y| / |x - x'|`,
//! and likewise in `y`. Both entries of a difference share one zeta grid.

use super::sampler::{Arg, Perturbed, SamplerSpec};
use crate::error::{Error, Result};
use crate::kernels::{bnorm, kernel_entry_on, DerivativeMode, KernelKind, ZetaGridSpec};
use crate::measure::{mu_ball, AlphaParam, Point};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimate {
    Growth,
    SmoothX,
    SmoothY,
}

impl Estimate {
    pub const ALL: [Estimate; 3] = [Estimate::Growth, Estimate::SmoothX, Estimate::SmoothY];

    pub fn arg(self) -> Option<Arg> {
        match self {
            Estimate::Growth => None,
            Estimate::SmoothX => Some(Arg::X),
            Estimate::SmoothY => Some(Arg::Y),
        }
    }
}

impl fmt::Display for Estimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Estimate::Growth => "growth",
            Estimate::SmoothX => "smooth_x",
            Estimate::SmoothY => "smooth_y",
        })
    }
}

/// One sampled configuration of a scan.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub index: usize,
    pub kind: KernelKind,
    pub estimate: Estimate,
    pub x: Point,
    pub y: Point,
    /// `x'` or `y'` for smoothness records.
    pub moved: Option<Point>,
    /// `||K(x, y)||_B`, or the norm of the difference for smoothness records.
    pub kernel_norm: f64,
    pub ball_measure: f64,
    pub ratio: f64,
    pub constraint_ok: bool,
}

fn growth_one(
    alpha: &AlphaParam,
    kind: KernelKind,
    index: usize,
    x: &Point,
    y: &Point,
    spec: &ZetaGridSpec,
) -> Result<EstimateReport> {
    let dist = x.dist(y);
    let grid = spec.build(Some(dist))?;
    let kernel_norm = bnorm(&kernel_entry_on(alpha, kind, x, y, &grid, DerivativeMode::Analytic)?);
    let ball_measure = mu_ball(alpha, x, dist)?;
    Ok(EstimateReport {
        index,
        kind,
        estimate: Estimate::Growth,
        x: x.clone(),
        y: y.clone(),
        moved: None,
        kernel_norm,
        ball_measure,
        ratio: kernel_norm * ball_measure,
        constraint_ok: true,
    })
}

fn smooth_one(
    alpha: &AlphaParam,
    kind: KernelKind,
    which: Arg,
    index: usize,
    p: &Perturbed,
    spec: &ZetaGridSpec,
) -> Result<EstimateReport> {
    if !p.constraint_ok(which) {
        return Err(Error::Sampler(format!(
            "sample {index}: the moved point must stay within half of |x - y| = {}",
            p.x.dist(&p.y)
        )));
    }
    let dist = p.x.dist(&p.y);
    let (x2, y2, step) = match which {
        Arg::X => (&p.moved, &p.y, p.x.dist(&p.moved)),
        Arg::Y => (&p.x, &p.moved, p.y.dist(&p.moved)),
    };
    let estimate = match which {
        Arg::X => Estimate::SmoothX,
        Arg::Y => Estimate::SmoothY,
    };
    let ball_measure = mu_ball(alpha, &p.x, dist)?;
    let kernel_norm = if step == 0.0 {
        0.0
    } else {
        let grid = spec.build(Some(dist.min(x2.dist(y2))))?;
        let a = kernel_entry_on(alpha, kind, &p.x, &p.y, &grid, DerivativeMode::Analytic)?;
        let b = kernel_entry_on(alpha, kind, x2, y2, &grid, DerivativeMode::Analytic)?;
        bnorm(&a.minus(&b)?)
    };
    let ratio = if step == 0.0 { 0.0 } else { kernel_norm * ball_measure * dist / step };
    Ok(EstimateReport {
        index,
        kind,
        estimate,
        x: p.x.clone(),
        y: p.y.clone(),
        moved: Some(p.moved.clone()),
        kernel_norm,
        ball_measure,
        ratio,
        constraint_ok: true,
    })
}

fn prepare(alpha: &AlphaParam, kind: KernelKind) -> Result<()> {
    alpha.require_cz()?;
    kind.validate(alpha.dim())
}

/// Growth records for explicit pairs, computed in parallel and returned in input order.
pub fn growth_reports(
    alpha: &AlphaParam,
    kind: KernelKind,
    pairs: &[(Point, Point)],
    spec: &ZetaGridSpec,
) -> Result<Vec<EstimateReport>> {
    prepare(alpha, kind)?;
    pairs.par_iter().enumerate().map(|(n, (x, y))| growth_one(alpha, kind, n, x, y, spec)).collect()
}

/// Smoothness records for explicit perturbed pairs; a pair violating
/// `|x - y| > 2 |x - x'|` is a sampler error.
pub fn smoothness_reports(
    alpha: &AlphaParam,
    kind: KernelKind,
    which: Arg,
    samples: &[Perturbed],
    spec: &ZetaGridSpec,
) -> Result<Vec<EstimateReport>> {
    prepare(alpha, kind)?;
    samples.par_iter().enumerate().map(|(n, p)| smooth_one(alpha, kind, which, n, p, spec)).collect()
}

pub fn scan_growth(
    alpha: &AlphaParam,
    kind: KernelKind,
    sampler: &SamplerSpec,
    spec: &ZetaGridSpec,
) -> Result<Vec<EstimateReport>> {
    growth_reports(alpha, kind, &sampler.pairs(alpha.dim())?, spec)
}

pub fn scan_smoothness(
    alpha: &AlphaParam,
    kind: KernelKind,
    which: Arg,
    sampler: &SamplerSpec,
    spec: &ZetaGridSpec,
) -> Result<Vec<EstimateReport>> {
    smoothness_reports(alpha, kind, which, &sampler.perturbed(alpha.dim(), which)?, spec)
}

/// Any of the three scans.
pub fn scan(
    alpha: &AlphaParam,
    kind: KernelKind,
    estimate: Estimate,
    sampler: &SamplerSpec,
    spec: &ZetaGridSpec,
) -> Result<Vec<EstimateReport>> {
    match estimate.arg() {
        None => scan_growth(alpha, kind, sampler, spec),
        Some(which) => scan_smoothness(alpha, kind, which, sampler, spec),
    }
}

/// Growth along `y = x + eps e_1`.
pub fn growth_probe(
    alpha: &AlphaParam,
    kind: KernelKind,
    x: &Point,
    eps: &[f64],
    spec: &ZetaGridSpec,
) -> Result<Vec<EstimateReport>> {
    let pairs = eps.iter().map(|&e| Ok((x.clone(), shift_first(x, e)?))).collect::<Result<Vec<_>>>()?;
    growth_reports(alpha, kind, &pairs, spec)
}

/// Smoothness with the moved argument displaced by `h e_1`, for each `h` in `steps`.
pub fn smoothness_probe(
    alpha: &AlphaParam,
    kind: KernelKind,
    which: Arg,
    x: &Point,
    y: &Point,
    steps: &[f64],
    spec: &ZetaGridSpec,
) -> Result<Vec<EstimateReport>> {
    let base = match which {
        Arg::X => x,
        Arg::Y => y,
    };
    let samples = steps
        .iter()
        .map(|&h| Ok(Perturbed { x: x.clone(), y: y.clone(), moved: shift_first(base, h)? }))
        .collect::<Result<Vec<_>>>()?;
    smoothness_reports(alpha, kind, which, &samples, spec)
}

fn shift_first(p: &Point, h: f64) -> Result<Point> {
    let mut c = p.coords().to_vec();
    c[0] += h;
    Point::new(c)
}

/// Distribution summary of a scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanSummary {
    pub count: usize,
    pub max: f64,
    pub median: f64,
    pub all_finite: bool,
    /// Index of the record attaining `max`.
    pub argmax: usize,
}

pub fn summarize(reports: &[EstimateReport]) -> ScanSummary {
    let mut r: Vec<f64> = reports.iter().map(|e| e.ratio).collect();
    let all_finite = r.iter().all(|v| v.is_finite() && *v >= 0.0);
    let argmax = reports
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.ratio.total_cmp(&b.1.ratio))
        .map_or(0, |(n, _)| n);
    r.sort_by(f64::total_cmp);
    let median = match r.len() {
        0 => f64::NAN,
        n if n % 2 == 1 => r[n / 2],
        n => 0.5 * (r[n / 2 - 1] + r[n / 2]),
    };
    ScanSummary { count: r.len(), max: r.last().copied().unwrap_or(f64::NAN), median, all_finite, argmax }
}

/// The maximum ratio of one scan on a grid and on the grid with doubled order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinementReport {
    pub kind: KernelKind,
    pub estimate: Estimate,
    pub coarse: ScanSummary,
    pub fine: ScanSummary,
    pub relative_change: f64,
}

impl RefinementReport {
    pub fn stable(&self, tol: f64) -> bool {
        self.coarse.all_finite && self.fine.all_finite && self.relative_change < tol
    }
}

pub fn scan_refinement(
    alpha: &AlphaParam,
    kind: KernelKind,
    estimate: Estimate,
    sampler: &SamplerSpec,
    spec: &ZetaGridSpec,
) -> Result<RefinementReport> {
    let coarse = summarize(&scan(alpha, kind, estimate, sampler, spec)?);
    let fine = summarize(&scan(alpha, kind, estimate, sampler, &spec.refined())?);
    Ok(RefinementReport {
        kind,
        estimate,
        coarse,
        fine,
        relative_change: (fine.max - coarse.max).abs() / fine.max,
    })
}
