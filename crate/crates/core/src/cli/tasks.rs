use super::config::{ConfigError, RunConfig, Task};
use super::report::{Cell, Report};
use crate::basis::{BasisFamily, Expansion, MultiIndex, MuRule};
use crate::czcheck::{
    identity_suite, lemma_suite, riesz_identity_check, scan, summarize, Estimate, EstimateReport, LemmaOutcome,
    LemmaSettings,
};
use crate::gfunctions::{gfun_exact, gfun_quadrature, GFunctionKind};
use crate::kernels::{heat_kernel_closed, heat_kernel_schlafli, heat_kernel_spectral, ZetaGridSpec};
use crate::measure::{AlphaParam, Point};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Tolerances of the task assertions.
pub const GRAM_TOL: f64 = 1e-9;
pub const KERNEL_TOL: f64 = 1e-7;
pub const GFUN_TOL: f64 = 1e-7;
pub const IDENTITY_TOL: f64 = 1e-6;
pub const RIESZ_TOL: f64 = 1e-9;
pub const REFINEMENT_TOL: f64 = 0.05;

/// Times at which the kernel task compares the three heat-kernel forms.
pub const KERNEL_TIMES: [f64; 3] = [0.5, 1.0, 2.0];
/// Times and points per coordinate of the Riesz identity check.
pub const RIESZ_TIMES: [f64; 4] = [0.1, 0.5, 1.0, 2.0];
pub const RIESZ_POINTS: usize = 10;

/// The rows of one task and the verdict on them.
#[derive(Debug, Clone)]
pub struct TaskOutcome {
    pub report: Report,
    /// Name and value of the headline number: a maximum deviation, ratio or violation count.
    pub metric: (&'static str, f64),
    pub passed: bool,
    /// Row index of the worst record.
    pub worst: Option<usize>,
    /// Extra `key=value` pairs for the summary line.
    pub notes: Vec<String>,
}

/// Failures while running a validated configuration.
#[derive(Debug)]
pub enum TaskError {
    Config(ConfigError),
    Numerical(crate::Error),
}

impl From<ConfigError> for TaskError {
    fn from(e: ConfigError) -> Self {
        TaskError::Config(e)
    }
}

impl From<crate::Error> for TaskError {
    fn from(e: crate::Error) -> Self {
        TaskError::Numerical(e)
    }
}

type TaskResult = std::result::Result<TaskOutcome, TaskError>;

pub fn run_task(task: Task, c: &RunConfig) -> TaskResult {
    c.validate(task)?;
    match task {
        Task::Basis => basis(c),
        Task::Kernel => kernel(c),
        Task::Gfun => gfun(c),
        Task::Verify => verify(c),
        Task::Czscan => czscan(c),
        Task::Lemmas => lemmas(c),
    }
}

fn columns(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn coord_columns(prefix: &str, d: usize) -> Vec<String> {
    (1..=d).map(|i| format!("{prefix}{i}")).collect()
}

fn coords(p: &Point) -> impl Iterator<Item = Cell> + '_ {
    p.coords().iter().map(|&v| Cell::Float(v))
}

fn index_label(k: &MultiIndex) -> String {
    let parts: Vec<String> = k.entries().iter().map(usize::to_string).collect();
    format!("({})", parts.join(" "))
}

fn rel_dev(value: f64, reference: f64) -> f64 {
    if value == reference {
        0.0
    } else {
        (value - reference).abs() / reference.abs()
    }
}

/// Largest entry of `values` with its position; NaN counts as largest.
fn worst_of(values: impl Iterator<Item = f64>) -> (f64, Option<usize>) {
    let mut best: (f64, Option<usize>) = (0.0, None);
    for (n, v) in values.enumerate() {
        if best.1.is_none() || v.is_nan() || v > best.0 {
            best = (v, Some(n));
            if v.is_nan() {
                break;
            }
        }
    }
    best
}

/// Orthonormality of the plain and differentiated systems up to `spectral_cutoff`.
fn basis(c: &RunConfig) -> TaskResult {
    let alpha = c.alpha_param()?;
    let d = alpha.dim();
    let n = c.spectral_cutoff;
    let rule = MuRule::new(&alpha, n + 2)?;
    let mut report = Report::new(columns(&["family", "k", "k_prime", "gram", "expected", "deviation"]));
    let families = std::iter::once(BasisFamily::Plain).chain((0..d).map(BasisFamily::Differentiated));
    for family in families {
        let keep = |k: &MultiIndex| match family {
            BasisFamily::Differentiated(j) => k[j] > 0,
            BasisFamily::Plain => true,
        };
        let all = Expansion::from_terms(
            alpha.clone(),
            family,
            MultiIndex::all_up_to(d, n).into_iter().filter(keep).map(|k| (k, 1.0)),
        )?;
        let m = all.coeffs().len();
        let mut gram = vec![0.0; m * m];
        for (p, w) in rule.points.iter().zip(&rule.weights) {
            let v = all.basis_values(p);
            for a in 0..m {
                let wa = w * v[a];
                for b in a..m {
                    gram[a * m + b] += wa * v[b];
                }
            }
        }
        let label = match family {
            BasisFamily::Plain => "plain".to_string(),
            BasisFamily::Differentiated(j) => format!("differentiated({})", j + 1),
        };
        let keys: Vec<&MultiIndex> = all.coeffs().keys().collect();
        for a in 0..m {
            for b in a..m {
                let expected = if a == b { 1.0 } else { 0.0 };
                let g = gram[a * m + b];
                report.push(vec![
                    label.clone().into(),
                    index_label(keys[a]).into(),
                    index_label(keys[b]).into(),
                    g.into(),
                    expected.into(),
                    (g - expected).abs().into(),
                ]);
            }
        }
    }
    finish_by_deviation(report, "deviation", GRAM_TOL, Vec::new())
}

/// Closed form against the Schläfli integral (or the spectral series when
/// some `alpha_i < -1/2`) at sampled pairs and [`KERNEL_TIMES`].
fn kernel(c: &RunConfig) -> TaskResult {
    let alpha = c.alpha_param()?;
    let d = alpha.dim();
    let pairs = c.sampler()?.pairs(d)?;
    let eligible = alpha.cz_eligible();
    let mut cols = columns(&["index", "t"]);
    cols.extend(coord_columns("x", d));
    cols.extend(coord_columns("y", d));
    cols.extend(columns(&["closed", "schlafli", "spectral", "reference", "deviation"]));
    let mut report = Report::new(cols);
    for (n, (x, y)) in pairs.iter().enumerate() {
        for t in KERNEL_TIMES {
            let closed = heat_kernel_closed(&alpha, t, x, y)?;
            let schlafli = if eligible { Some(heat_kernel_schlafli(&alpha, t, x, y, 2 * c.quadrature_order + 4)?) } else { None };
            let spectral = heat_kernel_spectral(&alpha, t, x, y, c.spectral_cutoff)?;
            let (reference, value) = match schlafli {
                Some(s) => ("schlafli", s),
                None => ("spectral", spectral),
            };
            let mut row = vec![n.into(), t.into()];
            row.extend(coords(x));
            row.extend(coords(y));
            row.extend([closed.into(), schlafli.into(), spectral.into(), reference.into(), rel_dev(value, closed).into()]);
            report.push(row);
        }
    }
    finish_by_deviation(report, "deviation", KERNEL_TOL, Vec::new())
}

fn gfunction_kinds(c: &RunConfig, d: usize) -> Result<Vec<GFunctionKind>, ConfigError> {
    if c.gfunction == "all" {
        return Ok(GFunctionKind::representatives(d));
    }
    let k: GFunctionKind = c.gfunction.parse().map_err(|e: crate::Error| ConfigError::new("gfunction", e.to_string()))?;
    k.validate(d).map_err(|e| ConfigError::new("gfunction", e.to_string()))?;
    Ok(vec![k])
}

/// Closed-form square functions against their zeta-grid quadrature on one
/// random expansion per family, at the sampled `x` points.
fn gfun(c: &RunConfig) -> TaskResult {
    let alpha = c.alpha_param()?;
    let d = alpha.dim();
    let kinds = gfunction_kinds(c, d)?;
    let sampler = c.sampler()?;
    let points: Vec<Point> = sampler.pairs(d)?.into_iter().map(|(x, _)| x).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(sampler.seed);
    let spec = ZetaGridSpec::with_order(c.zeta_order);
    let mut cols = columns(&["index", "gfunction"]);
    cols.extend(coord_columns("x", d));
    cols.extend(columns(&["exact", "quadrature", "deviation"]));
    let mut report = Report::new(cols);
    for kind in kinds {
        let e = Expansion::random(&mut rng, &alpha, kind.family(), c.modes, c.spectral_cutoff.max(1))?;
        for (n, x) in points.iter().enumerate() {
            let exact = gfun_exact(kind, &e, x)?;
            let quad = gfun_quadrature(kind, &e, x, &spec)?;
            let mut row = vec![n.into(), kind.to_string().into()];
            row.extend(coords(x));
            row.extend([exact.into(), quad.into(), rel_dev(quad, exact).into()]);
            report.push(row);
        }
    }
    finish_by_deviation(report, "deviation", GFUN_TOL, Vec::new())
}

const VERIFY_COLUMNS: [&str; 7] = ["check", "index", "value", "reference", "deviation", "tolerance", "passed"];

fn verify_row(check: String, index: usize, value: f64, reference: Option<f64>, deviation: f64, tol: Option<f64>, passed: bool) -> Vec<Cell> {
    vec![check.into(), index.into(), value.into(), reference.into(), deviation.into(), tol.into(), passed.into()]
}

/// Isometries, horizontal sums and the Riesz identity on random expansions,
/// plus any configured subtasks.
fn verify(c: &RunConfig) -> TaskResult {
    let alpha = c.alpha_param()?;
    let d = alpha.dim();
    let sampler = c.sampler()?;
    let mut report = Report::new(columns(&VERIFY_COLUMNS));
    for r in identity_suite(&alpha, c.count, c.modes, c.spectral_cutoff, sampler.seed)? {
        let ok = r.bound_ok && r.rel_deviation <= IDENTITY_TOL;
        report.push(verify_row(r.identity, r.index, r.value, Some(r.expected), r.rel_deviation, Some(IDENTITY_TOL), ok));
    }
    let points: Vec<Point> = sampler.pairs(d)?.into_iter().take(RIESZ_POINTS).map(|(x, _)| x).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(sampler.seed.wrapping_add(1));
    let e = Expansion::random(&mut rng, &alpha, BasisFamily::Plain, c.modes, c.spectral_cutoff)?;
    for j in 0..d {
        let dev = riesz_identity_check(&e, j, &RIESZ_TIMES, &points)?;
        report.push(verify_row(format!("riesz({})", j + 1), 0, dev, Some(0.0), dev, Some(RIESZ_TOL), dev <= RIESZ_TOL));
    }
    let mut notes = Vec::new();
    for sub in &c.subtasks {
        match sub {
            Task::Czscan => {
                for (n, r) in refinements(c, &alpha)?.into_iter().enumerate() {
                    report.push(verify_row(
                        format!("czscan:{}:{}", r.kind, r.estimate),
                        n,
                        r.coarse,
                        Some(r.fine),
                        r.change,
                        Some(REFINEMENT_TOL),
                        r.stable(),
                    ));
                }
            }
            Task::Lemmas => {
                for (n, o) in lemma_suite(&alpha, &lemma_settings(c)?)?.into_iter().enumerate() {
                    let value = o.constant.unwrap_or(o.worst_margin);
                    let deviation = if o.constant.is_some() { o.worst_margin } else { o.violations as f64 };
                    report.push(verify_row(format!("lemma:{}", o.name), n, value, o.refined_constant, deviation, None, o.passed));
                }
            }
            _ => unreachable!("validated"),
        }
        notes.push(format!("subtask={sub}"));
    }
    let passed_col = report.column("passed").expect("column");
    let failing = report.rows.iter().position(|r| r[passed_col] == Cell::Bool(false));
    let dev_col = report.column("deviation").expect("column");
    let (max_dev, worst) = worst_of(
        report.rows.iter().filter(|r| !matches!(&r[0], Cell::Text(s) if s.starts_with("lemma:") || s.starts_with("czscan:"))).map(|r| match r[dev_col] {
            Cell::Float(v) => v,
            _ => 0.0,
        }),
    );
    Ok(TaskOutcome {
        passed: failing.is_none(),
        worst: failing.or(worst),
        metric: ("max_deviation", max_dev),
        report,
        notes,
    })
}

struct Refinement {
    kind: crate::kernels::KernelKind,
    estimate: Estimate,
    coarse: f64,
    fine: f64,
    change: f64,
    finite: bool,
}

impl Refinement {
    fn stable(&self) -> bool {
        self.finite && self.change < REFINEMENT_TOL
    }
}

fn refinements(c: &RunConfig, alpha: &AlphaParam) -> Result<Vec<Refinement>, TaskError> {
    let sampler = c.sampler()?;
    let spec = ZetaGridSpec::with_order(c.zeta_order);
    let mut out = Vec::new();
    for kind in c.kinds()? {
        for estimate in c.estimates()? {
            let coarse = summarize(&scan(alpha, kind, estimate, &sampler, &spec)?);
            let fine = summarize(&scan(alpha, kind, estimate, &sampler, &spec.refined())?);
            out.push(Refinement {
                kind,
                estimate,
                coarse: coarse.max,
                fine: fine.max,
                change: rel_dev(coarse.max, fine.max),
                finite: coarse.all_finite && fine.all_finite,
            });
        }
    }
    Ok(out)
}

/// Growth and smoothness ratios; one block of `count` rows per kernel kind and estimate.
fn czscan(c: &RunConfig) -> TaskResult {
    let alpha = c.alpha_param()?;
    let d = alpha.dim();
    let sampler = c.sampler()?;
    let spec = ZetaGridSpec::with_order(c.zeta_order);
    let mut cols = columns(&["kind", "estimate", "index"]);
    cols.extend(coord_columns("x", d));
    cols.extend(coord_columns("y", d));
    cols.extend(coord_columns("moved", d));
    cols.extend(columns(&["kernel_norm", "ball_measure", "ratio", "constraint_ok"]));
    let mut report = Report::new(cols);
    let mut records: Vec<EstimateReport> = Vec::new();
    for kind in c.kinds()? {
        for estimate in c.estimates()? {
            records.extend(scan(&alpha, kind, estimate, &sampler, &spec)?);
        }
    }
    for r in &records {
        let mut row = vec![r.kind.to_string().into(), r.estimate.to_string().into(), r.index.into()];
        row.extend(coords(&r.x));
        row.extend(coords(&r.y));
        match &r.moved {
            Some(m) => row.extend(coords(m)),
            None => row.extend((0..d).map(|_| Cell::Empty)),
        }
        row.extend([r.kernel_norm.into(), r.ball_measure.into(), r.ratio.into(), r.constraint_ok.into()]);
        report.push(row);
    }
    let bad = records.iter().position(|r| !(r.ratio.is_finite() && r.ratio >= 0.0 && r.constraint_ok));
    let (max_ratio, argmax) = worst_of(records.iter().map(|r| r.ratio));
    let mut passed = bad.is_none();
    let mut notes = Vec::new();
    if c.refinement_check && passed {
        let refs = refinements(c, &alpha)?;
        let worst = refs.iter().max_by(|a, b| a.change.total_cmp(&b.change));
        if let Some(w) = worst {
            notes.push(format!("max_refinement_change={:.3e}", w.change));
            if !refs.iter().all(Refinement::stable) {
                passed = false;
                notes.push(format!(
                    "unstable={}:{} coarse_max={:.16e} fine_max={:.16e}",
                    w.kind, w.estimate, w.coarse, w.fine
                ));
            }
        }
    }
    Ok(TaskOutcome { report, metric: ("max_ratio", max_ratio), passed, worst: bad.or(argmax), notes })
}

fn lemma_settings(c: &RunConfig) -> Result<LemmaSettings, ConfigError> {
    let sampler = c.sampler()?;
    Ok(LemmaSettings {
        samples: c.count,
        seed: sampler.seed,
        lo: sampler.lo,
        hi: sampler.hi,
        order: c.quadrature_order,
        pairs: c.lemma_pairs,
    })
}

fn lemmas(c: &RunConfig) -> TaskResult {
    let alpha = c.alpha_param()?;
    let outcomes: Vec<LemmaOutcome> = lemma_suite(&alpha, &lemma_settings(c)?)?;
    let mut report = Report::new(columns(&[
        "name",
        "samples",
        "violations",
        "worst_margin",
        "constant",
        "refined_constant",
        "oracle_deviation",
        "passed",
    ]));
    for o in &outcomes {
        report.push(vec![
            o.name.clone().into(),
            o.samples.into(),
            o.violations.into(),
            o.worst_margin.into(),
            o.constant.into(),
            o.refined_constant.into(),
            o.oracle_deviation.into(),
            o.passed.into(),
        ]);
    }
    let violations: usize = outcomes.iter().map(|o| o.violations).sum();
    let failing = outcomes.iter().position(|o| !o.passed);
    Ok(TaskOutcome {
        report,
        metric: ("violations", violations as f64),
        passed: failing.is_none(),
        worst: failing,
        notes: Vec::new(),
    })
}

fn finish_by_deviation(report: Report, column: &str, tol: f64, notes: Vec<String>) -> TaskResult {
    let col = report.column(column).expect("deviation column");
    let (max_dev, worst) = worst_of(report.rows.iter().map(|r| match r[col] {
        Cell::Float(v) => v,
        _ => 0.0,
    }));
    Ok(TaskOutcome { passed: max_dev <= tol, metric: ("max_deviation", max_dev), worst, report, notes })
}
