//! The `lps` command line: one task per invocation, configured by a flat TOML
//! file, writing one report file and a one-line summary.
//!
//! Exit status 0 means every assertion of the task held, 1 a numerical
//! failure (the worst record is echoed), 2 an invalid configuration.

mod config;
mod report;
mod tasks;

pub use config::{ConfigError, Format, RunConfig, Task, Threads};
pub use report::{float_text, Cell, Report};
pub use tasks::{
    run_task, TaskError, TaskOutcome, GFUN_TOL, GRAM_TOL, IDENTITY_TOL, KERNEL_TIMES, KERNEL_TOL, REFINEMENT_TOL,
    RIESZ_POINTS, RIESZ_TIMES, RIESZ_TOL,
};

use clap::Parser;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Environment variable overriding `threads` from the config file.
pub const THREADS_ENV: &str = "LPS_THREADS";

#[derive(Debug, Parser)]
#[command(name = "lps", version, about = "Laguerre g-function and kernel-estimate checks")]
pub struct Args {
    /// basis | kernel | gfun | verify | czscan | lemmas
    pub task: String,
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv | jsonl
    #[arg(long)]
    pub format: Option<String>,
    /// Worker threads, or `auto`.
    #[arg(long)]
    pub threads: Option<String>,
    /// Omit the generation time from the report header.
    #[arg(long)]
    pub no_timestamp: bool,
}

/// Command-line and environment overrides, highest precedence first:
/// `--threads`, then `LPS_THREADS`, then the file.
pub fn apply_overrides(c: &mut RunConfig, args: &Args, env_threads: Option<String>) -> Result<Task, ConfigError> {
    let task: Task = args.task.parse()?;
    if let Some(t) = c.task {
        if t != task {
            return Err(ConfigError::new("task", format!("config says {t}, command line says {task}")));
        }
    }
    c.task = Some(task);
    if let Some(s) = args.seed {
        c.seed = Some(s);
    }
    if let Some(o) = &args.out {
        c.out = Some(o.clone());
    }
    if let Some(f) = &args.format {
        c.format = f.parse()?;
    }
    if let Some(t) = args.threads.clone().or(env_threads) {
        c.threads = Threads::Named(t);
    }
    c.threads.resolve()?;
    Ok(task)
}

/// Result of [`run`]: the verdict plus what was printed.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub outcome: TaskOutcome,
    pub out: PathBuf,
    pub summary: String,
}

#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    Numerical(crate::Error),
    Io(std::io::Error),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "invalid config: {e}"),
            RunError::Numerical(e) => write!(f, "numerical failure: {e}"),
            RunError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => EXIT_CONFIG,
            RunError::Numerical(_) | RunError::Io(_) => EXIT_FAILED,
        }
    }
}

impl From<TaskError> for RunError {
    fn from(e: TaskError) -> Self {
        match e {
            TaskError::Config(c) => RunError::Config(c),
            // domain and usage errors raised by the library come from inputs
            TaskError::Numerical(crate::Error::Domain(m) | crate::Error::Usage(m)) => {
                RunError::Config(ConfigError::new("", m))
            }
            TaskError::Numerical(n) => RunError::Numerical(n),
        }
    }
}

/// Default report path: `lps-<task>.<ext>` in the working directory.
pub fn default_out(task: Task, format: Format) -> PathBuf {
    PathBuf::from(format!("lps-{task}.{}", format.extension()))
}

/// Runs `task` on its own thread pool and writes the report file.
pub fn run(task: Task, c: &RunConfig, timestamp: bool) -> Result<RunOutcome, RunError> {
    let threads = c.threads.resolve().map_err(RunError::Config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| RunError::Config(ConfigError::new("threads", e.to_string())))?;
    let start = Instant::now();
    let outcome = pool.install(|| run_task(task, c))?;
    let wall = start.elapsed().as_secs_f64();

    let out = c.out.clone().unwrap_or_else(|| default_out(task, c.format));
    let mut header = format!("lps {task} laguerre-lp {}", env!("CARGO_PKG_VERSION"));
    if timestamp {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        header.push_str(&format!(" generated_at={secs}"));
    }
    let file = File::create(&out).map_err(RunError::Io)?;
    let mut w = BufWriter::new(file);
    outcome.report.write(&mut w, c.format, Some(&header)).map_err(RunError::Io)?;
    w.flush().map_err(RunError::Io)?;

    let (name, value) = outcome.metric;
    let mut summary = format!(
        "task={task} rows={} {name}={} status={} wall={wall:.3}s out={}",
        outcome.report.rows.len(),
        if name == "violations" { format!("{value}") } else { float_text(value) },
        if outcome.passed { "pass" } else { "fail" },
        out.display()
    );
    for n in &outcome.notes {
        summary.push(' ');
        summary.push_str(n);
    }
    Ok(RunOutcome { outcome, out, summary })
}

/// `column=value` pairs of one report row.
pub fn describe_row(report: &Report, row: usize) -> String {
    let Some(r) = report.rows.get(row) else { return String::new() };
    let parts: Vec<String> = report
        .columns
        .iter()
        .zip(r)
        .map(|(c, v)| {
            let text = match v {
                Cell::Int(i) => i.to_string(),
                Cell::Float(f) => float_text(*f),
                Cell::Text(s) => s.clone(),
                Cell::Bool(b) => b.to_string(),
                Cell::Empty => String::new(),
            };
            format!("{c}={text}")
        })
        .collect();
    parts.join(" ")
}

/// Entry point of the `lps` binary; returns the exit status.
pub fn main_with_args<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let fail_config = |e: ConfigError| {
        eprintln!("lps: invalid config: {e}");
        EXIT_CONFIG
    };
    let mut config = match RunConfig::load(&args.config) {
        Ok(c) => c,
        Err(e) => return fail_config(e),
    };
    let task = match apply_overrides(&mut config, &args, std::env::var(THREADS_ENV).ok()) {
        Ok(t) => t,
        Err(e) => return fail_config(e),
    };
    match run(task, &config, !args.no_timestamp) {
        Ok(r) => {
            println!("{}", r.summary);
            if r.outcome.passed {
                EXIT_OK
            } else {
                if let Some(w) = r.outcome.worst {
                    eprintln!("lps: worst record: {}", describe_row(&r.outcome.report, w));
                }
                EXIT_FAILED
            }
        }
        Err(e) => {
            eprintln!("lps: {e}");
            e.exit_code()
        }
    }
}
