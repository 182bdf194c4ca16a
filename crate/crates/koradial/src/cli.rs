//! Argument parsing and dispatch.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::config::{Mode, Overrides, RunConfig};
use crate::pipeline::{self, Exit};

#[derive(Debug, Parser)]
#[command(name = "koradial", version, about = "Entire radial solutions of coupled semilinear systems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Command>,
    /// Run configuration (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory; overrides `output.dir`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Truncation radius
    #[arg(long, global = true)]
    pub r_max: Option<f64>,
    /// Blow-up threshold on u and v
    #[arg(long, global = true)]
    pub value_cap: Option<f64>,
    /// Sweep nodes per axis
    #[arg(long, global = true)]
    pub resolution: Option<usize>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Hypothesis checks on f, g, p, q.
    Check,
    /// Solve from the central values and classify.
    Solve,
    /// Classify a grid of central values.
    Sweep,
    /// Bisect for the boundary along a ray.
    Trace,
    /// Comparison, forcing, bound, closedness and largeness probes.
    Verify,
}

impl From<Command> for Mode {
    fn from(c: Command) -> Self {
        match c {
            Command::Check => Mode::Check,
            Command::Solve => Mode::Solve,
            Command::Sweep => Mode::Sweep,
            Command::Trace => Mode::Trace,
            Command::Verify => Mode::Verify,
        }
    }
}

fn fail(msg: impl std::fmt::Display) -> i32 {
    eprintln!("koradial: {msg}");
    Exit::Config.code()
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { Exit::Config.code() } else { Exit::Success.code() };
        }
    };
    let Some(path) = &cli.config else {
        return fail("--config is required");
    };
    let mut cfg = match RunConfig::load(path) {
        Ok(c) => c,
        Err(e) => return fail(e),
    };
    cfg.apply(&Overrides {
        out: cli.out.clone(),
        r_max: cli.r_max,
        value_cap: cli.value_cap,
        resolution: cli.resolution,
    });
    if let Err(e) = cfg.validate() {
        return fail(e);
    }
    let Some(mode) = cli.command.map(Mode::from).or(cfg.mode) else {
        return fail("no subcommand given and the config has no mode");
    };
    let dir = match cfg.prepare_output() {
        Ok(d) => d,
        Err(e) => return fail(e),
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => return fail(e),
    };
    let outcome = match pool.install(|| pipeline::run(&cfg, mode)) {
        Ok(o) => o,
        Err(e) => return fail(e),
    };
    if let Err(e) = pipeline::write_outcome(&dir, &outcome) {
        return fail(format!("writing {}: {e}", dir.display()));
    }
    outcome.exit.code()
}
