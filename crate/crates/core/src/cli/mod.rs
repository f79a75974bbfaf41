//! Command-line front end.
//!
//! Every command produces a [`Report`]: a [`RunRecord`] serialized as a JSON
//! tree (default) or a set of CSV tables (`--format csv`). Output depends only
//! on the arguments and `--seed`; wall time is added only with `--timing`.

mod commands;
pub mod record;
pub mod spec;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::mixing::mapfile::parse_complex;
use crate::splitting::SplitterParams;
use crate::{Error, Result, EPS_NORM};

pub use record::{Report, RunRecord, Table};
pub use spec::StateSpec;

pub const DEFAULT_SEED: u64 = 20_240_601;

/// Slack within which `|r|² + |t|²` is renormalized to 1.
pub const UNITARITY_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tree,
    Csv,
}

#[derive(Debug, Clone, Parser)]
#[command(name = "modesplit", version, about = "Mode splitting, mixing and entanglement extraction for identical particles")]
pub struct Cli {
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Numerical tolerance for pass/fail checks.
    #[arg(long, global = true, default_value_t = EPS_NORM)]
    pub tolerance: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Tree)]
    pub format: Format,
    /// Write to a file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Record wall time (makes output run-dependent).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

fn complex_arg(s: &str) -> std::result::Result<Complex64, String> {
    parse_complex(s)
        .filter(|z| z.re.is_finite() && z.im.is_finite())
        .ok_or_else(|| format!("expected 're,im' or a real, got '{s}'"))
}

fn counts_arg(s: &str) -> std::result::Result<Vec<usize>, String> {
    s.split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| format!("expected comma-separated counts, got '{s}'"))
}

fn pair_arg(s: &str) -> std::result::Result<(usize, usize), String> {
    match counts_arg(s)?.as_slice() {
        [a, b] => Ok((*a, *b)),
        _ => Err(format!("expected two counts 'a,b', got '{s}'")),
    }
}

fn spec_arg(s: &str) -> std::result::Result<StateSpec, String> {
    StateSpec::parse(s).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Args)]
pub struct SplitterArgs {
    /// Reflection amplitude, "re,im" or a real.
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true,
          default_value = "0.7071067811865476,0")]
    pub r: Complex64,
    /// Transmission amplitude.
    #[arg(long, value_parser = complex_arg, allow_hyphen_values = true,
          default_value = "0.7071067811865476,0")]
    pub t: Complex64,
}

impl SplitterArgs {
    pub fn params(&self) -> Result<SplitterParams> {
        SplitterParams::normalized(self.r, self.t, UNITARITY_SLACK)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MapKind {
    Beamsplitter,
    Identity,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Beamsplitter splitting into particle-number sectors.
    Split {
        #[arg(long, value_parser = spec_arg)]
        state: StateSpec,
        #[command(flatten)]
        splitter: SplitterArgs,
        /// Report only these sectors, e.g. `--sector 2,1`.
        #[arg(long = "sector", value_parser = pair_arg)]
        sectors: Vec<(usize, usize)>,
    },
    /// Mode and first-quantization Schmidt spectra at a bipartition.
    Schmidt {
        #[arg(long, value_parser = spec_arg)]
        state: StateSpec,
        /// Particles in the first group.
        #[arg(long)]
        nx: usize,
    },
    /// Repeat-until-success extraction ensemble.
    Extract {
        #[arg(long, value_parser = spec_arg)]
        state: StateSpec,
        /// Target split `N_X,N_Y`.
        #[arg(long, value_parser = pair_arg)]
        target: (usize, usize),
        #[command(flatten)]
        splitter: SplitterArgs,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        #[arg(long, default_value_t = crate::protocol::DEFAULT_MAX_ITERATIONS)]
        max_iters: usize,
    },
    /// Checks a mixing-map file for the mode-mixing property.
    VerifyMixing {
        map: PathBuf,
    },
    /// Monogamy and squeezing bounds, or a one-axis-twisting sweep.
    Bounds {
        #[arg(long, value_parser = spec_arg)]
        state: StateSpec,
        /// `N_C,N_D`; defaults to the balanced split.
        #[arg(long, value_parser = pair_arg)]
        split: Option<(usize, usize)>,
    },
    /// Spin-squeezing parameter.
    Squeeze {
        #[arg(long, value_parser = spec_arg)]
        state: StateSpec,
    },
    /// Splitting over several output modes.
    MultimodeSplit {
        #[arg(long, value_parser = spec_arg)]
        state: StateSpec,
        /// Column entry per output mode; repeat once per mode.
        #[arg(long = "alpha", value_parser = complex_arg, allow_hyphen_values = true)]
        alphas: Vec<Complex64>,
        /// Uniform column over this many modes (when no `--alpha` is given).
        #[arg(long, default_value_t = 3)]
        modes: usize,
        #[arg(long = "sector", value_parser = counts_arg)]
        sectors: Vec<Vec<usize>>,
    },
    /// Writes a mixing-map file.
    MapExport {
        #[arg(long, value_enum, default_value_t = MapKind::Beamsplitter)]
        kind: MapKind,
        #[arg(long)]
        particles: usize,
        #[command(flatten)]
        splitter: SplitterArgs,
    },
}

/// Final text for stdout or `--output`, plus warnings for stderr.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub text: String,
    pub warnings: Vec<String>,
}

pub fn execute(cli: &Cli) -> Result<Output> {
    if let Command::MapExport {
        kind,
        particles,
        splitter,
    } = &cli.command
    {
        return Ok(Output {
            text: commands::map_export(*kind, *particles, splitter)?,
            warnings: Vec::new(),
        });
    }
    let start = Instant::now();
    let mut report = commands::report(cli)?;
    if cli.timing {
        report.record.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    let text = match cli.format {
        Format::Tree => report.record.to_text(),
        Format::Csv => report.to_csv(),
    };
    Ok(Output {
        text,
        warnings: report.warnings,
    })
}

/// Runs a parsed command line and writes its output. Returns the exit code.
pub fn run(cli: &Cli) -> i32 {
    match execute(cli).and_then(|out| {
        match &cli.output {
            Some(path) => std::fs::write(path, &out.text)?,
            None => print!("{}", out.text),
        }
        Ok(out.warnings)
    }) {
        Ok(warnings) => {
            for w in warnings {
                eprintln!("warning: {w}");
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse { .. } => 2,
                _ => 1,
            }
        }
    }
}
