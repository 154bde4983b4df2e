//! `qjet`: batch checks of q-series identities with reproducible reports.
//!
//! Exit status: 0 when every check passed, 1 when a mismatch or violation
//! was found (the report is still printed), 2 for usage and budget errors.

mod commands;
mod report;
mod suite;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::Report;

#[derive(Parser, Debug, Clone)]
#[command(name = "qjet", version, about = "Check fermionic character identities, quiver sums and jet Hilbert series")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Global {
    /// Print the machine-readable JSON report.
    #[arg(long, global = true)]
    pub json: bool,
    /// Cap on enumerated index vectors, quiver representations and jet
    /// matrix rows or columns; exceeding it exits with status 2.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Include wall time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Compare two sides of an identity.
    #[command(subcommand)]
    Verify(Verify),
    /// Jet algebra Hilbert series.
    #[command(subcommand)]
    Jets(Jets),
    /// Symbolic quadratic forms.
    #[command(subcommand)]
    Forms(Forms),
    /// Run the commands listed in a TOML suite file.
    Suite {
        config: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    A,
    B,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Verify {
    /// sl_n lattice sum (form B for variant a, B' for variant b) against the Cartan side.
    Thm1 {
        #[arg(long, value_enum)]
        variant: Variant,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        order: i64,
        #[arg(long)]
        charges: bool,
    },
    /// phi(y) phi(x) = phi(x) phi(-yx) phi(y), plain and half-shifted.
    Pentagon {
        #[arg(long)]
        xdeg: u32,
        #[arg(long)]
        qorder: i64,
        /// Leave out the middle factor (a control that must fail).
        #[arg(long)]
        drop_middle: bool,
    },
    /// Ordered dilogarithm product for `aN` (sl_N) or `d4`.
    OrderedProduct {
        #[arg(long = "type")]
        kind: String,
        #[arg(long)]
        xdeg: u32,
        #[arg(long)]
        qorder: i64,
    },
    /// Orbit-codimension identity for every dimension vector up to `kmax`.
    Quiver {
        #[arg(long)]
        rank: usize,
        /// One letter per arrow, `R` or `L`.
        #[arg(long)]
        orientation: String,
        #[arg(long)]
        kmax: i64,
        #[arg(long)]
        order: i64,
    },
    /// The two B2 sums.
    B2 {
        #[arg(long)]
        order: i64,
        #[arg(long)]
        charges: bool,
    },
    /// B2 sum against its Euler product, and against the A2 x A1 character.
    B2Product {
        #[arg(long)]
        order: i64,
    },
    /// Twelve-variable D4 sum against the Cartan side, charges dropped.
    D4 {
        #[arg(long)]
        order: i64,
        #[arg(long)]
        primed: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Exact,
    Modular,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Jets {
    /// Hilbert series of a preset through a weight.
    Hilbert {
        #[arg(long)]
        preset: String,
        #[arg(long)]
        weight: usize,
        #[arg(long)]
        multigraded: bool,
        #[arg(long, value_enum, default_value = "exact")]
        engine: Engine,
    },
    /// Jet Hilbert series of the sl_n presentation against the B sum.
    ClassicallyFree {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        weight: usize,
        #[arg(long, value_enum, default_value = "exact")]
        engine: Engine,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    #[value(name = "B")]
    B,
    #[value(name = "Bprime")]
    Bprime,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Forms {
    /// Expand form minus the Cartan form in k and non-simple coordinates.
    ExpandDiff {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum)]
        kind: Kind,
    },
}

/// A command failure that is not a verdict.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Budget(String),
}

impl From<qjet_core::Error> for Failure {
    fn from(e: qjet_core::Error) -> Self {
        match e {
            qjet_core::Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

pub type Outcome = Result<Report, Failure>;

/// Runs one non-suite command and stamps the wall time when asked.
pub fn run_one(cli: &Cli) -> Outcome {
    let start = Instant::now();
    let report = match &cli.command {
        Command::Verify(v) => commands::verify(v, &cli.global),
        Command::Jets(j) => commands::jets(j, &cli.global),
        Command::Forms(f) => commands::forms(f),
        Command::Suite { .. } => Err(Failure::Usage("suites cannot be nested".into())),
    }?;
    let mut report = report.finish();
    if cli.global.timing {
        report.wall_time_ms = Some(start.elapsed().as_millis() as u64);
    }
    Ok(report)
}

pub fn render(report: &Report, json: bool) -> String {
    if json {
        report.to_json() + "\n"
    } else {
        report.to_human()
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.global.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let code = match &cli.command {
        Command::Suite { config } => suite::run(config, &cli.global),
        _ => match run_one(&cli) {
            Ok(report) => {
                print!("{}", render(&report, cli.global.json));
                u8::from(report.verdict.failed())
            }
            Err(f) => report_failure(&f),
        },
    };
    ExitCode::from(code)
}

pub fn report_failure(f: &Failure) -> u8 {
    match f {
        Failure::Usage(m) => eprintln!("error: {m}"),
        Failure::Budget(m) => eprintln!("error: {m}"),
    }
    2
}
