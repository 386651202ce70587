//! `bsbound`: slab evaluation, absorption minimization, ratio sweeps and the
//! spontaneous-decay absorption bound from the command line.
//!
//! Exit codes: 0 success, 1 numerical failure, 2 usage error, 3 infeasible
//! splitting ratio (the record is still written).

mod commands;
mod record;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bsbound_core::linewidth::{constants, DEFAULT_N_VT};
use bsbound_core::optimizer::MinimizeConfig;
use record::{format_float, write_records, Format, OutputRecord};

#[derive(Parser, Debug)]
#[command(name = "bsbound", version, about = "Lower bounds on beam-splitter absorption")]
struct Cli {
    /// Print the physical constants compiled into the tool and exit.
    #[arg(long)]
    constants: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Transmission, reflection and absorption of one slab.
    Eval(EvalArgs),
    /// Minimal absorption at a fixed splitting ratio.
    Minimize(MinimizeArgs),
    /// Minimize over a grid of splitting ratios.
    Sweep(SweepArgs),
    /// Minimal absorption with the line width at the spontaneous-decay bound.
    Bound(BoundArgs),
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// Static permittivity (> 1).
    #[arg(long = "eps-s", value_parser = above_one)]
    eps_s: f64,
    /// Scaled line width gamma / omega_T.
    #[arg(long, value_parser = non_negative)]
    gamma: f64,
    /// Scaled frequency omega / omega_T.
    #[arg(long, value_parser = positive)]
    omega: f64,
    /// Scaled thickness omega_T l / c.
    #[arg(long, value_parser = non_negative)]
    thickness: f64,
    /// Accept --gamma 0.
    #[arg(long)]
    allow_lossless: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct MinimizeArgs {
    /// Target splitting ratio |T|^2 / |R|^2.
    #[arg(long, value_parser = positive)]
    x: f64,
    #[arg(long, value_parser = positive, default_value_t = MinimizeConfig::DEFAULT_GAMMA_TILDE)]
    gamma: f64,
    #[arg(long, value_parser = positive, default_value_t = MinimizeConfig::DEFAULT_OMEGA_TILDE)]
    omega: f64,
    /// Upper end of the permittivity search.
    #[arg(long = "eps-s-max", value_parser = above_one, default_value_t = MinimizeConfig::DEFAULT_EPS_S_MAX)]
    eps_s_max: f64,
    /// Extra levels, each with gamma and omega ten times smaller; alpha is
    /// taken from the last one.
    #[arg(long = "refine-levels", default_value_t = 1)]
    refine_levels: u32,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long = "x-min", value_parser = positive)]
    x_min: f64,
    #[arg(long = "x-max", value_parser = positive)]
    x_max: f64,
    #[arg(long)]
    points: usize,
    /// Geometric instead of linear spacing.
    #[arg(long)]
    log: bool,
    /// Worker threads (default: all cores).
    #[arg(long, env = "BSB_JOBS")]
    jobs: Option<usize>,
    #[arg(long, value_parser = positive, default_value_t = MinimizeConfig::DEFAULT_GAMMA_TILDE)]
    gamma: f64,
    #[arg(long, value_parser = positive, default_value_t = MinimizeConfig::DEFAULT_OMEGA_TILDE)]
    omega: f64,
    #[arg(long = "eps-s-max", value_parser = above_one, default_value_t = MinimizeConfig::DEFAULT_EPS_S_MAX)]
    eps_s_max: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct BoundArgs {
    #[arg(long, value_parser = positive)]
    x: f64,
    /// Scaled frequency of the incident light.
    #[arg(long, value_parser = positive)]
    omega: f64,
    /// Atoms per cubic transition wavelength.
    #[arg(long, value_parser = positive, default_value_t = DEFAULT_N_VT)]
    nvt: f64,
    #[command(flatten)]
    output: OutputArgs,
}

fn parse_real(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

fn positive(s: &str) -> Result<f64, String> {
    let v = parse_real(s)?;
    if v > 0.0 { Ok(v) } else { Err(format!("must be > 0, got {s}")) }
}

fn non_negative(s: &str) -> Result<f64, String> {
    let v = parse_real(s)?;
    if v >= 0.0 { Ok(v) } else { Err(format!("must be >= 0, got {s}")) }
}

fn above_one(s: &str) -> Result<f64, String> {
    let v = parse_real(s)?;
    if v > 1.0 { Ok(v) } else { Err(format!("must be > 1, got {s}")) }
}

pub enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<bsbound_core::Error> for Failure {
    fn from(e: bsbound_core::Error) -> Self {
        use bsbound_core::Error as E;
        match e {
            E::InvalidParameter { .. } | E::BranchCut { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Numerical(format!("i/o: {e}"))
    }
}

/// What a command produced, plus whether the answer was "infeasible".
pub struct Outcome {
    pub records: Vec<OutputRecord>,
    pub infeasible: bool,
}

fn emit(outcome: &Outcome, output: &OutputArgs) -> Result<(), Failure> {
    match &output.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| Failure::Usage(format!("cannot create {}: {e}", path.display())))?;
            let mut w = BufWriter::new(file);
            write_records(&mut w, &outcome.records, output.format)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            write_records(&mut w, &outcome.records, output.format)?;
        }
    }
    Ok(())
}

fn print_constants() {
    println!("name,value,unit");
    println!("hbar,{},J s", format_float(constants::HBAR));
    println!("epsilon_0,{},F/m", format_float(constants::EPSILON_0));
    println!("c,{},m/s", format_float(constants::SPEED_OF_LIGHT));
    println!("debye,{},C m", format_float(constants::DEBYE));
}

fn run(cli: Cli) -> Result<bool, Failure> {
    let Some(command) = cli.command else {
        if cli.constants {
            print_constants();
            return Ok(false);
        }
        return Err(Failure::Usage("no subcommand given (try --help)".into()));
    };
    let (outcome, output) = match command {
        Command::Eval(a) => {
            if a.gamma == 0.0 && !a.allow_lossless {
                return Err(Failure::Usage("--gamma 0 needs --allow-lossless".into()));
            }
            (commands::eval(a.eps_s, a.gamma, a.omega, a.thickness)?, a.output)
        }
        Command::Minimize(a) => (
            commands::minimize(a.x, a.gamma, a.omega, a.eps_s_max, a.refine_levels)?,
            a.output,
        ),
        Command::Sweep(a) => {
            let jobs = a
                .jobs
                .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
            if jobs == 0 {
                return Err(Failure::Usage("--jobs must be at least 1".into()));
            }
            let grid = commands::SweepGrid { x_min: a.x_min, x_max: a.x_max, points: a.points, log: a.log };
            (commands::sweep(grid, a.gamma, a.omega, a.eps_s_max, jobs)?, a.output)
        }
        Command::Bound(a) => {
            if a.omega > 0.5 {
                eprintln!("warning: omega = {} is outside the low-frequency regime", a.omega);
            }
            (commands::bound(a.x, a.omega, a.nvt)?, a.output)
        }
    };
    emit(&outcome, &output)?;
    Ok(outcome.infeasible)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let msg = e.to_string();
            eprintln!("{}", msg.lines().next().unwrap_or("error: invalid arguments"));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("error: splitting ratio is infeasible in the permittivity range");
            ExitCode::from(3)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
