//! `nematic`: command-line front end for the nematic film solvers.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 no solution,
//! 4 certification failure, 1 anything else (I/O).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{parse_c, RunConfig};

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    NoSolution(String),
    Certification(String),
    Other(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::NoSolution(_) => 3,
            Failure::Certification(_) => 4,
            Failure::Other(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::NoSolution(m) | Failure::Certification(m) | Failure::Other(m) => m,
        }
    }
}

impl From<nematic_core::Error> for Failure {
    fn from(e: nematic_core::Error) -> Self {
        use nematic_core::Error as E;
        match e {
            E::NoSolution(_) | E::MissingSolution(_) => Failure::NoSolution(e.to_string()),
            E::InvalidParameters(_) | E::Parse { .. } | E::Resolution { .. } | E::Periodicity { .. } => {
                Failure::Usage(e.to_string())
            }
            _ => Failure::Other(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "nematic", version, about = "Solvers for axisymmetric nematic films", allow_negative_numbers = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct Common {
    /// Half-distance between the rings.
    #[arg(long, global = true)]
    h: Option<f64>,
    /// Ring radius.
    #[arg(long, global = true)]
    r: Option<f64>,
    /// Nematic constant c = κ/(2γ); a comma-separated list for `sweep`.
    #[arg(long, global = true)]
    c: Option<String>,
    /// Number of grid nodes over [-h, h] (odd).
    #[arg(long, global = true)]
    nodes: Option<usize>,
    /// RK4 step for shooting.
    #[arg(long, global = true)]
    step: Option<f64>,
    /// Relative tolerance (shooting boundary residual, minimizer gradient).
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON run configuration (`"schema": 1`); flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BranchArg {
    Stable,
    Unstable,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum InitArg {
    Catenary,
    Chord,
}

#[derive(Debug, Clone, Copy, PartialEq, ValueEnum)]
pub enum SourceArg {
    Solve,
    Minimize,
    Catenary,
    Chord,
}

#[derive(Debug, Clone, Copy, PartialEq, ValueEnum)]
pub enum FieldArg {
    Constant,
    Sin,
    Mixed,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the model constants.
    Constants,
    /// Classify (h, r): catenary roots, energies and regime.
    Classify,
    /// Write a catenary profile.
    Catenary {
        #[arg(long, value_enum, default_value = "stable")]
        branch: BranchArg,
    },
    /// Shoot the Euler-Lagrange equation and certify the solution.
    Solve,
    /// Minimize the discrete energy directly.
    Minimize {
        #[arg(long, value_enum)]
        init: Option<InitArg>,
    },
    /// Minimize over a list of c values with warm starts.
    Sweep,
    /// Export the revolution surface and its curvatures.
    Mesh {
        #[arg(long, value_enum)]
        source: Option<SourceArg>,
        /// Azimuthal segments (at least 8).
        #[arg(long)]
        azimuthal: Option<usize>,
    },
    /// Convex envelope of a profile CSV with energies before and after.
    Envelope {
        /// Profile CSV with header `x,rho`.
        input: Option<PathBuf>,
    },
    /// Evaluate the full director energy on a sample angle field.
    DirectorCheck {
        #[arg(long, value_enum)]
        field: Option<FieldArg>,
        /// Surface tension γ.
        #[arg(long)]
        gamma: Option<f64>,
        /// Nematic constant κ; defaults to 2γc.
        #[arg(long)]
        kappa: Option<f64>,
        /// Azimuthal samples of the angle field, including 2π.
        #[arg(long)]
        azimuthal: Option<usize>,
    },
}

fn merge(common: &Common, command: &Command) -> Result<RunConfig, Failure> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if common.h.is_some() {
        cfg.h = common.h;
    }
    if common.r.is_some() {
        cfg.r = common.r;
    }
    if let Some(c) = &common.c {
        cfg.c = Some(parse_c(c)?);
    }
    if common.nodes.is_some() {
        cfg.nodes = common.nodes;
    }
    if common.step.is_some() {
        cfg.step = common.step;
    }
    if common.tol.is_some() {
        cfg.tol = common.tol;
    }
    if common.out.is_some() {
        cfg.out = common.out.clone();
    }
    match command {
        Command::Mesh { source, azimuthal } => {
            if let Some(s) = source {
                cfg.source = Some(format!("{s:?}").to_lowercase());
            }
            if azimuthal.is_some() {
                cfg.azimuthal = *azimuthal;
            }
        }
        Command::Minimize { init: Some(i) } => cfg.init = Some(format!("{i:?}").to_lowercase()),
        Command::Envelope { input: Some(p) } => cfg.input = Some(p.clone()),
        Command::DirectorCheck { field, gamma, kappa, azimuthal } => {
            if let Some(f) = field {
                cfg.field = Some(format!("{f:?}").to_lowercase());
            }
            if gamma.is_some() {
                cfg.gamma = *gamma;
            }
            if kappa.is_some() {
                cfg.kappa = *kappa;
            }
            if azimuthal.is_some() {
                cfg.azimuthal = *azimuthal;
            }
        }
        _ => {}
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let cfg = merge(&cli.common, &cli.command)?;
    match &cli.command {
        Command::Constants => commands::constants_cmd(),
        Command::Classify => commands::classify(&cfg),
        Command::Catenary { branch } => commands::catenary(&cfg, *branch),
        Command::Solve => commands::solve(&cfg),
        Command::Minimize { .. } => commands::minimize_cmd(&cfg),
        Command::Sweep => commands::sweep(&cfg),
        Command::Mesh { .. } => commands::mesh(&cfg),
        Command::Envelope { .. } => commands::envelope(&cfg),
        Command::DirectorCheck { .. } => commands::director_check(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
