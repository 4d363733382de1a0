//! Command-line flags and their translation into job descriptions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use curvsieve_core::flowsim::{Profile, DEFAULT_CFL};
use curvsieve_core::sieve::CandidateSpace;

use crate::expr::{parse_expr, Expr};
use crate::CliError;

pub const THREADS_ENV: &str = "CURVSIEVE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "curvsieve", version, about = "Discover and certify monotone curvature quantities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Screen a candidate space and certify the survivors.
    Sieve(SieveArgs),
    /// Exact monotonicity certificate for one velocity and quantity.
    Certify(CertifyArgs),
    /// Simulate an axisymmetric surface and write a CSV series.
    Flow(FlowArgs),
    /// Decay rate of a spherical-harmonic mode under the rescaled flow.
    Rescaled(RescaledArgs),
    /// Homogeneity and convergence constants.
    Constants(ConstantsArgs),
}

#[derive(Debug, Args)]
pub struct SieveArgs {
    #[arg(long)]
    pub velocity: String,
    #[arg(long, default_value_t = 3)]
    pub max_num_degree: u32,
    #[arg(long, default_value_t = 2)]
    pub max_den_degree: u32,
    /// Comma-separated coefficient set.
    #[arg(long, default_value = "1,2,3")]
    pub coeffs: String,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Screen only; skip exact certification of survivors.
    #[arg(long)]
    pub no_certify: bool,
    /// Do not require the (l1-l2)^2 numerator factor.
    #[arg(long)]
    pub no_diff_factor: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[arg(long)]
    pub velocity: String,
    #[arg(long)]
    pub quantity: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FlowArgs {
    #[arg(long)]
    pub velocity: String,
    #[arg(long)]
    pub quantity: Option<String>,
    /// `sphere:R`, `perturbed:R,L,AMP` or `oblate:A,C`.
    #[arg(long, default_value = "perturbed:1,2,0.05")]
    pub init: String,
    #[arg(long, default_value_t = 64)]
    pub grid: usize,
    #[arg(long, default_value_t = DEFAULT_CFL)]
    pub cfl: f64,
    /// Stop once the inner radius reaches this value.
    #[arg(long, default_value_t = 0.05)]
    pub stop_radius: f64,
    #[arg(long)]
    pub seed: Option<u64>,
    /// CSV path; metadata goes to a JSON file beside it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RescaledArgs {
    /// Only `Q` (the squared norm of the second fundamental form) is supported.
    #[arg(long)]
    pub velocity: Option<String>,
    /// `perturbed:1,L,AMP`.
    #[arg(long, default_value = "perturbed:1,2,0.001")]
    pub init: String,
    #[arg(long, default_value_t = 32)]
    pub grid: usize,
    #[arg(long, default_value_t = DEFAULT_CFL)]
    pub cfl: f64,
    #[arg(long, default_value_t = 1.0)]
    pub max_tau: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    #[arg(long)]
    pub velocity: String,
    #[arg(long)]
    pub quantity: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Job {
    Sieve {
        velocity: Expr,
        space: CandidateSpace,
        certify: bool,
    },
    Certify {
        velocity: Expr,
        quantity: Expr,
    },
    Flow {
        velocity: Expr,
        quantity: Option<Expr>,
        profile: Profile,
        grid: usize,
        cfl: f64,
        stop_radius: f64,
        seed: Option<u64>,
    },
    Rescaled {
        velocity: Option<Expr>,
        l: u32,
        amplitude: f64,
        grid: usize,
        cfl: f64,
        max_tau: f64,
    },
    Constants {
        velocity: Expr,
        quantity: Expr,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct JobConfig {
    pub job: Job,
    pub threads: Option<usize>,
    pub out: Option<PathBuf>,
}

fn expr(flag: &str, text: &str) -> Result<Expr, CliError> {
    parse_expr(text).map_err(|e| CliError::Input(format!("--{flag}: {e}")))
}

fn parse_coeffs(text: &str) -> Result<Vec<i64>, CliError> {
    text.split(',')
        .map(|s| s.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Input(format!("--coeffs: {e}")))
}

fn parse_floats(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Input(format!("--init: {e}")))
}

pub fn parse_profile(text: &str) -> Result<Profile, CliError> {
    let (kind, rest) = text
        .split_once(':')
        .ok_or_else(|| CliError::Input(format!("--init: expected KIND:PARAMS, got '{text}'")))?;
    let v = parse_floats(rest)?;
    match (kind, v.as_slice()) {
        ("sphere", [r]) => Ok(Profile::Sphere { r: *r }),
        ("perturbed", [r, l, a]) if l.fract() == 0.0 && *l >= 0.0 => Ok(Profile::Perturbed {
            r: *r,
            l: *l as u32,
            amplitude: *a,
        }),
        ("oblate", [a, c]) => Ok(Profile::Oblate { a: *a, c: *c }),
        ("sphere" | "perturbed" | "oblate", _) => {
            Err(CliError::Input(format!("--init: wrong parameters for '{kind}'")))
        }
        _ => Err(CliError::Input(format!("--init: unknown profile '{kind}'"))),
    }
}

pub fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|n| *n > 0)
            .map(Some)
            .ok_or_else(|| CliError::Input(format!("{THREADS_ENV} must be a positive integer"))),
    }
}

impl JobConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self, CliError> {
        let threads = threads_from_env()?;
        let (job, out) = match &cli.command {
            Command::Sieve(a) => {
                let mut space = CandidateSpace::new(a.max_num_degree, a.max_den_degree, &parse_coeffs(&a.coeffs)?);
                space.seed = a.seed;
                space.samples_per_step = a.samples;
                space.enforce_diff_squared_factor = !a.no_diff_factor;
                let job = Job::Sieve {
                    velocity: expr("velocity", &a.velocity)?,
                    space,
                    certify: !a.no_certify,
                };
                (job, a.out.clone())
            }
            Command::Certify(a) => (
                Job::Certify {
                    velocity: expr("velocity", &a.velocity)?,
                    quantity: expr("quantity", &a.quantity)?,
                },
                a.out.clone(),
            ),
            Command::Flow(a) => (
                Job::Flow {
                    velocity: expr("velocity", &a.velocity)?,
                    quantity: a.quantity.as_deref().map(|q| expr("quantity", q)).transpose()?,
                    profile: parse_profile(&a.init)?,
                    grid: a.grid,
                    cfl: a.cfl,
                    stop_radius: a.stop_radius,
                    seed: a.seed,
                },
                a.out.clone(),
            ),
            Command::Rescaled(a) => {
                let Profile::Perturbed { r, l, amplitude } = parse_profile(&a.init)? else {
                    return Err(CliError::Input("--init: the rescaled flow needs perturbed:1,L,AMP".into()));
                };
                if r != 1.0 {
                    return Err(CliError::Input("--init: the rescaled flow starts from the unit sphere".into()));
                }
                (
                    Job::Rescaled {
                        velocity: a.velocity.as_deref().map(|v| expr("velocity", v)).transpose()?,
                        l,
                        amplitude,
                        grid: a.grid,
                        cfl: a.cfl,
                        max_tau: a.max_tau,
                    },
                    a.out.clone(),
                )
            }
            Command::Constants(a) => (
                Job::Constants {
                    velocity: expr("velocity", &a.velocity)?,
                    quantity: expr("quantity", &a.quantity)?,
                },
                a.out.clone(),
            ),
        };
        if let Job::Flow { grid, cfl, .. } | Job::Rescaled { grid, cfl, .. } = &job {
            if *grid < 8 {
                return Err(CliError::Input("--grid must be at least 8".into()));
            }
            if !(*cfl > 0.0) {
                return Err(CliError::Input("--cfl must be positive".into()));
            }
        }
        Ok(Self { job, threads, out })
    }
}
