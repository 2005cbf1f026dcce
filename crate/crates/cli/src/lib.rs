//! Command-line front end for `lambda-abel`.

pub mod generate;
pub mod instance;
pub mod verify;

use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use lambda_abel::abelianize::find_integral_lattice_with_cap;
use lambda_abel::wasow::split_unramified;
use lambda_abel::{
    find_integral_lattice, forward_abelianize, pushforward_scalar, CurveClass, Error, ErrorKind,
    Truncation,
};
use serde_json::json;

use generate::{gen_random, GenConfig, Profile};
use instance::{parse_instance, to_json, InstanceFile};
use verify::{verify_properties, Suite, VerifyConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::Parse(_) | CliError::Input(_) => 1,
            CliError::Core(e) => match e.kind() {
                ErrorKind::Validation => 1,
                ErrorKind::Mathematical => 2,
                ErrorKind::Resource => 3,
            },
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "lambda-abel",
    version,
    about = "Exact abelianization of rank-2 λ-connections on a formal disc"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Io {
    /// Input file; stdin when absent or "-".
    #[arg(long = "in", value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// Output file; stdout when absent or "-".
    #[arg(long = "out", value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct Window {
    /// Truncate the input to this many x-orders.
    #[arg(long)]
    pub z_order: Option<i64>,
    /// Truncate the input to this many λ-orders.
    #[arg(long)]
    pub lambda_order: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Matrix connection to normalized scalar connection on the cover.
    Abelianize {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        window: Window,
    },
    /// Scalar connection to its integral matrix connection and lattice gauge.
    Deabelianize {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        window: Window,
        /// Fixed pole cap for the lattice search (default: 2Λ, doubled once).
        #[arg(long)]
        pole_cap: Option<i64>,
    },
    /// Split an unramified matrix connection into two scalar ones.
    Wasow {
        #[command(flatten)]
        io: Io,
        #[command(flatten)]
        window: Window,
    },
    /// Classify the spectral curve of an instance.
    Classify {
        #[command(flatten)]
        io: Io,
    },
    /// Run the property suites.
    Verify {
        #[arg(long, value_enum)]
        suite: Vec<Suite>,
        #[arg(long, default_value_t = 10)]
        count: u64,
        #[arg(long, default_value_t = 8)]
        z_order: i64,
        #[arg(long, default_value_t = 4)]
        lambda_order: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Plain-text summary instead of JSON.
        #[arg(long)]
        human: bool,
        #[arg(long = "out", value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Random instances, one JSON document per line.
    Generate {
        #[arg(long, value_enum)]
        profile: Profile,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: u64,
        #[arg(long, default_value_t = 8)]
        z_order: i64,
        #[arg(long, default_value_t = 4)]
        lambda_order: usize,
        #[arg(long = "out", value_name = "FILE")]
        output: Option<PathBuf>,
    },
}

/// Payload and exit status of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
    pub output: Option<PathBuf>,
}

impl Outcome {
    fn ok(stdout: String, output: Option<PathBuf>) -> Self {
        Outcome {
            stdout,
            code: 0,
            output,
        }
    }
}

fn read_input(path: &Option<PathBuf>, stdin: &mut dyn Read) -> Result<String, CliError> {
    let mut text = String::new();
    match path {
        Some(p) if p.as_os_str() != "-" => text = std::fs::read_to_string(p)?,
        _ => {
            stdin.read_to_string(&mut text)?;
        }
    }
    Ok(text)
}

fn restrict(mut inst: InstanceFile, w: &Window) -> Result<InstanceFile, CliError> {
    if w.z_order.is_none() && w.lambda_order.is_none() {
        return Ok(inst);
    }
    let l = w.lambda_order.unwrap_or(inst.truncation.lambda_order);
    let n = w.z_order.unwrap_or(inst.truncation.z_order);
    if l > inst.truncation.lambda_order {
        return Err(CliError::Input(format!(
            "--lambda-order {l} exceeds the instance's {}",
            inst.truncation.lambda_order
        )));
    }
    inst.truncation = Truncation::new(n, l, inst.truncation.pole_cap)?;
    if let Some(m) = &mut inst.matrix {
        m.a = m.a.map(|e| e.truncate_lambda(l).truncate_z(n));
    }
    if let Some(s) = &mut inst.scalar {
        // the cover coordinate has twice the resolution of the base one
        let a = s.a.truncate_lambda(l).truncate_z(2 * n);
        *s = lambda_abel::ScalarConnection::new(a, s.curve.clone())?;
    }
    Ok(inst)
}

fn emit<T: serde::Serialize>(x: &T) -> String {
    serde_json::to_string(x).expect("output serializes")
}

/// Executes a parsed command; reading `stdin` only when no input file is given.
pub fn run(cli: Cli, stdin: &mut dyn Read) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Abelianize { io, window } => {
            let inst = restrict(parse_instance(&read_input(&io.input, stdin)?)?, &window)?;
            let (s, w) = forward_abelianize(inst.matrix()?, &inst.curve)?;
            let mut out = InstanceFile::with_scalar(inst.truncation, s);
            out.witness = Some(w);
            Ok(Outcome::ok(to_json(&out), io.output))
        }
        Command::Deabelianize {
            io,
            window,
            pole_cap,
        } => {
            let inst = restrict(parse_instance(&read_input(&io.input, stdin)?)?, &window)?;
            let pf = pushforward_scalar(inst.scalar()?)?;
            let lat = match pole_cap {
                Some(cap) => find_integral_lattice_with_cap(&pf, cap)?,
                None => find_integral_lattice(&pf)?,
            };
            let mut out =
                InstanceFile::with_matrix(inst.truncation, inst.curve.clone(), lat.a_integral);
            out.phi = Some(lat.phi);
            Ok(Outcome::ok(to_json(&out), io.output))
        }
        Command::Wasow { io, window } => {
            let inst = restrict(parse_instance(&read_input(&io.input, stdin)?)?, &window)?;
            let (plus, minus, r) = split_unramified(inst.matrix()?)?;
            Ok(Outcome::ok(
                emit(&json!({"aPlus": plus, "aMinus": minus, "R": r})),
                io.output,
            ))
        }
        Command::Classify { io } => {
            let inst = parse_instance(&read_input(&io.input, stdin)?)?;
            let class = inst.curve.classify()?;
            let code = if class == CurveClass::Degenerate {
                2
            } else {
                0
            };
            Ok(Outcome {
                stdout: emit(&json!({"class": class})),
                code,
                output: io.output,
            })
        }
        Command::Verify {
            suite,
            count,
            z_order,
            lambda_order,
            seed,
            human,
            output,
        } => {
            Truncation::new(z_order, lambda_order, 0)?;
            let suites = if suite.is_empty() {
                Suite::ALL.to_vec()
            } else {
                suite
            };
            let report = verify_properties(&VerifyConfig {
                suites,
                count,
                z_order,
                lambda_order,
                seed,
            });
            let stdout = if human {
                report.render_human()
            } else {
                emit(&report)
            };
            Ok(Outcome {
                stdout,
                code: if report.passed { 0 } else { 1 },
                output,
            })
        }
        Command::Generate {
            profile,
            seed,
            count,
            z_order,
            lambda_order,
            output,
        } => {
            let cfg = GenConfig {
                z_order,
                lambda_order,
            };
            let mut lines = Vec::new();
            for k in 0..count {
                lines.push(to_json(&gen_random(seed + k, profile, cfg)?));
            }
            Ok(Outcome::ok(lines.join("\n"), output))
        }
    }
}
