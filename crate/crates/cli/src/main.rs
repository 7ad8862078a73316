//! `hgschottky`: monodromy reports, Schottky certificates, deformation
//! loops and figures.
//!
//! Exit status is 0 when the checked property holds, 1 when it fails and
//! 2 for usage or input errors. `HGSCHOTTKY_TOL` overrides the default
//! certification tolerance.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hgschottky::{Complex64, GeneralizedDisk};

use hgschottky_cli::commands::{
    self, ApolloniusRequest, CertifyRequest, CliResult, LoopRequest, MonodromyRequest, PlotRequest, Verdict,
};

#[derive(Parser, Debug)]
#[command(name = "hgschottky", version, about = "Schottky structure of hypergeometric monodromy groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Circuit matrices, fixed points and multipliers for (a, b, c).
    Monodromy(MonodromyArgs),
    /// Check the four-disk conditions of a configuration.
    Certify(CertifyArgs),
    /// Trace one of the deformation loops and certify every sample.
    Loop(LoopArgs),
    /// Draw a configuration or a loop report as SVG.
    Plot(PlotArgs),
    /// Concentric points and a pairing map for two disjoint disks.
    Apollonius(ApolloniusArgs),
    /// Check the inequalities a loop profile must satisfy.
    Audit(LoopArgs),
    /// Execute a JSON run configuration.
    Run {
        config: PathBuf,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct Angles {
    #[arg(long)]
    theta0: Option<f64>,
    #[arg(long)]
    theta1: Option<f64>,
    #[arg(long)]
    theta2: Option<f64>,
}

impl Angles {
    fn triple(&self) -> CliResult<Option<(f64, f64, f64)>> {
        match (self.theta0, self.theta1, self.theta2) {
            (Some(a), Some(b), Some(c)) => Ok(Some((a, b, c))),
            (None, None, None) => Ok(None),
            _ => Err(commands::CliError::Usage(
                "--theta0, --theta1 and --theta2 go together".into(),
            )),
        }
    }
}

#[derive(Args, Debug)]
struct MonodromyArgs {
    /// `re,im`
    #[arg(long, value_parser = commands::parse_complex, allow_hyphen_values = true)]
    a: Option<Complex64>,
    #[arg(long, value_parser = commands::parse_complex, allow_hyphen_values = true)]
    b: Option<Complex64>,
    #[arg(long, value_parser = commands::parse_complex, allow_hyphen_values = true)]
    c: Option<Complex64>,
    /// Pure-imaginary exponent differences `i theta0`, `i theta1`, `i theta2`.
    #[command(flatten)]
    angles: Angles,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CertifyArgs {
    /// Configuration file; omit to build the base point of `--theta0/1/2`.
    input: Option<PathBuf>,
    #[command(flatten)]
    angles: Angles,
    #[arg(long)]
    tol: Option<f64>,
    /// Also check orbit nesting up to this word length.
    #[arg(long)]
    depth: Option<usize>,
    /// Write the configuration that was certified.
    #[arg(long)]
    save_config: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct LoopArgs {
    /// alpha-around-d0, alpha-around-d1, multiplier-gamma2 or multiplier-gamma1.
    #[arg(long)]
    kind: String,
    #[arg(long)]
    theta0: Option<f64>,
    #[arg(long)]
    theta1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    theta_prime: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    /// Number of samples.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    margin: Option<f64>,
    /// Also search for the smallest pairing angle that still certifies.
    #[arg(long)]
    bisect_theta1: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Strip of snapshots along the loop.
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PlotArgs {
    /// Configuration or loop report.
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Scatter images of the disk centers under words up to this length.
    #[arg(long)]
    orbit_depth: Option<usize>,
}

#[derive(Args, Debug)]
struct ApolloniusArgs {
    /// `x,y,r` of the repelling disk.
    #[arg(long, value_parser = commands::parse_disk, allow_hyphen_values = true)]
    d: GeneralizedDisk,
    /// `x,y,r` of the attracting disk.
    #[arg(long, value_parser = commands::parse_disk, allow_hyphen_values = true)]
    dp: GeneralizedDisk,
    /// Attracting fixed point inside the attracting disk.
    #[arg(long, value_parser = commands::parse_complex, allow_hyphen_values = true)]
    fp: Option<Complex64>,
    /// Argument of the multiplier.
    #[arg(long, allow_negative_numbers = true)]
    phase: Option<f64>,
    /// Draw the phase at random from this seed when `--phase` is absent.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl From<LoopArgs> for LoopRequest {
    fn from(a: LoopArgs) -> Self {
        LoopRequest {
            kind: a.kind,
            theta0: a.theta0,
            theta1: a.theta1,
            theta_prime: a.theta_prime,
            s: a.s,
            n: a.n,
            tol: a.tol,
            margin: a.margin,
            bisect_theta1: a.bisect_theta1,
            out: a.out,
            svg: a.svg,
        }
    }
}

fn dispatch(cmd: Command) -> CliResult<Verdict> {
    match cmd {
        Command::Monodromy(a) => commands::monodromy(&MonodromyRequest {
            a: a.a,
            b: a.b,
            c: a.c,
            angles: a.angles.triple()?,
            out: a.out,
        }),
        Command::Certify(a) => commands::certify_cmd(&CertifyRequest {
            input: a.input,
            angles: a.angles.triple()?,
            tol: a.tol,
            depth: a.depth,
            save_config: a.save_config,
            svg: a.svg,
            out: a.out,
        }),
        Command::Loop(a) => commands::run_loop(&a.into()),
        Command::Audit(a) => commands::audit(&a.into()),
        Command::Plot(a) => commands::plot(&PlotRequest {
            input: a.input,
            out: a.out,
            orbit_depth: a.orbit_depth,
        }),
        Command::Apollonius(a) => commands::apollonius(&ApolloniusRequest {
            d: a.d,
            dp: a.dp,
            fp: a.fp,
            phase: a.phase,
            seed: a.seed,
            out: a.out,
        }),
        Command::Run { config } => commands::run(&config),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli.command) {
        Ok(Verdict::Pass) => ExitCode::SUCCESS,
        Ok(Verdict::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
