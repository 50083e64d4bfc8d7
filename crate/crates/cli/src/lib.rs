//! Command-line front end: recurrence and connection tables, basis samples,
//! Gram and differentiation checks, the fast MT transform, the OU demo and
//! the acceptance self-test.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sobolev_core::basis::SystemKind;
use sobolev_core::weights::{SobolevSequence, WeightFamily, WeightSpec};
use sobolev_core::Error;

mod commands;
pub mod selftest;

#[derive(Debug, Parser)]
#[command(name = "sobolev", version, about = "Sobolev-orthonormal systems on the real line")]
pub struct Cli {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Recurrence coefficients (n, a_n, b_n) of w^[s].
    GenRecurrence(GenRecurrenceArgs),
    /// Band of the connection matrix C^[s].
    GenConnection(GenConnectionArgs),
    /// Samples of φ_n (or a derivative) on a uniform grid.
    EvalBasis(EvalBasisArgs),
    /// Orthonormal polynomials p_0..p_n of w^[s] on a uniform ξ grid.
    EvalPolys(EvalPolysArgs),
    /// Gram matrix in a Sobolev inner product, as a JSON report.
    Gram(GramArgs),
    /// Tridiagonal differentiation law check, as a JSON report.
    Diffcheck(DiffcheckArgs),
    /// MT coefficients from samples at the transform nodes.
    MtTransform(MtTransformArgs),
    /// H¹ norm history of the Ornstein–Uhlenbeck Galerkin solver.
    OuDemo(OuDemoArgs),
    /// Run the acceptance criteria and print a pass/fail table.
    Selftest(SelftestArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Hermite,
    HermiteShifted,
    HermiteScaled,
    BilateralLaguerre,
    Legendre,
    Ultraspherical,
    Laguerre,
    LaguerreMirror,
}

#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: FamilyName,
    /// Second-kind Sobolev level.
    #[arg(long, default_value_t = 0)]
    pub s: u32,
    /// Shift of `hermite-shifted`.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub rho: f64,
    /// Scale of `hermite-scaled`.
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
}

impl FamilyArgs {
    fn family(&self) -> WeightFamily {
        family_of(self.family, self.rho, self.gamma)
    }

    fn spec(&self) -> Result<WeightSpec, Error> {
        WeightSpec::new(self.family(), self.s)
    }
}

fn family_of(name: FamilyName, rho: f64, gamma: f64) -> WeightFamily {
    match name {
        FamilyName::Hermite => WeightFamily::Hermite,
        FamilyName::HermiteShifted => WeightFamily::HermiteShifted { rho },
        FamilyName::HermiteScaled => WeightFamily::HermiteScaled { gamma },
        FamilyName::BilateralLaguerre => WeightFamily::BilateralLaguerre,
        FamilyName::Legendre => WeightFamily::Legendre,
        FamilyName::Ultraspherical => WeightFamily::Ultraspherical1m,
        FamilyName::Laguerre => WeightFamily::LaguerreHalfline,
        FamilyName::LaguerreMirror => WeightFamily::LaguerreMirror,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SystemName {
    /// Second-kind Hermite cascade φ^[s].
    Hermite,
    /// H^∞ Hermite system, v(ξ) = e^{σξ²}.
    HermiteHinf,
    /// H¹ system of w = (1+ξ²)e^{-|ξ|}.
    BilateralLaguerre,
    /// Spherical Bessel system.
    LegendreBessel,
    /// Second-kind Sobolev–Legendre cascade.
    LegendreCascade,
    /// Second-kind cascade of 1 - ξ².
    UltrasphericalCascade,
    /// Malmquist–Takenaka.
    Mt,
    /// Second-kind Sobolev–Laguerre cascade.
    SobolevLaguerre,
    /// e^{iρx} times the Hermite functions.
    HermiteShifted,
    /// First-kind cascade of --family at level --s (quadrature only).
    FirstKind,
}

#[derive(Debug, Clone, Args)]
pub struct SystemArgs {
    #[arg(long, value_enum)]
    pub system: SystemName,
    /// Sobolev level for the cascades.
    #[arg(long, default_value_t = 0)]
    pub s: u32,
    /// σ of the H^∞ system.
    #[arg(long, default_value_t = 0.5)]
    pub sigma: f64,
    /// Shift of the shifted Hermite system and the `hermite-shifted` family.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub rho: f64,
    /// Base family of a first-kind cascade.
    #[arg(long, value_enum, default_value = "hermite")]
    pub family: FamilyName,
    /// Scale of the `hermite-scaled` family.
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
}

impl SystemArgs {
    pub fn kind(&self) -> Result<SystemKind, Error> {
        Ok(match self.system {
            SystemName::Hermite => SystemKind::HermiteClosed { s: self.s },
            SystemName::HermiteHinf => SystemKind::HermiteHinf { sigma: self.sigma },
            SystemName::BilateralLaguerre => SystemKind::BilateralLaguerre1,
            SystemName::LegendreBessel => SystemKind::LegendreBessel,
            SystemName::LegendreCascade => SystemKind::LegendreCascade2nd { s: self.s },
            SystemName::UltrasphericalCascade => SystemKind::UltrasphericalCascade2nd { s: self.s },
            SystemName::Mt => SystemKind::MalmquistTakenaka,
            SystemName::SobolevLaguerre => SystemKind::SobolevLaguerre2nd { s: self.s },
            SystemName::HermiteShifted => SystemKind::HermiteShifted0 { rho: self.rho },
            SystemName::FirstKind => SystemKind::Quadrature {
                weight: WeightSpec::new(family_of(self.family, self.rho, self.gamma), 0)?,
                sequence: SobolevSequence::standard(self.s),
            },
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RecurrenceMethodArg {
    Stieltjes,
    Exact,
    Christoffel,
}

#[derive(Debug, Clone, Args)]
pub struct GenRecurrenceArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Number of coefficient pairs.
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "stieltjes")]
    pub method: RecurrenceMethodArg,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConnectionMethodArg {
    /// Quadrature, falling back to Christoffel when the rule underflows.
    Auto,
    Quadrature,
    Cholesky,
    Christoffel,
}

#[derive(Debug, Clone, Args)]
pub struct GenConnectionArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Number of rows.
    #[arg(long)]
    pub n: usize,
    /// Entries as exact signed radicals.
    #[arg(long)]
    pub exact: bool,
    /// Emit the phased entries i^{n-j} C̃_{n,j} instead of C̃.
    #[arg(long)]
    pub phased: bool,
    #[arg(long, value_enum, default_value = "auto")]
    pub method: ConnectionMethodArg,
}

#[derive(Debug, Clone, Args)]
pub struct EvalBasisArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Index; negative on the ℤ-indexed systems.
    #[arg(long, allow_hyphen_values = true)]
    pub n: i64,
    #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
    pub xmin: f64,
    #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
    pub xmax: f64,
    #[arg(long, default_value_t = 201)]
    pub points: usize,
    /// Derivative order.
    #[arg(long, default_value_t = 0)]
    pub derivative: usize,
    /// Evaluate the defining Fourier integral numerically even when a closed form exists.
    #[arg(long)]
    pub quadrature: bool,
}

#[derive(Debug, Clone, Args)]
pub struct EvalPolysArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Highest degree.
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = -3.0, allow_hyphen_values = true)]
    pub ximin: f64,
    #[arg(long, default_value_t = 3.0, allow_hyphen_values = true)]
    pub ximax: f64,
    #[arg(long, default_value_t = 121)]
    pub points: usize,
}

#[derive(Debug, Clone, Args)]
pub struct GramArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Sobolev sequence: `h<s>`, `exp:<σ>` or `custom:v0,v1,...`; defaults to the system's own.
    #[arg(long)]
    pub seq: Option<String>,
    /// Truncation: indices 0..N, or -N..N on ℤ.
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "fourier")]
    pub method: String,
    /// Perturb the mollifier to g(1 + eps ξ²) (negative control).
    #[arg(long)]
    pub perturb: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct DiffcheckArgs {
    #[command(flatten)]
    pub system: SystemArgs,
    /// Truncation of the differentiation matrix.
    #[arg(long, default_value_t = 8)]
    pub n: usize,
    /// Sample points, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub xs: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Args)]
pub struct MtTransformArgs {
    /// Half the number of nodes; coefficients -N..N-1.
    #[arg(long)]
    pub n: usize,
    /// CSV of samples `x,re[,im]` at the transform nodes.
    #[arg(long, required_unless_present = "emit_nodes")]
    pub input: Option<PathBuf>,
    /// Convert to the H^s Sobolev–Laguerre coefficients.
    #[arg(long, default_value_t = 0)]
    pub s: usize,
    /// Print the 2N nodes instead of transforming.
    #[arg(long)]
    pub emit_nodes: bool,
}

#[derive(Debug, Clone, Args)]
pub struct OuDemoArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub a: f64,
    /// Number of Hermite modes.
    #[arg(long, default_value_t = 16)]
    pub n: usize,
    #[arg(long, default_value_t = 1e-3, allow_hyphen_values = true)]
    pub dt: f64,
    /// Final time.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub t: f64,
    #[arg(long, default_value = "trapezoidal")]
    pub scheme: String,
}

#[derive(Debug, Clone, Args)]
pub struct SelftestArgs {
    /// Seed of the randomized checks.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Run only these criteria (comma separated ids).
    #[arg(long, value_delimiter = ',')]
    pub only: Option<Vec<usize>>,
}

/// Why a command did not succeed.
#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    /// Bad input or a library error; exit code 1.
    Invalid(String),
    /// A verification ran but missed its tolerance; exit code 2.
    Tolerance(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Invalid(_) => 1,
            Failure::Tolerance(_) => 2,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::MollifierMismatch { .. } => Failure::Tolerance(e.to_string()),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

/// Output of a successful or tolerance-failed command.
pub struct Outcome {
    pub text: String,
    pub failure: Option<Failure>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, failure: None }
    }
}

/// Parse `argv` (including the program name), run, and return the exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    match commands::dispatch(&cli.command) {
        Ok(outcome) => {
            if let Err(e) = emit(&cli.output, &outcome.text, stdout) {
                let _ = writeln!(stderr, "error: {e}");
                return 1;
            }
            match outcome.failure {
                None => 0,
                Some(f) => {
                    let msg = match &f {
                        Failure::Invalid(m) | Failure::Tolerance(m) => m,
                    };
                    let _ = writeln!(stderr, "tolerance failure: {msg}");
                    f.exit_code()
                }
            }
        }
        Err(f) => {
            let msg = match &f {
                Failure::Invalid(m) => format!("error: {m}"),
                Failure::Tolerance(m) => format!("tolerance failure: {m}"),
            };
            let _ = writeln!(stderr, "{msg}");
            f.exit_code()
        }
    }
}

fn emit(path: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => stdout.write_all(text.as_bytes()),
    }
}

/// 17 significant digits.
pub(crate) fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub(crate) fn csv_line(out: &mut String, fields: &[String]) {
    let _ = writeln!(out, "{}", fields.join(","));
}
