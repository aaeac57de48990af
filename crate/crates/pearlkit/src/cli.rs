//! Argument parsing and the exit-code contract: 0 success, 1 a failed
//! verification, 2 a parse or usage error.

use std::ffi::OsString;
use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use pearlkit_core::bounds::BoundKind;
use pearlkit_core::torus::{NuFunction, Point};
use pearlkit_core::PearlComplex;

use crate::commands::{self, Coeff, CommandError};
use crate::formats::{self, Document};
use crate::report::{OutputFormat, Report};

#[derive(Debug, Parser)]
#[command(name = "pearlkit", version, about = "Lagrangian quantum homology from finite presentations")]
pub struct Cli {
    /// Output style.
    #[arg(long, value_enum, default_value_t = FormatArg::Text, global = true)]
    pub format: FormatArg,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Text,
    Records,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoeffArg {
    Plus,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundArg {
    Gromov,
    Mixed,
    Cpn,
    Torus,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a file and run the checks that apply to its kind.
    Check { file: PathBuf },
    /// Homology of a pearl complex over the positive or the Laurent ring.
    Homology {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = CoeffArg::Plus)]
        coeff: CoeffArg,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
        window: Option<Vec<i64>>,
    },
    /// Reduce a complex to its minimal model and print it.
    Minimal { file: PathBuf },
    /// Pages of the degree-filtration spectral sequence.
    Ss {
        file: PathBuf,
        #[arg(long, value_name = "R")]
        max_page: Option<u32>,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
        window: Option<Vec<i64>>,
    },
    /// Algebra and module-action checks.
    #[command(subcommand)]
    Algebra(AlgebraCommand),
    /// Monotone tori from disk count functions.
    #[command(subcommand)]
    Torus(TorusCommand),
    /// Exact Gromov-radius and packing bounds; arguments are `key=value`
    /// pairs plus an optional case name.
    Bounds {
        #[arg(value_enum)]
        kind: BoundArg,
        #[arg(allow_hyphen_values = true)]
        args: Vec<String>,
    },
    /// Built-in examples.
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(Debug, Subcommand)]
pub enum AlgebraCommand {
    /// Homogeneity, unit, associativity, Frobenius and module axioms.
    Verify { file: PathBuf },
    /// Quantum Euler class and semisimplicity.
    Euler { file: PathBuf },
    /// Search for an invertible element of one degree.
    Invertible {
        file: PathBuf,
        #[arg(long, value_name = "L", allow_negative_numbers = true)]
        degree: i64,
        #[arg(long, value_name = "S", default_value_t = 200)]
        samples: usize,
    },
}

#[derive(Debug, clap::Args)]
pub struct Points {
    #[arg(long, value_name = "x,y", allow_hyphen_values = true)]
    p1: String,
    #[arg(long, value_name = "x,y", allow_hyphen_values = true)]
    p2: String,
    #[arg(long, value_name = "x,y", allow_hyphen_values = true)]
    p3: String,
}

#[derive(Debug, Subcommand)]
pub enum TorusCommand {
    /// Quantum product table from a disk count function.
    Synth {
        file: PathBuf,
        /// Print only the synthesized algebra file.
        #[arg(long)]
        emit: bool,
    },
    /// Geometric count s1 for three points.
    S1 {
        file: PathBuf,
        #[command(flatten)]
        points: Points,
    },
    /// The count n4 for three points.
    N4 {
        file: PathBuf,
        #[command(flatten)]
        points: Points,
    },
    /// Comparison coefficient for two pairs of points (p1, p2) and (p3, p4).
    Epsilon {
        file: PathBuf,
        #[command(flatten)]
        points: Points,
        #[arg(long, value_name = "x,y", allow_hyphen_values = true)]
        p4: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum CatalogCommand {
    /// Names and kinds of all entries.
    List,
    /// Print one entry in its text format.
    Emit { name: String },
    /// Run every identity of every entry.
    Selftest,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Format { path: String, source: formats::FormatError },
    #[error("{path}: expected a {expected} file, found {found}")]
    WrongKind { path: String, expected: &'static str, found: &'static str },
    #[error(transparent)]
    Command(#[from] CommandError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Command(e) => e.exit_code(),
            _ => 2,
        }
    }
}

/// Outcome of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

fn display(path: &Path) -> String {
    path.display().to_string()
}

fn read_input(path: &Path) -> Result<String, CliError> {
    let io = |source| CliError::Io { path: display(path), source };
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

fn load(path: &Path) -> Result<Document, CliError> {
    let text = read_input(path)?;
    formats::parse_document(&text).map_err(|source| CliError::Format { path: display(path), source })
}

fn load_complex(path: &Path) -> Result<PearlComplex, CliError> {
    match load(path)? {
        Document::Complex(c) => Ok(c),
        other => Err(CliError::WrongKind { path: display(path), expected: "pearl-complex", found: other.kind() }),
    }
}

fn load_nu(path: &Path) -> Result<NuFunction, CliError> {
    match load(path)? {
        Document::Nu(nu) => Ok(nu),
        other => Err(CliError::WrongKind { path: display(path), expected: "nu", found: other.kind() }),
    }
}

fn point(flag: &str, text: &str) -> Result<Point, CliError> {
    formats::parse_point(text).map_err(|source| CliError::Format { path: format!("--{flag}"), source })
}

fn window(w: &Option<Vec<i64>>) -> Option<(i64, i64)> {
    w.as_ref().map(|v| (v[0], v[1]))
}

fn points3(p: &Points) -> Result<[Point; 3], CliError> {
    Ok([point("p1", &p.p1)?, point("p2", &p.p2)?, point("p3", &p.p3)?])
}

/// Executes a parsed command.
pub fn execute(cmd: &Command) -> Result<Report, CliError> {
    let report = match cmd {
        Command::Check { file } => commands::check(&load(file)?)?,
        Command::Homology { file, coeff, window: w } => {
            let coeff = match coeff {
                CoeffArg::Plus => Coeff::Plus,
                CoeffArg::Full => Coeff::Full,
            };
            commands::homology(&load_complex(file)?, coeff, window(w))?
        }
        Command::Minimal { file } => commands::minimal(&load_complex(file)?)?,
        Command::Ss { file, max_page, window: w } => commands::spectral(&load_complex(file)?, *max_page, window(w))?,
        Command::Algebra(AlgebraCommand::Verify { file }) => commands::algebra_verify(&load(file)?)?,
        Command::Algebra(AlgebraCommand::Euler { file }) => commands::algebra_euler(&load(file)?)?,
        Command::Algebra(AlgebraCommand::Invertible { file, degree, samples }) => {
            commands::algebra_invertible(&load(file)?, *degree, *samples)?
        }
        Command::Torus(TorusCommand::Synth { file, emit }) => {
            let nu = load_nu(file)?;
            if *emit {
                let mut r = Report::new();
                r.raw(commands::torus_ring_text(&nu)?);
                r
            } else {
                commands::torus_synth(&nu)?
            }
        }
        Command::Torus(TorusCommand::S1 { file, points }) => {
            let p = points3(points)?;
            commands::torus_s1(&load_nu(file)?, [&p[0], &p[1], &p[2]])?
        }
        Command::Torus(TorusCommand::N4 { file, points }) => {
            let p = points3(points)?;
            commands::torus_n4(&load_nu(file)?, [&p[0], &p[1], &p[2]])?
        }
        Command::Torus(TorusCommand::Epsilon { file, points, p4 }) => {
            let p = points3(points)?;
            let p4 = point("p4", p4)?;
            commands::torus_epsilon(&load_nu(file)?, [&p[0], &p[1], &p[2], &p4])?
        }
        Command::Bounds { kind, args } => {
            let kind = match kind {
                BoundArg::Gromov => BoundKind::Gromov,
                BoundArg::Mixed => BoundKind::Mixed,
                BoundArg::Cpn => BoundKind::Cpn,
                BoundArg::Torus => BoundKind::Torus,
            };
            commands::bounds(kind, args)?
        }
        Command::Catalog(CatalogCommand::List) => commands::catalog_list(),
        Command::Catalog(CatalogCommand::Emit { name }) => commands::catalog_emit(name)?,
        Command::Catalog(CatalogCommand::Selftest) => commands::catalog_selftest(),
    };
    Ok(report)
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let (stdout, stderr) = if code == 0 { (text, String::new()) } else { (String::new(), text) };
            return Outcome { stdout, stderr, code };
        }
    };
    let format = match cli.format {
        FormatArg::Text => OutputFormat::Text,
        FormatArg::Records => OutputFormat::Records,
    };
    match execute(&cli.command) {
        Ok(r) => Outcome { stdout: r.render(format), stderr: String::new(), code: u8::from(r.failed) },
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: e.exit_code() },
    }
}
