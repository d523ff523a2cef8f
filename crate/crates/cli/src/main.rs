//! `pptkit`: generate, validate, analyze, reorder and sweep bipartite states.
//!
//! Exit status is 0 on success, 2 for bad input or parameters and 3 when the
//! eigensolver fails.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pptkit_core::{
    analyze, embed_werner, reorder, sample_qubit_qudit, sample_random, sweep, sweep_csv, validate_document, EpsGrid,
    IsotropicSpec, MatrixDocument, PptError, State, SweepKind, WernerSpec,
};

#[derive(Parser)]
#[command(name = "pptkit", version, about = "Partial-transpose analysis of bipartite states")]
struct Cli {
    /// Numerical tolerance for PSD, PPT and pattern checks.
    #[arg(long, global = true, env = "PPTKIT_TOL", default_value_t = 1e-10)]
    tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a state document.
    Generate(GenerateArgs),
    /// Check hermiticity, unit trace and positivity of a document.
    Validate(InputArgs),
    /// Full report: spectra, negativity and classification.
    Analyze(InputArgs),
    /// Partial transpose reordered into diagonal blocks.
    Reorder(InputArgs),
    /// CSV of PT minimum eigenvalue and negativity over an ε grid.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenerateKind {
    Werner,
    Isotropic,
    Family,
    #[value(name = "qubit_qudit", alias = "qubit-qudit")]
    QubitQudit,
    /// Werner state in family form.
    #[value(name = "werner_family")]
    WernerFamily,
}

#[derive(Args)]
struct GenerateArgs {
    kind: GenerateKind,
    /// Local dimension for werner and isotropic states.
    #[arg(long)]
    d: Option<usize>,
    #[arg(long = "dA")]
    d_a: Option<usize>,
    #[arg(long = "dB")]
    d_b: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    eps: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Scale of the X off-diagonals in [0, 1]; 0 gives a simply separable state.
    #[arg(long, default_value_t = 0.5)]
    bias: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InputArgs {
    /// Input document; stdin when absent.
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepKindArg {
    Werner,
    Isotropic,
}

#[derive(Args)]
struct SweepArgs {
    kind: SweepKindArg,
    #[arg(long)]
    d: usize,
    /// `start:stop:count`, inclusive; defaults to the valid range with 200 points.
    #[arg(long = "eps-grid", allow_hyphen_values = true)]
    eps_grid: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Core(PptError),
}

impl From<PptError> for CliError {
    fn from(e: PptError) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numerical() => 3,
            _ => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(msg) => f.write_str(msg),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn required<T>(v: Option<T>, flag: &str, kind: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::Input(format!("{kind} requires --{flag}")))
}

fn read_document(input: &Option<PathBuf>) -> CliResult<MatrixDocument> {
    let text = match input {
        Some(path) => {
            fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?
        }
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::Input(format!("cannot read stdin: {e}")))?;
            s
        }
    };
    Ok(MatrixDocument::from_json(&text)?)
}

fn write_output(out: &Option<PathBuf>, mut text: String) -> CliResult<()> {
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))
        }
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Input(format!("cannot write stdout: {e}"))),
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports contain only finite numbers")
}

fn generate(args: &GenerateArgs) -> CliResult<MatrixDocument> {
    let state = match args.kind {
        GenerateKind::Werner => {
            let spec = WernerSpec {
                d: required(args.d, "d", "werner")?,
                eps: required(args.eps, "eps", "werner")?,
            };
            spec.check()?;
            State::Werner(spec)
        }
        GenerateKind::Isotropic => {
            let spec = IsotropicSpec {
                d: required(args.d, "d", "isotropic")?,
                eps: required(args.eps, "eps", "isotropic")?,
            };
            spec.check()?;
            State::Isotropic(spec)
        }
        GenerateKind::WernerFamily => State::Family(embed_werner(
            required(args.d, "d", "werner_family")?,
            required(args.eps, "eps", "werner_family")?,
        )?),
        GenerateKind::Family => State::Family(sample_random(
            required(args.d_a, "dA", "family")?,
            required(args.d_b, "dB", "family")?,
            args.seed,
            args.bias,
        )?),
        GenerateKind::QubitQudit => {
            if let Some(d_a) = args.d_a.filter(|&d| d != 2) {
                return Err(CliError::Input(format!("qubit_qudit has dA = 2, got --dA {d_a}")));
            }
            State::QubitQudit(sample_qubit_qudit(
                required(args.d_b, "dB", "qubit_qudit")?,
                args.seed,
                args.bias,
            )?)
        }
    };
    Ok(state.to_document())
}

fn run(cli: Cli) -> CliResult<()> {
    let tol = cli.tol;
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(CliError::Input(format!(
            "--tol must be a non-negative number, got {tol}"
        )));
    }
    match cli.command {
        Command::Generate(args) => {
            let doc = generate(&args)?;
            write_output(&args.out, doc.to_json())
        }
        Command::Validate(args) => {
            let report = validate_document(&read_document(&args.input)?, tol)?;
            write_output(&args.out, to_json(&report))
        }
        Command::Analyze(args) => {
            let report = analyze(&read_document(&args.input)?, tol)?;
            write_output(&args.out, to_json(&report))
        }
        Command::Reorder(args) => {
            let report = reorder(&read_document(&args.input)?, tol)?;
            write_output(&args.out, to_json(&report))
        }
        Command::Sweep(args) => {
            let kind = match args.kind {
                SweepKindArg::Werner => SweepKind::Werner,
                SweepKindArg::Isotropic => SweepKind::Isotropic,
            };
            if args.d < 2 {
                return Err(CliError::Input(format!("sweep needs --d >= 2, got {}", args.d)));
            }
            let grid = match &args.eps_grid {
                Some(s) => s.parse::<EpsGrid>()?,
                None => EpsGrid::full_range(kind, args.d, 200),
            };
            let rows = sweep(kind, args.d, &grid, tol)?;
            write_output(&args.out, sweep_csv(&rows))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pptkit: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
