//! `hecketree`: multiplication tables, oracle verification sweeps, the ν map
//! for SL2(Q_p) and K-theory reports.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 invalid input.

mod families;
mod reports;
mod verify;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hecketree::tree::DEFAULT_MAX_BALL_VERTICES;

#[derive(Parser)]
#[command(
    name = "hecketree",
    version,
    about = "Hecke algebras of groups acting on trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a multiplication table, one record per product.
    Table {
        #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
        format: Format,
        #[command(subcommand)]
        sweep: Sweep,
    },
    /// Multiply two basis elements.
    Mul {
        #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
        format: Format,
        #[command(subcommand)]
        family: MulFamily,
    },
    /// Check every product in a sweep against an independent computation.
    Verify {
        /// Refuse to build tree balls larger than this.
        #[arg(long, default_value_t = DEFAULT_MAX_BALL_VERTICES, global = true)]
        max_ball_vertices: usize,
        #[command(subcommand)]
        sweep: Sweep,
    },
    /// Truncated direct limit of a Bratteli diagram, with PV groups when the
    /// diagram carries an `alpha` matrix.
    Ktheory {
        /// Diagram in JSON: {"levels": [...], "maps": [...], "alpha": ...}.
        #[arg(required_unless_present = "example", conflicts_with = "example")]
        path: Option<PathBuf>,
        #[arg(long, value_enum)]
        example: Option<Example>,
        /// Last level of the truncation (default: the last level given).
        #[arg(long)]
        levels: Option<usize>,
    },
    /// Double cosets of SL2(Z_p)-type end stabilizers via the ν map, with
    /// their multiplication table.
    Nu {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        depth: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Example {
    Toeplitz,
}

#[derive(Args, Clone)]
pub struct SphericalArgs {
    /// Homogeneous tree of valency q+1.
    #[arg(long, conflicts_with_all = ["q0", "q1"], required_unless_present_all = ["q0", "q1"])]
    pub q: Option<u64>,
    /// Semi-homogeneous tree: valency q0+1 at even vertices.
    #[arg(long, requires = "q1")]
    pub q0: Option<u64>,
    /// Valency q1+1 at odd vertices.
    #[arg(long, requires = "q0")]
    pub q1: Option<u64>,
}

#[derive(Args, Clone)]
pub struct IwahoriArgs {
    #[arg(long)]
    pub qs: u64,
    #[arg(long)]
    pub qt: u64,
}

#[derive(Subcommand, Clone)]
pub enum Sweep {
    Spherical {
        #[command(flatten)]
        params: SphericalArgs,
        /// Largest index n of Γ_n (Γ_{2n} for a two-orbit tree).
        #[arg(long, default_value_t = 3)]
        max: u32,
    },
    Iwahori {
        #[command(flatten)]
        params: IwahoriArgs,
        /// Longest reduced word.
        #[arg(long, default_value_t = 2)]
        len: u32,
        /// Include the words decorated by the edge inversion i.
        #[arg(long)]
        extended: bool,
    },
    Affine {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 3)]
        max: u32,
        /// Products of Toeplitz monomials [s]^a[s*]^b with a, b ≤ max
        /// instead of the M_n table.
        #[arg(long)]
        normal_form: bool,
        /// Emit each product of the M_n table as an eventually constant
        /// sequence (JSON only).
        #[arg(long, conflicts_with = "normal_form")]
        sequences: bool,
    },
    Sl2 {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        depth: u32,
    },
}

#[derive(Subcommand)]
pub enum MulFamily {
    Spherical {
        #[command(flatten)]
        params: SphericalArgs,
        left: String,
        right: String,
    },
    Iwahori {
        #[command(flatten)]
        params: IwahoriArgs,
        left: String,
        right: String,
    },
    /// Labels are `M<n>` or Toeplitz monomials such as `[s]^2[s*]^1`.
    Affine {
        #[arg(long)]
        q: u64,
        left: String,
        right: String,
    },
    Sl2 {
        #[arg(long)]
        p: u64,
        left: String,
        right: String,
    },
}

/// A user-facing failure; always exit code 2.
#[derive(Debug)]
pub struct Invalid(pub String);

impl<E: std::fmt::Display> From<E> for Invalid {
    fn from(e: E) -> Self {
        Invalid(e.to_string())
    }
}

fn configure_threads() -> Result<(), Invalid> {
    let Ok(raw) = std::env::var("HECKETREE_THREADS") else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Invalid(format!(
            "HECKETREE_THREADS must be a positive integer, got `{raw}`"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()?;
    Ok(())
}

fn emit(out: &mut impl Write, text: &str) -> Result<(), Invalid> {
    out.write_all(text.as_bytes())?;
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, Invalid> {
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let code = match cli.command {
        Command::Table {
            format,
            sweep:
                Sweep::Affine {
                    q,
                    max,
                    sequences: true,
                    ..
                },
        } => {
            if matches!(format, Format::Csv) {
                return Err(Invalid("--sequences is JSON only".into()));
            }
            emit(&mut out, &families::sequence_table(q, max)?)?;
            ExitCode::SUCCESS
        }
        Command::Table { format, sweep } => {
            let records = families::table(&sweep)?;
            emit(&mut out, &families::render(&records, format))?;
            ExitCode::SUCCESS
        }
        Command::Mul { format, family } => {
            let record = families::mul(&family)?;
            emit(&mut out, &families::render(&[record], format))?;
            ExitCode::SUCCESS
        }
        Command::Verify {
            max_ball_vertices,
            sweep,
        } => {
            configure_threads()?;
            let report = verify::run(&sweep, max_ball_vertices)?;
            emit(&mut out, &serde_json::to_string_pretty(&report)?)?;
            emit(&mut out, "\n")?;
            if report.mismatches.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::Ktheory {
            path,
            example,
            levels,
        } => {
            let report = match (path, example) {
                (_, Some(Example::Toeplitz)) => reports::toeplitz(levels.unwrap_or(6))?,
                (Some(path), None) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Invalid(format!("{}: {e}", path.display())))?;
                    reports::ktheory(&text, levels)?
                }
                (None, None) => unreachable!("clap requires a path or an example"),
            };
            emit(&mut out, &serde_json::to_string_pretty(&report)?)?;
            emit(&mut out, "\n")?;
            ExitCode::SUCCESS
        }
        Command::Nu { p, depth } => {
            let report = reports::nu(p, depth)?;
            emit(&mut out, &serde_json::to_string_pretty(&report)?)?;
            emit(&mut out, "\n")?;
            ExitCode::SUCCESS
        }
    };
    out.flush()?;
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
