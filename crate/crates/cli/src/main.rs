mod document;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use osclat_core::classify::{
    canonical_table, check_compatible, classify, closed_form, orbit_partition, ClassifyOptions,
    FundamentalPoint, LatticeInput, PointClass, Xi,
};
use osclat_core::scalar::{AngleBase, AngleSymbol};
use osclat_core::verify::{run_all, run_all_with, VerifyConfig};
use osclat_core::OscError;

use document::{discriminant, Fields, InputError, SpecDocument};

#[derive(Parser)]
#[command(
    name = "osclat",
    version,
    about = "Exact classification of lattices in Osc1"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical data (r, lambda, (x, y), xi0) of a lattice file.
    Classify {
        file: PathBuf,
        /// Also print t0, the integer conjugator S and the time-reversal flag.
        #[arg(long)]
        trace: bool,
        #[arg(long, default_value_t = 12)]
        oracle_cutoff: u64,
    },
    /// Decide whether two lattice files are related by an automorphism.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 12)]
        oracle_cutoff: u64,
    },
    /// Print the canonical representatives for one (lambda, point, r).
    Table(CellArgs),
    /// Print the full orbit partition of the admissible xi for one cell.
    Orbits(CellArgs),
    /// Run the self-checks and report one line per check.
    Verify {
        #[arg(long, default_value_t = 12)]
        r_max: u64,
        #[arg(long, default_value_t = 12)]
        oracle_cutoff: u64,
        #[arg(long)]
        seed: Option<u64>,
        /// Check against a deliberately wrong table (negative control).
        #[arg(long, hide = true)]
        corrupt_table: bool,
    },
}

#[derive(Args)]
struct CellArgs {
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    #[arg(long, allow_hyphen_values = true)]
    y: String,
    #[arg(long)]
    r: u64,
}

enum Failure {
    Input(InputError),
    Verify,
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e)
    }
}

impl From<OscError> for Failure {
    fn from(e: OscError) -> Self {
        Failure::Input(InputError::Math(e))
    }
}

fn exit_code(e: &InputError) -> u8 {
    match e {
        InputError::Io(_) | InputError::Syntax(_) | InputError::Field(..) => 2,
        InputError::Math(e) if e.is_rejection() => 3,
        InputError::Math(e) => match e.root() {
            OscError::Parse(_)
            | OscError::DivisionByZero
            | OscError::InvalidDiscriminant(_)
            | OscError::DiscriminantMismatch(..)
            | OscError::InvalidStructure(_) => 2,
            _ => 4,
        },
    }
}

fn load(path: &PathBuf, fields: &Fields) -> Result<LatticeInput, Failure> {
    Ok(SpecDocument::load(path)?.to_input(fields)?)
}

fn cell(args: &CellArgs, fields: &Fields) -> Result<(AngleSymbol, FundamentalPoint), Failure> {
    let lambda = AngleSymbol::parse(&args.lambda).map_err(|e| match e {
        OscError::Parse(_) => InputError::Field("--lambda".into(), e),
        e => InputError::Math(e),
    })?;
    let x = fields.scalar("--x", &args.x)?;
    let y = fields.scalar("--y", &args.y)?;
    let point = FundamentalPoint::new(x, y).map_err(|e| InputError::Field("--x/--y".into(), e))?;
    if args.r == 0 {
        return Err(
            InputError::Field("--r".into(), OscError::Parse("r must be positive".into())).into(),
        );
    }
    Ok((lambda, point))
}

/// The true table with the even-r quarter-turn row cut short.
fn corrupted(lambda: AngleSymbol, class: PointClass, r: u64) -> Vec<Xi> {
    let mut reps = closed_form(lambda, class, r);
    if lambda.base == AngleBase::PiHalf && r % 2 == 0 {
        reps.pop();
    }
    reps
}

/// Writes one output line; a closed pipe is not an error.
fn emit(s: impl AsRef<str>) {
    let _ = writeln!(std::io::stdout().lock(), "{}", s.as_ref());
}

fn run(cli: Cli) -> Result<(), Failure> {
    let fields = Fields::new(discriminant()?);
    match cli.command {
        Command::Classify {
            file,
            trace,
            oracle_cutoff,
        } => {
            let input = load(&file, &fields)?;
            let c = classify(&input, &ClassifyOptions { oracle_cutoff })?;
            emit(output::line(&output::classification(&c, trace)));
        }
        Command::Compare {
            a,
            b,
            oracle_cutoff,
        } => {
            let opts = ClassifyOptions { oracle_cutoff };
            let da = classify(&load(&a, &fields)?, &opts)?.data;
            let db = classify(&load(&b, &fields)?, &opts)?.data;
            emit(if da == db {
                "equivalent"
            } else {
                "inequivalent"
            });
            emit(output::line(&output::data(&da)));
            emit(output::line(&output::data(&db)));
        }
        Command::Table(args) => {
            let (lambda, point) = cell(&args, &fields)?;
            for e in canonical_table(lambda, &point, args.r)? {
                emit(output::line(&output::table(&e)));
            }
        }
        Command::Orbits(args) => {
            let (lambda, point) = cell(&args, &fields)?;
            check_compatible(lambda, &point)?;
            let part = orbit_partition(args.r, &point.structure(lambda)?)?;
            for o in output::orbits(&part) {
                emit(output::line(&o));
            }
        }
        Command::Verify {
            r_max,
            oracle_cutoff,
            seed,
            corrupt_table,
        } => {
            let mut config = VerifyConfig {
                r_max: r_max.max(1),
                oracle_cutoff,
                ..VerifyConfig::default()
            };
            if let Some(s) = seed {
                config.seed = s;
            }
            let outcomes = if corrupt_table {
                run_all_with(&config, &corrupted)
            } else {
                run_all(&config)
            };
            for o in &outcomes {
                emit(output::line(&output::check(o)));
            }
            if outcomes.iter().any(|o| !o.passed) {
                return Err(Failure::Verify);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
