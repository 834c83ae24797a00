//! The `dbrepair` command line.
//!
//! Every command reads one or more problem files, merges them into a single
//! database and works on the merged result. Reports go to `out`,
//! diagnostics to `err`.
//!
//! Exit codes: 0 success (or consistent, for `check`), 1 inconsistent,
//! 2 usage, input or other error, 3 the merged constraints are unsatisfiable,
//! 4 the node budget ran out.

pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dbrepair::{
    brute_force_preferred_bounded, is_consistent, maximally_consistent, merge, parse_problem,
    preferred_repairs, Database, Error, PreferenceCriterion, SearchLimits, DEFAULT_ORACLE_BOUND,
};

pub use report::{RepairEntry, RepairReport, Status};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INCONSISTENT: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_IC_CONFLICT: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "dbrepair", version, about = "Merge and repair databases under integrity constraints")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exit 0 if the merged database satisfies its constraints, 1 if not.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Compute the preferred repairs.
    Repair(RepairArgs),
    /// List the maximally consistent three-valued models.
    Models {
        #[arg(long, value_enum, default_value_t = Criterion::Inclusion)]
        criterion: Criterion,
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Like `repair`, by exhaustive enumeration.
    Oracle {
        #[command(flatten)]
        args: RepairArgs,
        /// Refuse inputs whose candidate universe has more atoms than this.
        #[arg(long, default_value_t = DEFAULT_ORACLE_BOUND)]
        oracle_bound: usize,
    },
}

#[derive(Args, Debug)]
struct RepairArgs {
    #[arg(long, value_enum, default_value_t = Criterion::Inclusion)]
    criterion: Criterion,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    max_solutions: Option<usize>,
    #[arg(long, default_value_t = SearchLimits::default().node_budget)]
    node_budget: u64,
    #[arg(required = true)]
    files: Vec<PathBuf>,
}

impl RepairArgs {
    fn limits(&self) -> SearchLimits {
        SearchLimits {
            max_solutions: self.max_solutions,
            node_budget: self.node_budget,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Criterion {
    Inclusion,
    Cardinality,
}

impl From<Criterion> for PreferenceCriterion {
    fn from(c: Criterion) -> Self {
        match c {
            Criterion::Inclusion => PreferenceCriterion::Inclusion,
            Criterion::Cardinality => PreferenceCriterion::Cardinality,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// Failure of a command, already mapped to its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::IcConflict | Error::NoRepairPossible | Error::NoModel => EXIT_IC_CONFLICT,
            Error::BudgetExhausted { .. } => EXIT_BUDGET,
            _ => EXIT_ERROR,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// Parses each file and merges the results.
fn load_or_fail(files: &[PathBuf]) -> Result<Database, Failure> {
    let mut sources = Vec::with_capacity(files.len());
    for path in files {
        let text = std::fs::read_to_string(path).map_err(|e| Failure {
            code: EXIT_ERROR,
            message: format!("{}: {e}", path.display()),
        })?;
        let db = parse_problem(&text).map_err(|e| Failure {
            code: EXIT_ERROR,
            message: format!("{}:{e}", path.display()),
        })?;
        sources.push(db);
    }
    Ok(merge(&sources)?)
}

/// Runs the command line `args` (program name first) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_ERROR
            } else {
                let _ = write!(out, "{rendered}");
                EXIT_OK
            };
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "dbrepair: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Check { files } => {
            let db = load_or_fail(&files)?;
            if is_consistent(&db) {
                emit(out, "consistent\n")?;
                Ok(EXIT_OK)
            } else {
                emit(out, "inconsistent\n")?;
                Ok(EXIT_INCONSISTENT)
            }
        }
        Command::Repair(args) => {
            let db = load_or_fail(&args.files)?;
            let criterion = args.criterion.into();
            match preferred_repairs(&db, criterion, args.limits()) {
                Ok(repairs) => {
                    report(out, &db, criterion, &repairs, false, args.format)?;
                    Ok(EXIT_OK)
                }
                Err(Error::BudgetExhausted { budget, partial }) => {
                    report(out, &db, criterion, &partial, true, args.format)?;
                    Err(Error::BudgetExhausted { budget, partial }.into())
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Oracle { args, oracle_bound } => {
            let db = load_or_fail(&args.files)?;
            let criterion = args.criterion.into();
            let mut repairs = brute_force_preferred_bounded(&db, criterion, oracle_bound)?;
            if let Some(n) = args.max_solutions {
                repairs.truncate(n);
            }
            report(out, &db, criterion, &repairs, false, args.format)?;
            Ok(EXIT_OK)
        }
        Command::Models { criterion, files } => {
            let db = load_or_fail(&files)?;
            let models = maximally_consistent(&db, criterion.into())?;
            let blocks: Vec<String> = models
                .iter()
                .map(|n| {
                    n.iter()
                        .map(|(atom, v)| format!("{atom}:{}\n", v.symbol()))
                        .collect()
                })
                .collect();
            emit(out, &blocks.join("\n"))?;
            Ok(EXIT_OK)
        }
    }
}

fn report(
    out: &mut dyn Write,
    db: &Database,
    criterion: PreferenceCriterion,
    repairs: &[dbrepair::Repair],
    partial: bool,
    format: Format,
) -> Result<(), Failure> {
    let r = RepairReport::new(db, criterion, repairs, partial)?;
    match format {
        Format::Json => emit(out, &r.to_json()),
        Format::Text => emit(out, &r.to_text()),
    }
}

fn emit(out: &mut dyn Write, s: &str) -> Result<(), Failure> {
    out.write_all(s.as_bytes()).map_err(|e| Failure {
        code: EXIT_ERROR,
        message: format!("writing output: {e}"),
    })
}
