use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fqcensus::commands::{self, FormulaArgs, FormulaName, Problem, RunOptions, EXIT_USAGE};
use fqcensus::report::{write_reports, CensusReport, Format};
use fqcensus::{Error, FieldCtx, Result};

/// Exhaustive counts over finite fields checked against closed forms.
///
/// Exit status: 0 when every check agrees, 1 on usage or budget errors,
/// 2 when a mathematical mismatch was found.
#[derive(Parser)]
#[command(name = "fqcensus", version)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: FormatArg,
    /// Worker threads (defaults to the available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Largest search space any single enumeration may visit.
    #[arg(long, global = true, default_value_t = fqcensus::census::DEFAULT_BUDGET)]
    budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Args)]
struct FieldArgs {
    /// Field size, a prime power.
    #[arg(long)]
    q: u64,
    /// Defining polynomial, coefficients low to high (e.g. "1,1,1" for x^2+x+1).
    #[arg(long, value_delimiter = ',')]
    modulus: Option<Vec<u32>>,
}

impl FieldArgs {
    fn field(&self) -> Result<FieldCtx> {
        commands::field_for_q(self.q, self.modulus.as_deref())
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a closed form.
    Formula {
        #[arg(value_enum)]
        name: FormulaArg,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        l: Option<usize>,
        /// Evaluate tau through its recurrence.
        #[arg(long)]
        recurrence: bool,
    },
    /// Count one problem exhaustively and compare with the closed form.
    Count {
        #[arg(value_enum)]
        problem: ProblemArg,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
    },
    /// Run a verification suite over a range of parameters.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        field: FieldArgs,
        /// Largest ambient dimension (equivalence, duality, sigma, recurrence).
        #[arg(long)]
        max_n: Option<usize>,
        /// Largest k (tau, recurrence).
        #[arg(long)]
        max_k: Option<usize>,
        /// Single duality case.
        #[arg(long, requires = "k")]
        n: Option<usize>,
        #[arg(long, requires = "n")]
        k: Option<usize>,
    },
    /// Measure the unimodular fraction of a polynomial family.
    Conjecture {
        /// Field size for a single case.
        #[arg(long, required_unless_present = "sweep")]
        q: Option<u64>,
        #[arg(long, value_delimiter = ',', requires = "q")]
        modulus: Option<Vec<u32>>,
        #[arg(long, required_unless_present = "sweep")]
        n: Option<usize>,
        #[arg(long, required_unless_present = "sweep")]
        k: Option<usize>,
        #[arg(long, required_unless_present = "sweep")]
        m: Option<usize>,
        /// Run every case with q^(nkm) <= --limit for each of --qs.
        #[arg(long, conflicts_with_all = ["q", "n", "k", "m"])]
        sweep: bool,
        #[arg(long, value_delimiter = ',', default_value = "2,3,4,5")]
        qs: Vec<u64>,
        #[arg(long, default_value_t = 1 << 20)]
        limit: u64,
    },
    /// Table of all four counts for every in-budget (q, n, k).
    Census {
        #[arg(long, value_delimiter = ',', required = true)]
        qs: Vec<u64>,
        #[arg(long)]
        max_n: usize,
        /// Write to this file instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormulaArg {
    Psi,
    Sigma,
    Tau,
    Mu,
    Gauss,
    Gl,
    Delta,
}

impl From<FormulaArg> for FormulaName {
    fn from(f: FormulaArg) -> Self {
        match f {
            FormulaArg::Psi => FormulaName::Psi,
            FormulaArg::Sigma => FormulaName::Sigma,
            FormulaArg::Tau => FormulaName::Tau,
            FormulaArg::Mu => FormulaName::Mu,
            FormulaArg::Gauss => FormulaName::Gauss,
            FormulaArg::Gl => FormulaName::Gl,
            FormulaArg::Delta => FormulaName::Delta,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ProblemArg {
    Completable,
    Pencil,
    Reachable,
    Simple,
}

impl From<ProblemArg> for Problem {
    fn from(p: ProblemArg) -> Self {
        match p {
            ProblemArg::Completable => Problem::Completable,
            ProblemArg::Pencil => Problem::Pencil,
            ProblemArg::Reachable => Problem::Reachable,
            ProblemArg::Simple => Problem::Simple,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Equivalence,
    Duality,
    Sigma,
    Tau,
    Recurrence,
}

fn missing(flag: &str, suite: &str) -> Error {
    Error::InvalidArgument(format!("verify {suite} needs --{flag}"))
}

fn run_verify(
    suite: Suite,
    field: &FieldCtx,
    max_n: Option<usize>,
    max_k: Option<usize>,
    single: Option<(usize, usize)>,
    opts: RunOptions,
) -> Result<Vec<CensusReport>> {
    match suite {
        Suite::Equivalence => commands::verify_equivalence(field, max_n.ok_or_else(|| missing("max-n", "equivalence"))?, opts),
        Suite::Duality => {
            let cells = match (single, max_n) {
                (Some(cell), _) => {
                    if cell.1 == 0 || cell.1 >= cell.0 {
                        return Err(Error::InvalidArgument(format!("need 1 <= k < n, got n={}, k={}", cell.0, cell.1)));
                    }
                    vec![cell]
                }
                (None, Some(m)) => commands::proper_cells(m),
                (None, None) => return Err(missing("max-n or --n/--k", "duality")),
            };
            commands::verify_duality(field, &cells, opts)
        }
        Suite::Sigma => commands::verify_sigma(field, max_n.ok_or_else(|| missing("max-n", "sigma"))?, opts),
        Suite::Tau => commands::verify_tau(field, max_k.ok_or_else(|| missing("max-k", "tau"))?, opts),
        Suite::Recurrence => {
            commands::verify_recurrence(field, max_k.ok_or_else(|| missing("max-k", "recurrence"))?, max_n.unwrap_or(12))
        }
    }
}

fn fields_for(qs: &[u64]) -> Result<Vec<FieldCtx>> {
    qs.iter().map(|&q| commands::field_for_q(q, None)).collect()
}

fn run(cli: Cli) -> Result<Vec<CensusReport>> {
    let opts = RunOptions { jobs: cli.jobs.unwrap_or_else(fqcensus::parallel::default_jobs).max(1), budget: cli.budget };
    match cli.command {
        Command::Formula { name, field, n, k, l, recurrence } => {
            Ok(vec![commands::cmd_formula(name.into(), &field.field()?, FormulaArgs { n, k, l, recurrence })?])
        }
        Command::Count { problem, field, n, k } => Ok(vec![commands::cmd_count(problem.into(), &field.field()?, n, k, opts)?]),
        Command::Verify { suite, field, max_n, max_k, n, k } => {
            run_verify(suite, &field.field()?, max_n, max_k, n.zip(k), opts)
        }
        Command::Conjecture { q, modulus, n, k, m, sweep, qs, limit } => {
            if sweep {
                return commands::conjecture_sweep(&fields_for(&qs)?, limit, opts.jobs);
            }
            let field = commands::field_for_q(q.expect("required"), modulus.as_deref())?;
            Ok(vec![commands::cmd_conjecture(&field, n.expect("required"), k.expect("required"), m.expect("required"), opts)?])
        }
        Command::Census { qs, max_n, .. } => commands::cmd_census(&fields_for(&qs)?, max_n, opts),
    }
}

fn emit(reports: &[CensusReport], format: Format, out: Option<&PathBuf>) -> io::Result<()> {
    match out {
        Some(path) => write_reports(BufWriter::new(File::create(path)?), reports, format),
        None => write_reports(io::stdout().lock(), reports, format),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    let format = match cli.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    let out = match &cli.command {
        Command::Census { out, .. } => out.clone(),
        _ => None,
    };
    match run(cli) {
        Ok(reports) => {
            if let Err(e) = emit(&reports, format, out.as_ref()) {
                eprintln!("error: cannot write report: {e}");
                return ExitCode::from(EXIT_USAGE as u8);
            }
            for r in reports.iter().filter(|r| r.skipped.is_some()) {
                eprintln!("skipped {}: {}", r.command, r.skipped.as_deref().unwrap_or_default());
            }
            ExitCode::from(commands::exit_code(&reports) as u8)
        }
        Err(e) => {
            let _ = io::stdout().flush();
            eprintln!("error: {e}");
            ExitCode::from(commands::error_exit_code(&e) as u8)
        }
    }
}
