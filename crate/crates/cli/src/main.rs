//! `dmf`: traces of Hecke operators on Drinfeld cusp forms of level 1.
//!
//! Exit codes: 0 success, 2 invalid input, 3 n·deg ℘ above the cap,
//! 4 dimension at least p without `--fallback`, 1 internal error.

mod commands;
mod config;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dmf_core::traces::DEFAULT_CAP;
use dmf_core::Error;

use commands::{CmdError, CmdResult, Query, ScanKind};
use config::{parse_prime, FieldSpec, Format, UsageError, WeightRange};

#[derive(Parser, Debug)]
#[command(name = "dmf", version, about = "Traces, spectra and isogeny counts for Drinfeld cusp forms of level 1")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct FieldArgs {
    /// Field order q, or a comma-separated list for `table`
    #[arg(long, value_delimiter = ',')]
    q: Vec<u64>,
    /// Characteristic p (alternative to --q)
    #[arg(long)]
    p: Option<u32>,
    /// Degree r of F_q over F_p (with --p)
    #[arg(long)]
    r: Option<u32>,
    /// Defining polynomial of F_q over F_p in x, e.g. x^2+2x+2
    #[arg(long)]
    modulus: Option<String>,
}

impl FieldArgs {
    fn spec(&self) -> FieldSpec {
        FieldSpec {
            q: self.q.clone(),
            p: self.p,
            r: self.r,
            modulus: self.modulus.clone(),
        }
    }
}

#[derive(Args, Debug, Clone)]
struct QueryArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Monic irreducible ℘ in T
    #[arg(long, default_value = "T")]
    prime: String,
    /// Power n of the Hecke operator T_℘ⁿ
    #[arg(long, default_value_t = 1)]
    n: u32,
    /// Type l
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    l: i64,
    /// Largest n·deg ℘ accepted by the general algorithm
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u32,
    /// Worker threads (default: all cores)
    #[arg(long)]
    jobs: Option<usize>,
    /// Output format
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug, Clone)]
struct WeightArgs {
    /// Single weight k
    #[arg(long, conflicts_with = "k_range")]
    k: Option<u64>,
    /// Inclusive weight range A..B or A..B:STEP
    #[arg(long)]
    k_range: Option<WeightRange>,
}

impl WeightArgs {
    fn weights(&self) -> Result<Vec<u64>, UsageError> {
        match (&self.k, &self.k_range) {
            (Some(k), _) => Ok(vec![*k]),
            (None, Some(r)) => Ok(r.weights()),
            (None, None) => Err(UsageError("a weight is required: pass --k or --k-range".into())),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Trace of T_℘ⁿ on S_{k,l}
    Trace {
        #[command(flatten)]
        query: QueryArgs,
        #[command(flatten)]
        weights: WeightArgs,
        /// Report the trace of the unscaled operator (times ℘ⁿ)
        #[arg(long)]
        unscaled: bool,
    },
    /// Table of traces: rows are weights, columns are fields or primes
    Table {
        #[command(flatten)]
        query: QueryArgs,
        #[command(flatten)]
        weights: WeightArgs,
        #[arg(long)]
        unscaled: bool,
    },
    /// Full Weil-class census with #Iso mod p
    Census {
        #[command(flatten)]
        query: QueryArgs,
    },
    /// #Iso(a, b) mod p for one Weil pair
    Iso {
        #[command(flatten)]
        query: QueryArgs,
        /// Coefficient a in A
        #[arg(long)]
        a: String,
        /// Coefficient b in F_q^×
        #[arg(long)]
        b: String,
    },
    /// Characteristic polynomial, repeated-eigenvalue test and slopes
    Spectrum {
        #[command(flatten)]
        query: QueryArgs,
        #[command(flatten)]
        weights: WeightArgs,
        /// Use Berlekamp–Massey when dim >= p
        #[arg(long)]
        fallback: bool,
    },
    /// Newton-polygon slopes at ∞ and at ℘
    Slopes {
        #[command(flatten)]
        query: QueryArgs,
        #[command(flatten)]
        weights: WeightArgs,
        #[arg(long)]
        fallback: bool,
    },
    /// Scans over weights, emitted as JSON reports
    Scan {
        #[command(flatten)]
        query: QueryArgs,
        #[command(flatten)]
        weights: WeightArgs,
        #[arg(long, value_enum, default_value_t = ScanKind::Conjectures)]
        kind: ScanKind,
        /// Skip characteristic polynomials in the conjecture scan
        #[arg(long)]
        no_spectra: bool,
    },
    /// CSV of k, deg_trace, strong_bound, log_distance
    Figure {
        #[command(flatten)]
        query: QueryArgs,
        #[command(flatten)]
        weights: WeightArgs,
    },
}

impl Command {
    fn query_args(&self) -> &QueryArgs {
        match self {
            Command::Trace { query, .. }
            | Command::Table { query, .. }
            | Command::Census { query }
            | Command::Iso { query, .. }
            | Command::Spectrum { query, .. }
            | Command::Slopes { query, .. }
            | Command::Scan { query, .. }
            | Command::Figure { query, .. } => query,
        }
    }
}

fn single_query(a: &QueryArgs, unscaled: bool) -> Result<Query, CmdError> {
    let field = a.field.spec().field()?;
    let prime = parse_prime(&field, &a.prime)?;
    if a.n == 0 {
        return Err(CmdError::Usage("--n must be at least 1".into()));
    }
    Ok(Query {
        field,
        prime,
        n: a.n,
        l: a.l,
        cap: a.cap,
        unscaled,
    })
}

fn run(cmd: &Command) -> CmdResult {
    let qa = cmd.query_args();
    let fmt = |default: Format| qa.format.unwrap_or(default);
    match cmd {
        Command::Trace { weights, unscaled, .. } => {
            commands::cmd_trace(&single_query(qa, *unscaled)?, &weights.weights()?, fmt(Format::Text))
        }
        Command::Table { weights, unscaled, .. } => {
            if qa.n == 0 {
                return Err(CmdError::Usage("--n must be at least 1".into()));
            }
            let fields = qa.field.spec().fields()?;
            let cols = commands::table_columns(&fields, &qa.prime, qa.n, qa.l, qa.cap, *unscaled)?;
            commands::cmd_table(&cols, &weights.weights()?, fmt(Format::Csv))
        }
        Command::Census { .. } => commands::cmd_census(&single_query(qa, false)?, fmt(Format::Csv)),
        Command::Iso { a, b, .. } => commands::cmd_iso(&single_query(qa, false)?, a, b, fmt(Format::Text)),
        Command::Spectrum { weights, fallback, .. } => {
            commands::cmd_spectrum(&single_query(qa, false)?, &weights.weights()?, *fallback, fmt(Format::Json))
        }
        Command::Slopes { weights, fallback, .. } => {
            commands::cmd_slopes(&single_query(qa, false)?, &weights.weights()?, *fallback, fmt(Format::Json))
        }
        Command::Scan { weights, kind, no_spectra, .. } => {
            let ks = if *kind == ScanKind::RamSuff { Vec::new() } else { weights.weights()? };
            commands::cmd_scan(&single_query(qa, false)?, &ks, *kind, !no_spectra)
        }
        Command::Figure { weights, .. } => {
            commands::cmd_figure(&single_query(qa, false)?, &weights.weights()?, fmt(Format::Csv))
        }
    }
}

/// Exit code and one-line message for a failure.
fn report(e: &CmdError) -> (u8, String) {
    match e {
        CmdError::Usage(m) => (2, m.clone()),
        CmdError::Core(e @ Error::CapExceeded { .. }) => (3, format!("{e}; raise it with --cap")),
        CmdError::Core(e @ Error::DimensionAtLeastP { .. }) => {
            (4, format!("{e}; pass --fallback for the Berlekamp–Massey recurrence"))
        }
        CmdError::Core(
            e @ (Error::NonPrimeCharacteristic(_)
            | Error::ReducibleModulus(_)
            | Error::ModulusDegree { .. }
            | Error::FieldTooLarge(_)
            | Error::EvenCharacteristic
            | Error::OddCharacteristic
            | Error::ZeroPolynomial
            | Error::NotIrreducible(_)
            | Error::NotMonic(_)
            | Error::WrongDegree(_)
            | Error::RangeViolation(_)
            | Error::Parse(_)),
        ) => (2, e.to_string()),
        CmdError::Core(e) => (1, format!("internal error: {e}")),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.command.query_args().jobs {
        if j == 0 {
            eprintln!("error: --jobs must be positive");
            return ExitCode::from(2);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .expect("the global pool is configured once at startup");
    }
    match run(&cli.command) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let (code, msg) = report(&e);
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
