//! Command line front end for multigraded Koszul homology of monomial
//! ideals: Betti tables, single-point oracles, ideal classification,
//! random instance generation, and a benchmark harness.

mod bench;
mod render;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use koszul::families::FamilyError;
use koszul::linalg::is_prime;
use koszul::monomial::{format_ideal, parse_ideal, random_ideal, ParseError, RandomIdealError};
use koszul::oracle::{koszul_homology_dim, taylor_betti, OracleError};
use koszul::{betti_table, EngineError, ExponentVector, MonomialIdeal, Strategy};

#[derive(Parser)]
#[command(name = "koszul", version, about = "Multigraded Koszul homology of monomial ideals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the multigraded Betti table of an ideal
    Betti {
        /// Ideal file (ring/gen/mon directives)
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
        strategy: StrategyArg,
        /// Field characteristic (a prime)
        #[arg(long = "char", default_value_t = 32003)]
        characteristic: u64,
        /// Emit structured JSON instead of text
        #[arg(long)]
        json: bool,
        /// Append the statistics block to the text output
        #[arg(long)]
        stats: bool,
    },
    /// Betti number at one (degree, multidegree) from the Koszul complex
    Oracle {
        file: PathBuf,
        /// Multidegree as comma-separated exponents, e.g. 1,0,2
        #[arg(long)]
        multidegree: String,
        /// Homological degree i
        #[arg(long)]
        degree: usize,
        /// Cross-check against the Taylor complex
        #[arg(long)]
        taylor: bool,
        #[arg(long = "char", default_value_t = 32003)]
        characteristic: u64,
    },
    /// Report genericity, quasi-stability, Scarf faces, and lattice size
    Classify {
        file: PathBuf,
        /// Degree bound for the involutive completion (default: twice the
        /// largest generator degree plus the number of variables)
        #[arg(long)]
        bound: Option<u32>,
    },
    /// Generate a random ideal with exactly g minimal generators
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        g: usize,
        #[arg(long = "min-deg")]
        min_deg: u32,
        #[arg(long = "max-deg")]
        max_deg: u32,
        #[arg(long)]
        seed: u64,
        /// Write the ideal file here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the benchmark harness over a file of parameter rows
    Bench {
        /// CSV of rows n,g,min_deg,max_deg; '#' comments and an optional
        /// header line are allowed
        #[arg(long = "spec")]
        rows: PathBuf,
        /// Run seeds 1..=k for every row
        #[arg(long)]
        seeds: u64,
        #[arg(long, value_enum, default_value_t = StrategyArg::Auto)]
        strategy: StrategyArg,
        #[arg(long = "char", default_value_t = 32003)]
        characteristic: u64,
        /// Write 0 in the time_ms column so reruns are byte-identical
        #[arg(long = "omit-timing")]
        omit_timing: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Auto,
    Simplicial,
    Mv,
    Scarf,
}

impl StrategyArg {
    fn name(self) -> &'static str {
        match self {
            StrategyArg::Auto => "auto",
            StrategyArg::Simplicial => "simplicial",
            StrategyArg::Mv => "mv",
            StrategyArg::Scarf => "scarf",
        }
    }
}

impl From<StrategyArg> for Strategy {
    fn from(arg: StrategyArg) -> Strategy {
        match arg {
            StrategyArg::Auto => Strategy::Auto,
            StrategyArg::Simplicial => Strategy::Simplicial,
            StrategyArg::Mv => Strategy::Mv,
            StrategyArg::Scarf => Strategy::Scarf,
        }
    }
}

/// Failures sorted by exit code: 2 for unreadable or invalid input, 3 for
/// infeasible parameters and exceeded caps, 4 for violated internal
/// invariants.
#[derive(Debug)]
enum CliError {
    Input(String),
    Infeasible(String),
    Invariant(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::Invariant(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(msg) | CliError::Infeasible(msg) | CliError::Invariant(msg) => {
                f.write_str(msg)
            }
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<RandomIdealError> for CliError {
    fn from(e: RandomIdealError) -> Self {
        CliError::Infeasible(e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::GeneratorCapExceeded { .. } => CliError::Infeasible(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<FamilyError> for CliError {
    fn from(e: FamilyError) -> Self {
        CliError::Infeasible(e.to_string())
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::CharacteristicNotPrime { .. } => CliError::Input(e.to_string()),
            EngineError::Family(_) => CliError::Infeasible(e.to_string()),
            EngineError::SplitUnavailable { .. } | EngineError::EulerViolation { .. } => {
                CliError::Invariant(e.to_string())
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::Betti { file, strategy, characteristic, json, stats } => {
            let ideal = read_ideal(&file)?;
            let table = betti_table(&ideal, strategy.into(), characteristic)?;
            if json {
                println!("{}", render::betti_json(&ideal, &table, strategy.name()));
            } else {
                print!("{}", render::betti_text(&ideal, &table, strategy.name(), stats));
            }
            Ok(())
        }
        Command::Oracle { file, multidegree, degree, taylor, characteristic } => {
            if !is_prime(characteristic) {
                return Err(CliError::Input(format!(
                    "characteristic {characteristic} is not prime"
                )));
            }
            let ideal = read_ideal(&file)?;
            let a = parse_multidegree(&multidegree, ideal.num_vars())?;
            let koszul_dim = koszul_homology_dim(&ideal, &a, degree, characteristic);
            println!("i={} a={}", degree, render::multidegree(&a));
            println!("koszul: {koszul_dim}");
            if taylor {
                let taylor_dim = taylor_betti(&ideal, degree, &a, characteristic)?;
                println!("taylor: {taylor_dim}");
                if taylor_dim != koszul_dim {
                    return Err(CliError::Invariant(format!(
                        "oracle disagreement at i={} a={}: koszul {} vs taylor {}",
                        degree,
                        render::multidegree(&a),
                        koszul_dim,
                        taylor_dim
                    )));
                }
            }
            Ok(())
        }
        Command::Classify { file, bound } => {
            let ideal = read_ideal(&file)?;
            print!("{}", render::classify_text(&ideal, bound)?);
            Ok(())
        }
        Command::Random { n, g, min_deg, max_deg, seed, out } => {
            let ideal = random_ideal(n, g, min_deg, max_deg, seed)?;
            let text = format_ideal(&ideal);
            match out {
                Some(path) => fs::write(&path, text).map_err(|e| {
                    CliError::Input(format!("cannot write {}: {e}", path.display()))
                })?,
                None => print!("{text}"),
            }
            Ok(())
        }
        Command::Bench { rows, seeds, strategy, characteristic, omit_timing } => {
            if !is_prime(characteristic) {
                return Err(CliError::Input(format!(
                    "characteristic {characteristic} is not prime"
                )));
            }
            let text = fs::read_to_string(&rows).map_err(|e| {
                CliError::Input(format!("cannot read {}: {e}", rows.display()))
            })?;
            let params = bench::parse_rows(&text)?;
            let records =
                bench::run(&params, seeds, strategy.into(), characteristic, omit_timing);
            print!("{}", bench::render_csv(&records));
            if records.iter().any(|r| r.status == bench::Status::Error) {
                return Err(CliError::Invariant(
                    "one or more rows failed with an internal error".into(),
                ));
            }
            Ok(())
        }
    }
}

/// `KOSZUL_THREADS` caps the evaluation pool; 0 or unset picks the
/// default.
fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("KOSZUL_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().map_err(|_| {
        CliError::Input(format!("KOSZUL_THREADS must be a non-negative integer, got {raw:?}"))
    })?;
    if threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Input(format!("cannot configure thread pool: {e}")))?;
    }
    Ok(())
}

fn read_ideal(path: &Path) -> Result<MonomialIdeal, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_ideal(&text)?)
}

fn parse_multidegree(raw: &str, expected: usize) -> Result<ExponentVector, CliError> {
    let trimmed = raw.trim().trim_start_matches('(').trim_end_matches(')');
    let exps: Vec<u32> = trimmed
        .split(',')
        .map(|field| field.trim().parse())
        .collect::<Result<_, _>>()
        .map_err(|_| {
            CliError::Input(format!(
                "invalid multidegree {raw:?}; expected comma-separated exponents"
            ))
        })?;
    if exps.len() != expected {
        return Err(CliError::Input(format!(
            "multidegree has {} entries, the ideal lives in {} variables",
            exps.len(),
            expected
        )));
    }
    Ok(ExponentVector::new(exps))
}
