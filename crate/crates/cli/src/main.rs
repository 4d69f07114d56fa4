//! Command-line front end: read a spec file, run one analysis, print the
//! result. Exit codes: 0 success, 1 bad arguments, 2 unreadable or invalid
//! spec file, 3 domain errors.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use valgraph_cli::commands::{self, CommandError, OutputMode};
use valgraph_cli::format::SpecFile;
use valgraph_core::spec::ValuationSpec;

#[derive(Parser)]
#[command(
    name = "valgraph",
    about = "Dual graphs, blowup traces and value semigroups of plane valuations",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

impl From<Output> for OutputMode {
    fn from(o: Output) -> Self {
        match o {
            Output::Text => OutputMode::Text,
            Output::Json => OutputMode::Json,
        }
    }
}

#[derive(Args)]
struct SpecArg {
    /// Path to the JSON spec file.
    spec: PathBuf,
    /// Output format.
    #[arg(long, value_enum, default_value = "text")]
    output: Output,
}

#[derive(Subcommand)]
enum Command {
    /// Type classification: rank, rational rank, residue degree, value group.
    Classify {
        #[command(flatten)]
        spec: SpecArg,
    },
    /// Blowup trace: per-level parameter values and substitutions.
    Trace {
        #[command(flatten)]
        spec: SpecArg,
        /// Number of blowups (default: the full sequence for divisorial
        /// specs, the spec's depth otherwise).
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Dual graph in DOT format.
    Graph {
        /// Path to the JSON spec file.
        spec: PathBuf,
        /// Number of blowups (default as for trace).
        #[arg(long)]
        depth: Option<usize>,
        /// Write the DOT text to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generator values: the beta table.
    Betas {
        #[command(flatten)]
        spec: SpecArg,
        /// Number of generator rows for infinite chains.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Unique digit representation of a value in the value semigroup.
    Represent {
        #[command(flatten)]
        spec: SpecArg,
        /// The value: `p/q`, `(hi, lo)`, or `r + s*tau`.
        #[arg(long)]
        value: String,
        /// Number of generator rows for infinite chains.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Frobenius number and the gcd-chain upper bound of an integer list.
    Frobenius {
        /// The generators (at least two positive integers with gcd 1).
        entries: Vec<u64>,
        #[arg(long, value_enum, default_value = "text")]
        output: Output,
    },
    /// Exact value of a polynomial under a divisorial valuation.
    Value {
        #[command(flatten)]
        spec: SpecArg,
        /// Polynomial in x and y, e.g. "y^2 - x^7".
        #[arg(long)]
        poly: String,
    },
    /// Generating-sequence polynomials Q_0, Q_1, Q_2, ...
    Genseq {
        #[command(flatten)]
        spec: SpecArg,
        /// Last index to construct (default: the final generator).
        #[arg(long)]
        upto: Option<usize>,
    },
}

fn load_spec(path: &PathBuf) -> Result<ValuationSpec, CommandError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| commands::spec_error(format!("cannot read {}: {e}", path.display())))?;
    let file = SpecFile::from_json(&text).map_err(|e| commands::spec_error(e.to_string()))?;
    file.to_spec()
        .map_err(|e| commands::spec_error(e.to_string()))
}

fn run(command: Command) -> Result<(), CommandError> {
    match command {
        Command::Classify { spec } => {
            let parsed = load_spec(&spec.spec)?;
            print!("{}", commands::classify(&parsed, spec.output.into())?);
        }
        Command::Trace { spec, depth } => {
            let parsed = load_spec(&spec.spec)?;
            print!("{}", commands::trace(&parsed, depth, spec.output.into())?);
        }
        Command::Graph { spec, depth, out } => {
            let parsed = load_spec(&spec)?;
            let dot = commands::graph(&parsed, depth)?;
            match out {
                Some(path) => {
                    let mut file = std::fs::File::create(&path).map_err(|e| {
                        commands::domain_error(format!("cannot write {}: {e}", path.display()))
                    })?;
                    file.write_all(dot.as_bytes()).map_err(|e| {
                        commands::domain_error(format!("cannot write {}: {e}", path.display()))
                    })?;
                }
                None => print!("{dot}"),
            }
        }
        Command::Betas { spec, depth } => {
            let parsed = load_spec(&spec.spec)?;
            print!("{}", commands::betas(&parsed, depth, spec.output.into())?);
        }
        Command::Represent { spec, value, depth } => {
            let parsed = load_spec(&spec.spec)?;
            print!(
                "{}",
                commands::represent(&parsed, &value, depth, spec.output.into())?
            );
        }
        Command::Frobenius { entries, output } => {
            print!("{}", commands::frobenius(&entries, output.into())?);
        }
        Command::Value { spec, poly } => {
            let parsed = load_spec(&spec.spec)?;
            print!(
                "{}",
                commands::value_of_poly(&parsed, &poly, spec.output.into())?
            );
        }
        Command::Genseq { spec, upto } => {
            let parsed = load_spec(&spec.spec)?;
            print!("{}", commands::genseq(&parsed, upto, spec.output.into())?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version requests are not errors
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
