use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lielat_core::Error;
use serde_json::{json, Map, Value};

mod commands;

/// Exact index-stability computations for Z_p-Lie lattices. Every command
/// prints one JSON document on stdout.
#[derive(Debug, Parser)]
#[command(name = "lielat", version)]
struct Cli {
    /// Caps enumeration and search work.
    #[arg(long, global = true, env = "LIELAT_BUDGET")]
    budget: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Target {
    /// `builtin:<name>[?dim=N]` or a lattice JSON file.
    pub lattice: String,
    /// The prime; required for built-ins.
    #[arg(long)]
    pub p: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check integrality and the Jacobi identity.
    Validate(Target),
    Killing(Target),
    Semisimple(Target),
    Powerful(Target),
    /// Lower central and derived series ranks.
    Series(Target),
    Derivations(Target),
    Simplicity(Target),
    /// Index exponent of the sublattice spanned by the columns of `--sub`.
    Index {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        sub: String,
    },
    Gram {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        sub: String,
    },
    /// Verify that `--map` carries `--sub` onto `--onto` and compare indices.
    IsoCheck {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        sub: String,
        #[arg(long)]
        onto: String,
        #[arg(long)]
        map: String,
    },
    Serre {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        map: String,
    },
    Stable {
        #[command(flatten)]
        target: Target,
        /// Extra automorphism candidates, tried after the built-in ones.
        #[arg(long = "candidate")]
        candidates: Vec<String>,
    },
    WitnessSearch {
        #[command(flatten)]
        target: Target,
        #[arg(long = "candidate")]
        candidates: Vec<String>,
    },
    /// All sublattices of index at most p^k, flagged as subalgebras or not.
    Enum {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 1)]
        k: u32,
        /// Print only the counts.
        #[arg(long)]
        summary: bool,
    },
    /// Isomorphism classes of the given subalgebras modulo p^e.
    Classify {
        #[command(flatten)]
        target: Target,
        #[arg(long = "sub", required = true)]
        subs: Vec<String>,
        #[arg(long, default_value_t = 1)]
        e: u32,
    },
    /// Brute-force search for isomorphic subalgebras of unequal index.
    OracleCheck {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value_t = 1)]
        e: u32,
    },
    /// Group product of two elements given as coordinate vectors.
    Bch {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
        #[arg(long)]
        e: u32,
    },
    GroupIndex {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        sub: String,
        #[arg(long)]
        e: u32,
    },
    /// Structure, Killing form, simplicity and stability in one document.
    Report(Target),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate(_) => "validate",
            Command::Killing(_) => "killing",
            Command::Semisimple(_) => "semisimple",
            Command::Powerful(_) => "powerful",
            Command::Series(_) => "series",
            Command::Derivations(_) => "derivations",
            Command::Simplicity(_) => "simplicity",
            Command::Index { .. } => "index",
            Command::Gram { .. } => "gram",
            Command::IsoCheck { .. } => "iso-check",
            Command::Serre { .. } => "serre",
            Command::Stable { .. } => "stable",
            Command::WitnessSearch { .. } => "witness-search",
            Command::Enum { .. } => "enum",
            Command::Classify { .. } => "classify",
            Command::OracleCheck { .. } => "oracle-check",
            Command::Bch { .. } => "bch",
            Command::GroupIndex { .. } => "group-index",
            Command::Report(_) => "report",
        }
    }
}

const EXIT_BUG: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

fn emit(command: &str, body: Map<String, Value>) {
    let mut doc = Map::new();
    doc.insert("command".into(), json!(command));
    doc.extend(body);
    println!(
        "{}",
        serde_json::to_string_pretty(&Value::Object(doc)).expect("JSON value serialises")
    );
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    match commands::run(&cli.command, cli.budget) {
        Ok(out) => {
            emit(name, out.body);
            if out.inconclusive {
                ExitCode::from(EXIT_INCONCLUSIVE)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("lielat {name}: {e}");
            emit(name, commands::error_body(&e));
            ExitCode::from(match e {
                Error::Internal(_) => EXIT_BUG,
                e if e.is_inconclusive() => EXIT_INCONCLUSIVE,
                _ => EXIT_INVALID,
            })
        }
    }
}
