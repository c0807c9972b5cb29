mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use massey_core::lifting::DEFAULT_NODE_BUDGET;

#[derive(Parser)]
#[command(
    name = "massey",
    version,
    about = "Massey products for pro-p groups and Z/p characters over Q"
)]
struct Cli {
    /// Emit compact JSON instead of a text summary
    #[arg(long, global = true)]
    json: bool,

    /// Emit indented JSON
    #[arg(long, global = true)]
    pretty: bool,

    /// Write the report to a file instead of stdout
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Search-node budget for lifting
    #[arg(long, global = true, env = "MASSEY_BUDGET", default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Strong Massey property of a presentation, or the verdict for one tuple
    Group {
        /// Presentation file (`gens:` and `rel:` lines)
        file: PathBuf,
        /// Prime p
        #[arg(long)]
        p: u64,
        /// Massey arity n
        #[arg(long)]
        n: usize,
        /// Lift to Z/p^r
        #[arg(long, default_value_t = 1)]
        r: u32,
        /// One character per flag, given by its values on the generators
        #[arg(long = "chi")]
        chi: Vec<String>,
    },
    /// Lift a character tuple to U_{n+1}(Z/p^r) or its quotient by the center
    Lift {
        /// Presentation file
        file: PathBuf,
        /// Prime p
        #[arg(long)]
        p: u64,
        /// Lift to Z/p^r
        #[arg(long, default_value_t = 1)]
        r: u32,
        /// One character per flag; n is the number of flags
        #[arg(long = "chi", required = true)]
        chi: Vec<String>,
        /// Lift into U_{n+1} or U_{n+1}/Z
        #[arg(long, value_enum, default_value_t = TargetArg::Full)]
        target: TargetArg,
    },
    /// Cup product of two characters over Q
    Cup {
        /// Quadratic case: the Kummer class of a
        #[arg(
            long,
            allow_hyphen_values = true,
            requires = "b",
            conflicts_with = "char"
        )]
        a: Option<i64>,
        /// Kummer class of b
        #[arg(long, allow_hyphen_values = true, requires = "a")]
        b: Option<i64>,
        /// Character file (`p:` and `comp: q e` lines); give exactly two
        #[arg(long = "char", num_args = 1)]
        char: Vec<PathBuf>,
    },
    /// Z/p-extension ramified exactly at S and split at T
    GrasMunnier {
        /// Odd prime p
        #[arg(long)]
        p: u64,
        /// Ramification set, comma separated
        #[arg(long = "S", value_delimiter = ',')]
        s: Vec<u64>,
        /// Split set, comma separated
        #[arg(long = "T", value_delimiter = ',')]
        t: Vec<u64>,
        /// Largest modulus the Dirichlet oracle will enumerate
        #[arg(long, default_value_t = 10_000_000)]
        oracle_budget: u64,
    },
    /// Auxiliary prime search, or a character with prescribed local data
    FindPrime {
        /// Odd prime p
        #[arg(long)]
        p: u64,
        /// Exact p-adic valuation of l - 1
        #[arg(long)]
        m: u32,
        /// Largest candidate l to try
        #[arg(long, default_value_t = 1_000_000)]
        bound: u64,
        /// Integers that must be p-th powers mod l
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        kummer: Vec<i64>,
        /// Character files that must split at l
        #[arg(long = "char")]
        char: Vec<PathBuf>,
        /// Local datum `q:t:s`; switches to the prescribed-data construction
        #[arg(long)]
        prescribe: Vec<String>,
        /// Always ramify at an auxiliary prime, even for all-zero data
        #[arg(long, requires = "prescribe")]
        ramified: bool,
    },
    /// Build and validate a local plan at a tame prime
    Plan {
        /// Which constructor to run
        #[arg(long, value_enum)]
        kind: PlanArg,
        /// Prime p
        #[arg(long)]
        p: u64,
        /// Tame prime q
        #[arg(long)]
        q: u64,
        /// Work over Z/p^r
        #[arg(long, default_value_t = 1)]
        r: u32,
        /// Near-diagonal of the Frobenius image (abelian)
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        sigma: Vec<i64>,
        /// Near-diagonal of the inertia image (sr, abelian)
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        tau: Vec<i64>,
        /// Matrix size minus one (block)
        #[arg(long)]
        n: Option<usize>,
        /// Value of the character on Frobenius (block)
        #[arg(long, default_value_t = 0)]
        chi_sigma: u64,
        /// Value of the character on inertia (block)
        #[arg(long, default_value_t = 1)]
        chi_tau: u64,
        /// Block `start:l1,l2,...` (block)
        #[arg(long)]
        block: Vec<String>,
    },
    /// Quadratic symbol data for the classical four-fold counterexamples
    Counterexamples,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetArg {
    Full,
    Quotient,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlanArg {
    Sr,
    Abelian,
    Block,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.budget == 0 {
        eprintln!("error: budget must be positive");
        return ExitCode::from(1);
    }
    let outcome = match commands::run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    let text = if cli.pretty {
        serde_json::to_string_pretty(&outcome.report).expect("serializable report") + "\n"
    } else if cli.json {
        serde_json::to_string(&outcome.report).expect("serializable report") + "\n"
    } else {
        outcome.summary
    };
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(outcome.code)
}
