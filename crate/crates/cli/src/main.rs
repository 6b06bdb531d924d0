mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "cqstar", version, about = "Count conjunctive query answers through hypergraph decompositions")]
struct Cli {
    /// Output format; `json` prints a single JSON document on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count the answers of a query over a structure.
    Count(CountArgs),
    /// Compute the S-star size of a query.
    Starsize(StarsizeArgs),
    /// Build a decomposition of a query's hypergraph.
    Decompose(DecomposeArgs),
    /// Check a decomposition against a query's hypergraph.
    Verify(VerifyArgs),
    /// Write generated instances.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Run every applicable method and compare the results.
    Oracle(OracleArgs),
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[arg(short, long)]
    pub query: PathBuf,
    #[arg(short, long)]
    pub data: PathBuf,
    /// Decomposition file (JSON).
    #[arg(long, conflicts_with = "auto_decomp")]
    pub decomp: Option<PathBuf>,
    /// Decomposition to build when none is given.
    #[arg(long, value_enum, num_args = 0..=1, default_missing_value = "auto")]
    pub auto_decomp: Option<AutoKind>,
    /// Largest width tried by the automatic search.
    #[arg(short, default_value_t = 4)]
    pub k: usize,
    #[arg(long, value_enum)]
    pub method: Option<CountMethodArg>,
    /// Limit on free variables times log2 of the domain size for `brute`.
    #[arg(long, default_value_t = cqstar::engine::DEFAULT_BRUTE_BITS)]
    pub budget: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AutoKind {
    Auto,
    Jointree,
    Hinge,
    Ghd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CountMethodArg {
    Ghd,
    Fractional,
    Brute,
}

#[derive(Args, Debug)]
pub struct StarsizeArgs {
    #[arg(short, long)]
    pub query: PathBuf,
    #[arg(long)]
    pub decomp: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = StarMethodArg::Hinge)]
    pub method: StarMethodArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StarMethodArg {
    Brute,
    Acyclic,
    Ghd,
    Hinge,
    Approx,
}

#[derive(Args, Debug)]
pub struct DecomposeArgs {
    #[arg(short, long)]
    pub query: PathBuf,
    #[arg(long, value_enum)]
    pub kind: KindArg,
    /// Largest width tried for `ghd` and `fractional`.
    #[arg(short, default_value_t = 4)]
    pub k: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Jointree,
    Hinge,
    Ghd,
    Tree,
    Fractional,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(short, long)]
    pub query: PathBuf,
    #[arg(long)]
    pub decomp: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum GenCommand {
    /// Counting instance whose answers encode the k-cliques of a graph.
    CliqueStar {
        #[arg(long)]
        graph: PathBuf,
        #[arg(short)]
        k: usize,
        /// Writes `<out>.cq` and `<out>.facts`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Hypergraph with a size-k independent set iff the graph has one.
    IsHard {
        #[arg(long)]
        graph: PathBuf,
        #[arg(short)]
        k: usize,
        /// Writes `<out>.cq` and `<out>.decomp.json`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Star with n free leaves around one quantified centre.
    Gstar {
        #[arg(short)]
        n: usize,
        /// Writes `<out>.cq`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Random query and structure.
    Random {
        #[arg(long, default_value_t = 6)]
        vars: usize,
        #[arg(long, default_value_t = 4)]
        atoms: usize,
        #[arg(long, default_value_t = 3)]
        max_arity: usize,
        #[arg(long, default_value_t = 3)]
        domain: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, default_value_t = 0.5)]
        free_probability: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Writes `<out>.cq` and `<out>.facts`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Random simple graph.
    Graph {
        #[arg(short)]
        n: usize,
        #[arg(short, default_value_t = 0.5)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Writes `<out>.edges`.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(short, long)]
    pub query: PathBuf,
    /// Structure to count over; without it only star sizes are compared.
    #[arg(short, long)]
    pub data: Option<PathBuf>,
    #[arg(long, default_value_t = cqstar::engine::DEFAULT_BRUTE_BITS)]
    pub budget: f64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Count(args) => commands::count(&args, cli.format),
        Command::Starsize(args) => commands::starsize(&args, cli.format),
        Command::Decompose(args) => commands::decompose(&args),
        Command::Verify(args) => commands::verify(&args, cli.format),
        Command::Gen(cmd) => commands::generate(&cmd),
        Command::Oracle(args) => commands::oracle(&args, cli.format),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
