mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::Format;

/// Kazhdan-Lusztig polynomials of boolean elements.
#[derive(Parser)]
#[command(name = "boolkl", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Cap on words visited by the word-problem search.
    #[arg(long, global = true)]
    budget: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// P^J_{u,v} for a boolean pair.
    Kl(KlArgs),
    /// Closed formulas against the recursion over a whole group.
    Verify(VerifyArgs),
    /// Boolean elements, by length and then lexicographically.
    Enumerate(EnumerateArgs),
    /// f_h and row h of the Catalan triangle.
    Catalan { h: usize },
    /// The Poincaré polynomial F_v.
    Poincare(PoincareArgs),
    /// Window-notation queries in A_n, B_n and D_n.
    Perm(PermArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Closed,
    Oracle,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scope {
    Kl,
    Mu,
    Poincare,
    Perm,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    A,
    B,
    D,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    T1,
    T2,
}

#[derive(Args)]
pub struct GraphArgs {
    /// Graph file (`n`, `edge i j m|inf`, `root i`, `mode tree|cycle`).
    #[arg(long)]
    graph: PathBuf,
    /// Generators are numbered from 0 in --v, --u and --J.
    #[arg(long)]
    zero_based: bool,
}

#[derive(Args)]
pub struct KlArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// The upper element, as generator indices.
    #[arg(long)]
    v: String,
    /// The lower element; `e` is the identity.
    #[arg(long, default_value = "e")]
    u: String,
    /// Parabolic subset, comma separated.
    #[arg(long = "J", default_value = "")]
    j: String,
    #[arg(long, value_enum, default_value = "both")]
    method: Method,
    #[arg(long)]
    show_diagram: bool,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum, default_value = "kl")]
    scope: Scope,
    /// Stop after this many cases.
    #[arg(long, default_value_t = 100_000)]
    max_pairs: usize,
    /// Sweep every root (tree) or center (cycle), not just the graph's own.
    #[arg(long)]
    all_roots: bool,
}

#[derive(Args)]
pub struct EnumerateArgs {
    #[command(flatten)]
    graph: GraphArgs,
    /// Keep only minimal coset representatives for this subset.
    #[arg(long = "J")]
    j: Option<String>,
}

#[derive(Args)]
pub struct PoincareArgs {
    #[command(flatten)]
    graph: GraphArgs,
    #[arg(long)]
    v: String,
    #[arg(long, value_enum, default_value = "both")]
    method: Method,
    /// Also list the essential components.
    #[arg(long)]
    show_diagram: bool,
}

#[derive(Args)]
pub struct PermArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Upper window, e.g. `-3,2,-1`.
    #[arg(long, allow_hyphen_values = true)]
    v: String,
    /// Lower window; the identity by default.
    #[arg(long, allow_hyphen_values = true)]
    u: Option<String>,
    /// Parabolic subset (type A only).
    #[arg(long = "J", default_value = "")]
    j: String,
    /// Maximal boolean reflection for B_n.
    #[arg(long, value_enum, default_value = "t1")]
    variant: VariantArg,
    #[arg(long, value_enum, default_value = "both")]
    method: Method,
    #[arg(long)]
    show_diagram: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = commands::Context { budget: cli.budget };
    let result = match &cli.command {
        Command::Kl(a) => commands::kl(&ctx, a),
        Command::Verify(a) => commands::verify(&ctx, a),
        Command::Enumerate(a) => commands::enumerate(&ctx, a),
        Command::Catalan { h } => commands::catalan(*h),
        Command::Poincare(a) => commands::poincare(&ctx, a),
        Command::Perm(a) => commands::perm(&ctx, a),
    };
    match result {
        Ok(out) => {
            print!("{}", output::render(&out.lines, cli.format));
            if out.mismatch {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
