//! `upg`: exact group computations for unique-product questions.

mod chw;
mod fp;
mod hw;
mod padic;
mod reply;
mod up;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "upg",
    version,
    about = "Exact group computations for unique-product questions"
)]
struct Cli {
    /// Print the result envelope as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for counting and search; results do not depend on it.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Wall-clock budget for searches, in milliseconds.
    #[arg(long, global = true)]
    budget_ms: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

pub struct Globals {
    pub seed: u64,
    pub workers: usize,
    pub budget_ms: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// The groups G_n.
    #[command(subcommand)]
    Chw(chw::ChwCmd),
    /// The free product of order-two groups.
    #[command(subcommand)]
    Fp(fp::FpCmd),
    /// Hantzsche-Wendt Bieberbach groups.
    #[command(subcommand)]
    Hw(hw::HwCmd),
    /// Truncated p-adic matrices.
    #[command(subcommand)]
    Padic(padic::PadicCmd),
    /// Unique products and witness search.
    #[command(subcommand)]
    Up(up::UpCmd),
}

fn main() {
    // clap exits with status 2 on unknown commands and bad flags
    let cli = Cli::parse();
    let globals = Globals {
        seed: cli.seed,
        workers: cli.workers.max(1),
        budget_ms: cli.budget_ms,
    };
    let result = match cli.command {
        Command::Chw(cmd) => chw::run(cmd),
        Command::Fp(cmd) => fp::run(cmd),
        Command::Hw(cmd) => hw::run(cmd),
        Command::Padic(cmd) => padic::run(cmd, globals.seed),
        Command::Up(cmd) => up::run(cmd, &globals),
    };
    std::process::exit(reply::emit(result, cli.json));
}
