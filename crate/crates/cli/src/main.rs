//! `hexflow` — symmetrization flows on convex translational tiles, tiling
//! checks, and optimality scans of symmetrization-monotone energies.
//!
//! Exit codes: 0 success/verified, 1 verification failed, 2 invalid input,
//! 3 non-convergence.

use clap::{Parser, Subcommand};

mod commands;
mod input;
mod report;
mod svg;
mod textfmt;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_NON_CONVERGENCE: i32 = 3;

#[derive(Parser)]
#[command(
    name = "hexflow",
    version,
    about = "Steiner symmetrization flows on convex translational tiles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the symmetrization flow on a cell until it is regular.
    Symmetrize(commands::SymmetrizeArgs),
    /// Check the per-step monotonicity facts over many random flows.
    VerifyLemma(commands::VerifyLemmaArgs),
    /// Compare a functional on the regular hexagon against random cells.
    Scan(commands::ScanArgs),
    /// Render a cell's translational tiling and optionally verify it.
    Tile(commands::TileArgs),
}

fn main() {
    init_worker_pool();
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Symmetrize(args) => commands::symmetrize(&args),
        Command::VerifyLemma(args) => commands::verify_lemma(&args),
        Command::Scan(args) => commands::scan(&args),
        Command::Tile(args) => commands::tile(&args),
    };
    std::process::exit(code);
}

/// `HEXFLOW_THREADS` caps the worker pool. Per-sample seeding keeps results
/// independent of the pool size.
fn init_worker_pool() {
    #[cfg(feature = "parallel")]
    if let Ok(threads) = std::env::var("HEXFLOW_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => {
                eprintln!("warning: ignoring invalid HEXFLOW_THREADS={threads}");
            }
        }
    }
}
