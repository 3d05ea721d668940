//! `crgeom`: exact CR-geometry computations from the command line.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Latex,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "crgeom",
    version,
    about = "Exact symbolic CR geometry on the Heisenberg model"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// GJMS operator P_{2k} from the Dirichlet problem, checked against the product formula.
    Gjms {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        /// LaTeX as a product of shifted factors.
        #[arg(long)]
        factored: bool,
    },
    /// Linearized obstruction operator from the Lichnerowicz solve.
    Obstruction {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
    },
    /// Formal solution of (Δ − s(n+1−s))u = 0 with boundary value f.
    Dirichlet {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        k: u32,
        /// Boundary polynomial, e.g. "z1*zb1 - i*t^2".
        #[arg(long)]
        boundary: String,
        #[arg(long)]
        max_order: Option<usize>,
    },
    /// Log expansion ΔU = (n+1)/2 and Q-curvature for a profile file.
    Logq {
        /// Profile JSON: {"n":2,"b":[[j,"p/q"],…],"c":[…]}.
        #[arg(long)]
        profile: PathBuf,
        #[arg(long)]
        max_order: Option<usize>,
        /// Value for the undetermined coefficient a^{(2n+2)}.
        #[arg(long)]
        free_slot: Option<String>,
    },
    /// Volume expansion coefficients and the L / total-Q identity for a profile file.
    Volume {
        #[arg(long)]
        profile: PathBuf,
    },
    /// P_{2n+2}Υ, the change of Q-curvature under θ ↦ e^Υ θ on the model.
    Qtransform {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long)]
        upsilon: String,
    },
    /// Riemann tensor of the model in the Θ-frame.
    DumpCurvature {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long, default_value_t = 0)]
        max_order: usize,
    },
    /// Indicial polynomial of a channel.
    Indicial {
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        /// func, form_tau, form_alpha, tautau, taualpha, alphabeta, trace, tracefree.
        #[arg(long)]
        channel: String,
    },
    /// Run verification suites.
    Verify {
        /// arith, frame, gjms, curvature, lichnerowicz, volume or all.
        #[arg(long, default_value = "all")]
        suite: String,
        /// N or A..B.
        #[arg(long, default_value = "1..3")]
        n: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(commands::Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(commands::Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
