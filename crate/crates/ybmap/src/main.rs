use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ybmap::cli::{
    run_collide, run_kdv, run_transfer, run_verify, CheckKind, CollideConfig, KdvConfig,
    TransferConfig, VerifyConfig, EXIT_INPUT_ERROR,
};

/// Yang-Baxter maps from matrix KdV solitons: collisions, verification
/// campaigns, refactorization certificates, transfer-chain dynamics, and
/// soliton residual scans over JSON files.
#[derive(Parser)]
#[command(name = "ybmap", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Collide two states (vector, projector, or grassmannian form) and
    /// certify the result against the Lax refactorization identity.
    Collide {
        /// Input JSON file holding the two states plus velocities.
        #[arg(long)]
        input: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Spectral samples for the certificate.
        #[arg(long, default_value_t = 16)]
        zeta_samples: usize,
        /// Seed for the certificate grid jitter.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run seeded Yang-Baxter / reversibility campaigns for a map family.
    Verify {
        /// Family: vector | projector | grassmannian.
        #[arg(long)]
        family: String,
        /// Check: yang-baxter | reversibility | both.
        #[arg(long, default_value = "both")]
        check: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Deviation tolerance; defaults to 1e-9 (Yang-Baxter) and 1e-10
        /// (reversibility).
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, default_value_t = 16)]
        zeta_samples: usize,
        /// Report file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (also settable via YBMAP_THREADS).
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Iterate the transfer map over a chain file and track the drift of
    /// the monodromy spectral invariants.
    Transfer {
        /// Chain JSON file.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long, default_value_t = 16)]
        zeta_samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Maximum allowed relative drift of the invariants.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Trajectory file (JSON lines); stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan the matrix KdV residual of a soliton amplitude over an (x, t)
    /// grid.
    Kdv {
        /// Input JSON file: amplitude matrix, lambda, optional grid.
        #[arg(long)]
        input: PathBuf,
        /// Report file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Optional CSV field snapshot for external plotting.
        #[arg(long)]
        field_out: Option<PathBuf>,
        /// Maximum allowed relative residual.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Collide {
            input,
            out,
            zeta_samples,
            seed,
        } => run_collide(&CollideConfig {
            input,
            out,
            zeta_samples,
            seed,
        }),
        Command::Verify {
            family,
            check,
            trials,
            seed,
            tol,
            zeta_samples,
            out,
            threads,
        } => match CheckKind::parse(&check) {
            Some(check) => run_verify(&VerifyConfig {
                family,
                check,
                trials,
                seed,
                tol,
                zeta_samples,
                out,
                threads,
            }),
            None => {
                eprintln!("error: unknown check '{check}' (expected yang-baxter | reversibility | both)");
                EXIT_INPUT_ERROR
            }
        },
        Command::Transfer {
            input,
            steps,
            zeta_samples,
            seed,
            tol,
            out,
        } => run_transfer(&TransferConfig {
            input,
            steps,
            zeta_samples,
            seed,
            tol,
            out,
        }),
        Command::Kdv {
            input,
            out,
            field_out,
            tol,
        } => run_kdv(&KdvConfig {
            input,
            out,
            field_out,
            tol,
        }),
    };
    ExitCode::from(code as u8)
}
