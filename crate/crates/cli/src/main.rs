mod commands;
mod error;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

/// Braid-group twin conjugacy toolkit.
#[derive(Parser, Debug)]
#[command(name = "tcsp", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GroupArgs {
    /// Strands on the left side (LB_l uses σ1..σ_{l-1}).
    #[arg(long, default_value_t = 8)]
    l: u16,
    /// Strands on the right side (RB_r uses σ_{l+1}..σ_{n-1}).
    #[arg(long, default_value_t = 8)]
    r: u16,
    /// Letters per sampled subgroup word.
    #[arg(long, default_value_t = 16)]
    w: u16,
}

#[derive(Args, Debug, Clone)]
struct SeedArg {
    /// 64 hex characters; makes the command deterministic.
    #[arg(long, env = "TCSP_SEED")]
    seed: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SchemeArg {
    Cs,
    Twin,
    Nike,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum SideArg {
    Left,
    Right,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum AdversaryArg {
    /// Knows the challenge ephemeral; always solves.
    Perfect,
    /// Guesses random conjugates.
    Random,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a key pair, writing <OUT>.pub and <OUT>.sec.
    Keygen {
        #[arg(long, value_enum, default_value_t = SchemeArg::Twin)]
        scheme: SchemeArg,
        /// Subgroup for NIKE identities.
        #[arg(long, value_enum, default_value_t = SideArg::Left)]
        side: SideArg,
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Encrypt a file to a CS or twin public key.
    Encrypt {
        #[arg(long)]
        pk: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Decrypt a ciphertext file; writes to stdout without --out.
    Decrypt {
        #[arg(long)]
        sk: PathBuf,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the key exchange: in-process loopback, over TCP, or NIKE from key files.
    KexDemo {
        /// Act as responder on this address.
        #[arg(long, conflicts_with_all = ["connect", "nike_sk"])]
        listen: Option<String>,
        /// Act as initiator towards this address.
        #[arg(long, conflicts_with = "nike_sk")]
        connect: Option<String>,
        /// Skip the CONFIRM round.
        #[arg(long)]
        no_confirm: bool,
        /// Own NIKE secret key file.
        #[arg(long, requires = "nike_pk")]
        nike_sk: Option<PathBuf>,
        /// Peer NIKE public key file.
        #[arg(long, requires = "nike_sk")]
        nike_pk: Option<PathBuf>,
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Measure the trapdoor test on honest, half-dishonest and random queries.
    TrapdoorDemo {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Run the reduction against a scripted twin adversary.
    ReduceDemo {
        /// Decision queries the adversary issues before answering.
        #[arg(long, default_value_t = 50)]
        queries: usize,
        #[arg(long, value_enum, default_value_t = AdversaryArg::Perfect)]
        adversary: AdversaryArg,
        #[command(flatten)]
        group: GroupArgs,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Pretty-print a key, ciphertext or element file, or the normal form of a word.
    Inspect {
        #[arg(required_unless_present = "word")]
        file: Option<PathBuf>,
        /// Signed generator indices, e.g. "1 -2 3".
        #[arg(long, allow_hyphen_values = true, conflicts_with = "file")]
        word: Option<String>,
        /// Strand count for --word.
        #[arg(long, default_value_t = 16)]
        n: u16,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
