//! `heisquot`: reproducible experiments on codimension-two quotients of Heisenberg groups.
//!
//! Exit status is 0 on success, 1 when a verification fails and 2 on usage errors
//! (including scale-guard refusals). `HEISQUOT_THREADS` sets the worker count.

mod commands;
mod report;
mod verify;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use report::{write_records, Format, Record};

#[derive(Parser, Debug)]
#[command(name = "heisquot", version, about = "Quotients of Heisenberg groups over finite fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Odd prime p.
    #[arg(short = 'p')]
    pub p: u32,
    /// Extension degree e.
    #[arg(short = 'e')]
    pub e: usize,
    /// Seed for the modulus search and sampled checks.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Modulus as coefficients, constant term first (overrides the search).
    #[arg(long)]
    pub modulus: Option<String>,
    #[arg(long, value_enum, default_value = "jsonl")]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Lift the scale guards.
    #[arg(long)]
    pub unsafe_scale: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the modulus and structure matrices of F_{p^e}.
    Field(Common),
    /// Dump every quotient H/N with |H' : N| = p^2.
    Family(Common),
    /// Test two subspaces N1, N2 of H' (echelon bases, rows separated by ';').
    Iso {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        n1: String,
        #[arg(long, allow_hyphen_values = true)]
        n2: String,
    },
    /// Classify the family up to isomorphism.
    Classify(Common),
    /// Subgroup profile of B(I_e, C(a)) and quotient profiles of the family.
    Profile {
        #[command(flatten)]
        common: Common,
        /// Only enumerate subgroups with at most this many generators.
        #[arg(long)]
        gen_bound: Option<u32>,
        /// Also enumerate all subgroups of a group of order 3^6 or more.
        #[arg(long)]
        slow: bool,
    },
    /// Run the invariant suite for (p, e).
    Verify(Common),
}

/// Outcome of a command: its records and whether every check passed.
pub struct Outcome {
    pub records: Vec<Record>,
    pub ok: bool,
}

pub enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<heisquot::Error> for Failure {
    fn from(e: heisquot::Error) -> Self {
        use heisquot::Error::*;
        match e {
            InvalidModulus(_)
            | InvalidDegree(_)
            | NotIrreducible { .. }
            | NotMonic(_)
            | Parse(_)
            | DimensionMismatch(_)
            | EvenCharacteristic
            | ScaleGuard { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("HEISQUOT_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // Ignore the error raised when a pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn emit(common: &Common, records: &[Record]) -> io::Result<()> {
    let mut out: Box<dyn Write> = match &common.out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    write_records(&mut out, records, common.format)?;
    out.flush()
}

fn main() -> ExitCode {
    configure_threads();
    let cli = Cli::parse();
    let (common, result) = match &cli.command {
        Command::Field(c) => (c, commands::field(c)),
        Command::Family(c) => (c, commands::family(c)),
        Command::Iso { common, n1, n2 } => (common, commands::iso(common, n1, n2)),
        Command::Classify(c) => (c, commands::classify(c)),
        Command::Profile { common, gen_bound, slow } => (common, commands::profile(common, *gen_bound, *slow)),
        Command::Verify(c) => (c, verify::run(c)),
    };
    match result {
        Ok(outcome) => {
            if let Err(e) = emit(common, &outcome.records) {
                eprintln!("error: cannot write report: {e}");
                return ExitCode::from(2);
            }
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
