use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qreg::circuit::route::CouplingGraph;
use qreg::cli::{self, Iterations, OutputFormat, RunOptions, SeedArg};
use qreg::error::{Error, Result};

#[derive(Parser)]
#[command(name = "qreg", version, about = "State-vector quantum circuit simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Integer seed, or `random` for an entropy seed (printed in the report).
    #[arg(long, default_value_t = qreg::rng::DEFAULT_SEED.to_string())]
    seed: String,
    /// ascii or json
    #[arg(long, default_value = "ascii")]
    format: OutputFormat,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a circuit file and sample all qubits.
    Run {
        file: PathBuf,
        #[arg(long, default_value_t = 1024)]
        shots: u64,
        /// Lower to single-qubit gates and CNOTs first.
        #[arg(long)]
        decompose: bool,
        /// Edge-list file; inserts SWAPs so two-qubit gates sit on edges.
        #[arg(long)]
        coupling: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Recover a hidden XOR mask with Simon's algorithm.
    Simon {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        hidden_a: u64,
        #[arg(long, default_value_t = 200)]
        max_samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Grover search for marked strings.
    Grover {
        #[arg(long)]
        n: usize,
        /// Comma-separated marked indices.
        #[arg(long, value_delimiter = ',', required = true)]
        marked: Vec<u64>,
        /// auto or a count
        #[arg(long, default_value = "auto")]
        iterations: Iterations,
        #[arg(long, default_value_t = 1024)]
        shots: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Solve an Exactly-1 3-SAT formula with a gate-level Grover oracle.
    #[command(alias = "sat")]
    GroverSat {
        file: PathBuf,
        /// auto or a count
        #[arg(long, default_value = "auto")]
        iterations: Iterations,
        #[arg(long, default_value_t = 2048)]
        shots: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Time one single-qubit gate layer per register size.
    Bench {
        /// Comma-separated register sizes.
        #[arg(long, value_delimiter = ',', default_value = "16,17,18,19,20,21")]
        qubits: Vec<usize>,
        #[arg(long, default_value = "h")]
        gate: String,
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long, default_value = "ascii")]
        format: OutputFormat,
    },
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(Error::Io)
}

fn seed(common: &Common) -> Result<SeedArg> {
    common.seed.parse().map_err(Error::InvalidArgument)
}

fn execute(command: Command) -> Result<String> {
    match command {
        Command::Run {
            file,
            shots,
            decompose,
            coupling,
            common,
        } => {
            let coupling = coupling
                .map(|p| read(&p).and_then(|t| CouplingGraph::parse(&t)))
                .transpose()?;
            let opts = RunOptions {
                shots,
                seed: seed(&common)?,
                decompose,
                coupling,
            };
            Ok(cli::cmd_run(&read(&file)?, &opts)?.render(common.format))
        }
        Command::Simon {
            n,
            hidden_a,
            max_samples,
            common,
        } => Ok(cli::cmd_simon(n, hidden_a, max_samples, seed(&common)?)?.render(common.format)),
        Command::Grover {
            n,
            marked,
            iterations,
            shots,
            common,
        } => Ok(cli::cmd_grover(n, &marked, iterations, shots, seed(&common)?)?.render(common.format)),
        Command::GroverSat {
            file,
            iterations,
            shots,
            common,
        } => Ok(cli::cmd_grover_sat(&read(&file)?, iterations, shots, seed(&common)?)?.render(common.format)),
        Command::Bench {
            qubits,
            gate,
            reps,
            format,
        } => Ok(cli::cmd_bench(&qubits, &gate, reps)?.render(format)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
