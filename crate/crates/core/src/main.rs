use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use counterheads::acceptors::Acceptor;
use counterheads::bounded::BoundDescriptor;
use counterheads::cli::{self, CrossMode, Machine, Output, SimulateVia, EXIT_ERROR};
use counterheads::machine::RunOptions;
use counterheads::{suite, Error, Result};

#[derive(Parser)]
#[command(
    name = "counterheads",
    version,
    about = "Multi-head automata, bounded counter machines and register machines"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a machine file on one input (a number for register machines).
    Run {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long, default_value_t = 10_000_000)]
        limit: u64,
        /// Include the resource trace in the output.
        #[arg(long)]
        trace: bool,
    },
    /// Run a machine through one of the equivalence constructions.
    Simulate {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long, value_parser = parse::<SimulateVia>)]
        via: SimulateVia,
        #[arg(long, default_value = "")]
        input: String,
        /// Comma-separated bound words, e.g. "a,b".
        #[arg(long, value_parser = parse::<BoundDescriptor>)]
        bound: Option<BoundDescriptor>,
        #[arg(long, default_value_t = 10_000_000)]
        limit: u64,
    },
    /// Compare a construction with the original on every bound input up to a length.
    Crossvalidate {
        #[arg(long)]
        machine: Option<PathBuf>,
        #[arg(long, value_parser = parse::<BoundDescriptor>)]
        bound: BoundDescriptor,
        #[arg(long)]
        max_len: usize,
        #[arg(long, value_parser = parse::<CrossMode>)]
        mode: CrossMode,
        #[arg(long, default_value_t = 10_000_000)]
        limit: u64,
        /// Speed-up factor for the speedup mode.
        #[arg(long, default_value_t = 0.5)]
        c: f64,
    },
    /// Measure an acceptor on its canonical accepted family and write CSV.
    Bench {
        /// ww, palindrome2c or lm:<m>.
        #[arg(long, value_parser = parse::<Acceptor>)]
        acceptor: Acceptor,
        /// Comma-separated input lengths.
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["from", "to"])]
        n: Vec<usize>,
        /// Doubling range start.
        #[arg(long, requires = "to")]
        from: Option<usize>,
        #[arg(long, requires = "from")]
        to: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1 << 36)]
        limit: u64,
    },
    /// Print the run-length encoding of a bounded input as JSON.
    Encode {
        #[arg(long, value_parser = parse::<BoundDescriptor>)]
        bound: BoundDescriptor,
        #[arg(long, default_value = "")]
        input: String,
    },
    /// Run a counter machine with the bounded-input speed-up.
    Speedup {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long, value_parser = parse::<BoundDescriptor>)]
        bound: BoundDescriptor,
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long)]
        c: f64,
        #[arg(long, default_value_t = 1 << 36)]
        limit: u64,
    },
    /// Write the built-in test machines as JSON files into a directory.
    Suite {
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> std::result::Result<T, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn load(path: &Path) -> Result<Machine> {
    cli::parse_machine_file(path)
}

fn doubling(from: usize, to: usize) -> Result<Vec<usize>> {
    if from == 0 {
        return Err(Error::InvalidArgument("--from must be positive".into()));
    }
    Ok(std::iter::successors(Some(from), |n| n.checked_mul(2)).take_while(|n| *n <= to).collect())
}

fn write_suite(dir: &PathBuf) -> Result<Output> {
    std::fs::create_dir_all(dir)?;
    let mut names = Vec::new();
    let mut all: Vec<(&str, Machine)> = Vec::new();
    all.extend(suite::strict_suite().into_iter().map(|(n, m, _)| (n, Machine::MultiHead(m))));
    all.extend(suite::unary_suite().into_iter().map(|(n, m)| (n, Machine::MultiHead(m))));
    all.extend(suite::counter_suite().into_iter().map(|(n, c)| (n, Machine::Counter(c))));
    all.push(("zigzag_quadratic", Machine::Counter(suite::zigzag_quadratic())));
    for (name, m) in all {
        let path = dir.join(format!("{name}.json"));
        std::fs::write(&path, cli::machine_to_json(&m) + "\n")?;
        names.push(path.display().to_string());
    }
    Ok(Output { text: names.join("\n"), code: 0 })
}

fn dispatch(cmd: Command) -> Result<Output> {
    match cmd {
        Command::Run { machine, input, limit, trace } => {
            cli::cmd_run(&load(&machine)?, &input, RunOptions::new(limit), trace)
        }
        Command::Simulate { machine, via, input, bound, limit } => {
            cli::cmd_simulate(&load(&machine)?, via, &input, bound.as_ref(), RunOptions::new(limit))
        }
        Command::Crossvalidate { machine, bound, max_len, mode, limit, c } => {
            let m = machine.as_deref().map(load).transpose()?;
            cli::cmd_crossvalidate(m.as_ref(), &bound, max_len, mode, RunOptions::new(limit), c)
        }
        Command::Bench { acceptor, n, from, to, out, limit } => {
            let ns = match (from, to) {
                (Some(a), Some(b)) => doubling(a, b)?,
                _ => n,
            };
            cli::cmd_bench(acceptor, &ns, RunOptions::new(limit), out.as_deref())
        }
        Command::Encode { bound, input } => cli::cmd_encode(&bound, &input),
        Command::Speedup { machine, bound, input, c, limit } => {
            cli::cmd_speedup(&load(&machine)?, &bound, &input, c, RunOptions::new(limit))
        }
        Command::Suite { out } => write_suite(&out),
    }
}

fn main() -> ExitCode {
    // usage errors exit with the error code rather than clap's default of 2, which means timeout
    let args = match Cli::try_parse() {
        Ok(a) => a,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_ERROR as u8);
        }
    };
    match dispatch(args.command) {
        Ok(out) => {
            if !out.text.is_empty() {
                // a closed pipe downstream is not an error worth reporting
                let mut stdout = std::io::stdout().lock();
                let _ = write!(stdout, "{}", out.text);
                if !out.text.ends_with('\n') {
                    let _ = writeln!(stdout);
                }
            }
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
