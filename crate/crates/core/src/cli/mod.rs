//! Command implementations behind the `counterheads` binary. Every command returns its
//! output text together with the process exit code: 0 accept, 1 reject (or disagreement),
//! 2 timeout, 3 fault or error.

pub mod commands;
pub mod machine_file;

pub use commands::{
    bench, cmd_bench, cmd_crossvalidate, cmd_encode, cmd_run, cmd_simulate, cmd_speedup, crossvalidate,
    crossvalidate_with, write_bench_csv, BenchRow, CrossMode, CrossReport, Disagreement, Observation, Output,
    SimulateVia,
};
pub use machine_file::{machine_to_json, parse_machine_file, parse_machine_text, Machine, MachineFile, MachineKind};

/// Exit code for errors that prevent a verdict.
pub const EXIT_ERROR: i32 = 3;
