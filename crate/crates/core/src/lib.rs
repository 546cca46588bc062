//! Simulators and transformations for two-way multi-head automata, bounded
//! counter machines and register machines over bounded inputs.

pub mod acceptors;
pub mod bounded;
pub mod cli;
pub mod error;
pub mod machine;
pub mod speedup;
pub mod suite;
pub mod transforms;

pub use error::{Error, Result};
