//! Constructions between counter machines, multi-head automata and register machines.

pub mod counters_to_heads;
pub mod heads_to_counters;
pub mod registers;
pub mod segment;

pub use counters_to_heads::counters_to_heads;
pub use heads_to_counters::{heads_to_counters_run, Assignment, IntervalState, SimulationAudit};
pub use registers::{heads_to_registers_run, initial_registers};
pub use segment::{can_cause_next_event, segment_around, BoundarySide, EventOutcome, EventPrediction};
