//! Machine models and their single-step interpreters.

pub mod counter;
pub mod mha;
pub mod normalize;
pub mod register;
pub mod run;
pub mod tape;

pub use counter::{run_cm, CmAction, CmKey, CounterMachine, CounterOp, CounterTest, OverflowPolicy};
pub use mha::{run_mha, run_mha_observed, MhaAction, MhaKey, MhaObserver, MultiHeadAutomaton, StateId};
pub use normalize::{normalize_head_order, normalize_one_move};
pub use register::{run_rm, RegisterMachine, RmAction, RmKey};
pub use run::{HaltReason, LoopDetector, RunOptions, RunResult, Trace, Verdict};
pub use tape::{Tape, LEFT_END, RIGHT_END};
