use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Accept,
    Reject,
    Timeout,
    Fault,
}

impl Verdict {
    pub fn accepted(self) -> bool {
        self == Verdict::Accept
    }

    /// Process exit code used by the command line driver.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Accept => 0,
            Verdict::Reject => 1,
            Verdict::Timeout => 2,
            Verdict::Fault => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HaltReason {
    Accepted,
    NoTransition,
    Loop,
    StepLimit,
    DecrementOnZero,
    Overflow,
    HeadOffTape,
    Unsupported,
    /// A simulating machine broke its resource contract.
    AuditViolation,
}

impl HaltReason {
    pub fn verdict(self) -> Verdict {
        match self {
            HaltReason::Accepted => Verdict::Accept,
            HaltReason::NoTransition | HaltReason::Loop => Verdict::Reject,
            HaltReason::StepLimit => Verdict::Timeout,
            HaltReason::DecrementOnZero
            | HaltReason::Overflow
            | HaltReason::HeadOffTape
            | HaltReason::Unsupported
            | HaltReason::AuditViolation => Verdict::Fault,
        }
    }
}

/// Resource trace of a run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    /// Audit bound for counters and registers (input length or input number).
    pub bound: u64,
    pub max_values: Vec<u64>,
    pub increments: Vec<u64>,
    pub decrements: Vec<u64>,
    pub head_moves: Vec<u64>,
    pub head_min: Vec<u64>,
    pub head_max: Vec<u64>,
    pub overflows: u64,
    pub violations: Vec<String>,
}

impl Trace {
    pub fn new(heads: usize, counters: usize, bound: u64, start: u64) -> Self {
        Trace {
            bound,
            max_values: vec![0; counters],
            increments: vec![0; counters],
            decrements: vec![0; counters],
            head_moves: vec![0; heads],
            head_min: vec![start; heads],
            head_max: vec![start; heads],
            overflows: 0,
            violations: Vec::new(),
        }
    }

    pub fn head_at(&mut self, head: usize, pos: u64) {
        self.head_moves[head] += 1;
        self.head_min[head] = self.head_min[head].min(pos);
        self.head_max[head] = self.head_max[head].max(pos);
    }

    pub fn incremented(&mut self, counter: usize, value: u64) {
        self.increments[counter] += 1;
        if value > self.max_values[counter] {
            self.max_values[counter] = value;
            if value > self.bound {
                self.violations.push(format!("counter {counter} reached {value} > bound {}", self.bound));
            }
        }
    }

    pub fn decremented(&mut self, counter: usize) {
        self.decrements[counter] += 1;
    }

    pub fn max_value(&self) -> u64 {
        self.max_values.iter().copied().max().unwrap_or(0)
    }

    pub fn within_bound(&self) -> bool {
        self.max_value() <= self.bound
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunResult {
    pub verdict: Verdict,
    pub reason: HaltReason,
    pub steps: u64,
    pub trace: Trace,
}

impl RunResult {
    pub fn halted(reason: HaltReason, steps: u64, trace: Trace) -> Self {
        RunResult { verdict: reason.verdict(), reason, steps, trace }
    }

    pub fn accepted(&self) -> bool {
        self.verdict.accepted()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub limit: u64,
    pub detect_loops: bool,
}

impl RunOptions {
    pub fn new(limit: u64) -> Self {
        RunOptions { limit, detect_loops: true }
    }

    pub fn validate(&self) -> Result<()> {
        if self.limit == 0 {
            return Err(Error::InvalidArgument("step limit must be positive".into()));
        }
        Ok(())
    }
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions::new(10_000_000)
    }
}

/// Brent-style repeat detector over full configurations of a deterministic run.
///
/// Stores a single checkpoint that is moved forward at power-of-two distances,
/// so any cycle is reported within a small multiple of its entry point plus length.
#[derive(Debug, Clone)]
pub struct LoopDetector<C> {
    saved: Option<C>,
    power: u64,
    since: u64,
}

impl<C: Clone + PartialEq> LoopDetector<C> {
    pub fn new() -> Self {
        LoopDetector { saved: None, power: 1, since: 0 }
    }

    /// Returns true when `config` equals an earlier configuration.
    pub fn observe(&mut self, config: &C) -> bool {
        if let Some(saved) = &self.saved {
            if saved == config {
                return true;
            }
        }
        self.since += 1;
        if self.saved.is_none() || self.since >= self.power {
            self.saved = Some(config.clone());
            self.power *= 2;
            self.since = 0;
        }
        false
    }
}

impl<C: Clone + PartialEq> Default for LoopDetector<C> {
    fn default() -> Self {
        Self::new()
    }
}
