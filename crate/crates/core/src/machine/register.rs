use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::machine::counter::{parse_ops, CounterOp};
use crate::machine::mha::StateId;
use crate::machine::run::{HaltReason, LoopDetector, RunOptions, RunResult, Trace};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RmKey {
    pub state: StateId,
    /// `true` for every register that is zero.
    pub zeros: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RmAction {
    pub next: StateId,
    pub ops: Vec<CounterOp>,
}

/// Deterministic register machine. Register 0 receives the input number.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterMachine {
    states: Vec<String>,
    start: StateId,
    accepting: Vec<bool>,
    registers: usize,
    transitions: HashMap<RmKey, RmAction>,
}

impl RegisterMachine {
    pub fn new(registers: usize) -> Result<Self> {
        if registers == 0 {
            return Err(Error::Malformed("a register machine needs an input register".into()));
        }
        Ok(RegisterMachine {
            states: Vec::new(),
            start: 0,
            accepting: Vec::new(),
            registers,
            transitions: HashMap::new(),
        })
    }

    pub fn state(&mut self, name: &str) -> StateId {
        if let Some(i) = self.states.iter().position(|s| s == name) {
            return i;
        }
        self.states.push(name.to_string());
        self.accepting.push(false);
        self.states.len() - 1
    }

    pub fn set_start(&mut self, s: StateId) {
        self.start = s;
    }

    pub fn set_accepting(&mut self, s: StateId, accepting: bool) {
        self.accepting[s] = accepting;
    }

    pub fn add_transition(&mut self, key: RmKey, action: RmAction) -> Result<()> {
        if key.state >= self.states.len() || action.next >= self.states.len() {
            return Err(Error::Malformed("transition refers to an unknown state".into()));
        }
        if key.zeros.len() != self.registers || action.ops.len() != self.registers {
            return Err(Error::Malformed(format!(
                "transition must test and operate on exactly {} registers",
                self.registers
            )));
        }
        if self.transitions.contains_key(&key) {
            return Err(Error::Nondeterministic(format!("({}, {:?})", self.states[key.state], key.zeros)));
        }
        self.transitions.insert(key, action);
        Ok(())
    }

    /// `zeros` uses `0` (zero) and `+` (positive) per register; `ops` uses `+`, `-`, `.`.
    pub fn add(&mut self, from: &str, zeros: &str, to: &str, ops: &str) -> Result<()> {
        let state = self.state(from);
        let next = self.state(to);
        let zeros = zeros
            .chars()
            .map(|c| match c {
                '0' => Ok(true),
                '+' => Ok(false),
                _ => Err(Error::Malformed(format!("bad register test {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        self.add_transition(RmKey { state, zeros }, RmAction { next, ops: parse_ops(ops)? })
    }

    pub fn registers(&self) -> usize {
        self.registers
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn is_accepting(&self, s: StateId) -> bool {
        self.accepting[s]
    }

    pub fn transitions(&self) -> impl Iterator<Item = (&RmKey, &RmAction)> {
        self.transitions.iter()
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }
}

/// Runs `r` on `input`. Register values above the input number are recorded as audit violations.
pub fn run_rm(r: &RegisterMachine, input: u64, opts: RunOptions) -> Result<RunResult> {
    opts.validate()?;
    let mut regs = vec![0u64; r.registers];
    regs[0] = input;
    let mut trace = Trace::new(0, r.registers, input, 0);
    trace.max_values[0] = input;
    let mut state = r.start;
    let mut steps = 0u64;
    let mut loops = LoopDetector::new();
    loop {
        if r.accepting[state] {
            return Ok(RunResult::halted(HaltReason::Accepted, steps, trace));
        }
        if steps >= opts.limit {
            return Ok(RunResult::halted(HaltReason::StepLimit, steps, trace));
        }
        if opts.detect_loops && loops.observe(&(state, regs.clone())) {
            return Ok(RunResult::halted(HaltReason::Loop, steps, trace));
        }
        let key = RmKey { state, zeros: regs.iter().map(|v| *v == 0).collect() };
        let Some(action) = r.transitions.get(&key) else {
            return Ok(RunResult::halted(HaltReason::NoTransition, steps, trace));
        };
        steps += 1;
        for (i, op) in action.ops.iter().enumerate() {
            match op {
                CounterOp::Nop => {}
                CounterOp::Inc => {
                    regs[i] += 1;
                    trace.incremented(i, regs[i]);
                }
                CounterOp::Dec => {
                    if regs[i] == 0 {
                        return Ok(RunResult::halted(HaltReason::DecrementOnZero, steps, trace));
                    }
                    regs[i] -= 1;
                    trace.decremented(i);
                }
            }
        }
        state = action.next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::run::Verdict;

    fn even() -> RegisterMachine {
        let mut r = RegisterMachine::new(1).unwrap();
        r.add("even", "+", "odd", "-").unwrap();
        r.add("odd", "+", "even", "-").unwrap();
        r.add("even", "0", "acc", ".").unwrap();
        let acc = r.state("acc");
        r.set_accepting(acc, true);
        r
    }

    #[test]
    fn even_tester() {
        let r = even();
        assert_eq!(run_rm(&r, 4, RunOptions::new(100)).unwrap().verdict, Verdict::Accept);
        assert_eq!(run_rm(&r, 5, RunOptions::new(100)).unwrap().verdict, Verdict::Reject);
        assert_eq!(run_rm(&r, 4, RunOptions::new(100)).unwrap().steps, 5);
    }

    #[test]
    fn accepting_start_on_zero() {
        let mut r = RegisterMachine::new(1).unwrap();
        let s = r.state("s");
        r.set_accepting(s, true);
        let res = run_rm(&r, 0, RunOptions::new(10)).unwrap();
        assert_eq!((res.verdict, res.steps), (Verdict::Accept, 0));
    }

    #[test]
    fn registers_above_input_are_flagged() {
        let mut r = RegisterMachine::new(2).unwrap();
        r.add("s", "0+", "t", ".+").unwrap();
        r.add("s", "00", "t", ".+").unwrap();
        r.add("t", "0+", "u", ".+").unwrap();
        let res = run_rm(&r, 0, RunOptions::new(10)).unwrap();
        assert!(!res.trace.violations.is_empty());
    }
}
