use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::machine::mha::{check_alphabet, StateId};
use crate::machine::run::{HaltReason, LoopDetector, RunOptions, RunResult, Trace};
use crate::machine::tape::{is_end_marker, Tape};

/// What happens when a counter at the input length is incremented.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OverflowPolicy {
    /// The counter keeps its value.
    #[default]
    Simple,
    /// The run faults.
    Block,
    /// The counter keeps its value and the next lookup sees `Overflowed` for it.
    Signal,
}

/// Result of testing one counter, as seen by the transition lookup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CounterTest {
    Zero,
    Positive,
    Overflowed,
}

impl CounterTest {
    pub fn from_char(c: char) -> Result<Self> {
        match c {
            '0' => Ok(CounterTest::Zero),
            '+' => Ok(CounterTest::Positive),
            '!' => Ok(CounterTest::Overflowed),
            _ => Err(Error::Malformed(format!("bad counter test {c:?}"))),
        }
    }

    pub fn to_char(self) -> char {
        match self {
            CounterTest::Zero => '0',
            CounterTest::Positive => '+',
            CounterTest::Overflowed => '!',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CounterOp {
    Nop,
    Inc,
    Dec,
}

impl CounterOp {
    pub fn from_char(c: char) -> Result<Self> {
        match c {
            '.' => Ok(CounterOp::Nop),
            '+' => Ok(CounterOp::Inc),
            '-' => Ok(CounterOp::Dec),
            _ => Err(Error::Malformed(format!("bad counter op {c:?}"))),
        }
    }

    pub fn to_char(self) -> char {
        match self {
            CounterOp::Nop => '.',
            CounterOp::Inc => '+',
            CounterOp::Dec => '-',
        }
    }

    pub fn delta(self) -> i64 {
        match self {
            CounterOp::Nop => 0,
            CounterOp::Inc => 1,
            CounterOp::Dec => -1,
        }
    }
}

pub(crate) fn parse_tests(s: &str) -> Result<Vec<CounterTest>> {
    s.chars().map(CounterTest::from_char).collect()
}

pub(crate) fn parse_ops(s: &str) -> Result<Vec<CounterOp>> {
    s.chars().map(CounterOp::from_char).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CmKey {
    pub state: StateId,
    pub read: char,
    pub tests: Vec<CounterTest>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CmAction {
    pub next: StateId,
    pub dir: i8,
    pub ops: Vec<CounterOp>,
}

/// Deterministic machine with one two-way head and `k` counters bounded by the input length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterMachine {
    alphabet: Vec<char>,
    states: Vec<String>,
    start: StateId,
    accepting: Vec<bool>,
    counters: usize,
    policy: OverflowPolicy,
    transitions: HashMap<CmKey, CmAction>,
}

impl CounterMachine {
    pub fn new(alphabet: &[char], counters: usize, policy: OverflowPolicy) -> Result<Self> {
        if let Some(&c) = alphabet.iter().find(|c| is_end_marker(**c)) {
            return Err(Error::ReservedSymbol(c));
        }
        let mut alphabet = alphabet.to_vec();
        alphabet.sort_unstable();
        alphabet.dedup();
        Ok(CounterMachine {
            alphabet,
            states: Vec::new(),
            start: 0,
            accepting: Vec::new(),
            counters,
            policy,
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

    pub fn add_transition(&mut self, key: CmKey, action: CmAction) -> Result<()> {
        if key.state >= self.states.len() || action.next >= self.states.len() {
            return Err(Error::Malformed("transition refers to an unknown state".into()));
        }
        if !is_end_marker(key.read) && !self.alphabet.contains(&key.read) {
            return Err(Error::AlphabetMismatch(key.read));
        }
        if key.tests.len() != self.counters || action.ops.len() != self.counters {
            return Err(Error::Malformed(format!(
                "transition must test and operate on exactly {} counters",
                self.counters
            )));
        }
        if self.policy != OverflowPolicy::Signal && key.tests.contains(&CounterTest::Overflowed) {
            return Err(Error::Malformed("overflow test requires the signal policy".into()));
        }
        if !(-1..=1).contains(&action.dir) {
            return Err(Error::Malformed(format!("bad head direction {}", action.dir)));
        }
        if self.transitions.contains_key(&key) {
            let tests: String = key.tests.iter().map(|t| t.to_char()).collect();
            return Err(Error::Nondeterministic(format!("({}, {}, {tests})", self.states[key.state], key.read)));
        }
        self.transitions.insert(key, action);
        Ok(())
    }

    /// Convenience for hand-written machines. `tests` uses `0`, `+`, `!` per counter and
    /// `ops` uses `+`, `-`, `.` per counter.
    pub fn add(&mut self, from: &str, read: char, tests: &str, to: &str, dir: i8, ops: &str) -> Result<()> {
        let state = self.state(from);
        let next = self.state(to);
        let key = CmKey { state, read, tests: parse_tests(tests)? };
        self.add_transition(key, CmAction { next, dir, ops: parse_ops(ops)? })
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn counters(&self) -> usize {
        self.counters
    }

    pub fn policy(&self) -> OverflowPolicy {
        self.policy
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

    pub fn lookup(&self, key: &CmKey) -> Option<&CmAction> {
        self.transitions.get(key)
    }

    pub fn transitions(&self) -> impl Iterator<Item = (&CmKey, &CmAction)> {
        self.transitions.iter()
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn check_input(&self, input: &[char]) -> Result<()> {
        check_alphabet(&self.alphabet, input)
    }
}

/// Bounded counter bank shared by the counter-machine style interpreters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CounterBank {
    pub values: Vec<u64>,
    pub signals: Vec<bool>,
    pub bound: u64,
    pub policy: OverflowPolicy,
}

impl CounterBank {
    pub fn new(k: usize, bound: u64, policy: OverflowPolicy) -> Self {
        CounterBank { values: vec![0; k], signals: vec![false; k], bound, policy }
    }

    pub fn tests(&self) -> Vec<CounterTest> {
        self.values
            .iter()
            .zip(&self.signals)
            .map(|(&v, &s)| {
                if s {
                    CounterTest::Overflowed
                } else if v == 0 {
                    CounterTest::Zero
                } else {
                    CounterTest::Positive
                }
            })
            .collect()
    }

    /// Applies one operation per counter. Signals raised by the previous step are cleared.
    pub fn apply(&mut self, ops: &[CounterOp], trace: &mut Trace, offset: usize) -> Option<HaltReason> {
        self.signals.iter_mut().for_each(|s| *s = false);
        for (i, op) in ops.iter().enumerate() {
            match op {
                CounterOp::Nop => {}
                CounterOp::Dec => {
                    if self.values[i] == 0 {
                        return Some(HaltReason::DecrementOnZero);
                    }
                    self.values[i] -= 1;
                    trace.decremented(offset + i);
                }
                CounterOp::Inc => {
                    if self.values[i] >= self.bound {
                        trace.overflows += 1;
                        match self.policy {
                            OverflowPolicy::Simple => {}
                            OverflowPolicy::Block => return Some(HaltReason::Overflow),
                            OverflowPolicy::Signal => self.signals[i] = true,
                        }
                    } else {
                        self.values[i] += 1;
                        trace.incremented(offset + i, self.values[i]);
                    }
                }
            }
        }
        None
    }
}

pub fn run_cm(c: &CounterMachine, input: &[char], opts: RunOptions) -> Result<RunResult> {
    opts.validate()?;
    c.check_input(input)?;
    let tape = Tape::new(input)?;
    let n = tape.len() as u64;
    let mut bank = CounterBank::new(c.counters, n, c.policy);
    let mut pos = 1usize;
    let mut state = c.start;
    let mut steps = 0u64;
    let mut trace = Trace::new(1, c.counters, n, 1);
    let mut loops = LoopDetector::new();
    loop {
        if c.accepting[state] {
            return Ok(RunResult::halted(HaltReason::Accepted, steps, trace));
        }
        if steps >= opts.limit {
            return Ok(RunResult::halted(HaltReason::StepLimit, steps, trace));
        }
        if opts.detect_loops && loops.observe(&(state, pos, bank.values.clone(), bank.signals.clone())) {
            return Ok(RunResult::halted(HaltReason::Loop, steps, trace));
        }
        let key = CmKey { state, read: tape.read(pos), tests: bank.tests() };
        let Some(action) = c.transitions.get(&key) else {
            return Ok(RunResult::halted(HaltReason::NoTransition, steps, trace));
        };
        steps += 1;
        if action.dir != 0 {
            let p = pos as i64 + action.dir as i64;
            if p < 0 || p > tape.last() as i64 {
                return Ok(RunResult::halted(HaltReason::HeadOffTape, steps, trace));
            }
            pos = p as usize;
            trace.head_at(0, pos as u64);
        }
        if let Some(fault) = bank.apply(&action.ops, &mut trace, 0) {
            return Ok(RunResult::halted(fault, steps, trace));
        }
        state = action.next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::run::Verdict;

    fn chars(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    /// Counts the input on the way right, then pays the count back on the way left.
    fn there_and_back() -> CounterMachine {
        let mut c = CounterMachine::new(&['a'], 1, OverflowPolicy::Simple).unwrap();
        for t in ["0", "+"] {
            c.add("right", 'a', t, "right", 1, "+").unwrap();
            c.add("right", '>', t, "left", -1, ".").unwrap();
        }
        c.add("left", 'a', "+", "left", -1, "-").unwrap();
        c.add("left", '<', "0", "acc", 0, ".").unwrap();
        let acc = c.state("acc");
        c.set_accepting(acc, true);
        c
    }

    #[test]
    fn counts_up_to_input_length() {
        let r = run_cm(&there_and_back(), &chars("aa"), RunOptions::new(100)).unwrap();
        assert_eq!(r.verdict, Verdict::Accept);
        assert_eq!(r.trace.max_values, vec![2]);
        assert!(r.trace.within_bound());
    }

    #[test]
    fn missing_transition_rejects() {
        let mut c = CounterMachine::new(&['a'], 1, OverflowPolicy::Simple).unwrap();
        c.state("s");
        let r = run_cm(&c, &chars("a"), RunOptions::new(100)).unwrap();
        assert_eq!((r.verdict, r.reason, r.steps), (Verdict::Reject, HaltReason::NoTransition, 0));
    }

    #[test]
    fn decrement_on_zero_faults() {
        let mut c = CounterMachine::new(&['a'], 1, OverflowPolicy::Simple).unwrap();
        c.add("s", 'a', "0", "s", 0, "-").unwrap();
        let r = run_cm(&c, &chars("a"), RunOptions::new(100)).unwrap();
        assert_eq!((r.verdict, r.reason), (Verdict::Fault, HaltReason::DecrementOnZero));
    }

    fn pump(policy: OverflowPolicy) -> CounterMachine {
        // increments while standing still; accepts once an overflow signal is seen
        let mut c = CounterMachine::new(&['a'], 1, policy).unwrap();
        c.add("s", 'a', "0", "s", 0, "+").unwrap();
        c.add("s", 'a', "+", "s", 0, "+").unwrap();
        if policy == OverflowPolicy::Signal {
            c.add("s", 'a', "!", "acc", 0, ".").unwrap();
            let acc = c.state("acc");
            c.set_accepting(acc, true);
        }
        c
    }

    #[test]
    fn overflow_policies() {
        let input = chars("aaa");
        let simple = run_cm(&pump(OverflowPolicy::Simple), &input, RunOptions::new(50)).unwrap();
        assert_eq!(simple.reason, HaltReason::Loop);
        assert_eq!(simple.trace.max_values, vec![3]);
        let block = run_cm(&pump(OverflowPolicy::Block), &input, RunOptions::new(50)).unwrap();
        assert_eq!((block.reason, block.steps), (HaltReason::Overflow, 4));
        let signal = run_cm(&pump(OverflowPolicy::Signal), &input, RunOptions::new(50)).unwrap();
        assert_eq!((signal.verdict, signal.steps), (Verdict::Accept, 5));
    }

    #[test]
    fn runs_are_reproducible() {
        let c = there_and_back();
        let a = run_cm(&c, &chars("aaaa"), RunOptions::new(100)).unwrap();
        let b = run_cm(&c, &chars("aaaa"), RunOptions::new(100)).unwrap();
        assert_eq!(a, b);
    }
}
