use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::machine::run::{HaltReason, LoopDetector, RunOptions, RunResult, Trace};
use crate::machine::tape::{is_end_marker, Tape, LEFT_END, RIGHT_END};

pub type StateId = usize;

/// Transition lookup key: control state, the symbol under every head and, for
/// sensing machines, the coincidence labelling of the heads.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MhaKey {
    pub state: StateId,
    pub reads: Vec<char>,
    /// `coincidence[i]` is the smallest head index sharing head `i`'s square.
    pub coincidence: Option<Vec<u8>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MhaAction {
    pub next: StateId,
    /// Direction for every head, each in {-1, 0, 1}.
    pub moves: Vec<i8>,
}

impl MhaAction {
    pub fn single(next: StateId, heads: usize, head: usize, dir: i8) -> Self {
        let mut moves = vec![0; heads];
        moves[head] = dir;
        MhaAction { next, moves }
    }

    pub fn moved_heads(&self) -> usize {
        self.moves.iter().filter(|d| **d != 0).count()
    }
}

/// Deterministic two-way k-head finite automaton over an end-marked tape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiHeadAutomaton {
    alphabet: Vec<char>,
    states: Vec<String>,
    start: StateId,
    accepting: Vec<bool>,
    heads: usize,
    sensing: bool,
    transitions: HashMap<MhaKey, MhaAction>,
}

/// Canonical coincidence labelling of head positions.
pub fn coincidence_of(positions: &[usize]) -> Vec<u8> {
    positions.iter().map(|p| positions.iter().position(|q| q == p).unwrap() as u8).collect()
}

/// All canonical coincidence labellings (set partitions) of `k` heads.
pub fn all_coincidences(k: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for i in 0..k {
        let mut next = Vec::new();
        for c in out {
            let mut own = c.clone();
            own.push(i as u8);
            next.push(own);
            for j in 0..i {
                if c[j] as usize == j {
                    let mut joined = c.clone();
                    joined.push(j as u8);
                    next.push(joined);
                }
            }
        }
        out = next;
    }
    out
}

/// Every k-tuple over `symbols`, in lexicographic order of indices.
pub fn read_tuples(symbols: &[char], k: usize) -> Vec<Vec<char>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                symbols.iter().map(move |s| {
                    let mut t = t.clone();
                    t.push(*s);
                    t
                })
            })
            .collect();
    }
    out
}

pub fn reads_agree(reads: &[char], coincidence: &[u8]) -> bool {
    coincidence.iter().enumerate().all(|(i, &c)| reads[i] == reads[c as usize])
}

impl MultiHeadAutomaton {
    pub fn new(alphabet: &[char], heads: usize, sensing: bool) -> Result<Self> {
        if heads == 0 {
            return Err(Error::Malformed("a multi-head automaton needs at least one head".into()));
        }
        if let Some(&c) = alphabet.iter().find(|c| is_end_marker(**c)) {
            return Err(Error::ReservedSymbol(c));
        }
        let mut alphabet = alphabet.to_vec();
        alphabet.sort_unstable();
        alphabet.dedup();
        Ok(MultiHeadAutomaton {
            alphabet,
            states: Vec::new(),
            start: 0,
            accepting: Vec::new(),
            heads,
            sensing,
            transitions: HashMap::new(),
        })
    }

    /// Returns the id of the named state, creating it if needed. The first state is the start state.
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

    pub fn add_transition(&mut self, key: MhaKey, action: MhaAction) -> Result<()> {
        self.check_key(&key)?;
        if action.next >= self.states.len() {
            return Err(Error::Malformed(format!("unknown next state {}", action.next)));
        }
        if action.moves.len() != self.heads || action.moves.iter().any(|d| !(-1..=1).contains(d)) {
            return Err(Error::Malformed(format!("bad move vector {:?}", action.moves)));
        }
        if self.transitions.contains_key(&key) {
            return Err(Error::Nondeterministic(self.describe_key(&key)));
        }
        self.transitions.insert(key, action);
        Ok(())
    }

    /// Convenience for hand-written machines: `reads` has one char per head.
    pub fn add(&mut self, from: &str, reads: &str, to: &str, moves: &[i8]) -> Result<()> {
        let state = self.state(from);
        let next = self.state(to);
        let key = MhaKey { state, reads: reads.chars().collect(), coincidence: None };
        self.add_transition(key, MhaAction { next, moves: moves.to_vec() })
    }

    fn check_key(&self, key: &MhaKey) -> Result<()> {
        if key.state >= self.states.len() {
            return Err(Error::Malformed(format!("unknown state {}", key.state)));
        }
        if key.reads.len() != self.heads {
            return Err(Error::Malformed(format!(
                "transition reads {} symbols, machine has {} heads",
                key.reads.len(),
                self.heads
            )));
        }
        for &c in &key.reads {
            if !is_end_marker(c) && !self.alphabet.contains(&c) {
                return Err(Error::AlphabetMismatch(c));
            }
        }
        match (&key.coincidence, self.sensing) {
            (None, false) => Ok(()),
            (Some(c), true) => {
                let canonical = c.len() == self.heads
                    && c.iter().enumerate().all(|(i, &j)| (j as usize) <= i && c[j as usize] == j);
                if !canonical || !reads_agree(&key.reads, c) {
                    return Err(Error::Malformed(format!("bad coincidence labelling {c:?}")));
                }
                Ok(())
            }
            (None, true) => Err(Error::Malformed("sensing transition without coincidence".into())),
            (Some(_), false) => Err(Error::Malformed("coincidence given for a non-sensing machine".into())),
        }
    }

    pub fn describe_key(&self, key: &MhaKey) -> String {
        let reads: String = key.reads.iter().collect();
        match &key.coincidence {
            Some(c) => format!("({}, {reads}, {c:?})", self.states[key.state]),
            None => format!("({}, {reads})", self.states[key.state]),
        }
    }

    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    /// Alphabet plus both end-markers.
    pub fn tape_symbols(&self) -> Vec<char> {
        let mut s = vec![LEFT_END];
        s.extend_from_slice(&self.alphabet);
        s.push(RIGHT_END);
        s
    }

    pub fn heads(&self) -> usize {
        self.heads
    }

    pub fn sensing(&self) -> bool {
        self.sensing
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

    pub fn transitions(&self) -> impl Iterator<Item = (&MhaKey, &MhaAction)> {
        self.transitions.iter()
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn lookup(&self, key: &MhaKey) -> Option<&MhaAction> {
        self.transitions.get(key)
    }

    pub fn is_one_move(&self) -> bool {
        self.transitions.values().all(|a| a.moved_heads() == 1)
    }

    pub fn check_input(&self, input: &[char]) -> Result<()> {
        check_alphabet(&self.alphabet, input)
    }

    /// Lookup key for the given state and head positions.
    pub fn key_at(&self, state: StateId, tape: &Tape, positions: &[usize]) -> MhaKey {
        MhaKey {
            state,
            reads: positions.iter().map(|&p| tape.read(p)).collect(),
            coincidence: self.sensing.then(|| coincidence_of(positions)),
        }
    }

    /// Same machine viewed as a sensing machine that ignores coincidence.
    pub fn as_sensing(&self) -> MultiHeadAutomaton {
        if self.sensing {
            return self.clone();
        }
        let mut out = self.clone();
        out.sensing = true;
        out.transitions.clear();
        let partitions = all_coincidences(self.heads);
        for (key, action) in &self.transitions {
            for c in &partitions {
                if reads_agree(&key.reads, c) {
                    let k = MhaKey { coincidence: Some(c.clone()), ..key.clone() };
                    out.transitions.insert(k, action.clone());
                }
            }
        }
        out
    }

    pub(crate) fn with_parts(
        alphabet: Vec<char>,
        states: Vec<String>,
        start: StateId,
        accepting: Vec<bool>,
        heads: usize,
        sensing: bool,
    ) -> Self {
        MultiHeadAutomaton { alphabet, states, start, accepting, heads, sensing, transitions: HashMap::new() }
    }
}

pub(crate) fn check_alphabet(alphabet: &[char], input: &[char]) -> Result<()> {
    for &c in input {
        if is_end_marker(c) {
            return Err(Error::ReservedSymbol(c));
        }
        if !alphabet.contains(&c) {
            return Err(Error::AlphabetMismatch(c));
        }
    }
    Ok(())
}

/// Observer of every configuration of a multi-head run, used for instrumented checks.
pub trait MhaObserver {
    fn observe(&mut self, state: StateId, positions: &[usize]);
}

impl MhaObserver for () {
    fn observe(&mut self, _: StateId, _: &[usize]) {}
}

pub fn run_mha(m: &MultiHeadAutomaton, input: &[char], opts: RunOptions) -> Result<RunResult> {
    run_mha_observed(m, input, opts, &mut ())
}

pub fn run_mha_observed(
    m: &MultiHeadAutomaton,
    input: &[char],
    opts: RunOptions,
    observer: &mut dyn MhaObserver,
) -> Result<RunResult> {
    opts.validate()?;
    m.check_input(input)?;
    let tape = Tape::new(input)?;
    let mut positions = vec![1usize; m.heads];
    let mut state = m.start;
    let mut steps = 0u64;
    let mut trace = Trace::new(m.heads, 0, tape.len() as u64, 1);
    let mut loops = LoopDetector::new();
    loop {
        observer.observe(state, &positions);
        if m.accepting[state] {
            return Ok(RunResult::halted(HaltReason::Accepted, steps, trace));
        }
        if steps >= opts.limit {
            return Ok(RunResult::halted(HaltReason::StepLimit, steps, trace));
        }
        if opts.detect_loops && loops.observe(&(state, positions.clone())) {
            return Ok(RunResult::halted(HaltReason::Loop, steps, trace));
        }
        let key = m.key_at(state, &tape, &positions);
        let Some(action) = m.transitions.get(&key) else {
            return Ok(RunResult::halted(HaltReason::NoTransition, steps, trace));
        };
        steps += 1;
        for (h, &d) in action.moves.iter().enumerate() {
            if d == 0 {
                continue;
            }
            let p = positions[h] as i64 + d as i64;
            if p < 0 || p > tape.last() as i64 {
                return Ok(RunResult::halted(HaltReason::HeadOffTape, steps, trace));
            }
            positions[h] = p as usize;
            trace.head_at(h, p as u64);
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

    #[test]
    fn accept_at_start_takes_no_steps() {
        let mut m = MultiHeadAutomaton::new(&['a'], 1, false).unwrap();
        let s = m.state("s");
        m.set_accepting(s, true);
        let r = run_mha(&m, &chars("a"), RunOptions::new(10)).unwrap();
        assert_eq!((r.verdict, r.steps), (Verdict::Accept, 0));
    }

    #[test]
    fn duplicate_key_is_nondeterministic() {
        let mut m = MultiHeadAutomaton::new(&['a'], 1, false).unwrap();
        m.add("s", "a", "s", &[1]).unwrap();
        assert!(matches!(m.add("s", "a", "t", &[1]), Err(Error::Nondeterministic(_))));
    }

    #[test]
    fn alphabet_mismatch_is_an_error() {
        let m = MultiHeadAutomaton::new(&['a'], 1, false).unwrap();
        assert_eq!(run_mha(&m, &chars("b"), RunOptions::new(10)), Err(Error::AlphabetMismatch('b')));
    }

    #[test]
    fn stationary_cycle_is_a_loop() {
        let mut m = MultiHeadAutomaton::new(&['a'], 1, false).unwrap();
        m.add("s", "a", "t", &[0]).unwrap();
        m.add("t", "a", "s", &[0]).unwrap();
        let r = run_mha(&m, &chars("a"), RunOptions::new(1000)).unwrap();
        assert_eq!(r.reason, HaltReason::Loop);
        let r = run_mha(&m, &chars("a"), RunOptions { limit: 3, detect_loops: false }).unwrap();
        assert_eq!(r.reason, HaltReason::StepLimit);
    }

    #[test]
    fn falling_off_is_a_fault() {
        let mut m = MultiHeadAutomaton::new(&['a'], 1, false).unwrap();
        m.add("s", "a", "s", &[-1]).unwrap();
        m.add("s", "<", "s", &[-1]).unwrap();
        let r = run_mha(&m, &chars("a"), RunOptions::new(10)).unwrap();
        assert_eq!(r.reason, HaltReason::HeadOffTape);
    }

    #[test]
    fn coincidence_partitions() {
        assert_eq!(all_coincidences(1).len(), 1);
        assert_eq!(all_coincidences(2).len(), 2);
        assert_eq!(all_coincidences(3).len(), 5);
        assert_eq!(all_coincidences(4).len(), 15);
        assert_eq!(coincidence_of(&[3, 1, 3, 1]), vec![0, 1, 0, 1]);
    }

    #[test]
    fn empty_input_starts_on_right_end_marker() {
        let mut m = MultiHeadAutomaton::new(&['a'], 2, false).unwrap();
        let s = m.state("s");
        let f = m.state("f");
        m.set_start(s);
        m.set_accepting(f, true);
        m.add("s", ">>", "f", &[0, -1]).unwrap();
        let r = run_mha(&m, &[], RunOptions::new(10)).unwrap();
        assert!(r.accepted());
    }
}
