use serde::{Deserialize, Serialize};

use crate::bounded::StrictBound;
use crate::error::{Error, Result};
use crate::machine::counter::CounterOp;
use crate::machine::mha::{MhaKey, MultiHeadAutomaton, StateId};
use crate::machine::normalize::normalize_one_move;
use crate::machine::run::{HaltReason, LoopDetector, RunOptions, RunResult, Trace};
use crate::machine::tape::{is_end_marker, Tape, LEFT_END, RIGHT_END};
use crate::transforms::segment::{can_cause_next_event, BoundarySide, EventOutcome};

type Flow<T> = std::result::Result<T, HaltReason>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Assignment {
    Pointer,
    Counter(usize),
}

/// Everything the simulating machine keeps in its finite control.
///
/// None of the fields depends on the input length: states, head symbols,
/// assignments and boundary sides all range over sets fixed by the automaton.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntervalState {
    pub state: StateId,
    pub assignment: Vec<Assignment>,
    /// Boundary each counter head's distance is measured to.
    pub distance: Vec<BoundarySide>,
    pub symbols: Vec<char>,
    /// Boundary the pointer's head sat next to when the interval started.
    pub anchor: BoundarySide,
}

impl IntervalState {
    fn pointer_head(&self) -> usize {
        self.assignment.iter().position(|a| *a == Assignment::Pointer).expect("one pointer")
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationAudit {
    pub counters_used: usize,
    pub max_counter_values: Vec<u64>,
    pub pointer_moves: u64,
    pub counter_ops: u64,
    pub intervals: u64,
    pub role_swaps: u64,
    pub simulated_steps: u64,
    pub max_segment: usize,
    pub max_examined: usize,
    pub finite_control_ok: bool,
    pub violations: Vec<String>,
}

impl SimulationAudit {
    pub fn ok(&self, n: u64) -> bool {
        self.finite_control_ok && self.violations.is_empty() && self.max_counter_values.iter().all(|v| *v <= n)
    }
}

/// One pointer over the tape plus bounded counters; every call to `step` is one machine step.
struct PointerVm<'a> {
    tape: &'a Tape,
    pointer: usize,
    counters: Vec<u64>,
    steps: u64,
    limit: u64,
    trace: Trace,
    pointer_moves: u64,
    counter_ops: u64,
}

impl PointerVm<'_> {
    fn read(&self) -> char {
        self.tape.read(self.pointer)
    }

    fn step(&mut self, dir: i8, op: Option<(usize, CounterOp)>) -> Flow<()> {
        if self.steps >= self.limit {
            return Err(HaltReason::StepLimit);
        }
        self.steps += 1;
        if dir != 0 {
            let p = self.pointer as i64 + dir as i64;
            if p < 0 || p > self.tape.last() as i64 {
                return Err(HaltReason::HeadOffTape);
            }
            self.pointer = p as usize;
            self.pointer_moves += 1;
            self.trace.head_at(0, p as u64);
        }
        if let Some((c, op)) = op {
            self.counter_ops += 1;
            match op {
                CounterOp::Inc => {
                    self.counters[c] += 1;
                    self.trace.incremented(c, self.counters[c]);
                }
                CounterOp::Dec => {
                    if self.counters[c] == 0 {
                        return Err(HaltReason::DecrementOnZero);
                    }
                    self.counters[c] -= 1;
                    self.trace.decremented(c);
                }
                CounterOp::Nop => {}
            }
        }
        Ok(())
    }
}

struct Sim<'a> {
    m: &'a MultiHeadAutomaton,
    bound: &'a StrictBound,
    vm: PointerVm<'a>,
    fc: IntervalState,
    audit: SimulationAudit,
    /// True head positions, kept only to check the simulation against.
    shadow: Vec<usize>,
}

impl Sim<'_> {
    fn order(&self, c: char) -> i64 {
        match c {
            LEFT_END => -1,
            RIGHT_END => self.bound.symbols().len() as i64,
            _ => self.bound.index_of(c).map_or(i64::MAX, |i| i as i64),
        }
    }

    /// Walks the pointer to the boundary square on `side` of the unique block of `s`.
    fn goto_block(&mut self, s: char, side: BoundarySide) -> Flow<()> {
        let target = self.order(s);
        while self.vm.read() != s {
            let dir = if self.order(self.vm.read()) < target { 1 } else { -1 };
            self.vm.step(dir, None)?;
        }
        if is_end_marker(s) {
            return Ok(());
        }
        loop {
            self.vm.step(side.dir(), None)?;
            if self.vm.read() != s {
                return self.vm.step(-side.dir(), None);
            }
        }
    }

    /// Moves toward `side` inside the current block, counting squares on `c`.
    fn measure(&mut self, c: usize, s: char, side: BoundarySide) -> Flow<()> {
        if is_end_marker(s) {
            return Ok(());
        }
        loop {
            self.vm.step(side.dir(), Some((c, CounterOp::Inc)))?;
            if self.vm.read() != s {
                return self.vm.step(-side.dir(), Some((c, CounterOp::Dec)));
            }
        }
    }

    fn excursion(&mut self, c: usize, s: char, dir: i8, radius: usize) -> Flow<Vec<char>> {
        let mut seen = Vec::new();
        while seen.len() < radius {
            self.vm.step(dir, Some((c, CounterOp::Inc)))?;
            let x = self.vm.read();
            seen.push(x);
            if x != s {
                break;
            }
        }
        while self.vm.counters[c] > 0 {
            self.vm.step(-dir, Some((c, CounterOp::Dec)))?;
        }
        Ok(seen)
    }

    fn violation(&mut self, msg: String) -> HaltReason {
        self.audit.violations.push(msg);
        HaltReason::AuditViolation
    }

    fn check_control(&mut self) -> Flow<()> {
        let k = self.m.heads();
        let pointers = self.fc.assignment.iter().filter(|a| **a == Assignment::Pointer).count();
        let mut used: Vec<usize> = self
            .fc
            .assignment
            .iter()
            .filter_map(|a| if let Assignment::Counter(c) = a { Some(*c) } else { None })
            .collect();
        used.sort_unstable();
        let bijective = pointers == 1 && used == (0..k - 1).collect::<Vec<_>>();
        let symbols_ok = self.fc.symbols.iter().all(|s| is_end_marker(*s) || self.bound.index_of(*s).is_some());
        if !(bijective && symbols_ok && self.fc.state < self.m.num_states()) {
            self.audit.finite_control_ok = false;
            return Err(self.violation(format!("finite control out of range: {:?}", self.fc)));
        }
        for h in 0..k {
            if self.fc.symbols[h] != self.vm.tape.read(self.shadow[h]) {
                return Err(self.violation(format!("head {h} symbol out of sync")));
            }
        }
        Ok(())
    }

    /// Locates every counter head, predicts its next event and re-measures it, then
    /// returns the pointer to its own head.
    fn start_interval(&mut self) -> Flow<()> {
        self.check_control()?;
        let p = self.fc.pointer_head();
        let ps = self.fc.symbols[p];
        let beyond = self.vm.pointer as i64 + self.fc.anchor.dir() as i64;
        if self.vm.tape.get(beyond) == Some(ps) {
            return Err(self.violation("pointer head is not next to a boundary at interval start".into()));
        }
        if self.m.heads() == 1 {
            return Ok(());
        }
        self.audit.intervals += 1;
        let radius = self.m.num_states() - 1;
        for h in 0..self.m.heads() {
            let Assignment::Counter(c) = self.fc.assignment[h] else { continue };
            let s = self.fc.symbols[h];
            let side = self.fc.distance[h];
            self.goto_block(s, side)?;
            while self.vm.counters[c] > 0 {
                self.vm.step(-side.dir(), Some((c, CounterOp::Dec)))?;
            }
            let (segment, offset) = if is_end_marker(s) {
                (vec![s], 0)
            } else {
                let mut left = self.excursion(c, s, -1, radius)?;
                let right = self.excursion(c, s, 1, radius)?;
                let offset = left.len();
                left.reverse();
                left.push(s);
                left.extend(right);
                (left, offset)
            };
            self.audit.max_segment = self.audit.max_segment.max(segment.len());
            let prediction = can_cause_next_event(self.m, self.fc.state, h, &segment, offset, &self.fc.symbols)
                .map_err(|e| self.violation(e.to_string()))?;
            self.audit.max_examined = self.audit.max_examined.max(prediction.examined);
            let side = match prediction.outcome {
                EventOutcome::Causes(side) => side,
                EventOutcome::Cannot => BoundarySide::Left,
            };
            self.measure(c, s, side)?;
            self.fc.distance[h] = side;
        }
        self.goto_block(ps, self.fc.anchor)
    }

    fn opposite(dir: i8) -> BoundarySide {
        BoundarySide::of(-dir)
    }

    /// Simulates one step of the automaton.
    fn step(&mut self) -> Flow<()> {
        let key = MhaKey { state: self.fc.state, reads: self.fc.symbols.clone(), coincidence: None };
        let Some(action) = self.m.lookup(&key) else {
            return Err(HaltReason::NoTransition);
        };
        let next = action.next;
        let Some(h) = action.moves.iter().position(|d| *d != 0) else {
            return Err(self.violation("stationary step in a one-move machine".into()));
        };
        let d = action.moves[h];
        self.audit.simulated_steps += 1;
        let s = self.fc.symbols[h];
        if (s == LEFT_END && d < 0) || (s == RIGHT_END && d > 0) {
            return Err(HaltReason::HeadOffTape);
        }
        self.shadow[h] = (self.shadow[h] as i64 + d as i64) as usize;
        match self.fc.assignment[h] {
            Assignment::Pointer => {
                self.vm.step(d, None)?;
                self.fc.state = next;
                let now = self.vm.read();
                if now != s {
                    self.fc.symbols[h] = now;
                    self.fc.anchor = Self::opposite(d);
                    self.start_interval()?;
                }
            }
            Assignment::Counter(c) => {
                let toward = self.fc.distance[h].dir() == d;
                if !toward {
                    self.vm.step(0, Some((c, CounterOp::Inc)))?;
                    self.fc.state = next;
                } else if self.vm.counters[c] > 0 {
                    self.vm.step(0, Some((c, CounterOp::Dec)))?;
                    self.fc.state = next;
                } else {
                    self.swap(h, c, d)?;
                    self.fc.state = next;
                    self.start_interval()?;
                }
            }
        }
        Ok(())
    }

    /// Head `h` crosses its block boundary: the pointer's head is parked in counter `c`
    /// and the pointer follows `h` across.
    fn swap(&mut self, h: usize, c: usize, d: i8) -> Flow<()> {
        self.audit.role_swaps += 1;
        let p = self.fc.pointer_head();
        let ps = self.fc.symbols[p];
        self.measure(c, ps, BoundarySide::Left)?;
        self.fc.assignment[p] = Assignment::Counter(c);
        self.fc.distance[p] = BoundarySide::Left;
        self.goto_block(self.fc.symbols[h], BoundarySide::of(d))?;
        self.vm.step(d, None)?;
        self.fc.symbols[h] = self.vm.read();
        self.fc.assignment[h] = Assignment::Pointer;
        self.fc.anchor = Self::opposite(d);
        Ok(())
    }
}

/// Runs `m` on `input` through a machine with one input pointer and `k - 1` counters.
///
/// The input must match the strict bound. Between events the pointer follows one head while
/// every other head is kept as its distance to one boundary of the block it is in; at each
/// event the heads are relocated and their next boundary is predicted from a short segment.
/// The reported step count is that of the simulating machine.
pub fn heads_to_counters_run(
    m: &MultiHeadAutomaton,
    bound: &StrictBound,
    input: &[char],
    opts: RunOptions,
) -> Result<(RunResult, SimulationAudit)> {
    opts.validate()?;
    if m.sensing() {
        return Err(Error::Unsupported("heads-to-counters needs non-sensing heads".into()));
    }
    if !bound.matches(input) {
        return Err(Error::BoundViolation(format!(
            "input {:?} is not in {}",
            input.iter().collect::<String>(),
            bound.descriptor()
        )));
    }
    m.check_input(input)?;
    let normalized = normalize_one_move(m);
    let tape = Tape::new(input)?;
    let k = m.heads();
    let n = tape.len() as u64;
    let first = tape.read(1);
    let mut assignment = vec![Assignment::Pointer];
    assignment.extend((0..k - 1).map(Assignment::Counter));
    let mut sim = Sim {
        m: &normalized,
        bound,
        vm: PointerVm {
            tape: &tape,
            pointer: 1,
            counters: vec![0; k - 1],
            steps: 0,
            limit: opts.limit,
            trace: Trace::new(1, k - 1, n, 1),
            pointer_moves: 0,
            counter_ops: 0,
        },
        fc: IntervalState {
            state: normalized.start(),
            assignment,
            distance: vec![BoundarySide::Left; k],
            symbols: vec![first; k],
            anchor: BoundarySide::Left,
        },
        audit: SimulationAudit { counters_used: k - 1, finite_control_ok: true, ..Default::default() },
        shadow: vec![1; k],
    };
    let mut loops = LoopDetector::new();
    let reason = (|| -> HaltReason {
        if normalized.is_accepting(sim.fc.state) {
            return HaltReason::Accepted;
        }
        if let Err(r) = sim.start_interval() {
            return r;
        }
        loop {
            if normalized.is_accepting(sim.fc.state) {
                return HaltReason::Accepted;
            }
            if opts.detect_loops && loops.observe(&(sim.fc.clone(), sim.vm.pointer, sim.vm.counters.clone())) {
                return HaltReason::Loop;
            }
            if let Err(r) = sim.step() {
                return r;
            }
        }
    })();
    let Sim { vm, mut audit, .. } = sim;
    audit.max_counter_values = vm.trace.max_values.clone();
    audit.pointer_moves = vm.pointer_moves;
    audit.counter_ops = vm.counter_ops;
    audit.violations.extend(vm.trace.violations.iter().cloned());
    Ok((RunResult::halted(reason, vm.steps, vm.trace), audit))
}
