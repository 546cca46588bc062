use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::machine::counter::{CmKey, CounterBank, CounterMachine, CounterOp, CounterTest};
use crate::machine::run::{HaltReason, LoopDetector, RunOptions, RunResult, Trace};
use crate::machine::tape::{LEFT_END, RIGHT_END};

use super::encoding::{EncodedInput, Item};

/// Storage for the simulated machine's own counters.
pub(crate) trait CounterStore {
    fn tests(&self) -> Vec<CounterTest>;
    fn apply(&mut self, ops: &[CounterOp], trace: &mut Trace) -> Option<HaltReason>;
    /// Called once after every simulated step.
    fn after_step(&mut self) {}
    fn snapshot(&self) -> Vec<u64>;
}

impl CounterStore for CounterBank {
    fn tests(&self) -> Vec<CounterTest> {
        CounterBank::tests(self)
    }

    fn apply(&mut self, ops: &[CounterOp], trace: &mut Trace) -> Option<HaltReason> {
        CounterBank::apply(self, ops, trace, 0)
    }

    fn snapshot(&self) -> Vec<u64> {
        self.values.iter().copied().chain(self.signals.iter().map(|s| u64::from(*s))).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Pos {
    Left,
    /// Offset within a literal, or within the current copy of a run.
    In {
        item: usize,
        off: usize,
    },
    Right,
}

/// The input head over an encoding: the item and offset live in finite control, the copy
/// index inside a run is split over two counters (copies to the left and to the right).
/// Outside a run, each run item keeps `count - 1` on its own counter and one counter is free.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct EncodedHead {
    pos: Pos,
    aux: Vec<u64>,
    /// Counter holding each run item's value while the head is elsewhere.
    slot: Vec<usize>,
    spare: usize,
    /// `(left, right)` counters of the run the head is in.
    inside: Option<(usize, usize)>,
}

impl EncodedHead {
    fn new(items: &[Item]) -> Self {
        let mut aux = Vec::new();
        let mut slot = vec![usize::MAX; items.len()];
        for (i, item) in items.iter().enumerate() {
            if let Item::Run { count, .. } = item {
                slot[i] = aux.len();
                aux.push(count - 1);
            }
        }
        let spare = aux.len();
        aux.push(0);
        let mut head = EncodedHead { pos: Pos::Left, aux, slot, spare, inside: None };
        head.enter(items, 0, true);
        head
    }

    fn read(&self, items: &[Item]) -> char {
        match self.pos {
            Pos::Left => LEFT_END,
            Pos::Right => RIGHT_END,
            Pos::In { item, off } => match &items[item] {
                Item::Literal(w) => w[off],
                Item::Run { word, .. } => word[off],
            },
        }
    }

    fn enter(&mut self, items: &[Item], i: isize, from_left: bool) {
        if i < 0 {
            self.pos = Pos::Left;
            return;
        }
        let i = i as usize;
        let Some(item) = items.get(i) else {
            self.pos = Pos::Right;
            return;
        };
        let width = match item {
            Item::Literal(w) => w.len(),
            Item::Run { word, .. } => {
                self.inside = Some(if from_left { (self.spare, self.slot[i]) } else { (self.slot[i], self.spare) });
                word.len()
            }
        };
        self.pos = Pos::In { item: i, off: if from_left { 0 } else { width - 1 } };
    }

    /// Moves one square, updating the run counters when a copy boundary is crossed.
    fn shift(&mut self, items: &[Item], dir: i8, trace: &mut Trace, base: usize) -> Option<HaltReason> {
        let (item, off) = match self.pos {
            Pos::Left if dir < 0 => return Some(HaltReason::HeadOffTape),
            Pos::Right if dir > 0 => return Some(HaltReason::HeadOffTape),
            Pos::Left => {
                self.enter(items, 0, true);
                return None;
            }
            Pos::Right => {
                self.enter(items, items.len() as isize - 1, false);
                return None;
            }
            Pos::In { item, off } => (item, off),
        };
        match &items[item] {
            Item::Literal(w) => {
                let next = off as isize + dir as isize;
                if next < 0 || next as usize >= w.len() {
                    self.enter(items, item as isize + dir as isize, dir > 0);
                } else {
                    self.pos = Pos::In { item, off: next as usize };
                }
            }
            Item::Run { word, .. } => {
                let p = word.len();
                let (l, r) = self.inside.expect("inside a run");
                let next = off as isize + dir as isize;
                if next >= 0 && (next as usize) < p {
                    self.pos = Pos::In { item, off: next as usize };
                    return None;
                }
                let (from, to) = if dir > 0 { (r, l) } else { (l, r) };
                if self.aux[from] > 0 {
                    self.aux[from] -= 1;
                    self.aux[to] += 1;
                    trace.decremented(base + from);
                    trace.incremented(base + to, self.aux[to]);
                    self.pos = Pos::In { item, off: if dir > 0 { 0 } else { p - 1 } };
                } else {
                    // leaving the run: the full count is now on `to`
                    self.slot[item] = to;
                    self.spare = from;
                    self.inside = None;
                    self.enter(items, item as isize + dir as isize, dir > 0);
                }
            }
        }
        None
    }
}

/// Runs `c` on the word encoded by `e` without ever expanding it: one simulated step per
/// step of `c`, using one counter per run item plus one spare.
pub fn run_on_encoding(c: &CounterMachine, e: &EncodedInput, opts: RunOptions) -> Result<RunResult> {
    opts.validate()?;
    check_items(c, e)?;
    let n = e.len() as u64;
    let mut bank = CounterBank::new(c.counters(), n, c.policy());
    simulate(c, e, &mut bank, opts)
}

pub(crate) fn check_items(c: &CounterMachine, e: &EncodedInput) -> Result<()> {
    let symbols: BTreeSet<char> = e
        .items
        .iter()
        .flat_map(|i| match i {
            Item::Literal(w) => w.clone(),
            Item::Run { word, .. } => word.clone(),
        })
        .collect();
    let v: Vec<char> = symbols.into_iter().collect();
    c.check_input(&v)?;
    if e.items.iter().any(|i| matches!(i, Item::Run { word, count } if word.is_empty() || *count == 0))
        || e.items.iter().any(|i| matches!(i, Item::Literal(w) if w.is_empty()))
    {
        return Err(Error::InvalidArgument("encoding has an empty item".into()));
    }
    Ok(())
}

pub(crate) fn simulate<S: CounterStore>(
    c: &CounterMachine,
    e: &EncodedInput,
    store: &mut S,
    opts: RunOptions,
) -> Result<RunResult> {
    let items = &e.items;
    let n = e.len() as u64;
    let mut head = EncodedHead::new(items);
    let k = c.counters();
    let mut trace = Trace::new(1, k + head.aux.len(), n, 1);
    for (i, v) in head.aux.iter().enumerate() {
        trace.max_values[k + i] = *v;
    }
    let mut state = c.start();
    let mut steps = 0u64;
    let mut loops = LoopDetector::new();
    let reason = loop {
        if c.is_accepting(state) {
            break HaltReason::Accepted;
        }
        if steps >= opts.limit {
            break HaltReason::StepLimit;
        }
        if opts.detect_loops && loops.observe(&(state, head.clone(), store.snapshot())) {
            break HaltReason::Loop;
        }
        let key = CmKey { state, read: head.read(items), tests: store.tests() };
        let Some(action) = c.lookup(&key) else {
            break HaltReason::NoTransition;
        };
        steps += 1;
        if action.dir != 0 {
            if let Some(r) = head.shift(items, action.dir, &mut trace, k) {
                break r;
            }
            trace.head_moves[0] += 1;
        }
        if let Some(r) = store.apply(&action.ops, &mut trace) {
            break r;
        }
        store.after_step();
        state = action.next;
    };
    Ok(RunResult::halted(reason, steps, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounded::{enumerate_bounded_inputs, BoundDescriptor};
    use crate::machine::counter::{run_cm, OverflowPolicy};
    use crate::speedup::encoding::encode_bounded_input;

    /// Zero counters: accepts words over {a, b} that end in b, after walking back to '<'.
    fn ends_in_b() -> CounterMachine {
        let mut c = CounterMachine::new(&['a', 'b'], 0, OverflowPolicy::Simple).unwrap();
        c.add("r", 'a', "", "r", 1, "").unwrap();
        c.add("r", 'b', "", "r", 1, "").unwrap();
        c.add("r", '>', "", "back", -1, "").unwrap();
        c.add("back", 'b', "", "home", -1, "").unwrap();
        c.add("home", 'a', "", "home", -1, "").unwrap();
        c.add("home", 'b', "", "home", -1, "").unwrap();
        c.add("home", '<', "", "acc", 1, "").unwrap();
        let acc = c.state("acc");
        c.set_accepting(acc, true);
        c
    }

    #[test]
    fn matches_direct_runs() {
        let c = ends_in_b();
        for bound in ["a,b", "ab,b", "ab,ba,a"] {
            let b: BoundDescriptor = bound.parse().unwrap();
            for w in enumerate_bounded_inputs(&b, 14) {
                let e = encode_bounded_input(&w, &b).unwrap();
                let want = run_cm(&c, &w, RunOptions::new(10_000)).unwrap();
                let got = run_on_encoding(&c, &e, RunOptions::new(10_000)).unwrap();
                assert_eq!((want.verdict, want.steps), (got.verdict, got.steps), "{w:?}");
                assert!(got.trace.within_bound());
            }
        }
    }

    #[test]
    fn empty_and_mismatch() {
        let c = ends_in_b();
        let b: BoundDescriptor = "a,b".parse().unwrap();
        let e = encode_bounded_input(&[], &b).unwrap();
        let got = run_on_encoding(&c, &e, RunOptions::new(100)).unwrap();
        assert_eq!(got.verdict, run_cm(&c, &[], RunOptions::new(100)).unwrap().verdict);
        let b: BoundDescriptor = "c".parse().unwrap();
        let e = encode_bounded_input(&['c', 'c'], &b).unwrap();
        assert!(matches!(run_on_encoding(&c, &e, RunOptions::new(100)), Err(Error::AlphabetMismatch('c'))));
    }
}
