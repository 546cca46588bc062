use std::collections::{BTreeMap, VecDeque};

use crate::error::{Error, Result};
use crate::machine::counter::{CmKey, CounterMachine, CounterOp, CounterTest, OverflowPolicy};
use crate::machine::mha::{read_tuples, MhaAction, MhaKey, MultiHeadAutomaton, StateId};
use crate::machine::tape::{LEFT_END, RIGHT_END};

/// Control states of the simulating automaton.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Phase {
    /// First step: every head still on square 1.
    Init(StateId),
    /// Counter `i` is the distance of head `i + 1` from the left end-marker.
    Run { state: StateId, empty: bool },
    /// Second half of a decrement out of the overflow square for the masked heads.
    Fix { state: StateId, empty: bool, mask: Vec<bool> },
    /// The counter machine faulted.
    Dead,
}

/// Builds a `(k + 1)`-head automaton accepting exactly what the `k`-counter machine `c` accepts.
///
/// Head 0 mirrors the input head. Head `i + 1` stands on square `v` while counter `i` holds `v`,
/// so zero-tests read the left end-marker. A counter that overflowed under the simple policy
/// parks its head on the right end-marker. Step counts match one for one, except for one extra
/// step whenever a counter is decremented straight out of an overflow.
pub fn counters_to_heads(c: &CounterMachine) -> Result<MultiHeadAutomaton> {
    if c.policy() == OverflowPolicy::Signal {
        return Err(Error::Unsupported("signalled overflow has no head analogue".into()));
    }
    let k = c.counters();
    let heads = k + 1;
    let mut m = MultiHeadAutomaton::new(c.alphabet(), heads, false)?;
    let mut ids: BTreeMap<Phase, StateId> = BTreeMap::new();
    let mut queue = VecDeque::new();

    let name = |p: &Phase| -> String {
        let s = |q: &StateId| c.state_names()[*q].clone();
        match p {
            Phase::Init(q) => format!("{}|init", s(q)),
            Phase::Run { state, empty } => format!("{}{}", s(state), if *empty { "|e" } else { "" }),
            Phase::Fix { state, empty, mask } => {
                let bits: String = mask.iter().map(|b| if *b { '1' } else { '0' }).collect();
                format!("{}{}|fix{bits}", s(state), if *empty { "|e" } else { "" })
            }
            Phase::Dead => "dead#".to_string(),
        }
    };
    let accepting = |p: &Phase| match p {
        Phase::Init(q) | Phase::Run { state: q, .. } | Phase::Fix { state: q, .. } => c.is_accepting(*q),
        Phase::Dead => false,
    };
    let mut intern = |p: Phase, m: &mut MultiHeadAutomaton, queue: &mut VecDeque<(Phase, StateId)>| -> StateId {
        if let Some(id) = ids.get(&p) {
            return *id;
        }
        let id = m.state(&name(&p));
        m.set_accepting(id, accepting(&p));
        ids.insert(p.clone(), id);
        queue.push_back((p, id));
        id
    };

    let start = intern(Phase::Init(c.start()), &mut m, &mut queue);
    m.set_start(start);
    let symbols = m.tape_symbols();

    while let Some((phase, from)) = queue.pop_front() {
        if accepting(&phase) || phase == Phase::Dead {
            continue;
        }
        match phase.clone() {
            Phase::Init(q) => {
                for &s in symbols.iter().filter(|s| **s != LEFT_END) {
                    let empty = s == RIGHT_END;
                    let key = CmKey { state: q, read: s, tests: vec![CounterTest::Zero; k] };
                    let Some(a) = c.lookup(&key) else { continue };
                    let mut moves = vec![0i8; heads];
                    moves[0] = a.dir;
                    let mut dead = false;
                    for (i, op) in a.ops.iter().enumerate() {
                        // counter heads start one square right of the value they represent
                        moves[i + 1] = match op {
                            CounterOp::Nop => -1,
                            CounterOp::Inc if empty && c.policy() == OverflowPolicy::Block => {
                                dead = true;
                                0
                            }
                            CounterOp::Inc => 0,
                            CounterOp::Dec => {
                                dead = true;
                                0
                            }
                        };
                    }
                    let next = if dead {
                        moves = vec![0; heads];
                        Phase::Dead
                    } else {
                        Phase::Run { state: a.next, empty }
                    };
                    let to = intern(next, &mut m, &mut queue);
                    let reads = vec![s; heads];
                    m.add_transition(MhaKey { state: from, reads, coincidence: None }, MhaAction { next: to, moves })?;
                }
            }
            Phase::Run { state, empty } => {
                for reads in read_tuples(&symbols, heads) {
                    let mut tests = Vec::with_capacity(k);
                    let mut blocked = false;
                    for &r in &reads[1..] {
                        tests.push(match r {
                            LEFT_END => CounterTest::Zero,
                            RIGHT_END if c.policy() == OverflowPolicy::Block => {
                                // only reachable after an overflow the counter machine faulted on
                                blocked = true;
                                CounterTest::Zero
                            }
                            RIGHT_END if empty => CounterTest::Zero,
                            _ => CounterTest::Positive,
                        });
                    }
                    if blocked {
                        continue;
                    }
                    let key = CmKey { state, read: reads[0], tests };
                    let Some(a) = c.lookup(&key) else { continue };
                    let mut moves = vec![0i8; heads];
                    moves[0] = a.dir;
                    let mut mask = vec![false; heads];
                    let mut dead = false;
                    for (i, op) in a.ops.iter().enumerate() {
                        let r = reads[i + 1];
                        moves[i + 1] = match (r, op) {
                            (_, CounterOp::Nop) => 0,
                            (LEFT_END, CounterOp::Dec) => {
                                dead = true;
                                0
                            }
                            (RIGHT_END, CounterOp::Inc) => 0,
                            (RIGHT_END, CounterOp::Dec) if empty => {
                                dead = true;
                                0
                            }
                            (RIGHT_END, CounterOp::Dec) => {
                                mask[i + 1] = true;
                                -1
                            }
                            (_, CounterOp::Inc) => 1,
                            (_, CounterOp::Dec) => -1,
                        };
                    }
                    let next = if dead {
                        moves = vec![0; heads];
                        Phase::Dead
                    } else if mask.iter().any(|b| *b) {
                        Phase::Fix { state: a.next, empty, mask }
                    } else {
                        Phase::Run { state: a.next, empty }
                    };
                    let to = intern(next, &mut m, &mut queue);
                    m.add_transition(MhaKey { state: from, reads, coincidence: None }, MhaAction { next: to, moves })?;
                }
            }
            Phase::Fix { state, empty, mask } => {
                let to = intern(Phase::Run { state, empty }, &mut m, &mut queue);
                let moves: Vec<i8> = mask.iter().map(|b| if *b { -1 } else { 0 }).collect();
                for reads in read_tuples(&symbols, heads) {
                    m.add_transition(
                        MhaKey { state: from, reads, coincidence: None },
                        MhaAction { next: to, moves: moves.clone() },
                    )?;
                }
            }
            Phase::Dead => {}
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::counter::run_cm;
    use crate::machine::mha::run_mha;
    use crate::machine::run::RunOptions;

    fn overflow_then_count_down() -> CounterMachine {
        // increments n + 2 times while sweeping right, then counts the counter down while
        // walking left; accepts iff it reaches the left end-marker exactly when the counter empties
        let mut c = CounterMachine::new(&['a'], 1, OverflowPolicy::Simple).unwrap();
        for t in ["0", "+"] {
            c.add("up", 'a', t, "up", 1, "+").unwrap();
            c.add("up", '>', t, "extra", 0, "+").unwrap();
            c.add("extra", '>', t, "down", -1, "+").unwrap();
        }
        c.add("down", 'a', "+", "down", -1, "-").unwrap();
        c.add("down", '<', "+", "acc", 0, "-").unwrap();
        let acc = c.state("acc");
        c.set_accepting(acc, true);
        c
    }

    #[test]
    fn overflow_is_simulated() {
        let c = overflow_then_count_down();
        let m = counters_to_heads(&c).unwrap();
        for n in 0..8 {
            let w = vec!['a'; n];
            let a = run_cm(&c, &w, RunOptions::new(1000)).unwrap();
            let b = run_mha(&m, &w, RunOptions::new(1000)).unwrap();
            assert_eq!(a.accepted(), b.accepted(), "n = {n}");
        }
    }

    #[test]
    fn zero_counters_mirror_the_head() {
        let mut c = CounterMachine::new(&['a', 'b'], 0, OverflowPolicy::Simple).unwrap();
        c.add("s", 'a', "", "s", 1, "").unwrap();
        c.add("s", 'b', "", "t", 1, "").unwrap();
        c.add("t", '>', "", "acc", 0, "").unwrap();
        let acc = c.state("acc");
        c.set_accepting(acc, true);
        let m = counters_to_heads(&c).unwrap();
        assert_eq!(m.heads(), 1);
        for w in ["", "a", "ab", "aab", "ba", "abb"] {
            let w: Vec<char> = w.chars().collect();
            let a = run_cm(&c, &w, RunOptions::new(100)).unwrap();
            let b = run_mha(&m, &w, RunOptions::new(100)).unwrap();
            assert_eq!((a.accepted(), a.steps), (b.accepted(), b.steps));
        }
    }

    #[test]
    fn signal_policy_is_unsupported() {
        let c = CounterMachine::new(&['a'], 1, OverflowPolicy::Signal).unwrap();
        assert!(matches!(counters_to_heads(&c), Err(Error::Unsupported(_))));
    }
}
