//! Hand-written machines used by the cross-checks, the command line fixtures and the
//! acceptance tests.

use crate::bounded::StrictBound;
use crate::machine::counter::{CounterMachine, OverflowPolicy};
use crate::machine::mha::{read_tuples, MhaAction, MhaKey, MultiHeadAutomaton};

fn accept(m: &mut MultiHeadAutomaton) {
    let acc = m.state("acc");
    m.set_accepting(acc, true);
}

/// Two heads, `{a^n b^n}`: head 1 runs ahead to the first `b`, then both advance together.
pub fn anbn_2head() -> MultiHeadAutomaton {
    let mut m = MultiHeadAutomaton::new(&['a', 'b'], 2, false).unwrap();
    m.add("s", "aa", "s", &[0, 1]).unwrap();
    m.add("s", "ab", "t", &[1, 1]).unwrap();
    m.add("t", "ab", "t", &[1, 1]).unwrap();
    m.add("t", "b>", "acc", &[0, 0]).unwrap();
    m.add("s", ">>", "acc", &[0, 0]).unwrap();
    accept(&mut m);
    m
}

/// Three heads, `{a^n b^n c^n}`.
pub fn anbncn_3head() -> MultiHeadAutomaton {
    let mut m = MultiHeadAutomaton::new(&['a', 'b', 'c'], 3, false).unwrap();
    m.add("s", "aaa", "s", &[0, 1, 1]).unwrap();
    m.add("s", "abb", "t", &[0, 0, 1]).unwrap();
    m.add("s", ">>>", "acc", &[0, 0, 0]).unwrap();
    m.add("t", "abb", "t", &[0, 0, 1]).unwrap();
    m.add("t", "abc", "cmp", &[1, 1, 1]).unwrap();
    m.add("cmp", "abc", "cmp", &[1, 1, 1]).unwrap();
    m.add("cmp", "bc>", "acc", &[0, 0, 0]).unwrap();
    accept(&mut m);
    m
}

/// Two heads, `{a^n b^n}` by meeting in the middle: head 1 goes to the right end and walks
/// back over the `b`s while head 0 walks over the `a`s.
pub fn anbn_meet_2head() -> MultiHeadAutomaton {
    let mut m = MultiHeadAutomaton::new(&['a', 'b'], 2, false).unwrap();
    for r0 in ['a', 'b', '>'] {
        for r1 in ['a', 'b'] {
            let reads: String = [r0, r1].iter().collect();
            m.add("go", &reads, "go", &[0, 1]).unwrap();
            m.add("cmp2", &reads, "cmp", &[0, -1]).unwrap();
        }
    }
    for r0 in ['a', 'b'] {
        let reads: String = [r0, '>'].iter().collect();
        m.add("go", &reads, "cmp", &[0, -1]).unwrap();
    }
    m.add("go", ">>", "cmp", &[0, -1]).unwrap();
    m.add("cmp", "ab", "cmp2", &[1, 0]).unwrap();
    m.add("cmp", "ba", "acc", &[0, 0]).unwrap();
    m.add("cmp", "><", "acc", &[0, 0]).unwrap();
    accept(&mut m);
    m
}

/// Two heads over `a* b* c*`: as many `a`s as `c`s, with the `b`s skipped by head 1.
pub fn count_ac_2head() -> MultiHeadAutomaton {
    let mut m = MultiHeadAutomaton::new(&['a', 'b', 'c'], 2, false).unwrap();
    for r0 in ['a', 'b', 'c', '>'] {
        for r1 in ['a', 'b'] {
            let reads: String = [r0, r1].iter().collect();
            m.add("skip", &reads, "skip", &[0, 1]).unwrap();
        }
        for r1 in ['c', '>'] {
            let reads: String = [r0, r1].iter().collect();
            m.add("skip", &reads, "cmp", &[0, 0]).unwrap();
        }
    }
    m.add("cmp", "ac", "cmp", &[1, 1]).unwrap();
    for r0 in ['b', 'c', '>'] {
        let reads: String = [r0, '>'].iter().collect();
        m.add("cmp", &reads, "acc", &[0, 0]).unwrap();
    }
    accept(&mut m);
    m
}

/// The multi-head machines checked against the one-counter-per-extra-head simulation,
/// each with its strict bound.
pub fn strict_suite() -> Vec<(&'static str, MultiHeadAutomaton, StrictBound)> {
    let ab: StrictBound = "a,b".parse().unwrap();
    let abc: StrictBound = "a,b,c".parse().unwrap();
    vec![
        ("anbn_2head", anbn_2head(), ab.clone()),
        ("anbncn_3head", anbncn_3head(), abc.clone()),
        ("anbn_meet_2head", anbn_meet_2head(), ab),
        ("count_ac_2head", count_ac_2head(), abc),
    ]
}

/// One counter, `{a^n b^n}`.
pub fn anbn_1counter() -> CounterMachine {
    let mut c = CounterMachine::new(&['a', 'b'], 1, OverflowPolicy::Simple).unwrap();
    for t in ["0", "+"] {
        c.add("a", 'a', t, "a", 1, "+").unwrap();
    }
    c.add("a", 'b', "+", "b", 1, "-").unwrap();
    c.add("a", '>', "0", "acc", 0, ".").unwrap();
    c.add("b", 'b', "+", "b", 1, "-").unwrap();
    c.add("b", '>', "0", "acc", 0, ".").unwrap();
    let acc = c.state("acc");
    c.set_accepting(acc, true);
    c
}

/// Two counters, words over `{a, b}` with as many `a`s as `b`s in any order; the counts
/// are compared while standing on the right end-marker.
pub fn equal_count_2counter() -> CounterMachine {
    let mut c = CounterMachine::new(&['a', 'b'], 2, OverflowPolicy::Simple).unwrap();
    for t in ["00", "0+", "+0", "++"] {
        c.add("scan", 'a', t, "scan", 1, "+.").unwrap();
        c.add("scan", 'b', t, "scan", 1, ".+").unwrap();
        c.add("scan", '>', t, "cmp", 0, "..").unwrap();
    }
    c.add("cmp", '>', "++", "cmp", 0, "--").unwrap();
    c.add("cmp", '>', "00", "acc", 0, "..").unwrap();
    let acc = c.state("acc");
    c.set_accepting(acc, true);
    c
}

/// Two counters, `#a = 2 #b` over `{a, b}`: both letters are counted, then the first
/// counter is decremented twice per decrement of the second.
pub fn double_b_2counter() -> CounterMachine {
    let mut c = CounterMachine::new(&['a', 'b'], 2, OverflowPolicy::Simple).unwrap();
    for t in ["00", "0+", "+0", "++"] {
        c.add("scan", 'a', t, "scan", 1, "+.").unwrap();
        c.add("scan", 'b', t, "scan", 1, ".+").unwrap();
        c.add("scan", '>', t, "cmp", 0, "..").unwrap();
    }
    c.add("cmp", '>', "++", "half", 0, "--").unwrap();
    c.add("half", '>', "++", "cmp", 0, "-.").unwrap();
    c.add("half", '>', "+0", "cmp", 0, "-.").unwrap();
    c.add("cmp", '>', "00", "acc", 0, "..").unwrap();
    let acc = c.state("acc");
    c.set_accepting(acc, true);
    c
}

/// One counter, block overflow: counts every square and then once more on the right
/// end-marker, which overflows; rejects by fault. Words ending in `b` are accepted first.
pub fn overflow_block_1counter() -> CounterMachine {
    let mut c = CounterMachine::new(&['a', 'b'], 1, OverflowPolicy::Block).unwrap();
    for t in ["0", "+"] {
        c.add("s", 'a', t, "s", 1, "+").unwrap();
        c.add("s", 'b', t, "seen_b", 1, "+").unwrap();
        c.add("seen_b", 'a', t, "s", 1, "+").unwrap();
        c.add("seen_b", 'b', t, "seen_b", 1, "+").unwrap();
        c.add("s", '>', t, "s", 0, "+").unwrap();
    }
    c.add("seen_b", '>', "+", "acc", 0, ".").unwrap();
    let acc = c.state("acc");
    c.set_accepting(acc, true);
    c
}

pub fn counter_suite() -> Vec<(&'static str, CounterMachine)> {
    vec![
        ("anbn_1counter", anbn_1counter()),
        ("equal_count_2counter", equal_count_2counter()),
        ("double_b_2counter", double_b_2counter()),
        ("overflow_block_1counter", overflow_block_1counter()),
    ]
}

fn sensing_add(m: &mut MultiHeadAutomaton, from: &str, reads: &str, coincidence: &str, to: &str, moves: &[i8]) {
    let f = m.state(from);
    let t = m.state(to);
    let key = MhaKey {
        state: f,
        reads: reads.chars().collect(),
        coincidence: Some(coincidence.bytes().map(|b| b - b'0').collect()),
    };
    m.add_transition(key, MhaAction { next: t, moves: moves.to_vec() }).unwrap();
}

/// Unary, sensing: head 1 runs to the last square, then the heads close in alternately.
/// Accepts exactly the even lengths.
pub fn unary_even_meeting() -> MultiHeadAutomaton {
    let mut m = MultiHeadAutomaton::new(&['a'], 2, true).unwrap();
    sensing_add(&mut m, "go", "aa", "00", "go", &[0, 1]);
    sensing_add(&mut m, "go", "aa", "01", "go", &[0, 1]);
    sensing_add(&mut m, "go", ">>", "00", "acc", &[0, 0]);
    sensing_add(&mut m, "go", "a>", "01", "x", &[0, -1]);
    sensing_add(&mut m, "x", "aa", "01", "y", &[1, 0]);
    sensing_add(&mut m, "y", "aa", "00", "acc", &[0, 0]);
    sensing_add(&mut m, "y", "aa", "01", "x", &[0, -1]);
    accept(&mut m);
    m
}

/// Unary, sensing: like [`unary_even_meeting`] but head 0 takes two steps per step of
/// head 1; accepts the lengths `n = 1 (mod 3)`.
pub fn unary_mod3_meeting() -> MultiHeadAutomaton {
    let mut m = MultiHeadAutomaton::new(&['a'], 2, true).unwrap();
    sensing_add(&mut m, "go", "aa", "00", "go", &[0, 1]);
    sensing_add(&mut m, "go", "aa", "01", "go", &[0, 1]);
    sensing_add(&mut m, "go", "a>", "01", "x0", &[0, -1]);
    sensing_add(&mut m, "x0", "aa", "00", "acc", &[0, 0]);
    sensing_add(&mut m, "x0", "aa", "01", "x1", &[1, 0]);
    sensing_add(&mut m, "x1", "aa", "01", "x2", &[1, 0]);
    sensing_add(&mut m, "x2", "aa", "01", "x0", &[0, -1]);
    accept(&mut m);
    m
}

/// Unary, built without sensing and then made sensing: head 0 runs at twice the speed of
/// head 1 to the right end, then walks back while head 1 continues, so the heads cross.
/// Accepts iff head 0 reaches the left end-marker exactly when head 1 reaches the right one.
pub fn unary_crossing() -> MultiHeadAutomaton {
    let mut m = MultiHeadAutomaton::new(&['a'], 2, false).unwrap();
    let syms = m.tape_symbols();
    for reads in read_tuples(&syms, 2) {
        let r: String = reads.iter().collect();
        let (r0, r1) = (reads[0], reads[1]);
        if r0 == '>' {
            for s in ["a", "b", "c"] {
                m.add(s, &r, "d1", &[0, 0]).unwrap();
            }
        } else if r1 != '>' && r0 != '<' {
            m.add("a", &r, "b", &[1, 0]).unwrap();
            m.add("b", &r, "c", &[1, 0]).unwrap();
            m.add("c", &r, "a", &[0, 1]).unwrap();
        }
        if r1 == '>' && r0 == '<' {
            m.add("d1", &r, "acc", &[0, 0]).unwrap();
        } else if r1 != '>' {
            m.add("d1", &r, "d2", &[0, 1]).unwrap();
        }
        if r0 != '<' {
            m.add("d2", &r, "d1", &[-1, 0]).unwrap();
        }
    }
    accept(&mut m);
    m.as_sensing()
}

pub fn unary_suite() -> Vec<(&'static str, MultiHeadAutomaton)> {
    vec![
        ("unary_even_meeting", unary_even_meeting()),
        ("unary_mod3_meeting", unary_mod3_meeting()),
        ("unary_crossing", unary_crossing()),
    ]
}

/// One counter over `a* b*` taking about `3 n^2` steps: for every square it measures the
/// distance to the left end-marker, sweeps to the right end-marker and back, and walks
/// the distance out again. Accepts iff the numbers of `a`s and `b`s have equal parity.
pub fn zigzag_quadratic() -> CounterMachine {
    let mut c = CounterMachine::new(&['a', 'b'], 1, OverflowPolicy::Simple).unwrap();
    for pa in 0..2 {
        for pb in 0..2 {
            let q = |s: &str| format!("{s}{pa}{pb}");
            for t in ["0", "+"] {
                for r in ['a', 'b'] {
                    c.add(&q("out"), r, t, &q("out"), -1, "+").unwrap();
                    c.add(&q("right"), r, t, &q("right"), 1, ".").unwrap();
                    c.add(&q("left"), r, t, &q("left"), -1, ".").unwrap();
                }
                c.add(&q("out"), '<', t, &q("right"), 1, ".").unwrap();
                c.add(&q("right"), '>', t, &q("left"), -1, ".").unwrap();
            }
            c.add(&q("left"), '<', "+", &q("back"), 1, "-").unwrap();
            for r in ['a', 'b'] {
                c.add(&q("back"), r, "+", &q("back"), 1, "-").unwrap();
                let (na, nb) = if r == 'a' { (1 - pa, pb) } else { (pa, 1 - pb) };
                c.add(&q("back"), r, "0", &format!("out{na}{nb}"), 1, ".").unwrap();
            }
            if pa == pb {
                for t in ["0", "+"] {
                    c.add(&q("out"), '>', t, "acc", 0, ".").unwrap();
                }
            }
        }
    }
    let start = c.state("out00");
    c.set_start(start);
    let acc = c.state("acc");
    c.set_accepting(acc, true);
    c
}
