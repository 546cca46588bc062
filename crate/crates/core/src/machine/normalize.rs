//! Normal forms for multi-head automata: one head move per step, and sorted heads.

use std::collections::{BTreeMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::machine::mha::{all_coincidences, read_tuples, reads_agree, MhaAction, MhaKey, MultiHeadAutomaton, StateId};
use crate::machine::tape::RIGHT_END;

enum Resolved {
    Moving(MhaAction),
    Accept,
    Halt,
}

/// Follows stationary transitions from `key` until a move, an accepting state or a halt.
fn resolve(m: &MultiHeadAutomaton, key: &MhaKey) -> Resolved {
    let mut seen = HashSet::new();
    let mut key = key.clone();
    seen.insert(key.state);
    loop {
        let Some(action) = m.lookup(&key) else {
            return Resolved::Halt;
        };
        if action.moved_heads() > 0 {
            return Resolved::Moving(action.clone());
        }
        if m.is_accepting(action.next) {
            return Resolved::Accept;
        }
        if !seen.insert(action.next) {
            // stationary cycle: the original never halts, so rejecting is equivalent
            return Resolved::Halt;
        }
        key.state = action.next;
    }
}

fn keys_for_all_reads(m: &MultiHeadAutomaton, state: StateId) -> Vec<MhaKey> {
    let symbols = m.tape_symbols();
    let mut out = Vec::new();
    for reads in read_tuples(&symbols, m.heads()) {
        if m.sensing() {
            for c in all_coincidences(m.heads()) {
                if reads_agree(&reads, &c) {
                    out.push(MhaKey { state, reads: reads.clone(), coincidence: Some(c) });
                }
            }
        } else {
            out.push(MhaKey { state, reads, coincidence: None });
        }
    }
    out
}

fn empty_like(m: &MultiHeadAutomaton) -> MultiHeadAutomaton {
    let accepting = (0..m.num_states()).map(|s| m.is_accepting(s)).collect();
    MultiHeadAutomaton::with_parts(
        m.alphabet().to_vec(),
        m.state_names().to_vec(),
        m.start(),
        accepting,
        m.heads(),
        m.sensing(),
    )
}

/// Equivalent machine in which every transition moves exactly one head by one square.
///
/// Stationary transitions are folded into the control state; transitions moving several
/// heads are serialised through intermediate states that ignore what they read.
pub fn normalize_one_move(m: &MultiHeadAutomaton) -> MultiHeadAutomaton {
    let mut out = empty_like(m);
    let heads = m.heads();
    let mut pending: BTreeMap<(StateId, Vec<i8>), StateId> = BTreeMap::new();
    let mut sink = None;

    let mut keys: Vec<&MhaKey> = m.transitions().map(|(k, _)| k).collect();
    keys.sort();
    for key in keys {
        if m.is_accepting(key.state) {
            continue;
        }
        let action = match resolve(m, key) {
            Resolved::Halt => continue,
            Resolved::Accept => {
                let target = *sink.get_or_insert_with(|| {
                    let s = out.state("accept#");
                    out.set_accepting(s, true);
                    s
                });
                let dir = if key.reads[0] == RIGHT_END { -1 } else { 1 };
                MhaAction::single(target, heads, 0, dir)
            }
            Resolved::Moving(a) => chain(&mut out, &mut pending, m, a.next, &a.moves),
        };
        out.add_transition(key.clone(), action).expect("keys are unique");
    }

    // intermediate states accept every read and perform the next queued move
    let mut done = HashSet::new();
    loop {
        let todo: Vec<_> =
            pending.iter().filter(|(_, s)| !done.contains(*s)).map(|((t, mv), s)| (*t, mv.clone(), *s)).collect();
        if todo.is_empty() {
            break;
        }
        for (target, moves, state) in todo {
            done.insert(state);
            let action = chain(&mut out, &mut pending, m, target, &moves);
            for key in keys_for_all_reads(&out, state) {
                out.add_transition(key, action.clone()).expect("fresh state");
            }
        }
    }
    out
}

/// First move of `moves`, continuing in an intermediate state for the rest.
fn chain(
    out: &mut MultiHeadAutomaton,
    pending: &mut BTreeMap<(StateId, Vec<i8>), StateId>,
    m: &MultiHeadAutomaton,
    target: StateId,
    moves: &[i8],
) -> MhaAction {
    let first = moves.iter().position(|d| *d != 0).expect("at least one move");
    let mut rest = moves.to_vec();
    rest[first] = 0;
    let next = if rest.iter().all(|d| *d == 0) {
        target
    } else {
        let tag: String = rest
            .iter()
            .map(|d| match d {
                -1 => 'L',
                1 => 'R',
                _ => '_',
            })
            .collect();
        let name = format!("{}~{}", m.state_names()[target], tag);
        *pending.entry((target, rest)).or_insert_with(|| out.state(&name))
    };
    MhaAction::single(next, m.heads(), first, moves[first])
}

/// Coincidence labellings of sorted heads: groups are contiguous runs of indices.
fn sorted_coincidences(k: usize) -> Vec<Vec<u8>> {
    all_coincidences(k).into_iter().filter(|c| (1..k).all(|j| c[j] as usize == j || c[j] == c[j - 1])).collect()
}

/// Equivalent sensing machine whose head positions are non-decreasing in head index.
///
/// The control state carries a permutation from physical heads to the roles of the
/// original machine; whenever a head would overtake a coinciding neighbour, the
/// outermost head of the group moves instead and the two roles are exchanged.
pub fn normalize_head_order(m: &MultiHeadAutomaton) -> Result<MultiHeadAutomaton> {
    if !m.sensing() {
        return Err(Error::Unsupported(
            "head-order normalisation needs a sensing machine to detect transpositions".into(),
        ));
    }
    let base;
    let m = if m.is_one_move() {
        m
    } else {
        base = normalize_one_move(m);
        &base
    };
    let k = m.heads();
    let mut out = MultiHeadAutomaton::with_parts(m.alphabet().to_vec(), Vec::new(), 0, Vec::new(), k, true);
    let name = |q: StateId, perm: &[u8]| {
        let p: String = perm.iter().map(|r| char::from(b'0' + *r)).collect();
        format!("{}@{}", m.state_names()[q], p)
    };
    let identity: Vec<u8> = (0..k as u8).collect();
    let start = out.state(&name(m.start(), &identity));
    out.set_start(start);
    out.set_accepting(start, m.is_accepting(m.start()));

    let symbols = m.tape_symbols();
    let groups = sorted_coincidences(k);
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert((m.start(), identity.clone()));
    queue.push_back((m.start(), identity));
    while let Some((q, perm)) = queue.pop_front() {
        if m.is_accepting(q) {
            continue;
        }
        let here = out.state(&name(q, &perm));
        let mut role_of = vec![0usize; k];
        for (j, &r) in perm.iter().enumerate() {
            role_of[r as usize] = j;
        }
        for reads in read_tuples(&symbols, k) {
            for c in &groups {
                if !reads_agree(&reads, c) {
                    continue;
                }
                let orig_reads: Vec<char> = (0..k).map(|r| reads[role_of[r]]).collect();
                let orig_c: Vec<u8> = (0..k)
                    .map(|r| {
                        let g = c[role_of[r]];
                        (0..k).find(|&s| c[role_of[s]] == g).unwrap() as u8
                    })
                    .collect();
                let key = MhaKey { state: q, reads: orig_reads, coincidence: Some(orig_c) };
                let Some(action) = m.lookup(&key) else { continue };
                let role = action.moves.iter().position(|d| *d != 0).expect("one-move machine");
                let dir = action.moves[role];
                let j = role_of[role];
                let group: Vec<usize> = (0..k).filter(|&i| c[i] == c[j]).collect();
                let mover = if dir > 0 { *group.last().unwrap() } else { group[0] };
                let mut next_perm = perm.clone();
                next_perm.swap(j, mover);
                let next_q = action.next;
                let next = out.state(&name(next_q, &next_perm));
                out.set_accepting(next, m.is_accepting(next_q));
                if seen.insert((next_q, next_perm.clone())) {
                    queue.push_back((next_q, next_perm));
                }
                let new_key = MhaKey { state: here, reads: reads.clone(), coincidence: Some(c.clone()) };
                out.add_transition(new_key, MhaAction::single(next, k, mover, dir))?;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::mha::{run_mha, run_mha_observed, MhaObserver};
    use crate::machine::run::RunOptions;

    fn words(alphabet: &[char], max_len: usize) -> Vec<Vec<char>> {
        let mut out = vec![Vec::new()];
        let mut layer = vec![Vec::new()];
        for _ in 0..max_len {
            layer = layer
                .iter()
                .flat_map(|w: &Vec<char>| alphabet.iter().map(move |c| [w.clone(), vec![*c]].concat()))
                .collect();
            out.extend(layer.iter().cloned());
        }
        out
    }

    fn same_acceptance(a: &MultiHeadAutomaton, b: &MultiHeadAutomaton, inputs: &[Vec<char>]) {
        for w in inputs {
            let ra = run_mha(a, w, RunOptions::new(100_000)).unwrap();
            let rb = run_mha(b, w, RunOptions::new(100_000)).unwrap();
            assert_eq!(ra.accepted(), rb.accepted(), "input {:?}", w.iter().collect::<String>());
        }
    }

    /// Two heads; a stationary state change and a double move mixed in.
    fn mixed() -> MultiHeadAutomaton {
        let mut m = MultiHeadAutomaton::new(&['a', 'b'], 2, false).unwrap();
        for r in ["aa", "ab", "ba", "bb"] {
            m.add("s", r, "t", &[0, 0]).unwrap();
        }
        m.add("t", "aa", "s", &[1, 1]).unwrap();
        m.add("t", "ab", "s", &[1, 0]).unwrap();
        m.add("t", "ba", "u", &[0, 1]).unwrap();
        m.add("t", "bb", "s", &[1, 1]).unwrap();
        m.add("s", ">>", "acc", &[0, 0]).unwrap();
        m.add("s", ">a", "s", &[0, 1]).unwrap();
        m.add("s", ">b", "s", &[0, 1]).unwrap();
        m.add("u", "b>", "acc", &[-1, 0]).unwrap();
        m.add("u", "bb", "u", &[0, 1]).unwrap();
        m.add("u", "ba", "u", &[0, 1]).unwrap();
        let acc = m.state("acc");
        m.set_accepting(acc, true);
        m
    }

    #[test]
    fn one_move_has_no_stationary_or_double_moves() {
        let n = normalize_one_move(&mixed());
        assert!(n.is_one_move());
        same_acceptance(&mixed(), &n, &words(&['a', 'b'], 10));
    }

    #[test]
    fn one_move_is_idempotent() {
        let n = normalize_one_move(&mixed());
        let nn = normalize_one_move(&n);
        assert_eq!(nn.num_states(), n.num_states());
        assert_eq!(nn.transition_count(), n.transition_count());
    }

    /// Two sensing heads over a unary tape: head 1 runs to the end, head 0 follows, then head 0
    /// walks back past head 1's square while head 1 stays; accepts on even length.
    fn crossing() -> MultiHeadAutomaton {
        let mut m = MultiHeadAutomaton::new(&['a'], 2, false).unwrap();
        m.add("go", "aa", "go", &[0, 1]).unwrap();
        m.add("go", "a>", "back", &[1, 0]).unwrap();
        m.add("go", ">>", "acc", &[0, 0]).unwrap();
        m.add("back", "a>", "back", &[1, 0]).unwrap();
        m.add("back", ">>", "ret0", &[-1, -1]).unwrap();
        m.add("ret0", "aa", "ret1", &[-1, 0]).unwrap();
        m.add("ret1", "aa", "ret0", &[-1, 0]).unwrap();
        m.add("ret0", "<a", "acc", &[0, 0]).unwrap();
        let acc = m.state("acc");
        m.set_accepting(acc, true);
        m.as_sensing()
    }

    struct Sorted(bool);
    impl MhaObserver for Sorted {
        fn observe(&mut self, _: StateId, p: &[usize]) {
            self.0 &= p.windows(2).all(|w| w[0] <= w[1]);
        }
    }

    #[test]
    fn head_order_keeps_heads_sorted() {
        let m = crossing();
        let sorted = normalize_head_order(&m).unwrap();
        for n in 0..=20 {
            let w = vec!['a'; n];
            let a = run_mha(&m, &w, RunOptions::new(10_000)).unwrap();
            let mut obs = Sorted(true);
            let b = run_mha_observed(&sorted, &w, RunOptions::new(10_000), &mut obs).unwrap();
            assert_eq!(a.accepted(), b.accepted(), "n = {n}");
            assert!(obs.0, "unsorted heads for n = {n}");
        }
    }

    #[test]
    fn head_order_rejects_non_sensing() {
        let m = MultiHeadAutomaton::new(&['a'], 2, false).unwrap();
        assert!(matches!(normalize_head_order(&m), Err(Error::Unsupported(_))));
    }
}
