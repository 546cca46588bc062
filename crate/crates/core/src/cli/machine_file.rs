//! JSON machine files.
//!
//! ```json
//! {"kind": "counter", "alphabet": ["a", "b"], "states": ["s", "acc"], "start": "s",
//!  "accept": ["acc"], "counters": 1, "overflow": "simple",
//!  "transitions": [{"state": "s", "read": "a", "tests": "0", "next": "s", "dir": 1, "ops": "+"}]}
//! ```
//!
//! Multi-head transitions use `reads` (one symbol per head), `coincidence` when sensing, and
//! either `move_head` + `dir` or a full `moves` vector. Register transitions use `zeros`
//! (`0` or `+` per register) and `ops`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::machine::counter::{CmAction, CmKey, CounterMachine, CounterOp, CounterTest, OverflowPolicy};
use crate::machine::mha::{MhaAction, MhaKey, MultiHeadAutomaton, StateId};
use crate::machine::register::{RegisterMachine, RmAction, RmKey};
use crate::machine::tape::is_end_marker;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MachineKind {
    MultiHead,
    Counter,
    Register,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MachineFile {
    pub kind: MachineKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub alphabet: Vec<char>,
    pub states: Vec<String>,
    pub start: String,
    #[serde(default)]
    pub accept: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heads: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sensing: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counters: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub overflow: Option<OverflowPolicy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub registers: Option<usize>,
    #[serde(default)]
    pub transitions: Vec<TransitionRecord>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionRecord {
    pub state: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reads: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub read: Option<char>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tests: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeros: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coincidence: Option<Vec<u8>>,
    pub next: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub move_head: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<i8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moves: Option<Vec<i8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ops: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Machine {
    MultiHead(MultiHeadAutomaton),
    Counter(CounterMachine),
    Register(RegisterMachine),
}

impl Machine {
    pub fn kind(&self) -> MachineKind {
        match self {
            Machine::MultiHead(_) => MachineKind::MultiHead,
            Machine::Counter(_) => MachineKind::Counter,
            Machine::Register(_) => MachineKind::Register,
        }
    }
}

fn field(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{path}: {msg}"))
}

fn required<T: Clone>(v: &Option<T>, path: &str) -> Result<T> {
    v.clone().ok_or_else(|| field(path, "missing"))
}

fn forbid<T>(v: &Option<T>, path: &str, kind: MachineKind) -> Result<()> {
    match v {
        Some(_) => Err(field(path, format!("not allowed for kind {kind:?}"))),
        None => Ok(()),
    }
}

struct States<'a> {
    names: &'a [String],
}

impl States<'_> {
    fn id(&self, name: &str, path: &str) -> Result<StateId> {
        self.names.iter().position(|s| s == name).ok_or_else(|| field(path, format!("unknown state {name:?}")))
    }
}

fn check_symbol(c: char, alphabet: &[char], path: &str) -> Result<()> {
    if is_end_marker(c) || alphabet.contains(&c) {
        Ok(())
    } else {
        Err(field(path, format!("symbol {c:?} is not in the alphabet")))
    }
}

fn parse_chars<T>(s: &str, len: usize, path: &str, f: impl Fn(char) -> Result<T>) -> Result<Vec<T>> {
    let v = s.chars().map(f).collect::<Result<Vec<_>>>().map_err(|e| field(path, e))?;
    if v.len() != len {
        return Err(field(path, format!("expected {len} entries, found {}", v.len())));
    }
    Ok(v)
}

impl MachineFile {
    pub fn into_machine(self) -> Result<Machine> {
        let kind = self.kind;
        for (i, s) in self.states.iter().enumerate() {
            if self.states[..i].contains(s) {
                return Err(field(&format!("states[{i}]"), format!("duplicate state {s:?}")));
            }
        }
        if let Some(c) = self.alphabet.iter().find(|c| is_end_marker(**c)) {
            return Err(field("alphabet", Error::ReservedSymbol(*c)));
        }
        let states = States { names: &self.states };
        let start = states.id(&self.start, "start")?;
        let accept = self
            .accept
            .iter()
            .enumerate()
            .map(|(i, s)| states.id(s, &format!("accept[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let machine = match kind {
            MachineKind::MultiHead => {
                forbid(&self.counters, "counters", kind)?;
                forbid(&self.overflow, "overflow", kind)?;
                forbid(&self.registers, "registers", kind)?;
                let heads = required(&self.heads, "heads")?;
                let sensing = self.sensing.unwrap_or(false);
                let mut m =
                    MultiHeadAutomaton::new(&self.alphabet, heads, sensing).map_err(|e| field("alphabet", e))?;
                for s in &self.states {
                    m.state(s);
                }
                for (i, t) in self.transitions.iter().enumerate() {
                    let p = format!("transitions[{i}]");
                    let state = states.id(&t.state, &format!("{p}.state"))?;
                    let next = states.id(&t.next, &format!("{p}.next"))?;
                    let reads = required(&t.reads, &format!("{p}.reads"))?;
                    let reads = parse_chars(&reads, heads, &format!("{p}.reads"), |c| {
                        if is_end_marker(c) || self.alphabet.contains(&c) {
                            Ok(c)
                        } else {
                            Err(Error::AlphabetMismatch(c))
                        }
                    })?;
                    let moves = match (&t.moves, t.move_head, t.dir) {
                        (Some(m), None, None) => m.clone(),
                        (None, Some(h), Some(d)) if h < heads => MhaAction::single(next, heads, h, d).moves,
                        (None, Some(h), Some(_)) => {
                            return Err(field(&format!("{p}.move_head"), format!("head {h} out of range")))
                        }
                        (None, None, None) => vec![0; heads],
                        _ => return Err(field(&p, "give either moves or move_head with dir")),
                    };
                    for (f, v) in [
                        ("read", t.read.is_some()),
                        ("tests", t.tests.is_some()),
                        ("zeros", t.zeros.is_some()),
                        ("ops", t.ops.is_some()),
                    ] {
                        if v {
                            return Err(field(&format!("{p}.{f}"), "not allowed for kind MultiHead"));
                        }
                    }
                    let key = MhaKey { state, reads, coincidence: t.coincidence.clone() };
                    m.add_transition(key, MhaAction { next, moves }).map_err(|e| field(&p, e))?;
                }
                m.set_start(start);
                accept.iter().for_each(|a| m.set_accepting(*a, true));
                Machine::MultiHead(m)
            }
            MachineKind::Counter => {
                forbid(&self.heads, "heads", kind)?;
                forbid(&self.sensing, "sensing", kind)?;
                forbid(&self.registers, "registers", kind)?;
                let k = required(&self.counters, "counters")?;
                let policy = self.overflow.unwrap_or_default();
                let mut c = CounterMachine::new(&self.alphabet, k, policy).map_err(|e| field("alphabet", e))?;
                for s in &self.states {
                    c.state(s);
                }
                for (i, t) in self.transitions.iter().enumerate() {
                    let p = format!("transitions[{i}]");
                    let state = states.id(&t.state, &format!("{p}.state"))?;
                    let next = states.id(&t.next, &format!("{p}.next"))?;
                    let read = required(&t.read, &format!("{p}.read"))?;
                    check_symbol(read, &self.alphabet, &format!("{p}.read"))?;
                    let tests = parse_chars(
                        t.tests.as_deref().unwrap_or(""),
                        k,
                        &format!("{p}.tests"),
                        CounterTest::from_char,
                    )?;
                    let ops =
                        parse_chars(t.ops.as_deref().unwrap_or(""), k, &format!("{p}.ops"), CounterOp::from_char)?;
                    let dir = t.dir.unwrap_or(0);
                    for (f, v) in [
                        ("reads", t.reads.is_some()),
                        ("zeros", t.zeros.is_some()),
                        ("moves", t.moves.is_some()),
                        ("move_head", t.move_head.is_some()),
                        ("coincidence", t.coincidence.is_some()),
                    ] {
                        if v {
                            return Err(field(&format!("{p}.{f}"), "not allowed for kind Counter"));
                        }
                    }
                    c.add_transition(CmKey { state, read, tests }, CmAction { next, dir, ops })
                        .map_err(|e| field(&p, e))?;
                }
                c.set_start(start);
                accept.iter().for_each(|a| c.set_accepting(*a, true));
                Machine::Counter(c)
            }
            MachineKind::Register => {
                forbid(&self.heads, "heads", kind)?;
                forbid(&self.sensing, "sensing", kind)?;
                forbid(&self.counters, "counters", kind)?;
                forbid(&self.overflow, "overflow", kind)?;
                if !self.alphabet.is_empty() {
                    return Err(field("alphabet", "register machines read a number, not symbols"));
                }
                let k = required(&self.registers, "registers")?;
                let mut r = RegisterMachine::new(k).map_err(|e| field("registers", e))?;
                for s in &self.states {
                    r.state(s);
                }
                for (i, t) in self.transitions.iter().enumerate() {
                    let p = format!("transitions[{i}]");
                    let state = states.id(&t.state, &format!("{p}.state"))?;
                    let next = states.id(&t.next, &format!("{p}.next"))?;
                    let zeros = parse_chars(t.zeros.as_deref().unwrap_or(""), k, &format!("{p}.zeros"), |c| match c {
                        '0' => Ok(true),
                        '+' => Ok(false),
                        _ => Err(Error::Malformed(format!("bad register test {c:?}"))),
                    })?;
                    let ops =
                        parse_chars(t.ops.as_deref().unwrap_or(""), k, &format!("{p}.ops"), CounterOp::from_char)?;
                    for (f, v) in [
                        ("reads", t.reads.is_some()),
                        ("read", t.read.is_some()),
                        ("tests", t.tests.is_some()),
                        ("moves", t.moves.is_some()),
                        ("move_head", t.move_head.is_some()),
                        ("dir", t.dir.is_some()),
                        ("coincidence", t.coincidence.is_some()),
                    ] {
                        if v {
                            return Err(field(&format!("{p}.{f}"), "not allowed for kind Register"));
                        }
                    }
                    r.add_transition(RmKey { state, zeros }, RmAction { next, ops }).map_err(|e| field(&p, e))?;
                }
                r.set_start(start);
                accept.iter().for_each(|a| r.set_accepting(*a, true));
                Machine::Register(r)
            }
        };
        Ok(machine)
    }

    /// Transitions are written in key order so the output is stable.
    pub fn from_machine(machine: &Machine) -> Self {
        let names = |v: &[String]| v.to_vec();
        let accept_of = |n: usize, f: &dyn Fn(StateId) -> bool, names: &[String]| {
            (0..n).filter(|s| f(*s)).map(|s| names[s].clone()).collect::<Vec<_>>()
        };
        match machine {
            Machine::MultiHead(m) => {
                let st = m.state_names();
                let mut ts: Vec<_> = m.transitions().collect();
                ts.sort_by(|a, b| a.0.cmp(b.0));
                let transitions = ts
                    .into_iter()
                    .map(|(k, a)| {
                        let mut t = TransitionRecord {
                            state: st[k.state].clone(),
                            reads: Some(k.reads.iter().collect()),
                            coincidence: k.coincidence.clone(),
                            next: st[a.next].clone(),
                            ..Default::default()
                        };
                        match a.moved_heads() {
                            0 => {}
                            1 => {
                                let h = a.moves.iter().position(|d| *d != 0).unwrap();
                                t.move_head = Some(h);
                                t.dir = Some(a.moves[h]);
                            }
                            _ => t.moves = Some(a.moves.clone()),
                        }
                        t
                    })
                    .collect();
                MachineFile {
                    kind: MachineKind::MultiHead,
                    alphabet: m.alphabet().to_vec(),
                    states: names(st),
                    start: st[m.start()].clone(),
                    accept: accept_of(m.num_states(), &|s| m.is_accepting(s), st),
                    heads: Some(m.heads()),
                    sensing: Some(m.sensing()),
                    counters: None,
                    overflow: None,
                    registers: None,
                    transitions,
                }
            }
            Machine::Counter(c) => {
                let st = c.state_names();
                let mut ts: Vec<_> = c.transitions().collect();
                ts.sort_by(|a, b| a.0.cmp(b.0));
                let transitions = ts
                    .into_iter()
                    .map(|(k, a)| TransitionRecord {
                        state: st[k.state].clone(),
                        read: Some(k.read),
                        tests: Some(k.tests.iter().map(|t| t.to_char()).collect()),
                        next: st[a.next].clone(),
                        dir: Some(a.dir),
                        ops: Some(a.ops.iter().map(|o| o.to_char()).collect()),
                        ..Default::default()
                    })
                    .collect();
                MachineFile {
                    kind: MachineKind::Counter,
                    alphabet: c.alphabet().to_vec(),
                    states: names(st),
                    start: st[c.start()].clone(),
                    accept: accept_of(c.num_states(), &|s| c.is_accepting(s), st),
                    heads: None,
                    sensing: None,
                    counters: Some(c.counters()),
                    overflow: Some(c.policy()),
                    registers: None,
                    transitions,
                }
            }
            Machine::Register(r) => {
                let st = r.state_names();
                let mut ts: Vec<_> = r.transitions().collect();
                ts.sort_by(|a, b| a.0.cmp(b.0));
                let transitions = ts
                    .into_iter()
                    .map(|(k, a)| TransitionRecord {
                        state: st[k.state].clone(),
                        zeros: Some(k.zeros.iter().map(|z| if *z { '0' } else { '+' }).collect()),
                        next: st[a.next].clone(),
                        ops: Some(a.ops.iter().map(|o| o.to_char()).collect()),
                        ..Default::default()
                    })
                    .collect();
                MachineFile {
                    kind: MachineKind::Register,
                    alphabet: Vec::new(),
                    states: names(st),
                    start: st[r.start()].clone(),
                    accept: accept_of(r.num_states(), &|s| r.is_accepting(s), st),
                    heads: None,
                    sensing: None,
                    counters: None,
                    overflow: None,
                    registers: Some(r.registers()),
                    transitions,
                }
            }
        }
    }
}

/// Parses machine JSON; syntax and schema errors carry line and column.
pub fn parse_machine_text(text: &str) -> Result<Machine> {
    let file: MachineFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.into_machine()
}

pub fn parse_machine_file(path: &Path) -> Result<Machine> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_machine_text(&text)
}

pub fn machine_to_json(machine: &Machine) -> String {
    serde_json::to_string_pretty(&MachineFile::from_machine(machine)).expect("machine files always serialize")
}
