use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::machine_file::Machine;
use crate::acceptors::{families::canonical_member, measure_steps, Acceptor};
use crate::bounded::{enumerate_bounded_inputs, BoundDescriptor};
use crate::error::{Error, Result};
use crate::machine::{run_cm, run_mha, run_rm, HaltReason, RunOptions, RunResult, Trace, Verdict};
use crate::speedup::{decode_encoded_input, encode_bounded_input, speedup_run};
use crate::transforms::{counters_to_heads, heads_to_counters_run, heads_to_registers_run};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports always serialize")
}

#[derive(Serialize)]
struct RunReport<'a> {
    verdict: Verdict,
    reason: HaltReason,
    steps: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    trace: Option<&'a Trace>,
}

fn report(r: &RunResult, trace: bool) -> String {
    json(&RunReport { verdict: r.verdict, reason: r.reason, steps: r.steps, trace: trace.then_some(&r.trace) })
}

fn number(input: &str) -> Result<u64> {
    input.trim().parse().map_err(|_| Error::InvalidArgument(format!("register machines take a number, got {input:?}")))
}

fn run_machine(machine: &Machine, input: &str, opts: RunOptions) -> Result<RunResult> {
    let x: Vec<char> = input.chars().collect();
    match machine {
        Machine::MultiHead(m) => run_mha(m, &x, opts),
        Machine::Counter(c) => run_cm(c, &x, opts),
        Machine::Register(r) => run_rm(r, number(input)?, opts),
    }
}

/// Runs the machine directly; `input` is a decimal number for register machines.
pub fn cmd_run(machine: &Machine, input: &str, opts: RunOptions, trace: bool) -> Result<Output> {
    let r = run_machine(machine, input, opts)?;
    Ok(Output { text: report(&r, trace), code: r.verdict.exit_code() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimulateVia {
    /// A multi-head automaton through `k - 1` counters (needs a strict bound).
    Counters,
    /// A counter machine through `k + 1` heads.
    Heads,
    /// A unary multi-head automaton through `k + 1` registers.
    Registers,
}

impl FromStr for SimulateVia {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "counters" => Ok(SimulateVia::Counters),
            "heads" => Ok(SimulateVia::Heads),
            "registers" => Ok(SimulateVia::Registers),
            _ => Err(Error::InvalidArgument(format!("unknown simulation {s:?}"))),
        }
    }
}

#[derive(Serialize)]
struct SimulateReport<'a, A: Serialize> {
    via: SimulateVia,
    verdict: Verdict,
    reason: HaltReason,
    steps: u64,
    trace: &'a Trace,
    #[serde(skip_serializing_if = "Option::is_none")]
    audit: Option<A>,
}

fn mismatch(what: &str) -> Error {
    Error::InvalidArgument(format!("this machine cannot be simulated {what}"))
}

/// Runs the machine through one of the equivalence constructions.
pub fn cmd_simulate(
    machine: &Machine,
    via: SimulateVia,
    input: &str,
    bound: Option<&BoundDescriptor>,
    opts: RunOptions,
) -> Result<Output> {
    let x: Vec<char> = input.chars().collect();
    let (r, audit) = match (via, machine) {
        (SimulateVia::Counters, Machine::MultiHead(m)) => {
            let b = bound
                .ok_or_else(|| Error::InvalidArgument("--bound is required".into()))?
                .as_strict()
                .ok_or_else(|| Error::InvalidArgument("the bound must be strict (one symbol per word)".into()))?;
            let (r, a) = heads_to_counters_run(m, &b, &x, opts)?;
            (r, Some(a))
        }
        (SimulateVia::Heads, Machine::Counter(c)) => (run_mha(&counters_to_heads(c)?, &x, opts)?, None),
        (SimulateVia::Registers, Machine::MultiHead(m)) => {
            let n = if x.iter().all(|c| m.alphabet().contains(c)) { x.len() as u64 } else { number(input)? };
            (heads_to_registers_run(m, n, opts)?, None)
        }
        (SimulateVia::Counters, _) => return Err(mismatch("with counters; it is not a multi-head automaton")),
        (SimulateVia::Heads, _) => return Err(mismatch("with heads; it is not a counter machine")),
        (SimulateVia::Registers, _) => return Err(mismatch("with registers; it is not a multi-head automaton")),
    };
    let rep = SimulateReport { via, verdict: r.verdict, reason: r.reason, steps: r.steps, trace: &r.trace, audit };
    Ok(Output { text: json(&rep), code: r.verdict.exit_code() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossMode {
    HeadsToCounters,
    CountersToHeads,
    Registers,
    Encoding,
    Speedup,
}

impl FromStr for CrossMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "heads_to_counters" => Ok(CrossMode::HeadsToCounters),
            "counters_to_heads" => Ok(CrossMode::CountersToHeads),
            "registers" => Ok(CrossMode::Registers),
            "encoding" => Ok(CrossMode::Encoding),
            "speedup" => Ok(CrossMode::Speedup),
            _ => Err(Error::InvalidArgument(format!("unknown mode {s:?}"))),
        }
    }
}

impl fmt::Display for CrossMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        write!(f, "{}", s.as_str().unwrap_or_default())
    }
}

/// What one side of a cross-check observed; sides agree when these are equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Observation {
    pub accepted: bool,
    /// Only reported where step counts must match exactly.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<u64>,
    /// Resource audit of the transformed side held.
    pub audit_ok: bool,
}

impl Observation {
    fn verdict(r: &RunResult) -> Self {
        Observation { accepted: r.accepted(), steps: None, audit_ok: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disagreement {
    pub input: String,
    pub original: Observation,
    pub transformed: Observation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossReport {
    pub mode: CrossMode,
    pub checked: usize,
    /// `"agree: all"` or `"disagree"`.
    pub summary: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_disagreement: Option<Disagreement>,
}

impl CrossReport {
    pub fn agreed(&self) -> bool {
        self.first_disagreement.is_none()
    }
}

/// Runs both sides on every input and stops at the first disagreement.
pub fn crossvalidate_with<O, T>(
    mode: CrossMode,
    inputs: &[Vec<char>],
    original: O,
    transformed: T,
) -> Result<CrossReport>
where
    O: Fn(&[char]) -> Result<Observation>,
    T: Fn(&[char]) -> Result<Observation>,
{
    for (i, x) in inputs.iter().enumerate() {
        let (a, b) = (original(x)?, transformed(x)?);
        if a != b {
            return Ok(CrossReport {
                mode,
                checked: i + 1,
                summary: "disagree".into(),
                first_disagreement: Some(Disagreement { input: x.iter().collect(), original: a, transformed: b }),
            });
        }
    }
    Ok(CrossReport { mode, checked: inputs.len(), summary: "agree: all".into(), first_disagreement: None })
}

/// Checks a construction against the original machine on every bound input up to `max_len`.
/// `c` is the speed-up factor used by the speed-up mode.
pub fn crossvalidate(
    machine: Option<&Machine>,
    bound: &BoundDescriptor,
    max_len: usize,
    mode: CrossMode,
    opts: RunOptions,
    c: f64,
) -> Result<CrossReport> {
    let inputs = enumerate_bounded_inputs(bound, max_len);
    let need = |what: &str| Error::InvalidArgument(format!("mode {mode} needs {what}"));
    match (mode, machine) {
        (CrossMode::Encoding, _) => crossvalidate_with(
            mode,
            &inputs,
            |_| Ok(Observation { accepted: true, steps: None, audit_ok: true }),
            |x| {
                let e = encode_bounded_input(x, bound)?;
                let ok = decode_encoded_input(&e) == x && e.runs() <= bound.len();
                Ok(Observation { accepted: ok, steps: None, audit_ok: true })
            },
        ),
        (CrossMode::HeadsToCounters, Some(Machine::MultiHead(m))) => {
            let strict = bound.as_strict().ok_or_else(|| need("a strict bound"))?;
            crossvalidate_with(
                mode,
                &inputs,
                |x| Ok(Observation::verdict(&run_mha(m, x, opts)?)),
                |x| {
                    let (r, audit) = heads_to_counters_run(m, &strict, x, opts)?;
                    let ok = audit.ok(x.len() as u64) && audit.counters_used < m.heads().max(1);
                    Ok(Observation { audit_ok: ok, ..Observation::verdict(&r) })
                },
            )
        }
        (CrossMode::CountersToHeads, Some(Machine::Counter(cm))) => {
            let m = counters_to_heads(cm)?;
            crossvalidate_with(
                mode,
                &inputs,
                |x| {
                    let r = run_cm(cm, x, opts)?;
                    Ok(Observation { steps: Some(r.steps), ..Observation::verdict(&r) })
                },
                |x| {
                    let r = run_mha(&m, x, opts)?;
                    Ok(Observation { steps: Some(r.steps), ..Observation::verdict(&r) })
                },
            )
        }
        (CrossMode::Registers, Some(Machine::MultiHead(m))) => crossvalidate_with(
            mode,
            &inputs,
            |x| Ok(Observation::verdict(&run_mha(m, x, opts)?)),
            |x| {
                let r = heads_to_registers_run(m, x.len() as u64, opts)?;
                Ok(Observation { audit_ok: r.trace.max_value() <= x.len() as u64, ..Observation::verdict(&r) })
            },
        ),
        (CrossMode::Speedup, Some(Machine::Counter(cm))) => crossvalidate_with(
            mode,
            &inputs,
            |x| Ok(Observation::verdict(&run_cm(cm, x, opts)?)),
            |x| {
                let rep = speedup_run(cm, bound, x, c, opts, true)?;
                let ok = rep.shadow_mismatches == 0 && rep.result.steps as f64 <= rep.budget(x.len());
                Ok(Observation { audit_ok: ok, ..Observation::verdict(&rep.result) })
            },
        ),
        (CrossMode::HeadsToCounters | CrossMode::Registers, _) => Err(need("a multi-head automaton")),
        (CrossMode::CountersToHeads | CrossMode::Speedup, _) => Err(need("a counter machine")),
    }
}

pub fn cmd_crossvalidate(
    machine: Option<&Machine>,
    bound: &BoundDescriptor,
    max_len: usize,
    mode: CrossMode,
    opts: RunOptions,
    c: f64,
) -> Result<Output> {
    let rep = crossvalidate(machine, bound, max_len, mode, opts, c)?;
    Ok(Output { text: json(&rep), code: if rep.agreed() { 0 } else { 1 } })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    pub steps: u64,
    pub verdict: Verdict,
    pub max_counter: u64,
}

/// One row per requested length, on the acceptor's canonical accepted family; `n` is the
/// length of the input actually used.
pub fn bench(acceptor: Acceptor, ns: &[usize], opts: RunOptions) -> Result<Vec<BenchRow>> {
    let inputs = ns.iter().map(|n| canonical_member(acceptor, *n)).collect::<Result<Vec<_>>>()?;
    let series = measure_steps(acceptor, inputs, opts)?;
    Ok(series
        .samples
        .into_iter()
        .map(|s| BenchRow { n: s.n, steps: s.steps, verdict: s.verdict, max_counter: s.max_counter })
        .collect())
}

pub fn write_bench_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["n", "steps", "verdict", "max_counter"]).map_err(io)?;
    for r in rows {
        w.serialize(r).map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the CSV to `out` when given, otherwise returns it as the output text.
pub fn cmd_bench(acceptor: Acceptor, ns: &[usize], opts: RunOptions, out: Option<&std::path::Path>) -> Result<Output> {
    let rows = bench(acceptor, ns, opts)?;
    match out {
        Some(path) => {
            let f = std::fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            write_bench_csv(&rows, f)?;
            Ok(Output { text: String::new(), code: 0 })
        }
        None => {
            let mut buf = Vec::new();
            write_bench_csv(&rows, &mut buf)?;
            Ok(Output { text: String::from_utf8(buf).expect("csv is utf-8"), code: 0 })
        }
    }
}

pub fn cmd_encode(bound: &BoundDescriptor, input: &str) -> Result<Output> {
    let x: Vec<char> = input.chars().collect();
    Ok(Output { text: json(&encode_bounded_input(&x, bound)?), code: 0 })
}

pub fn cmd_speedup(
    machine: &Machine,
    bound: &BoundDescriptor,
    input: &str,
    c: f64,
    opts: RunOptions,
) -> Result<Output> {
    let Machine::Counter(cm) = machine else {
        return Err(Error::InvalidArgument("speed-up needs a counter machine".into()));
    };
    let x: Vec<char> = input.chars().collect();
    let rep = speedup_run(cm, bound, &x, c, opts, false)?;
    Ok(Output { text: json(&rep), code: rep.result.verdict.exit_code() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::suite;

    fn ab() -> BoundDescriptor {
        "a,b".parse().unwrap()
    }

    #[test]
    fn anbn_agrees_to_length_24() {
        let m = Machine::MultiHead(suite::anbn_2head());
        let rep = crossvalidate(Some(&m), &ab(), 24, CrossMode::HeadsToCounters, RunOptions::default(), 0.5).unwrap();
        assert_eq!(rep.summary, "agree: all");
        assert_eq!(rep.checked, 325);
    }

    #[test]
    fn corrupted_transform_is_caught() {
        let m = suite::anbn_2head();
        let inputs = enumerate_bounded_inputs(&ab(), 6);
        let opts = RunOptions::default();
        let rep = crossvalidate_with(
            CrossMode::HeadsToCounters,
            &inputs,
            |x| Ok(Observation::verdict(&run_mha(&m, x, opts)?)),
            |x| {
                let (r, _) = heads_to_counters_run(&m, &"a,b".parse().unwrap(), x, opts)?;
                let mut o = Observation::verdict(&r);
                // flips the verdict on inputs of length 4
                o.accepted ^= x.len() == 4;
                Ok(o)
            },
        )
        .unwrap();
        let d = rep.first_disagreement.expect("corruption must be reported");
        assert_eq!(d.input.len(), 4);
    }

    #[test]
    fn max_len_zero_checks_only_the_empty_word() {
        let m = Machine::Counter(suite::anbn_1counter());
        let rep = crossvalidate(Some(&m), &ab(), 0, CrossMode::CountersToHeads, RunOptions::default(), 0.5).unwrap();
        assert_eq!(rep.checked, 1);
        assert!(rep.agreed());
    }

    #[test]
    fn mode_mismatch_is_an_error() {
        let m = Machine::Counter(suite::anbn_1counter());
        assert!(crossvalidate(Some(&m), &ab(), 3, CrossMode::Registers, RunOptions::default(), 0.5).is_err());
    }

    #[test]
    fn limit_one_times_out() {
        let m = Machine::Counter(suite::zigzag_quadratic());
        let out = cmd_run(&m, "aabb", RunOptions::new(1), false).unwrap();
        assert_eq!(out.code, 2);
        assert!(out.text.contains("\"timeout\""));
        assert!(!out.text.contains("max_values"));
        let out = cmd_run(&m, "aabb", RunOptions::default(), true).unwrap();
        assert_eq!(out.code, 0);
        assert!(out.text.contains("max_values"));
    }

    #[test]
    fn empty_bench_is_header_only() {
        let out = cmd_bench(Acceptor::Ww, &[], RunOptions::default(), None).unwrap();
        assert_eq!(out.text, "n,steps,verdict,max_counter\n");
    }

    #[test]
    fn palindrome_bench_rows_increase() {
        let ns: Vec<usize> = (7..=10).map(|e| 1 << e).collect();
        let rows = bench(Acceptor::Palindrome2c, &ns, RunOptions::new(1 << 32)).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.windows(2).all(|w| w[0].steps < w[1].steps));
        assert!(rows.iter().all(|r| r.verdict == Verdict::Accept));
    }

    #[test]
    fn lm_bench_stays_under_the_linear_bound() {
        let rows = bench(Acceptor::Lm(1), &[1 << 12, 1 << 15], RunOptions::new(1 << 32)).unwrap();
        let last = rows.last().unwrap();
        assert!(last.steps as f64 / last.n as f64 <= 5.5);
    }

    #[test]
    fn encode_emits_items() {
        let out = cmd_encode(&"ab,c".parse().unwrap(), "ababababcc").unwrap();
        let v: serde_json::Value = serde_json::from_str(&out.text).unwrap();
        assert!(v["items"].is_array());
    }
}
