use serde::{Deserialize, Serialize};

use crate::bounded::BoundDescriptor;
use crate::error::{Error, Result};
use crate::machine::counter::{CounterBank, CounterMachine, CounterOp, CounterTest, OverflowPolicy};
use crate::machine::run::{HaltReason, RunOptions, RunResult, Trace};

use super::encoding::encode_bounded_input;
use super::simulate::{check_items, simulate, CounterStore};

/// Scheme constant: the factor is `d = ceil(SCHEME_A / c)`.
pub const SCHEME_A: f64 = 1.0;
/// Largest compression factor accepted.
pub const MAX_FACTOR: u64 = 1 << 20;
/// Additive constant in `steps <= n + c t(n) + K`: one step for reading the right
/// end-marker during encoding and one for a final partial unit.
pub const ADDITIVE_K: u64 = 2;

/// Counters stored base `d`: the quotient on a real counter, the remainder in finite control.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CompressedCounterState {
    pub d: u64,
    pub quotient: Vec<u64>,
    pub remainder: Vec<u64>,
}

impl CompressedCounterState {
    pub fn new(k: usize, d: u64) -> Self {
        CompressedCounterState { d, quotient: vec![0; k], remainder: vec![0; k] }
    }

    pub fn value(&self, i: usize) -> u64 {
        self.quotient[i] * self.d + self.remainder[i]
    }

    pub fn is_zero(&self, i: usize) -> bool {
        self.quotient[i] == 0 && self.remainder[i] == 0
    }
}

/// Compressed counters advanced `d` simulated steps per accounting unit.
///
/// Within a unit the change of each counter is kept in finite control. Since it stays
/// below `d` in absolute value before every step of the unit, a zero-test needs only the
/// quotient's own zero-test plus finite-control data. At the end of the unit the change is
/// folded back, carrying at most one into or out of the quotient.
struct CompressedStore {
    state: CompressedCounterState,
    delta: Vec<i64>,
    signals: Vec<bool>,
    in_unit: u64,
    units: u64,
    bound: u64,
    policy: OverflowPolicy,
    shadow: Option<(CounterBank, Trace)>,
    mismatches: u64,
    bound_lookups: u64,
}

impl CompressedStore {
    fn current(&self, i: usize) -> u64 {
        (self.state.value(i) as i64 + self.delta[i]) as u64
    }

    fn renormalize(&mut self) {
        let d = self.state.d as i64;
        for i in 0..self.delta.len() {
            let v = self.state.remainder[i] as i64 + self.delta[i];
            let (carry, r) = if v < 0 {
                (-1, v + d)
            } else if v >= d {
                (1, v - d)
            } else {
                (0, v)
            };
            self.state.quotient[i] = (self.state.quotient[i] as i64 + carry) as u64;
            self.state.remainder[i] = r as u64;
            self.delta[i] = 0;
        }
        self.in_unit = 0;
        self.units += 1;
    }

    fn total_units(&self) -> u64 {
        self.units + u64::from(self.in_unit > 0)
    }
}

impl CounterStore for CompressedStore {
    fn tests(&self) -> Vec<CounterTest> {
        (0..self.delta.len())
            .map(|i| {
                if self.signals[i] {
                    CounterTest::Overflowed
                } else if self.state.quotient[i] == 0 && self.state.remainder[i] as i64 + self.delta[i] == 0 {
                    CounterTest::Zero
                } else {
                    CounterTest::Positive
                }
            })
            .collect()
    }

    fn apply(&mut self, ops: &[CounterOp], trace: &mut Trace) -> Option<HaltReason> {
        let tests = self.tests();
        if let Some((bank, shadow_trace)) = &mut self.shadow {
            bank.apply(ops, shadow_trace, 0);
        }
        self.signals.iter_mut().for_each(|s| *s = false);
        for (i, op) in ops.iter().enumerate() {
            match op {
                CounterOp::Nop => {}
                CounterOp::Dec => {
                    if tests[i] == CounterTest::Zero {
                        return Some(HaltReason::DecrementOnZero);
                    }
                    self.delta[i] -= 1;
                    trace.decremented(i);
                }
                CounterOp::Inc => {
                    // the input-length bound is not visible in compressed form; count the lookups
                    self.bound_lookups += 1;
                    if self.current(i) >= self.bound {
                        trace.overflows += 1;
                        match self.policy {
                            OverflowPolicy::Simple => {}
                            OverflowPolicy::Block => return Some(HaltReason::Overflow),
                            OverflowPolicy::Signal => self.signals[i] = true,
                        }
                    } else {
                        self.delta[i] += 1;
                        trace.incremented(i, self.current(i));
                    }
                }
            }
        }
        None
    }

    fn after_step(&mut self) {
        self.in_unit += 1;
        if self.in_unit == self.state.d {
            self.renormalize();
        }
        if let Some((bank, _)) = &self.shadow {
            let expect = bank.values.clone();
            if (0..expect.len()).any(|i| self.current(i) != expect[i]) {
                self.mismatches += 1;
            }
        }
    }

    fn snapshot(&self) -> Vec<u64> {
        let mut s: Vec<u64> = (0..self.delta.len()).map(|i| self.current(i)).collect();
        s.extend(self.signals.iter().map(|b| u64::from(*b)));
        s.push(self.in_unit);
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeedupReport {
    /// Verdict and accounted steps: encoding steps plus accounting units.
    pub result: RunResult,
    pub c: f64,
    pub d: u64,
    pub encoding_steps: u64,
    pub units: u64,
    /// Steps of the original machine on the same input.
    pub raw_steps: u64,
    /// Steps at which a compressed value differed from the uncompressed shadow.
    pub shadow_mismatches: u64,
    /// Increments that had to consult the input-length bound.
    pub bound_lookups: u64,
}

impl SpeedupReport {
    /// `n + c t + K`.
    pub fn budget(&self, n: usize) -> f64 {
        n as f64 + self.c * self.raw_steps as f64 + ADDITIVE_K as f64
    }
}

pub fn compression_factor(c: f64) -> Result<u64> {
    if c.is_nan() || c <= 0.0 || !c.is_finite() {
        return Err(Error::InvalidArgument(format!("speed-up factor must be positive, got {c}")));
    }
    let d = (SCHEME_A / c).ceil().max(1.0);
    if d > MAX_FACTOR as f64 {
        return Err(Error::InvalidArgument(format!("compression factor {d} exceeds {MAX_FACTOR}")));
    }
    Ok(d as u64)
}

/// Encodes the input in one left-to-right pass, then simulates `cm` over the encoding with
/// counters compressed by `d = ceil(1/c)`, charging one step per `d` simulated steps.
pub fn speedup_run(
    cm: &CounterMachine,
    b: &BoundDescriptor,
    input: &[char],
    c: f64,
    opts: RunOptions,
    shadow: bool,
) -> Result<SpeedupReport> {
    opts.validate()?;
    let d = compression_factor(c)?;
    let e = encode_bounded_input(input, b)?;
    check_items(cm, &e)?;
    let n = input.len() as u64;
    let k = cm.counters();
    let mut store = CompressedStore {
        state: CompressedCounterState::new(k, d),
        delta: vec![0; k],
        signals: vec![false; k],
        in_unit: 0,
        units: 0,
        bound: n,
        policy: cm.policy(),
        shadow: shadow.then(|| (CounterBank::new(k, n, cm.policy()), Trace::new(0, k, n, 0))),
        mismatches: 0,
        bound_lookups: 0,
    };
    let raw = simulate(cm, &e, &mut store, opts)?;
    let encoding_steps = n + 1;
    let units = store.total_units();
    let raw_steps = raw.steps;
    let result = RunResult { steps: encoding_steps + units, ..raw };
    Ok(SpeedupReport {
        result,
        c,
        d,
        encoding_steps,
        units,
        raw_steps,
        shadow_mismatches: store.mismatches,
        bound_lookups: store.bound_lookups,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::counter::run_cm;

    #[test]
    fn factors() {
        assert_eq!(compression_factor(1.0).unwrap(), 1);
        assert_eq!(compression_factor(0.5).unwrap(), 2);
        assert_eq!(compression_factor(0.3).unwrap(), 4);
        assert_eq!(compression_factor(4.0).unwrap(), 1);
        assert!(compression_factor(0.0).is_err());
        assert!(compression_factor(f64::NAN).is_err());
        assert!(compression_factor(1e-9).is_err());
    }

    #[test]
    fn value_reconstruction() {
        let mut s = CompressedCounterState::new(1, 3);
        s.quotient[0] = 2;
        s.remainder[0] = 1;
        assert_eq!(s.value(0), 7);
        assert!(!s.is_zero(0));
        assert!(CompressedCounterState::new(1, 3).is_zero(0));
    }

    /// Counts the a's up, then down again on the way back.
    fn updown() -> CounterMachine {
        let mut c = CounterMachine::new(&['a'], 1, OverflowPolicy::Simple).unwrap();
        for t in ["0", "+"] {
            c.add("up", 'a', t, "up", 1, "+").unwrap();
            c.add("up", '>', t, "down", -1, ".").unwrap();
        }
        c.add("down", 'a', "+", "down", -1, "-").unwrap();
        c.add("down", '<', "0", "acc", 0, ".").unwrap();
        let acc = c.state("acc");
        c.set_accepting(acc, true);
        c
    }

    #[test]
    fn shadow_agrees_for_many_factors() {
        let c = updown();
        let b: BoundDescriptor = "a".parse().unwrap();
        for n in 0..40 {
            let w = vec!['a'; n];
            let direct = run_cm(&c, &w, RunOptions::default()).unwrap();
            for f in [1.0, 0.5, 0.34, 0.1, 0.01] {
                let r = speedup_run(&c, &b, &w, f, RunOptions::default(), true).unwrap();
                assert_eq!(r.result.verdict, direct.verdict);
                assert_eq!(r.raw_steps, direct.steps);
                assert_eq!(r.shadow_mismatches, 0);
                assert!(r.result.steps as f64 <= r.budget(n));
            }
        }
    }
}
