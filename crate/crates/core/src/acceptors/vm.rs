use crate::error::Result;
use crate::machine::run::{HaltReason, RunOptions, RunResult, Trace};
use crate::machine::tape::Tape;

pub(crate) type Flow<T> = std::result::Result<T, HaltReason>;

/// One two-way input head and `k` counters bounded by the input length.
///
/// Programs drive it through [`CounterVm::step`]; each call is one transition of a
/// counter machine, which may move the head and apply one operation to any number of
/// distinct counters. Decisions may only depend on [`CounterVm::read`] and
/// [`CounterVm::zero`], the information a counter machine's transition sees.
#[derive(Debug, Clone)]
pub struct CounterVm {
    tape: Tape,
    pos: usize,
    counters: Vec<u64>,
    steps: u64,
    limit: u64,
    trace: Trace,
}

impl CounterVm {
    pub fn new(input: &[char], k: usize, opts: RunOptions) -> Result<Self> {
        opts.validate()?;
        let tape = Tape::new(input)?;
        let n = tape.len() as u64;
        Ok(CounterVm { tape, pos: 1, counters: vec![0; k], steps: 0, limit: opts.limit, trace: Trace::new(1, k, n, 1) })
    }

    pub fn read(&self) -> char {
        self.tape.read(self.pos)
    }

    pub fn zero(&self, c: usize) -> bool {
        self.counters[c] == 0
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Moves by `dir` and applies `ops` as (counter, +1 or -1) pairs, all in one step.
    pub fn step(&mut self, dir: i8, ops: &[(usize, i8)]) -> Flow<()> {
        if self.steps >= self.limit {
            return Err(HaltReason::StepLimit);
        }
        self.steps += 1;
        if dir != 0 {
            let p = self.pos as i64 + dir as i64;
            if p < 0 || p > self.tape.last() as i64 {
                return Err(HaltReason::HeadOffTape);
            }
            self.pos = p as usize;
            self.trace.head_at(0, self.pos as u64);
        }
        for &(c, d) in ops {
            if d > 0 {
                self.counters[c] += 1;
                self.trace.incremented(c, self.counters[c]);
            } else if d < 0 {
                if self.counters[c] == 0 {
                    return Err(HaltReason::DecrementOnZero);
                }
                self.counters[c] -= 1;
                self.trace.decremented(c);
            }
        }
        Ok(())
    }

    pub fn mv(&mut self, dir: i8) -> Flow<()> {
        self.step(dir, &[])
    }

    /// Moves until the head reads `target`.
    pub fn walk_to(&mut self, dir: i8, target: char) -> Flow<()> {
        while self.read() != target {
            self.mv(dir)?;
        }
        Ok(())
    }

    /// Records a broken invariant of the program being run.
    pub fn note(&mut self, msg: String) {
        self.trace.violations.push(msg);
    }

    pub fn finish(self, outcome: Flow<bool>) -> RunResult {
        let reason = match outcome {
            Ok(true) => HaltReason::Accepted,
            Ok(false) => HaltReason::NoTransition,
            Err(r) => r,
        };
        RunResult::halted(reason, self.steps, self.trace)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::run::Verdict;

    #[test]
    fn combined_step_costs_one() {
        let mut vm = CounterVm::new(&['a', 'b'], 2, RunOptions::new(10)).unwrap();
        vm.step(1, &[(0, 1), (1, 1)]).unwrap();
        assert_eq!((vm.steps(), vm.read(), vm.zero(0), vm.zero(1)), (1, 'b', false, false));
        assert_eq!(vm.step(0, &[(0, -1), (0, 0)]), Ok(()));
        assert_eq!(vm.step(0, &[(0, -1)]), Err(HaltReason::DecrementOnZero));
    }

    #[test]
    fn limit_and_verdicts() {
        let mut vm = CounterVm::new(&['a'], 0, RunOptions::new(2)).unwrap();
        let r = (|| {
            vm.walk_to(1, '>')?;
            vm.mv(1)?;
            Ok(true)
        })();
        let res = vm.finish(r);
        assert_eq!(res.verdict, Verdict::Fault);
        let mut vm = CounterVm::new(&['a'; 5], 0, RunOptions::new(2)).unwrap();
        let r = vm.walk_to(1, '>').map(|_| true);
        assert_eq!(vm.finish(r).verdict, Verdict::Timeout);
    }
}
