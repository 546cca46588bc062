use crate::error::{Error, Result};
use crate::machine::mha::{MhaKey, MultiHeadAutomaton};
use crate::machine::normalize::normalize_head_order;
use crate::machine::run::{HaltReason, LoopDetector, RunOptions, RunResult, Trace};
use crate::machine::tape::{LEFT_END, RIGHT_END};

/// Finite control of the register simulation besides the automaton state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Flags {
    on_left: Vec<bool>,
    on_right: Vec<bool>,
    empty: bool,
}

/// Register file with one-step-per-call accounting.
struct RegisterVm {
    regs: Vec<u64>,
    steps: u64,
    limit: u64,
    trace: Trace,
}

impl RegisterVm {
    fn step(&mut self, inc: Option<usize>, dec: Option<usize>) -> std::result::Result<(), HaltReason> {
        if self.steps >= self.limit {
            return Err(HaltReason::StepLimit);
        }
        self.steps += 1;
        if let Some(r) = dec {
            if self.regs[r] == 0 {
                return Err(HaltReason::DecrementOnZero);
            }
            self.regs[r] -= 1;
            self.trace.decremented(r);
        }
        if let Some(r) = inc {
            self.regs[r] += 1;
            self.trace.incremented(r, self.regs[r]);
        }
        Ok(())
    }
}

/// Register contents right after initialization for a `k`-head machine on input length `n`.
///
/// Register 0 is the distance from the last head to the right end-marker, register 1 the
/// distance of the first head from square 1 and register `j + 1` the gap between heads
/// `j - 1` and `j`. Heads on an end-marker count as standing on the nearest input square.
pub fn initial_registers(k: usize, n: u64) -> Vec<u64> {
    let mut regs = vec![0; k + 1];
    regs[0] = n.saturating_sub(1);
    regs
}

/// Runs a sensing automaton over a unary alphabet on the word of length `n` with a machine
/// that has `k + 1` registers and no tape. Register 0 initially holds `n`.
///
/// Non-sensing machines are treated as sensing machines that ignore coincidences.
pub fn heads_to_registers_run(m: &MultiHeadAutomaton, n: u64, opts: RunOptions) -> Result<RunResult> {
    opts.validate()?;
    if m.alphabet().len() != 1 {
        return Err(Error::Unsupported("register simulation needs a unary alphabet".into()));
    }
    let sym = m.alphabet()[0];
    let m = normalize_head_order(&m.as_sensing())?;
    let k = m.heads();
    let mut vm = RegisterVm { regs: vec![0; k + 1], steps: 0, limit: opts.limit, trace: Trace::new(0, k + 1, n, 0) };
    vm.regs[0] = n;
    vm.trace.max_values[0] = n;
    let mut state = m.start();
    let mut fl = Flags { on_left: vec![false; k], on_right: vec![false; k], empty: false };

    let reason = (|| -> std::result::Result<HaltReason, HaltReason> {
        if m.is_accepting(state) {
            return Ok(HaltReason::Accepted);
        }
        // zero-test register 0 and turn n into n - 1 (square 1 is the reference point)
        if vm.regs[0] == 0 {
            vm.step(None, None)?;
            fl.empty = true;
            fl.on_right = vec![true; k];
        } else {
            vm.step(None, Some(0))?;
        }
        let mut loops = LoopDetector::new();
        loop {
            if m.is_accepting(state) {
                return Ok(HaltReason::Accepted);
            }
            if opts.detect_loops && loops.observe(&(state, fl.clone(), vm.regs.clone())) {
                return Ok(HaltReason::Loop);
            }
            let reads: Vec<char> = (0..k)
                .map(|j| {
                    if fl.on_left[j] {
                        LEFT_END
                    } else if fl.on_right[j] {
                        RIGHT_END
                    } else {
                        sym
                    }
                })
                .collect();
            let mut coincidence = vec![0u8; k];
            for j in 1..k {
                let same = fl.on_left[j] == fl.on_left[j - 1]
                    && fl.on_right[j] == fl.on_right[j - 1]
                    && (fl.on_left[j] || fl.on_right[j] || vm.regs[j + 1] == 0);
                coincidence[j] = if same { coincidence[j - 1] } else { j as u8 };
            }
            let key = MhaKey { state, reads, coincidence: Some(coincidence) };
            let Some(action) = m.lookup(&key) else {
                return Ok(HaltReason::NoTransition);
            };
            let j = action.moves.iter().position(|d| *d != 0).expect("one-move machine");
            // register holding the gap to the right of head j
            let right_gap = if j + 1 == k { 0 } else { j + 2 };
            if action.moves[j] > 0 {
                if fl.on_right[j] {
                    return Err(HaltReason::HeadOffTape);
                }
                let at_last = vm.regs[0] == 0 && (j + 1..k).all(|i| vm.regs[i + 1] == 0);
                if fl.on_left[j] {
                    fl.on_left[j] = false;
                    fl.on_right[j] = fl.empty;
                    vm.step(None, None)?;
                } else if at_last {
                    fl.on_right[j] = true;
                    vm.step(None, None)?;
                } else {
                    vm.step(Some(j + 1), Some(right_gap))?;
                }
            } else {
                if fl.on_left[j] {
                    return Err(HaltReason::HeadOffTape);
                }
                let at_first = (0..=j).all(|i| vm.regs[i + 1] == 0);
                if fl.on_right[j] {
                    fl.on_right[j] = false;
                    fl.on_left[j] = fl.empty;
                    vm.step(None, None)?;
                } else if at_first {
                    fl.on_left[j] = true;
                    vm.step(None, None)?;
                } else {
                    vm.step(Some(right_gap), Some(j + 1))?;
                }
            }
            state = action.next;
        }
    })();
    let reason = reason.unwrap_or_else(|r| r);
    Ok(RunResult::halted(reason, vm.steps, vm.trace))
}
