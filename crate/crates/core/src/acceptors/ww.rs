use crate::error::Result;
use crate::machine::run::{RunOptions, RunResult};
use crate::machine::tape::{LEFT_END, RIGHT_END};

use super::vm::{CounterVm, Flow};

const C: usize = 0;

/// One-counter acceptor for `{ww}`.
///
/// After an even-length check, for every position `i` of the first half: store `i` on the
/// counter, sweep right across the whole tape adding one every second step (giving
/// `i + n/2`), sweep back and walk out the counter to the partner square; compare; then
/// run the same computation backwards to return to `i`.
pub fn ww_accept(x: &[char], opts: RunOptions) -> Result<RunResult> {
    let mut vm = CounterVm::new(x, 1, opts)?;
    let outcome = run(&mut vm);
    Ok(vm.finish(outcome))
}

fn run(vm: &mut CounterVm) -> Flow<bool> {
    let mut odd = false;
    while vm.read() != RIGHT_END {
        odd = !odd;
        vm.mv(1)?;
    }
    if odd {
        return Ok(false);
    }
    vm.walk_to(-1, LEFT_END)?;
    vm.mv(1)?;
    if vm.read() == RIGHT_END {
        return Ok(true);
    }
    loop {
        let sym = vm.read();
        // distance to the left end-marker
        while vm.read() != LEFT_END {
            vm.step(-1, &[(C, 1)])?;
        }
        half_sweep(vm, 1)?;
        vm.walk_to(-1, LEFT_END)?;
        while !vm.zero(C) {
            vm.step(1, &[(C, -1)])?;
        }
        if vm.read() != sym {
            return Ok(false);
        }
        vm.mv(1)?;
        if vm.read() == RIGHT_END {
            return Ok(true);
        }
        vm.mv(-1)?;
        // backwards: i + n/2 -> i
        while vm.read() != LEFT_END {
            vm.step(-1, &[(C, 1)])?;
        }
        half_sweep(vm, -1)?;
        vm.walk_to(-1, LEFT_END)?;
        while !vm.zero(C) {
            vm.step(1, &[(C, -1)])?;
        }
        vm.mv(1)?;
    }
}

/// From the left end-marker to the right one, applying `delta` on every second step.
fn half_sweep(vm: &mut CounterVm, delta: i8) -> Flow<()> {
    let mut even = false;
    while vm.read() != RIGHT_END {
        even = !even;
        if even {
            vm.mv(1)?;
        } else {
            vm.step(1, &[(C, delta)])?;
        }
    }
    Ok(())
}
