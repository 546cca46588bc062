use crate::error::Result;
use crate::machine::run::{RunOptions, RunResult};
use crate::machine::tape::{LEFT_END, RIGHT_END};

use super::vm::{CounterVm, Flow};

/// Bit value of an input symbol.
fn bit(c: char) -> i8 {
    i8::from(c == '1')
}

/// Two-counter acceptor for marked palindromes `x$x^T` in `O(n^2 / log n)` steps.
///
/// The first half is cut into segments of about `log n` symbols. A segment is encoded
/// MSB-first on one counter behind a leading 1 by repeated doubling, moving the value
/// between the two counters; after every symbol a probe decides whether another doubling
/// would push the value past `n/2`, ending the segment. The mirrored squares are then
/// compared against the bits recovered by repeated halving. To get back, the segment start
/// is found again by measuring from the right end-marker and the segment is re-encoded,
/// which lands the head on the next segment's first square.
pub fn palindrome_2c_accept(x: &[char], opts: RunOptions) -> Result<RunResult> {
    let mut vm = CounterVm::new(x, 2, opts)?;
    let outcome = run(&mut vm);
    Ok(vm.finish(outcome))
}

fn run(vm: &mut CounterVm) -> Flow<bool> {
    if !first_scan(vm)? {
        return Ok(false);
    }
    vm.walk_to(-1, LEFT_END)?;
    vm.mv(1)?;
    loop {
        if vm.read() == '$' {
            return Ok(true);
        }
        // the head is on the segment's first square; both counters are zero
        let e = encode_segment(vm)?;
        // measure the distance to the left end-marker on the free counter
        let f = 1 - e;
        while vm.read() != LEFT_END {
            vm.step(-1, &[(f, 1)])?;
        }
        vm.walk_to(1, RIGHT_END)?;
        vm.step(0, &[(f, -1)])?;
        while !vm.zero(f) {
            vm.step(-1, &[(f, -1)])?;
        }
        if !decode_compare(vm, e)? {
            return Ok(false);
        }
        // the head is one square right of the segment's mirror image
        while vm.read() != RIGHT_END {
            vm.step(1, &[(0, 1)])?;
        }
        vm.walk_to(-1, LEFT_END)?;
        vm.mv(1)?;
        while !vm.zero(0) {
            vm.step(1, &[(0, -1)])?;
        }
        let e = encode_segment(vm)?;
        while !vm.zero(e) {
            vm.step(0, &[(e, -1)])?;
        }
    }
}

/// Checks for exactly one `$` with equally long sides and only 0/1 elsewhere.
fn first_scan(vm: &mut CounterVm) -> Flow<bool> {
    let mut marked = false;
    loop {
        match (vm.read(), marked) {
            ('0' | '1', false) => vm.step(1, &[(0, 1)])?,
            ('0' | '1', true) => {
                if vm.zero(0) {
                    return Ok(false);
                }
                vm.step(1, &[(0, -1)])?
            }
            ('$', false) => {
                marked = true;
                vm.mv(1)?
            }
            (RIGHT_END, true) => return Ok(vm.zero(0)),
            _ => return Ok(false),
        }
    }
}

/// Encodes squares from the head rightwards and returns the counter holding the value.
/// Stops on `$` or when the value exceeds half the distance to the right end-marker.
fn encode_segment(vm: &mut CounterVm) -> Flow<usize> {
    let mut e = 0;
    vm.step(0, &[(e, 1)])?;
    loop {
        let b = bit(vm.read());
        let f = 1 - e;
        while !vm.zero(e) {
            vm.step(0, &[(e, -1), (f, 1)])?;
            vm.step(0, &[(f, 1)])?;
        }
        e = f;
        if b == 1 {
            vm.step(1, &[(e, 1)])?;
        } else {
            vm.mv(1)?;
        }
        if !vm.zero(1 - e) {
            let msg = format!("both counters nonzero after doubling at step {}", vm.steps());
            vm.note(msg);
        }
        if vm.read() == '$' || !probe_small(vm, e)? {
            return Ok(e);
        }
    }
}

/// True iff `2 * value <= distance to the right end-marker`; restores the head and value.
///
/// Walks right taking one from the value every second square and counting the squares on
/// the free counter, then walks the same squares back undoing both.
fn probe_small(vm: &mut CounterVm, e: usize) -> Flow<bool> {
    let f = 1 - e;
    let mut odd = false;
    let small = loop {
        if vm.zero(e) {
            break true;
        }
        if vm.read() == RIGHT_END {
            break false;
        }
        odd = !odd;
        if odd {
            vm.step(1, &[(f, 1)])?;
        } else {
            vm.step(1, &[(f, 1), (e, -1)])?;
        }
    };
    while !vm.zero(f) {
        if odd {
            vm.step(-1, &[(f, -1)])?;
        } else {
            vm.step(-1, &[(f, -1), (e, 1)])?;
        }
        odd = !odd;
    }
    Ok(small)
}

/// Halves the value until only the leading 1 is left, comparing each remainder with the
/// square under the head and moving right.
fn decode_compare(vm: &mut CounterVm, mut e: usize) -> Flow<bool> {
    loop {
        let f = 1 - e;
        let rem = loop {
            if vm.zero(e) {
                break 0;
            }
            vm.step(0, &[(e, -1)])?;
            if vm.zero(e) {
                break 1;
            }
            vm.step(0, &[(e, -1), (f, 1)])?;
        };
        e = f;
        if vm.zero(e) {
            return Ok(true);
        }
        if bit(vm.read()) != rem || !matches!(vm.read(), '0' | '1') {
            return Ok(false);
        }
        vm.mv(1)?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounded::{oracle_membership, LanguageId};

    fn run_str(s: &str) -> RunResult {
        let x: Vec<char> = s.chars().collect();
        palindrome_2c_accept(&x, RunOptions::default()).unwrap()
    }

    #[test]
    fn examples() {
        assert!(run_str("01$10").accepted());
        assert!(!run_str("01$01").accepted());
        assert!(run_str("$").accepted());
        assert!(!run_str("").accepted());
        assert!(!run_str("0$$0").accepted());
        assert!(!run_str("01$1").accepted());
    }

    #[test]
    fn agrees_with_oracle() {
        let sy = ['0', '1', '$'];
        for len in 0..=12u32 {
            for code in 0..3u64.pow(len) {
                let mut c = code;
                let x: Vec<char> = (0..len)
                    .map(|_| {
                        let s = sy[(c % 3) as usize];
                        c /= 3;
                        s
                    })
                    .collect();
                let r = palindrome_2c_accept(&x, RunOptions::default()).unwrap();
                assert_eq!(r.accepted(), oracle_membership(LanguageId::L, &x).unwrap(), "{x:?}");
                assert!(r.trace.within_bound(), "{x:?} {:?}", r.trace);
                assert!(r.trace.violations.is_empty(), "{x:?}");
            }
        }
    }

    #[test]
    fn long_members_stay_within_bound() {
        for h in [100usize, 257, 1000] {
            let u: Vec<char> = (0..h).map(|i| if (i * i + 3 * i) % 7 < 3 { '1' } else { '0' }).collect();
            let mut x = u.clone();
            x.push('$');
            x.extend(u.iter().rev());
            let r = palindrome_2c_accept(&x, RunOptions::default()).unwrap();
            assert!(r.accepted());
            assert!(r.trace.within_bound());
            x[2 * h] = if x[2 * h] == '0' { '1' } else { '0' };
            assert!(!palindrome_2c_accept(&x, RunOptions::default()).unwrap().accepted());
        }
    }
}
