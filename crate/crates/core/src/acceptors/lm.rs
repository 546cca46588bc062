use crate::error::{Error, Result};
use crate::machine::run::{RunOptions, RunResult};
use crate::machine::tape::{LEFT_END, RIGHT_END};

use super::vm::{CounterVm, Flow};

/// Counter roles: the encoding pair and the pair holding `t = log2 |u|`.
const E0: usize = 0;
const E1: usize = 1;
const T0: usize = 2;
const T1: usize = 3;

fn partner(t: usize) -> usize {
    if t == T0 {
        T1
    } else {
        T0
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Visit {
    Pass,
    Encode,
    Decode,
}

struct Lm {
    vm: CounterVm,
    m: u32,
    /// Counter currently holding t, and its empty partner.
    t: usize,
    /// Counter currently holding the block encoding.
    e: usize,
}

/// Four-counter acceptor for `L_m` in `(2m + 3) n + o(n)` steps.
///
/// Left-to-right scan comparing the sides of `$`; stationary halving of `|u|` to find
/// `t` with `|u| = 2^t`; a right-to-left pass skipping the `m t` data squares, measuring
/// the right desert and checking the left one against it; then `2m` crossings, each
/// encoding a block of about `t/2` data bits at one end and comparing it with its mirror
/// image at the other end. Block sizes alternate between `ceil(t/2)` and `floor(t/2)`.
pub fn lm_accept(m: u32, x: &[char], opts: RunOptions) -> Result<RunResult> {
    if m == 0 {
        return Err(Error::InvalidArgument("L_m needs m >= 1".into()));
    }
    let vm = CounterVm::new(x, 4, opts)?;
    let mut lm = Lm { vm, m, t: T0, e: E0 };
    let outcome = lm.run();
    Ok(lm.vm.finish(outcome))
}

impl Lm {
    fn run(&mut self) -> Flow<bool> {
        Ok(self.scan()? && self.log_length()? && self.deserts()? && self.compare_blocks()?)
    }

    /// Ends on the right end-marker with `|u|` on `E1`.
    fn scan(&mut self) -> Flow<bool> {
        let vm = &mut self.vm;
        let mut marked = false;
        loop {
            match (vm.read(), marked) {
                ('0' | '1', false) => vm.step(1, &[(E0, 1), (E1, 1)])?,
                ('0' | '1', true) => {
                    if vm.zero(E0) {
                        return Ok(false);
                    }
                    vm.step(1, &[(E0, -1)])?
                }
                ('$', false) => {
                    marked = true;
                    vm.mv(1)?
                }
                (RIGHT_END, true) => return Ok(vm.zero(E0)),
                _ => return Ok(false),
            }
        }
    }

    /// Halves `value` into `into` in place and returns the remainder.
    fn halve(&mut self, value: usize, into: usize) -> Flow<i8> {
        let vm = &mut self.vm;
        loop {
            if vm.zero(value) {
                return Ok(0);
            }
            vm.step(0, &[(value, -1)])?;
            if vm.zero(value) {
                return Ok(1);
            }
            vm.step(0, &[(value, -1), (into, 1)])?;
        }
    }

    /// Computes `t` on `T0`, rejecting unless `|u|` is a positive power of two.
    fn log_length(&mut self) -> Flow<bool> {
        let (mut h, mut spare) = (E1, T1);
        if self.vm.zero(h) {
            return Ok(false);
        }
        loop {
            let rem = self.halve(h, spare)?;
            if self.vm.zero(spare) {
                return Ok(true);
            }
            if rem == 1 {
                return Ok(false);
            }
            self.vm.step(0, &[(T0, 1)])?;
            std::mem::swap(&mut h, &mut spare);
        }
    }

    /// From the right end-marker: skip `m t` squares, count the zeros up to `$`, check as
    /// many zeros left of `$`, and walk on to the left end-marker.
    fn deserts(&mut self) -> Flow<bool> {
        let (t, spare) = (self.t, partner(self.t));
        loop {
            if self.vm.zero(t) {
                break;
            }
            for i in 0..self.m {
                let ops: &[(usize, i8)] = if i == 0 { &[(t, -1), (spare, 1)] } else { &[] };
                self.vm.step(-1, ops)?;
                if !matches!(self.vm.read(), '0' | '1') {
                    return Ok(false);
                }
            }
        }
        self.t = spare;
        let vm = &mut self.vm;
        vm.mv(-1)?;
        loop {
            match vm.read() {
                '$' => break,
                '0' => vm.step(-1, &[(E0, 1)])?,
                _ => return Ok(false),
            }
        }
        while !vm.zero(E0) {
            vm.step(-1, &[(E0, -1)])?;
            if vm.read() != '0' {
                return Ok(false);
            }
        }
        vm.walk_to(-1, LEFT_END)?;
        Ok(true)
    }

    /// Walks over block `k` (1-based) in direction `dir`, spending `t` units: blocks with odd
    /// `k` take `ceil(t/2)` squares, the others `floor(t/2)`. Returns false on a mismatch.
    fn walk_block(&mut self, k: u32, dir: i8, visit: Visit) -> Flow<bool> {
        let (t, spare) = (self.t, partner(self.t));
        let mut unit = 0u32;
        while !self.vm.zero(t) {
            unit += 1;
            let moves = (unit % 2 == 1) == (k % 2 == 1);
            if moves && !self.visit(visit)? {
                return Ok(false);
            }
            self.vm.step(if moves { dir } else { 0 }, &[(t, -1), (spare, 1)])?;
        }
        self.t = spare;
        Ok(true)
    }

    fn visit(&mut self, visit: Visit) -> Flow<bool> {
        let f = 1 - self.e;
        match visit {
            Visit::Pass => Ok(true),
            Visit::Encode => {
                let b = self.vm.read() == '1';
                while !self.vm.zero(self.e) {
                    self.vm.step(0, &[(self.e, -1), (f, 1)])?;
                    self.vm.step(0, &[(f, 1)])?;
                }
                self.e = f;
                if b {
                    self.vm.step(0, &[(f, 1)])?;
                }
                Ok(true)
            }
            Visit::Decode => {
                let rem = self.halve(self.e, f)?;
                self.e = f;
                Ok(rem == i8::from(self.vm.read() == '1'))
            }
        }
    }

    /// Walks over blocks `1..=k`.
    fn walk_prefix(&mut self, k: u32, dir: i8) -> Flow<()> {
        for i in 1..=k {
            self.walk_block(i, dir, Visit::Pass)?;
        }
        Ok(())
    }

    fn compare_blocks(&mut self) -> Flow<bool> {
        self.vm.mv(1)?;
        let last = 2 * self.m;
        for k in 1..=last {
            let (dir, far) = if k % 2 == 1 { (1, RIGHT_END) } else { (-1, LEFT_END) };
            if !self.walk_block(k, dir, Visit::Encode)? {
                return Ok(false);
            }
            self.vm.walk_to(dir, far)?;
            self.walk_prefix(k, -dir)?;
            if !self.walk_block(k, dir, Visit::Decode)? {
                return Ok(false);
            }
            if !self.vm.zero(self.e) {
                let msg = format!("block {k} left a nonzero encoding");
                self.vm.note(msg);
            }
            if k < last {
                self.walk_block(k, -dir, Visit::Pass)?;
                self.vm.mv(-dir)?;
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acceptors::families::{lm_member, lm_near_misses, lm_small_candidates};
    use crate::bounded::{oracle_membership, LanguageId};

    fn chars(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    #[test]
    fn examples() {
        let r = |s: &str| lm_accept(1, &chars(s), RunOptions::default()).unwrap().accepted();
        assert!(r("1100$0011"));
        assert!(!r("1100$0010"));
        assert!(r("0$0"));
        assert!(!r("1$1"));
        assert!(!r("$"));
        assert!(lm_accept(0, &chars("0$0"), RunOptions::default()).is_err());
    }

    #[test]
    fn agrees_with_oracle_on_candidates() {
        for m in 1..=3 {
            for x in lm_small_candidates(m, 9, 16) {
                let r = lm_accept(m, &x, RunOptions::default()).unwrap();
                let want = oracle_membership(LanguageId::Lm(m), &x).unwrap();
                assert_eq!(r.accepted(), want, "m = {m}, {:?}", x.iter().collect::<String>());
                assert!(r.trace.within_bound() && r.trace.violations.is_empty());
            }
        }
    }

    #[test]
    fn near_misses_rejected_consistently() {
        for (i, x) in lm_near_misses(1, 300, 11).into_iter().enumerate() {
            let r = lm_accept(1, &x, RunOptions::default()).unwrap();
            assert_eq!(r.accepted(), oracle_membership(LanguageId::Lm(1), &x).unwrap(), "case {i}");
        }
    }

    #[test]
    fn linear_steps() {
        let x = lm_member(2, 10, 3);
        let n = x.len() as f64;
        let r = lm_accept(2, &x, RunOptions::default()).unwrap();
        assert!(r.accepted());
        assert!((r.steps as f64) / n <= 7.5, "{}", r.steps as f64 / n);
    }
}
