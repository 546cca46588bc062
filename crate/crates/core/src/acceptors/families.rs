//! Input families used for cross-checks and step measurements.

use rand::{Rng, SeedableRng};

use super::Acceptor;
use crate::error::{Error, Result};
use rand_chacha::ChaCha8Rng;

fn random_bits(rng: &mut ChaCha8Rng, len: usize) -> Vec<char> {
    (0..len).map(|_| if rng.gen_bool(0.5) { '1' } else { '0' }).collect()
}

fn bits_of(v: u64, len: usize) -> Vec<char> {
    (0..len).map(|i| if v >> i & 1 == 1 { '1' } else { '0' }).collect()
}

/// `u$u^T`.
pub fn marked_mirror(u: &[char]) -> Vec<char> {
    let mut x = u.to_vec();
    x.push('$');
    x.extend(u.iter().rev());
    x
}

/// A random member of `L` with `h` symbols on each side.
pub fn palindrome_member(h: usize, seed: u64) -> Vec<char> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    marked_mirror(&random_bits(&mut rng, h))
}

/// `0^h $ 0^h`.
pub fn zeros_palindrome(h: usize) -> Vec<char> {
    marked_mirror(&vec!['0'; h])
}

/// Every word over `symbols` of length at most `max_len`, shortest first.
pub fn all_words(symbols: &[char], max_len: usize) -> Vec<Vec<char>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w: &Vec<char>| {
                symbols.iter().map(move |c| {
                    let mut w = w.clone();
                    w.push(*c);
                    w
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// A random member of `L_m` with `|u| = 2^t`; needs `m t <= 2^t`.
pub fn lm_member(m: u32, t: u32, seed: u64) -> Vec<char> {
    let h = 1usize << t;
    let data = (m * t) as usize;
    assert!(data <= h, "m t must not exceed 2^t");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = random_bits(&mut rng, data);
    u.resize(h, '0');
    marked_mirror(&u)
}

/// Well-formed candidates for `L_m`: every word over `{0,1,$}` up to `exhaustive_len`,
/// then for every side length `h <= max_h` all `y 0^(h-|y|) $ 0^(h-|y|) y^T` with
/// `|y| <= 6`, plus, when `h = 2^t`, words whose data part has exactly `m t` symbols.
pub fn lm_small_candidates(m: u32, exhaustive_len: usize, max_h: usize) -> Vec<Vec<char>> {
    let mut out = all_words(&['0', '1', '$'], exhaustive_len);
    let mut rng = ChaCha8Rng::seed_from_u64(u64::from(m));
    for h in 1..=max_h {
        let mut lens: Vec<usize> = (0..=h.min(6)).collect();
        if h.is_power_of_two() {
            let exact = m as usize * h.trailing_zeros() as usize;
            if exact <= h && exact > 6 {
                lens.push(exact);
            }
        }
        for len in lens {
            let ys: Vec<Vec<char>> = if len <= 10 {
                (0..1u64 << len).map(|v| bits_of(v, len)).collect()
            } else {
                (0..64).map(|_| random_bits(&mut rng, len)).collect()
            };
            for mut u in ys {
                u.resize(h, '0');
                out.push(marked_mirror(&u));
            }
        }
    }
    out
}

/// Members of `L_m` with one random local edit: a flipped bit, a moved, doubled or deleted
/// marker, an inserted or deleted symbol, or a longer desert on one side.
pub fn lm_near_misses(m: u32, count: usize, seed: u64) -> Vec<Vec<char>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ts: Vec<u32> = (1..=6).filter(|t| m * t <= 1 << t).collect();
    (0..count)
        .map(|_| {
            let t = ts[rng.gen_range(0..ts.len())];
            let mut x = lm_member(m, t, rng.gen());
            let i = rng.gen_range(0..x.len());
            match rng.gen_range(0..6) {
                0 => {
                    x[i] = if x[i] == '0' {
                        '1'
                    } else if x[i] == '1' {
                        '0'
                    } else {
                        '$'
                    }
                }
                1 => {
                    x.remove(i);
                }
                2 => x.insert(i, if rng.gen_bool(0.5) { '0' } else { '1' }),
                3 => x.insert(i, '$'),
                4 => {
                    let d = x.iter().position(|c| *c == '$').unwrap();
                    x.swap(d, i);
                }
                _ => {
                    let d = x.iter().position(|c| *c == '$').unwrap();
                    x.insert(d + usize::from(rng.gen_bool(0.5)), '0');
                }
            }
            x
        })
        .collect()
}

/// The accepted input of length at most `n` that benchmarks use for `acceptor`:
/// `uu` for ww, `u$u^T` for the palindromes (both with `u` drawn from a generator seeded
/// by `n`), and for `L_m` the member with the largest side `2^t` that fits.
pub fn canonical_member(acceptor: Acceptor, n: usize) -> Result<Vec<char>> {
    match acceptor {
        Acceptor::Ww => {
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            let u = random_bits(&mut rng, n / 2);
            Ok([u.clone(), u].concat())
        }
        Acceptor::Palindrome2c => {
            if n == 0 {
                return Err(Error::InvalidArgument("palindrome members have odd length >= 1".into()));
            }
            Ok(palindrome_member((n - 1) / 2, n as u64))
        }
        Acceptor::Lm(m) => {
            let t = (1..40u32)
                .rev()
                .find(|t| (2u64 << t) < n as u64 && u64::from(m * t) <= 1 << t)
                .ok_or_else(|| Error::InvalidArgument(format!("no member of L_{m} has length <= {n}")))?;
            Ok(lm_member(m, t, n as u64))
        }
    }
}
