//! Bounded words: bound descriptors, blocks, conjugates, the Fine–Wilf threshold and
//! string-level membership oracles for the witness languages.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::machine::tape::is_end_marker;

/// A bound `w_1* w_2* ... w_m*`; the words need not be distinct.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoundDescriptor {
    words: Vec<Vec<char>>,
}

impl BoundDescriptor {
    pub fn new(words: Vec<Vec<char>>) -> Result<Self> {
        if words.is_empty() {
            return Err(Error::InvalidArgument("a bound needs at least one word".into()));
        }
        if words.iter().any(|w| w.is_empty()) {
            return Err(Error::InvalidArgument("bound words must be nonempty".into()));
        }
        if let Some(c) = words.iter().flatten().find(|c| is_end_marker(**c)) {
            return Err(Error::ReservedSymbol(*c));
        }
        Ok(BoundDescriptor { words })
    }

    pub fn words(&self) -> &[Vec<char>] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Length of the longest bound word.
    pub fn mu(&self) -> usize {
        self.words.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn alphabet(&self) -> Vec<char> {
        let set: BTreeSet<char> = self.words.iter().flatten().copied().collect();
        set.into_iter().collect()
    }

    /// Strict bound if every word is a single symbol and the symbols are distinct.
    pub fn as_strict(&self) -> Option<StrictBound> {
        if self.words.iter().all(|w| w.len() == 1) {
            StrictBound::new(self.words.iter().map(|w| w[0]).collect()).ok()
        } else {
            None
        }
    }
}

impl FromStr for BoundDescriptor {
    type Err = Error;

    /// Comma-separated words, e.g. `ab,c`.
    fn from_str(s: &str) -> Result<Self> {
        BoundDescriptor::new(s.split(',').map(|w| w.trim().chars().collect()).collect())
    }
}

impl fmt::Display for BoundDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<String> = self.words.iter().map(|w| w.iter().collect()).collect();
        write!(f, "{}", words.join(","))
    }
}

/// A bound `a_1* ... a_m*` over pairwise distinct symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StrictBound {
    symbols: Vec<char>,
}

impl StrictBound {
    pub fn new(symbols: Vec<char>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::InvalidArgument("a strict bound needs at least one symbol".into()));
        }
        let distinct: BTreeSet<_> = symbols.iter().collect();
        if distinct.len() != symbols.len() {
            return Err(Error::InvalidArgument("strict bound symbols must be distinct".into()));
        }
        if let Some(c) = symbols.iter().find(|c| is_end_marker(**c)) {
            return Err(Error::ReservedSymbol(*c));
        }
        Ok(StrictBound { symbols })
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn index_of(&self, c: char) -> Option<usize> {
        self.symbols.iter().position(|s| *s == c)
    }

    pub fn descriptor(&self) -> BoundDescriptor {
        BoundDescriptor { words: self.symbols.iter().map(|c| vec![*c]).collect() }
    }

    pub fn matches(&self, input: &[char]) -> bool {
        let mut last = 0;
        for &c in input {
            match self.index_of(c) {
                Some(i) if i >= last => last = i,
                _ => return false,
            }
        }
        true
    }
}

impl FromStr for StrictBound {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let d: BoundDescriptor = s.parse()?;
        d.as_strict().ok_or_else(|| Error::InvalidArgument(format!("{s:?} is not a strict bound")))
    }
}

/// Maximal run of one symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub symbol: char,
    pub len: usize,
    pub start: usize,
}

pub fn decompose_blocks(input: &[char]) -> Vec<Block> {
    let mut blocks: Vec<Block> = Vec::new();
    for (i, &c) in input.iter().enumerate() {
        match blocks.last_mut() {
            Some(b) if b.symbol == c => b.len += 1,
            _ => blocks.push(Block { symbol: c, len: 1, start: i }),
        }
    }
    blocks
}

/// `reach[j][p]`: the prefix of length `p` lies in `w_1* ... w_j*` (row 0 is the empty bound).
fn reachability(input: &[char], b: &BoundDescriptor) -> Vec<Vec<bool>> {
    let n = input.len();
    let mut reach = vec![vec![false; n + 1]; b.len() + 1];
    reach[0][0] = true;
    for (j, w) in b.words().iter().enumerate() {
        for p in 0..=n {
            reach[j + 1][p] =
                reach[j][p] || (p >= w.len() && reach[j + 1][p - w.len()] && input[p - w.len()..p] == w[..]);
        }
    }
    reach
}

pub fn matches_bound(input: &[char], b: &BoundDescriptor) -> bool {
    reachability(input, b)[b.len()][input.len()]
}

/// One exponent vector `k` with `input = w_1^k_1 ... w_m^k_m`, preferring late words.
pub fn factorize(input: &[char], b: &BoundDescriptor) -> Option<Vec<usize>> {
    let reach = reachability(input, b);
    if !reach[b.len()][input.len()] {
        return None;
    }
    let mut exps = vec![0; b.len()];
    let mut p = input.len();
    for j in (0..b.len()).rev() {
        let w = &b.words()[j];
        while !reach[j][p] {
            exps[j] += 1;
            p -= w.len();
        }
    }
    Some(exps)
}

/// Distinct rotations of `w`, starting with `w` itself.
pub fn conjugates(w: &[char]) -> Result<Vec<Vec<char>>> {
    if w.is_empty() {
        return Err(Error::InvalidArgument("conjugates of the empty word".into()));
    }
    let mut out: Vec<Vec<char>> = Vec::new();
    for i in 0..w.len() {
        let r: Vec<char> = w[i..].iter().chain(&w[..i]).copied().collect();
        if !out.contains(&r) {
            out.push(r);
        }
    }
    Ok(out)
}

pub fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Agreement length after which an `h`-periodic and a `k`-periodic sequence coincide.
pub fn fine_wilf_threshold(h: usize, k: usize) -> Result<usize> {
    if h == 0 || k == 0 {
        return Err(Error::InvalidArgument("periods must be positive".into()));
    }
    Ok(h + k - gcd(h, k))
}

/// Witness languages with direct string predicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LanguageId {
    /// Marked binary palindromes `x$x^T`.
    L,
    /// `x 0^|x| $ 0^|x| x^T`.
    LPrime,
    /// `x 0^(2^(|x|/m) - |x|) $ 0^(2^(|x|/m) - |x|) x^T`.
    Lm(u32),
    /// `ww`.
    WW,
}

impl FromStr for LanguageId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "L" | "l" => Ok(LanguageId::L),
            "Lprime" | "lprime" | "L'" => Ok(LanguageId::LPrime),
            "WW" | "ww" => Ok(LanguageId::WW),
            _ => {
                let m = s
                    .strip_prefix("Lm")
                    .or_else(|| s.strip_prefix("lm"))
                    .map(|r| r.trim_start_matches([':', '(']).trim_end_matches(')'))
                    .and_then(|r| r.parse::<u32>().ok())
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown language {s:?}")))?;
                Ok(LanguageId::Lm(m))
            }
        }
    }
}

/// Splits `u$v` into `(u, v)` when there is exactly one `$` and only 0/1 elsewhere.
fn marked_halves(x: &[char]) -> Option<(&[char], &[char])> {
    if x.iter().filter(|c| **c == '$').count() != 1 || x.iter().any(|c| !matches!(c, '0' | '1' | '$')) {
        return None;
    }
    let d = x.iter().position(|c| *c == '$')?;
    Some((&x[..d], &x[d + 1..]))
}

fn is_mirror(u: &[char], v: &[char]) -> bool {
    u.len() == v.len() && u.iter().eq(v.iter().rev())
}

pub fn oracle_membership(lang: LanguageId, x: &[char]) -> Result<bool> {
    Ok(match lang {
        LanguageId::WW => x.len().is_multiple_of(2) && x[..x.len() / 2] == x[x.len() / 2..],
        LanguageId::L => marked_halves(x).is_some_and(|(u, v)| is_mirror(u, v)),
        LanguageId::LPrime => marked_halves(x)
            .is_some_and(|(u, v)| u.len() % 2 == 0 && is_mirror(u, v) && u[u.len() / 2..].iter().all(|c| *c == '0')),
        LanguageId::Lm(0) => return Err(Error::InvalidArgument("L_m needs m >= 1".into())),
        LanguageId::Lm(m) => marked_halves(x).is_some_and(|(u, v)| {
            // u = x 0^e with |u| = 2^t, |x| = m t and e = 2^t - m t >= 0
            if !is_mirror(u, v) || !u.len().is_power_of_two() {
                return false;
            }
            let t = u.len().trailing_zeros() as usize;
            let xlen = m as usize * t;
            xlen <= u.len() && u[xlen..].iter().all(|c| *c == '0')
        }),
    })
}

/// Every word of the bound with length at most `max_len`, each once, in
/// length-lexicographic order.
pub fn enumerate_bounded_inputs(b: &BoundDescriptor, max_len: usize) -> Vec<Vec<char>> {
    let mut found: BTreeSet<(usize, Vec<char>)> = BTreeSet::new();
    let mut stack = vec![(0usize, Vec::new())];
    while let Some((j, prefix)) = stack.pop() {
        if j == b.len() {
            found.insert((prefix.len(), prefix));
            continue;
        }
        let w = &b.words()[j];
        let mut cur = prefix;
        loop {
            stack.push((j + 1, cur.clone()));
            if cur.len() + w.len() > max_len {
                break;
            }
            cur.extend_from_slice(w);
        }
    }
    found.into_iter().map(|(_, w)| w).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    fn bound(s: &str) -> BoundDescriptor {
        s.parse().unwrap()
    }

    #[test]
    fn blocks() {
        let b = decompose_blocks(&c("aabbc"));
        let summary: Vec<_> = b.iter().map(|b| (b.symbol, b.len)).collect();
        assert_eq!(summary, vec![('a', 2), ('b', 2), ('c', 1)]);
        assert!(decompose_blocks(&[]).is_empty());
        let summary: Vec<_> = decompose_blocks(&c("aba")).iter().map(|b| (b.symbol, b.len)).collect();
        assert_eq!(summary, vec![('a', 1), ('b', 1), ('a', 1)]);
    }

    #[test]
    fn bound_matching() {
        assert!(matches_bound(&c("aab"), &bound("a,b")));
        assert!(!matches_bound(&c("ba"), &bound("a,b")));
        assert!(matches_bound(&c("abba"), &bound("ab,ba")));
        assert!(!matches_bound(&c("aabb"), &bound("ab,ba")));
        assert_eq!(factorize(&c("abba"), &bound("ab,ba")), Some(vec![1, 1]));
    }

    #[test]
    fn conjugate_sets() {
        assert_eq!(conjugates(&c("ab")).unwrap(), vec![c("ab"), c("ba")]);
        assert_eq!(conjugates(&c("aa")).unwrap(), vec![c("aa")]);
        assert_eq!(conjugates(&c("abc")).unwrap(), vec![c("abc"), c("bca"), c("cab")]);
        assert!(conjugates(&[]).is_err());
    }

    #[test]
    fn thresholds() {
        assert_eq!(fine_wilf_threshold(2, 3).unwrap(), 4);
        assert_eq!(fine_wilf_threshold(2, 4).unwrap(), 4);
        assert_eq!(fine_wilf_threshold(1, 1).unwrap(), 1);
        assert!(fine_wilf_threshold(0, 3).is_err());
    }

    #[test]
    fn oracles() {
        let yes = |l, s: &str| oracle_membership(l, &c(s)).unwrap();
        assert!(yes(LanguageId::L, "01$10"));
        assert!(yes(LanguageId::L, "$"));
        assert!(!yes(LanguageId::L, "01$01"));
        assert!(yes(LanguageId::LPrime, "10$01"));
        assert!(yes(LanguageId::Lm(1), "1100$0011"));
        assert!(!yes(LanguageId::Lm(1), "1100$0010"));
        assert!(yes(LanguageId::Lm(1), "0$0"));
        assert!(!yes(LanguageId::WW, "aba"));
        assert!(yes(LanguageId::WW, ""));
        assert!(oracle_membership(LanguageId::Lm(0), &c("$")).is_err());
    }

    #[test]
    fn lm_members_have_power_of_two_halves() {
        // brute force over all u of length <= 8 against the literal definition
        for m in 1..=3u32 {
            for t in 0..=3usize {
                let xlen = m as usize * t;
                if xlen > (1 << t) {
                    continue;
                }
                let e = (1usize << t) - xlen;
                for bits in 0..(1u32 << xlen) {
                    let x: Vec<char> = (0..xlen).map(|i| if bits >> i & 1 == 1 { '1' } else { '0' }).collect();
                    let mut w = x.clone();
                    w.extend(std::iter::repeat_n('0', 2 * e + 1));
                    w[xlen + e] = '$';
                    w.extend(x.iter().rev());
                    assert!(oracle_membership(LanguageId::Lm(m), &w).unwrap());
                    assert_eq!(w.len(), 2 * (1 << t) + 1);
                }
            }
        }
    }

    #[test]
    fn enumeration() {
        let strict: StrictBound = "a,b".parse().unwrap();
        let got = enumerate_bounded_inputs(&strict.descriptor(), 2);
        assert_eq!(got, vec![c(""), c("a"), c("b"), c("aa"), c("ab"), c("bb")]);
        assert_eq!(enumerate_bounded_inputs(&bound("a,b"), 0), vec![c("")]);
        assert_eq!(enumerate_bounded_inputs(&bound("ab"), 5), vec![c(""), c("ab"), c("abab")]);
    }

    #[test]
    fn enumeration_matches_filtered_brute_force() {
        let b = bound("ab,b,a");
        let mut brute = vec![Vec::new()];
        let mut layer = vec![Vec::new()];
        for _ in 0..7 {
            layer = layer
                .iter()
                .flat_map(|w: &Vec<char>| ['a', 'b'].iter().map(move |x| [w.clone(), vec![*x]].concat()))
                .collect();
            brute.extend(layer.iter().filter(|w| matches_bound(w, &b)).cloned());
        }
        assert_eq!(enumerate_bounded_inputs(&b, 7), brute);
    }

    #[test]
    fn strict_bound_rejects_repeats() {
        assert!(StrictBound::new(vec!['a', 'a']).is_err());
        assert!("ab,c".parse::<StrictBound>().is_err());
        assert!(BoundDescriptor::new(vec![vec![]]).is_err());
    }

    /// Exponent enumeration oracle for matches_bound.
    fn by_exponents(input: &[char], b: &BoundDescriptor) -> bool {
        fn go(input: &[char], words: &[Vec<char>]) -> bool {
            match words.split_first() {
                None => input.is_empty(),
                Some((w, rest)) => {
                    let mut s = input;
                    loop {
                        if go(s, rest) {
                            return true;
                        }
                        if s.starts_with(w) {
                            s = &s[w.len()..];
                        } else {
                            return false;
                        }
                    }
                }
            }
        }
        go(input, b.words())
    }

    proptest! {
        #[test]
        fn blocks_roundtrip(w in "[abc]{0,30}") {
            let w = c(&w);
            let blocks = decompose_blocks(&w);
            let joined: Vec<char> = blocks.iter().flat_map(|b| std::iter::repeat_n(b.symbol, b.len)).collect();
            prop_assert_eq!(joined, w);
            prop_assert!(blocks.windows(2).all(|p| p[0].symbol != p[1].symbol));
        }

        #[test]
        fn dp_agrees_with_exponent_enumeration(
            w in "[ab]{0,12}",
            w1 in "[ab]{1,3}",
            w2 in "[ab]{1,3}",
        ) {
            let b = BoundDescriptor::new(vec![c(&w1), c(&w2)]).unwrap();
            let w = c(&w);
            prop_assert_eq!(matches_bound(&w, &b), by_exponents(&w, &b));
            if let Some(k) = factorize(&w, &b) {
                let rebuilt: Vec<char> = k.iter().zip(b.words()).flat_map(|(k, w)| w.repeat(*k)).collect();
                prop_assert_eq!(rebuilt, w);
            }
        }
    }
}
