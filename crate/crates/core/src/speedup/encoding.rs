use serde::{Deserialize, Serialize};

use crate::bounded::{conjugates, factorize, BoundDescriptor};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Item {
    /// Symbols kept verbatim in finite control.
    Literal(Vec<char>),
    /// `count` consecutive copies of `word`, a conjugate of one bound word.
    Run { word: Vec<char>, count: u64 },
}

impl Item {
    pub fn len(&self) -> usize {
        match self {
            Item::Literal(w) => w.len(),
            Item::Run { word, count } => word.len() * *count as usize,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EncodedInput {
    pub items: Vec<Item>,
    pub bound: BoundDescriptor,
}

impl EncodedInput {
    pub fn runs(&self) -> usize {
        self.items.iter().filter(|i| matches!(i, Item::Run { .. })).count()
    }

    /// Length of the decoded word.
    pub fn len(&self) -> usize {
        self.items.iter().map(Item::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// What one stage of the encoder did.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: usize,
    /// Input prefix covered when the stage started and ended.
    pub start: usize,
    pub end: usize,
    /// Conjugate matched by the probe, if any.
    pub matched: Option<Vec<char>>,
    /// Total length of the first `stage + 1` blocks of a factorization of the input.
    pub blocks_end: usize,
}

impl StageRecord {
    pub fn covers_blocks(&self) -> bool {
        self.end >= self.blocks_end
    }
}

pub fn encode_bounded_input(input: &[char], b: &BoundDescriptor) -> Result<EncodedInput> {
    encode_with_trace(input, b).map(|(e, _)| e)
}

/// Stage-wise encoder. Each stage probes the next `2 mu` symbols; if they are a prefix of
/// `(vu)^omega` for a conjugate `vu` of the stage's word, whole copies of `vu` are counted
/// from there on and the first mismatching `|vu|` symbols are kept as a literal. Otherwise
/// the probe itself becomes a literal.
pub fn encode_with_trace(input: &[char], b: &BoundDescriptor) -> Result<(EncodedInput, Vec<StageRecord>)> {
    let exps = factorize(input, b)
        .ok_or_else(|| Error::BoundViolation(format!("{:?} is not in {b}", input.iter().collect::<String>())))?;
    let mu = b.mu();
    let probe = 2 * mu;
    let mut items = Vec::new();
    let mut stages = Vec::new();
    let mut pos = 0;
    let mut blocks_end = 0;
    for (i, w) in b.words().iter().enumerate() {
        blocks_end += exps[i] * w.len();
        let start = pos;
        let mut matched = None;
        if pos + probe > input.len() {
            if pos < input.len() {
                items.push(Item::Literal(input[pos..].to_vec()));
                pos = input.len();
            }
        } else {
            let y = &input[pos..pos + probe];
            let hit = conjugates(w)?.into_iter().find(|z| y.iter().enumerate().all(|(j, c)| *c == z[j % z.len()]));
            match hit {
                None => {
                    items.push(Item::Literal(y.to_vec()));
                    pos += probe;
                }
                Some(z) => {
                    let p = z.len();
                    let mut count = (probe / p) as u64;
                    let mut end = pos + count as usize * p;
                    while end + p <= input.len() && input[end..end + p] == z[..] {
                        end += p;
                        count += 1;
                    }
                    items.push(Item::Run { word: z.clone(), count });
                    let rest = (end + p).min(input.len());
                    if rest > end {
                        items.push(Item::Literal(input[end..rest].to_vec()));
                    }
                    pos = rest;
                    matched = Some(z);
                }
            }
        }
        stages.push(StageRecord { stage: i, start, end: pos, matched, blocks_end });
    }
    if pos != input.len() {
        return Err(Error::BoundViolation(format!("encoding stopped at {pos} of {}", input.len())));
    }
    Ok((EncodedInput { items, bound: b.clone() }, stages))
}

pub fn decode_encoded_input(e: &EncodedInput) -> Vec<char> {
    let mut out = Vec::with_capacity(e.len());
    for item in &e.items {
        match item {
            Item::Literal(w) => out.extend_from_slice(w),
            Item::Run { word, count } => {
                for _ in 0..*count {
                    out.extend_from_slice(word);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounded::fine_wilf_threshold;
    use proptest::prelude::*;

    fn chars(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    fn lit(s: &str) -> Item {
        Item::Literal(chars(s))
    }

    fn run(s: &str, count: u64) -> Item {
        Item::Run { word: chars(s), count }
    }

    #[test]
    fn examples() {
        let b: BoundDescriptor = "ab,c".parse().unwrap();
        let e = encode_bounded_input(&chars("ababcc"), &b).unwrap();
        assert_eq!(e.items, vec![run("ab", 2), lit("cc")]);
        assert_eq!(decode_encoded_input(&e), chars("ababcc"));

        let b: BoundDescriptor = "a".parse().unwrap();
        assert_eq!(encode_bounded_input(&chars("aaaa"), &b).unwrap().items, vec![run("a", 4)]);

        let b: BoundDescriptor = "a,b".parse().unwrap();
        assert!(encode_bounded_input(&[], &b).unwrap().items.is_empty());
        assert!(matches!(encode_bounded_input(&chars("ba"), &b), Err(Error::BoundViolation(_))));
    }

    #[test]
    fn conjugate_match_inside_block() {
        let b: BoundDescriptor = "c,ab".parse().unwrap();
        let (e, stages) = encode_with_trace(&chars("cababababab"), &b).unwrap();
        assert_eq!(e.items, vec![lit("caba"), run("ba", 3), lit("b")]);
        assert_eq!(decode_encoded_input(&e), chars("cababababab"));
        assert!(stages.iter().all(StageRecord::covers_blocks));
        assert_eq!(stages[1].matched, Some(chars("ba")));
    }

    #[test]
    fn probe_length_suffices_for_fine_wilf() {
        for mu in 1..=6 {
            for h in 1..=mu {
                for k in 1..=mu {
                    assert!(2 * mu >= fine_wilf_threshold(h, k).unwrap());
                }
            }
        }
    }

    fn bounded_word() -> impl Strategy<Value = (BoundDescriptor, Vec<char>)> {
        let word = prop::collection::vec(prop::sample::select(vec!['a', 'b', 'c']), 1..=3);
        prop::collection::vec(word, 1..=3)
            .prop_flat_map(|words| {
                let m = words.len();
                (Just(words), prop::collection::vec(0usize..8, m))
            })
            .prop_map(|(words, exps)| {
                let input = words.iter().zip(&exps).flat_map(|(w, e)| w.repeat(*e)).collect();
                (BoundDescriptor::new(words).unwrap(), input)
            })
    }

    proptest! {
        #[test]
        fn roundtrip_and_invariants((b, x) in bounded_word()) {
            let (e, stages) = encode_with_trace(&x, &b).unwrap();
            prop_assert_eq!(decode_encoded_input(&e), x);
            prop_assert!(e.runs() <= b.len());
            let mu = b.mu();
            for item in &e.items {
                if let Item::Literal(w) = item {
                    prop_assert!(w.len() <= 2 * mu);
                }
            }
            prop_assert!(stages.iter().all(StageRecord::covers_blocks));
        }
    }
}
