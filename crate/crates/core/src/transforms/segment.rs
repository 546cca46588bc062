use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::machine::mha::{MhaKey, MultiHeadAutomaton, StateId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundarySide {
    Left,
    Right,
}

impl BoundarySide {
    pub fn of(dir: i8) -> Self {
        if dir < 0 {
            BoundarySide::Left
        } else {
            BoundarySide::Right
        }
    }

    pub fn dir(self) -> i8 {
        match self {
            BoundarySide::Left => -1,
            BoundarySide::Right => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventOutcome {
    Causes(BoundarySide),
    Cannot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventPrediction {
    pub outcome: EventOutcome,
    /// Distinct partial configurations visited.
    pub examined: usize,
}

/// Decides whether `head` causes the next event, assuming no other head does.
///
/// `segment` holds the squares around the head (at most `2r - 1` of them for an `r`-state
/// machine, possibly truncated) with the head at `offset`; `reads` gives the symbol seen by
/// every head, and the entries of the other heads stay frozen. The head's block is the run of
/// its symbol around `offset`; leaving it, or leaving the segment, is an event on that side.
/// A repeated partial configuration, a halt or an accepting state means it cannot.
pub fn can_cause_next_event(
    m: &MultiHeadAutomaton,
    state: StateId,
    head: usize,
    segment: &[char],
    offset: usize,
    reads: &[char],
) -> Result<EventPrediction> {
    let r = m.num_states();
    if m.sensing() {
        return Err(Error::Unsupported("event prediction needs non-sensing heads".into()));
    }
    if segment.len() > 2 * r - 1 {
        return Err(Error::InvalidArgument(format!(
            "segment of {} squares exceeds 2r - 1 = {}",
            segment.len(),
            2 * r - 1
        )));
    }
    if offset >= segment.len() || head >= m.heads() || reads.len() != m.heads() {
        return Err(Error::InvalidArgument("head is not inside the segment".into()));
    }
    let symbol = segment[offset];
    let mut key = MhaKey { state, reads: reads.to_vec(), coincidence: None };
    key.reads[head] = symbol;
    let mut pos = offset;
    let mut seen = HashSet::new();
    let outcome = loop {
        if !seen.insert((key.state, pos)) || m.is_accepting(key.state) {
            break EventOutcome::Cannot;
        }
        let Some(action) = m.lookup(&key) else {
            break EventOutcome::Cannot;
        };
        let d = action.moves[head];
        key.state = action.next;
        if d != 0 {
            let side = BoundarySide::of(d);
            let next = pos as i64 + d as i64;
            if next < 0 || next >= segment.len() as i64 || segment[next as usize] != symbol {
                break EventOutcome::Causes(side);
            }
            pos = next as usize;
        }
    };
    Ok(EventPrediction { outcome, examined: seen.len() })
}

/// The squares within `radius` of `pos` on `cells`, clipped to the tape, with the head offset.
pub fn segment_around(cells: &[char], pos: usize, radius: usize) -> (Vec<char>, usize) {
    let lo = pos.saturating_sub(radius);
    let hi = (pos + radius).min(cells.len() - 1);
    (cells[lo..=hi].to_vec(), pos - lo)
}
