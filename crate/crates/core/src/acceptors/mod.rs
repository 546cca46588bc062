//! Counter programs for the marked-palindrome family and `{ww}` with step metering.

pub mod families;
pub mod lm;
pub mod palindrome;
pub mod vm;
pub mod ww;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::machine::run::{RunOptions, RunResult, Verdict};

pub use lm::lm_accept;
pub use palindrome::palindrome_2c_accept;
pub use vm::CounterVm;
pub use ww::ww_accept;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Acceptor {
    Ww,
    Palindrome2c,
    Lm(u32),
}

impl Acceptor {
    /// Counters the program may use.
    pub fn counter_budget(self) -> usize {
        match self {
            Acceptor::Ww => 1,
            Acceptor::Palindrome2c => 2,
            Acceptor::Lm(_) => 4,
        }
    }

    pub fn run(self, x: &[char], opts: RunOptions) -> Result<RunResult> {
        match self {
            Acceptor::Ww => ww_accept(x, opts),
            Acceptor::Palindrome2c => palindrome_2c_accept(x, opts),
            Acceptor::Lm(m) => lm_accept(m, x, opts),
        }
    }
}

impl fmt::Display for Acceptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Acceptor::Ww => write!(f, "ww"),
            Acceptor::Palindrome2c => write!(f, "palindrome2c"),
            Acceptor::Lm(m) => write!(f, "lm:{m}"),
        }
    }
}

impl FromStr for Acceptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ww" => Ok(Acceptor::Ww),
            "palindrome2c" | "palindrome" => Ok(Acceptor::Palindrome2c),
            "lm" => Ok(Acceptor::Lm(1)),
            _ => s
                .strip_prefix("lm:")
                .or_else(|| s.strip_prefix("lm"))
                .and_then(|m| m.parse().ok())
                .filter(|m| *m >= 1)
                .map(Acceptor::Lm)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown acceptor {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepSample {
    pub n: usize,
    pub steps: u64,
    pub verdict: Verdict,
    pub max_counter: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepSeries {
    pub samples: Vec<StepSample>,
}

/// Runs `acceptor` on inputs of strictly increasing length.
pub fn measure_steps<I>(acceptor: Acceptor, inputs: I, opts: RunOptions) -> Result<StepSeries>
where
    I: IntoIterator<Item = Vec<char>>,
{
    let mut series = StepSeries::default();
    for x in inputs {
        if series.samples.last().is_some_and(|s| s.n >= x.len()) {
            return Err(Error::InvalidArgument("input lengths must strictly increase".into()));
        }
        let r = acceptor.run(&x, opts)?;
        if r.verdict == Verdict::Timeout {
            return Err(Error::Timeout { n: x.len(), limit: opts.limit });
        }
        if r.trace.max_values.len() > acceptor.counter_budget() {
            return Err(Error::InvalidArgument(format!("{acceptor} exceeded its counter budget")));
        }
        series.samples.push(StepSample {
            n: x.len(),
            steps: r.steps,
            verdict: r.verdict,
            max_counter: r.trace.max_value(),
        });
    }
    Ok(series)
}
