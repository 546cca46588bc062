//! Encoding bounded inputs onto counters, simulating a two-way head over the encoding, and
//! constant-factor counter compression.

pub mod compress;
pub mod encoding;
pub mod simulate;

pub use compress::{compression_factor, speedup_run, CompressedCounterState, SpeedupReport, ADDITIVE_K};
pub use encoding::{decode_encoded_input, encode_bounded_input, encode_with_trace, EncodedInput, Item, StageRecord};
pub use simulate::run_on_encoding;
