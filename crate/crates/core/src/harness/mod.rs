//! Worked-example corpus, end-to-end verification, property sweeps, and
//! CSV slice emission.

pub mod corpus;
pub mod interlace;
pub mod slice;
pub mod sweeps;
pub mod verify;
