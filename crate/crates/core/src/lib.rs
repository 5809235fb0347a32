//! Procedural generation, rules engine and playtrace analytics for
//! Elimination, a word puzzle where letters are removed from a scrambled
//! challenge word until a dictionary word remains.

pub mod analytics;
pub mod corpus;
pub mod game;
pub mod generation;
pub mod simulation;

pub use corpus::{is_subsequence, CorpusSlice, Dictionary};
pub use generation::{GeneratedChallenge, GeneratedLevel, GenerationParams};
