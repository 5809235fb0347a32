//! Rules engine: per-challenge timer, elimination with auto-solve,
//! scoring, level sessions and reachability.

mod reach;
mod rules;
mod session;

use thiserror::Error;

pub use reach::{reachable_words, ReachGraph, ReachabilityReport, Terminal};
pub use rules::{challenge_time, word_score, ChallengeState, ChallengeStatus};
pub use session::{ChallengeSpec, LevelSession, SessionEvent, SessionOutcome, Step};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GameError {
    #[error("challenge number {0} is outside 1..=10")]
    ChallengeNumber(usize),
    #[error("position {0} was already eliminated")]
    AlreadyEliminated(usize),
    #[error("position {index} is outside a {len}-letter challenge")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("challenge is no longer in progress")]
    NotInProgress,
    #[error("session has ended")]
    SessionOver,
    #[error("level has no challenges")]
    EmptyLevel,
    #[error("word of length {len} exceeds the enumeration cap of {cap}")]
    TooLong { len: usize, cap: usize },
}
