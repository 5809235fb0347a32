use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::GameError;
use crate::corpus::Dictionary;
use crate::generation::CHALLENGES_PER_LEVEL;

/// Seconds allowed for challenge `n` of a level: `30 / (1 + (n - 1) / 5)`.
pub fn challenge_time(n: usize) -> Result<f64, GameError> {
    if !(1..=CHALLENGES_PER_LEVEL).contains(&n) {
        return Err(GameError::ChallengeNumber(n));
    }
    Ok(30.0 / (1.0 + (n as f64 - 1.0) / 5.0))
}

/// Length of the word, doubled when it keeps the 2X letter.
pub fn word_score(word: &str, covers_bonus: bool) -> u32 {
    let base = word.len() as u32;
    if covers_bonus {
        2 * base
    } else {
        base
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "camelCase")]
pub enum ChallengeStatus {
    InProgress,
    Solved { word: String, score: u32 },
    TimedOut,
}

/// One challenge being played. Time is driven externally through
/// [`ChallengeState::tick`]; the challenge expires once elapsed time reaches
/// the budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ChallengeState {
    number: usize,
    original: String,
    eliminated: BTreeSet<usize>,
    bonus: Option<usize>,
    budget_secs: f64,
    elapsed_ms: u64,
    status: ChallengeStatus,
}

impl ChallengeState {
    pub fn new(number: usize, word: &str, bonus: Option<usize>) -> Result<Self, GameError> {
        Ok(ChallengeState {
            budget_secs: challenge_time(number)?,
            number,
            original: word.to_string(),
            eliminated: BTreeSet::new(),
            bonus,
            elapsed_ms: 0,
            status: ChallengeStatus::InProgress,
        })
    }

    pub fn number(&self) -> usize {
        self.number
    }

    pub fn original(&self) -> &str {
        &self.original
    }

    pub fn bonus_position(&self) -> Option<usize> {
        self.bonus
    }

    pub fn eliminated(&self) -> &BTreeSet<usize> {
        &self.eliminated
    }

    pub fn budget_secs(&self) -> f64 {
        self.budget_secs
    }

    /// First whole millisecond at which the challenge has expired.
    pub fn budget_ms(&self) -> u64 {
        (self.budget_secs * 1000.0).ceil() as u64
    }

    pub fn elapsed_ms(&self) -> u64 {
        self.elapsed_ms
    }

    pub fn status(&self) -> &ChallengeStatus {
        &self.status
    }

    pub fn is_in_progress(&self) -> bool {
        self.status == ChallengeStatus::InProgress
    }

    /// Remaining letters in their original order.
    pub fn letters(&self) -> String {
        self.original
            .char_indices()
            .filter(|(i, _)| !self.eliminated.contains(i))
            .map(|(_, c)| c)
            .collect()
    }

    /// Original indices of the letters still on the board.
    pub fn remaining_positions(&self) -> Vec<usize> {
        (0..self.original.len())
            .filter(|i| !self.eliminated.contains(i))
            .collect()
    }

    pub fn bonus_kept(&self) -> bool {
        self.bonus.is_some_and(|b| !self.eliminated.contains(&b))
    }

    /// Whether the remaining time has run out, boundary included.
    pub fn expired_at(&self, elapsed_ms: u64) -> bool {
        elapsed_ms as f64 >= self.budget_secs * 1000.0
    }

    /// Advances the clock; the challenge times out when elapsed time
    /// reaches the budget.
    pub fn tick(&mut self, ms: u64) -> &ChallengeStatus {
        if self.is_in_progress() {
            self.elapsed_ms = self.elapsed_ms.saturating_add(ms);
            if self.expired_at(self.elapsed_ms) {
                self.status = ChallengeStatus::TimedOut;
            }
        }
        &self.status
    }

    /// Removes the letter at `index` (an index into the original word). If
    /// what is left is a dictionary word the challenge is solved on the spot.
    /// A rejected elimination leaves the state untouched.
    pub fn eliminate(
        &mut self,
        index: usize,
        dict: &Dictionary,
    ) -> Result<&ChallengeStatus, GameError> {
        if !self.is_in_progress() {
            return Err(GameError::NotInProgress);
        }
        if index >= self.original.len() {
            return Err(GameError::IndexOutOfRange {
                index,
                len: self.original.len(),
            });
        }
        if self.eliminated.contains(&index) {
            return Err(GameError::AlreadyEliminated(index));
        }
        self.eliminated.insert(index);
        let letters = self.letters();
        if dict.is_solution(&letters) {
            let score = word_score(&letters, self.bonus_kept());
            self.status = ChallengeStatus::Solved {
                word: letters,
                score,
            };
        }
        Ok(&self.status)
    }
}
