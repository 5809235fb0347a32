use serde::{Deserialize, Serialize};

use super::rules::{ChallengeState, ChallengeStatus};
use super::GameError;
use crate::corpus::Dictionary;
use crate::generation::GeneratedLevel;

/// What a player sees of one challenge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ChallengeSpec {
    pub word: String,
    pub bonus_position: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum SessionOutcome {
    Completed,
    /// The timer ran out on this (1-based) challenge.
    Expired(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SessionEvent {
    Eliminate(usize),
    Tick(u64),
}

/// Effect of one event on the session.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Step {
    /// Challenge number and (word, score) when this event solved it.
    pub solved: Option<(usize, String, u32)>,
    /// Challenge number that ran out of time.
    pub timed_out: Option<usize>,
}

/// A level played challenge by challenge. Solving challenge `k < 10`
/// starts `k + 1` with a fresh budget; a timeout or solving the tenth ends
/// the session, and either way the next level unlocks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LevelSession {
    level_index: usize,
    specs: Vec<ChallengeSpec>,
    finished: Vec<ChallengeState>,
    current: Option<ChallengeState>,
    total_score: u32,
    outcome: Option<SessionOutcome>,
}

impl LevelSession {
    pub fn new(level_index: usize, specs: Vec<ChallengeSpec>) -> Result<Self, GameError> {
        let current = match specs.first() {
            Some(first) => ChallengeState::new(1, &first.word, first.bonus_position)?,
            None => return Err(GameError::EmptyLevel),
        };
        Ok(LevelSession {
            level_index,
            specs,
            finished: Vec::new(),
            current: Some(current),
            total_score: 0,
            outcome: None,
        })
    }

    pub fn from_level(level: &GeneratedLevel) -> Result<Self, GameError> {
        let specs = level
            .challenges
            .iter()
            .map(|c| ChallengeSpec {
                word: c.challenge_word.clone(),
                bonus_position: c.bonus_position,
            })
            .collect();
        Self::new(level.index, specs)
    }

    pub fn level_index(&self) -> usize {
        self.level_index
    }

    pub fn total_score(&self) -> u32 {
        self.total_score
    }

    pub fn outcome(&self) -> Option<SessionOutcome> {
        self.outcome
    }

    pub fn is_over(&self) -> bool {
        self.outcome.is_some()
    }

    /// Level unlocked by finishing this session, whatever the outcome.
    pub fn unlocked_level(&self) -> Option<usize> {
        self.outcome.map(|_| self.level_index + 1)
    }

    pub fn current(&self) -> Option<&ChallengeState> {
        self.current.as_ref()
    }

    pub fn finished(&self) -> &[ChallengeState] {
        &self.finished
    }

    pub fn advance(&mut self, event: SessionEvent, dict: &Dictionary) -> Result<Step, GameError> {
        let Some(current) = self.current.as_mut() else {
            return Err(GameError::SessionOver);
        };
        let mut step = Step::default();
        match event {
            SessionEvent::Tick(ms) => {
                if *current.tick(ms) == ChallengeStatus::TimedOut {
                    step.timed_out = Some(current.number());
                }
            }
            SessionEvent::Eliminate(index) => {
                let number = current.number();
                if let ChallengeStatus::Solved { word, score } = current.eliminate(index, dict)? {
                    step.solved = Some((number, word.clone(), *score));
                }
            }
        }
        if let Some((_, _, score)) = &step.solved {
            self.total_score += score;
        }
        if step.solved.is_some() || step.timed_out.is_some() {
            self.finish_current()?;
        }
        Ok(step)
    }

    fn finish_current(&mut self) -> Result<(), GameError> {
        let done = self.current.take().expect("checked by caller");
        let number = done.number();
        let timed_out = *done.status() == ChallengeStatus::TimedOut;
        self.finished.push(done);
        if timed_out {
            self.outcome = Some(SessionOutcome::Expired(number));
        } else if number == self.specs.len() {
            self.outcome = Some(SessionOutcome::Completed);
        } else {
            let spec = &self.specs[number];
            self.current = Some(ChallengeState::new(
                number + 1,
                &spec.word,
                spec.bonus_position,
            )?);
        }
        Ok(())
    }
}
