//! Which embedded words an elimination sequence can actually end on.
//!
//! Because the game auto-solves as soon as the remaining letters spell a
//! word, some embedded words can never be selected: every path to them
//! passes through another word first.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::rules::word_score;
use super::GameError;
use crate::corpus::{Dictionary, DEFAULT_EMBED_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReachabilityReport {
    pub reachable: Vec<String>,
    pub unreachable_embedded: Vec<String>,
}

/// An absorbing state: a set of kept positions spelling a word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Terminal {
    /// Bit `i` set when original position `i` is kept.
    pub mask: u32,
    pub word: String,
}

impl Terminal {
    pub fn keeps(&self, position: usize) -> bool {
        self.mask & (1 << position) != 0
    }

    pub fn score(&self, bonus: Option<usize>) -> u32 {
        word_score(&self.word, bonus.is_some_and(|b| self.keeps(b)))
    }
}

const UNSEEN: u32 = u32::MAX;

/// Breadth-first map of the states reachable by single-letter removals.
#[derive(Debug, Clone)]
pub struct ReachGraph {
    word: String,
    parent: Vec<u32>,
    terminals: Vec<Terminal>,
}

fn spell(word: &[u8], mask: u32) -> String {
    word.iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, &b)| b as char)
        .collect()
}

impl ReachGraph {
    pub fn explore(word: &str, dict: &Dictionary) -> Result<Self, GameError> {
        let n = word.len();
        if n > DEFAULT_EMBED_CAP {
            return Err(GameError::TooLong {
                len: n,
                cap: DEFAULT_EMBED_CAP,
            });
        }
        let bytes = word.as_bytes();
        let min_len = dict.min_word_length() as u32;
        let full = ((1u64 << n) - 1) as u32;
        let mut parent = vec![UNSEEN; 1 << n];
        let mut terminals = Vec::new();
        let mut queue = VecDeque::from([full]);
        parent[full as usize] = full;
        while let Some(state) = queue.pop_front() {
            // removing from here can only leave strings too short to solve
            if state.count_ones() <= min_len {
                continue;
            }
            let mut bits = state;
            while bits != 0 {
                let i = bits.trailing_zeros();
                bits &= bits - 1;
                let next = state & !(1 << i);
                if parent[next as usize] != UNSEEN {
                    continue;
                }
                parent[next as usize] = state;
                let letters = spell(bytes, next);
                if dict.is_solution(&letters) {
                    terminals.push(Terminal {
                        mask: next,
                        word: letters,
                    });
                } else {
                    queue.push_back(next);
                }
            }
        }
        Ok(ReachGraph {
            word: word.to_string(),
            parent,
            terminals,
        })
    }

    pub fn word(&self) -> &str {
        &self.word
    }

    /// Absorbing states in discovery order.
    pub fn terminals(&self) -> &[Terminal] {
        &self.terminals
    }

    pub fn reachable_words(&self) -> BTreeSet<String> {
        self.terminals.iter().map(|t| t.word.clone()).collect()
    }

    /// Original indices to eliminate, in order, to arrive at `mask`.
    pub fn path_to(&self, mask: u32) -> Option<Vec<usize>> {
        let full = ((1u64 << self.word.len()) - 1) as u32;
        let mut path = Vec::new();
        let mut at = mask;
        while at != full {
            let up = *self.parent.get(at as usize)?;
            if up == UNSEEN {
                return None;
            }
            path.push((up ^ at).trailing_zeros() as usize);
            at = up;
        }
        path.reverse();
        Some(path)
    }

    /// Best score any elimination path can earn.
    pub fn max_score(&self, bonus: Option<usize>) -> u32 {
        self.terminals
            .iter()
            .map(|t| t.score(bonus))
            .max()
            .unwrap_or(0)
    }

    pub fn report(&self, dict: &Dictionary) -> Result<ReachabilityReport, GameError> {
        let reachable = self.reachable_words();
        let embedded = dict
            .embedded_words(&self.word)
            .map_err(|_| GameError::TooLong {
                len: self.word.len(),
                cap: DEFAULT_EMBED_CAP,
            })?;
        Ok(ReachabilityReport {
            unreachable_embedded: embedded
                .into_iter()
                .filter(|w| !reachable.contains(w))
                .collect(),
            reachable: reachable.into_iter().collect(),
        })
    }
}

pub fn reachable_words(
    challenge: &str,
    dict: &Dictionary,
) -> Result<ReachabilityReport, GameError> {
    ReachGraph::explore(challenge, dict)?.report(dict)
}
