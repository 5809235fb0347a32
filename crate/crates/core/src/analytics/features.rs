use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::trace::{EventKind, PlaytraceEvent};
use super::AnalyticsError;
use crate::corpus::Dictionary;
use crate::game::ReachGraph;
use crate::generation::{GeneratedChallenge, GeneratedLevel};

/// Word-choice features of one word inside one challenge.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WordFeatures {
    pub word_length: usize,
    pub max_sequence: usize,
    #[serde(rename = "has2X")]
    pub has_2x: bool,
    pub split_distance: usize,
    pub first_occurrence: usize,
    pub dirty_word: bool,
    /// Canonical embedding the features were read from.
    pub positions: Vec<usize>,
}

fn embeddings(word: &[u8], challenge: &[u8]) -> Vec<Vec<usize>> {
    fn go(
        word: &[u8],
        challenge: &[u8],
        from: usize,
        acc: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let Some((&first, rest)) = word.split_first() else {
            out.push(acc.clone());
            return;
        };
        for i in from..challenge.len() {
            if challenge[i] == first {
                acc.push(i);
                go(rest, challenge, i + 1, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(word, challenge, 0, &mut Vec::new(), &mut out);
    out
}

fn split_distance(positions: &[usize]) -> usize {
    match (positions.first(), positions.last()) {
        (Some(a), Some(b)) => b - a + 1 - positions.len(),
        _ => 0,
    }
}

fn longest_run(positions: &[usize]) -> usize {
    let mut best = usize::from(!positions.is_empty());
    let mut run = best;
    for w in positions.windows(2) {
        run = if w[1] == w[0] + 1 { run + 1 } else { 1 };
        best = best.max(run);
    }
    best
}

/// Embedding with the fewest interleaved foreign letters, then the
/// earliest start, then the lexicographically smallest positions.
pub fn canonical_embedding(word: &str, challenge: &str) -> Option<Vec<usize>> {
    embeddings(word.as_bytes(), challenge.as_bytes())
        .into_iter()
        .min_by(|a, b| (split_distance(a), a[0], a).cmp(&(split_distance(b), b[0], b)))
}

pub fn extract_word_features(
    challenge: &GeneratedChallenge,
    word: &str,
    dict: &Dictionary,
) -> Result<WordFeatures, AnalyticsError> {
    let positions = canonical_embedding(word, &challenge.challenge_word)
        .filter(|p| !p.is_empty())
        .ok_or_else(|| {
            AnalyticsError::Integrity(format!(
                "{word} is not embedded in {}",
                challenge.challenge_word
            ))
        })?;
    Ok(WordFeatures {
        word_length: word.len(),
        max_sequence: longest_run(&positions),
        has_2x: challenge
            .bonus_position
            .is_some_and(|b| positions.contains(&b)),
        split_distance: split_distance(&positions),
        first_occurrence: positions[0],
        dirty_word: dict.is_profane(word),
        positions,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct WordSelectionRecord {
    pub level_index: usize,
    pub challenge_index: usize,
    pub challenge_word: String,
    pub word: String,
    pub selection_rate: f64,
    pub selections: usize,
    pub solved_attempts: usize,
    #[serde(flatten)]
    pub features: WordFeatures,
}

impl WordSelectionRecord {
    pub fn feature_row(&self) -> Vec<f64> {
        let f = &self.features;
        vec![
            f.word_length as f64,
            f.max_sequence as f64,
            f64::from(u8::from(f.has_2x)),
            f.split_distance as f64,
            f.first_occurrence as f64,
            f64::from(u8::from(f.dirty_word)),
        ]
    }
}

/// Per challenge and reachable word: the share of solved attempts that
/// ended on that word. Challenges nobody solved are left out.
pub fn selection_rates(
    events: &[PlaytraceEvent],
    level: &GeneratedLevel,
    dict: &Dictionary,
) -> Result<Vec<WordSelectionRecord>, AnalyticsError> {
    let mut picks: BTreeMap<usize, BTreeMap<&str, usize>> = BTreeMap::new();
    for e in events.iter().filter(|e| e.level_index == level.index) {
        if let EventKind::Solve { word, .. } = &e.kind {
            *picks
                .entry(e.challenge_index)
                .or_default()
                .entry(word.as_str())
                .or_default() += 1;
        }
    }
    let mut out = Vec::new();
    for (challenge_index, counts) in picks {
        let challenge = level.challenges.get(challenge_index - 1).ok_or_else(|| {
            AnalyticsError::Integrity(format!(
                "level {} has no challenge {challenge_index}",
                level.index
            ))
        })?;
        let graph = ReachGraph::explore(&challenge.challenge_word, dict)
            .map_err(|e| AnalyticsError::Integrity(e.to_string()))?;
        let reachable = graph.reachable_words();
        if let Some(bad) = counts.keys().find(|w| !reachable.contains(**w)) {
            return Err(AnalyticsError::Integrity(format!(
                "level {} challenge {challenge_index}: {bad} cannot be reached from {}",
                level.index, challenge.challenge_word
            )));
        }
        let total: usize = counts.values().sum();
        for word in &reachable {
            let n = counts.get(word.as_str()).copied().unwrap_or(0);
            out.push(WordSelectionRecord {
                level_index: level.index,
                challenge_index,
                challenge_word: challenge.challenge_word.clone(),
                word: word.clone(),
                selection_rate: n as f64 / total as f64,
                selections: n,
                solved_attempts: total,
                features: extract_word_features(challenge, word, dict)?,
            });
        }
    }
    Ok(out)
}
