use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::AnalyticsError;
use crate::corpus::Dictionary;
use crate::game::ReachGraph;
use crate::generation::GeneratedLevel;

/// Highest total a level allows: per challenge, the best reachable word
/// scored with the 2X letter when that word can keep it.
pub fn max_level_score(level: &GeneratedLevel, dict: &Dictionary) -> Result<u32, AnalyticsError> {
    level
        .challenges
        .iter()
        .map(|c| {
            ReachGraph::explore(&c.challenge_word, dict)
                .map(|g| g.max_score(c.bonus_position))
                .map_err(|e| AnalyticsError::Integrity(e.to_string()))
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LevelOutcome {
    pub level_index: usize,
    pub player_id: String,
    pub session_id: String,
    pub normalized_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CurvePoint {
    pub level_index: usize,
    pub mean_normalized_score: f64,
    pub sessions: usize,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DifficultyCurve {
    pub points: Vec<CurvePoint>,
    /// Requested levels that had no outcomes.
    pub missing_levels: Vec<usize>,
}

impl DifficultyCurve {
    pub fn mean(&self, level_index: usize) -> Option<f64> {
        self.points
            .iter()
            .find(|p| p.level_index == level_index)
            .map(|p| p.mean_normalized_score)
    }
}

/// Mean normalized score per level, ordered by level. Levels in `expected`
/// without any outcome are listed as missing.
pub fn difficulty_curve(
    outcomes: &[LevelOutcome],
    expected: impl IntoIterator<Item = usize>,
) -> DifficultyCurve {
    let mut by_level: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for o in outcomes {
        by_level
            .entry(o.level_index)
            .or_default()
            .push(o.normalized_score);
    }
    let missing_levels = expected
        .into_iter()
        .filter(|l| !by_level.contains_key(l))
        .collect();
    let points = by_level
        .into_iter()
        .map(|(level_index, scores)| CurvePoint {
            level_index,
            mean_normalized_score: scores.iter().sum::<f64>() / scores.len() as f64,
            sessions: scores.len(),
        })
        .collect();
    DifficultyCurve {
        points,
        missing_levels,
    }
}
