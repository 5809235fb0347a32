use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::curve::{difficulty_curve, max_level_score, DifficultyCurve, LevelOutcome};
use super::features::{selection_rates, WordSelectionRecord};
use super::models::{level_score_model, word_choice_model};
use super::ols::RegressionModel;
use super::replay::replay_session;
use super::trace::{group_sessions, PlaytraceEvent, SessionRejection, TraceLog};
use super::AnalyticsError;
use crate::corpus::Dictionary;
use crate::generation::GeneratedLevel;

/// A fitted model, or why it could not be fitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ModelReport {
    pub model: Option<RegressionModel>,
    pub r_squared_percent: Option<f64>,
    pub error: Option<String>,
}

impl From<Result<RegressionModel, AnalyticsError>> for ModelReport {
    fn from(r: Result<RegressionModel, AnalyticsError>) -> Self {
        match r {
            Ok(m) => ModelReport {
                r_squared_percent: Some(m.r_squared_percent()),
                model: Some(m),
                error: None,
            },
            Err(e) => ModelReport {
                model: None,
                r_squared_percent: None,
                error: Some(e.to_string()),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AnalysisReport {
    pub sessions_analyzed: usize,
    pub sessions_rejected: Vec<SessionRejection>,
    pub malformed_lines: usize,
    pub difficulty_curve: DifficultyCurve,
    pub level_score_model: ModelReport,
    pub word_choice_model: ModelReport,
    pub word_features: Vec<WordSelectionRecord>,
}

/// Replays every session against its level, then builds the difficulty
/// curve, both regressions and the word feature table. Sessions that fail
/// replay are reported and left out. Only sessions that reached an end
/// (completed or expired) contribute level outcomes.
pub fn analyze(
    log: &TraceLog,
    levels: &[GeneratedLevel],
    dict: &Dictionary,
) -> Result<AnalysisReport, AnalyticsError> {
    if log.events.is_empty() {
        return Err(AnalyticsError::NoData(
            "trace log contains no usable events".into(),
        ));
    }
    let by_index: BTreeMap<usize, &GeneratedLevel> = levels.iter().map(|l| (l.index, l)).collect();
    let mut max_scores = BTreeMap::new();
    for level in levels {
        max_scores.insert(level.index, max_level_score(level, dict)?);
    }

    let mut rejected = log.rejected.clone();
    let mut outcomes = Vec::new();
    let mut accepted: BTreeMap<usize, Vec<PlaytraceEvent>> = BTreeMap::new();
    let mut analyzed = 0;
    for (id, events) in group_sessions(&log.events) {
        let level_index = events[0].level_index;
        let Some(level) = by_index.get(&level_index) else {
            rejected.push(SessionRejection {
                session_id: id.to_string(),
                reason: format!("unknown level {level_index}"),
            });
            continue;
        };
        match replay_session(&events, level, dict) {
            Ok(summary) => {
                analyzed += 1;
                if summary.outcome.is_some() {
                    let max = max_scores[&level_index];
                    outcomes.push(LevelOutcome {
                        level_index,
                        player_id: summary.player_id,
                        session_id: summary.session_id,
                        normalized_score: if max > 0 {
                            summary.total_score as f64 / max as f64
                        } else {
                            0.0
                        },
                    });
                }
                accepted
                    .entry(level_index)
                    .or_default()
                    .extend(events.into_iter().cloned());
            }
            Err(e) => rejected.push(SessionRejection {
                session_id: id.to_string(),
                reason: e.to_string(),
            }),
        }
    }
    if analyzed == 0 {
        return Err(AnalyticsError::NoData(
            "no session replayed successfully".into(),
        ));
    }

    let mut word_features = Vec::new();
    for (index, events) in &accepted {
        word_features.extend(selection_rates(events, by_index[index], dict)?);
    }
    let schedule: Vec<_> = {
        let mut ps = vec![None; levels.iter().map(|l| l.index).max().unwrap_or(0)];
        for l in levels {
            ps[l.index - 1] = Some(l.params.clone());
        }
        ps
    };
    let level_model = if schedule.iter().all(Option::is_some) {
        let schedule: Vec<_> = schedule.into_iter().flatten().collect();
        level_score_model(&outcomes, &schedule)
    } else {
        Err(AnalyticsError::Integrity(
            "level files do not cover a contiguous range".into(),
        ))
    };

    Ok(AnalysisReport {
        sessions_analyzed: analyzed,
        sessions_rejected: rejected,
        malformed_lines: log.malformed.len(),
        difficulty_curve: difficulty_curve(&outcomes, by_index.keys().copied()),
        level_score_model: level_model.into(),
        word_choice_model: word_choice_model(&word_features).into(),
        word_features,
    })
}

fn describe_model(out: &mut String, title: &str, m: &ModelReport) {
    let _ = writeln!(out, "{title}");
    match (&m.model, &m.error) {
        (Some(model), _) => {
            let _ = writeln!(
                out,
                "  R^2 = {:.4} ({:.2}%), n = {}",
                model.r_squared,
                model.r_squared_percent(),
                model.observations
            );
            let _ = writeln!(
                out,
                "  {:<18}{:>12}{:>12}",
                "(intercept)",
                format!("{:.4}", model.coefficients[0]),
                format!("{:.4}", model.standard_errors[0])
            );
            for (i, name) in model.feature_names.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "  {:<18}{:>12}{:>12}",
                    name,
                    format!("{:.4}", model.coefficients[i + 1]),
                    format!("{:.4}", model.standard_errors[i + 1])
                );
            }
        }
        (None, Some(e)) => {
            let _ = writeln!(out, "  not fitted: {e}");
        }
        (None, None) => {}
    }
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "sessions analyzed: {}, rejected: {}, malformed lines: {}",
            self.sessions_analyzed,
            self.sessions_rejected.len(),
            self.malformed_lines
        );
        let _ = writeln!(out, "\ndifficulty curve (mean normalized score)");
        for p in &self.difficulty_curve.points {
            let bar = "#".repeat((p.mean_normalized_score * 40.0).round() as usize);
            let _ = writeln!(
                out,
                "  level {:>2}  {:.3}  n={:<5} {bar}",
                p.level_index, p.mean_normalized_score, p.sessions
            );
        }
        if !self.difficulty_curve.missing_levels.is_empty() {
            let _ = writeln!(
                out,
                "  no outcomes for levels {:?}",
                self.difficulty_curve.missing_levels
            );
        }
        out.push('\n');
        describe_model(
            &mut out,
            "normalizedScore ~ minCorpusFreq + maxSeq + targetLength + num2X + minSourceWord",
            &self.level_score_model,
        );
        out.push('\n');
        describe_model(
            &mut out,
            "selectionRate ~ wordLength + maxSequence + has2X + splitDistance + firstOccurrence + dirtyWord",
            &self.word_choice_model,
        );
        let _ = writeln!(out, "\nword records: {}", self.word_features.len());
        out
    }
}
