use serde::{Deserialize, Serialize};

use super::trace::{EventKind, PlaytraceEvent};
use super::AnalyticsError;
use crate::corpus::Dictionary;
use crate::game::{LevelSession, SessionEvent, SessionOutcome};
use crate::generation::GeneratedLevel;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SolveRecord {
    pub challenge_index: usize,
    pub word: String,
    pub score: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReplaySummary {
    pub session_id: String,
    pub player_id: String,
    pub level_index: usize,
    pub total_score: u32,
    /// `None` when the trace stops before the level ended.
    pub outcome: Option<SessionOutcome>,
    pub solves: Vec<SolveRecord>,
}

/// Re-runs one session's events through the rules engine and checks that
/// every recorded solve and timeout is what the engine itself produces.
pub fn replay_session(
    events: &[&PlaytraceEvent],
    level: &GeneratedLevel,
    dict: &Dictionary,
) -> Result<ReplaySummary, AnalyticsError> {
    let Some(first) = events.first() else {
        return Err(AnalyticsError::NoData("empty session".into()));
    };
    let fail = |reason: String| AnalyticsError::Replay {
        session: first.session_id.clone(),
        reason,
    };
    let mut session = LevelSession::from_level(level).map_err(|e| fail(e.to_string()))?;
    let mut pending: Option<SolveRecord> = None;
    let mut solves = Vec::new();
    let mut last_ts = first.timestamp_ms;

    for e in events {
        if e.level_index != level.index {
            return Err(fail(format!(
                "event for level {} replayed against level {}",
                e.level_index, level.index
            )));
        }
        let c = e.challenge_index;
        if !matches!(e.kind, EventKind::Solve { .. }) {
            if let Some(p) = &pending {
                return Err(fail(format!(
                    "challenge {} solved as {} but no solve was recorded",
                    p.challenge_index, p.word
                )));
            }
            let current = session.current().map(|s| s.number());
            if current != Some(c) {
                return Err(fail(format!(
                    "event for challenge {c} while the engine is at {current:?}"
                )));
            }
        }
        match &e.kind {
            EventKind::Start => {
                last_ts = e.timestamp_ms;
            }
            EventKind::Eliminate { original_index } => {
                let step = session
                    .advance(
                        SessionEvent::Tick(e.timestamp_ms.saturating_sub(last_ts)),
                        dict,
                    )
                    .map_err(|err| fail(err.to_string()))?;
                last_ts = e.timestamp_ms;
                if step.timed_out.is_some() {
                    return Err(fail(format!(
                        "elimination in challenge {c} after its time ran out"
                    )));
                }
                let step = session
                    .advance(SessionEvent::Eliminate(*original_index), dict)
                    .map_err(|err| fail(format!("challenge {c}: {err}")))?;
                if let Some((k, word, score)) = step.solved {
                    pending = Some(SolveRecord {
                        challenge_index: k,
                        word,
                        score,
                    });
                }
            }
            EventKind::Solve { word, score } => {
                let recorded = SolveRecord {
                    challenge_index: c,
                    word: word.clone(),
                    score: *score,
                };
                match pending.take() {
                    Some(p) if p == recorded => solves.push(p),
                    Some(p) => {
                        return Err(fail(format!(
                            "challenge {c}: recorded solve {word} ({score}) but the engine reached {} ({})",
                            p.word, p.score
                        )))
                    }
                    None => {
                        return Err(fail(format!(
                            "challenge {c}: solve {word} is not reachable from the recorded eliminations"
                        )))
                    }
                }
            }
            EventKind::Timeout => {
                let step = session
                    .advance(
                        SessionEvent::Tick(e.timestamp_ms.saturating_sub(last_ts)),
                        dict,
                    )
                    .map_err(|err| fail(err.to_string()))?;
                last_ts = e.timestamp_ms;
                if step.timed_out != Some(c) {
                    return Err(fail(format!(
                        "challenge {c}: timeout recorded before its budget elapsed"
                    )));
                }
            }
        }
    }
    if let Some(p) = pending {
        return Err(fail(format!(
            "challenge {} solved as {} but no solve was recorded",
            p.challenge_index, p.word
        )));
    }
    Ok(ReplaySummary {
        session_id: first.session_id.clone(),
        player_id: first.player_id.clone(),
        level_index: level.index,
        total_score: session.total_score(),
        outcome: session.outcome(),
        solves,
    })
}
