//! Newline-delimited JSON playtrace log.
//!
//! One record per line:
//! `{"sessionId", "playerId", "levelIndex", "challengeIndex", "kind",
//! "originalIndex"?, "word"?, "score"?, "timestampMs"}` with `kind` one of
//! `start`, `eliminate`, `solve`, `timeout`.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::AnalyticsError;
use crate::generation::CHALLENGES_PER_LEVEL;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EventKind {
    Start,
    Eliminate { original_index: usize },
    Solve { word: String, score: u32 },
    Timeout,
}

impl EventKind {
    pub fn is_terminal(&self) -> bool {
        matches!(self, EventKind::Solve { .. } | EventKind::Timeout)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "TraceRecord", try_from = "TraceRecord")]
pub struct PlaytraceEvent {
    pub session_id: String,
    pub player_id: String,
    pub level_index: usize,
    pub challenge_index: usize,
    pub kind: EventKind,
    pub timestamp_ms: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecordKind {
    Start,
    Eliminate,
    Solve,
    Timeout,
}

/// Wire form of [`PlaytraceEvent`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct TraceRecord {
    pub session_id: String,
    pub player_id: String,
    pub level_index: usize,
    pub challenge_index: usize,
    pub kind: RecordKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub original_index: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub word: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub score: Option<u32>,
    pub timestamp_ms: u64,
}

impl From<PlaytraceEvent> for TraceRecord {
    fn from(e: PlaytraceEvent) -> Self {
        let (kind, original_index, word, score) = match e.kind {
            EventKind::Start => (RecordKind::Start, None, None, None),
            EventKind::Eliminate { original_index } => {
                (RecordKind::Eliminate, Some(original_index), None, None)
            }
            EventKind::Solve { word, score } => (RecordKind::Solve, None, Some(word), Some(score)),
            EventKind::Timeout => (RecordKind::Timeout, None, None, None),
        };
        TraceRecord {
            session_id: e.session_id,
            player_id: e.player_id,
            level_index: e.level_index,
            challenge_index: e.challenge_index,
            kind,
            original_index,
            word,
            score,
            timestamp_ms: e.timestamp_ms,
        }
    }
}

impl TryFrom<TraceRecord> for PlaytraceEvent {
    type Error = String;

    fn try_from(r: TraceRecord) -> Result<Self, String> {
        let kind = match r.kind {
            RecordKind::Start => EventKind::Start,
            RecordKind::Eliminate => EventKind::Eliminate {
                original_index: r.original_index.ok_or("eliminate without originalIndex")?,
            },
            RecordKind::Solve => EventKind::Solve {
                word: r.word.ok_or("solve without word")?,
                score: r.score.ok_or("solve without score")?,
            },
            RecordKind::Timeout => EventKind::Timeout,
        };
        if !(1..=CHALLENGES_PER_LEVEL).contains(&r.challenge_index) {
            return Err(format!(
                "challengeIndex {} outside 1..=10",
                r.challenge_index
            ));
        }
        if r.level_index == 0 {
            return Err("levelIndex must be positive".into());
        }
        Ok(PlaytraceEvent {
            session_id: r.session_id,
            player_id: r.player_id,
            level_index: r.level_index,
            challenge_index: r.challenge_index,
            kind,
            timestamp_ms: r.timestamp_ms,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LineError {
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SessionRejection {
    pub session_id: String,
    pub reason: String,
}

/// Parsed trace log: accepted events plus diagnostics for everything that
/// was dropped.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TraceLog {
    pub events: Vec<PlaytraceEvent>,
    pub malformed: Vec<LineError>,
    pub rejected: Vec<SessionRejection>,
}

impl TraceLog {
    /// Events grouped by session id, each in log order.
    pub fn sessions(&self) -> BTreeMap<&str, Vec<&PlaytraceEvent>> {
        group_sessions(&self.events)
    }
}

pub fn group_sessions(events: &[PlaytraceEvent]) -> BTreeMap<&str, Vec<&PlaytraceEvent>> {
    let mut out: BTreeMap<&str, Vec<&PlaytraceEvent>> = BTreeMap::new();
    for e in events {
        out.entry(e.session_id.as_str()).or_default().push(e);
    }
    out
}

/// Structural checks on one session's events, in log order.
pub fn check_session(events: &[&PlaytraceEvent]) -> Result<(), String> {
    let Some(first) = events.first() else {
        return Ok(());
    };
    let mut last_ts = first.timestamp_ms;
    let mut started = BTreeSet::new();
    let mut ended = BTreeSet::new();
    for e in events {
        if e.level_index != first.level_index || e.player_id != first.player_id {
            return Err("session mixes levels or players".into());
        }
        if e.timestamp_ms < last_ts {
            return Err(format!(
                "timestamp {} precedes {} in challenge {}",
                e.timestamp_ms, last_ts, e.challenge_index
            ));
        }
        last_ts = e.timestamp_ms;
        let c = e.challenge_index;
        match &e.kind {
            EventKind::Start => {
                if !started.insert(c) {
                    return Err(format!("challenge {c} started twice"));
                }
            }
            kind => {
                if !started.contains(&c) {
                    return Err(format!("challenge {c} has events before its start"));
                }
                if ended.contains(&c) {
                    return Err(format!("challenge {c} has events after it ended"));
                }
                if kind.is_terminal() {
                    ended.insert(c);
                }
            }
        }
    }
    Ok(())
}

/// Reads a trace log. Unparseable lines are reported and skipped; sessions
/// that fail [`check_session`] are rejected as a whole.
pub fn parse_traces<R: BufRead>(reader: R) -> Result<TraceLog, AnalyticsError> {
    let mut parsed = Vec::new();
    let mut malformed = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| AnalyticsError::Io(e.to_string()))?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<PlaytraceEvent>(&line) {
            Ok(e) => parsed.push(e),
            Err(e) => malformed.push(LineError {
                line: i + 1,
                reason: e.to_string(),
            }),
        }
    }
    let (events, rejected) = validate_events(parsed);
    Ok(TraceLog {
        events,
        malformed,
        rejected,
    })
}

/// Splits events into those from structurally valid sessions and
/// rejections for the rest. Order of accepted events is preserved.
pub fn validate_events(
    events: Vec<PlaytraceEvent>,
) -> (Vec<PlaytraceEvent>, Vec<SessionRejection>) {
    let mut bad: BTreeMap<String, String> = BTreeMap::new();
    for (id, session) in group_sessions(&events) {
        if let Err(reason) = check_session(&session) {
            bad.insert(id.to_string(), reason);
        }
    }
    let kept = events
        .into_iter()
        .filter(|e| !bad.contains_key(&e.session_id))
        .collect();
    let rejected = bad
        .into_iter()
        .map(|(session_id, reason)| SessionRejection { session_id, reason })
        .collect();
    (kept, rejected)
}

pub fn write_traces<W: Write>(events: &[PlaytraceEvent], mut writer: W) -> std::io::Result<()> {
    for e in events {
        serde_json::to_writer(&mut writer, e)?;
        writer.write_all(b"\n")?;
    }
    Ok(())
}
