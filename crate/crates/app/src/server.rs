//! JSON API for web clients. Level data is read-only after startup; trace
//! uploads are validated by full replay and appended under a lock.

use std::fs::OpenOptions;
use std::io::{BufReader, Write};
use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use elimination_core::analytics::{
    analyze, check_session, group_sessions, parse_traces, replay_session, write_traces,
    AnalysisReport, PlaytraceEvent,
};
use elimination_core::game::{challenge_time, word_score};
use elimination_core::{is_subsequence, Dictionary, GeneratedLevel};
use serde::{Deserialize, Serialize};
use serde_json::json;
use tokio::sync::Mutex;

pub struct AppState {
    pub levels: Vec<GeneratedLevel>,
    pub dict: Dictionary,
    pub traces_path: PathBuf,
    traces_lock: Mutex<()>,
}

impl AppState {
    pub fn new(levels: Vec<GeneratedLevel>, dict: Dictionary, traces_path: PathBuf) -> Self {
        AppState {
            levels,
            dict,
            traces_path,
            traces_lock: Mutex::new(()),
        }
    }

    fn level(&self, index: usize) -> Result<&GeneratedLevel, ApiError> {
        self.levels
            .iter()
            .find(|l| l.index == index)
            .ok_or_else(|| ApiError::not_found(format!("no level {index}")))
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn bad_request(message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            message: message.into(),
        }
    }

    fn not_found(message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::NOT_FOUND,
            message: message.into(),
        }
    }

    fn internal(message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            message: message.into(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message }))).into_response()
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LevelSummary {
    pub index: usize,
    pub target_length: usize,
    pub challenges: usize,
    pub bonus_count: usize,
}

/// What a client may see of a challenge: no source words, no solutions.
#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ChallengeView {
    pub index: usize,
    pub word: String,
    pub bonus_position: Option<usize>,
    pub budget_secs: f64,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LevelView {
    pub index: usize,
    pub challenges: Vec<ChallengeView>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckRequest {
    pub level_index: usize,
    pub challenge_index: usize,
    pub remaining: String,
    /// Original indices removed so far. When present, the 2X letter counts
    /// as kept exactly when its index is not listed.
    #[serde(default)]
    pub eliminated_positions: Option<Vec<usize>>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub struct CheckResponse {
    pub is_word: bool,
    pub would_score: u32,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SessionScore {
    pub session_id: String,
    pub total_score: u32,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TraceReceipt {
    pub accepted_events: usize,
    pub sessions: Vec<SessionScore>,
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/api/levels", get(list_levels))
        .route("/api/levels/{index}", get(get_level))
        .route("/api/check", post(check))
        .route("/api/traces", post(upload_traces))
        .route("/api/report", get(report))
        .with_state(state)
}

async fn list_levels(State(state): State<Arc<AppState>>) -> Json<Vec<LevelSummary>> {
    Json(
        state
            .levels
            .iter()
            .map(|l| LevelSummary {
                index: l.index,
                target_length: l.params.target_length,
                challenges: l.challenges.len(),
                bonus_count: l.bonus_count(),
            })
            .collect(),
    )
}

async fn get_level(
    State(state): State<Arc<AppState>>,
    Path(index): Path<usize>,
) -> Result<Json<LevelView>, ApiError> {
    let level = state.level(index)?;
    let challenges = level
        .challenges
        .iter()
        .enumerate()
        .map(|(i, c)| ChallengeView {
            index: i + 1,
            word: c.challenge_word.clone(),
            bonus_position: c.bonus_position,
            budget_secs: challenge_time(i + 1).expect("ten challenges per level"),
        })
        .collect();
    Ok(Json(LevelView { index, challenges }))
}

async fn check(
    State(state): State<Arc<AppState>>,
    Json(req): Json<CheckRequest>,
) -> Result<Json<CheckResponse>, ApiError> {
    let level = state.level(req.level_index)?;
    let challenge = req
        .challenge_index
        .checked_sub(1)
        .and_then(|i| level.challenges.get(i))
        .ok_or_else(|| ApiError::not_found(format!("no challenge {}", req.challenge_index)))?;
    let word = &challenge.challenge_word;
    let remaining = req.remaining.trim().to_ascii_uppercase();
    if !is_subsequence(&remaining, word) {
        return Err(ApiError::bad_request(format!(
            "{remaining} cannot be left from {word}"
        )));
    }
    let bonus_kept = match (&req.eliminated_positions, challenge.bonus_position) {
        (_, None) => false,
        (Some(gone), Some(b)) => {
            let left: String = word
                .char_indices()
                .filter(|(i, _)| !gone.contains(i))
                .map(|(_, c)| c)
                .collect();
            if left != remaining {
                return Err(ApiError::bad_request(format!(
                    "eliminated positions leave {left}, not {remaining}"
                )));
            }
            !gone.contains(&b)
        }
        // without positions, the bonus counts when every way of leaving
        // these letters keeps it
        (None, Some(b)) => {
            let mut without = word.clone();
            without.remove(b);
            !is_subsequence(&remaining, &without)
        }
    };
    let is_word = state.dict.is_solution(&remaining);
    Ok(Json(CheckResponse {
        is_word,
        would_score: if is_word {
            word_score(&remaining, bonus_kept)
        } else {
            0
        },
    }))
}

fn parse_upload(body: &str) -> Result<Vec<PlaytraceEvent>, ApiError> {
    if body.trim_start().starts_with('[') {
        return serde_json::from_str(body)
            .map_err(|e| ApiError::bad_request(format!("bad trace array: {e}")));
    }
    let log = parse_traces(BufReader::new(body.as_bytes()))
        .map_err(|e| ApiError::bad_request(e.to_string()))?;
    if let Some(bad) = log.malformed.first() {
        return Err(ApiError::bad_request(format!(
            "line {}: {}",
            bad.line, bad.reason
        )));
    }
    if let Some(bad) = log.rejected.first() {
        return Err(ApiError::bad_request(format!(
            "session {}: {}",
            bad.session_id, bad.reason
        )));
    }
    Ok(log.events)
}

/// Accepts a JSON array of events or newline-delimited records. Every
/// session must replay cleanly against its level or nothing is stored.
async fn upload_traces(
    State(state): State<Arc<AppState>>,
    body: String,
) -> Result<Json<TraceReceipt>, ApiError> {
    let events = parse_upload(&body)?;
    if events.is_empty() {
        return Err(ApiError::bad_request("no trace records"));
    }
    let mut sessions = Vec::new();
    for (id, session) in group_sessions(&events) {
        check_session(&session).map_err(|r| ApiError::bad_request(format!("session {id}: {r}")))?;
        let level = state
            .level(session[0].level_index)
            .map_err(|e| ApiError::bad_request(format!("session {id}: {}", e.message)))?;
        let summary = replay_session(&session, level, &state.dict)
            .map_err(|e| ApiError::bad_request(e.to_string()))?;
        sessions.push(SessionScore {
            session_id: id.to_string(),
            total_score: summary.total_score,
        });
    }
    let _guard = state.traces_lock.lock().await;
    append_traces(&state.traces_path, &events).map_err(|e| ApiError::internal(e.to_string()))?;
    Ok(Json(TraceReceipt {
        accepted_events: events.len(),
        sessions,
    }))
}

fn append_traces(path: &std::path::Path, events: &[PlaytraceEvent]) -> std::io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let mut buf = Vec::new();
    write_traces(events, &mut buf)?;
    let mut f = OpenOptions::new().create(true).append(true).open(path)?;
    f.write_all(&buf)?;
    f.flush()
}

/// Analysis of everything uploaded so far.
async fn report(State(state): State<Arc<AppState>>) -> Result<Json<AnalysisReport>, ApiError> {
    let state = state.clone();
    tokio::task::spawn_blocking(move || {
        let _guard = state.traces_lock.blocking_lock();
        let file = match std::fs::File::open(&state.traces_path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
                return Err(ApiError::not_found("no traces recorded yet"))
            }
            Err(e) => return Err(ApiError::internal(e.to_string())),
        };
        let log =
            parse_traces(BufReader::new(file)).map_err(|e| ApiError::internal(e.to_string()))?;
        analyze(&log, &state.levels, &state.dict)
            .map(Json)
            .map_err(|e| ApiError::not_found(e.to_string()))
    })
    .await
    .map_err(|e| ApiError::internal(e.to_string()))?
}

pub async fn serve(state: AppState, port: u16) -> anyhow::Result<()> {
    let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(Arc::new(state)))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}
