//! Playtrace ingestion and analysis: replay validation, normalized level
//! scores, the difficulty curve, word-choice features and the two linear
//! models over them.

mod curve;
mod features;
mod models;
mod ols;
mod replay;
mod report;
mod trace;

use thiserror::Error;

pub use curve::{difficulty_curve, max_level_score, CurvePoint, DifficultyCurve, LevelOutcome};
pub use features::{
    canonical_embedding, extract_word_features, selection_rates, WordFeatures, WordSelectionRecord,
};
pub use models::{
    level_feature_row, level_score_model, word_choice_model, LEVEL_FEATURES, MIN_LEVELS_FOR_MODEL,
    MIN_RECORDS_FOR_MODEL, WORD_FEATURES,
};
pub use ols::{fit_ols, RegressionModel};
pub use replay::{replay_session, ReplaySummary, SolveRecord};
pub use report::{analyze, AnalysisReport, ModelReport};
pub use trace::{
    check_session, group_sessions, parse_traces, validate_events, write_traces, EventKind,
    LineError, PlaytraceEvent, RecordKind, SessionRejection, TraceLog, TraceRecord,
};

#[derive(Debug, Error)]
pub enum AnalyticsError {
    #[error("i/o: {0}")]
    Io(String),
    #[error("session {session}: {reason}")]
    Replay { session: String, reason: String },
    #[error("integrity: {0}")]
    Integrity(String),
    #[error("no data: {0}")]
    NoData(String),
    #[error("regression: {0}")]
    Regression(String),
    #[error("collinear columns {columns:?}: {reason}")]
    Collinear {
        columns: Vec<String>,
        reason: String,
    },
}
