mod support;

use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use elimination_app::commands::server_state;
use elimination_app::server::router;
use elimination_core::analytics::{write_traces, EventKind, PlaytraceEvent};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use support::hatdel_config;
use tower::ServiceExt;

async fn call(app: &Router, method: &str, uri: &str, body: Option<String>) -> (StatusCode, Value) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map(Body::from).unwrap_or_else(Body::empty))
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = serde_json::from_slice(&bytes).unwrap_or(Value::Null);
    (status, value)
}

fn app(dir: &std::path::Path) -> Router {
    router(Arc::new(server_state(&hatdel_config(dir)).unwrap()))
}

fn ev(session: &str, challenge: usize, kind: EventKind, t: u64) -> PlaytraceEvent {
    PlaytraceEvent {
        session_id: session.into(),
        player_id: "web".into(),
        level_index: 1,
        challenge_index: challenge,
        kind,
        timestamp_ms: t,
    }
}

fn hate_session(session: &str) -> Vec<PlaytraceEvent> {
    vec![
        ev(session, 1, EventKind::Start, 100),
        ev(session, 1, EventKind::Eliminate { original_index: 3 }, 900),
        ev(session, 1, EventKind::Eliminate { original_index: 5 }, 1500),
        ev(
            session,
            1,
            EventKind::Solve {
                word: "HATE".into(),
                score: 8,
            },
            1500,
        ),
        ev(session, 2, EventKind::Start, 1500),
    ]
}

fn ndjson(events: &[PlaytraceEvent]) -> String {
    let mut buf = Vec::new();
    write_traces(events, &mut buf).unwrap();
    String::from_utf8(buf).unwrap()
}

#[tokio::test]
async fn levels_list_and_detail() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(dir.path());
    let (s, v) = call(&app, "GET", "/api/levels", None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v.as_array().unwrap().len(), 2);

    let (s, v) = call(&app, "GET", "/api/levels/1", None).await;
    assert_eq!(s, StatusCode::OK);
    let cs = v["challenges"].as_array().unwrap();
    assert_eq!(cs.len(), 10);
    let budgets: Vec<f64> = cs
        .iter()
        .map(|c| c["budgetSecs"].as_f64().unwrap())
        .collect();
    assert_eq!(budgets[0], 30.0);
    assert_eq!(budgets[1], 25.0);
    assert!((budgets[9] - 75.0 / 7.0).abs() < 1e-12);
    assert_eq!(cs[0]["bonusPosition"], json!(0));
    assert_eq!(cs[1]["bonusPosition"], Value::Null);
    // nothing that gives the answers away
    let text = v.to_string();
    for leak in ["sourceWords", "HATE", "positions", "fitness"] {
        assert!(!text.contains(leak), "{leak} leaked: {text}");
    }

    let (s, v) = call(&app, "GET", "/api/levels/31", None).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    assert!(v["error"].as_str().unwrap().contains("31"));
}

#[tokio::test]
async fn check_scores_words() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(dir.path());
    let check = |challenge: usize, remaining: &str, gone: Option<Vec<usize>>| {
        let mut body =
            json!({"levelIndex": 1, "challengeIndex": challenge, "remaining": remaining});
        if let Some(g) = gone {
            body["eliminatedPositions"] = json!(g);
        }
        call(&app, "POST", "/api/check", Some(body.to_string()))
    };
    let (s, v) = check(2, "HATE", None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v, json!({"isWord": true, "wouldScore": 4}));
    let (_, v) = check(1, "HATE", Some(vec![3, 5])).await;
    assert_eq!(v, json!({"isWord": true, "wouldScore": 8}));
    let (_, v) = check(1, "HATE", None).await;
    assert_eq!(v["wouldScore"], 8);
    let (_, v) = check(1, "ATE", Some(vec![0, 3, 5])).await;
    assert_eq!(v, json!({"isWord": true, "wouldScore": 3}));
    let (_, v) = check(1, "HATEL", Some(vec![3])).await;
    assert_eq!(v, json!({"isWord": false, "wouldScore": 0}));

    let (s, _) = check(1, "DOG", None).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    let (s, _) = check(1, "HATE", Some(vec![1])).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    let (s, _) = check(11, "HATE", None).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn traces_are_validated_then_appended() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(dir.path());
    let traces = dir.path().join("traces").join("traces.jsonl");

    let (s, v) = call(
        &app,
        "POST",
        "/api/traces",
        Some(ndjson(&hate_session("a"))),
    )
    .await;
    assert_eq!(s, StatusCode::OK, "{v}");
    assert_eq!(v["sessions"][0]["totalScore"], 8);
    let array = serde_json::to_string(&hate_session("b")).unwrap();
    let (s, _) = call(&app, "POST", "/api/traces", Some(array)).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(
        std::fs::read_to_string(&traces).unwrap().lines().count(),
        10
    );

    let mut backwards = hate_session("c");
    backwards[2].timestamp_ms = 50;
    let (s, v) = call(&app, "POST", "/api/traces", Some(ndjson(&backwards))).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert!(v["error"].as_str().unwrap().contains("precedes"));

    let mut forged = hate_session("d");
    forged[3].kind = EventKind::Solve {
        word: "HATED".into(),
        score: 10,
    };
    let (s, v) = call(&app, "POST", "/api/traces", Some(ndjson(&forged))).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert!(v["error"].as_str().unwrap().contains("HATED"));

    let (s, _) = call(&app, "POST", "/api/traces", Some("{not json".into())).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    assert_eq!(
        std::fs::read_to_string(&traces).unwrap().lines().count(),
        10
    );
}

#[tokio::test]
async fn report_reflects_uploads() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(dir.path());
    let (s, _) = call(&app, "GET", "/api/report", None).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    call(
        &app,
        "POST",
        "/api/traces",
        Some(ndjson(&hate_session("a"))),
    )
    .await;
    let (s, v) = call(&app, "GET", "/api/report", None).await;
    assert_eq!(s, StatusCode::OK, "{v}");
    assert_eq!(v["sessionsAnalyzed"], 1);
    assert!(v["levelScoreModel"]["error"].is_string());
}
