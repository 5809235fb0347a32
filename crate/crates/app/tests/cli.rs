mod support;

use std::fs;
use std::io::Cursor;

use elimination_app::commands;
use elimination_app::play::StepClock;
use elimination_app::store::{load_levels, read_manifest};
use elimination_app::AppConfig;
use elimination_core::analytics::{group_sessions, parse_traces, replay_session, EventKind};
use elimination_core::game::{ReachGraph, SessionOutcome};
use elimination_core::simulation::BotKind;
use support::{hatdel_config, small_schedule_config};

fn play_script(
    config: &AppConfig,
    level: usize,
    script: &str,
    step: u64,
) -> (elimination_app::play::PlayResult, String) {
    let mut out = Vec::new();
    let r = commands::play(
        config,
        level,
        "tester",
        &StepClock::new(1_000, step),
        Cursor::new(script),
        &mut out,
    )
    .unwrap();
    (r, String::from_utf8(out).unwrap())
}

#[test]
fn remove_three_then_five_solves_hate() {
    let dir = tempfile::tempdir().unwrap();
    let config = hatdel_config(dir.path());
    let (r, out) = play_script(&config, 1, "remove 3\nremove 5\nquit\n", 500);
    assert!(out.contains("HATE! +8"), "{out}");
    let kinds: Vec<&EventKind> = r.events.iter().map(|e| &e.kind).collect();
    assert_eq!(
        kinds,
        [
            &EventKind::Start,
            &EventKind::Eliminate { original_index: 3 },
            &EventKind::Eliminate { original_index: 5 },
            &EventKind::Solve {
                word: "HATE".into(),
                score: 8
            },
            &EventKind::Start,
        ]
    );
    assert_eq!(r.total_score, 8);
    assert_eq!(r.outcome, None);
}

#[test]
fn bad_input_reprompts() {
    let dir = tempfile::tempdir().unwrap();
    let config = hatdel_config(dir.path());
    let (r, out) = play_script(&config, 1, "banana\n9\n3\n3\n5\n", 100);
    assert_eq!(out.matches("enter the number above a letter").count(), 3);
    assert!(r
        .events
        .iter()
        .any(|e| matches!(e.kind, EventKind::Solve { .. })));
}

#[test]
fn slow_player_times_out() {
    let dir = tempfile::tempdir().unwrap();
    let config = hatdel_config(dir.path());
    let (r, out) = play_script(&config, 2, "3\n", 31_000);
    assert!(out.contains("time is up"));
    let last = r.events.last().unwrap();
    assert_eq!(last.kind, EventKind::Timeout);
    assert_eq!(last.timestamp_ms, 1_000 + 30_000);
    assert_eq!(r.outcome, Some(SessionOutcome::Expired(1)));
}

#[test]
fn quitting_flushes_a_partial_trace() {
    let dir = tempfile::tempdir().unwrap();
    let config = hatdel_config(dir.path());
    play_script(&config, 1, "3\nquit\n", 100);
    play_script(&config, 1, "", 100);
    let text = fs::read_to_string(&config.traces_path).unwrap();
    let log = parse_traces(text.as_bytes()).unwrap();
    assert_eq!(log.events.len(), 3);
    assert!(log.rejected.is_empty());
}

#[test]
fn scripted_full_level_replays_to_the_same_score() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_schedule_config(dir.path());
    commands::generate(&config, &config.levels_dir).unwrap();
    let dict = config.dictionary().unwrap();
    for level in load_levels(&config.levels_dir).unwrap() {
        // play the longest reachable word of each challenge
        let mut script = String::new();
        for c in &level.challenges {
            let g = ReachGraph::explore(&c.challenge_word, &dict).unwrap();
            let best = g
                .terminals()
                .iter()
                .max_by_key(|t| t.score(c.bonus_position))
                .unwrap();
            for i in g.path_to(best.mask).unwrap() {
                script.push_str(&format!("remove {i}\n"));
            }
        }
        let (r, _) = play_script(&config, level.index, &script, 700);
        assert_eq!(r.outcome, Some(SessionOutcome::Completed));
        let session: Vec<_> = r.events.iter().collect();
        assert_eq!(
            replay_session(&session, &level, &dict).unwrap().total_score,
            r.total_score
        );
    }
}

#[test]
fn generate_is_idempotent_and_validated() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_schedule_config(dir.path());
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    commands::generate(&config, &a).unwrap();
    commands::generate(&config, &b).unwrap();
    for name in [
        "manifest.json",
        "level_01.json",
        "level_02.json",
        "level_03.json",
    ] {
        assert_eq!(
            fs::read(a.join(name)).unwrap(),
            fs::read(b.join(name)).unwrap(),
            "{name}"
        );
    }
    let m = read_manifest(&a).unwrap();
    assert_eq!((m.seed, m.levels.len()), (7, 3));
    for l in load_levels(&a).unwrap() {
        assert_eq!(
            fs::read_to_string(a.join(format!("level_{:02}.json", l.index))).unwrap(),
            l.to_json()
        );
    }
    let leftovers: Vec<_> = fs::read_dir(&a)
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().starts_with('.'))
        .collect();
    assert!(leftovers.is_empty());
}

#[test]
fn missing_dictionary_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = small_schedule_config(dir.path());
    config.dictionary_path = dir.path().join("nope.txt");
    let err = commands::generate(&config, &config.levels_dir).unwrap_err();
    assert!(format!("{err:#}").contains("nope.txt"));
    assert!(!config.levels_dir.join("manifest.json").exists());
}

#[test]
fn impossible_schedule_leaves_no_files() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = small_schedule_config(dir.path());
    let schedule = dir.path().join("bad.csv");
    // two 9-letter sources cannot shrink to 3 letters
    fs::write(
        &schedule,
        "level,minRank,maxRank,sourceWords,targetLength,maxSeq,num2X\n1,1,25000,9-9,3,3,0\n",
    )
    .unwrap();
    config.schedule_path = Some(schedule);
    assert!(commands::generate(&config, &config.levels_dir).is_err());
    let left = fs::read_dir(&config.levels_dir)
        .map(|d| d.count())
        .unwrap_or(0);
    assert_eq!(left, 0);
}

#[test]
fn simulate_then_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_schedule_config(dir.path());
    commands::generate(&config, &config.levels_dir).unwrap();
    let n = commands::simulate(&config, &[BotKind::GreedyLongest], 20, 800).unwrap();
    assert_eq!(n, 20 * 3);
    let text = fs::read_to_string(&config.traces_path).unwrap();
    let log = parse_traces(text.as_bytes()).unwrap();
    assert_eq!(group_sessions(&log.events).len(), 60);

    let out = dir.path().join("reports");
    let report = commands::analyze_traces(&config, &out).unwrap();
    assert_eq!(report.difficulty_curve.points.len(), 3);
    assert!(out.join("report.json").exists());
    assert!(fs::read_to_string(out.join("report.txt"))
        .unwrap()
        .contains("difficulty curve"));
}

#[test]
fn analyze_without_traces_fails() {
    let dir = tempfile::tempdir().unwrap();
    let config = hatdel_config(dir.path());
    fs::create_dir_all(config.traces_path.parent().unwrap()).unwrap();
    fs::write(&config.traces_path, "").unwrap();
    let err = commands::analyze_traces(&config, &dir.path().join("r")).unwrap_err();
    assert!(format!("{err:#}").contains("no usable events"), "{err:#}");
}
