mod common;

use common::fixture;
use elimination_core::analytics::{
    group_sessions, max_level_score, replay_session, EventKind, PlaytraceEvent,
};
use elimination_core::simulation::{plan_solution, simulate_corpus, BotKind, BotPolicy};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn run(kind: BotKind, delay: u64, runs: usize, levels: usize) -> Vec<PlaytraceEvent> {
    let f = fixture();
    simulate_corpus(
        &[BotPolicy::new(kind, delay, 1)],
        &f.levels[..levels],
        runs,
        3,
        &f.dict,
    )
    .unwrap()
}

fn solves(events: &[PlaytraceEvent]) -> usize {
    events
        .iter()
        .filter(|e| matches!(e.kind, EventKind::Solve { .. }))
        .count()
}

#[test]
fn zero_runs_is_empty() {
    assert!(run(BotKind::GreedyLongest, 500, 0, 30).is_empty());
}

#[test]
fn greedy_with_generous_time_solves_everything() {
    let events = run(BotKind::GreedyLongest, 200, 1, 30);
    let f = fixture();
    for level in &f.levels {
        let mine: Vec<_> = events
            .iter()
            .filter(|e| e.level_index == level.index)
            .cloned()
            .collect();
        assert_eq!(solves(&mine), 10, "level {}", level.index);
        let session: Vec<&PlaytraceEvent> = mine.iter().collect();
        let summary = replay_session(&session, level, &f.dict).unwrap();
        assert_eq!(
            summary.total_score,
            max_level_score(level, &f.dict).unwrap()
        );
    }
}

#[test]
fn slow_bots_time_out() {
    let events = run(BotKind::NoisySkill { skill: 0.5 }, 3_000, 3, 30);
    let late: Vec<_> = events
        .iter()
        .filter(|e| e.kind == EventKind::Timeout)
        .collect();
    assert!(!late.is_empty());
    // 8 letters at 3 s each cannot fit in challenge 10's 75/7 s
    assert!(late.iter().any(|e| e.challenge_index >= 8));
}

#[test]
fn traces_replay_to_their_own_scores() {
    let f = fixture();
    let policies = [
        BotPolicy::new(BotKind::Random, 900, 1),
        BotPolicy::new(BotKind::GreedyShortest, 900, 2),
        BotPolicy::new(BotKind::NoisySkill { skill: 0.6 }, 1_500, 3),
        BotPolicy::new(BotKind::DeliberatelyNaive, 900, 4),
    ];
    let events = simulate_corpus(&policies, &f.levels, 2, 9, &f.dict).unwrap();
    for (_, session) in group_sessions(&events) {
        let level = &f.levels[session[0].level_index - 1];
        let summary = replay_session(&session, level, &f.dict).unwrap();
        let recorded: u32 = session
            .iter()
            .filter_map(|e| match e.kind {
                EventKind::Solve { score, .. } => Some(score),
                _ => None,
            })
            .sum();
        assert_eq!(summary.total_score, recorded);
        assert!(summary.outcome.is_some());
    }
}

#[test]
fn simulation_is_deterministic() {
    let a = run(BotKind::NoisySkill { skill: 0.4 }, 700, 3, 5);
    let b = run(BotKind::NoisySkill { skill: 0.4 }, 700, 3, 5);
    assert_eq!(a, b);
}

#[test]
fn longest_dominates_shortest_on_every_level() {
    let f = fixture();
    for level in &f.levels {
        let score = |kind: BotKind| {
            let events = simulate_corpus(
                &[BotPolicy::new(kind, 200, 0)],
                std::slice::from_ref(level),
                1,
                0,
                &f.dict,
            )
            .unwrap();
            let session: Vec<&PlaytraceEvent> = events.iter().collect();
            replay_session(&session, level, &f.dict)
                .unwrap()
                .total_score
        };
        assert!(score(BotKind::GreedyLongest) >= score(BotKind::GreedyShortest));
    }
}

#[test]
fn full_skill_plans_like_greedy() {
    let f = fixture();
    let mut a = ChaCha8Rng::seed_from_u64(1);
    let mut b = ChaCha8Rng::seed_from_u64(2);
    for c in f.levels.iter().flat_map(|l| &l.challenges) {
        let noisy = plan_solution(&BotKind::NoisySkill { skill: 1.0 }, c, &f.dict, &mut a).unwrap();
        let greedy = plan_solution(&BotKind::GreedyLongest, c, &f.dict, &mut b).unwrap();
        assert_eq!(noisy, greedy);
        assert!(greedy.is_some());
    }
}
