mod common;

use std::collections::{BTreeSet, HashSet};

use common::{brute_reachable, mini_dictionary, random_challenge, real_dictionary};
use elimination_core::corpus::Dictionary;
use elimination_core::game::{
    challenge_time, reachable_words, word_score, ChallengeState, ChallengeStatus, ReachGraph,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn afart_trap() {
    let d = Dictionary::from_words(["FAR", "FART", "AFAR", "ART"], 3).0;
    let r = reachable_words("AFART", &d).unwrap();
    assert!(r.unreachable_embedded.contains(&"FAR".to_string()));
    assert!(r.reachable.contains(&"FART".to_string()));
    assert!(r.reachable.contains(&"AFAR".to_string()));
}

#[test]
fn reachability_matches_path_search() {
    let full = real_dictionary();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..30 {
        let words = mini_dictionary(&full, 400, 6, &mut rng);
        let set: HashSet<String> = words.iter().cloned().collect();
        let d = Dictionary::from_words(&words, 3).0;
        for _ in 0..5 {
            let c = random_challenge(&words, 10, &mut rng);
            let got: BTreeSet<String> = reachable_words(&c, &d)
                .unwrap()
                .reachable
                .into_iter()
                .collect();
            assert_eq!(got, brute_reachable(&c, &set, 3), "{c}");
        }
    }
}

#[test]
fn every_planned_path_lands_on_its_word() {
    let d = real_dictionary();
    for c in ["HATDEL", "AFART", "SLCUNULTTG", "PBEOAOYMPS"] {
        let g = ReachGraph::explore(c, &d).unwrap();
        for t in g.terminals() {
            let mut s = ChallengeState::new(1, c, None).unwrap();
            let path = g.path_to(t.mask).unwrap();
            let (last, init) = path.split_last().unwrap();
            for &i in init {
                assert_eq!(*s.eliminate(i, &d).unwrap(), ChallengeStatus::InProgress);
            }
            assert_eq!(
                *s.eliminate(*last, &d).unwrap(),
                ChallengeStatus::Solved {
                    word: t.word.clone(),
                    score: word_score(&t.word, false)
                }
            );
        }
    }
}

#[test]
fn budgets_strictly_decrease() {
    for n in 1..10 {
        assert!(challenge_time(n + 1).unwrap() < challenge_time(n).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solved_words_are_sound_and_reachable(c in "[AEHLRSTD]{4,10}", seed in any::<u64>()) {
        let d = Dictionary::from_words(
            ["HATE", "ATE", "EAT", "TEA", "SEAT", "REST", "STAR", "RATS", "LATE", "HEART",
             "EARTH", "DEAL", "LEAD", "TREAD", "SHED", "HARD", "DARE", "READ"],
            3,
        ).0;
        prop_assume!(!d.contains(&c));
        let reachable = reachable_words(&c, &d).unwrap().reachable;
        let mut order: Vec<usize> = (0..c.len()).collect();
        order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let mut s = ChallengeState::new(1, &c, Some(0)).unwrap();
        for i in order {
            if !s.is_in_progress() {
                break;
            }
            if let ChallengeStatus::Solved { word, score } = s.eliminate(i, &d).unwrap().clone() {
                prop_assert_eq!(&word, &s.letters());
                prop_assert!(d.contains(&word));
                prop_assert!(reachable.contains(&word));
                prop_assert_eq!(score, word_score(&word, s.bonus_kept()));
            }
        }
    }
}
