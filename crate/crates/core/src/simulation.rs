//! Scripted bot players that drive levels through the rules engine and emit
//! the same trace records a human session would.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::canonical_embedding;
use crate::analytics::{EventKind, PlaytraceEvent};
use crate::corpus::Dictionary;
use crate::game::{GameError, LevelSession, ReachGraph, SessionEvent, Terminal};
use crate::generation::{mix_seed, GeneratedChallenge, GeneratedLevel};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BotKind {
    /// Uniformly random reachable word.
    Random,
    /// Highest-scoring reachable word.
    GreedyLongest,
    /// Lowest-scoring reachable word.
    GreedyShortest,
    /// Greedy with probability `skill`, otherwise random.
    NoisySkill { skill: f64 },
    /// Aims at any embedded word, reachable or not, by deleting the letters
    /// outside it from left to right.
    DeliberatelyNaive,
}

impl fmt::Display for BotKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BotKind::Random => write!(f, "random"),
            BotKind::GreedyLongest => write!(f, "greedy-longest"),
            BotKind::GreedyShortest => write!(f, "greedy-shortest"),
            BotKind::NoisySkill { skill } => write!(f, "noisy:{skill}"),
            BotKind::DeliberatelyNaive => write!(f, "naive"),
        }
    }
}

impl FromStr for BotKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let kind = match s {
            "random" => BotKind::Random,
            "greedy-longest" => BotKind::GreedyLongest,
            "greedy-shortest" => BotKind::GreedyShortest,
            "naive" => BotKind::DeliberatelyNaive,
            other => {
                let skill = other
                    .strip_prefix("noisy:")
                    .ok_or_else(|| format!("unknown bot {other:?}"))?
                    .parse::<f64>()
                    .map_err(|e| format!("bad skill in {other:?}: {e}"))?;
                if !(0.0..=1.0).contains(&skill) {
                    return Err(format!("skill {skill} outside [0, 1]"));
                }
                BotKind::NoisySkill { skill }
            }
        };
        Ok(kind)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BotPolicy {
    pub kind: BotKind,
    pub per_letter_delay_ms: u64,
    pub seed: u64,
}

impl BotPolicy {
    pub fn new(kind: BotKind, per_letter_delay_ms: u64, seed: u64) -> Self {
        BotPolicy {
            kind,
            per_letter_delay_ms,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan {
    pub target: String,
    pub eliminations: Vec<usize>,
}

fn pick_best(terminals: &[Terminal], bonus: Option<usize>, longest: bool) -> Option<&Terminal> {
    let mut best: Option<(&Terminal, u32)> = None;
    for t in terminals {
        let s = t.score(bonus);
        let better = match best {
            None => true,
            Some((_, b)) if longest => s > b,
            Some((_, b)) => s < b,
        };
        if better {
            best = Some((t, s));
        }
    }
    best.map(|(t, _)| t)
}

fn pick_random<'a, R: Rng>(
    graph: &'a ReachGraph,
    bonus: Option<usize>,
    rng: &mut R,
) -> Option<&'a Terminal> {
    let words: Vec<String> = graph.reachable_words().into_iter().collect();
    if words.is_empty() {
        return None;
    }
    let word = &words[rng.random_range(0..words.len())];
    let same: Vec<Terminal> = graph
        .terminals()
        .iter()
        .filter(|t| &t.word == word)
        .cloned()
        .collect();
    let best = pick_best(&same, bonus, true)?.mask;
    graph.terminals().iter().find(|t| t.mask == best)
}

/// Plans eliminations for one challenge using a precomputed graph.
/// Returns `None` (give up) when nothing is reachable.
pub fn plan_with_graph<R: Rng>(
    kind: &BotKind,
    challenge: &GeneratedChallenge,
    graph: &ReachGraph,
    dict: &Dictionary,
    rng: &mut R,
) -> Option<Plan> {
    let bonus = challenge.bonus_position;
    let terminal = match kind {
        BotKind::GreedyLongest => pick_best(graph.terminals(), bonus, true),
        BotKind::GreedyShortest => pick_best(graph.terminals(), bonus, false),
        BotKind::Random => pick_random(graph, bonus, rng),
        BotKind::NoisySkill { skill } => {
            if rng.random_bool(skill.clamp(0.0, 1.0)) {
                pick_best(graph.terminals(), bonus, true)
            } else {
                pick_random(graph, bonus, rng)
            }
        }
        BotKind::DeliberatelyNaive => {
            let words = dict.embedded_words(&challenge.challenge_word).ok()?;
            if words.is_empty() {
                return None;
            }
            let target = words[rng.random_range(0..words.len())].clone();
            let keep = canonical_embedding(&target, &challenge.challenge_word)?;
            let eliminations = (0..challenge.challenge_word.len())
                .filter(|i| !keep.contains(i))
                .collect();
            return Some(Plan {
                target,
                eliminations,
            });
        }
    }?;
    Some(Plan {
        target: terminal.word.clone(),
        eliminations: graph.path_to(terminal.mask)?,
    })
}

pub fn plan_solution<R: Rng>(
    kind: &BotKind,
    challenge: &GeneratedChallenge,
    dict: &Dictionary,
    rng: &mut R,
) -> Result<Option<Plan>, GameError> {
    let graph = ReachGraph::explore(&challenge.challenge_word, dict)?;
    Ok(plan_with_graph(kind, challenge, &graph, dict, rng))
}

struct SessionCtx<'a> {
    session_id: String,
    player_id: String,
    level: &'a GeneratedLevel,
    events: Vec<PlaytraceEvent>,
}

impl SessionCtx<'_> {
    fn push(&mut self, challenge: usize, kind: EventKind, t: u64) {
        self.events.push(PlaytraceEvent {
            session_id: self.session_id.clone(),
            player_id: self.player_id.clone(),
            level_index: self.level.index,
            challenge_index: challenge,
            kind,
            timestamp_ms: t,
        });
    }
}

/// Plays one level with one bot. Eliminations are spaced
/// `per_letter_delay_ms` apart; a challenge whose plan cannot finish in
/// time records a timeout at the exact expiry instant.
#[allow(clippy::too_many_arguments)]
pub fn simulate_session(
    policy: &BotPolicy,
    level: &GeneratedLevel,
    graphs: &[ReachGraph],
    dict: &Dictionary,
    session_id: String,
    player_id: String,
    start_ms: u64,
    seed: u64,
) -> Vec<PlaytraceEvent> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ctx = SessionCtx {
        session_id,
        player_id,
        level,
        events: Vec::new(),
    };
    let Ok(mut session) = LevelSession::from_level(level) else {
        return ctx.events;
    };
    let delay = policy.per_letter_delay_ms;
    let mut t = start_ms;
    ctx.push(1, EventKind::Start, t);
    while let Some(current) = session.current() {
        let k = current.number();
        let limit = current.budget_ms();
        let challenge = &level.challenges[k - 1];
        let plan = plan_with_graph(&policy.kind, challenge, &graphs[k - 1], dict, &mut rng);
        let challenge_start = t;
        let mut finished = false;
        for idx in plan.map(|p| p.eliminations).unwrap_or_default() {
            let elapsed = t - challenge_start;
            if elapsed + delay >= limit {
                break;
            }
            session
                .advance(SessionEvent::Tick(delay), dict)
                .expect("session in progress");
            t += delay;
            ctx.push(
                k,
                EventKind::Eliminate {
                    original_index: idx,
                },
                t,
            );
            let step = session
                .advance(SessionEvent::Eliminate(idx), dict)
                .expect("planned elimination is legal");
            if let Some((_, word, score)) = step.solved {
                ctx.push(k, EventKind::Solve { word, score }, t);
                if !session.is_over() {
                    ctx.push(k + 1, EventKind::Start, t);
                }
                finished = true;
                break;
            }
        }
        if !finished {
            let elapsed = t - challenge_start;
            session
                .advance(SessionEvent::Tick(limit - elapsed), dict)
                .expect("session in progress");
            t = challenge_start + limit;
            ctx.push(k, EventKind::Timeout, t);
        }
    }
    ctx.events
}

/// Runs every policy `runs` times over every level. Output order is fixed:
/// policy, then run, then level.
pub fn simulate_corpus(
    policies: &[BotPolicy],
    levels: &[GeneratedLevel],
    runs: usize,
    seed: u64,
    dict: &Dictionary,
) -> Result<Vec<PlaytraceEvent>, GameError> {
    let graphs: Vec<Vec<ReachGraph>> = levels
        .par_iter()
        .map(|l| {
            l.challenges
                .iter()
                .map(|c| ReachGraph::explore(&c.challenge_word, dict))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    let jobs: Vec<(usize, usize, usize)> = (0..policies.len())
        .flat_map(|p| (0..runs).flat_map(move |r| (0..levels.len()).map(move |l| (p, r, l))))
        .collect();
    let sessions: Vec<Vec<PlaytraceEvent>> = jobs
        .par_iter()
        .enumerate()
        .map(|(n, &(p, r, l))| {
            let policy = &policies[p];
            let level = &levels[l];
            let name = policy.kind.to_string().replace(':', "");
            let session_seed = mix_seed(
                mix_seed(mix_seed(seed, policy.seed), (p * 1_000_003 + r) as u64),
                level.index as u64,
            );
            simulate_session(
                policy,
                level,
                &graphs[l],
                dict,
                format!("bot{p}-{name}-r{r}-l{}", level.index),
                format!("bot{p}-{name}-r{r}"),
                n as u64 * 3_600_000,
                session_seed,
            )
        })
        .collect();
    Ok(sessions.into_iter().flatten().collect())
}
