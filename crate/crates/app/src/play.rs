//! Line-oriented terminal play. Input and output are generic and time comes
//! from a [`Clock`], so whole sessions can be scripted in tests.

use std::cell::Cell;
use std::io::{BufRead, Write};
use std::time::Instant;

use anyhow::Result;
use elimination_core::analytics::{EventKind, PlaytraceEvent};
use elimination_core::game::{LevelSession, SessionEvent, SessionOutcome};
use elimination_core::{Dictionary, GeneratedLevel};

pub trait Clock {
    fn now_ms(&self) -> u64;
}

/// Wall-clock milliseconds since the clock was created.
pub struct SystemClock(Instant);

impl SystemClock {
    pub fn new() -> Self {
        SystemClock(Instant::now())
    }
}

impl Default for SystemClock {
    fn default() -> Self {
        Self::new()
    }
}

impl Clock for SystemClock {
    fn now_ms(&self) -> u64 {
        self.0.elapsed().as_millis() as u64
    }
}

/// Advances by a fixed step on every reading.
pub struct StepClock {
    now: Cell<u64>,
    step: u64,
}

impl StepClock {
    pub fn new(start: u64, step: u64) -> Self {
        StepClock {
            now: Cell::new(start),
            step,
        }
    }
}

impl Clock for StepClock {
    fn now_ms(&self) -> u64 {
        let t = self.now.get();
        self.now.set(t + self.step);
        t
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Command {
    Remove(usize),
    Quit,
}

fn parse_command(line: &str) -> Option<Command> {
    let line = line.trim().to_ascii_lowercase();
    if line == "quit" || line == "q" {
        return Some(Command::Quit);
    }
    let arg = line.strip_prefix("remove").map(str::trim).unwrap_or(&line);
    arg.parse().ok().map(Command::Remove)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlayResult {
    pub events: Vec<PlaytraceEvent>,
    pub total_score: u32,
    /// `None` when the player quit or input ran out.
    pub outcome: Option<SessionOutcome>,
}

fn render<W: Write>(out: &mut W, session: &LevelSession, now: u64, started: u64) -> Result<()> {
    let Some(c) = session.current() else {
        return Ok(());
    };
    let left = (c.budget_ms().saturating_sub(now - started)) as f64 / 1000.0;
    writeln!(
        out,
        "\nlevel {} challenge {}/10  score {}  {:.1}s left",
        session.level_index(),
        c.number(),
        session.total_score(),
        left
    )?;
    let word = c.original().as_bytes();
    let (mut idx, mut letters, mut marks) = (String::new(), String::new(), String::new());
    for i in c.remaining_positions() {
        idx.push_str(&format!("{i:>3}"));
        letters.push_str(&format!("{:>3}", word[i] as char));
        marks.push_str(if c.bonus_position() == Some(i) {
            " 2X"
        } else {
            "   "
        });
    }
    writeln!(out, "{idx}\n{letters}")?;
    if c.bonus_kept() {
        writeln!(out, "{}", marks.trim_end())?;
    }
    write!(out, "remove> ")?;
    out.flush()?;
    Ok(())
}

/// Plays `level` from `input` until the level ends, the player types
/// `quit`, or input runs out. Positions are the original letter indices
/// shown above each letter; `remove 3` and `3` are equivalent.
///
/// Time is only checked when a line arrives, so a challenge whose budget
/// ran out while waiting is recorded as a timeout at its exact expiry.
#[allow(clippy::too_many_arguments)]
pub fn play_level<R: BufRead, W: Write, C: Clock>(
    level: &GeneratedLevel,
    dict: &Dictionary,
    clock: &C,
    session_id: &str,
    player_id: &str,
    input: R,
    out: &mut W,
) -> Result<PlayResult> {
    let mut session = LevelSession::from_level(level)?;
    let mut events = Vec::new();
    let push = |events: &mut Vec<PlaytraceEvent>, challenge: usize, kind: EventKind, t: u64| {
        events.push(PlaytraceEvent {
            session_id: session_id.into(),
            player_id: player_id.into(),
            level_index: level.index,
            challenge_index: challenge,
            kind,
            timestamp_ms: t,
        })
    };
    let mut started = clock.now_ms();
    let mut last = started;
    push(&mut events, 1, EventKind::Start, started);
    render(out, &session, started, started)?;

    let mut lines = input.lines();
    while !session.is_over() {
        let Some(line) = lines.next() else {
            writeln!(out, "\ninput closed, session abandoned")?;
            break;
        };
        let line = line?;
        let now = clock.now_ms().max(last);
        let current = session.current().expect("session in progress");
        let number = current.number();
        let limit = current.budget_ms();
        if now - started >= limit {
            let expiry = started + limit;
            session.advance(SessionEvent::Tick(expiry - last), dict)?;
            push(&mut events, number, EventKind::Timeout, expiry);
            writeln!(out, "\ntime is up on challenge {number}")?;
            break;
        }
        let index = match parse_command(&line) {
            Some(Command::Quit) => {
                writeln!(out, "session abandoned")?;
                break;
            }
            Some(Command::Remove(i)) if current.remaining_positions().contains(&i) => i,
            _ => {
                write!(
                    out,
                    "enter the number above a letter, `remove N`, or `quit`\nremove> "
                )?;
                out.flush()?;
                continue;
            }
        };
        session.advance(SessionEvent::Tick(now - last), dict)?;
        last = now;
        push(
            &mut events,
            number,
            EventKind::Eliminate {
                original_index: index,
            },
            now,
        );
        let step = session.advance(SessionEvent::Eliminate(index), dict)?;
        if let Some((k, word, score)) = step.solved {
            push(
                &mut events,
                k,
                EventKind::Solve {
                    word: word.clone(),
                    score,
                },
                now,
            );
            writeln!(out, "\n{word}! +{score}")?;
            if !session.is_over() {
                push(&mut events, k + 1, EventKind::Start, now);
                started = now;
            }
        }
        render(out, &session, now, started)?;
    }
    if let Some(outcome) = session.outcome() {
        writeln!(
            out,
            "level {} over ({}), total score {}; level {} unlocked",
            level.index,
            match outcome {
                SessionOutcome::Completed => "all challenges solved".to_string(),
                SessionOutcome::Expired(k) => format!("timer ran out on challenge {k}"),
            },
            session.total_score(),
            level.index + 1
        )?;
    }
    Ok(PlayResult {
        events,
        total_score: session.total_score(),
        outcome: session.outcome(),
    })
}
