use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use elimination_core::analytics::{analyze, parse_traces, write_traces, AnalysisReport};
use elimination_core::generation::{generate_levels, validate_level, EaConfig};
use elimination_core::simulation::{simulate_corpus, BotKind, BotPolicy};

use crate::config::{ensure_parent, AppConfig};
use crate::play::{play_level, Clock, PlayResult};
use crate::server::AppState;
use crate::store::{load_levels, write_levels, Manifest};

/// Generates every scheduled level into `out` and checks each against the
/// challenge rules before anything is written.
pub fn generate(config: &AppConfig, out: &Path) -> Result<Manifest> {
    let dict = config.dictionary()?;
    let schedule = config.schedule()?;
    let ea = EaConfig::default();
    let levels =
        generate_levels(&schedule, &dict, config.seed, &ea).context("generating levels")?;
    let problems: Vec<String> = levels
        .iter()
        .flat_map(|l| validate_level(l, &dict))
        .collect();
    if !problems.is_empty() {
        bail!(
            "generated levels fail validation:\n  {}",
            problems.join("\n  ")
        );
    }
    write_levels(out, &levels, config.seed, &ea)
}

pub fn append_events(
    path: &Path,
    events: &[elimination_core::analytics::PlaytraceEvent],
) -> Result<()> {
    ensure_parent(path)?;
    let f = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .with_context(|| format!("opening {}", path.display()))?;
    let mut w = BufWriter::new(f);
    write_traces(events, &mut w)?;
    w.flush()?;
    Ok(())
}

fn new_session_id(player_id: &str, level_index: usize) -> String {
    static COUNTER: AtomicU64 = AtomicU64::new(0);
    let nanos = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_nanos())
        .unwrap_or(0);
    let n = COUNTER.fetch_add(1, Ordering::Relaxed);
    format!(
        "{player_id}-l{level_index}-{nanos:x}-{}-{n}",
        std::process::id()
    )
}

/// Plays one level in the terminal and appends its trace, including a
/// partial trace when the player quits.
pub fn play<R: BufRead, W: Write, C: Clock>(
    config: &AppConfig,
    level_index: usize,
    player_id: &str,
    clock: &C,
    input: R,
    out: &mut W,
) -> Result<PlayResult> {
    let dict = config.dictionary()?;
    let levels = load_levels(&config.levels_dir)?;
    let level = levels
        .iter()
        .find(|l| l.index == level_index)
        .with_context(|| format!("no level {level_index} in {}", config.levels_dir.display()))?;
    let session_id = new_session_id(player_id, level_index);
    let result = play_level(level, &dict, clock, &session_id, player_id, input, out)?;
    append_events(&config.traces_path, &result.events)?;
    Ok(result)
}

/// Runs bots over every level and writes a fresh trace file.
pub fn simulate(config: &AppConfig, bots: &[BotKind], runs: usize, delay_ms: u64) -> Result<usize> {
    let dict = config.dictionary()?;
    let levels = load_levels(&config.levels_dir)?;
    let policies: Vec<BotPolicy> = bots
        .iter()
        .enumerate()
        .map(|(i, k)| BotPolicy::new(k.clone(), delay_ms, i as u64))
        .collect();
    let events = simulate_corpus(&policies, &levels, runs, config.seed, &dict)?;
    ensure_parent(&config.traces_path)?;
    let f = File::create(&config.traces_path)
        .with_context(|| format!("creating {}", config.traces_path.display()))?;
    let mut w = BufWriter::new(f);
    write_traces(&events, &mut w)?;
    w.flush()?;
    Ok(policies.len() * runs * levels.len())
}

/// Analyzes the trace file and writes `report.json` and `report.txt` to
/// `out`.
pub fn analyze_traces(config: &AppConfig, out: &Path) -> Result<AnalysisReport> {
    let dict = config.dictionary()?;
    let levels = load_levels(&config.levels_dir)?;
    let file = File::open(&config.traces_path)
        .with_context(|| format!("opening {}", config.traces_path.display()))?;
    let log = parse_traces(BufReader::new(file))?;
    for m in &log.malformed {
        eprintln!("line {}: {}", m.line, m.reason);
    }
    let report = analyze(&log, &levels, &dict)
        .with_context(|| format!("analyzing {}", config.traces_path.display()))?;
    fs::create_dir_all(out)?;
    fs::write(out.join("report.json"), report.to_json())?;
    fs::write(out.join("report.txt"), report.summary())?;
    Ok(report)
}

pub fn server_state(config: &AppConfig) -> Result<AppState> {
    Ok(AppState::new(
        load_levels(&config.levels_dir)?,
        config.dictionary()?,
        config.traces_path.clone(),
    ))
}
