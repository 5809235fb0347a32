use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use elimination_app::commands;
use elimination_app::play::SystemClock;
use elimination_app::AppConfig;
use elimination_core::simulation::BotKind;

#[derive(Parser)]
#[command(
    name = "elimination",
    version,
    about = "Generate, play and analyze Elimination word puzzles"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Frequency-ordered word list, one word per line
    #[arg(
        long,
        global = true,
        env = "ELIMINATION_DICT",
        default_value = "data/words.txt"
    )]
    dict: PathBuf,
    /// Words flagged as profanity
    #[arg(
        long,
        global = true,
        env = "ELIMINATION_PROFANITY",
        default_value = "data/profanity.txt"
    )]
    profanity: PathBuf,
    /// CSV level schedule replacing the built-in one
    #[arg(long, global = true, env = "ELIMINATION_SCHEDULE")]
    schedule: Option<PathBuf>,
    /// Directory holding level files and the manifest
    #[arg(
        long,
        global = true,
        env = "ELIMINATION_LEVELS",
        default_value = "levels"
    )]
    levels: PathBuf,
    /// Trace log (newline-delimited JSON)
    #[arg(
        long,
        global = true,
        env = "ELIMINATION_TRACES",
        default_value = "traces/traces.jsonl"
    )]
    traces: PathBuf,
    #[arg(long, global = true, env = "ELIMINATION_SEED", default_value_t = 42)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Generate all levels and a manifest
    Generate {
        /// Output directory (defaults to --levels)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Play a level in the terminal
    Play {
        #[arg(long, default_value_t = 1)]
        level: usize,
        #[arg(long, default_value = "local")]
        player: String,
    },
    /// Run bot players over every level and write a trace log
    Simulate {
        /// random, greedy-longest, greedy-shortest, naive or noisy:<skill>
        #[arg(long, value_delimiter = ',', default_value = "noisy:0.6")]
        bot: Vec<BotKind>,
        #[arg(long, default_value_t = 100)]
        runs: usize,
        /// Milliseconds a bot spends per elimination
        #[arg(long, default_value_t = 800)]
        delay_ms: u64,
    },
    /// Analyze the trace log
    Analyze {
        #[arg(long, default_value = "reports")]
        out: PathBuf,
    },
    /// Serve levels and accept traces over HTTP
    Serve {
        #[arg(long, env = "ELIMINATION_PORT", default_value_t = 8080)]
        port: u16,
    },
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let g = cli.global;
    let mut config = AppConfig {
        dictionary_path: g.dict,
        profanity_path: Some(g.profanity),
        schedule_path: g.schedule,
        levels_dir: g.levels,
        traces_path: g.traces,
        seed: g.seed,
        ..AppConfig::default()
    };
    match cli.command {
        Command::Generate { out } => {
            let out = out.unwrap_or_else(|| config.levels_dir.clone());
            let m = commands::generate(&config, &out)?;
            println!(
                "wrote {} levels to {} (seed {})",
                m.levels.len(),
                out.display(),
                m.seed
            );
        }
        Command::Play { level, player } => {
            let stdin = io::stdin();
            let r = commands::play(
                &config,
                level,
                &player,
                &SystemClock::new(),
                stdin.lock(),
                &mut io::stdout(),
            )?;
            println!(
                "trace appended to {} ({} events)",
                config.traces_path.display(),
                r.events.len()
            );
        }
        Command::Simulate {
            bot,
            runs,
            delay_ms,
        } => {
            let n = commands::simulate(&config, &bot, runs, delay_ms)?;
            println!(
                "simulated {n} sessions into {}",
                config.traces_path.display()
            );
        }
        Command::Analyze { out } => {
            let report = commands::analyze_traces(&config, &out)?;
            print!("{}", report.summary());
            println!("\nreport written to {}", out.display());
        }
        Command::Serve { port } => {
            config.port = port;
            let state = commands::server_state(&config)?;
            tokio::runtime::Runtime::new()?
                .block_on(elimination_app::server::serve(state, config.port))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
