use std::io;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::agents::{Agent, AgentKind};
use crate::engine::{Action, EngineError};
use crate::episode::{Episode, EpisodeError, GameSource, SourceError};
use crate::gateway::protocol::{ErrorPayload, GameOverPayload, HelloPayload, StatePayload};
use crate::gateway::{Connection, ErrorCode, MessageType, RemoteConnection, Role};
use crate::metrics::{aggregate, episode_metrics, AggregateReport, EpisodeHistory, MetricsError, MetricsReport};
use crate::scenario::render_scenario;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Source(#[from] SourceError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("protocol: {0}")]
    Protocol(String),
}

/// How to run episodes. Without `remote` games run in-process.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub turn_limit: Option<u64>,
    pub remote: Option<String>,
    /// Directory receiving one `.jsonl` log per episode.
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct EpisodeRun {
    pub seed: u64,
    pub history: EpisodeHistory,
    pub report: MetricsReport,
    pub log_path: Option<PathBuf>,
}

/// Plays one episode in-process and returns the sealed history.
pub fn run_local(
    agent: &mut dyn Agent,
    source: &GameSource,
    seed: u64,
    turn_limit: Option<u64>,
) -> Result<EpisodeHistory, HarnessError> {
    let mut episode: Episode = source.start(seed, agent.name(), turn_limit)?;
    while !episode.is_over() {
        let action = agent.decide(episode.observation());
        match episode.act(&action, |_, _, _, _| {}) {
            Ok(_) => {}
            // An impossible macro costs nothing; the agent waits instead.
            Err(EpisodeError::Macro(_)) => {
                episode.act(&Action::Wait, |_, _, _, _| {}).map_err(episode_error)?;
            }
            Err(e) => return Err(episode_error(e)),
        }
    }
    Ok(episode.into_history())
}

fn episode_error(e: EpisodeError) -> HarnessError {
    match e {
        EpisodeError::Engine(e) => HarnessError::Engine(e),
        other => HarnessError::Protocol(other.to_string()),
    }
}

pub fn hello_for(source: &GameSource, agent: &str, seed: u64, turn_limit: Option<u64>) -> HelloPayload {
    let (scenario_text, config) = match source {
        GameSource::Scenario(spec) => (Some(render_scenario(spec)), None),
        GameSource::Dungeon(world) => (None, Some(world.to_toml())),
    };
    HelloPayload {
        role: Role::Agent,
        agent: Some(agent.to_string()),
        seed: Some(seed),
        scenario: None,
        scenario_text,
        config,
        turn_limit,
        game: None,
    }
}

/// Plays one episode against a gateway over any connection. The history is
/// the server's own log, delivered with `game_over`.
pub fn run_over(
    conn: &mut impl Connection,
    agent: &mut dyn Agent,
    source: &GameSource,
    seed: u64,
    turn_limit: Option<u64>,
) -> Result<EpisodeHistory, HarnessError> {
    conn.send(MessageType::Hello, &hello_for(source, agent.name(), seed, turn_limit))?;
    let protocol = |e: serde_json::Error| HarnessError::Protocol(e.to_string());
    loop {
        let msg = conn.recv()?;
        match msg.kind {
            MessageType::Ack | MessageType::MacroProgress | MessageType::Chat => {}
            MessageType::State => {
                let state: StatePayload = msg.payload_as().map_err(protocol)?;
                if !state.over {
                    let action = agent.decide(&state.observation);
                    conn.send(MessageType::Action, &action)?;
                }
            }
            MessageType::Error => {
                let err: ErrorPayload = msg.payload_as().map_err(protocol)?;
                if err.code == ErrorCode::Macro {
                    conn.send(MessageType::Action, &Action::Wait)?;
                } else {
                    return Err(HarnessError::Protocol(format!("{:?}: {}", err.code, err.message)));
                }
            }
            MessageType::GameOver => {
                let over: GameOverPayload = msg.payload_as().map_err(protocol)?;
                return Ok(EpisodeHistory::from_jsonl(&over.history)?);
            }
            other => return Err(HarnessError::Protocol(format!("unexpected {other:?} message"))),
        }
    }
}

/// File name for an episode log.
pub fn log_file_name(source: &GameSource, agent: &str, seed: u64) -> String {
    format!("{}_{agent}_{seed}.jsonl", source.name())
}

/// Runs one episode of a fresh `kind` agent seeded with `seed`.
pub fn run_episode(kind: AgentKind, source: &GameSource, seed: u64, opts: &RunOptions) -> Result<EpisodeRun, HarnessError> {
    let mut agent = kind.build(seed);
    let history = match &opts.remote {
        Some(addr) => run_over(&mut RemoteConnection::connect(addr.as_str())?, agent.as_mut(), source, seed, opts.turn_limit)?,
        None => run_local(agent.as_mut(), source, seed, opts.turn_limit)?,
    };
    let report = episode_metrics(&history)?;
    let log_path = match &opts.out_dir {
        Some(dir) => Some(write_log(dir, &log_file_name(source, kind.name(), seed), &history)?),
        None => None,
    };
    Ok(EpisodeRun { seed, history, report, log_path })
}

fn write_log(dir: &Path, name: &str, history: &EpisodeHistory) -> Result<PathBuf, HarnessError> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    history.write_to(&path)?;
    Ok(path)
}

#[derive(Debug, Clone)]
pub struct BatchRun {
    pub runs: Vec<EpisodeRun>,
    pub aggregate: AggregateReport,
}

/// Runs `episodes` games on seeds `seed0, seed0 + 1, ...`. Results come back
/// in seed order whether or not they ran in parallel.
pub fn run_batch(
    kind: AgentKind,
    source: &GameSource,
    seed0: u64,
    episodes: usize,
    opts: &RunOptions,
    parallel: bool,
) -> Result<BatchRun, HarnessError> {
    let seeds: Vec<u64> = (0..episodes as u64).map(|i| seed0.wrapping_add(i)).collect();
    let runs: Vec<EpisodeRun> = if parallel {
        seeds.par_iter().map(|&s| run_episode(kind, source, s, opts)).collect::<Result<_, _>>()?
    } else {
        seeds.iter().map(|&s| run_episode(kind, source, s, opts)).collect::<Result<_, _>>()?
    };
    let reports: Vec<MetricsReport> = runs.iter().map(|r| r.report.clone()).collect();
    let aggregate = aggregate(&reports)?;
    Ok(BatchRun { runs, aggregate })
}
