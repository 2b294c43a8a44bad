//! Command-line front end behind the `crawlbench` binary.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::engine::observe;
use crate::episode::GameSource;
use crate::gateway::{serve, GatewayConfig};
use crate::geom::Position;
use crate::harness::{run_batch, run_episode, AgentKind, HarnessError, RunOptions};
use crate::pddl::{export_domain, item_name, parse_item_name, PddlGoal, ProblemExporter};
use crate::scenario::{builtin, parse_scenario, render_scenario};
use crate::world::WorldConfig;

#[derive(Debug, Parser)]
#[command(name = "crawlbench", version, about = "Roguelike benchmark environment for game-playing agents")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the line-delimited JSON gateway.
    Serve(ServeArgs),
    /// Play one episode and print its report.
    Play(PlayArgs),
    /// Play many episodes on consecutive seeds and print the aggregate.
    Batch(BatchArgs),
    /// Write the planning domain and the problem for a game's first observation.
    ExportPddl(ExportArgs),
    /// Scenario file tools.
    #[command(subcommand)]
    Scenario(ScenarioCommand),
}

#[derive(Debug, Args)]
pub struct GameArgs {
    #[arg(long)]
    pub seed: Option<u64>,
    /// Built-in scenario name or path to a `.scen` file. Without it a dungeon is generated.
    #[arg(long)]
    pub scenario: Option<String>,
    /// World configuration TOML for dungeon games.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub game: GameArgs,
    #[arg(long, default_value = "rulebot")]
    pub agent: AgentKind,
    /// Gateway address; plays through it instead of in-process.
    #[arg(long)]
    pub remote: Option<String>,
    #[arg(long)]
    pub turn_limit: Option<u64>,
    /// Directory for episode logs.
    #[arg(long, default_value = "runs")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PlayArgs {
    #[command(flatten)]
    pub run: RunArgs,
}

#[derive(Debug, Args)]
pub struct BatchArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, default_value_t = 10)]
    pub episodes: usize,
    /// Run episodes one after another instead of in parallel.
    #[arg(long)]
    pub serial: bool,
    /// Also write the aggregate as CSV to this file.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long, default_value = "127.0.0.1:7878")]
    pub bind: String,
    #[arg(long, default_value_t = 256)]
    pub max_sessions: usize,
    /// Directory searched for `.scen` files named in hello messages.
    #[arg(long)]
    pub scenario_dir: Option<PathBuf>,
    #[arg(long, default_value = "runs/served")]
    pub log_dir: PathBuf,
    /// Default world configuration TOML for dungeon games.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub game: GameArgs,
    /// `orb`, `runes=<n>`, `at=<row>,<col>` or `item=<name>`. Defaults to the
    /// orb when it is in view, otherwise the nearest unexplored tile.
    #[arg(long)]
    pub goal: Option<String>,
    #[arg(long, default_value = "pddl")]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum ScenarioCommand {
    /// Parse scenario files and report the first error in each.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Print the canonical form of each valid file.
        #[arg(long)]
        render: bool,
    },
}

/// Failures mapped to distinct exit codes.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("protocol error: {0}")]
    Protocol(String),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Protocol(_) => 3,
            CliError::Other(_) => 1,
        }
    }
}

impl From<HarnessError> for CliError {
    fn from(e: HarnessError) -> Self {
        match e {
            HarnessError::Source(e) => CliError::Config(e.to_string()),
            HarnessError::Protocol(m) => CliError::Protocol(m),
            HarnessError::Io(e) => CliError::Protocol(e.to_string()),
            other => CliError::Other(other.to_string()),
        }
    }
}

fn config_error(e: impl std::fmt::Display) -> CliError {
    CliError::Config(e.to_string())
}

fn load_world(path: Option<&Path>) -> Result<WorldConfig, CliError> {
    match path {
        Some(p) => WorldConfig::load(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display()))),
        None => Ok(WorldConfig::default()),
    }
}

/// Resolves `--scenario` (built-in name or file) or `--config` to a game source.
pub fn game_source(args: &GameArgs) -> Result<GameSource, CliError> {
    match &args.scenario {
        Some(name) => {
            if let Some(spec) = builtin(name) {
                return Ok(GameSource::Scenario(spec));
            }
            let path = Path::new(name);
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("scenario `{name}`: not a built-in and unreadable: {e}")))?;
            let spec = parse_scenario(&text).map_err(|e| CliError::Config(format!("{name}: {e}")))?;
            Ok(GameSource::Scenario(spec))
        }
        None => Ok(GameSource::Dungeon(load_world(args.config.as_deref())?)),
    }
}

fn run_options(run: &RunArgs) -> RunOptions {
    RunOptions { turn_limit: run.turn_limit, remote: run.remote.clone(), out_dir: Some(run.out.clone()) }
}

fn play(args: &PlayArgs) -> Result<(), CliError> {
    let source = game_source(&args.run.game)?;
    let seed = args.run.game.seed.unwrap_or_else(|| source.default_seed());
    let run = run_episode(args.run.agent, &source, seed, &run_options(&args.run))?;
    println!("{}", serde_json::to_string_pretty(&run.report).map_err(|e| CliError::Other(e.to_string()))?);
    if let Some(path) = &run.log_path {
        println!("log: {}", path.display());
    }
    Ok(())
}

fn batch(args: &BatchArgs) -> Result<(), CliError> {
    if args.episodes == 0 {
        return Err(CliError::Config("--episodes must be at least 1".into()));
    }
    let source = game_source(&args.run.game)?;
    let seed0 = args.run.game.seed.unwrap_or_else(|| source.default_seed());
    let result = run_batch(args.run.agent, &source, seed0, args.episodes, &run_options(&args.run), !args.serial)?;
    print!("{}", result.aggregate.to_table());
    if let Some(csv) = &args.csv {
        std::fs::write(csv, result.aggregate.to_csv()).map_err(|e| CliError::Other(e.to_string()))?;
        println!("csv: {}", csv.display());
    }
    for run in &result.runs {
        if let Some(path) = &run.log_path {
            println!("log: {}", path.display());
        }
    }
    Ok(())
}

fn serve_cmd(args: &ServeArgs) -> Result<(), CliError> {
    std::fs::create_dir_all(&args.log_dir).map_err(config_error)?;
    let config = GatewayConfig {
        max_sessions: args.max_sessions,
        scenario_dir: args.scenario_dir.clone(),
        log_dir: Some(args.log_dir.clone()),
        world: load_world(args.config.as_deref())?,
    };
    let handle = serve(&args.bind, config).map_err(|e| CliError::Config(format!("cannot bind {}: {e}", args.bind)))?;
    println!("listening on {}", handle.addr());
    println!("logs: {}", args.log_dir.display());
    handle.wait();
    Ok(())
}

/// Parses a `--goal` value.
pub fn parse_goal(text: &str) -> Result<PddlGoal, String> {
    let bad = || format!("bad goal `{text}` (expected orb, runes=<n>, at=<row>,<col> or item=<name>)");
    if text == "orb" {
        return Ok(PddlGoal::HasOrb);
    }
    let (key, value) = text.split_once('=').ok_or_else(bad)?;
    match key {
        "runes" => value.parse().map(|count| PddlGoal::HasRunes { count }).map_err(|_| bad()),
        "at" => {
            let (r, c) = value.split_once(',').ok_or_else(bad)?;
            let row = r.trim().parse().map_err(|_| bad())?;
            let col = c.trim().parse().map_err(|_| bad())?;
            Ok(PddlGoal::At { pos: Position::new(row, col) })
        }
        "item" => parse_item_name(value).map(|item| PddlGoal::Holding { item }).ok_or_else(bad),
        _ => Err(bad()),
    }
}

fn export(args: &ExportArgs) -> Result<(), CliError> {
    let source = game_source(&args.game)?;
    let seed = args.game.seed.unwrap_or_else(|| source.default_seed());
    let game = source.new_game(seed).map_err(config_error)?;
    let obs = observe(&game);
    let goal = match &args.goal {
        Some(text) => parse_goal(text).map_err(CliError::Config)?,
        None => crate::harness::default_goal(&obs)
            .ok_or_else(|| CliError::Config("no default goal: nothing left to explore".into()))?,
    };
    let problem = ProblemExporter::new().export(&obs, goal).map_err(config_error)?;
    std::fs::create_dir_all(&args.out).map_err(config_error)?;
    let domain_path = args.out.join("domain.pddl");
    let problem_path = args.out.join("problem.pddl");
    std::fs::write(&domain_path, export_domain()).map_err(config_error)?;
    std::fs::write(&problem_path, problem).map_err(config_error)?;
    println!("domain: {}", domain_path.display());
    println!("problem: {}", problem_path.display());
    for item in obs.remembered.iter().flat_map(|(_, m)| m.items.iter()) {
        println!("  {} = {}", item_name(item.id), item.kind);
    }
    Ok(())
}

fn scenario_check(files: &[PathBuf], render: bool) -> Result<(), CliError> {
    let mut failed = 0;
    for file in files {
        let text = match std::fs::read_to_string(file) {
            Ok(t) => t,
            Err(e) => {
                println!("{}: {e}", file.display());
                failed += 1;
                continue;
            }
        };
        match parse_scenario(&text) {
            Ok(spec) => {
                println!("{}: ok ({}, {}x{})", file.display(), spec.name, spec.rows(), spec.cols());
                if render {
                    print!("{}", render_scenario(&spec));
                }
            }
            Err(e) => {
                println!("{}:{}:{}: {}", file.display(), e.line, e.col, e.message);
                failed += 1;
            }
        }
    }
    if failed > 0 {
        return Err(CliError::Config(format!("{failed} of {} scenario files invalid", files.len())));
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Serve(args) => serve_cmd(args),
        Command::Play(args) => play(args),
        Command::Batch(args) => batch(args),
        Command::ExportPddl(args) => export(args),
        Command::Scenario(ScenarioCommand::Check { files, render }) => scenario_check(files, *render),
    }
}

/// Entry point of the binary.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("crawlbench: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
