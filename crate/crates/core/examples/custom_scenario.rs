//! Parses a hand-written scenario, reports any error with its line and
//! column, then plays it with the planner.
//!
//! cargo run --example custom_scenario -- [file.scen]

use crawlbench::episode::GameSource;
use crawlbench::harness::{run_episode, AgentKind, RunOptions};
use crawlbench::scenario::{parse_scenario, render_scenario};

const DEFAULT: &str = "\
name: detour
seed: 7
turn_limit: 120
win: reach_orb
inventory: dagger
map:
###############
#@....#.......#
#.....#..r....#
#.....#.......#
#.............#
#.....#.....0.#
###############
";

fn main() -> anyhow::Result<()> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => DEFAULT.to_string(),
    };
    let spec = match parse_scenario(&text) {
        Ok(spec) => spec,
        Err(e) => anyhow::bail!("scenario rejected: {e}"),
    };
    println!("{}", render_scenario(&spec));
    let source = GameSource::Scenario(spec);
    let run = run_episode(AgentKind::Planner, &source, source.default_seed(), &RunOptions::default())?;
    let r = &run.report;
    println!("planner: won {} in {} turns, {} monsters killed", r.won, r.turns, r.monsters_killed);
    Ok(())
}
