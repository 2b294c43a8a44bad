//! Plays a built-in scenario with one of the baseline agents and prints the
//! episode report.
//!
//! cargo run --example play_scenario -- [scenario] [agent] [seed]

use crawlbench::episode::GameSource;
use crawlbench::harness::{run_episode, AgentKind, RunOptions};
use crawlbench::scenario::{builtin, builtin_names};

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "open_room".into());
    let agent: AgentKind = args.next().as_deref().unwrap_or("rulebot").parse().map_err(anyhow::Error::msg)?;
    let Some(spec) = builtin(&name) else {
        anyhow::bail!("unknown scenario `{name}`; built-ins are {}", builtin_names().collect::<Vec<_>>().join(", "));
    };
    let source = GameSource::Scenario(spec);
    let seed = match args.next() {
        Some(s) => s.parse()?,
        None => source.default_seed(),
    };
    let run = run_episode(agent, &source, seed, &RunOptions::default())?;
    println!("{name} with {agent}, seed {seed}");
    println!("{}", serde_json::to_string_pretty(&run.report)?);
    Ok(())
}
