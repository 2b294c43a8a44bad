//! Runs a parallel batch of dungeon games and prints the aggregate table.
//!
//! cargo run --release --example batch_metrics -- [agent] [episodes] [seed0]

use crawlbench::episode::GameSource;
use crawlbench::harness::{run_batch, AgentKind, RunOptions};
use crawlbench::world::WorldConfig;

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let agent: AgentKind = args.next().as_deref().unwrap_or("random").parse().map_err(anyhow::Error::msg)?;
    let episodes: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(20);
    let seed0: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);
    let source = GameSource::Dungeon(WorldConfig::default());
    let started = std::time::Instant::now();
    let batch = run_batch(agent, &source, seed0, episodes, &RunOptions::default(), true)?;
    println!("{agent}: {episodes} games from seed {seed0} in {:.1?}", started.elapsed());
    print!("{}", batch.aggregate.to_table());
    Ok(())
}
