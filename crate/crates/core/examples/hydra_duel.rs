//! Pits the rulebot against a hydra twice: once carrying only an axe, once
//! with a mace to switch to. Severed heads grow back, so the blunt weapon
//! should win far more often.
//!
//! cargo run --example hydra_duel -- [episodes]

use crawlbench::episode::GameSource;
use crawlbench::harness::{run_batch, AgentKind, RunOptions};
use crawlbench::scenario::builtin;

fn main() -> anyhow::Result<()> {
    let episodes: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(200);
    for name in ["hydra_axe", "hydra_mace"] {
        let source = GameSource::Scenario(builtin(name).expect("builtin scenario"));
        let batch = run_batch(AgentKind::Rulebot, &source, 1, episodes, &RunOptions::default(), true)?;
        let kills = batch.runs.iter().filter(|r| r.report.monsters_killed > 0).count();
        println!(
            "{name:<11} wins {:>6}  kill rate {:.3}  mean turns {:.1}",
            batch.aggregate.win_rate_text,
            kills as f64 / episodes as f64,
            batch.aggregate.mean_turns
        );
    }
    Ok(())
}
