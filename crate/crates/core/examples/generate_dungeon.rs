//! Generates a dungeon from a seed and prints its level tree and the first
//! level's terrain.
//!
//! cargo run --example generate_dungeon -- [seed] [config.toml]

use crawlbench::engine::GameState;
use crawlbench::world::{validate_connectivity, WorldConfig};

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);
    let world = match args.next() {
        Some(path) => WorldConfig::from_toml(&std::fs::read_to_string(path)?)?,
        None => WorldConfig::default(),
    };
    let game = GameState::new_dungeon(seed, &world)?;
    println!("seed {seed}, {} levels, config {}", game.levels.len(), world.config_hash());
    for (d, level) in game.descriptors.iter().zip(&game.levels) {
        let marks = [(d.rune, "rune"), (d.orb, "orb")].iter().filter(|(m, _)| *m).map(|(_, s)| *s).collect::<Vec<_>>();
        println!(
            "{:<9} depth {:>2}  {:>3} monsters  {:>3} items  connected {}  {}",
            d.name,
            d.depth,
            level.monsters.len(),
            level.positions().map(|p| level.items_at(p).count()).sum::<usize>(),
            validate_connectivity(level).is_ok(),
            marks.join(" ")
        );
    }
    let first = game.current_level();
    println!("\n{} with the player at {:?}", first.name, game.player.position);
    for row in first.render_terrain() {
        println!("{row}");
    }
    Ok(())
}
