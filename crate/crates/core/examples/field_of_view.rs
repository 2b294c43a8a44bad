//! Shows what the player sees and remembers on the first dungeon level, then
//! again after a few random steps.
//!
//! cargo run --example field_of_view -- [seed] [steps]

use crawlbench::engine::{observe, step, GameState, ObservedState, FOV_RADIUS};
use crawlbench::harness::random_agent;
use crawlbench::rng::RngStream;
use crawlbench::world::WorldConfig;

/// `@` for the player, terrain glyphs where visible, `:` where only
/// remembered and blank where unknown.
fn draw(game: &GameState, obs: &ObservedState) {
    let level = game.current_level();
    let fov = game.current_fov();
    for r in 0..level.rows {
        let row: String = (0..level.cols)
            .map(|c| {
                let p = crawlbench::geom::Position::new(r, c);
                if p == obs.player.position {
                    '@'
                } else if let Some(m) = obs.monsters.iter().find(|m| m.pos == p) {
                    m.glyph
                } else if fov.contains(p) {
                    level.terrain(p).glyph()
                } else if obs.remembered.contains(p) {
                    ':'
                } else {
                    ' '
                }
            })
            .collect();
        println!("{row}");
    }
}

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);
    let steps: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(40);
    let mut game = GameState::new_dungeon(seed, &WorldConfig::default())?;
    let obs = observe(&game);
    println!("radius {FOV_RADIUS}: {} tiles visible at spawn", game.current_fov().len());
    draw(&game, &obs);

    let mut rng = RngStream::new(seed, 1);
    for _ in 0..steps {
        let (action, ()) = random_agent(&observe(&game), (), &mut rng);
        if step(&mut game, &action).is_err() {
            break;
        }
    }
    let obs = observe(&game);
    println!("\nafter {steps} random actions: {} visible, {} remembered", game.current_fov().len(), obs.remembered.len());
    draw(&game, &obs);
    Ok(())
}
