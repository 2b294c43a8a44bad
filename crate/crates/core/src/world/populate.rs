use std::sync::Arc;

use super::catalog::{Item, ItemSpec, Monster, MonsterSpec, SpecIndex};
use super::config::DungeonConfig;
use super::generate::place_mandated;
use super::layout::LevelDescriptor;
use super::level::LevelMap;
use crate::geom::Position;
use crate::rng::RngStream;

/// Monsters never spawn this close (Chebyshev) to a staircase.
pub const STAIR_SAFE_RADIUS: u32 = 2;

fn weighted_item<'a>(pool: &'a [Arc<ItemSpec>], rng: &mut RngStream) -> Option<&'a Arc<ItemSpec>> {
    let total: u64 = pool.iter().map(|s| s.weight as u64).sum();
    if total == 0 {
        return None;
    }
    let mut roll = rng.below(total);
    for spec in pool {
        if roll < spec.weight as u64 {
            return Some(spec);
        }
        roll -= spec.weight as u64;
    }
    None
}

/// Scatters monsters and items over free passable tiles, then tops up the
/// mandated rune/orb. Each free tile independently receives a monster with
/// probability `monster_density / 100` and an item with probability
/// `item_density / 100`, so expected counts scale with the passable area.
pub fn populate_level(
    mut level: LevelMap,
    descriptor: &LevelDescriptor,
    specs: &SpecIndex,
    config: &DungeonConfig,
    rng: &mut RngStream,
) -> LevelMap {
    let species: Vec<Arc<MonsterSpec>> = specs
        .monsters
        .values()
        .filter(|m| m.min_depth <= descriptor.depth)
        .cloned()
        .collect();
    let item_pool: Vec<Arc<ItemSpec>> =
        specs.items.values().filter(|i| i.weight > 0 && i.takes_slot()).cloned().collect();
    let p_monster = (config.monster_density / 100.0).min(1.0);
    let p_item = (config.item_density / 100.0).min(1.0);
    let stairs: Vec<Position> = level.stairs.iter().map(|s| s.position).collect();

    let free: Vec<Position> = level
        .passable_positions()
        .filter(|p| !level.terrain(*p).is_stairs())
        .filter(|p| level.tile(*p).is_some_and(|t| t.occupant.is_none()))
        .collect();

    for p in free {
        if p_monster > 0.0
            && rng.chance(p_monster)
            && !species.is_empty()
            && stairs.iter().all(|s| s.chebyshev(p) > STAIR_SAFE_RADIUS)
        {
            let spec = species[rng.index(species.len())].clone();
            let id = level.next_actor_id();
            level.place_monster(Monster::spawn(id, spec, p));
        }
        if p_item > 0.0 && rng.chance(p_item) {
            if let Some(spec) = weighted_item(&item_pool, rng) {
                let id = level.next_item_id();
                level.place_item(p, Item { id, spec: spec.clone() });
            }
        }
    }
    place_mandated(&mut level, descriptor, rng);
    level
}
