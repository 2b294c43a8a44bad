use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::agents::{is_frontier, reachable};
use crate::engine::{Action, InventoryEntry, ObservedState, Skill, WinCondition};
use crate::geom::Position;
use crate::rng::RngStream;
use crate::world::{Brand, ItemCategory, LevelId, Terrain, WeaponClass};

/// Quaff below this fraction of maximum health.
pub const QUAFF_BELOW: f64 = 0.4;

/// What the rulebot carries between decisions: staircases it has already
/// used or found closed, and where it stood when it last tried one.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RulebotMemory {
    pub used_stairs: BTreeSet<(LevelId, Position)>,
    pub closed_stairs: BTreeSet<(LevelId, Position)>,
    pub ignored_items: BTreeSet<(LevelId, Position)>,
    last_stair_try: Option<(LevelId, Position)>,
    last_pickup: Option<(LevelId, Position)>,
}

/// Would this weapon sever hydra heads and let more grow?
pub fn cuts_heads(entry: &InventoryEntry) -> bool {
    entry.weapon_class == Some(WeaponClass::Bladed) && entry.brand != Some(Brand::Fire)
}

fn hydra_weapon(obs: &ObservedState) -> Option<&InventoryEntry> {
    obs.inventory
        .iter()
        .filter(|e| e.category == ItemCategory::Weapon && !cuts_heads(e))
        .max_by_key(|e| (e.brand == Some(Brand::Fire), e.base_damage.unwrap_or(0), std::cmp::Reverse(e.slot)))
}

/// Fixed-priority heuristic player: heal, fight, loot, train, explore, then
/// take stairs.
pub fn rulebot_agent(obs: &ObservedState, mut memory: RulebotMemory, _rng: &mut RngStream) -> (Action, RulebotMemory) {
    let here = (obs.level, obs.player.position);
    if let Some(tried) = memory.last_stair_try.take() {
        if tried == here {
            memory.closed_stairs.insert(tried);
        } else {
            memory.used_stairs.insert(tried);
        }
    }
    if let Some(tried) = memory.last_pickup.take() {
        if tried == here && obs.visible_tile(here.1).is_some_and(|t| !t.items.is_empty()) {
            memory.ignored_items.insert(tried);
        }
    }
    let action = choose(obs, &mut memory);
    match action {
        Action::Descend | Action::Ascend => memory.last_stair_try = Some(here),
        Action::Pickup => memory.last_pickup = Some(here),
        _ => {}
    }
    (action, memory)
}

fn legal(obs: &ObservedState, action: &Action) -> bool {
    obs.legal_actions.contains(action)
}

fn choose(obs: &ObservedState, memory: &mut RulebotMemory) -> Action {
    let me = obs.player.position;
    let hp_fraction = obs.player.hp as f64 / obs.player.max_hp.max(1) as f64;
    if hp_fraction < QUAFF_BELOW {
        if let Some(potion) = obs.inventory.iter().find(|e| e.category == ItemCategory::Potion) {
            return Action::Quaff { slot: potion.slot };
        }
    }

    let adjacent = obs.monsters.iter().filter(|m| m.pos.chebyshev(me) == 1).min_by_key(|m| (m.hp, m.id));
    if let Some(target) = adjacent {
        if target.heads.is_some() && obs.wielded().is_none_or(cuts_heads) {
            if let Some(better) = hydra_weapon(obs) {
                return Action::Wield { slot: better.slot };
            }
        }
        if let Some(dir) = me.direction_to(target.pos) {
            return Action::Attack { dir };
        }
    }

    if legal(obs, &Action::Pickup) && !memory.ignored_items.contains(&(obs.level, me)) {
        return Action::Pickup;
    }

    let fighting = Action::SpendXp { skill: Skill::Fighting };
    if legal(obs, &fighting) {
        return fighting;
    }

    if obs.monsters.iter().any(|m| m.heads.is_some()) && obs.wielded().is_none_or(cuts_heads) {
        if let Some(better) = hydra_weapon(obs) {
            return Action::Wield { slot: better.slot };
        }
    }

    // With a monster in view, let it come rather than walking past it.
    if obs.monsters.iter().any(|m| m.pos.chebyshev(me) <= 3) {
        return Action::Wait;
    }

    let tiles = reachable(obs);
    let wanted_item = |p: Position| {
        !memory.ignored_items.contains(&(obs.level, p))
            && obs.remembered.get(p).is_some_and(|m| {
                m.items.iter().any(|i| i.category != ItemCategory::Orb || !obs.player.has_orb)
            })
    };
    let orb = tiles.iter().find(|(p, _)| {
        obs.remembered.get(*p).is_some_and(|m| m.items.iter().any(|i| i.category == ItemCategory::Orb))
    });
    let target = orb
        .or_else(|| tiles.iter().find(|(p, _)| *p != me && wanted_item(*p)))
        .or_else(|| tiles.iter().find(|(p, _)| is_frontier(obs, *p)))
        .map(|(p, _)| *p);
    if let Some(target) = target {
        if target != me {
            return Action::TravelTo { target };
        }
    }

    if obs.goal == WinCondition::KillAll {
        return Action::Wait;
    }
    let ascending = obs.player.has_orb;
    let (terrain, take) = if ascending {
        (Terrain::StairsUp, Action::Ascend)
    } else {
        (Terrain::StairsDown, Action::Descend)
    };
    let open = |p: Position| {
        obs.remembered.get(p).is_some_and(|m| m.terrain == terrain)
            && !memory.closed_stairs.contains(&(obs.level, p))
            && (ascending || !memory.used_stairs.contains(&(obs.level, p)))
    };
    if open(me) && legal(obs, &take) {
        return take;
    }
    if let Some((p, _)) = tiles.iter().find(|(p, _)| *p != me && open(*p)) {
        return Action::TravelTo { target: *p };
    }
    // Nothing left below: head back up to try another branch.
    if !ascending {
        let up = |p: Position| obs.remembered.get(p).is_some_and(|m| m.terrain == Terrain::StairsUp);
        if up(me) && legal(obs, &Action::Ascend) {
            return Action::Ascend;
        }
        if let Some((p, _)) = tiles.iter().find(|(p, _)| *p != me && up(*p)) {
            return Action::TravelTo { target: *p };
        }
    }
    Action::Wait
}
