use serde::{Deserialize, Serialize};

use super::combat::{apply_hydra_rule, monster_attack, monster_defense, resolve_melee, AttackProfile, DefenseProfile};
use super::event::{Event, RefusalReason, StatusKind, Who};
use super::fov::FieldOfView;
use super::observe::{observe_with, ObservedState};
use super::player::spend_experience;
use super::rules::{self, AUT_PER_TURN};
use super::shifting::mutate_unseen;
use super::state::{GameState, GameStatus, WinCondition};
use super::{Action, EngineError};
use crate::geom::{Direction, Position};
use crate::world::{ActorId, Brand, Item, ItemCategory, LevelMap, StairKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepResult {
    pub events: Vec<Event>,
    pub messages: Vec<String>,
    pub observation: ObservedState,
    pub status: GameStatus,
}

type Outcome = Result<Vec<Event>, RefusalReason>;

/// Advances the game by one primitive player action.
///
/// Refused actions still cost a full action and give monsters their turns.
/// A terminated game and macro actions are errors and leave the state untouched.
pub fn step(game: &mut GameState, action: &Action) -> Result<StepResult, EngineError> {
    if !game.is_running() {
        return Err(EngineError::Terminal);
    }
    if action.is_macro() {
        return Err(EngineError::MacroNotPrimitive(action.name().to_string()));
    }
    let cost = game.player.next_action_cost();
    let before = game.clock_aut;
    let fov = game.current_fov();

    let mut events = match player_action(game, action, &fov) {
        Ok(events) => events,
        Err(reason) => vec![Event::Refused { reason }],
    };
    game.player.actions_taken += 1;
    game.clock_aut += cost;
    check_win(game, &mut events);

    if game.is_running() {
        monster_turns(game, cost, &mut events);
    }
    let turns_crossed = game.clock_aut / AUT_PER_TURN - before / AUT_PER_TURN;
    for _ in 0..turns_crossed {
        if !game.is_running() {
            break;
        }
        tick_statuses(game, &mut events);
        check_win(game, &mut events);
        shift_current_level(game);
    }

    let fov = game.current_fov();
    game.remember(&fov);
    let messages: Vec<String> = events.iter().map(describe).collect();
    game.last_messages = messages.clone();
    let observation = observe_with(game, &fov);
    Ok(StepResult { events, messages, observation, status: game.status })
}

fn player_action(game: &mut GameState, action: &Action, fov: &FieldOfView) -> Outcome {
    match action {
        Action::Move { dir } => move_player(game, *dir),
        Action::Attack { dir } => {
            let target = game.player.position.step(*dir).ok_or(RefusalReason::NoTarget)?;
            let id = game.current_level().occupant(target).ok_or(RefusalReason::NoTarget)?;
            let weapon = game.player.wielded_item().cloned();
            Ok(player_strike(game, id, weapon.as_ref()))
        }
        Action::Pickup => pickup(game),
        Action::Descend => take_stairs(game, StairKind::Down),
        Action::Ascend => take_stairs(game, StairKind::Up),
        Action::Quaff { slot } => apply_item_use(game, *slot, None, fov),
        Action::Read { slot, target } => apply_item_use(game, *slot, *target, fov),
        Action::Wield { slot } => {
            let item = game.player.item(*slot).ok_or(RefusalReason::EmptySlot)?;
            if !item.spec.is_weapon() {
                return Err(RefusalReason::WrongItem);
            }
            let id = item.id;
            game.player.wielded = Some(*slot);
            Ok(vec![Event::Wielded { item: id }])
        }
        Action::SpendXp { skill } => match spend_experience(&mut game.player, *skill) {
            Ok(value) => Ok(vec![Event::Leveled { skill: *skill, value }]),
            Err(EngineError::SkillCapped(_)) => Err(RefusalReason::SkillCapped),
            Err(_) => Err(RefusalReason::NotEnoughXp),
        },
        Action::Wait => Ok(Vec::new()),
        Action::Fire { target } => fire(game, *target, fov),
        Action::TravelTo { .. } | Action::Throw { .. } => unreachable!("macros rejected above"),
    }
}

fn move_player(game: &mut GameState, dir: Direction) -> Outcome {
    let level = game.current_level();
    let from = game.player.position;
    let to = from.step(dir).filter(|p| level.in_bounds(*p)).ok_or(RefusalReason::Blocked)?;
    if level.occupant(to).is_some() {
        return Err(RefusalReason::Occupied);
    }
    if !level.is_passable(to) {
        return Err(if level.is_opaque(to) { RefusalReason::Blocked } else { RefusalReason::NotPassable });
    }
    game.player.position = to;
    Ok(vec![Event::Moved { from, to }])
}

/// Player hits monster `id` with `weapon` (melee or thrown).
fn player_strike(game: &mut GameState, id: ActorId, weapon: Option<&Item>) -> Vec<Event> {
    let level_idx = game.player.level.0 as usize;
    let monster = game.levels[level_idx].monsters[&id].clone();
    let profile = AttackProfile {
        accuracy: game.player.accuracy(),
        base_damage: weapon.and_then(|w| w.spec.base_damage).unwrap_or(rules::UNARMED_DAMAGE),
        strength_bonus: game.player.strength_bonus(),
    };
    let outcome = resolve_melee(profile, monster_defense(&monster), &mut game.rngs.combat);
    if !outcome.hit {
        return vec![Event::Missed { attacker: Who::Player, target: Who::Monster(id) }];
    }
    let brand = weapon.and_then(|w| w.spec.brand);
    let damage = outcome.damage + if brand == Some(Brand::Fire) { rules::FIRE_BONUS_DAMAGE } else { 0 };
    let mut events = vec![Event::Hit { attacker: Who::Player, target: Who::Monster(id), damage }];
    if damage >= monster.hp {
        events.push(kill(game, id));
        return events;
    }
    let mut monster = monster;
    monster.hp -= damage;
    if monster.spec.is_hydra() {
        let heads = monster.heads;
        monster = apply_hydra_rule(monster, weapon.map(|w| &*w.spec)).expect("hydra flag checked");
        if monster.heads != heads {
            events.push(Event::HeadsGrew { actor: id, heads: monster.heads.unwrap_or(0) });
        }
    }
    match brand {
        Some(Brand::Venom) => {
            monster.status.poisoned = rules::VENOM_TURNS;
            events.push(Event::StatusApplied { actor: id, status: StatusKind::Poisoned, turns: rules::VENOM_TURNS });
        }
        Some(Brand::Frost) => {
            monster.status.slowed = rules::FROST_TURNS;
            events.push(Event::StatusApplied { actor: id, status: StatusKind::Slowed, turns: rules::FROST_TURNS });
        }
        _ => {}
    }
    game.levels[level_idx].monsters.insert(id, monster);
    events
}

fn kill(game: &mut GameState, id: ActorId) -> Event {
    let monster = game.current_level_mut().remove_monster(id).expect("monster on level");
    let xp = monster.spec.xp_value;
    game.player.xp_pool += xp;
    game.player.xp_earned += xp;
    Event::Killed { actor: id, species: monster.spec.id.clone(), xp }
}

fn pickup(game: &mut GameState) -> Outcome {
    let here = game.player.position;
    let level_idx = game.player.level.0 as usize;
    let items = game.levels[level_idx].take_items(here);
    if items.is_empty() {
        return Err(RefusalReason::NothingHere);
    }
    let mut events = Vec::new();
    let mut left = Vec::new();
    for item in items {
        let (id, kind) = (item.id, item.spec.id.clone());
        match item.spec.category {
            ItemCategory::Rune => {
                game.player.runes_held.insert(id);
            }
            ItemCategory::Orb => game.player.has_orb = true,
            _ => {
                if game.player.free_slot().is_none() {
                    left.push(item);
                    continue;
                }
                game.player.add_item(item);
            }
        }
        events.push(Event::PickedUp { item: id, kind });
    }
    for item in left {
        game.levels[level_idx].place_item(here, item);
    }
    if events.is_empty() {
        return Err(RefusalReason::InventoryFull);
    }
    Ok(events)
}

fn take_stairs(game: &mut GameState, kind: StairKind) -> Outcome {
    let here = game.player.position;
    let from = game.player.level;
    let stair = game.current_level().stair_at(here).filter(|s| s.kind == kind).ok_or(RefusalReason::NotOnStairs)?;
    let Some(dest) = stair.destination else {
        if kind == StairKind::Up && game.win == WinCondition::OrbExit {
            if !game.player.has_orb {
                return Err(RefusalReason::NoOrb);
            }
            game.status = GameStatus::Won;
            return Ok(vec![Event::Won]);
        }
        return Err(RefusalReason::NoDestination);
    };
    if kind == StairKind::Down && game.is_zot(dest) && game.player.runes_held.len() < rules::RUNES_FOR_ZOT {
        return Err(RefusalReason::NeedRunes);
    }
    let back = match kind {
        StairKind::Down => StairKind::Up,
        StairKind::Up => StairKind::Down,
    };
    let target = game.level(dest);
    let arrival = target
        .stairs
        .iter()
        .find(|s| s.kind == back && s.destination == Some(from))
        .or_else(|| target.stairs.iter().find(|s| s.kind == back))
        .map(|s| s.position)
        .or_else(|| target.passable_positions().next())
        .ok_or(RefusalReason::NoDestination)?;
    let arrival = nearest_free(target, arrival).ok_or(RefusalReason::Occupied)?;
    game.player.level = dest;
    game.player.position = arrival;
    for monster in game.current_level_mut().monsters.values_mut() {
        monster.energy = 0;
    }
    Ok(vec![Event::LevelChanged { from, to: dest }])
}

/// Closest passable tile to `p` without a monster, by breadth-first order.
fn nearest_free(level: &LevelMap, p: Position) -> Option<Position> {
    let cols = level.cols as usize;
    let mut seen = vec![false; level.rows as usize * cols];
    let mut queue = std::collections::VecDeque::from([p]);
    seen[p.row as usize * cols + p.col as usize] = true;
    while let Some(q) = queue.pop_front() {
        if level.is_passable(q) && level.occupant(q).is_none() {
            return Some(q);
        }
        for (_, n) in level.neighbours8(q) {
            let i = n.row as usize * cols + n.col as usize;
            if !seen[i] && level.is_passable(n) {
                seen[i] = true;
                queue.push_back(n);
            }
        }
    }
    None
}

/// Uses the consumable in `slot`. Curing heals; blinking teleports to a
/// visible, passable, empty `target`. A refused use keeps the item.
pub fn apply_item_use(game: &mut GameState, slot: usize, target: Option<Position>, fov: &FieldOfView) -> Outcome {
    let item = game.player.item(slot).ok_or(RefusalReason::EmptySlot)?;
    let (id, kind) = (item.id, item.spec.id.clone());
    let mut events = Vec::new();
    match item.spec.category {
        ItemCategory::Potion => {
            let healed = (game.player.hp + rules::CURING_HP).min(game.player.max_hp) - game.player.hp;
            game.player.hp += healed;
            events.push(Event::Healed { amount: healed });
        }
        ItemCategory::Scroll => {
            let to = target.ok_or(RefusalReason::NeedTarget)?;
            if !fov.contains(to) {
                return Err(RefusalReason::NotVisible);
            }
            let level = game.current_level();
            if !level.is_passable(to) {
                return Err(RefusalReason::NotPassable);
            }
            if level.occupant(to).is_some() || to == game.player.position {
                return Err(RefusalReason::Occupied);
            }
            let from = game.player.position;
            game.player.position = to;
            events.push(Event::Blinked { from, to });
        }
        _ => return Err(RefusalReason::WrongItem),
    }
    game.player.remove_item(slot);
    events.insert(0, Event::Consumed { item: id, kind });
    Ok(events)
}

/// Releases the wielded weapon at `target`. Any monster there is struck
/// with the melee formula; the weapon lands on the target tile.
fn fire(game: &mut GameState, target: Position, fov: &FieldOfView) -> Outcome {
    let slot = game.player.wielded.ok_or(RefusalReason::NothingWielded)?;
    if game.player.position.chebyshev(target) > rules::THROW_RANGE || target == game.player.position {
        return Err(RefusalReason::OutOfRange);
    }
    if !fov.contains(target) {
        return Err(RefusalReason::NotVisible);
    }
    if !game.current_level().is_passable(target) {
        return Err(RefusalReason::NotPassable);
    }
    let item = game.player.remove_item(slot).expect("wielded slot holds an item");
    let mut events = vec![Event::Thrown { item: item.id, target }];
    if let Some(id) = game.current_level().occupant(target) {
        events.extend(player_strike(game, id, Some(&item)));
    }
    game.current_level_mut().place_item(target, item);
    Ok(events)
}

/// Sets `won` for the scenario goals checked after every action. The dungeon
/// exit is handled by the ascend action itself.
pub fn check_win(game: &mut GameState, events: &mut Vec<Event>) -> GameStatus {
    if game.is_running() {
        let level = game.current_level();
        let won = match game.win {
            WinCondition::OrbExit => false,
            WinCondition::ReachOrb => {
                level.items_at(game.player.position).any(|i| i.spec.category == ItemCategory::Orb)
                    || game.player.has_orb
            }
            WinCondition::KillAll => level.monsters.is_empty(),
        };
        if won {
            game.status = GameStatus::Won;
            events.push(Event::Won);
        }
    }
    game.status
}

fn monster_speed(monster: &crate::world::Monster) -> i64 {
    let slow = if monster.status.slowed > 0 { rules::FROST_EXTRA_AUT } else { 0 };
    (monster.spec.speed_aut + slow) as i64
}

/// Every monster on the player's level gains `elapsed` auts of energy and
/// acts once per `speed_aut` it can pay for: attack when adjacent, chase
/// when the player is in view, otherwise wander.
pub fn monster_turns(game: &mut GameState, elapsed: u64, events: &mut Vec<Event>) {
    let fov = game.current_fov();
    let level_idx = game.player.level.0 as usize;
    let ids: Vec<ActorId> = game.levels[level_idx].monsters.keys().copied().collect();
    for id in ids {
        let Some(monster) = game.levels[level_idx].monsters.get_mut(&id) else { continue };
        monster.energy += elapsed as i64;
        loop {
            let level = &game.levels[level_idx];
            let Some(monster) = level.monsters.get(&id) else { break };
            let speed = monster_speed(monster);
            if monster.energy < speed {
                break;
            }
            let pos = monster.position;
            let player = game.player.position;
            if pos.chebyshev(player) == 1 {
                let outcome = resolve_melee(
                    monster_attack(monster),
                    DefenseProfile {
                        evasion: game.player.evasion(),
                        hp: game.player.hp,
                        damage_reduction: game.player.damage_reduction(),
                    },
                    &mut game.rngs.combat,
                );
                if outcome.hit {
                    game.player.hp -= outcome.damage;
                    events.push(Event::Hit { attacker: Who::Monster(id), target: Who::Player, damage: outcome.damage });
                } else {
                    events.push(Event::Missed { attacker: Who::Monster(id), target: Who::Player });
                }
            } else {
                let step = if fov.contains(pos) {
                    greedy_step(level, pos, player)
                } else {
                    let options = legal_steps(level, pos, player);
                    game.rngs.monsters.choose(&options).copied()
                };
                if let Some(to) = step {
                    game.levels[level_idx].move_monster(id, to);
                }
            }
            game.levels[level_idx].monsters.get_mut(&id).expect("still present").energy -= speed;
            if game.player.hp <= 0 {
                game.player.hp = 0;
                game.player.alive = false;
                game.status = GameStatus::Dead;
                events.push(Event::Died { killer: Who::Monster(id) });
                return;
            }
        }
    }
}

fn legal_steps(level: &LevelMap, from: Position, player: Position) -> Vec<Position> {
    level
        .neighbours8(from)
        .map(|(_, p)| p)
        .filter(|p| *p != player && level.is_passable(*p) && level.occupant(*p).is_none())
        .collect()
}

fn greedy_step(level: &LevelMap, from: Position, player: Position) -> Option<Position> {
    let score = |p: Position| {
        let dr = p.row as i64 - player.row as i64;
        let dc = p.col as i64 - player.col as i64;
        (p.chebyshev(player), dr * dr + dc * dc)
    };
    legal_steps(level, from, player)
        .into_iter()
        .map(|p| (score(p), p))
        .filter(|(s, _)| *s < score(from))
        .min_by_key(|(s, _)| *s)
        .map(|(_, p)| p)
}

fn tick_statuses(game: &mut GameState, events: &mut Vec<Event>) {
    let level_idx = game.player.level.0 as usize;
    let mut dead = Vec::new();
    for (id, monster) in game.levels[level_idx].monsters.iter_mut() {
        if monster.status.poisoned > 0 {
            monster.status.poisoned -= 1;
            monster.hp -= rules::VENOM_DAMAGE_PER_TURN;
            if monster.hp <= 0 {
                dead.push(*id);
            }
        }
        monster.status.slowed = monster.status.slowed.saturating_sub(1);
    }
    for id in dead {
        events.push(kill(game, id));
    }
}

fn shift_current_level(game: &mut GameState) {
    let level_idx = game.player.level.0 as usize;
    if !game.levels[level_idx].shifting {
        return;
    }
    let fov = game.current_fov();
    let player = game.player.position;
    mutate_unseen(&mut game.levels[level_idx], |p| fov.contains(p), player, &mut game.rngs.shifting);
}

/// One-line English rendering of an event for the message log.
pub fn describe(event: &Event) -> String {
    match event {
        Event::Moved { to, .. } => format!("You move to ({}, {}).", to.row, to.col),
        Event::Hit { attacker: Who::Player, target, damage } => format!("You hit {target} for {damage}."),
        Event::Hit { attacker, damage, .. } => format!("{attacker} hits you for {damage}."),
        Event::Missed { attacker: Who::Player, target } => format!("You miss {target}."),
        Event::Missed { attacker, .. } => format!("{attacker} misses you."),
        Event::Killed { species, xp, .. } => format!("You kill the {species} ({xp} xp)."),
        Event::PickedUp { kind, .. } => format!("You pick up the {kind}."),
        Event::Leveled { skill, value } => format!("Your {skill} skill rises to {value}."),
        Event::Blinked { to, .. } => format!("You blink to ({}, {}).", to.row, to.col),
        Event::Healed { amount } => format!("You feel better (+{amount} hp)."),
        Event::Consumed { kind, .. } => format!("You use the {kind}."),
        Event::Wielded { .. } => "You wield a new weapon.".to_string(),
        Event::Thrown { target, .. } => format!("You throw your weapon at ({}, {}).", target.row, target.col),
        Event::HeadsGrew { actor, heads } => format!("{actor} grows a head; it now has {heads}."),
        Event::StatusApplied { actor, status, turns } => format!("{actor} is {status:?} for {turns} turns."),
        Event::LevelChanged { to, .. } => format!("You arrive on level {}.", to.0),
        Event::Died { killer } => format!("You are killed by {killer}."),
        Event::Won => "You have won!".to_string(),
        Event::Refused { reason } => format!("You can't do that: {reason:?}."),
    }
}
