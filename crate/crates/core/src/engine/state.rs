use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::fov::{compute_fov, FieldOfView, FOV_RADIUS};
use super::observe::{RememberedMap, TileMemory};
use super::player::{PlayerCharacter, Skill};
use super::rules::{self, skill_cost, AUT_PER_TURN};
use super::Action;
use crate::geom::Position;
use crate::rng::{RngStream, Subsystem};
use crate::world::{
    build_dungeon, Item, ItemCategory, ItemSpec, LevelDescriptor, LevelId, LevelMap, SpecIndex, StairKind,
    WorldConfig, WorldError,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GameStatus {
    Running,
    Dead,
    Won,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WinCondition {
    /// Carry the orb out of the exit staircase.
    #[default]
    OrbExit,
    /// Step onto the orb's tile.
    ReachOrb,
    /// Leave no monster alive on the level.
    KillAll,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct EngineRngs {
    pub combat: RngStream,
    pub monsters: RngStream,
    pub shifting: RngStream,
}

impl EngineRngs {
    fn new(seed: u64) -> Self {
        EngineRngs {
            combat: RngStream::for_subsystem(seed, Subsystem::Combat, 0),
            monsters: RngStream::for_subsystem(seed, Subsystem::MonsterAi, 0),
            shifting: RngStream::for_subsystem(seed, Subsystem::Shifting, 0),
        }
    }
}

/// Complete authoritative world state for one game.
#[derive(Debug, Clone)]
pub struct GameState {
    pub seed: u64,
    pub levels: Vec<LevelMap>,
    pub descriptors: Vec<LevelDescriptor>,
    pub player: PlayerCharacter,
    pub clock_aut: u64,
    pub status: GameStatus,
    pub win: WinCondition,
    pub(crate) specs: Arc<SpecIndex>,
    pub(crate) rngs: EngineRngs,
    pub(crate) seen: Vec<RememberedMap>,
    pub(crate) last_messages: Vec<String>,
}

impl PartialEq for GameState {
    fn eq(&self, other: &Self) -> bool {
        self.seed == other.seed
            && self.levels == other.levels
            && self.descriptors == other.descriptors
            && self.player == other.player
            && self.clock_aut == other.clock_aut
            && self.status == other.status
            && self.win == other.win
            && self.rngs == other.rngs
            && self.seen == other.seen
            && self.last_messages == other.last_messages
    }
}

fn kit_item(level: &mut LevelMap, spec: &Arc<ItemSpec>) -> Item {
    Item { id: level.next_item_id(), spec: spec.clone() }
}

impl GameState {
    /// A full dungeon game. The player starts on the D:1 exit staircase with
    /// a dagger and one potion of curing.
    pub fn new_dungeon(seed: u64, world: &WorldConfig) -> Result<Self, WorldError> {
        let specs = Arc::new(SpecIndex::new(&world.catalog()?));
        let (descriptors, mut levels) = build_dungeon(seed, &world.dungeon, &specs)?;
        let start = levels[0].up_stairs().expect("D:1 has an exit").position;
        let kit: Vec<Arc<ItemSpec>> = ["dagger", "curing"].iter().filter_map(|id| specs.items.get(*id).cloned()).collect();
        let items: Vec<Item> = kit.iter().map(|s| kit_item(&mut levels[0], s)).collect();
        let mut game = Self::assemble(seed, descriptors, levels, LevelId(0), start, WinCondition::OrbExit, specs);
        game.give_kit(items);
        Ok(game)
    }

    /// A single hand-authored level.
    pub fn from_level(
        seed: u64,
        mut level: LevelMap,
        start: Position,
        win: WinCondition,
        specs: Arc<SpecIndex>,
        kit: &[Arc<ItemSpec>],
    ) -> Self {
        let descriptor = LevelDescriptor {
            id: level.id,
            name: level.name.clone(),
            branch: level.branch.clone(),
            depth: level.depth,
            rune: level.count_items(ItemCategory::Rune) > 0,
            orb: level.count_items(ItemCategory::Orb) > 0,
            shifting: level.shifting,
            up: None,
            down: Vec::new(),
        };
        let items: Vec<Item> = kit.iter().map(|s| kit_item(&mut level, s)).collect();
        let id = level.id;
        let mut game = Self::assemble(seed, vec![descriptor], vec![level], id, start, win, specs);
        game.give_kit(items);
        game
    }

    fn assemble(
        seed: u64,
        descriptors: Vec<LevelDescriptor>,
        levels: Vec<LevelMap>,
        start_level: LevelId,
        start: Position,
        win: WinCondition,
        specs: Arc<SpecIndex>,
    ) -> Self {
        let seen = levels.iter().map(|l| RememberedMap::new(l.rows, l.cols)).collect();
        let mut game = GameState {
            seed,
            levels,
            descriptors,
            player: PlayerCharacter::new(start_level, start),
            clock_aut: 0,
            status: GameStatus::Running,
            win,
            specs,
            rngs: EngineRngs::new(seed),
            seen,
            last_messages: Vec::new(),
        };
        let fov = game.current_fov();
        game.remember(&fov);
        game
    }

    fn give_kit(&mut self, items: Vec<Item>) {
        for item in items {
            let is_weapon = item.spec.is_weapon();
            if let Some(slot) = self.player.add_item(item) {
                if is_weapon && self.player.wielded.is_none() {
                    self.player.wielded = Some(slot);
                }
            }
        }
    }

    pub fn specs(&self) -> &SpecIndex {
        &self.specs
    }

    pub fn turn_count(&self) -> f64 {
        self.clock_aut as f64 / AUT_PER_TURN as f64
    }

    pub fn is_running(&self) -> bool {
        self.status == GameStatus::Running
    }

    pub fn level(&self, id: LevelId) -> &LevelMap {
        &self.levels[id.0 as usize]
    }

    pub fn current_level(&self) -> &LevelMap {
        self.level(self.player.level)
    }

    pub(crate) fn current_level_mut(&mut self) -> &mut LevelMap {
        let id = self.player.level.0 as usize;
        &mut self.levels[id]
    }

    pub fn descriptor(&self, id: LevelId) -> &LevelDescriptor {
        &self.descriptors[id.0 as usize]
    }

    pub fn memory(&self, id: LevelId) -> &RememberedMap {
        &self.seen[id.0 as usize]
    }

    pub fn current_fov(&self) -> FieldOfView {
        compute_fov(self.current_level(), self.player.position, FOV_RADIUS)
    }

    pub(crate) fn remember(&mut self, fov: &FieldOfView) {
        let id = self.player.level.0 as usize;
        let level = &self.levels[id];
        let memory = &mut self.seen[id];
        for p in fov.iter() {
            memory.set(p, TileMemory::capture(level, p));
        }
    }

    /// Total runes in the world plus the pack; constant over a game.
    pub fn rune_total(&self) -> usize {
        self.levels.iter().map(|l| l.count_items(ItemCategory::Rune)).sum::<usize>() + self.player.runes_held.len()
    }

    pub fn consumable_count(&self) -> usize {
        let is_consumable = |i: &Item| matches!(i.spec.category, ItemCategory::Potion | ItemCategory::Scroll);
        self.levels.iter().flat_map(|l| l.items.values()).filter(|i| is_consumable(i)).count()
            + self.player.items().filter(|(_, i)| is_consumable(i)).count()
    }

    pub fn is_zot(&self, id: LevelId) -> bool {
        self.descriptors.get(id.0 as usize).is_some_and(|d| d.is_zot())
    }

    /// Primitive actions that the engine would accept right now.
    pub fn legal_actions(&self) -> Vec<Action> {
        self.legal_actions_with(&self.current_fov())
    }

    pub(crate) fn legal_actions_with(&self, fov: &FieldOfView) -> Vec<Action> {
        use crate::geom::Direction;
        if !self.is_running() {
            return Vec::new();
        }
        let level = self.current_level();
        let here = self.player.position;
        let mut out = Vec::new();
        for dir in Direction::ALL {
            let Some(p) = here.step(dir).filter(|p| level.in_bounds(*p)) else { continue };
            if level.occupant(p).is_some() && fov.contains(p) {
                out.push(Action::Attack { dir });
            } else if level.is_passable(p) && level.occupant(p).is_none() {
                out.push(Action::Move { dir });
            }
        }
        let underfoot: Vec<&Item> = level.items_at(here).collect();
        if !underfoot.is_empty()
            && (self.player.free_slot().is_some() || underfoot.iter().any(|i| !i.spec.takes_slot()))
        {
            out.push(Action::Pickup);
        }
        if let Some(stair) = level.stair_at(here) {
            match stair.kind {
                StairKind::Down => {
                    if let Some(dest) = stair.destination {
                        if !self.is_zot(dest) || self.player.runes_held.len() >= rules::RUNES_FOR_ZOT {
                            out.push(Action::Descend);
                        }
                    }
                }
                StairKind::Up => {
                    if stair.destination.is_some()
                        || (self.player.has_orb && self.win == WinCondition::OrbExit)
                    {
                        out.push(Action::Ascend);
                    }
                }
            }
        }
        for (slot, item) in self.player.items() {
            match item.spec.category {
                ItemCategory::Potion => out.push(Action::Quaff { slot }),
                ItemCategory::Weapon if self.player.wielded != Some(slot) => out.push(Action::Wield { slot }),
                _ => {}
            }
        }
        for skill in Skill::ALL {
            let s = self.player.skill(skill);
            if s < rules::SKILL_MAX && self.player.xp_pool >= skill_cost(s) {
                out.push(Action::SpendXp { skill });
            }
        }
        out.push(Action::Wait);
        out
    }
}
