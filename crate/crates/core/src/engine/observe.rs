//! The agent's view of a game: what is in sight now, what was seen before,
//! and the player's own state. Building it never mutates the game.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::fov::{compute_fov, FieldOfView, FOV_RADIUS};
use super::player::{ActionSpeed, Attributes, Skill};
use super::state::{GameState, GameStatus, WinCondition};
use super::Action;
use crate::geom::Position;
use crate::world::{ActorId, Brand, Item, ItemCategory, ItemId, LevelId, LevelMap, Statuses, Terrain, WeaponClass};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ItemView {
    pub id: ItemId,
    pub kind: String,
    pub category: ItemCategory,
}

impl From<&Item> for ItemView {
    fn from(item: &Item) -> Self {
        ItemView { id: item.id, kind: item.spec.id.clone(), category: item.spec.category }
    }
}

/// Last-seen state of a tile. Monsters are never remembered.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileMemory {
    pub terrain: Terrain,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub items: Vec<ItemView>,
}

impl TileMemory {
    pub fn capture(level: &LevelMap, p: Position) -> Self {
        TileMemory { terrain: level.terrain(p), items: level.items_at(p).map(ItemView::from).collect() }
    }
}

/// Remembered tiles of one level.
///
/// Serialized compactly as terrain glyph rows (space = never seen) plus a
/// list of remembered item stacks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "RememberedWire", try_from = "RememberedWire")]
pub struct RememberedMap {
    pub rows: u32,
    pub cols: u32,
    cells: Vec<Option<TileMemory>>,
}

impl RememberedMap {
    pub fn new(rows: u32, cols: u32) -> Self {
        RememberedMap { rows, cols, cells: vec![None; rows as usize * cols as usize] }
    }

    fn index(&self, p: Position) -> Option<usize> {
        (p.row < self.rows && p.col < self.cols).then(|| p.row as usize * self.cols as usize + p.col as usize)
    }

    pub fn get(&self, p: Position) -> Option<&TileMemory> {
        self.index(p).and_then(|i| self.cells[i].as_ref())
    }

    pub fn set(&mut self, p: Position, memory: TileMemory) {
        if let Some(i) = self.index(p) {
            self.cells[i] = Some(memory);
        }
    }

    pub fn contains(&self, p: Position) -> bool {
        self.get(p).is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Position, &TileMemory)> + '_ {
        let cols = self.cols as usize;
        self.cells
            .iter()
            .enumerate()
            .filter_map(move |(i, c)| c.as_ref().map(|m| (Position::new((i / cols) as u32, (i % cols) as u32), m)))
    }

    pub fn len(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_passable(&self, p: Position) -> bool {
        self.get(p).is_some_and(|m| m.terrain.is_passable())
    }
}

#[derive(Serialize, Deserialize)]
struct RememberedWire {
    rows: u32,
    cols: u32,
    terrain: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    items: Vec<(Position, Vec<ItemView>)>,
}

impl From<RememberedMap> for RememberedWire {
    fn from(map: RememberedMap) -> Self {
        let terrain = (0..map.rows)
            .map(|r| {
                (0..map.cols)
                    .map(|c| map.get(Position::new(r, c)).map_or(' ', |m| m.terrain.glyph()))
                    .collect()
            })
            .collect();
        let items = map
            .iter()
            .filter(|(_, m)| !m.items.is_empty())
            .map(|(p, m)| (p, m.items.clone()))
            .collect();
        RememberedWire { rows: map.rows, cols: map.cols, terrain, items }
    }
}

impl TryFrom<RememberedWire> for RememberedMap {
    type Error = String;

    fn try_from(wire: RememberedWire) -> Result<Self, Self::Error> {
        let mut map = RememberedMap::new(wire.rows, wire.cols);
        if wire.terrain.len() != wire.rows as usize {
            return Err(format!("expected {} terrain rows, got {}", wire.rows, wire.terrain.len()));
        }
        for (r, line) in wire.terrain.iter().enumerate() {
            let chars: Vec<char> = line.chars().collect();
            if chars.len() != wire.cols as usize {
                return Err(format!("terrain row {r} has {} cells, expected {}", chars.len(), wire.cols));
            }
            for (c, ch) in chars.into_iter().enumerate() {
                if ch == ' ' {
                    continue;
                }
                let terrain = Terrain::from_glyph(ch).ok_or_else(|| format!("unknown terrain glyph `{ch}`"))?;
                map.set(Position::new(r as u32, c as u32), TileMemory { terrain, items: Vec::new() });
            }
        }
        for (p, items) in wire.items {
            let i = map.index(p).ok_or_else(|| format!("item stack at {p} out of bounds"))?;
            match map.cells[i].as_mut() {
                Some(cell) => cell.items = items,
                None => return Err(format!("item stack at unseen tile {p}")),
            }
        }
        Ok(map)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VisibleTile {
    pub pos: Position,
    pub terrain: Terrain,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub items: Vec<ItemView>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monster: Option<ActorId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonsterView {
    pub id: ActorId,
    pub species: String,
    pub glyph: char,
    pub pos: Position,
    pub hp: i32,
    pub max_hp: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub heads: Option<u32>,
    pub status: Statuses,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InventoryEntry {
    pub slot: usize,
    pub item: ItemId,
    pub kind: String,
    pub category: ItemCategory,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weapon_class: Option<WeaponClass>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub brand: Option<Brand>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_damage: Option<i32>,
    pub wielded: bool,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayerView {
    pub hp: i32,
    pub max_hp: i32,
    pub attributes: Attributes,
    pub skills: BTreeMap<Skill, u8>,
    pub xp_pool: u32,
    pub xp_earned: u32,
    pub runes: Vec<ItemId>,
    pub has_orb: bool,
    pub position: Position,
    pub speed: ActionSpeed,
    pub alive: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservedState {
    pub level: LevelId,
    pub level_name: String,
    pub depth: u32,
    pub turn_count: f64,
    pub clock_aut: u64,
    pub status: GameStatus,
    pub goal: WinCondition,
    pub player: PlayerView,
    pub visible: Vec<VisibleTile>,
    pub remembered: RememberedMap,
    pub monsters: Vec<MonsterView>,
    pub inventory: Vec<InventoryEntry>,
    pub messages: Vec<String>,
    /// Terrain descriptions for every terrain kind in view or memory.
    pub descriptions: BTreeMap<Terrain, String>,
    pub legal_actions: Vec<Action>,
}

impl ObservedState {
    pub fn visible_tile(&self, p: Position) -> Option<&VisibleTile> {
        self.visible.binary_search_by(|t| t.pos.cmp(&p)).ok().map(|i| &self.visible[i])
    }

    pub fn is_visible(&self, p: Position) -> bool {
        self.visible_tile(p).is_some()
    }

    pub fn monster(&self, id: ActorId) -> Option<&MonsterView> {
        self.monsters.iter().find(|m| m.id == id)
    }

    pub fn monster_at(&self, p: Position) -> Option<&MonsterView> {
        self.monsters.iter().find(|m| m.pos == p)
    }

    pub fn position(&self) -> Position {
        self.player.position
    }

    pub fn inventory_slot(&self, slot: usize) -> Option<&InventoryEntry> {
        self.inventory.iter().find(|e| e.slot == slot)
    }

    pub fn wielded(&self) -> Option<&InventoryEntry> {
        self.inventory.iter().find(|e| e.wielded)
    }
}

/// Builds the observation for the current state. Pure: memory is updated by
/// the engine step, never here.
pub fn observe(game: &GameState) -> ObservedState {
    let fov = game.current_fov();
    observe_with(game, &fov)
}

pub(crate) fn observe_with(game: &GameState, fov: &FieldOfView) -> ObservedState {
    let level = game.current_level();
    let player = &game.player;
    let visible: Vec<VisibleTile> = fov
        .iter()
        .map(|p| {
            let tile = level.tile(p).expect("fov stays in bounds");
            VisibleTile {
                pos: p,
                terrain: tile.terrain,
                items: level.items_at(p).map(ItemView::from).collect(),
                monster: tile.occupant,
            }
        })
        .collect();
    let monsters: Vec<MonsterView> = visible
        .iter()
        .filter_map(|t| t.monster)
        .filter_map(|id| level.monsters.get(&id))
        .map(|m| MonsterView {
            id: m.id,
            species: m.spec.id.clone(),
            glyph: m.spec.glyph,
            pos: m.position,
            hp: m.hp,
            max_hp: m.spec.max_hp,
            heads: m.heads,
            status: m.status,
            description: m.spec.description.clone(),
        })
        .collect();
    let inventory = player
        .items()
        .map(|(slot, item)| InventoryEntry {
            slot,
            item: item.id,
            kind: item.spec.id.clone(),
            category: item.spec.category,
            weapon_class: item.spec.weapon_class,
            brand: item.spec.brand,
            base_damage: item.spec.base_damage,
            wielded: player.wielded == Some(slot),
            description: item.spec.description.clone(),
        })
        .collect();
    let remembered = game.memory(level.id).clone();
    let mut descriptions = BTreeMap::new();
    for (_, m) in remembered.iter() {
        descriptions.entry(m.terrain).or_insert_with(|| m.terrain.description().to_string());
    }
    ObservedState {
        level: level.id,
        level_name: level.name.clone(),
        depth: level.depth,
        turn_count: game.turn_count(),
        clock_aut: game.clock_aut,
        status: game.status,
        goal: game.win,
        player: PlayerView {
            hp: player.hp,
            max_hp: player.max_hp,
            attributes: player.attributes,
            skills: player.skills.clone(),
            xp_pool: player.xp_pool,
            xp_earned: player.xp_earned,
            runes: player.runes_held.iter().copied().collect(),
            has_orb: player.has_orb,
            position: player.position,
            speed: player.speed,
            alive: player.alive,
        },
        legal_actions: game.legal_actions_with(fov),
        visible,
        remembered,
        monsters,
        inventory,
        messages: game.last_messages.clone(),
        descriptions,
    }
}

/// Visibility set an observation must match.
pub fn expected_visible(game: &GameState) -> Vec<Position> {
    compute_fov(game.current_level(), game.player.position, FOV_RADIUS).iter().collect()
}
