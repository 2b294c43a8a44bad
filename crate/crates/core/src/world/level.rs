use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::catalog::{ActorId, Item, ItemCategory, ItemId, Monster};
use super::terrain::Terrain;
use crate::geom::{Direction, Position};

/// Index of a level in the dungeon layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LevelId(pub u16);

impl fmt::Display for LevelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tile {
    pub terrain: Terrain,
    pub items: Vec<ItemId>,
    pub occupant: Option<ActorId>,
}

impl Tile {
    pub fn new(terrain: Terrain) -> Self {
        Tile { terrain, items: Vec::new(), occupant: None }
    }

    pub fn description(&self) -> &'static str {
        self.terrain.description()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StairKind {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stair {
    pub position: Position,
    pub kind: StairKind,
    /// `None` for the dungeon exit (or an unconnected scenario staircase).
    pub destination: Option<LevelId>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelMap {
    pub id: LevelId,
    pub name: String,
    pub branch: String,
    pub depth: u32,
    pub rows: u32,
    pub cols: u32,
    pub shifting: bool,
    pub stairs: Vec<Stair>,
    pub monsters: BTreeMap<ActorId, Monster>,
    pub items: BTreeMap<ItemId, Item>,
    grid: Vec<Tile>,
    next_serial: u32,
}

impl LevelMap {
    /// A level of the given size filled with `fill`.
    pub fn filled(id: LevelId, name: &str, branch: &str, depth: u32, rows: u32, cols: u32, fill: Terrain) -> Self {
        LevelMap {
            id,
            name: name.to_string(),
            branch: branch.to_string(),
            depth,
            rows,
            cols,
            shifting: false,
            stairs: Vec::new(),
            monsters: BTreeMap::new(),
            items: BTreeMap::new(),
            grid: vec![Tile::new(fill); rows as usize * cols as usize],
            next_serial: 0,
        }
    }

    pub fn in_bounds(&self, p: Position) -> bool {
        p.row < self.rows && p.col < self.cols
    }

    pub fn is_border(&self, p: Position) -> bool {
        p.row == 0 || p.col == 0 || p.row + 1 == self.rows || p.col + 1 == self.cols
    }

    fn index(&self, p: Position) -> usize {
        debug_assert!(self.in_bounds(p), "{p} outside {}x{}", self.rows, self.cols);
        p.row as usize * self.cols as usize + p.col as usize
    }

    pub fn tile(&self, p: Position) -> Option<&Tile> {
        self.in_bounds(p).then(|| &self.grid[self.index(p)])
    }

    pub fn tile_mut(&mut self, p: Position) -> Option<&mut Tile> {
        if self.in_bounds(p) {
            let i = self.index(p);
            Some(&mut self.grid[i])
        } else {
            None
        }
    }

    /// Terrain at `p`; out-of-bounds reads as wall.
    pub fn terrain(&self, p: Position) -> Terrain {
        self.tile(p).map_or(Terrain::Wall, |t| t.terrain)
    }

    pub fn set_terrain(&mut self, p: Position, terrain: Terrain) {
        if let Some(t) = self.tile_mut(p) {
            t.terrain = terrain;
        }
    }

    pub fn is_passable(&self, p: Position) -> bool {
        self.terrain(p).is_passable()
    }

    pub fn is_opaque(&self, p: Position) -> bool {
        self.terrain(p).is_opaque()
    }

    pub fn positions(&self) -> impl Iterator<Item = Position> + '_ {
        let cols = self.cols;
        (0..self.rows).flat_map(move |r| (0..cols).map(move |c| Position::new(r, c)))
    }

    pub fn passable_positions(&self) -> impl Iterator<Item = Position> + '_ {
        self.positions().filter(|p| self.is_passable(*p))
    }

    /// In-bounds 8-way neighbours in `Direction::ALL` order.
    pub fn neighbours8(&self, p: Position) -> impl Iterator<Item = (Direction, Position)> + '_ {
        Direction::ALL
            .into_iter()
            .filter_map(move |d| p.step(d).filter(|q| self.in_bounds(*q)).map(|q| (d, q)))
    }

    pub fn neighbours4(&self, p: Position) -> impl Iterator<Item = Position> + '_ {
        Direction::CARDINAL
            .into_iter()
            .filter_map(move |d| p.step(d).filter(|q| self.in_bounds(*q)))
    }

    pub fn stair_at(&self, p: Position) -> Option<&Stair> {
        self.stairs.iter().find(|s| s.position == p)
    }

    pub fn occupant(&self, p: Position) -> Option<ActorId> {
        self.tile(p).and_then(|t| t.occupant)
    }

    pub fn monster_at(&self, p: Position) -> Option<&Monster> {
        self.occupant(p).and_then(|id| self.monsters.get(&id))
    }

    pub fn next_item_id(&mut self) -> ItemId {
        self.next_serial += 1;
        ItemId::new(self.id.0, self.next_serial)
    }

    pub fn next_actor_id(&mut self) -> ActorId {
        self.next_serial += 1;
        ActorId::new(self.id.0, self.next_serial)
    }

    /// Puts `item` on the floor at `p`. Callers guarantee `p` is passable.
    pub fn place_item(&mut self, p: Position, item: Item) {
        debug_assert!(self.is_passable(p), "item placed on impassable {p}");
        let id = item.id;
        self.items.insert(id, item);
        if let Some(t) = self.tile_mut(p) {
            t.items.push(id);
        }
    }

    pub fn take_items(&mut self, p: Position) -> Vec<Item> {
        let ids = self.tile_mut(p).map(|t| std::mem::take(&mut t.items)).unwrap_or_default();
        ids.into_iter().filter_map(|id| self.items.remove(&id)).collect()
    }

    pub fn items_at(&self, p: Position) -> impl Iterator<Item = &Item> + '_ {
        self.tile(p).into_iter().flat_map(|t| t.items.iter()).filter_map(|id| self.items.get(id))
    }

    pub fn place_monster(&mut self, monster: Monster) {
        let p = monster.position;
        debug_assert!(self.occupant(p).is_none(), "{p} already occupied");
        if let Some(t) = self.tile_mut(p) {
            t.occupant = Some(monster.id);
        }
        self.monsters.insert(monster.id, monster);
    }

    pub fn remove_monster(&mut self, id: ActorId) -> Option<Monster> {
        let m = self.monsters.remove(&id)?;
        if let Some(t) = self.tile_mut(m.position) {
            if t.occupant == Some(id) {
                t.occupant = None;
            }
        }
        Some(m)
    }

    pub fn move_monster(&mut self, id: ActorId, to: Position) {
        let Some(from) = self.monsters.get(&id).map(|m| m.position) else { return };
        if let Some(t) = self.tile_mut(from) {
            t.occupant = None;
        }
        if let Some(t) = self.tile_mut(to) {
            t.occupant = Some(id);
        }
        if let Some(m) = self.monsters.get_mut(&id) {
            m.position = to;
        }
    }

    pub fn count_items(&self, category: ItemCategory) -> usize {
        self.items.values().filter(|i| i.spec.category == category).count()
    }

    pub fn find_item(&self, category: ItemCategory) -> Option<Position> {
        self.positions()
            .find(|p| self.items_at(*p).any(|i| i.spec.category == category))
    }

    /// One text row per grid row using terrain glyphs.
    pub fn render_terrain(&self) -> Vec<String> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.terrain(Position::new(r, c)).glyph()).collect())
            .collect()
    }

    pub fn up_stairs(&self) -> Option<&Stair> {
        self.stairs.iter().find(|s| s.kind == StairKind::Up)
    }
}
