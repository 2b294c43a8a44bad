//! Rooms-and-corridors level generation.
//!
//! Rooms are non-overlapping rectangles joined in placement order by L-shaped
//! corridors, which makes the floor 4-connected by construction. Stairs and any
//! mandated rune or orb go on room floor; a few hazard tiles are then added
//! only where they leave connectivity intact.

use std::sync::Arc;

use super::catalog::{Item, ItemSpec};
use super::config::DungeonConfig;
use super::connectivity::validate_connectivity;
use super::layout::LevelDescriptor;
use super::level::{LevelMap, Stair, StairKind};
use super::terrain::Terrain;
use crate::geom::Position;
use crate::rng::{RngStream, Subsystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Room {
    top: u32,
    left: u32,
    height: u32,
    width: u32,
}

impl Room {
    fn center(&self) -> Position {
        Position::new(self.top + self.height / 2, self.left + self.width / 2)
    }

    /// Overlap test with a one-tile wall margin between rooms.
    fn touches(&self, other: &Room) -> bool {
        self.top <= other.top + other.height
            && other.top <= self.top + self.height
            && self.left <= other.left + other.width
            && other.left <= self.left + self.width
    }

    fn cells(&self) -> impl Iterator<Item = Position> {
        let Room { top, left, height, width } = *self;
        (top..top + height).flat_map(move |r| (left..left + width).map(move |c| Position::new(r, c)))
    }
}

const ROOM_ATTEMPTS: usize = 200;
const HAZARD_ATTEMPTS: usize = 3;

fn place_rooms(rows: u32, cols: u32, rng: &mut RngStream) -> Vec<Room> {
    let interior_h = rows - 2;
    let interior_w = cols - 2;
    let target = ((rows * cols) / 100).clamp(3, 14) as usize;
    let max_h = interior_h.min(6);
    let max_w = interior_w.min(10);
    let min_h = max_h.min(3);
    let min_w = max_w.min(4);
    let mut rooms: Vec<Room> = Vec::new();
    for _ in 0..ROOM_ATTEMPTS {
        if rooms.len() >= target {
            break;
        }
        let height = rng.range_inclusive(min_h as i64, max_h as i64) as u32;
        let width = rng.range_inclusive(min_w as i64, max_w as i64) as u32;
        let top = 1 + rng.below((interior_h - height + 1) as u64) as u32;
        let left = 1 + rng.below((interior_w - width + 1) as u64) as u32;
        let room = Room { top, left, height, width };
        if rooms.iter().all(|r| !r.touches(&room)) {
            rooms.push(room);
        }
    }
    if rooms.is_empty() {
        rooms.push(Room { top: 1, left: 1, height: min_h, width: min_w });
    }
    rooms
}

fn carve_corridor(level: &mut LevelMap, from: Position, to: Position, horizontal_first: bool) {
    let corner = if horizontal_first {
        Position::new(from.row, to.col)
    } else {
        Position::new(to.row, from.col)
    };
    for (a, b) in [(from, corner), (corner, to)] {
        let (r0, r1) = (a.row.min(b.row), a.row.max(b.row));
        let (c0, c1) = (a.col.min(b.col), a.col.max(b.col));
        for r in r0..=r1 {
            for c in c0..=c1 {
                let p = Position::new(r, c);
                if level.terrain(p) == Terrain::Wall {
                    level.set_terrain(p, Terrain::Floor);
                }
            }
        }
    }
}

/// Picks a free floor cell from `rooms`, or `None` if every one is taken.
fn pick_room_floor(level: &LevelMap, rooms: &[Room], rng: &mut RngStream) -> Option<Position> {
    let free: Vec<Position> = rooms
        .iter()
        .flat_map(|r| r.cells())
        .filter(|p| level.terrain(*p) == Terrain::Floor && level.tile(*p).is_some_and(|t| t.items.is_empty()))
        .collect();
    rng.choose(&free).copied()
}

/// Builds the terrain, stairs and mandated rune/orb for one level.
/// Deterministic in `(seed, descriptor, config)`.
pub fn generate_level(seed: u64, descriptor: &LevelDescriptor, config: &DungeonConfig) -> LevelMap {
    let mut rng = RngStream::for_subsystem(seed, Subsystem::Layout, descriptor.id.0 as u64);
    let rows = config.level_rows;
    let cols = config.level_cols;
    let mut level = LevelMap::filled(
        descriptor.id,
        &descriptor.name,
        &descriptor.branch,
        descriptor.depth,
        rows,
        cols,
        Terrain::Wall,
    );
    level.shifting = descriptor.shifting;

    let rooms = place_rooms(rows, cols, &mut rng);
    for room in &rooms {
        for p in room.cells() {
            level.set_terrain(p, Terrain::Floor);
        }
    }
    for pair in rooms.windows(2) {
        let horizontal_first = rng.chance(0.5);
        carve_corridor(&mut level, pair[0].center(), pair[1].center(), horizontal_first);
    }

    // Shallow water never affects connectivity.
    for room in &rooms {
        if rng.chance(0.25) {
            let cells: Vec<Position> = room.cells().collect();
            for _ in 0..3 {
                if let Some(&p) = rng.choose(&cells) {
                    level.set_terrain(p, Terrain::ShallowWater);
                }
            }
        }
    }

    let stair_plan: Vec<(StairKind, Option<_>)> = std::iter::once((StairKind::Up, descriptor.up))
        .chain(descriptor.down.iter().map(|d| (StairKind::Down, Some(*d))))
        .collect();
    for (i, (kind, destination)) in stair_plan.into_iter().enumerate() {
        let pool = if i == 0 { &rooms[..1] } else { &rooms[..] };
        let p = pick_room_floor(&level, pool, &mut rng)
            .or_else(|| pick_room_floor(&level, &rooms, &mut rng))
            .expect("rooms always have a free floor cell for stairs");
        level.set_terrain(p, if kind == StairKind::Up { Terrain::StairsUp } else { Terrain::StairsDown });
        level.stairs.push(Stair { position: p, kind, destination });
    }

    for _ in 0..HAZARD_ATTEMPTS {
        if !rng.chance(0.6) {
            continue;
        }
        let Some(p) = pick_room_floor(&level, &rooms, &mut rng) else { continue };
        let hazard = if rng.chance(0.5) { Terrain::DeepWater } else { Terrain::Lava };
        level.set_terrain(p, hazard);
        if !validate_connectivity(&level).is_ok() {
            level.set_terrain(p, Terrain::Floor);
        }
    }

    place_mandated(&mut level, descriptor, &mut rng);
    debug_assert!(validate_connectivity(&level).is_ok());
    level
}

/// Places the descriptor's rune and orb if the level does not already hold them.
pub(crate) fn place_mandated(level: &mut LevelMap, descriptor: &LevelDescriptor, rng: &mut RngStream) {
    use super::catalog::ItemCategory;
    let wanted = [
        (descriptor.rune, ItemCategory::Rune, ItemSpec::rune()),
        (descriptor.orb, ItemCategory::Orb, ItemSpec::orb()),
    ];
    for (needed, category, spec) in wanted {
        if !needed || level.count_items(category) > 0 {
            continue;
        }
        let free: Vec<Position> = level
            .positions()
            .filter(|p| {
                level.terrain(*p) == Terrain::Floor
                    && level.tile(*p).is_some_and(|t| t.items.is_empty() && t.occupant.is_none())
            })
            .collect();
        let p = *rng.choose(&free).expect("level has free floor for its rune/orb");
        let id = level.next_item_id();
        level.place_item(p, Item { id, spec: Arc::new(spec) });
    }
}
