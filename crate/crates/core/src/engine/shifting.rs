use std::collections::VecDeque;

use super::rules::SHIFT_FRACTION;
use crate::geom::Position;
use crate::rng::RngStream;
use crate::world::{LevelMap, Terrain};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ShiftReport {
    pub flipped: Vec<Position>,
    pub carved: Vec<Position>,
}

fn eligible(level: &LevelMap, p: Position, visible: &impl Fn(Position) -> bool, player: Position) -> bool {
    if p == player || level.is_border(p) || visible(p) {
        return false;
    }
    let tile = level.tile(p).expect("in bounds");
    matches!(tile.terrain, Terrain::Floor | Terrain::Wall) && tile.occupant.is_none() && tile.items.is_empty()
}

/// One turn of drift on a shifting level. A `SHIFT_FRACTION` share of the
/// eligible tiles (unseen, interior, empty, plain floor or wall) swap between
/// floor and wall. Any passable region cut off from the player is then
/// reconnected by carving through unseen walls, so visible tiles never change.
pub fn mutate_unseen(
    level: &mut LevelMap,
    visible: impl Fn(Position) -> bool,
    player: Position,
    rng: &mut RngStream,
) -> ShiftReport {
    let mut report = ShiftReport::default();
    if !level.shifting {
        return report;
    }
    let mut pool: Vec<Position> = level.positions().filter(|p| eligible(level, *p, &visible, player)).collect();
    let count = ((pool.len() as f64) * SHIFT_FRACTION).round() as usize;
    for i in 0..count {
        let j = i + rng.index(pool.len() - i);
        pool.swap(i, j);
        let p = pool[i];
        let next = if level.terrain(p) == Terrain::Wall { Terrain::Floor } else { Terrain::Wall };
        level.set_terrain(p, next);
        report.flipped.push(p);
    }
    if !report.flipped.is_empty() {
        report.carved = reconnect(level, &visible, player);
    }
    report
}

fn carvable(level: &LevelMap, p: Position, visible: &impl Fn(Position) -> bool) -> bool {
    level.terrain(p) == Terrain::Wall && !level.is_border(p) && !visible(p)
}

/// Joins every passable component to the one holding `anchor` (the player).
fn reconnect(level: &mut LevelMap, visible: &impl Fn(Position) -> bool, anchor: Position) -> Vec<Position> {
    let cols = level.cols as usize;
    let idx = |p: Position| p.row as usize * cols + p.col as usize;
    let mut carved = Vec::new();
    loop {
        let main = crate::world::reachable_from(level, anchor);
        if level.passable_positions().all(|p| main[idx(p)]) {
            return carved;
        }
        // 0-1 search outward from the main region; passable tiles are free
        // and carvable walls cost one.
        let n = level.rows as usize * cols;
        let mut dist = vec![u32::MAX; n];
        let mut prev: Vec<Option<Position>> = vec![None; n];
        let mut deque = VecDeque::new();
        for p in level.passable_positions().filter(|p| main[idx(*p)]) {
            dist[idx(p)] = 0;
            deque.push_back(p);
        }
        let mut reached = None;
        while let Some(p) = deque.pop_front() {
            if level.is_passable(p) && !main[idx(p)] {
                reached = Some(p);
                break;
            }
            for q in level.neighbours4(p) {
                let w = if level.is_passable(q) {
                    0
                } else if carvable(level, q, visible) {
                    1
                } else {
                    continue;
                };
                let d = dist[idx(p)] + w;
                if d < dist[idx(q)] {
                    dist[idx(q)] = d;
                    prev[idx(q)] = Some(p);
                    if w == 0 {
                        deque.push_front(q);
                    } else {
                        deque.push_back(q);
                    }
                }
            }
        }
        let Some(mut p) = reached else {
            // Pre-existing disconnection that no unseen wall can bridge.
            return carved;
        };
        while let Some(q) = prev[idx(p)] {
            if level.terrain(p) == Terrain::Wall {
                level.set_terrain(p, Terrain::Floor);
                carved.push(p);
            }
            p = q;
        }
    }
}
