use std::collections::VecDeque;

use super::level::LevelMap;
use crate::geom::Position;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectivityReport {
    /// Passable tiles not 4-connected to the start tile, row-major.
    pub unreachable: Vec<Position>,
}

impl ConnectivityReport {
    pub fn is_ok(&self) -> bool {
        self.unreachable.is_empty()
    }
}

/// 4-connected flood fill over passable tiles starting at `start`.
pub fn reachable_from(level: &LevelMap, start: Position) -> Vec<bool> {
    let mut seen = vec![false; level.rows as usize * level.cols as usize];
    if !level.is_passable(start) {
        return seen;
    }
    let idx = |p: Position| p.row as usize * level.cols as usize + p.col as usize;
    let mut queue = VecDeque::from([start]);
    seen[idx(start)] = true;
    while let Some(p) = queue.pop_front() {
        for q in level.neighbours4(p) {
            if !seen[idx(q)] && level.is_passable(q) {
                seen[idx(q)] = true;
                queue.push_back(q);
            }
        }
    }
    seen
}

/// Checks that every passable tile is 4-connected to the start tile (the up
/// staircase when present, else the first passable tile in row-major order).
/// Stairs are passable, so "all stairs reachable" is implied.
pub fn validate_connectivity(level: &LevelMap) -> ConnectivityReport {
    let start = level
        .up_stairs()
        .map(|s| s.position)
        .or_else(|| level.passable_positions().next());
    let Some(start) = start else {
        return ConnectivityReport { unreachable: Vec::new() };
    };
    let seen = reachable_from(level, start);
    let unreachable = level
        .passable_positions()
        .filter(|p| !seen[p.row as usize * level.cols as usize + p.col as usize])
        .collect();
    ConnectivityReport { unreachable }
}
