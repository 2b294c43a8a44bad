use std::collections::VecDeque;

use crate::engine::{Action, ObservedState};
use crate::geom::{Direction, Position};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MacroError {
    #[error("travel target ({}, {}) is not reachable over remembered tiles", .0.row, .0.col)]
    Unreachable(Position),
    #[error("already standing on ({}, {})", .0.row, .0.col)]
    AlreadyThere(Position),
    #[error("slot {0} does not hold a weapon")]
    NotAWeapon(usize),
    #[error("`{0}` is a primitive action, not a macro")]
    NotAMacro(String),
}

/// Expands a macro into primitives using only what `obs` shows.
pub fn expand_macro(action: &Action, obs: &ObservedState) -> Result<Vec<Action>, MacroError> {
    match action {
        Action::TravelTo { target } => {
            Ok(travel_path(obs, *target)?.into_iter().map(|dir| Action::Move { dir }).collect())
        }
        Action::Throw { slot, target } => {
            obs.inventory_slot(*slot).filter(|e| e.weapon_class.is_some()).ok_or(MacroError::NotAWeapon(*slot))?;
            Ok(vec![Action::Wield { slot: *slot }, Action::Fire { target: *target }])
        }
        other => Err(MacroError::NotAMacro(other.name().to_string())),
    }
}

/// Shortest 8-way path over remembered passable tiles, as directions.
pub fn travel_path(obs: &ObservedState, target: Position) -> Result<Vec<Direction>, MacroError> {
    let start = obs.player.position;
    if start == target {
        return Err(MacroError::AlreadyThere(target));
    }
    let map = &obs.remembered;
    if !map.is_passable(target) {
        return Err(MacroError::Unreachable(target));
    }
    let cols = map.cols as usize;
    let idx = |p: Position| p.row as usize * cols + p.col as usize;
    let mut prev: Vec<Option<(Position, Direction)>> = vec![None; map.rows as usize * cols];
    let mut seen = vec![false; map.rows as usize * cols];
    seen[idx(start)] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(p) = queue.pop_front() {
        if p == target {
            let mut dirs = Vec::new();
            let mut cur = p;
            while let Some((from, dir)) = prev[idx(cur)] {
                dirs.push(dir);
                cur = from;
            }
            dirs.reverse();
            return Ok(dirs);
        }
        for dir in Direction::ALL {
            let Some(q) = p.step(dir) else { continue };
            if q.row < map.rows && q.col < map.cols && !seen[idx(q)] && map.is_passable(q) {
                seen[idx(q)] = true;
                prev[idx(q)] = Some((p, dir));
                queue.push_back(q);
            }
        }
    }
    Err(MacroError::Unreachable(target))
}
