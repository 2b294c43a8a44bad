//! A scripted player that reads the true map, used for golden runs.

use std::collections::VecDeque;

use crawlbench::engine::{step, Action, Event, GameState, GameStatus, StepResult, WinCondition};
use crawlbench::geom::{Direction, Position};
use crawlbench::world::{ItemCategory, LevelId, LevelMap, StairKind, WorldConfig};

/// Three main levels each holding a rune, the orb on Zot, no monsters.
pub fn golden_world() -> WorldConfig {
    let mut w = WorldConfig::default();
    w.dungeon.main_depth = 3;
    w.dungeon.branches.clear();
    w.dungeon.rune_count = 3;
    w.dungeon.level_rows = 16;
    w.dungeon.level_cols = 24;
    w.dungeon.monster_density = 0.0;
    w.dungeon.item_density = 0.0;
    w
}

fn path(level: &LevelMap, from: Position, to: Position) -> Option<Vec<Direction>> {
    let idx = |p: Position| (p.row * level.cols + p.col) as usize;
    let mut prev = vec![None; (level.rows * level.cols) as usize];
    let mut seen = vec![false; prev.len()];
    seen[idx(from)] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(p) = queue.pop_front() {
        if p == to {
            let mut dirs = Vec::new();
            let mut cur = p;
            while let Some((q, d)) = prev[idx(cur)] {
                dirs.push(d);
                cur = q;
            }
            dirs.reverse();
            return Some(dirs);
        }
        for d in Direction::ALL {
            if let Some(q) = p.step(d).filter(|q| level.in_bounds(*q) && level.is_passable(*q)) {
                if !seen[idx(q)] {
                    seen[idx(q)] = true;
                    prev[idx(q)] = Some((p, d));
                    queue.push_back(q);
                }
            }
        }
    }
    None
}

pub struct Walker {
    pub game: GameState,
    pub log: Vec<(Action, StepResult)>,
}

impl Walker {
    pub fn new(game: GameState) -> Self {
        Walker { game, log: Vec::new() }
    }

    pub fn act(&mut self, action: Action) -> Result<&StepResult, String> {
        let result = step(&mut self.game, &action).map_err(|e| e.to_string())?;
        if let Some(Event::Refused { reason }) = result.events.iter().find(|e| matches!(e, Event::Refused { .. })) {
            return Err(format!("{action} refused: {reason:?}"));
        }
        self.log.push((action, result));
        Ok(&self.log.last().unwrap().1)
    }

    /// Walks to `target` on the current level, replanning every step.
    pub fn walk_to(&mut self, target: Position) -> Result<(), String> {
        for _ in 0..10_000 {
            let here = self.game.player.position;
            if here == target {
                return Ok(());
            }
            let dirs = path(self.game.current_level(), here, target).ok_or("no path")?;
            self.act(Action::Move { dir: dirs[0] })?;
        }
        Err("walk did not finish".into())
    }

    fn stair_to(&self, dest: Option<LevelId>) -> Option<(Position, StairKind)> {
        self.game.current_level().stairs.iter().find(|s| s.destination == dest).map(|s| (s.position, s.kind))
    }

    /// Follows staircases to level `dest` along the shortest level path.
    pub fn go_to_level(&mut self, dest: LevelId) -> Result<(), String> {
        let route = level_route(&self.game, self.game.player.level, dest).ok_or("no route between levels")?;
        for next in route {
            let (pos, kind) = self.stair_to(Some(next)).ok_or("missing staircase")?;
            self.walk_to(pos)?;
            self.act(if kind == StairKind::Down { Action::Descend } else { Action::Ascend })?;
        }
        Ok(())
    }

    pub fn collect(&mut self, category: ItemCategory) -> Result<(), String> {
        let pos = self.game.current_level().find_item(category).ok_or("item not on this level")?;
        self.walk_to(pos)?;
        self.act(Action::Pickup).map(|_| ())
    }

    /// Handles the whole game: every rune, then the orb, then the exit.
    pub fn golden_run(&mut self) -> Result<GameStatus, String> {
        assert_eq!(self.game.win, WinCondition::OrbExit);
        let rune_levels: Vec<LevelId> =
            self.game.levels.iter().filter(|l| l.count_items(ItemCategory::Rune) > 0).map(|l| l.id).collect();
        for level in rune_levels {
            self.go_to_level(level)?;
            self.collect(ItemCategory::Rune)?;
        }
        let orb = self.game.levels.iter().find(|l| l.count_items(ItemCategory::Orb) > 0).map(|l| l.id).ok_or("no orb")?;
        self.go_to_level(orb)?;
        self.collect(ItemCategory::Orb)?;
        self.go_to_level(LevelId(0))?;
        let (exit, _) = self.stair_to(None).ok_or("no exit")?;
        self.walk_to(exit)?;
        self.act(Action::Ascend)?;
        Ok(self.game.status)
    }
}

fn level_route(game: &GameState, from: LevelId, to: LevelId) -> Option<Vec<LevelId>> {
    let n = game.levels.len();
    let mut prev = vec![None; n];
    let mut seen = vec![false; n];
    seen[from.0 as usize] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(l) = queue.pop_front() {
        if l == to {
            let mut route = Vec::new();
            let mut cur = l;
            while let Some(p) = prev[cur.0 as usize] {
                route.push(cur);
                cur = p;
            }
            route.reverse();
            return Some(route);
        }
        for s in &game.level(l).stairs {
            if let Some(d) = s.destination {
                if !seen[d.0 as usize] {
                    seen[d.0 as usize] = true;
                    prev[d.0 as usize] = Some(l);
                    queue.push_back(d);
                }
            }
        }
    }
    None
}
