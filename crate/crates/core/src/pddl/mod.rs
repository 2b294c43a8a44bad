//! PDDL view of the observed state: a static domain of non-combat actions,
//! per-observation problems, a small breadth-first solver and plan grounding.

mod ground;
pub mod sexpr;
mod solve;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::engine::ObservedState;
use crate::geom::Position;
use crate::world::{ItemCategory, ItemId, LevelId};

pub use ground::{ground_plan, ground_steps, GroundError};
pub use solve::{solve, PlanStep};

pub const DOMAIN_NAME: &str = "crawl";

/// Predicates of the domain, with their typed parameter lists.
pub const PREDICATES: &[(&str, &[&str])] = &[
    ("at", &["tile"]),
    ("adjacent", &["tile", "tile"]),
    ("passable", &["tile"]),
    ("item-at", &["item", "tile"]),
    ("holding", &["item"]),
    ("stairs-down", &["tile"]),
    ("stairs-up", &["tile"]),
];

pub const ACTIONS: &[&str] = &["move", "pickup", "descend", "ascend"];

const DOMAIN: &str = "\
(define (domain crawl)
  (:requirements :strips :typing)
  (:types tile item)
  (:predicates
    (at ?t - tile)
    (adjacent ?t1 - tile ?t2 - tile)
    (passable ?t - tile)
    (item-at ?i - item ?t - tile)
    (holding ?i - item)
    (stairs-down ?t - tile)
    (stairs-up ?t - tile))
  (:action move
    :parameters (?from - tile ?to - tile)
    :precondition (and (at ?from) (adjacent ?from ?to) (passable ?to))
    :effect (and (at ?to) (not (at ?from))))
  (:action pickup
    :parameters (?i - item ?t - tile)
    :precondition (and (at ?t) (item-at ?i ?t))
    :effect (and (holding ?i) (not (item-at ?i ?t))))
  (:action descend
    :parameters (?t - tile)
    :precondition (and (at ?t) (stairs-down ?t))
    :effect (not (at ?t)))
  (:action ascend
    :parameters (?t - tile)
    :precondition (and (at ?t) (stairs-up ?t))
    :effect (not (at ?t))))
";

/// The static domain. Moves follow 4-connected adjacency; leaving the level
/// by stairs ends the modelled world, since problems cover one level.
pub fn export_domain() -> &'static str {
    DOMAIN
}

pub fn tile_name(level: LevelId, p: Position) -> String {
    format!("t_{}_{}_{}", level.0, p.row, p.col)
}

pub fn item_name(id: ItemId) -> String {
    format!("i_{}_{}", id.level, id.serial)
}

pub fn parse_tile_name(name: &str) -> Option<(LevelId, Position)> {
    let mut parts = name.strip_prefix("t_")?.split('_');
    let level = parts.next()?.parse().ok()?;
    let row = parts.next()?.parse().ok()?;
    let col = parts.next()?.parse().ok()?;
    parts.next().is_none().then_some((LevelId(level), Position::new(row, col)))
}

pub fn parse_item_name(name: &str) -> Option<ItemId> {
    let (level, serial) = name.strip_prefix("i_")?.split_once('_')?;
    Some(ItemId::new(level.parse().ok()?, serial.parse().ok()?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "goal", rename_all = "snake_case")]
pub enum PddlGoal {
    At { pos: Position },
    Holding { item: ItemId },
    HasRunes { count: usize },
    HasOrb,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PddlError {
    #[error("goal tile {0} has never been seen")]
    UnseenTile(Position),
    #[error("goal item {0} has never been seen")]
    UnseenItem(ItemId),
    #[error("goal needs {needed} runes but only {known} are known")]
    NotEnoughRunes { needed: usize, known: usize },
    #[error("the orb has not been seen")]
    UnseenOrb,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Fact {
    At(String),
    Adjacent(String, String),
    Passable(String),
    ItemAt(String, String),
    Holding(String),
    StairsDown(String),
    StairsUp(String),
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fact::At(t) => write!(f, "(at {t})"),
            Fact::Adjacent(a, b) => write!(f, "(adjacent {a} {b})"),
            Fact::Passable(t) => write!(f, "(passable {t})"),
            Fact::ItemAt(i, t) => write!(f, "(item-at {i} {t})"),
            Fact::Holding(i) => write!(f, "(holding {i})"),
            Fact::StairsDown(t) => write!(f, "(stairs-down {t})"),
            Fact::StairsUp(t) => write!(f, "(stairs-up {t})"),
        }
    }
}

/// A grounded planning problem over the remembered part of one level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Problem {
    pub name: String,
    pub tiles: BTreeSet<String>,
    pub items: BTreeSet<String>,
    pub init: Vec<Fact>,
    pub goal: Vec<Fact>,
}

impl Problem {
    /// Closed world over seen tiles: unseen tiles are simply absent.
    pub fn from_observation(obs: &ObservedState, goal: PddlGoal) -> Result<Problem, PddlError> {
        let level = obs.level;
        let mut tiles = BTreeSet::new();
        let mut items = BTreeSet::new();
        let mut init = Vec::new();
        let mut floor_items: BTreeMap<ItemId, Position> = BTreeMap::new();
        for (p, memory) in obs.remembered.iter() {
            let name = tile_name(level, p);
            tiles.insert(name.clone());
            if memory.terrain.is_passable() {
                init.push(Fact::Passable(name.clone()));
            }
            match memory.terrain {
                crate::world::Terrain::StairsDown => init.push(Fact::StairsDown(name.clone())),
                crate::world::Terrain::StairsUp => init.push(Fact::StairsUp(name.clone())),
                _ => {}
            }
            for q in [Position::new(p.row.wrapping_sub(1), p.col), Position::new(p.row + 1, p.col)]
                .into_iter()
                .chain([Position::new(p.row, p.col.wrapping_sub(1)), Position::new(p.row, p.col + 1)])
            {
                if obs.remembered.contains(q) {
                    init.push(Fact::Adjacent(name.clone(), tile_name(level, q)));
                }
            }
            for item in &memory.items {
                items.insert(item_name(item.id));
                floor_items.insert(item.id, p);
                init.push(Fact::ItemAt(item_name(item.id), name.clone()));
            }
        }
        let mut held: Vec<ItemId> = obs.inventory.iter().map(|e| e.item).collect();
        held.extend(obs.player.runes.iter().copied());
        for id in &held {
            items.insert(item_name(*id));
            init.push(Fact::Holding(item_name(*id)));
        }
        init.push(Fact::At(tile_name(level, obs.player.position)));
        tiles.insert(tile_name(level, obs.player.position));

        let goal = match goal {
            PddlGoal::At { pos } => {
                if !obs.remembered.contains(pos) {
                    return Err(PddlError::UnseenTile(pos));
                }
                vec![Fact::At(tile_name(level, pos))]
            }
            PddlGoal::Holding { item } => {
                if !held.contains(&item) && !floor_items.contains_key(&item) {
                    return Err(PddlError::UnseenItem(item));
                }
                vec![Fact::Holding(item_name(item))]
            }
            PddlGoal::HasRunes { count } => {
                let mut runes: Vec<ItemId> = obs.player.runes.clone();
                runes.extend(obs.remembered.iter().flat_map(|(_, m)| {
                    m.items.iter().filter(|i| i.category == ItemCategory::Rune).map(|i| i.id)
                }));
                if runes.len() < count {
                    return Err(PddlError::NotEnoughRunes { needed: count, known: runes.len() });
                }
                runes.iter().take(count).map(|id| Fact::Holding(item_name(*id))).collect()
            }
            PddlGoal::HasOrb => {
                if obs.player.has_orb {
                    Vec::new()
                } else {
                    let orb = obs
                        .remembered
                        .iter()
                        .flat_map(|(_, m)| m.items.iter())
                        .find(|i| i.category == ItemCategory::Orb)
                        .ok_or(PddlError::UnseenOrb)?;
                    vec![Fact::Holding(item_name(orb.id))]
                }
            }
        };
        init.sort();
        init.dedup();
        Ok(Problem { name: format!("{DOMAIN_NAME}-l{}-a{}", level.0, obs.clock_aut), tiles, items, init, goal })
    }

    pub fn to_pddl(&self) -> String {
        let mut out = format!("(define (problem {})\n  (:domain {DOMAIN_NAME})\n  (:objects", self.name);
        for t in &self.tiles {
            out += &format!("\n    {t}");
        }
        if !self.tiles.is_empty() {
            out += " - tile";
        }
        for i in &self.items {
            out += &format!("\n    {i}");
        }
        if !self.items.is_empty() {
            out += " - item";
        }
        out += ")\n  (:init";
        for fact in &self.init {
            out += &format!("\n    {fact}");
        }
        out += ")\n  (:goal (and";
        for fact in &self.goal {
            out += &format!(" {fact}");
        }
        out += ")))\n";
        out
    }
}

/// Problem text for `obs` and `goal`.
pub fn export_problem(obs: &ObservedState, goal: PddlGoal) -> Result<String, PddlError> {
    Problem::from_observation(obs, goal).map(|p| p.to_pddl())
}

/// Exports successive problems of one episode. Every object named by an
/// earlier export stays declared, so the object set never shrinks.
#[derive(Debug, Clone, Default)]
pub struct ProblemExporter {
    tiles: BTreeSet<String>,
    items: BTreeSet<String>,
}

impl ProblemExporter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn problem(&mut self, obs: &ObservedState, goal: PddlGoal) -> Result<Problem, PddlError> {
        let mut problem = Problem::from_observation(obs, goal)?;
        self.tiles.extend(problem.tiles.iter().cloned());
        self.items.extend(problem.items.iter().cloned());
        problem.tiles = self.tiles.clone();
        problem.items = self.items.clone();
        Ok(problem)
    }

    pub fn export(&mut self, obs: &ObservedState, goal: PddlGoal) -> Result<String, PddlError> {
        self.problem(obs, goal).map(|p| p.to_pddl())
    }
}
