//! Hand-authored single-level scenarios.
//!
//! A scenario file is UTF-8 text: `key: value` header lines, a `map:` line,
//! the grid rows, then an optional `legend:` section of `glyph = entity` lines.
//!
//! ```text
//! name: tiny
//! seed: 1
//! shifting: false
//! win: reach_orb
//! map:
//! #####
//! #@.0#
//! #####
//! ```

mod builtins;
mod instantiate;
mod parse;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::engine::WinCondition;
use crate::geom::Position;

pub use builtins::{builtin, builtin_names, BUILTINS};
pub use instantiate::{instantiate_scenario, instantiate_with};
pub use parse::{parse_scenario, parse_scenario_with};

/// Glyphs with a fixed meaning that the legend may not redefine.
pub const STRUCTURAL_GLYPHS: &[char] = &['#', '.', '@', '0', '*', '<', '>', '~', 'W', 'L'];
/// Item glyphs whose default entity the legend may override.
pub const ITEM_GLYPHS: &[char] = &['!', '?', '('];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioHeader {
    pub default_seed: u64,
    pub shifting: bool,
    pub turn_limit: Option<u64>,
    pub win: WinCondition,
    /// Item ids the player starts with; the first weapon is wielded.
    pub inventory: Vec<String>,
}

impl Default for ScenarioHeader {
    fn default() -> Self {
        ScenarioHeader { default_seed: 0, shifting: false, turn_limit: None, win: WinCondition::ReachOrb, inventory: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub name: String,
    pub header: ScenarioHeader,
    pub grid: Vec<String>,
    pub legend: BTreeMap<char, String>,
}

impl ScenarioSpec {
    pub fn rows(&self) -> usize {
        self.grid.len()
    }

    pub fn cols(&self) -> usize {
        self.grid.first().map_or(0, |r| r.chars().count())
    }

    pub fn cells(&self) -> impl Iterator<Item = (Position, char)> + '_ {
        self.grid.iter().enumerate().flat_map(|(r, row)| {
            row.chars().enumerate().map(move |(c, ch)| (Position::new(r as u32, c as u32), ch))
        })
    }

    pub fn player_start(&self) -> Position {
        self.cells().find(|(_, ch)| *ch == '@').map(|(p, _)| p).expect("validated spec has a start")
    }

    pub fn find(&self, glyph: char) -> Vec<Position> {
        self.cells().filter(|(_, ch)| *ch == glyph).map(|(p, _)| p).collect()
    }
}

/// A parse or validation failure at a 1-based source location.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {col}: {message}")]
pub struct ScenarioError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ScenarioError {
    fn at(line: usize, col: usize, message: impl Into<String>) -> Self {
        ScenarioError { line, col, message: message.into() }
    }
}

pub fn win_name(win: WinCondition) -> &'static str {
    match win {
        WinCondition::OrbExit => "orb_exit",
        WinCondition::ReachOrb => "reach_orb",
        WinCondition::KillAll => "kill_all",
    }
}

/// Canonical text form; `parse_scenario` reads it back to an equal spec.
pub fn render_scenario(spec: &ScenarioSpec) -> String {
    let mut out = String::new();
    let h = &spec.header;
    out += &format!("name: {}\n", spec.name);
    out += &format!("seed: {}\n", h.default_seed);
    out += &format!("shifting: {}\n", h.shifting);
    if let Some(limit) = h.turn_limit {
        out += &format!("turn_limit: {limit}\n");
    }
    out += &format!("win: {}\n", win_name(h.win));
    if !h.inventory.is_empty() {
        out += &format!("inventory: {}\n", h.inventory.join(", "));
    }
    out += "map:\n";
    for row in &spec.grid {
        out += row;
        out.push('\n');
    }
    if !spec.legend.is_empty() {
        out += "legend:\n";
        for (glyph, id) in &spec.legend {
            out += &format!("{glyph} = {id}\n");
        }
    }
    out
}

impl fmt::Display for ScenarioSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_scenario(self))
    }
}
