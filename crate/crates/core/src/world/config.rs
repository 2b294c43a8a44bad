//! Dungeon configuration and the TOML file that carries it.
//!
//! A config file has a `[dungeon]` table (with optional `[[dungeon.branch]]`
//! entries) plus `[[monster]]` and `[[item]]` catalog entries. The committed
//! default lives at `config/default.toml` and is compiled in.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::catalog::{Catalog, ItemSpec, MonsterSpec};
use super::WorldError;

pub const DEFAULT_CONFIG_TOML: &str = include_str!("../../config/default.toml");

pub const MIN_RUNES: u32 = 3;
pub const MAX_RUNES: u32 = 15;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchConfig {
    pub name: String,
    pub entry_depth: u32,
    pub length: u32,
    #[serde(default)]
    pub rune: bool,
    #[serde(default)]
    pub shifting: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DungeonConfig {
    pub main_depth: u32,
    #[serde(default, rename = "branch")]
    pub branches: Vec<BranchConfig>,
    pub rune_count: u32,
    pub level_rows: u32,
    pub level_cols: u32,
    pub monster_density: f64,
    pub item_density: f64,
    /// Turns after which a dungeon episode is cut off; absent means unlimited.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub turn_limit: Option<u64>,
}

impl Default for DungeonConfig {
    fn default() -> Self {
        WorldConfig::default().dungeon
    }
}

impl DungeonConfig {
    pub fn validate(&self) -> Result<(), WorldError> {
        let bad = |msg: String| Err(WorldError::Config(msg));
        if !(MIN_RUNES..=MAX_RUNES).contains(&self.rune_count) {
            return bad(format!(
                "rune_count must be in [{MIN_RUNES}, {MAX_RUNES}], got {}",
                self.rune_count
            ));
        }
        if self.main_depth < 1 {
            return bad("main_depth must be positive".into());
        }
        if self.level_rows < 7 || self.level_cols < 7 {
            return bad(format!(
                "levels must be at least 7x7, got {}x{}",
                self.level_rows, self.level_cols
            ));
        }
        for (name, d) in [("monster_density", self.monster_density), ("item_density", self.item_density)] {
            if !d.is_finite() || d < 0.0 {
                return bad(format!("{name} must be a non-negative number, got {d}"));
            }
        }
        let mut names = std::collections::HashSet::new();
        for b in &self.branches {
            if b.name.is_empty() || b.name == "D" || b.name == "Zot" || !names.insert(b.name.as_str()) {
                return bad(format!("branch name `{}` is empty, reserved or duplicated", b.name));
            }
            if !b.name.chars().all(|c| c.is_ascii_alphanumeric()) {
                return bad(format!("branch name `{}` must be alphanumeric", b.name));
            }
            if b.entry_depth < 1 || b.entry_depth > self.main_depth {
                return bad(format!(
                    "branch `{}` enters at depth {} outside 1..={}",
                    b.name, b.entry_depth, self.main_depth
                ));
            }
            if b.length < 1 {
                return bad(format!("branch `{}` needs a positive length", b.name));
            }
        }
        let branch_runes = self.branches.iter().filter(|b| b.rune).count() as u32;
        if branch_runes > self.rune_count {
            return bad(format!(
                "{branch_runes} rune branches exceed rune_count {}",
                self.rune_count
            ));
        }
        if self.rune_count - branch_runes > self.main_depth {
            return bad(format!(
                "{} runes left for the main dungeon but it has only {} levels",
                self.rune_count - branch_runes,
                self.main_depth
            ));
        }
        Ok(())
    }

    /// Hex SHA-256 of the canonical JSON form; recorded in episode headers.
    pub fn config_hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(json))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorldConfig {
    pub dungeon: DungeonConfig,
    #[serde(default, rename = "monster")]
    pub monsters: Vec<MonsterSpec>,
    #[serde(default, rename = "item")]
    pub items: Vec<ItemSpec>,
}

impl Default for WorldConfig {
    fn default() -> Self {
        WorldConfig::from_toml(DEFAULT_CONFIG_TOML).expect("committed default config is valid")
    }
}

impl WorldConfig {
    pub fn from_toml(text: &str) -> Result<Self, WorldError> {
        let config: WorldConfig =
            toml::from_str(text).map_err(|e| WorldError::Config(e.to_string()))?;
        config.dungeon.validate()?;
        config.catalog()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, WorldError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| WorldError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes to TOML")
    }

    pub fn catalog(&self) -> Result<Catalog, WorldError> {
        Catalog::new(self.monsters.clone(), self.items.clone())
    }

    /// Hex SHA-256 over the dungeon settings and both catalogs.
    pub fn config_hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        hex::encode(Sha256::digest(json))
    }
}
