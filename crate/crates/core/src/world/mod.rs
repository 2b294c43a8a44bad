//! Deterministic dungeon construction: layout, terrain, and population.

mod catalog;
mod config;
mod connectivity;
mod generate;
mod layout;
mod level;
mod populate;
mod terrain;

pub use catalog::{
    ActorId, Brand, Catalog, Item, ItemCategory, ItemId, ItemSpec, Monster, MonsterFlag, MonsterSpec, SpecIndex,
    Statuses, WeaponClass, HYDRA_START_HEADS,
};
pub use config::{BranchConfig, DungeonConfig, WorldConfig, DEFAULT_CONFIG_TOML, MAX_RUNES, MIN_RUNES};
pub use connectivity::{reachable_from, validate_connectivity, ConnectivityReport};
pub use generate::generate_level;
pub use layout::{dungeon_layout, LevelDescriptor, MAIN_BRANCH, ZOT_BRANCH};
pub use level::{LevelId, LevelMap, Stair, StairKind, Tile};
pub use populate::{populate_level, STAIR_SAFE_RADIUS};
pub use terrain::Terrain;

use crate::rng::{RngStream, Subsystem};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum WorldError {
    #[error("invalid dungeon configuration: {0}")]
    Config(String),
    #[error("invalid catalog: {0}")]
    Catalog(String),
}

/// Generates and populates every level of a dungeon.
pub fn build_dungeon(
    seed: u64,
    config: &DungeonConfig,
    specs: &SpecIndex,
) -> Result<(Vec<LevelDescriptor>, Vec<LevelMap>), WorldError> {
    let layout = dungeon_layout(config)?;
    let levels = layout
        .iter()
        .map(|d| {
            let base = generate_level(seed, d, config);
            let mut rng = RngStream::for_subsystem(seed, Subsystem::Populate, d.id.0 as u64);
            populate_level(base, d, specs, config, &mut rng)
        })
        .collect();
    Ok((layout, levels))
}
