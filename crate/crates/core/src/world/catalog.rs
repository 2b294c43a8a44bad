//! Monster and item definitions, plus the ids of their placed instances.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::WorldError;
use crate::geom::Position;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MonsterFlag {
    Hydra,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonsterSpec {
    pub id: String,
    pub glyph: char,
    pub max_hp: i32,
    pub accuracy: i32,
    pub evasion: i32,
    pub base_damage: i32,
    /// Auts consumed per action.
    pub speed_aut: u32,
    pub xp_value: u32,
    /// Shallowest dungeon depth at which random generation may place this species.
    #[serde(default = "default_min_depth")]
    pub min_depth: u32,
    #[serde(default)]
    pub flags: Vec<MonsterFlag>,
    #[serde(default)]
    pub description: String,
}

fn default_min_depth() -> u32 {
    1
}

impl MonsterSpec {
    pub fn is_hydra(&self) -> bool {
        self.flags.contains(&MonsterFlag::Hydra)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ItemCategory {
    Weapon,
    Potion,
    Scroll,
    Rune,
    Orb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeaponClass {
    Bladed,
    Blunt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Brand {
    Fire,
    Frost,
    Venom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItemSpec {
    pub id: String,
    pub category: ItemCategory,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weapon_class: Option<WeaponClass>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub brand: Option<Brand>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base_damage: Option<i32>,
    /// Relative weight for random floor generation; zero keeps it out of the pool.
    #[serde(default)]
    pub weight: u32,
    #[serde(default)]
    pub description: String,
}

impl ItemSpec {
    pub fn rune() -> Self {
        ItemSpec {
            id: "rune".into(),
            category: ItemCategory::Rune,
            weapon_class: None,
            brand: None,
            base_damage: None,
            weight: 0,
            description: "a rune of Zot, humming with power; it weighs nothing".into(),
        }
    }

    pub fn orb() -> Self {
        ItemSpec {
            id: "orb".into(),
            category: ItemCategory::Orb,
            weapon_class: None,
            brand: None,
            base_damage: None,
            weight: 0,
            description: "the Orb of Zot, the object of your quest".into(),
        }
    }

    /// Runes and the orb are carried without using an inventory slot.
    pub fn takes_slot(&self) -> bool {
        !matches!(self.category, ItemCategory::Rune | ItemCategory::Orb)
    }

    pub fn is_weapon(&self) -> bool {
        self.category == ItemCategory::Weapon
    }

    fn validate(&self) -> Result<(), WorldError> {
        let weaponish = self.weapon_class.is_some() || self.brand.is_some() || self.base_damage.is_some();
        if self.is_weapon() {
            if self.weapon_class.is_none() || self.base_damage.map_or(true, |d| d < 1) {
                return Err(WorldError::Catalog(format!(
                    "weapon `{}` needs a weapon_class and a positive base_damage",
                    self.id
                )));
            }
        } else if weaponish {
            return Err(WorldError::Catalog(format!(
                "non-weapon `{}` must not carry weapon fields",
                self.id
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    pub monsters: Vec<MonsterSpec>,
    pub items: Vec<ItemSpec>,
}

impl Catalog {
    pub fn new(monsters: Vec<MonsterSpec>, items: Vec<ItemSpec>) -> Result<Self, WorldError> {
        let catalog = Catalog { monsters, items };
        catalog.validate()?;
        Ok(catalog)
    }

    pub fn validate(&self) -> Result<(), WorldError> {
        let mut glyphs = HashSet::new();
        let mut ids = HashSet::new();
        for m in &self.monsters {
            if !glyphs.insert(m.glyph) {
                return Err(WorldError::Catalog(format!("duplicate monster glyph `{}`", m.glyph)));
            }
            if !ids.insert(m.id.as_str()) {
                return Err(WorldError::Catalog(format!("duplicate id `{}`", m.id)));
            }
            if m.speed_aut < 1 || m.max_hp < 1 || m.base_damage < 1 || m.xp_value < 1 {
                return Err(WorldError::Catalog(format!(
                    "monster `{}` needs positive hp, damage, speed and xp",
                    m.id
                )));
            }
        }
        for i in &self.items {
            if !ids.insert(i.id.as_str()) {
                return Err(WorldError::Catalog(format!("duplicate id `{}`", i.id)));
            }
            i.validate()?;
        }
        Ok(())
    }

    pub fn monster(&self, id: &str) -> Option<&MonsterSpec> {
        self.monsters.iter().find(|m| m.id == id)
    }

    pub fn monster_by_glyph(&self, glyph: char) -> Option<&MonsterSpec> {
        self.monsters.iter().find(|m| m.glyph == glyph)
    }

    pub fn item(&self, id: &str) -> Option<&ItemSpec> {
        self.items.iter().find(|i| i.id == id)
    }

    /// First item of the category, used for the bare `!`, `?` and `(` scenario glyphs.
    pub fn first_of(&self, category: ItemCategory) -> Option<&ItemSpec> {
        self.items.iter().find(|i| i.category == category)
    }
}

macro_rules! entity_id {
    ($name:ident, $prefix:literal) => {
        /// Level-scoped serial id; stable for the whole game.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name {
            pub level: u16,
            pub serial: u32,
        }

        impl $name {
            pub const fn new(level: u16, serial: u32) -> Self {
                Self { level, serial }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, concat!($prefix, "{}_{}"), self.level, self.serial)
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                let rest = s
                    .strip_prefix($prefix)
                    .ok_or_else(|| format!("`{s}` is not a {} id", stringify!($name)))?;
                let (level, serial) = rest
                    .split_once('_')
                    .ok_or_else(|| format!("`{s}` is not a {} id", stringify!($name)))?;
                Ok(Self {
                    level: level.parse().map_err(|_| format!("bad level in `{s}`"))?,
                    serial: serial.parse().map_err(|_| format!("bad serial in `{s}`"))?,
                })
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                serializer.collect_str(self)
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
                let s = String::deserialize(deserializer)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

entity_id!(ItemId, "i");
entity_id!(ActorId, "m");

/// A concrete item somewhere in the world or in the player's pack.
#[derive(Debug, Clone, PartialEq)]
pub struct Item {
    pub id: ItemId,
    pub spec: Arc<ItemSpec>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Statuses {
    /// Remaining turns of poison.
    pub poisoned: u32,
    /// Remaining turns of slow.
    pub slowed: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Monster {
    pub id: ActorId,
    pub spec: Arc<MonsterSpec>,
    pub hp: i32,
    /// Present exactly for hydras.
    pub heads: Option<u32>,
    pub status: Statuses,
    pub position: Position,
    /// Accumulated auts not yet spent on actions.
    pub energy: i64,
}

pub const HYDRA_START_HEADS: u32 = 4;

impl Monster {
    pub fn spawn(id: ActorId, spec: Arc<MonsterSpec>, position: Position) -> Self {
        let heads = spec.is_hydra().then_some(HYDRA_START_HEADS);
        Monster { id, hp: spec.max_hp, spec, heads, status: Statuses::default(), position, energy: 0 }
    }
}

/// Ordered id → spec lookups shared by the game and population code.
#[derive(Debug, Clone)]
pub struct SpecIndex {
    pub monsters: BTreeMap<String, Arc<MonsterSpec>>,
    pub items: BTreeMap<String, Arc<ItemSpec>>,
}

impl SpecIndex {
    pub fn new(catalog: &Catalog) -> Self {
        let mut items: BTreeMap<String, Arc<ItemSpec>> =
            catalog.items.iter().map(|i| (i.id.clone(), Arc::new(i.clone()))).collect();
        for special in [ItemSpec::rune(), ItemSpec::orb()] {
            items.entry(special.id.clone()).or_insert_with(|| Arc::new(special));
        }
        SpecIndex {
            monsters: catalog.monsters.iter().map(|m| (m.id.clone(), Arc::new(m.clone()))).collect(),
            items,
        }
    }
}
