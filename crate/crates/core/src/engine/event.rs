use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::player::Skill;
use crate::geom::Position;
use crate::world::{ActorId, ItemId, LevelId};

/// Either the player or a monster; serialized as `"player"` or a monster id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Who {
    Player,
    Monster(ActorId),
}

impl fmt::Display for Who {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Who::Player => f.write_str("player"),
            Who::Monster(id) => write!(f, "{id}"),
        }
    }
}

impl Serialize for Who {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Who {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        if s == "player" {
            Ok(Who::Player)
        } else {
            s.parse().map(Who::Monster).map_err(serde::de::Error::custom)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RefusalReason {
    Blocked,
    Occupied,
    NoTarget,
    NothingHere,
    InventoryFull,
    NotOnStairs,
    NeedRunes,
    NoOrb,
    NoDestination,
    EmptySlot,
    WrongItem,
    NeedTarget,
    NotVisible,
    NotPassable,
    OutOfRange,
    NothingWielded,
    SkillCapped,
    NotEnoughXp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StatusKind {
    Poisoned,
    Slowed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum Event {
    Moved { from: Position, to: Position },
    Hit { attacker: Who, target: Who, damage: i32 },
    Missed { attacker: Who, target: Who },
    Killed { actor: ActorId, species: String, xp: u32 },
    PickedUp { item: ItemId, kind: String },
    Leveled { skill: Skill, value: u8 },
    Blinked { from: Position, to: Position },
    Healed { amount: i32 },
    Consumed { item: ItemId, kind: String },
    Wielded { item: ItemId },
    Thrown { item: ItemId, target: Position },
    HeadsGrew { actor: ActorId, heads: u32 },
    StatusApplied { actor: ActorId, status: StatusKind, turns: u32 },
    LevelChanged { from: LevelId, to: LevelId },
    Died { killer: Who },
    Won,
    Refused { reason: RefusalReason },
}

impl Event {
    pub fn is_terminal(&self) -> bool {
        matches!(self, Event::Died { .. } | Event::Won)
    }
}
