use std::fmt;

use serde::{Deserialize, Serialize};

use super::player::Skill;
use crate::geom::{Direction, Position};

/// Everything an agent can ask for. `TravelTo` and `Throw` are macros that
/// the episode driver expands into primitives; the engine rejects them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum Action {
    Move { dir: Direction },
    Attack { dir: Direction },
    Pickup,
    Ascend,
    Descend,
    Quaff { slot: usize },
    Read {
        slot: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        target: Option<Position>,
    },
    Wield { slot: usize },
    SpendXp { skill: Skill },
    Wait,
    /// Releases the wielded weapon at a visible tile; the last step of `Throw`.
    Fire { target: Position },
    TravelTo { target: Position },
    Throw { slot: usize, target: Position },
}

impl Action {
    pub fn is_macro(&self) -> bool {
        matches!(self, Action::TravelTo { .. } | Action::Throw { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Action::Move { .. } => "move",
            Action::Attack { .. } => "attack",
            Action::Pickup => "pickup",
            Action::Ascend => "ascend",
            Action::Descend => "descend",
            Action::Quaff { .. } => "quaff",
            Action::Read { .. } => "read",
            Action::Wield { .. } => "wield",
            Action::SpendXp { .. } => "spend_xp",
            Action::Wait => "wait",
            Action::Fire { .. } => "fire",
            Action::TravelTo { .. } => "travel_to",
            Action::Throw { .. } => "throw",
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Move { dir } | Action::Attack { dir } => write!(f, "{} {dir}", self.name()),
            Action::Quaff { slot } | Action::Wield { slot } => write!(f, "{} {slot}", self.name()),
            Action::Read { slot, target: Some(t) } => write!(f, "read {slot} {t}"),
            Action::Read { slot, target: None } => write!(f, "read {slot}"),
            Action::SpendXp { skill } => write!(f, "spend_xp {skill}"),
            Action::Fire { target } | Action::TravelTo { target } => write!(f, "{} {target}", self.name()),
            Action::Throw { slot, target } => write!(f, "throw {slot} {target}"),
            _ => f.write_str(self.name()),
        }
    }
}
