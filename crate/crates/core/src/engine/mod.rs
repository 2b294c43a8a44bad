//! Game-state transitions: player actions, monster turns, combat, field of
//! view and the agent-visible observation.

mod action;
pub mod combat;
mod event;
pub mod fov;
mod observe;
mod player;
pub mod rules;
mod shifting;
mod state;
mod step;

pub use action::Action;
pub use combat::{apply_hydra_rule, resolve_melee, AttackProfile, DefenseProfile, MeleeOutcome};
pub use event::{Event, RefusalReason, StatusKind, Who};
pub use fov::{compute_fov, compute_fov_with, FieldOfView, FOV_RADIUS};
pub use observe::{
    expected_visible, observe, InventoryEntry, ItemView, MonsterView, ObservedState, PlayerView, RememberedMap,
    TileMemory, VisibleTile,
};
pub use player::{spend_experience, ActionSpeed, Attributes, PlayerCharacter, Skill};
pub use shifting::{mutate_unseen, ShiftReport};
pub use state::{GameState, GameStatus, WinCondition};
pub use step::{apply_item_use, check_win, describe, monster_turns, step, StepResult};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("the game is over; no further actions are accepted")]
    Terminal,
    #[error("macro action `{0}` must be expanded before it reaches the engine")]
    MacroNotPrimitive(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("{0} is already at the maximum level")]
    SkillCapped(Skill),
    #[error("raising {skill} needs {needed} xp but only {available} is available")]
    NotEnoughXp { skill: Skill, needed: u32, available: u32 },
}
