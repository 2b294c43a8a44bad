use super::{parse_scenario, ScenarioSpec};

/// Scenario sources shipped with the crate, by name.
pub const BUILTINS: &[(&str, &str)] = &[
    ("open_room", include_str!("../../scenarios/open_room.scen")),
    ("small_room", include_str!("../../scenarios/small_room.scen")),
    ("hydra_mace", include_str!("../../scenarios/hydra_mace.scen")),
    ("hydra_axe", include_str!("../../scenarios/hydra_axe.scen")),
    ("labyrinth", include_str!("../../scenarios/labyrinth.scen")),
];

pub fn builtin_names() -> impl Iterator<Item = &'static str> {
    BUILTINS.iter().map(|(name, _)| *name)
}

pub fn builtin(name: &str) -> Option<ScenarioSpec> {
    BUILTINS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| parse_scenario(text).expect("built-in scenarios parse"))
}
