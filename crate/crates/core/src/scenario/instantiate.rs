use std::sync::{Arc, OnceLock};

use super::parse::default_catalog;
use super::{ScenarioError, ScenarioSpec};
use crate::engine::GameState;
use crate::world::{
    Item, ItemCategory, ItemSpec, LevelId, LevelMap, Monster, MonsterSpec, SpecIndex, Stair, StairKind, Terrain,
};

pub const SCENARIO_BRANCH: &str = "Scenario";

enum Entity {
    Monster(Arc<MonsterSpec>),
    Item(Arc<ItemSpec>),
}

fn default_specs() -> Arc<SpecIndex> {
    static SPECS: OnceLock<Arc<SpecIndex>> = OnceLock::new();
    SPECS.get_or_init(|| Arc::new(SpecIndex::new(default_catalog()))).clone()
}

fn first_item(specs: &SpecIndex, category: ItemCategory) -> Option<Arc<ItemSpec>> {
    default_catalog()
        .first_of(category)
        .and_then(|spec| specs.items.get(&spec.id))
        .or_else(|| specs.items.values().find(|s| s.category == category))
        .cloned()
}

fn resolve(spec: &ScenarioSpec, specs: &SpecIndex, glyph: char) -> Option<Entity> {
    if let Some(id) = spec.legend.get(&glyph) {
        return specs
            .monsters
            .get(id)
            .map(|m| Entity::Monster(m.clone()))
            .or_else(|| specs.items.get(id).map(|i| Entity::Item(i.clone())));
    }
    match glyph {
        '0' => specs.items.get("orb").cloned().map(Entity::Item),
        '*' => specs.items.get("rune").cloned().map(Entity::Item),
        '!' => first_item(specs, ItemCategory::Potion).map(Entity::Item),
        '?' => first_item(specs, ItemCategory::Scroll).map(Entity::Item),
        '(' => first_item(specs, ItemCategory::Weapon).map(Entity::Item),
        g if g.is_ascii_lowercase() => specs.monsters.values().find(|m| m.glyph == g).cloned().map(Entity::Monster),
        _ => None,
    }
}

/// Builds a single-level game with the built-in catalog.
pub fn instantiate_scenario(spec: &ScenarioSpec, seed: u64) -> Result<GameState, ScenarioError> {
    instantiate_with(spec, seed, default_specs())
}

/// Builds a single-level game. Staircases lead nowhere; under `orb_exit`
/// the `<` staircase is the exit.
pub fn instantiate_with(spec: &ScenarioSpec, seed: u64, specs: Arc<SpecIndex>) -> Result<GameState, ScenarioError> {
    let id = LevelId(0);
    let mut level =
        LevelMap::filled(id, &spec.name, SCENARIO_BRANCH, 1, spec.rows() as u32, spec.cols() as u32, Terrain::Wall);
    level.shifting = spec.header.shifting;
    let mut start = None;
    for (pos, glyph) in spec.cells() {
        let terrain = match glyph {
            '#' => Terrain::Wall,
            '~' => Terrain::ShallowWater,
            'W' => Terrain::DeepWater,
            'L' => Terrain::Lava,
            '<' => Terrain::StairsUp,
            '>' => Terrain::StairsDown,
            _ => Terrain::Floor,
        };
        level.set_terrain(pos, terrain);
        match glyph {
            '#' | '.' | '~' | 'W' | 'L' => {}
            '@' => start = Some(pos),
            '<' | '>' => level.stairs.push(Stair {
                position: pos,
                kind: if glyph == '<' { StairKind::Up } else { StairKind::Down },
                destination: None,
            }),
            _ => match resolve(spec, &specs, glyph) {
                Some(Entity::Monster(m)) => {
                    let actor = level.next_actor_id();
                    level.place_monster(Monster::spawn(actor, m, pos));
                }
                Some(Entity::Item(i)) => {
                    let item = Item { id: level.next_item_id(), spec: i };
                    level.place_item(pos, item);
                }
                None => {
                    return Err(ScenarioError {
                        line: 0,
                        col: pos.col as usize + 1,
                        message: format!("glyph `{glyph}` at row {} does not resolve", pos.row),
                    })
                }
            },
        }
    }
    let start = start.ok_or_else(|| ScenarioError { line: 0, col: 0, message: "no player start".into() })?;
    let mut kit = Vec::new();
    for id in &spec.header.inventory {
        let item = specs
            .items
            .get(id)
            .ok_or_else(|| ScenarioError { line: 0, col: 0, message: format!("unknown item `{id}`") })?;
        kit.push(item.clone());
    }
    Ok(GameState::from_level(seed, level, start, spec.header.win, specs, &kit))
}
