use std::collections::BTreeMap;
use std::sync::OnceLock;

use super::{ScenarioError, ScenarioHeader, ScenarioSpec, STRUCTURAL_GLYPHS};
use crate::engine::WinCondition;
use crate::world::{Catalog, ItemCategory, WorldConfig};

pub(crate) fn default_catalog() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(|| WorldConfig::default().catalog().expect("built-in catalog is valid"))
}

/// Parses against the built-in catalog.
pub fn parse_scenario(text: &str) -> Result<ScenarioSpec, ScenarioError> {
    parse_scenario_with(text, default_catalog())
}

fn entity_exists(catalog: &Catalog, id: &str) -> bool {
    catalog.monster(id).is_some() || catalog.item(id).is_some()
}

fn parse_win(value: &str) -> Option<WinCondition> {
    match value {
        "orb_exit" => Some(WinCondition::OrbExit),
        "reach_orb" => Some(WinCondition::ReachOrb),
        "kill_all" => Some(WinCondition::KillAll),
        _ => None,
    }
}

enum Section {
    Header,
    Map,
    AfterMap,
    Legend,
}

/// Parses and validates a scenario, resolving glyphs against `catalog`.
pub fn parse_scenario_with(text: &str, catalog: &Catalog) -> Result<ScenarioSpec, ScenarioError> {
    let mut name = None;
    let mut header = ScenarioHeader::default();
    let mut seen_keys: BTreeMap<String, usize> = BTreeMap::new();
    let mut grid: Vec<(usize, String)> = Vec::new();
    let mut legend = BTreeMap::new();
    let mut map_line = None;
    let mut section = Section::Header;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let trimmed = line.trim();
        match section {
            Section::Header => {
                if trimmed.is_empty() || trimmed.starts_with(';') {
                    continue;
                }
                if trimmed == "map:" {
                    map_line = Some(line_no);
                    section = Section::Map;
                    continue;
                }
                let (key, value) = trimmed
                    .split_once(':')
                    .ok_or_else(|| ScenarioError::at(line_no, 1, format!("expected `key: value`, found `{trimmed}`")))?;
                let (key, value) = (key.trim(), value.trim());
                let value_col = line.find(value).map_or(1, |b| line[..b].chars().count() + 1);
                if let Some(first) = seen_keys.insert(key.to_string(), line_no) {
                    return Err(ScenarioError::at(line_no, 1, format!("duplicate key `{key}` (first set on line {first})")));
                }
                let bad = |what: &str| ScenarioError::at(line_no, value_col, format!("invalid {what} `{value}`"));
                match key {
                    "name" => name = Some(value.to_string()),
                    "seed" => header.default_seed = value.parse().map_err(|_| bad("seed"))?,
                    "shifting" => header.shifting = value.parse().map_err(|_| bad("boolean"))?,
                    "turn_limit" => header.turn_limit = Some(value.parse().map_err(|_| bad("turn limit"))?),
                    "win" => header.win = parse_win(value).ok_or_else(|| bad("win condition"))?,
                    "inventory" => {
                        for id in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                            if catalog.item(id).is_none() {
                                return Err(ScenarioError::at(line_no, value_col, format!("unknown item `{id}`")));
                            }
                            header.inventory.push(id.to_string());
                        }
                    }
                    _ => return Err(ScenarioError::at(line_no, 1, format!("unknown header key `{key}`"))),
                }
            }
            Section::Map => {
                if trimmed == "legend:" {
                    section = Section::Legend;
                } else if trimmed.is_empty() {
                    section = Section::AfterMap;
                } else {
                    grid.push((line_no, line.trim_end().to_string()));
                }
            }
            Section::AfterMap => {
                if trimmed == "legend:" {
                    section = Section::Legend;
                } else if !trimmed.is_empty() {
                    return Err(ScenarioError::at(line_no, 1, "unexpected text after the map"));
                }
            }
            Section::Legend => {
                if trimmed.is_empty() || trimmed.starts_with(';') {
                    continue;
                }
                let (glyph, id) = trimmed
                    .split_once('=')
                    .ok_or_else(|| ScenarioError::at(line_no, 1, format!("expected `glyph = entity`, found `{trimmed}`")))?;
                let mut chars = glyph.trim().chars();
                let (Some(glyph), None) = (chars.next(), chars.next()) else {
                    return Err(ScenarioError::at(line_no, 1, "legend glyph must be a single character"));
                };
                let id = id.trim();
                if STRUCTURAL_GLYPHS.contains(&glyph) || glyph.is_whitespace() {
                    return Err(ScenarioError::at(line_no, 1, format!("glyph `{glyph}` cannot be redefined")));
                }
                if !entity_exists(catalog, id) {
                    return Err(ScenarioError::at(line_no, 1, format!("unknown entity `{id}`")));
                }
                if legend.insert(glyph, id.to_string()).is_some() {
                    return Err(ScenarioError::at(line_no, 1, format!("glyph `{glyph}` defined twice")));
                }
            }
        }
    }

    let Some(map_line) = map_line else {
        return Err(ScenarioError::at(text.lines().count().max(1), 1, "missing `map:` section"));
    };
    validate_grid(&grid, map_line, &legend, catalog)?;
    Ok(ScenarioSpec {
        name: name.unwrap_or_else(|| "scenario".to_string()),
        header,
        grid: grid.into_iter().map(|(_, r)| r).collect(),
        legend,
    })
}

fn glyph_known(glyph: char, legend: &BTreeMap<char, String>, catalog: &Catalog) -> bool {
    if legend.contains_key(&glyph) || STRUCTURAL_GLYPHS.contains(&glyph) {
        return true;
    }
    match glyph {
        '!' => catalog.first_of(ItemCategory::Potion).is_some(),
        '?' => catalog.first_of(ItemCategory::Scroll).is_some(),
        '(' => catalog.first_of(ItemCategory::Weapon).is_some(),
        g if g.is_ascii_lowercase() => catalog.monster_by_glyph(g).is_some(),
        _ => false,
    }
}

fn validate_grid(
    grid: &[(usize, String)],
    map_line: usize,
    legend: &BTreeMap<char, String>,
    catalog: &Catalog,
) -> Result<(), ScenarioError> {
    let Some((_, first)) = grid.first() else {
        return Err(ScenarioError::at(map_line, 1, "empty map"));
    };
    let width = first.chars().count();
    for (line, row) in grid {
        let len = row.chars().count();
        if len != width {
            return Err(ScenarioError::at(*line, len.min(width) + 1, format!("row has {len} columns, expected {width}")));
        }
    }
    let mut starts = Vec::new();
    for (r, (line, row)) in grid.iter().enumerate() {
        for (c, glyph) in row.chars().enumerate() {
            if !glyph_known(glyph, legend, catalog) {
                return Err(ScenarioError::at(*line, c + 1, format!("unknown glyph `{glyph}`")));
            }
            let border = r == 0 || r + 1 == grid.len() || c == 0 || c + 1 == width;
            if border && glyph != '#' {
                return Err(ScenarioError::at(*line, c + 1, "map is not enclosed by `#`"));
            }
            if glyph == '@' {
                starts.push((*line, c + 1));
            }
        }
    }
    match starts.as_slice() {
        [] => Err(ScenarioError::at(map_line, 1, "map has no player start `@`")),
        [_] => Ok(()),
        [first, rest @ ..] => {
            let others: Vec<String> = rest.iter().map(|(l, c)| format!("line {l} column {c}")).collect();
            Err(ScenarioError::at(
                rest[0].0,
                rest[0].1,
                format!("multiple player starts: line {} column {} and {}", first.0, first.1, others.join(" and ")),
            ))
        }
    }
}
