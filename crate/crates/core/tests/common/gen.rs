//! Seeded generators for scenarios and action scripts.

use crawlbench::engine::{Action, Skill};
use crawlbench::geom::{Direction, Position};
use crawlbench::rng::RngStream;
use crawlbench::world::WorldConfig;

pub fn rng(seed: u64) -> RngStream {
    RngStream::new(seed, 0x7e57)
}

fn monster_glyphs() -> Vec<char> {
    WorldConfig::default().monsters.iter().map(|m| m.glyph).filter(|g| g.is_ascii_lowercase()).collect()
}

fn entity_ids() -> Vec<String> {
    let w = WorldConfig::default();
    w.monsters.iter().map(|m| m.id.clone()).chain(w.items.iter().map(|i| i.id.clone())).collect()
}

/// A random enclosed grid with exactly one `@`; `interior` chooses the
/// other cells.
pub fn grid(rng: &mut RngStream, rows: u32, cols: u32, mut interior: impl FnMut(&mut RngStream) -> char) -> Vec<String> {
    let start = (1 + rng.below(rows as u64 - 2) as u32, 1 + rng.below(cols as u64 - 2) as u32);
    (0..rows)
        .map(|r| {
            (0..cols)
                .map(|c| {
                    if r == 0 || c == 0 || r + 1 == rows || c + 1 == cols {
                        '#'
                    } else if (r, c) == start {
                        '@'
                    } else {
                        interior(rng)
                    }
                })
                .collect()
        })
        .collect()
}

/// Scenario source exercising every header key, comments, blank lines and
/// legend overrides, in no particular canonical form.
pub fn random_scenario_text(seed: u64) -> String {
    let mut rng = rng(seed);
    let monsters = monster_glyphs();
    let ids = entity_ids();
    let letters: Vec<char> = ('A'..='Z').filter(|c| !"WL".contains(*c)).collect();
    let mut legend = Vec::new();
    for _ in 0..rng.below(4) {
        let g = letters[rng.index(letters.len())];
        if !legend.iter().any(|(l, _)| *l == g) {
            legend.push((g, ids[rng.index(ids.len())].clone()));
        }
    }
    let mut palette: Vec<char> = ".......#~WL!?(0*<>".chars().chain(monsters).collect();
    palette.extend(legend.iter().map(|(g, _)| *g));
    let rows = 3 + rng.below(10) as u32;
    let cols = 3 + rng.below(18) as u32;
    let cells = grid(&mut rng, rows, cols, |r| palette[r.index(palette.len())]);

    let mut out = String::new();
    if rng.chance(0.5) {
        out += "; generated\n\n";
    }
    out += &format!("name: gen_{seed}\n");
    out += &format!("seed: {}\n", rng.below(1 << 40));
    out += &format!("shifting: {}\n", rng.chance(0.3));
    if rng.chance(0.6) {
        out += &format!("turn_limit: {}\n", 1 + rng.below(5000));
    }
    out += ["win: orb_exit\n", "win: reach_orb\n", "win: kill_all\n"][rng.index(3)];
    if rng.chance(0.4) {
        let kit = ["dagger", "axe", "mace", "curing", "blinking", "flaming_sword"];
        let n = 1 + rng.index(3);
        let chosen: Vec<&str> = (0..n).map(|_| kit[rng.index(kit.len())]).collect();
        out += &format!("inventory: {}\n", chosen.join(", "));
    }
    out += "map:\n";
    for row in &cells {
        out += row;
        out += "\n";
    }
    if !legend.is_empty() {
        out += "\nlegend:\n";
        for (g, id) in &legend {
            out += &format!("{g} = {id}\n");
        }
    }
    out
}

/// A monster-free single room with scattered walls and items, for planning.
pub fn static_scenario_text(seed: u64) -> String {
    let mut rng = rng(seed ^ 0x5747);
    let rows = 5 + rng.below(6) as u32;
    let cols = 5 + rng.below(8) as u32;
    let cells = grid(&mut rng, rows, cols, |r| match r.below(20) {
        0..=2 => '#',
        3 => ['!', '?', '(', '*'][r.index(4)],
        _ => '.',
    });
    let mut cells = cells;
    // One orb on a floor cell.
    let floors: Vec<(usize, usize)> = cells
        .iter()
        .enumerate()
        .flat_map(|(r, row)| row.chars().enumerate().filter(|(_, g)| *g == '.').map(move |(c, _)| (r, c)))
        .collect();
    if !floors.is_empty() {
        let (r, c) = floors[rng.index(floors.len())];
        let mut row: Vec<char> = cells[r].chars().collect();
        row[c] = '0';
        cells[r] = row.into_iter().collect();
    }
    format!("name: static_{seed}\nseed: {seed}\nshifting: false\nwin: orb_exit\nmap:\n{}\n", cells.join("\n"))
}

/// A fixed random sequence of actions, legal or not.
pub fn random_script(seed: u64, len: usize) -> Vec<Action> {
    let mut rng = rng(seed ^ 0x5c21);
    (0..len)
        .map(|_| {
            let dir = Direction::ALL[rng.index(8)];
            match rng.below(20) {
                0..=9 => Action::Move { dir },
                10 | 11 => Action::Attack { dir },
                12 => Action::Pickup,
                13 => Action::Descend,
                14 => Action::Ascend,
                15 => Action::Quaff { slot: rng.index(4) },
                16 => Action::Wield { slot: rng.index(4) },
                17 => Action::SpendXp { skill: Skill::ALL[rng.index(Skill::ALL.len())] },
                18 => Action::Read { slot: rng.index(4), target: Some(Position::new(rng.below(30) as u32, rng.below(40) as u32)) },
                _ => Action::Wait,
            }
        })
        .collect()
}
