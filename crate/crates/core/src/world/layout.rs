use serde::{Deserialize, Serialize};

use super::config::DungeonConfig;
use super::level::LevelId;
use super::WorldError;

pub const MAIN_BRANCH: &str = "D";
pub const ZOT_BRANCH: &str = "Zot";

/// One level of the dungeon graph, before any terrain exists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelDescriptor {
    pub id: LevelId,
    /// `Branch:n`, e.g. `D:3` or `Lair:1`.
    pub name: String,
    pub branch: String,
    /// Absolute dungeon depth (branch levels continue below their entry).
    pub depth: u32,
    pub rune: bool,
    pub orb: bool,
    pub shifting: bool,
    /// Destination of the up staircase; `None` on D:1 means the dungeon exit.
    pub up: Option<LevelId>,
    pub down: Vec<LevelId>,
}

impl LevelDescriptor {
    pub fn is_zot(&self) -> bool {
        self.branch == ZOT_BRANCH
    }
}

/// Lays out main levels D:1..D:n, then each branch in config order, then Zot:1.
///
/// Branch termini flagged `rune` each hold one rune; the remaining runes go on
/// the deepest main levels, one per level. The orb sits on Zot:1, reachable
/// only from the deepest main level.
pub fn dungeon_layout(config: &DungeonConfig) -> Result<Vec<LevelDescriptor>, WorldError> {
    config.validate()?;
    let n = config.main_depth;
    let branch_levels: u32 = config.branches.iter().map(|b| b.length).sum();
    let total = n + branch_levels + 1;
    if total > u16::MAX as u32 {
        return Err(WorldError::Config(format!("{total} levels is too many")));
    }

    let mut levels: Vec<LevelDescriptor> = (0..n)
        .map(|i| LevelDescriptor {
            id: LevelId(i as u16),
            name: format!("{MAIN_BRANCH}:{}", i + 1),
            branch: MAIN_BRANCH.to_string(),
            depth: i + 1,
            rune: false,
            orb: false,
            shifting: false,
            up: i.checked_sub(1).map(|p| LevelId(p as u16)),
            down: if i + 1 < n { vec![LevelId(i as u16 + 1)] } else { Vec::new() },
        })
        .collect();

    for branch in &config.branches {
        let entry = LevelId(branch.entry_depth as u16 - 1);
        for j in 0..branch.length {
            let id = LevelId(levels.len() as u16);
            let up = if j == 0 { entry } else { LevelId(id.0 - 1) };
            if j == 0 {
                levels[entry.0 as usize].down.push(id);
            }
            levels.push(LevelDescriptor {
                id,
                name: format!("{}:{}", branch.name, j + 1),
                branch: branch.name.clone(),
                depth: branch.entry_depth + j + 1,
                rune: branch.rune && j + 1 == branch.length,
                orb: false,
                shifting: branch.shifting,
                up: Some(up),
                down: if j + 1 < branch.length { vec![LevelId(id.0 + 1)] } else { Vec::new() },
            });
        }
    }

    let deepest = LevelId(n as u16 - 1);
    let zot = LevelId(levels.len() as u16);
    levels[deepest.0 as usize].down.push(zot);
    levels.push(LevelDescriptor {
        id: zot,
        name: format!("{ZOT_BRANCH}:1"),
        branch: ZOT_BRANCH.to_string(),
        depth: n + 1,
        rune: false,
        orb: true,
        shifting: false,
        up: Some(deepest),
        down: Vec::new(),
    });

    let branch_runes = levels.iter().filter(|l| l.rune).count() as u32;
    for k in 0..(config.rune_count - branch_runes) {
        levels[(n - 1 - k) as usize].rune = true;
    }
    Ok(levels)
}
