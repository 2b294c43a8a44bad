use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::history::{EpisodeHistory, Outcome};
use super::MetricsError;
use crate::engine::Event;

pub const SCORE_PER_RUNE: u64 = 250;
pub const SCORE_FOR_WIN: u64 = 5000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub won: bool,
    pub truncated: bool,
    pub runes_collected: usize,
    pub max_depth_reached: u32,
    pub levels_visited: usize,
    pub turns: f64,
    pub actions: usize,
    pub monsters_killed: usize,
    pub xp_earned: u32,
    pub score: u64,
    pub wall_time_s: f64,
}

pub fn score(xp_earned: u32, runes: usize, won: bool) -> u64 {
    xp_earned as u64 + SCORE_PER_RUNE * runes as u64 + if won { SCORE_FOR_WIN } else { 0 }
}

/// Folds a sealed history into its report. Uses the records only.
pub fn episode_metrics(history: &EpisodeHistory) -> Result<MetricsReport, MetricsError> {
    let end = history.end().ok_or(MetricsError::Unsealed)?;
    let header = history.header();
    let mut levels = BTreeSet::from([header.start_level]);
    let mut max_depth = header.start_depth;
    let mut actions = 0;
    let mut killed = 0;
    let mut runes = 0;
    let mut xp = 0;
    for step in history.steps() {
        actions += 1;
        levels.insert(step.level);
        max_depth = max_depth.max(step.depth);
        killed += step.events.iter().filter(|e| matches!(e, Event::Killed { .. })).count();
        runes = step.runes;
        xp = step.xp_earned;
    }
    let won = end.outcome == Outcome::Won;
    Ok(MetricsReport {
        won,
        truncated: end.outcome == Outcome::Truncated,
        runes_collected: runes,
        max_depth_reached: max_depth,
        levels_visited: levels.len(),
        turns: end.turn,
        actions,
        monsters_killed: killed,
        xp_earned: xp,
        score: score(xp, runes, won),
        wall_time_s: end.wall_time_s,
    })
}
